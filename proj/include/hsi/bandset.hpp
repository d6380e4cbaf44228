#pragma once

#include <utility>
#include <vector>

namespace hsi {

/// Ordered band-center wavelengths in nanometers.
///
/// Camera defaults are evenly spaced across the sensor intervals
/// (A: 16 bands over 400-650 nm, B: 25 bands over 475-975 nm, endpoints
/// included). The fused list is the sorted concatenation of both cameras
/// without de-duplication, so coincident centers (600 nm appears in both
/// cameras) are kept as distinct bands; fused sets are therefore
/// non-decreasing rather than strictly increasing.
class BandSet {
public:
    BandSet() = default;
    /// Validates non-decreasing order.
    explicit BandSet(std::vector<float> centers_nm);

    static BandSet camera_a();
    static BandSet camera_b();

    int count() const { return static_cast<int>(centers_.size()); }
    float center(int i) const { return centers_[static_cast<size_t>(i)]; }
    const std::vector<float>& centers() const { return centers_; }

    /// Index of the band whose center is closest to `nm`; lowest index wins ties.
    int nearest(float nm) const;

    bool strictly_increasing() const;

    bool operator==(const BandSet& other) const = default;

private:
    std::vector<float> centers_;
};

/// Fused band list plus provenance: source[i] = {camera (0=A,1=B), band index}.
/// Stable sort keeps camera A first on equal centers.
struct FusedBands {
    BandSet bands;
    std::vector<std::pair<int, int>> source;
};

FusedBands fuse_bands(const BandSet& a, const BandSet& b);

}  // namespace hsi
