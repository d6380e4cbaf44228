#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hsi/bandset.hpp"
#include "hsi/types.hpp"

namespace hsi {

/// H x W x B reflectance (or raw-count) volume, band-innermost so one pixel's
/// spectrum is contiguous. Immutable by convention once built; all pipeline
/// stages return fresh cubes.
struct Hypercube {
    enum class Kind : uint16_t { Raw = 0, Reflectance = 1 };

    int height = 0;
    int width = 0;
    BandSet bands;
    Kind kind = Kind::Raw;
    std::vector<float> data;  // height*width*bands.count()

    /// Fusion validity flags (empty = every pixel valid). Kept out of the
    /// payload so the data stays NaN-free; persisted as an HSB1 sidecar.
    std::vector<uint8_t> valid;

    Hypercube() = default;
    Hypercube(int h, int w, BandSet b, Kind k, float fill = 0.0f)
        : height(h),
          width(w),
          bands(std::move(b)),
          kind(k),
          data(static_cast<size_t>(h) * w * bands.count(), fill) {}

    size_t pixel_index(int r, int c) const { return static_cast<size_t>(r) * width + c; }
    size_t index(int r, int c, int b) const {
        return pixel_index(r, c) * static_cast<size_t>(bands.count()) + static_cast<size_t>(b);
    }

    float at(int r, int c, int b) const { return data[index(r, c, b)]; }
    float& at(int r, int c, int b) { return data[index(r, c, b)]; }

    std::span<const float> spectrum(int r, int c) const {
        return {data.data() + index(r, c, 0), static_cast<size_t>(bands.count())};
    }

    bool pixel_valid(int r, int c) const {
        return valid.empty() || valid[pixel_index(r, c)] != 0;
    }

    size_t value_count() const { return data.size(); }

    /// Shape/finiteness invariants; throws ValidationError.
    void validate() const;
};

/// Axis-aligned sub-cube / sub-mask, bounds-checked. Validity flags are
/// cropped along.
Hypercube crop(const Hypercube& cube, int r0, int c0, int height, int width);
AnnotationMask crop(const AnnotationMask& mask, int r0, int c0, int height, int width);
BoolMask crop(const BoolMask& mask, int r0, int c0, int height, int width);

}  // namespace hsi
