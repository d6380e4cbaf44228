#include "hsi/bandset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hsi/error.hpp"

namespace hsi {

BandSet::BandSet(std::vector<float> centers_nm) : centers_(std::move(centers_nm)) {
    for (size_t i = 1; i < centers_.size(); ++i) {
        if (centers_[i] < centers_[i - 1]) {
            throw ValidationError("BandSet: non-monotone band centers at index " +
                                  std::to_string(i));
        }
    }
    for (float c : centers_) {
        if (!std::isfinite(c) || c <= 0.0f) {
            throw ValidationError("BandSet: band centers must be finite positive wavelengths");
        }
    }
}

namespace {
std::vector<float> even_span(double lo, double hi, int n) {
    std::vector<float> centers(static_cast<size_t>(n));
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (int i = 0; i < n; ++i) {
        centers[static_cast<size_t>(i)] = static_cast<float>(lo + step * i);
    }
    return centers;
}
}  // namespace

BandSet BandSet::camera_a() {
    return BandSet(even_span(400.0, 650.0, 16));
}

BandSet BandSet::camera_b() {
    return BandSet(even_span(475.0, 975.0, 25));
}

int BandSet::nearest(float nm) const {
    int best = 0;
    float best_d = std::abs(centers_[0] - nm);
    for (int i = 1; i < count(); ++i) {
        const float d = std::abs(centers_[static_cast<size_t>(i)] - nm);
        if (d < best_d) {
            best = i;
            best_d = d;
        }
    }
    return best;
}

bool BandSet::strictly_increasing() const {
    for (size_t i = 1; i < centers_.size(); ++i) {
        if (centers_[i] <= centers_[i - 1]) return false;
    }
    return true;
}

FusedBands fuse_bands(const BandSet& a, const BandSet& b) {
    struct Entry {
        float center;
        int camera;
        int index;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<size_t>(a.count() + b.count()));
    for (int i = 0; i < a.count(); ++i) entries.push_back({a.center(i), 0, i});
    for (int i = 0; i < b.count(); ++i) entries.push_back({b.center(i), 1, i});
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& x, const Entry& y) { return x.center < y.center; });

    FusedBands fused;
    std::vector<float> centers;
    centers.reserve(entries.size());
    fused.source.reserve(entries.size());
    for (const Entry& e : entries) {
        centers.push_back(e.center);
        fused.source.emplace_back(e.camera, e.index);
    }
    fused.bands = BandSet(std::move(centers));
    return fused;
}

}  // namespace hsi
