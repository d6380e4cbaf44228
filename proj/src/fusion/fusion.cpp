#include "hsi/fusion/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hsi/error.hpp"
#include "hsi/parallel.hpp"

namespace hsi::fusion {

namespace {

constexpr float kOverlapLow = 475.0f;
constexpr float kOverlapHigh = 650.0f;

/// Average over the bands inside [lo, hi]; the spectral common ground of the
/// two cameras.
std::vector<double> overlap_mean_image(const Hypercube& cube, float lo, float hi,
                                       const char* which) {
    std::vector<int> picked;
    for (int b = 0; b < cube.bands.count(); ++b) {
        const float c = cube.bands.center(b);
        if (c >= lo && c <= hi) picked.push_back(b);
    }
    if (picked.empty()) {
        throw ContractError(std::string("estimate_translation: cube ") + which +
                            " has no bands in the 475-650 nm overlap");
    }
    std::vector<double> mean(static_cast<size_t>(cube.height) * cube.width);
    for (int r = 0; r < cube.height; ++r) {
        for (int c = 0; c < cube.width; ++c) {
            double acc = 0.0;
            for (int b : picked) acc += cube.at(r, c, b);
            mean[static_cast<size_t>(r) * cube.width + c] = acc / picked.size();
        }
    }
    return mean;
}

bool is_constant(const std::vector<double>& img) {
    for (double v : img) {
        if (v != img[0]) return false;
    }
    return true;
}

double ncc_score(const std::vector<double>& a, int ah, int aw, const std::vector<double>& b,
                 int bh, int bw, int dx, int dy) {
    // Overlap in B coordinates; A is read at (r - dy, c - dx).
    const int r0 = std::max(0, dy);
    const int r1 = std::min(bh, ah + dy);
    const int c0 = std::max(0, dx);
    const int c1 = std::min(bw, aw + dx);
    const int64_t n = static_cast<int64_t>(r1 - r0) * (c1 - c0);
    if (n < 9) return -2.0;

    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    for (int r = r0; r < r1; ++r) {
        const double* arow = &a[static_cast<size_t>(r - dy) * aw + (c0 - dx)];
        const double* brow = &b[static_cast<size_t>(r) * bw + c0];
        for (int c = 0; c < c1 - c0; ++c) {
            const double av = arow[c];
            const double bv = brow[c];
            sa += av;
            sb += bv;
            saa += av * av;
            sbb += bv * bv;
            sab += av * bv;
        }
    }
    const double nd = static_cast<double>(n);
    const double var_a = saa - sa * sa / nd;
    const double var_b = sbb - sb * sb / nd;
    if (var_a <= 0.0 || var_b <= 0.0) return -2.0;
    const double cov = sab - sa * sb / nd;
    return cov / std::sqrt(var_a * var_b);
}

}  // namespace

PixelShift estimate_translation(const Hypercube& cube_a, const Hypercube& cube_b,
                                int search_radius, int threads) {
    if (cube_a.kind != Hypercube::Kind::Reflectance ||
        cube_b.kind != Hypercube::Kind::Reflectance) {
        throw ContractError("estimate_translation: inputs must be reflectance cubes");
    }
    if (search_radius < 0) throw ContractError("estimate_translation: negative search radius");
    const int min_dim = std::min({cube_a.height, cube_a.width, cube_b.height, cube_b.width});
    if (search_radius >= min_dim / 4) {
        throw ContractError("estimate_translation: search radius " +
                            std::to_string(search_radius) + " >= min(H, W)/4 = " +
                            std::to_string(min_dim / 4));
    }

    const auto mean_a = overlap_mean_image(cube_a, kOverlapLow, kOverlapHigh, "A");
    const auto mean_b = overlap_mean_image(cube_b, kOverlapLow, kOverlapHigh, "B");
    if (is_constant(mean_a) || is_constant(mean_b)) {
        throw ValidationError("estimate_translation: degenerate input (constant image), "
                              "NCC undefined");
    }

    // Candidates in tie-break order: closest shift first.
    struct Candidate {
        int dx, dy;
    };
    std::vector<Candidate> candidates;
    const int side = 2 * search_radius + 1;
    candidates.reserve(static_cast<size_t>(side) * side);
    for (int dy = -search_radius; dy <= search_radius; ++dy) {
        for (int dx = -search_radius; dx <= search_radius; ++dx) {
            candidates.push_back({dx, dy});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& l, const Candidate& r) {
        const int ml = std::abs(l.dx) + std::abs(l.dy);
        const int mr = std::abs(r.dx) + std::abs(r.dy);
        if (ml != mr) return ml < mr;
        if (l.dy != r.dy) return l.dy < r.dy;
        return l.dx < r.dx;
    });

    std::vector<double> scores(candidates.size());
    parallel_for(0, static_cast<int64_t>(candidates.size()), threads,
                 [&](int64_t lo, int64_t hi) {
                     for (int64_t i = lo; i < hi; ++i) {
                         scores[static_cast<size_t>(i)] =
                             ncc_score(mean_a, cube_a.height, cube_a.width, mean_b,
                                       cube_b.height, cube_b.width, candidates[static_cast<size_t>(i)].dx,
                                       candidates[static_cast<size_t>(i)].dy);
                     }
                 });

    size_t best = 0;
    for (size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    if (scores[best] <= -2.0) {
        throw ValidationError("estimate_translation: no candidate shift with usable overlap");
    }
    return {candidates[best].dx, candidates[best].dy};
}

Hypercube fuse_cubes(const Hypercube& cube_a, const Hypercube& cube_b, PixelShift shift) {
    cube_a.validate();
    cube_b.validate();
    if (cube_a.bands != BandSet::camera_a() || cube_b.bands != BandSet::camera_b()) {
        throw ContractError("fuse_cubes: inputs must carry the camera default band sets");
    }
    if (cube_a.height != cube_b.height || cube_a.width != cube_b.width) {
        throw ContractError("fuse_cubes: camera cubes must share dimensions");
    }
    const int height = cube_b.height;
    const int width = cube_b.width;
    const int valid_h = height - std::abs(shift.dy);
    const int valid_w = width - std::abs(shift.dx);
    if (valid_h < 31 || valid_w < 31) {
        throw ValidationError("fuse_cubes: shift (" + std::to_string(shift.dx) + ", " +
                              std::to_string(shift.dy) + ") leaves a valid area of " +
                              std::to_string(std::max(valid_w, 0)) + "x" +
                              std::to_string(std::max(valid_h, 0)) +
                              " < 31x31, unusable for patching");
    }

    const FusedBands fused = fuse_bands(cube_a.bands, cube_b.bands);
    Hypercube out(height, width, fused.bands, Hypercube::Kind::Reflectance);
    out.valid.assign(static_cast<size_t>(height) * width, 0);

    const int n_fused = fused.bands.count();
    const int a_bands = cube_a.bands.count();
    std::vector<int> slot_of_a(static_cast<size_t>(a_bands));
    std::vector<int> slot_of_b(static_cast<size_t>(cube_b.bands.count()));
    for (int i = 0; i < n_fused; ++i) {
        const auto [cam, idx] = fused.source[static_cast<size_t>(i)];
        (cam == 0 ? slot_of_a : slot_of_b)[static_cast<size_t>(idx)] = i;
    }

    for (int r = 0; r < height; ++r) {
        const int ra = r - shift.dy;
        for (int c = 0; c < width; ++c) {
            const int ca = c - shift.dx;
            float* dst = &out.data[out.index(r, c, 0)];
            const float* brow = &cube_b.data[cube_b.index(r, c, 0)];
            for (int k = 0; k < cube_b.bands.count(); ++k) {
                dst[slot_of_b[static_cast<size_t>(k)]] = brow[k];
            }
            const bool a_ok = ra >= 0 && ra < height && ca >= 0 && ca < width &&
                              cube_a.pixel_valid(ra, ca) && cube_b.pixel_valid(r, c);
            if (a_ok) {
                const float* arow = &cube_a.data[cube_a.index(ra, ca, 0)];
                for (int k = 0; k < a_bands; ++k) {
                    dst[slot_of_a[static_cast<size_t>(k)]] = arow[k];
                }
                out.valid[out.pixel_index(r, c)] = 1;
            }
        }
    }
    return out;
}

BoolMask merge_specular(const BoolMask& specular_a, const BoolMask& specular_b,
                        PixelShift shift) {
    if (specular_a.height != specular_b.height || specular_a.width != specular_b.width) {
        throw ContractError("merge_specular: mask dimensions differ");
    }
    BoolMask out = specular_b;
    for (int r = 0; r < out.height; ++r) {
        const int ra = r - shift.dy;
        if (ra < 0 || ra >= specular_a.height) continue;
        for (int c = 0; c < out.width; ++c) {
            const int ca = c - shift.dx;
            if (ca < 0 || ca >= specular_a.width) continue;
            if (specular_a.at(ra, ca)) out.set(r, c, true);
        }
    }
    return out;
}

}  // namespace hsi::fusion
