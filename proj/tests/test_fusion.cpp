#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hsi/error.hpp"
#include "hsi/fusion/fusion.hpp"
#include "hsi/phantom/scene.hpp"
#include "hsi/phantom/sensor.hpp"
#include "hsi/phantom/spectra.hpp"
#include "hsi/preprocess/calibrate.hpp"
#include "hsi/preprocess/demosaic.hpp"
#include "hsi/rng.hpp"

using namespace hsi;
using namespace hsi::fusion;

namespace {

/// Smooth random reflectance cube (sum of low-frequency waves) so NCC has
/// structure to lock onto.
Hypercube textured_cube(int h, int w, const BandSet& bands, uint64_t seed) {
    Rng rng(seed);
    const double f1 = rng.uniform(1.0, 3.0);
    const double f2 = rng.uniform(1.0, 3.0);
    const double p1 = rng.uniform(0.0, 6.28);
    const double p2 = rng.uniform(0.0, 6.28);
    Hypercube cube(h, w, bands, Hypercube::Kind::Reflectance);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double base = 0.5 + 0.2 * std::sin(f1 * r * 0.13 + p1) *
                                          std::cos(f2 * c * 0.17 + p2) +
                                0.1 * std::sin(0.05 * (r + 2.0 * c) + p1);
            for (int b = 0; b < bands.count(); ++b) {
                cube.at(r, c, b) = static_cast<float>(base * (0.8 + 0.008 * b));
            }
        }
    }
    return cube;
}

/// Two views of a wider field, planted shift (dx, dy): content of B equals A
/// translated by (dx, dy).
std::pair<Hypercube, Hypercube> planted_pair(int h, int w, int dx, int dy, uint64_t seed,
                                             double noise_sigma = 0.0) {
    const int margin = 20;
    Hypercube field = textured_cube(h + 2 * margin, w + 2 * margin, BandSet::camera_a(), seed);
    Hypercube a = crop(field, margin, margin, h, w);
    Hypercube b = crop(field, margin - dy, margin - dx, h, w);
    if (noise_sigma > 0.0) {
        Rng rng(seed ^ 0xABCDull);
        for (auto& v : a.data) v += static_cast<float>(noise_sigma * rng.normal());
        for (auto& v : b.data) v += static_cast<float>(noise_sigma * rng.normal());
    }
    a.kind = Hypercube::Kind::Reflectance;
    b.kind = Hypercube::Kind::Reflectance;
    return {std::move(a), std::move(b)};
}

}  // namespace

TEST_CASE("planted shift (7, 0) is recovered exactly") {
    const auto [a, b] = planted_pair(80, 100, 7, 0, 5);
    const PixelShift shift = estimate_translation(a, b, 12);
    CHECK(shift == PixelShift{7, 0});
}

TEST_CASE("identical cubes give shift (0, 0)") {
    const Hypercube a = textured_cube(60, 60, BandSet::camera_b(), 9);
    const PixelShift shift = estimate_translation(a, a, 10);
    CHECK(shift == PixelShift{0, 0});
}

TEST_CASE("shift (3, -2) under noise sigma 0.01 is recovered") {
    const auto [a, b] = planted_pair(80, 80, 3, -2, 31, 0.01);
    const PixelShift shift = estimate_translation(a, b, 8);
    CHECK(shift == PixelShift{3, -2});
}

TEST_CASE("estimation is thread-count independent") {
    const auto [a, b] = planted_pair(60, 70, -4, 5, 12, 0.005);
    CHECK(estimate_translation(a, b, 9, 1) == estimate_translation(a, b, 9, 3));
}

TEST_CASE("oversized search radius is rejected") {
    const Hypercube a = textured_cube(60, 60, BandSet::camera_a(), 3);
    CHECK_THROWS_AS(estimate_translation(a, a, 15), ContractError);  // 15 >= 60/4
}

TEST_CASE("constant images are degenerate for NCC") {
    Hypercube a(40, 40, BandSet::camera_a(), Hypercube::Kind::Reflectance, 0.5f);
    Hypercube b = a;
    CHECK_THROWS_AS(estimate_translation(a, b, 5), ValidationError);
}

TEST_CASE("raw cubes are rejected") {
    Hypercube a(40, 40, BandSet::camera_a(), Hypercube::Kind::Raw, 0.5f);
    CHECK_THROWS_AS(estimate_translation(a, a, 5), ContractError);
}

TEST_CASE("NCC shift is invariant to affine intensity changes") {
    const auto [a, b] = planted_pair(70, 90, 6, -3, 77, 0.002);
    const PixelShift reference = estimate_translation(a, b, 10);
    Rng rng(78);
    for (int trial = 0; trial < 5; ++trial) {
        const float gain = static_cast<float>(rng.uniform(0.2, 3.0));
        const float offset = static_cast<float>(rng.uniform(-0.3, 0.3));
        Hypercube scaled = a;
        for (auto& v : scaled.data) v = v * gain + offset;
        CHECK(estimate_translation(scaled, b, 10) == reference);
    }
}

TEST_CASE("fusion stacks 16 + 25 bands into the sorted 41-band union") {
    Hypercube a = textured_cube(50, 50, BandSet::camera_a(), 21);
    Hypercube b = textured_cube(50, 50, BandSet::camera_b(), 22);
    const Hypercube fused = fuse_cubes(a, b, {0, 0});
    CHECK(fused.bands.count() == 41);
    for (int i = 1; i < 41; ++i) {
        CHECK(fused.bands.center(i) >= fused.bands.center(i - 1));
    }

    // With no shift, every band is a verbatim copy per the sorted-union
    // permutation; B-native bands are bit-identical to B.
    const FusedBands layout = fuse_bands(a.bands, b.bands);
    for (int i = 0; i < 41; ++i) {
        const auto [cam, idx] = layout.source[static_cast<size_t>(i)];
        const Hypercube& src = cam == 0 ? a : b;
        for (int r = 0; r < 50; ++r) {
            for (int c = 0; c < 50; ++c) {
                REQUIRE(fused.at(r, c, i) == src.at(r, c, idx));
            }
        }
    }
    CHECK(fused.valid.size() == static_cast<size_t>(50) * 50);
    for (uint8_t v : fused.valid) CHECK(v == 1);
}

TEST_CASE("fusion marks uncovered pixels invalid and zeroes A's bands there") {
    Hypercube a = textured_cube(50, 60, BandSet::camera_a(), 31);
    Hypercube b = textured_cube(50, 60, BandSet::camera_b(), 32);
    const PixelShift shift{-7, 2};
    const Hypercube fused = fuse_cubes(a, b, shift);
    const FusedBands layout = fuse_bands(a.bands, b.bands);
    int invalid = 0;
    for (int r = 0; r < 50; ++r) {
        for (int c = 0; c < 60; ++c) {
            const bool expect_valid = (r - shift.dy) >= 0 && (r - shift.dy) < 50 &&
                                      (c - shift.dx) >= 0 && (c - shift.dx) < 60;
            CHECK(fused.pixel_valid(r, c) == expect_valid);
            if (!expect_valid) {
                ++invalid;
                for (int i = 0; i < 41; ++i) {
                    const auto [cam, idx] = layout.source[static_cast<size_t>(i)];
                    if (cam == 0) {
                        REQUIRE(fused.at(r, c, i) == 0.0f);
                    } else {
                        REQUIRE(fused.at(r, c, i) == b.at(r, c, idx));
                    }
                }
            }
        }
    }
    CHECK(invalid == 50 * 60 - (50 - 2) * (60 - 7));
}

TEST_CASE("fusion rejects shifts that leave less than a 31x31 valid area") {
    Hypercube a = textured_cube(40, 40, BandSet::camera_a(), 41);
    Hypercube b = textured_cube(40, 40, BandSet::camera_b(), 42);
    CHECK_THROWS_AS(fuse_cubes(a, b, {10, 0}), ValidationError);
    CHECK_NOTHROW(fuse_cubes(a, b, {9, 0}));
}

TEST_CASE("fusion requires the camera default band sets") {
    Hypercube a = textured_cube(40, 40, BandSet::camera_b(), 1);
    Hypercube b = textured_cube(40, 40, BandSet::camera_b(), 2);
    CHECK_THROWS_AS(fuse_cubes(a, b, {0, 0}), ContractError);
}

TEST_CASE("specular masks merge through the shift") {
    BoolMask spec_a(10, 10), spec_b(10, 10);
    spec_a.set(2, 3, true);
    spec_b.set(7, 7, true);
    const BoolMask merged = merge_specular(spec_a, spec_b, {1, 2});
    CHECK(merged.at(7, 7));   // B's flag stays in place
    CHECK(merged.at(4, 4));   // A's flag lands at (2+2, 3+1)
    CHECK(merged.rate() == doctest::Approx(2.0 / 100.0));
}

TEST_CASE("noise-free phantom pipeline reconstructs the truth through fusion") {
    // Small end-to-end oracle; the acceptance suite runs the 400x400 version.
    using namespace hsi::phantom;
    using namespace hsi::preprocess;
    const auto model = TissueSpectrumModel::default_model(0.0f, 0.0f);
    const int disparity = 6;
    SceneSpec spec;
    spec.height = 80;
    spec.width = 80 + disparity;
    spec.subject_id = 1;
    spec.seed = 606;
    spec.regions.push_back({TissueClass::Muscle, Region::Shape::Rect, 0, 0, 40, 86, 0});
    spec.regions.push_back({TissueClass::Nerve, Region::Shape::Rect, 40, 0, 40, 40, 0});
    spec.regions.push_back({TissueClass::Gland, Region::Shape::Rect, 40, 40, 40, 46, 0});
    const auto [truth, mask] = generate_scene(spec, model);

    std::vector<float> gain_a(16), gain_b(25);
    Rng rng(607);
    for (auto& g : gain_a) g = static_cast<float>(rng.uniform(0.985, 1.0));
    for (auto& g : gain_b) g = static_cast<float>(rng.uniform(0.985, 1.0));

    auto reflectance = [&](Camera cam, std::span<const float> gain) {
        const MosaicFrame frame = render_camera(truth, cam, disparity, gain);
        const auto [white, dark] =
            render_references(cam, gain, frame.height, frame.width);
        auto [cube, specular] = calibrate(demosaic(frame), demosaic(white), demosaic(dark));
        return cube;
    };
    const Hypercube cube_a = reflectance(Camera::A, gain_a);
    const Hypercube cube_b = reflectance(Camera::B, gain_b);

    // Reconstruction is checked against the ground-truth shift. The NCC
    // estimate locks the disparity axis exactly but can sit a row or two off
    // vertically on piecewise-constant scenes (the two mosaics smear region
    // edges with different vertical phases).
    const PixelShift estimated = estimate_translation(cube_a, cube_b, 10);
    CHECK(estimated.dx == -disparity);
    CHECK(std::abs(estimated.dy) <= 2);

    const PixelShift shift{-disparity, 0};
    const Hypercube fused = fuse_cubes(cube_a, cube_b, shift);
    const Hypercube truth_b = crop(truth, 0, disparity, 80, 80);
    const AnnotationMask mask_b = crop(mask, 0, disparity, 80, 80);

    // Compare away from label boundaries (one mosaic period of the coarser
    // camera) and only where fusion kept A coverage.
    const int guard = 5;
    double max_err = 0.0;
    int compared = 0;
    for (int r = guard; r < 80 - guard; ++r) {
        for (int c = guard; c < 80 - guard; ++c) {
            if (!fused.pixel_valid(r, c)) continue;
            const uint8_t label = mask_b.at(r, c);
            bool interior = label != 0;
            for (int dr = -guard; interior && dr <= guard; ++dr) {
                for (int dc = -guard; dc <= guard; ++dc) {
                    if (mask_b.at(r + dr, c + dc) != label) {
                        interior = false;
                        break;
                    }
                }
            }
            if (!interior) continue;
            ++compared;
            for (int b = 0; b < 41; ++b) {
                max_err = std::max(max_err, static_cast<double>(std::abs(
                                                fused.at(r, c, b) - truth_b.at(r, c, b))));
            }
        }
    }
    CHECK(compared > 1000);
    CHECK(max_err < 1e-5);
}
