#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "hsi/hypercube.hpp"
#include "hsi/types.hpp"

namespace hsi::evalviz {

struct RgbImage {
    int height = 0;
    int width = 0;
    std::vector<uint8_t> rgb;  // H*W*3

    uint8_t* pixel(int r, int c) { return &rgb[(static_cast<size_t>(r) * width + c) * 3]; }
    const uint8_t* pixel(int r, int c) const {
        return &rgb[(static_cast<size_t>(r) * width + c) * 3];
    }
};

/// Fixed class palette (RGB): Nerve gold, Gland sea green, Muscle firebrick,
/// Vein dark blue, Skin chocolate. Indexed by class code - 1.
const std::array<std::array<uint8_t, 3>, kNumTissueClasses>& class_palette();

/// Grayscale-free RGB base of the cube: bands nearest 640/550/460 nm averaged
/// into R/G/B, clamped to [0,1] and gamma-encoded with gamma 2.2.
RgbImage rgb_base(const Hypercube& cube);

/// Alpha-blends the class palette over the RGB base at labeled pixels;
/// Unlabeled pixels stay at the base color. Blending happens on the encoded
/// bytes: out = round((1-alpha)*base + alpha*palette).
RgbImage render_overlay(const Hypercube& cube, const AnnotationMask& labels, float alpha = 0.45f);

/// Binary portable pixmap (P6, maxval 255).
void write_ppm(const RgbImage& image, const std::filesystem::path& path);

}  // namespace hsi::evalviz
