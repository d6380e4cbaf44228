#include "hsi/evalviz/overlay.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hsi/error.hpp"

namespace hsi::evalviz {

const std::array<std::array<uint8_t, 3>, kNumTissueClasses>& class_palette() {
    static const std::array<std::array<uint8_t, 3>, kNumTissueClasses> palette = {{
        {0xFF, 0xD7, 0x00},  // Nerve  #FFD700
        {0x2E, 0x8B, 0x57},  // Gland  #2E8B57
        {0xB2, 0x22, 0x22},  // Muscle #B22222
        {0x1E, 0x3A, 0x8A},  // Vein   #1E3A8A
        {0xD2, 0x69, 0x1E},  // Skin   #D2691E
    }};
    return palette;
}

namespace {

constexpr std::array<float, 3> kRgbWavelengths = {640.0f, 550.0f, 460.0f};  // R, G, B

/// All band indices at the minimal distance from the target wavelength
/// (coincident fused centers are averaged together).
std::vector<int> nearest_bands(const BandSet& bands, float nm) {
    float best = std::abs(bands.center(0) - nm);
    for (int b = 1; b < bands.count(); ++b) {
        best = std::min(best, std::abs(bands.center(b) - nm));
    }
    std::vector<int> picked;
    for (int b = 0; b < bands.count(); ++b) {
        if (std::abs(bands.center(b) - nm) == best) picked.push_back(b);
    }
    return picked;
}

uint8_t gamma_encode(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return static_cast<uint8_t>(std::lround(255.0 * std::pow(v, 1.0 / 2.2)));
}

}  // namespace

RgbImage rgb_base(const Hypercube& cube) {
    std::array<std::vector<int>, 3> channel_bands;
    for (int ch = 0; ch < 3; ++ch) {
        channel_bands[static_cast<size_t>(ch)] =
            nearest_bands(cube.bands, kRgbWavelengths[static_cast<size_t>(ch)]);
    }
    RgbImage image;
    image.height = cube.height;
    image.width = cube.width;
    image.rgb.resize(static_cast<size_t>(cube.height) * cube.width * 3);
    for (int r = 0; r < cube.height; ++r) {
        for (int c = 0; c < cube.width; ++c) {
            uint8_t* px = image.pixel(r, c);
            for (int ch = 0; ch < 3; ++ch) {
                const auto& bands = channel_bands[static_cast<size_t>(ch)];
                double acc = 0.0;
                for (int b : bands) acc += cube.at(r, c, b);
                px[ch] = gamma_encode(acc / static_cast<double>(bands.size()));
            }
        }
    }
    return image;
}

RgbImage render_overlay(const Hypercube& cube, const AnnotationMask& labels, float alpha) {
    if (labels.height != cube.height || labels.width != cube.width) {
        throw ContractError("render_overlay: label map does not match the cube");
    }
    if (!(alpha >= 0.0f && alpha <= 1.0f)) {
        throw ContractError("render_overlay: alpha outside [0, 1]");
    }
    RgbImage image = rgb_base(cube);
    const auto& palette = class_palette();
    for (int r = 0; r < labels.height; ++r) {
        for (int c = 0; c < labels.width; ++c) {
            const uint8_t label = labels.at(r, c);
            if (label == 0) continue;
            const auto& color = palette[static_cast<size_t>(label - 1)];
            uint8_t* px = image.pixel(r, c);
            for (int ch = 0; ch < 3; ++ch) {
                const double blended = (1.0 - alpha) * static_cast<double>(px[ch]) +
                                       static_cast<double>(alpha) * color[static_cast<size_t>(ch)];
                px[ch] = static_cast<uint8_t>(std::lround(blended));
            }
        }
    }
    return image;
}

void write_ppm(const RgbImage& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "P6\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.rgb.data()),
              static_cast<std::streamsize>(image.rgb.size()));
    if (!out) throw IoError("ppm write failed: " + path.string());
}

}  // namespace hsi::evalviz
