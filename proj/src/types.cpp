#include "hsi/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hsi/bandset.hpp"
#include "hsi/error.hpp"
#include "hsi/hypercube.hpp"

namespace hsi {

const char* to_string(TissueClass c) {
    switch (c) {
        case TissueClass::Unlabeled: return "Unlabeled";
        case TissueClass::Nerve: return "Nerve";
        case TissueClass::Gland: return "Gland";
        case TissueClass::Muscle: return "Muscle";
        case TissueClass::Vein: return "Vein";
        case TissueClass::Skin: return "Skin";
    }
    return "?";
}

void AnnotationMask::validate() const {
    if (height < 0 || width < 0 ||
        labels.size() != static_cast<size_t>(height) * static_cast<size_t>(width)) {
        throw ValidationError("AnnotationMask: label buffer does not match dimensions");
    }
    for (uint8_t code : labels) {
        if (!valid_label_code(code)) {
            throw ValidationError("AnnotationMask: label code " + std::to_string(code) +
                                  " outside {0..5}");
        }
    }
}

double BoolMask::rate() const {
    if (flags.empty()) return 0.0;
    size_t set = 0;
    for (uint8_t f : flags) set += (f != 0);
    return static_cast<double>(set) / static_cast<double>(flags.size());
}

namespace {
void check_crop(int r0, int c0, int h, int w, int src_h, int src_w) {
    if (r0 < 0 || c0 < 0 || h <= 0 || w <= 0 || r0 + h > src_h || c0 + w > src_w) {
        throw ValidationError("crop: window outside source bounds");
    }
}
}  // namespace

Hypercube crop(const Hypercube& cube, int r0, int c0, int height, int width) {
    check_crop(r0, c0, height, width, cube.height, cube.width);
    Hypercube out(height, width, cube.bands, cube.kind);
    const int b = cube.bands.count();
    if (!cube.valid.empty()) out.valid.resize(static_cast<size_t>(height) * width);
    for (int r = 0; r < height; ++r) {
        const float* src = &cube.data[cube.index(r0 + r, c0, 0)];
        std::copy(src, src + static_cast<size_t>(width) * b, &out.data[out.index(r, 0, 0)]);
        if (!cube.valid.empty()) {
            const uint8_t* vsrc = &cube.valid[cube.pixel_index(r0 + r, c0)];
            std::copy(vsrc, vsrc + width, &out.valid[out.pixel_index(r, 0)]);
        }
    }
    return out;
}

AnnotationMask crop(const AnnotationMask& mask, int r0, int c0, int height, int width) {
    check_crop(r0, c0, height, width, mask.height, mask.width);
    AnnotationMask out(height, width);
    for (int r = 0; r < height; ++r) {
        const uint8_t* src = &mask.labels[static_cast<size_t>(r0 + r) * mask.width + c0];
        std::copy(src, src + width, &out.labels[static_cast<size_t>(r) * width]);
    }
    return out;
}

BoolMask crop(const BoolMask& mask, int r0, int c0, int height, int width) {
    check_crop(r0, c0, height, width, mask.height, mask.width);
    BoolMask out(height, width);
    for (int r = 0; r < height; ++r) {
        const uint8_t* src = &mask.flags[static_cast<size_t>(r0 + r) * mask.width + c0];
        std::copy(src, src + width, &out.flags[static_cast<size_t>(r) * width]);
    }
    return out;
}

void Hypercube::validate() const {
    const size_t expected =
        static_cast<size_t>(height) * static_cast<size_t>(width) * static_cast<size_t>(bands.count());
    if (height <= 0 || width <= 0 || bands.count() <= 0) {
        throw ValidationError("Hypercube: non-positive dimensions");
    }
    if (data.size() != expected) {
        throw ValidationError("Hypercube: data length " + std::to_string(data.size()) +
                              " != H*W*B = " + std::to_string(expected));
    }
    if (!valid.empty() && valid.size() != static_cast<size_t>(height) * width) {
        throw ValidationError("Hypercube: validity mask does not match dimensions");
    }
    if (kind == Kind::Reflectance) {
        for (float v : data) {
            if (!std::isfinite(v)) {
                throw ValidationError("Hypercube: non-finite reflectance value");
            }
        }
    }
}

}  // namespace hsi
