#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hsi {

/// The five tissue classes, with stable on-disk codes 1..5.
/// Unlabeled (0) appears only in masks, never as a training or prediction
/// target.
enum class TissueClass : uint8_t {
    Unlabeled = 0,
    Nerve = 1,
    Gland = 2,
    Muscle = 3,
    Vein = 4,
    Skin = 5,
};

inline constexpr int kNumTissueClasses = 5;

const char* to_string(TissueClass c);

inline bool is_classifiable(TissueClass c) {
    return c != TissueClass::Unlabeled;
}

inline bool valid_label_code(uint8_t code) {
    return code <= 5;
}

/// Per-pixel tissue labels aligned to a Hypercube. 0 = Unlabeled.
struct AnnotationMask {
    int height = 0;
    int width = 0;
    std::vector<uint8_t> labels;  // H*W, row-major

    AnnotationMask() = default;
    AnnotationMask(int h, int w, uint8_t fill = 0)
        : height(h), width(w), labels(static_cast<size_t>(h) * w, fill) {}

    uint8_t at(int r, int c) const { return labels[static_cast<size_t>(r) * width + c]; }
    uint8_t& at(int r, int c) { return labels[static_cast<size_t>(r) * width + c]; }

    /// Throws ValidationError on size mismatch or out-of-range codes.
    void validate() const;
};

/// Boolean per-pixel mask: specular flags, fusion validity, ...
struct BoolMask {
    int height = 0;
    int width = 0;
    std::vector<uint8_t> flags;  // H*W, 0 or 1

    BoolMask() = default;
    BoolMask(int h, int w, uint8_t fill = 0)
        : height(h), width(w), flags(static_cast<size_t>(h) * w, fill) {}

    bool at(int r, int c) const { return flags[static_cast<size_t>(r) * width + c] != 0; }
    void set(int r, int c, bool v) { flags[static_cast<size_t>(r) * width + c] = v ? 1 : 0; }

    /// Fraction of set flags; the diagnostic reported by calibration.
    double rate() const;
};

}  // namespace hsi
