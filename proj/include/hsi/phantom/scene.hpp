#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hsi/hypercube.hpp"
#include "hsi/phantom/spectra.hpp"
#include "hsi/types.hpp"

namespace hsi::phantom {

/// One annotated tissue area. Rectangles are half-open [r0, r0+h) x [c0, c0+w);
/// blobs are wobbled ellipses inscribed in the same bounding box, with the
/// outline drawn deterministically from `blob_seed`.
struct Region {
    enum class Shape { Rect, Blob };

    TissueClass cls = TissueClass::Unlabeled;
    Shape shape = Shape::Rect;
    int r0 = 0;
    int c0 = 0;
    int h = 0;
    int w = 0;
    uint64_t blob_seed = 0;
};

/// Full description of one synthetic surgical scene. Everything downstream is
/// a pure function of this struct, so identical specs reproduce identical
/// scenes bit for bit.
struct SceneSpec {
    int height = 0;
    int width = 0;
    int subject_id = 0;
    int scene_id = 0;
    std::vector<Region> regions;
    float specular_density = 0.0f;  // fraction of pixels in [0, 0.05]
    float gain_amplitude = 0.0f;    // illumination field spans [1-A, 1+A], A <= 0.3
    uint64_t seed = 0;

    void validate() const;
};

/// Renders the ground-truth reflectance cube (at the model's 41 fused bands)
/// and the matching annotation mask.
///
/// Labeled pixels get (class mean + smooth per-region perturbation bounded by
/// sigma_class + white noise) * illumination gain, clamped to [0,1]; unlabeled
/// pixels carry a flat 0.15 background through the same gain/noise path.
/// Specular pixels are set to 1.0 in every band, bypassing gain and noise.
/// If `true_speculars` is given it receives the generated specular positions
/// (diagnostic only; the pipeline re-detects them from sensor saturation).
std::pair<Hypercube, AnnotationMask> generate_scene(const SceneSpec& spec,
                                                    const TissueSpectrumModel& model,
                                                    BoolMask* true_speculars = nullptr);

}  // namespace hsi::phantom
