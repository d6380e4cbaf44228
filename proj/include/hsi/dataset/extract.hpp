#pragma once

#include "hsi/dataset/patch.hpp"
#include "hsi/hypercube.hpp"

namespace hsi::dataset {

struct ExtractReport {
    int64_t windows_considered = 0;
    int64_t accepted = 0;
    std::array<int64_t, kNumTissueClasses + 1> per_class{};  // by class code
};

/// Sliding-window patch extraction with the purity rule.
///
/// Windows start at (r, c) with r, c multiples of `stride` and must fit inside
/// the cube. A window is accepted iff all 961 pixels carry the same non-zero
/// label, none is specular-flagged and none is fusion-invalid. Pass empty
/// masks (height 0) to skip the respective check. The cube must have exactly
/// 41 bands.
PatchSet extract_patches(const Hypercube& cube, const AnnotationMask& mask,
                         const BoolMask& specular, const BoolMask& validity, int subject_id,
                         int scene_id, int stride = 10, ExtractReport* report = nullptr);

}  // namespace hsi::dataset
