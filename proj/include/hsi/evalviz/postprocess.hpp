#pragma once

#include "hsi/types.hpp"

namespace hsi::evalviz {

/// Specular repair: every flagged pixel's label is replaced by the majority
/// label among the non-specular, non-Unlabeled pixels in its k x k
/// neighborhood (ties -> smallest class code, empty neighborhood ->
/// Unlabeled). Unflagged pixels pass through untouched, which also makes the
/// operation idempotent. `window` must be odd.
AnnotationMask postprocess_speculars(const AnnotationMask& labels, const BoolMask& specular,
                                     int window = 11);

}  // namespace hsi::evalviz
