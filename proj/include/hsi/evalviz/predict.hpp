#pragma once

#include <vector>

#include "hsi/hypercube.hpp"
#include "hsi/model/net.hpp"
#include "hsi/types.hpp"

namespace hsi::evalviz {

struct PredictionMaps {
    AnnotationMask labels;     // Unlabeled where the window is not fully valid
    std::vector<float> probs;  // H*W*5, zeros at unclassified pixels
    int height = 0;
    int width = 0;
};

/// Dense (stride-1) classification: every pixel whose centered 31x31 window
/// lies fully inside the image and inside the valid area gets the argmax class
/// of that window; all other pixels stay Unlabeled. Windows share nothing but
/// batching: each one runs the full forward pass.
///
/// `validity` may be empty; the cube's own validity channel (when present) is
/// honored as well.
PredictionMaps predict_image(const model::Conv3dNet& net, const Hypercube& cube,
                             const BoolMask& validity, int threads = 1);

}  // namespace hsi::evalviz
