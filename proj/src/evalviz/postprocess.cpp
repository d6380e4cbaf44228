#include "hsi/evalviz/postprocess.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "hsi/error.hpp"

namespace hsi::evalviz {

AnnotationMask postprocess_speculars(const AnnotationMask& labels, const BoolMask& specular,
                                     int window) {
    if (window < 1 || window % 2 == 0) {
        throw ContractError("postprocess_speculars: window size must be odd, got " +
                            std::to_string(window));
    }
    if (labels.height != specular.height || labels.width != specular.width) {
        throw ContractError("postprocess_speculars: label map and specular mask sizes differ");
    }
    const int radius = window / 2;
    AnnotationMask out = labels;
    for (int r = 0; r < labels.height; ++r) {
        for (int c = 0; c < labels.width; ++c) {
            if (!specular.at(r, c)) continue;
            std::array<int, kNumTissueClasses + 1> votes{};
            const int r0 = std::max(0, r - radius);
            const int r1 = std::min(labels.height - 1, r + radius);
            const int c0 = std::max(0, c - radius);
            const int c1 = std::min(labels.width - 1, c + radius);
            for (int rr = r0; rr <= r1; ++rr) {
                for (int cc = c0; cc <= c1; ++cc) {
                    if (specular.at(rr, cc)) continue;
                    votes[labels.at(rr, cc)]++;
                }
            }
            int best = 0;  // Unlabeled when no valid neighbor exists
            for (int cls = 1; cls <= kNumTissueClasses; ++cls) {
                if (votes[static_cast<size_t>(cls)] > 0 &&
                    (best == 0 || votes[static_cast<size_t>(cls)] > votes[static_cast<size_t>(best)])) {
                    best = cls;
                }
            }
            out.at(r, c) = static_cast<uint8_t>(best);
        }
    }
    return out;
}

}  // namespace hsi::evalviz
