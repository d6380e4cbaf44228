#pragma once

#include <array>
#include <vector>

#include "hsi/bandset.hpp"
#include "hsi/types.hpp"

namespace hsi::phantom {

/// Synthetic per-class reflectance model sampled at the 41 fused band centers.
///
/// The default curves are smooth, shape-distinct profiles (NIR rise for nerve,
/// a green bump for gland, a red edge for muscle, a dark vein, bright skin) so
/// the classes stay separable under the multiplicative illumination field.
/// Construction enforces the learnability margin: every pair of class means
/// must differ by at least 0.03 reflectance in at least 5 of the 41 bands, and
/// all means must lie in [0.02, 0.95].
struct TissueSpectrumModel {
    BandSet bands;  // the 41 fused centers
    std::array<std::vector<float>, kNumTissueClasses> mean;  // [class-1][band]
    float sigma_class = 0.0f;  // bound on the smooth per-region perturbation
    float sigma_noise = 0.0f;  // per-pixel white noise

    TissueSpectrumModel(BandSet bands_, std::array<std::vector<float>, kNumTissueClasses> mean_,
                        float sigma_class_, float sigma_noise_);

    static TissueSpectrumModel default_model(float sigma_class = 0.02f,
                                             float sigma_noise = 0.008f);

    const std::vector<float>& class_mean(TissueClass c) const {
        return mean[static_cast<size_t>(c) - 1];
    }
};

}  // namespace hsi::phantom
