#include "hsi/phantom/spectra.hpp"

#include <cmath>
#include <string>

#include "hsi/error.hpp"

namespace hsi::phantom {

namespace {

double sigmoid(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

double gauss(double x, double mu, double s) {
    const double t = (x - mu) / s;
    return std::exp(-t * t);
}

double class_reflectance(TissueClass c, double nm) {
    switch (c) {
        case TissueClass::Nerve:
            return 0.30 + 0.28 * sigmoid((nm - 720.0) / 60.0);
        case TissueClass::Gland:
            return 0.20 + 0.30 * gauss(nm, 560.0, 70.0) + 0.18 * sigmoid((nm - 820.0) / 50.0);
        case TissueClass::Muscle:
            return 0.10 + 0.32 * sigmoid((nm - 610.0) / 25.0);
        case TissueClass::Vein:
            return 0.07 + 0.16 * sigmoid((nm - 760.0) / 80.0);
        case TissueClass::Skin:
            return 0.38 + 0.22 * sigmoid((nm - 575.0) / 45.0) - 0.06 * gauss(nm, 540.0, 35.0);
        case TissueClass::Unlabeled:
            break;
    }
    return 0.0;
}

}  // namespace

TissueSpectrumModel::TissueSpectrumModel(
    BandSet bands_, std::array<std::vector<float>, kNumTissueClasses> mean_, float sigma_class_,
    float sigma_noise_)
    : bands(std::move(bands_)), mean(std::move(mean_)), sigma_class(sigma_class_),
      sigma_noise(sigma_noise_) {
    const size_t n_bands = static_cast<size_t>(bands.count());
    for (int c = 0; c < kNumTissueClasses; ++c) {
        if (mean[static_cast<size_t>(c)].size() != n_bands) {
            throw ValidationError("TissueSpectrumModel: mean spectrum length mismatch for class " +
                                  std::string(to_string(static_cast<TissueClass>(c + 1))));
        }
        for (float v : mean[static_cast<size_t>(c)]) {
            if (v < 0.02f || v > 0.95f) {
                throw ValidationError("TissueSpectrumModel: mean reflectance outside [0.02, 0.95]");
            }
        }
    }
    // Learnability margin: >= 0.03 separation in >= 5 bands for every pair.
    for (int a = 0; a < kNumTissueClasses; ++a) {
        for (int b = a + 1; b < kNumTissueClasses; ++b) {
            int separated = 0;
            for (size_t k = 0; k < n_bands; ++k) {
                if (std::abs(mean[static_cast<size_t>(a)][k] - mean[static_cast<size_t>(b)][k]) >=
                    0.03f) {
                    ++separated;
                }
            }
            if (separated < 5) {
                throw ValidationError(
                    std::string("TissueSpectrumModel: classes ") +
                    to_string(static_cast<TissueClass>(a + 1)) + " and " +
                    to_string(static_cast<TissueClass>(b + 1)) +
                    " are separated by >= 0.03 in only " + std::to_string(separated) +
                    " bands (need 5)");
            }
        }
    }
    if (sigma_class < 0.0f || sigma_noise < 0.0f) {
        throw ValidationError("TissueSpectrumModel: negative sigma");
    }
}

TissueSpectrumModel TissueSpectrumModel::default_model(float sigma_class, float sigma_noise) {
    BandSet fused = fuse_bands(BandSet::camera_a(), BandSet::camera_b()).bands;
    std::array<std::vector<float>, kNumTissueClasses> mean;
    for (int c = 0; c < kNumTissueClasses; ++c) {
        auto& spectrum = mean[static_cast<size_t>(c)];
        spectrum.resize(static_cast<size_t>(fused.count()));
        for (int b = 0; b < fused.count(); ++b) {
            spectrum[static_cast<size_t>(b)] = static_cast<float>(
                class_reflectance(static_cast<TissueClass>(c + 1), fused.center(b)));
        }
    }
    return TissueSpectrumModel(std::move(fused), std::move(mean), sigma_class, sigma_noise);
}

}  // namespace hsi::phantom
