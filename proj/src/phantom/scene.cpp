#include "hsi/phantom/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hsi/error.hpp"
#include "hsi/rng.hpp"

namespace hsi::phantom {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;
constexpr float kBackgroundReflectance = 0.15f;

// Stream ids for the per-scene generator families.
enum Stream : uint64_t {
    kGainField = 1,
    kRegionField = 2,
    kPixelNoise = 3,
    kSpeculars = 4,
};

/// Smooth separable field in [-1, 1]: one low-frequency sine per axis.
struct SmoothField {
    double fr, fc, pr, pc;

    static SmoothField draw(Rng& rng) {
        SmoothField f;
        f.fr = 1.0 + static_cast<double>(rng.below(2));
        f.fc = 1.0 + static_cast<double>(rng.below(2));
        f.pr = rng.uniform();
        f.pc = rng.uniform();
        return f;
    }

    double at(int r, int c, int height, int width) const {
        const double x = std::sin(kTau * (fr * r / height + pr));
        const double y = std::cos(kTau * (fc * c / width + pc));
        return x * y;
    }
};

bool blob_contains(const Region& reg, int r, int c) {
    uint64_t sm = reg.blob_seed;
    const double ph1 = static_cast<double>(splitmix64(sm) >> 11) * 0x1.0p-53 * kTau;
    const double ph2 = static_cast<double>(splitmix64(sm) >> 11) * 0x1.0p-53 * kTau;
    const double cr = reg.r0 + reg.h / 2.0;
    const double cc = reg.c0 + reg.w / 2.0;
    // Wobble amplitude 0.4 total, so base radii shrink to keep the outline
    // inside the bounding box.
    const double rr = (reg.h / 2.0) / 1.4;
    const double rc = (reg.w / 2.0) / 1.4;
    const double dr = (r + 0.5 - cr) / rr;
    const double dc = (c + 0.5 - cc) / rc;
    const double rho = std::sqrt(dr * dr + dc * dc);
    if (rho == 0.0) return true;
    const double theta = std::atan2(dr, dc);
    const double wobble = 1.0 + 0.25 * std::sin(3.0 * theta + ph1) + 0.15 * std::sin(5.0 * theta + ph2);
    return rho <= wobble;
}

}  // namespace

void SceneSpec::validate() const {
    if (height <= 0 || width <= 0) {
        throw ValidationError("SceneSpec: non-positive dimensions");
    }
    if (specular_density < 0.0f || specular_density > 0.05f) {
        throw ValidationError("SceneSpec: specular_density outside [0, 0.05]");
    }
    if (gain_amplitude < 0.0f || gain_amplitude > 0.3f) {
        throw ValidationError("SceneSpec: gain amplitude outside [0, 0.3]");
    }
    for (const Region& reg : regions) {
        if (!is_classifiable(reg.cls)) {
            throw ValidationError("SceneSpec: region labeled Unlabeled");
        }
        if (reg.h <= 0 || reg.w <= 0 || reg.r0 < 0 || reg.c0 < 0 || reg.r0 + reg.h > height ||
            reg.c0 + reg.w > width) {
            throw ValidationError("SceneSpec: region outside scene bounds");
        }
    }
}

std::pair<Hypercube, AnnotationMask> generate_scene(const SceneSpec& spec,
                                                    const TissueSpectrumModel& model,
                                                    BoolMask* true_speculars) {
    spec.validate();
    const int height = spec.height;
    const int width = spec.width;
    const int n_bands = model.bands.count();

    // Rasterize regions; region index + 1 per pixel, 0 = background.
    AnnotationMask mask(height, width, 0);
    std::vector<int32_t> region_of(static_cast<size_t>(height) * width, -1);
    for (size_t ri = 0; ri < spec.regions.size(); ++ri) {
        const Region& reg = spec.regions[ri];
        for (int r = reg.r0; r < reg.r0 + reg.h; ++r) {
            for (int c = reg.c0; c < reg.c0 + reg.w; ++c) {
                if (reg.shape == Region::Shape::Blob && !blob_contains(reg, r, c)) continue;
                auto& owner = region_of[static_cast<size_t>(r) * width + c];
                if (owner >= 0) {
                    throw ValidationError("generate_scene: regions " + std::to_string(owner) +
                                          " and " + std::to_string(ri) + " overlap at pixel (" +
                                          std::to_string(r) + ", " + std::to_string(c) + ")");
                }
                owner = static_cast<int32_t>(ri);
                mask.at(r, c) = static_cast<uint8_t>(reg.cls);
            }
        }
    }

    Rng gain_rng = Rng::derived(spec.seed, kGainField);
    const SmoothField gain_field = SmoothField::draw(gain_rng);

    // One smooth perturbation field + one spectral modulation phase per region.
    std::vector<SmoothField> region_fields;
    std::vector<double> region_phase;
    Rng region_rng = Rng::derived(spec.seed, kRegionField);
    region_fields.reserve(spec.regions.size());
    for (size_t ri = 0; ri < spec.regions.size(); ++ri) {
        region_fields.push_back(SmoothField::draw(region_rng));
        region_phase.push_back(region_rng.uniform() * kTau);
    }

    const float lambda_lo = model.bands.center(0);
    const float lambda_span = model.bands.center(n_bands - 1) - lambda_lo;

    Hypercube cube(height, width, model.bands, Hypercube::Kind::Reflectance);
    Rng noise_rng = Rng::derived(spec.seed, kPixelNoise);
    Rng specular_rng = Rng::derived(spec.seed, kSpeculars);
    if (true_speculars) *true_speculars = BoolMask(height, width, 0);

    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const size_t pix = static_cast<size_t>(r) * width + c;
            const int32_t ri = region_of[pix];
            const double gain =
                1.0 + spec.gain_amplitude * gain_field.at(r, c, height, width);
            float* out = &cube.data[pix * static_cast<size_t>(n_bands)];

            const bool specular =
                spec.specular_density > 0.0f && specular_rng.bernoulli(spec.specular_density);
            if (specular) {
                // Direct reflection of the light source: full scale everywhere,
                // independent of tissue and illumination.
                for (int b = 0; b < n_bands; ++b) out[b] = 1.0f;
                if (true_speculars) true_speculars->set(r, c, true);
                continue;
            }

            const float* mean = nullptr;
            double wobble = 0.0;
            double band_phase = 0.0;
            if (ri >= 0) {
                mean = model.class_mean(spec.regions[static_cast<size_t>(ri)].cls).data();
                wobble = model.sigma_class *
                         region_fields[static_cast<size_t>(ri)].at(r, c, height, width);
                band_phase = region_phase[static_cast<size_t>(ri)];
            }
            for (int b = 0; b < n_bands; ++b) {
                const double base = mean ? mean[b] : kBackgroundReflectance;
                const double band_mod =
                    mean ? std::cos(kTau * (model.bands.center(b) - lambda_lo) / lambda_span +
                                    band_phase)
                         : 0.0;
                double v = base + wobble * band_mod;
                if (model.sigma_noise > 0.0f) v += model.sigma_noise * noise_rng.normal();
                v *= gain;
                out[b] = static_cast<float>(std::clamp(v, 0.0, 1.0));
            }
        }
    }
    return {std::move(cube), std::move(mask)};
}

}  // namespace hsi::phantom
