#include "hsi/preprocess/calibrate.hpp"

#include <algorithm>
#include <string>

#include "hsi/error.hpp"
#include "hsi/phantom/sensor.hpp"

namespace hsi::preprocess {

std::pair<Hypercube, BoolMask> calibrate(const Hypercube& raw, const Hypercube& white,
                                         const Hypercube& dark) {
    raw.validate();
    white.validate();
    dark.validate();
    if (raw.height != white.height || raw.width != white.width ||
        raw.height != dark.height || raw.width != dark.width) {
        throw ContractError("calibrate: raw/white/dark dimensions differ");
    }
    if (raw.bands != white.bands || raw.bands != dark.bands) {
        throw ContractError("calibrate: raw/white/dark band sets differ");
    }

    const int n_bands = raw.bands.count();
    for (int r = 0; r < raw.height; ++r) {
        for (int c = 0; c < raw.width; ++c) {
            for (int b = 0; b < n_bands; ++b) {
                if (!(white.at(r, c, b) > dark.at(r, c, b))) {
                    throw ValidationError("calibrate: white <= dark at pixel (" +
                                          std::to_string(r) + ", " + std::to_string(c) +
                                          "), band " + std::to_string(b));
                }
            }
        }
    }

    Hypercube out(raw.height, raw.width, raw.bands, Hypercube::Kind::Reflectance);
    BoolMask specular(raw.height, raw.width, 0);
    for (int r = 0; r < raw.height; ++r) {
        for (int c = 0; c < raw.width; ++c) {
            bool saturated = false;
            for (int b = 0; b < n_bands; ++b) {
                const double rv = raw.at(r, c, b);
                if (rv >= phantom::kSaturationThreshold) saturated = true;
                const double dv = dark.at(r, c, b);
                const double reflectance = (rv - dv) / (white.at(r, c, b) - dv);
                out.at(r, c, b) = static_cast<float>(std::max(reflectance, 0.0));
            }
            specular.set(r, c, saturated);
        }
    }
    return {std::move(out), std::move(specular)};
}

}  // namespace hsi::preprocess
