#pragma once

#include <utility>

#include "hsi/hypercube.hpp"
#include "hsi/types.hpp"

namespace hsi::preprocess {

/// White/dark correction: reflectance = (raw - dark) / (white - dark),
/// clamped below at 0. All three cubes must share dimensions and band set and
/// satisfy white > dark per value.
///
/// The returned mask flags pixels whose raw counts reach 0.98 of full scale in
/// any band before correction (sensor saturation / specular highlights).
/// Flagged pixels keep their computed reflectance values.
std::pair<Hypercube, BoolMask> calibrate(const Hypercube& raw, const Hypercube& white,
                                         const Hypercube& dark);

}  // namespace hsi::preprocess
