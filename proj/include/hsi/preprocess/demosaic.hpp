#pragma once

#include "hsi/hypercube.hpp"
#include "hsi/phantom/sensor.hpp"

namespace hsi::preprocess {

/// Bilinear demosaicking of a snapshot-mosaic frame into a full-resolution
/// per-camera cube (kind Raw, period^2 bands).
///
/// Band b is reconstructed from its sparse sample lattice (spacing = mosaic
/// period): pixels that natively carry b keep their raw value bit-exactly,
/// everything else is bilinear interpolation between the four surrounding
/// lattice samples, edge-replicated at the borders. Bilinear interpolation
/// reproduces affine intensity fields exactly in the interior.
Hypercube demosaic(const phantom::MosaicFrame& frame, int threads = 1);

}  // namespace hsi::preprocess
