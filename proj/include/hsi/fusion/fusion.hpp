#pragma once

#include "hsi/hypercube.hpp"
#include "hsi/types.hpp"

namespace hsi::fusion {

/// Integer translation of camera A's content onto camera B's pixel grid:
/// A's pixel (r, c) lands at B's (r + dy, c + dx).
struct PixelShift {
    int dx = 0;
    int dy = 0;

    bool operator==(const PixelShift&) const = default;
};

/// Exhaustive normalized-cross-correlation search for the global translation
/// between the two cameras' reflectance cubes.
///
/// Both cubes are reduced to their spectral-overlap averages (A's bands at or
/// above 475 nm vs B's bands at or below 650 nm) and every integer shift in
/// [-search_radius, +search_radius]^2 is scored with zero-mean NCC over the
/// overlapping area. Candidates are visited in order of (|dx|+|dy|, dy, dx)
/// and only a strictly better score replaces the incumbent, which implements
/// the documented tie-breaking.
PixelShift estimate_translation(const Hypercube& cube_a, const Hypercube& cube_b,
                                int search_radius, int threads = 1);

/// Warps A's 16 bands by `shift` into B's grid and stacks them with B's 25
/// bands; the output band list is the sorted 41-entry union (camera A first on
/// coincident centers) and the payload is permuted accordingly. Pixels the
/// shifted A view does not cover are flagged invalid in the cube's validity
/// channel and hold zeros in A's bands.
Hypercube fuse_cubes(const Hypercube& cube_a, const Hypercube& cube_b, PixelShift shift);

/// Union of the two specular masks on B's grid (A's flags warped by `shift`).
BoolMask merge_specular(const BoolMask& specular_a, const BoolMask& specular_b,
                        PixelShift shift);

}  // namespace hsi::fusion
