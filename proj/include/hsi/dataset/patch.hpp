#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "hsi/types.hpp"

namespace hsi::dataset {

inline constexpr int kPatchSize = 31;   // spatial extent
inline constexpr int kPatchBands = 41;  // spectral extent
inline constexpr size_t kPatchValues =
    static_cast<size_t>(kPatchSize) * kPatchSize * kPatchBands;

/// One purity-filtered training window: 31x31x41 reflectance values
/// (row, column, band order; one pixel's spectrum contiguous) plus provenance.
struct Patch {
    std::vector<float> data;  // kPatchValues
    TissueClass label = TissueClass::Unlabeled;
    uint16_t subject_id = 0;
    uint16_t scene_id = 0;
    uint16_t row = 0;  // top-left pixel in the source cube
    uint16_t col = 0;
};

struct PatchSet {
    std::vector<Patch> patches;

    size_t size() const { return patches.size(); }
    bool empty() const { return patches.empty(); }

    /// Patch counts indexed by class code 1..5 (slot 0 unused).
    std::array<int64_t, kNumTissueClasses + 1> class_histogram() const;

    /// Sorted distinct subject ids.
    std::vector<int> subjects() const;

    /// count[subject][class code 1..5]
    std::map<int, std::array<int64_t, kNumTissueClasses + 1>> per_subject_histogram() const;

    void append(PatchSet other);
};

}  // namespace hsi::dataset
