#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "hsi/dataset/patch.hpp"

namespace hsi::dataset {

/// Leave-one-subject-out split: which subjects form the evaluation set, how
/// the remainder divides into train/validation, and the achieved per-class
/// evaluation shares.
struct SplitPlan {
    std::vector<int> eval_subjects;  // sorted
    double train_fraction = 0.92;
    uint64_t seed = 0;
    std::array<double, kNumTissueClasses + 1> eval_share{};  // by class code

    bool is_eval_subject(int subject) const;
};

/// Chooses the evaluation-subject combination.
///
/// Feasible combinations give every class at least 12% of its patches in the
/// evaluation set while keeping at least one patch of each class in training;
/// among those, the one minimizing the largest per-class evaluation share wins
/// (exhaustive when C(n, k) <= 20000, otherwise a seeded random search of
/// 20000 combinations). Ties resolve to the lexicographically smallest subject
/// combination. Throws ValidationError listing per-class best achievable
/// shares when no combination is feasible.
SplitPlan plan_split(const PatchSet& patches, int n_eval_subjects = 3, uint64_t seed = 0);

struct SplitIndices {
    std::vector<size_t> train;
    std::vector<size_t> validation;
    std::vector<size_t> eval;
};

/// Materializes a plan: evaluation patches by subject, the rest shuffled by
/// the plan's seed in canonical (subject, scene, row, col) order and split
/// floor(train_fraction * n) / remainder. Independent of the input ordering.
SplitIndices apply_split(const PatchSet& patches, const SplitPlan& plan);

void write_split_plan(const SplitPlan& plan, const std::filesystem::path& path);
SplitPlan read_split_plan(const std::filesystem::path& path);

}  // namespace hsi::dataset
