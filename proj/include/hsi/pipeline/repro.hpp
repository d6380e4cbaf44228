#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hsi/model/train.hpp"
#include "hsi/phantom/recipe.hpp"

namespace hsi::pipeline {

/// Everything the end-to-end synthetic experiment needs. The experiment is a
/// pure function of this struct: two runs with equal configs produce
/// byte-identical reports and checkpoints.
struct ReproConfig {
    uint64_t seed = 7;
    std::filesystem::path out_dir;
    phantom::RecipeParams recipe;  // recipe.seed is overridden by `seed`
    int eval_subjects = 3;
    int stride = 10;
    int search_radius = 15;
    model::TrainConfig train;  // seed/threads are overridden
    int threads = 1;
    int overlay_scenes = 1;  // dense prediction is costly; default to one scene
    int overlay_crop = 120;  // side of the centered crop used for overlays
    bool dump_truth = false;
};

struct ReproSummary {
    int scenes = 0;
    int64_t patches_total = 0;
    std::array<int64_t, 6> class_histogram{};
    double muscle_share = 0.0;
    std::vector<int> eval_subject_ids;
    int64_t train_patches = 0;
    int64_t validation_patches = 0;
    int64_t eval_patches = 0;
    int epochs_run = 0;
    int best_epoch = -1;  // 1-based in reports
    double validation_accuracy = 0.0;
    double eval_accuracy = 0.0;
    std::filesystem::path metrics_path;
    std::filesystem::path checkpoint_path;
};

/// Writes a full phantom dataset (frames, references, masks, manifest) under
/// `dir` and returns the manifest records.
std::vector<phantom::SceneRecord> generate_phantom_dataset(const phantom::RecipeParams& params,
                                                           const std::filesystem::path& dir,
                                                           bool dump_truth = false);

/// The complete synthetic experiment: phantom dataset -> demosaic ->
/// calibrate -> register/fuse -> patchify -> LOSO split -> train -> evaluate
/// -> overlays. Every intermediate is written under out_dir in the documented
/// formats so each stage can be re-run standalone.
ReproSummary run_repro(const ReproConfig& config);

void write_summary(const ReproSummary& summary, const ReproConfig& config,
                   const std::filesystem::path& path);

}  // namespace hsi::pipeline
