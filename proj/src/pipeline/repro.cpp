#include "hsi/pipeline/repro.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "hsi/cube_io.hpp"
#include "hsi/dataset/extract.hpp"
#include "hsi/dataset/patch_io.hpp"
#include "hsi/dataset/split.hpp"
#include "hsi/error.hpp"
#include "hsi/evalviz/metrics.hpp"
#include "hsi/evalviz/overlay.hpp"
#include "hsi/evalviz/postprocess.hpp"
#include "hsi/evalviz/predict.hpp"
#include "hsi/fusion/fusion.hpp"
#include "hsi/model/checkpoint.hpp"
#include "hsi/phantom/scene.hpp"
#include "hsi/preprocess/calibrate.hpp"
#include "hsi/preprocess/demosaic.hpp"

namespace hsi::pipeline {

namespace fs = std::filesystem;

namespace {

std::string scene_tag(int subject, int scene) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "s%02d_%d", subject, scene);
    return buf;
}

}  // namespace

std::vector<phantom::SceneRecord> generate_phantom_dataset(const phantom::RecipeParams& params,
                                                           const fs::path& dir, bool dump_truth) {
    fs::create_directories(dir);
    const auto scenes = phantom::build_recipe(params);
    const auto model =
        phantom::TissueSpectrumModel::default_model(params.sigma_class, params.sigma_noise);

    std::vector<phantom::SceneRecord> records;
    for (const phantom::SceneRecipe& recipe : scenes) {
        const auto [truth, truth_mask] = phantom::generate_scene(recipe.spec, model);
        const auto frame_a = phantom::render_camera(truth, phantom::Camera::A, recipe.disparity,
                                                    recipe.white_gain_a);
        const auto frame_b = phantom::render_camera(truth, phantom::Camera::B, recipe.disparity,
                                                    recipe.white_gain_b);
        const auto [white_a, dark_a] = phantom::render_references(
            phantom::Camera::A, recipe.white_gain_a, frame_a.height, frame_a.width);
        const auto [white_b, dark_b] = phantom::render_references(
            phantom::Camera::B, recipe.white_gain_b, frame_b.height, frame_b.width);

        // The annotation mask lives in camera B's frame, which is what the
        // fused cube uses.
        const AnnotationMask mask_b =
            crop(truth_mask, 0, recipe.disparity, frame_b.height, frame_b.width);

        phantom::SceneRecord record;
        record.subject_id = recipe.spec.subject_id;
        record.scene_id = recipe.spec.scene_id;
        const std::string tag = scene_tag(record.subject_id, record.scene_id);
        record.frame_a = tag + "_frame_a.hsr";
        record.frame_b = tag + "_frame_b.hsr";
        record.white_a = tag + "_white_a.hsr";
        record.dark_a = tag + "_dark_a.hsr";
        record.white_b = tag + "_white_b.hsr";
        record.dark_b = tag + "_dark_b.hsr";
        record.mask = tag + "_mask.hsm";

        phantom::write_frame_file(frame_a, dir / record.frame_a);
        phantom::write_frame_file(frame_b, dir / record.frame_b);
        phantom::write_frame_file(white_a, dir / record.white_a);
        phantom::write_frame_file(dark_a, dir / record.dark_a);
        phantom::write_frame_file(white_b, dir / record.white_b);
        phantom::write_frame_file(dark_b, dir / record.dark_b);
        write_mask_file(mask_b, dir / record.mask);
        if (dump_truth) {
            write_cube_file(truth, dir / (tag + "_truth.hsc"));
        }
        records.push_back(std::move(record));
    }
    phantom::write_manifest(records, dir / "manifest.txt");
    return records;
}

ReproSummary run_repro(const ReproConfig& config) {
    if (config.out_dir.empty()) throw ContractError("run_repro: output directory required");
    const fs::path out = config.out_dir;
    fs::create_directories(out / "dataset");
    fs::create_directories(out / "cubes");
    fs::create_directories(out / "fused");
    fs::create_directories(out / "patches");
    fs::create_directories(out / "split");
    fs::create_directories(out / "model");
    fs::create_directories(out / "report");

    phantom::RecipeParams recipe = config.recipe;
    recipe.seed = config.seed;

    ReproSummary summary;

    // Stage 1: phantom dataset.
    const auto records = generate_phantom_dataset(recipe, out / "dataset", config.dump_truth);
    summary.scenes = static_cast<int>(records.size());

    // Stage 2-4: per scene demosaic, calibrate, register, fuse, patchify.
    dataset::PatchSet all_patches;
    for (const phantom::SceneRecord& record : records) {
        const fs::path data = out / "dataset";
        const std::string tag = scene_tag(record.subject_id, record.scene_id);

        auto process = [&](const std::string& frame_path, const std::string& white_path,
                           const std::string& dark_path, const char* suffix) {
            const auto frame = phantom::read_frame_file(data / frame_path);
            const auto raw = preprocess::demosaic(frame, config.threads);
            const auto white = preprocess::demosaic(phantom::read_frame_file(data / white_path),
                                                    config.threads);
            const auto dark = preprocess::demosaic(phantom::read_frame_file(data / dark_path),
                                                   config.threads);
            auto [reflectance, specular] = preprocess::calibrate(raw, white, dark);
            write_cube_file(reflectance, out / "cubes" / (tag + suffix + std::string(".hsc")));
            write_flags_file(specular,
                             out / "cubes" / (tag + suffix + std::string("_specular.hsb")));
            return std::make_pair(std::move(reflectance), std::move(specular));
        };
        auto [cube_a, spec_a] = process(record.frame_a, record.white_a, record.dark_a, "_a");
        auto [cube_b, spec_b] = process(record.frame_b, record.white_b, record.dark_b, "_b");

        const fusion::PixelShift shift =
            fusion::estimate_translation(cube_a, cube_b, config.search_radius, config.threads);
        Hypercube fused = fusion::fuse_cubes(cube_a, cube_b, shift);
        const BoolMask specular = fusion::merge_specular(spec_a, spec_b, shift);
        BoolMask validity(fused.height, fused.width);
        validity.flags = fused.valid;

        write_cube_file(fused, out / "fused" / (tag + ".hsc"));
        write_flags_file(validity, out / "fused" / (tag + "_valid.hsb"));
        write_flags_file(specular, out / "fused" / (tag + "_specular.hsb"));

        const AnnotationMask mask = read_mask_file(data / record.mask);
        dataset::ExtractReport report;
        dataset::PatchSet patches =
            dataset::extract_patches(fused, mask, specular, validity, record.subject_id,
                                     record.scene_id, config.stride, &report);
        dataset::write_patchset_file(patches, out / "patches" / (tag + ".hsp"));
        all_patches.append(std::move(patches));
    }

    summary.patches_total = static_cast<int64_t>(all_patches.size());
    summary.class_histogram = all_patches.class_histogram();
    summary.muscle_share =
        summary.patches_total == 0
            ? 0.0
            : static_cast<double>(
                  summary.class_histogram[static_cast<size_t>(TissueClass::Muscle)]) /
                  static_cast<double>(summary.patches_total);

    // Stage 5: LOSO split.
    const dataset::SplitPlan plan =
        dataset::plan_split(all_patches, config.eval_subjects, config.seed);
    const dataset::SplitIndices indices = dataset::apply_split(all_patches, plan);
    summary.eval_subject_ids = plan.eval_subjects;

    auto materialize = [&](const std::vector<size_t>& idx) {
        dataset::PatchSet set;
        set.patches.reserve(idx.size());
        for (size_t i : idx) set.patches.push_back(all_patches.patches[i]);
        return set;
    };
    dataset::PatchSet train_set = materialize(indices.train);
    dataset::PatchSet val_set = materialize(indices.validation);
    dataset::PatchSet eval_set = materialize(indices.eval);
    summary.train_patches = static_cast<int64_t>(train_set.size());
    summary.validation_patches = static_cast<int64_t>(val_set.size());
    summary.eval_patches = static_cast<int64_t>(eval_set.size());

    dataset::write_split_plan(plan, out / "split" / "plan.txt");
    dataset::write_patchset_file(train_set, out / "split" / "train.hsp");
    dataset::write_patchset_file(val_set, out / "split" / "validation.hsp");
    dataset::write_patchset_file(eval_set, out / "split" / "eval.hsp");

    // Stage 6: training.
    model::TrainConfig train_config = config.train;
    train_config.seed = config.seed;
    train_config.threads = config.threads;
    if (!train_config.on_epoch) {
        train_config.on_epoch = [](int epoch, const model::EpochStats& stats) {
            std::printf("epoch %d: train loss %.4f, val loss %.4f, val acc %.4f, lr %.2e\n",
                        epoch + 1, stats.train_loss, stats.val_loss, stats.val_accuracy,
                        stats.learning_rate);
            std::fflush(stdout);
        };
    }
    const model::TrainResult trained =
        model::train(train_set, val_set, model::Architecture::standard(), train_config);
    summary.epochs_run = static_cast<int>(trained.report.epochs.size());
    summary.best_epoch = trained.report.best_epoch + 1;
    summary.validation_accuracy = trained.report.best_val_accuracy;

    summary.checkpoint_path = out / "model" / "net.hsn";
    model::save_checkpoint(trained.net, &trained.adam, summary.checkpoint_path);
    {
        std::ofstream report_out(out / "model" / "train_report.csv");
        if (!report_out) throw IoError("cannot write train report");
        report_out << "epoch,train_loss,val_loss,val_accuracy,learning_rate\n";
        char buf[192];
        for (size_t e = 0; e < trained.report.epochs.size(); ++e) {
            const model::EpochStats& s = trained.report.epochs[e];
            std::snprintf(buf, sizeof(buf), "%zu,%.9e,%.9e,%.6f,%.9e\n", e + 1, s.train_loss,
                          s.val_loss, s.val_accuracy, s.learning_rate);
            report_out << buf;
        }
    }

    // Stage 7: patch-wise evaluation.
    const auto [matrix, metrics] = evalviz::evaluate_patches(trained.net, eval_set,
                                                             config.threads);
    summary.eval_accuracy = metrics.overall_accuracy;
    summary.metrics_path = out / "report" / "metrics.txt";
    {
        std::ofstream metrics_out(summary.metrics_path);
        if (!metrics_out) throw IoError("cannot write metrics report");
        evalviz::write_metrics_report(matrix, metrics, metrics_out);
    }
    {
        std::ofstream confusion_out(out / "report" / "confusion.txt");
        if (!confusion_out) throw IoError("cannot write confusion table");
        evalviz::write_confusion_table(matrix, confusion_out);
    }

    // Stage 8: overlays on held-out scenes (dense prediction over a centered
    // crop; full frames are available through the predict/overlay commands).
    int overlays_done = 0;
    for (const phantom::SceneRecord& record : records) {
        if (overlays_done >= config.overlay_scenes) break;
        if (!plan.is_eval_subject(record.subject_id)) continue;
        const std::string tag = scene_tag(record.subject_id, record.scene_id);
        Hypercube fused = read_cube_file(out / "fused" / (tag + ".hsc"));
        BoolMask validity = read_flags_file(out / "fused" / (tag + "_valid.hsb"));
        BoolMask specular = read_flags_file(out / "fused" / (tag + "_specular.hsb"));
        fused.valid = validity.flags;

        const int crop_side =
            std::min({config.overlay_crop, fused.height, fused.width});
        const int r0 = (fused.height - crop_side) / 2;
        const int c0 = (fused.width - crop_side) / 2;
        const Hypercube cube_crop = crop(fused, r0, c0, crop_side, crop_side);
        const BoolMask specular_crop = crop(specular, r0, c0, crop_side, crop_side);

        const evalviz::PredictionMaps maps =
            evalviz::predict_image(trained.net, cube_crop, BoolMask{}, config.threads);
        const AnnotationMask repaired =
            evalviz::postprocess_speculars(maps.labels, specular_crop, 11);
        write_mask_file(repaired, out / "report" / ("labels_" + tag + ".hsm"));
        const evalviz::RgbImage overlay = evalviz::render_overlay(cube_crop, repaired, 0.45f);
        evalviz::write_ppm(overlay, out / "report" / ("overlay_" + tag + ".ppm"));
        ++overlays_done;
    }

    write_summary(summary, config, out / "report" / "summary.txt");
    return summary;
}

void write_summary(const ReproSummary& summary, const ReproConfig& config,
                   const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write summary: " + path.string());
    char buf[128];
    out << "seed=" << config.seed << "\n";
    out << "scenes=" << summary.scenes << "\n";
    out << "patches_total=" << summary.patches_total << "\n";
    for (int c = 1; c <= kNumTissueClasses; ++c) {
        out << "patches_" << to_string(static_cast<TissueClass>(c)) << "="
            << summary.class_histogram[static_cast<size_t>(c)] << "\n";
    }
    std::snprintf(buf, sizeof(buf), "muscle_share=%.6f\n", summary.muscle_share);
    out << buf;
    out << "eval_subjects=";
    for (size_t i = 0; i < summary.eval_subject_ids.size(); ++i) {
        out << (i ? "," : "") << summary.eval_subject_ids[i];
    }
    out << "\n";
    out << "train_patches=" << summary.train_patches << "\n";
    out << "validation_patches=" << summary.validation_patches << "\n";
    out << "eval_patches=" << summary.eval_patches << "\n";
    out << "epochs_run=" << summary.epochs_run << "\n";
    out << "best_epoch=" << summary.best_epoch << "\n";
    std::snprintf(buf, sizeof(buf), "validation_accuracy=%.6f\n", summary.validation_accuracy);
    out << buf;
    std::snprintf(buf, sizeof(buf), "eval_accuracy=%.6f\n", summary.eval_accuracy);
    out << buf;
}

}  // namespace hsi::pipeline
