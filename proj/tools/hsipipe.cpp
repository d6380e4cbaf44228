// hsipipe - stereo hyperspectral phantom pipeline and 3D-CNN tissue classifier.
//
// Every pipeline stage is a subcommand working on the documented file formats
// (HSR1 raw frames, HSC1 cubes, HSM1 masks, HSB1 flag masks, HSP1 patch sets,
// HSN1 checkpoints), so each stage can be re-run from its on-disk inputs.
// `repro` chains everything into the full synthetic experiment.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

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
#include "hsi/model/train.hpp"
#include "hsi/parallel.hpp"
#include "hsi/phantom/sensor.hpp"
#include "hsi/pipeline/repro.hpp"
#include "hsi/preprocess/calibrate.hpp"
#include "hsi/preprocess/demosaic.hpp"

namespace fs = std::filesystem;
using namespace hsi;

namespace {

/// Magic-byte validation before any stage touches a file.
void expect_file_magic(const fs::path& path, const std::string& magic, const char* role) {
    const std::string found = peek_magic(path);
    if (found != magic) {
        throw ValidationError(std::string(role) + " file " + path.string() +
                              ": expected magic \"" + magic + "\", found \"" + found + "\"");
    }
}

fusion::PixelShift parse_shift(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw ValidationError("--shift expects dx,dy (e.g. 7,0)");
    }
    try {
        return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw ValidationError("--shift expects two integers: dx,dy");
    }
}

struct CommonOpts {
    int threads = default_threads();
};

void add_threads_flag(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--threads", opts.threads, "Worker threads (results are thread-count independent)")
        ->capture_default_str();
}

int run_gen_phantom(const phantom::RecipeParams& params, const fs::path& out, bool dump_truth) {
    const auto records = pipeline::generate_phantom_dataset(params, out, dump_truth);
    std::cout << "wrote " << records.size() << " scenes under " << out.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stereo hyperspectral phantom pipeline and tissue classifier"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Optional key=value config file; command-line flags win");
    app.allow_config_extras(CLI::config_extras_mode::error);

    // ------------------------------------------------------------ gen-phantom
    phantom::RecipeParams recipe;
    fs::path gen_out;
    bool gen_dump_truth = false;
    auto* gen = app.add_subcommand(
        "gen-phantom", "Generate the synthetic dataset: HSR1 frames, references, HSM1 masks, "
                       "manifest.txt");
    gen->add_option("--out", gen_out, "Output directory")->required();
    gen->add_option("--seed", recipe.seed, "Dataset seed")->capture_default_str();
    gen->add_option("--subjects", recipe.subjects, "Number of subjects")->capture_default_str();
    gen->add_option("--height", recipe.frame_height, "Camera frame height (multiple of 20)")
        ->capture_default_str();
    gen->add_option("--width", recipe.frame_width, "Camera frame width (multiple of 20)")
        ->capture_default_str();
    gen->add_option("--specular-density", recipe.specular_density,
                    "Per-pixel specular probability, [0, 0.05]")
        ->capture_default_str();
    gen->add_option("--gain-amplitude", recipe.gain_amplitude,
                    "Illumination field amplitude, [0, 0.3]")
        ->capture_default_str();
    gen->add_option("--sigma-class", recipe.sigma_class, "Smooth per-region perturbation bound")
        ->capture_default_str();
    gen->add_option("--sigma-noise", recipe.sigma_noise, "Per-pixel white noise sigma")
        ->capture_default_str();
    gen->add_flag("--dump-truth", gen_dump_truth, "Also write the 41-band ground-truth cubes");

    // -------------------------------------------------------------- demosaic
    fs::path dm_in, dm_out;
    CommonOpts dm_opts;
    auto* dm = app.add_subcommand("demosaic",
                                  "Bilinear-demosaic an HSR1 frame into a per-camera HSC1 cube");
    dm->add_option("frame", dm_in, "Input HSR1 frame")->required();
    dm->add_option("--out", dm_out, "Output HSC1 cube")->required();
    add_threads_flag(dm, dm_opts);

    // -------------------------------------------------------------- calibrate
    fs::path cal_raw, cal_white, cal_dark, cal_out, cal_specular;
    auto* cal = app.add_subcommand(
        "calibrate", "White/dark-correct a raw HSC1 cube into reflectance; flags saturated "
                     "pixels into an HSB1 sidecar");
    cal->add_option("raw", cal_raw, "Raw HSC1 cube (from demosaic)")->required();
    cal->add_option("white", cal_white, "White-reference HSC1 cube")->required();
    cal->add_option("dark", cal_dark, "Dark-reference HSC1 cube")->required();
    cal->add_option("--out", cal_out, "Output reflectance HSC1 cube")->required();
    cal->add_option("--specular", cal_specular, "Output HSB1 specular mask");

    // ------------------------------------------------------------------ fuse
    fs::path fuse_a, fuse_b, fuse_out, fuse_validity, fuse_spec_a, fuse_spec_b, fuse_spec_out;
    std::string fuse_shift_text;
    int fuse_radius = 15;
    CommonOpts fuse_opts;
    auto* fu = app.add_subcommand(
        "fuse", "Register camera A onto camera B (NCC over the 475-650 nm overlap) and fuse "
                "16 + 25 bands into a 41-band HSC1 cube plus HSB1 validity sidecar");
    fu->add_option("cube_a", fuse_a, "Camera A reflectance HSC1 (16 bands)")->required();
    fu->add_option("cube_b", fuse_b, "Camera B reflectance HSC1 (25 bands)")->required();
    fu->add_option("--out", fuse_out, "Output fused HSC1 cube")->required();
    fu->add_option("--validity", fuse_validity, "Output HSB1 validity sidecar");
    fu->add_option("--shift", fuse_shift_text, "Force the shift as dx,dy instead of estimating");
    fu->add_option("--radius", fuse_radius, "Translation search radius in pixels")
        ->capture_default_str();
    fu->add_option("--specular-a", fuse_spec_a, "Camera A HSB1 specular mask to merge");
    fu->add_option("--specular-b", fuse_spec_b, "Camera B HSB1 specular mask to merge");
    fu->add_option("--specular-out", fuse_spec_out, "Output merged HSB1 specular mask");
    add_threads_flag(fu, fuse_opts);

    // --------------------------------------------------------------- patchify
    fs::path pat_cube, pat_mask, pat_out, pat_specular, pat_validity;
    int pat_subject = 0, pat_scene = 0, pat_stride = 10;
    auto* pat = app.add_subcommand(
        "patchify", "Extract purity-filtered 31x31x41 patches on the stride grid into HSP1");
    pat->add_option("cube", pat_cube, "Fused 41-band HSC1 cube")->required();
    pat->add_option("mask", pat_mask, "HSM1 annotation mask")->required();
    pat->add_option("--out", pat_out, "Output HSP1 patch set")->required();
    pat->add_option("--specular", pat_specular, "HSB1 specular mask (windows touching it are dropped)");
    pat->add_option("--validity", pat_validity, "HSB1 fusion-validity mask");
    pat->add_option("--subject", pat_subject, "Subject id recorded in the patches")->required();
    pat->add_option("--scene", pat_scene, "Scene id recorded in the patches")
        ->capture_default_str();
    pat->add_option("--stride", pat_stride, "Sliding-window stride")->capture_default_str();

    // ------------------------------------------------------------------ split
    std::vector<fs::path> split_inputs;
    fs::path split_out_dir;
    int split_eval_subjects = 3;
    uint64_t split_seed = 0;
    auto* sp = app.add_subcommand(
        "split", "Merge HSP1 patch sets and produce the leave-one-subject-out split "
                 "(plan.txt, train/validation/eval.hsp)");
    sp->add_option("patches", split_inputs, "Input HSP1 files")->required()->expected(-1);
    sp->add_option("--out-dir", split_out_dir, "Output directory")->required();
    sp->add_option("--eval-subjects", split_eval_subjects, "Held-out subject count")
        ->capture_default_str();
    sp->add_option("--seed", split_seed, "Split seed")->capture_default_str();

    // ------------------------------------------------------------------ train
    fs::path train_train, train_val, train_out, train_report;
    model::TrainConfig train_config;
    train_config.threads = default_threads();
    auto* tr = app.add_subcommand(
        "train", "Train the six-conv/three-fc 3D CNN with Adam and the plateau scheduler; "
                 "writes an HSN1 checkpoint");
    tr->add_option("train_set", train_train, "Training HSP1 patch set")->required();
    tr->add_option("val_set", train_val, "Validation HSP1 patch set")->required();
    tr->add_option("--out", train_out, "Output HSN1 checkpoint (best validation accuracy)")
        ->required();
    tr->add_option("--report", train_report, "Per-epoch CSV report path");
    tr->add_option("--lr", train_config.learning_rate, "Adam learning rate")
        ->capture_default_str();
    tr->add_option("--batch", train_config.batch_size, "Mini-batch size")->capture_default_str();
    tr->add_option("--max-epochs", train_config.max_epochs, "Epoch cap")->capture_default_str();
    tr->add_option("--seed", train_config.seed, "Init/shuffle seed")->capture_default_str();
    tr->add_option("--stop-at-val-acc", train_config.stop_at_val_accuracy,
                   "Early-stop threshold on validation accuracy (>1 disables)")
        ->capture_default_str();
    tr->add_option("--plateau-patience", train_config.plateau.patience,
                   "Epochs without improvement before the rate drops")
        ->capture_default_str();
    tr->add_option("--plateau-factor", train_config.plateau.factor, "Rate reduction factor")
        ->capture_default_str();
    tr->add_option("--min-lr", train_config.plateau.min_lr, "Learning-rate floor")
        ->capture_default_str();
    CommonOpts train_threads;
    add_threads_flag(tr, train_threads);

    // ------------------------------------------------------------------- eval
    fs::path eval_net, eval_set_path, eval_out, eval_confusion;
    CommonOpts eval_opts;
    auto* ev = app.add_subcommand(
        "eval", "Patch-wise evaluation: confusion matrix plus per-class sensitivity/specificity");
    ev->add_option("net", eval_net, "HSN1 checkpoint")->required();
    ev->add_option("patches", eval_set_path, "Evaluation HSP1 patch set")->required();
    ev->add_option("--out", eval_out, "Metrics report path (default: stdout)");
    ev->add_option("--confusion", eval_confusion, "Confusion table path");
    add_threads_flag(ev, eval_opts);

    // ---------------------------------------------------------------- predict
    fs::path pred_net, pred_cube, pred_out, pred_validity, pred_probs, pred_specular;
    int pred_window = 11;
    CommonOpts pred_opts;
    auto* pr = app.add_subcommand(
        "predict", "Dense per-pixel classification of a 41-band cube (stride-1 windows); "
                   "optional specular majority-vote post-processing");
    pr->add_option("net", pred_net, "HSN1 checkpoint")->required();
    pr->add_option("cube", pred_cube, "Fused 41-band HSC1 cube")->required();
    pr->add_option("--out", pred_out, "Output HSM1 label map")->required();
    pr->add_option("--validity", pred_validity, "HSB1 validity mask");
    pr->add_option("--probs", pred_probs,
                   "Optional per-pixel probabilities as a 5-band HSC1 cube");
    pr->add_option("--postprocess-specular", pred_specular,
                   "HSB1 specular mask: relabel flagged pixels by neighborhood majority");
    pr->add_option("--window", pred_window, "Majority-vote window (odd)")->capture_default_str();
    add_threads_flag(pr, pred_opts);

    // ---------------------------------------------------------------- overlay
    fs::path ov_cube, ov_labels, ov_out;
    float ov_alpha = 0.45f;
    auto* ov = app.add_subcommand(
        "overlay", "Blend a label map over the cube's RGB representation into a P6 PPM");
    ov->add_option("cube", ov_cube, "HSC1 cube")->required();
    ov->add_option("labels", ov_labels, "HSM1 label map")->required();
    ov->add_option("--out", ov_out, "Output PPM path")->required();
    ov->add_option("--alpha", ov_alpha, "Blend factor in [0, 1]")->capture_default_str();

    // ------------------------------------------------------------------ repro
    pipeline::ReproConfig repro;
    repro.threads = default_threads();
    repro.train.max_epochs = 40;
    repro.train.stop_at_val_accuracy = 0.99;
    auto* rp = app.add_subcommand(
        "repro", "Full synthetic experiment: phantom dataset -> demosaic -> calibrate -> "
                 "register/fuse -> patchify -> LOSO split -> train -> eval -> overlays");
    rp->add_option("--out", repro.out_dir, "Output directory")->required();
    rp->add_option("--seed", repro.seed, "Experiment seed")->capture_default_str();
    rp->add_option("--subjects", repro.recipe.subjects, "Subject count")->capture_default_str();
    rp->add_option("--eval-subjects", repro.eval_subjects, "Held-out subject count")
        ->capture_default_str();
    rp->add_option("--height", repro.recipe.frame_height, "Camera frame height")
        ->capture_default_str();
    rp->add_option("--width", repro.recipe.frame_width, "Camera frame width")
        ->capture_default_str();
    rp->add_option("--max-epochs", repro.train.max_epochs, "Training epoch cap")
        ->capture_default_str();
    rp->add_option("--batch", repro.train.batch_size, "Mini-batch size")->capture_default_str();
    rp->add_option("--lr", repro.train.learning_rate, "Adam learning rate")
        ->capture_default_str();
    rp->add_option("--stop-at-val-acc", repro.train.stop_at_val_accuracy,
                   "Early-stop threshold on validation accuracy")
        ->capture_default_str();
    rp->add_option("--overlay-scenes", repro.overlay_scenes,
                   "Held-out scenes to render overlays for")
        ->capture_default_str();
    rp->add_option("--overlay-crop", repro.overlay_crop,
                   "Side of the centered crop used for dense prediction")
        ->capture_default_str();
    rp->add_flag("--dump-truth", repro.dump_truth, "Keep the ground-truth cubes");
    CommonOpts repro_threads;
    add_threads_flag(rp, repro_threads);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return 1;
    }

    try {
        if (gen->parsed()) {
            return run_gen_phantom(recipe, gen_out, gen_dump_truth);
        }
        if (dm->parsed()) {
            expect_file_magic(dm_in, "HSR1", "frame");
            const auto frame = phantom::read_frame_file(dm_in);
            write_cube_file(preprocess::demosaic(frame, dm_opts.threads), dm_out);
            return 0;
        }
        if (cal->parsed()) {
            expect_file_magic(cal_raw, "HSC1", "raw cube");
            expect_file_magic(cal_white, "HSC1", "white cube");
            expect_file_magic(cal_dark, "HSC1", "dark cube");
            const auto [cube, specular] =
                preprocess::calibrate(read_cube_file(cal_raw), read_cube_file(cal_white),
                                      read_cube_file(cal_dark));
            write_cube_file(cube, cal_out);
            if (!cal_specular.empty()) write_flags_file(specular, cal_specular);
            std::cout << "specular flag rate: " << specular.rate() << "\n";
            return 0;
        }
        if (fu->parsed()) {
            expect_file_magic(fuse_a, "HSC1", "camera A cube");
            expect_file_magic(fuse_b, "HSC1", "camera B cube");
            const Hypercube a = read_cube_file(fuse_a);
            const Hypercube b = read_cube_file(fuse_b);
            fusion::PixelShift shift;
            if (!fuse_shift_text.empty()) {
                shift = parse_shift(fuse_shift_text);
            } else {
                shift = fusion::estimate_translation(a, b, fuse_radius, fuse_opts.threads);
                std::cout << "estimated shift: " << shift.dx << "," << shift.dy << "\n";
            }
            const Hypercube fused = fusion::fuse_cubes(a, b, shift);
            write_cube_file(fused, fuse_out);
            if (!fuse_validity.empty()) {
                BoolMask validity(fused.height, fused.width);
                validity.flags = fused.valid;
                write_flags_file(validity, fuse_validity);
            }
            if (!fuse_spec_out.empty()) {
                if (fuse_spec_a.empty() || fuse_spec_b.empty()) {
                    throw ValidationError("--specular-out needs --specular-a and --specular-b");
                }
                expect_file_magic(fuse_spec_a, "HSB1", "specular mask");
                expect_file_magic(fuse_spec_b, "HSB1", "specular mask");
                write_flags_file(fusion::merge_specular(read_flags_file(fuse_spec_a),
                                                        read_flags_file(fuse_spec_b), shift),
                                 fuse_spec_out);
            }
            return 0;
        }
        if (pat->parsed()) {
            expect_file_magic(pat_cube, "HSC1", "cube");
            expect_file_magic(pat_mask, "HSM1", "mask");
            BoolMask specular, validity;
            if (!pat_specular.empty()) {
                expect_file_magic(pat_specular, "HSB1", "specular mask");
                specular = read_flags_file(pat_specular);
            }
            if (!pat_validity.empty()) {
                expect_file_magic(pat_validity, "HSB1", "validity mask");
                validity = read_flags_file(pat_validity);
            }
            dataset::ExtractReport report;
            const auto patches =
                dataset::extract_patches(read_cube_file(pat_cube), read_mask_file(pat_mask),
                                         specular, validity, pat_subject, pat_scene, pat_stride,
                                         &report);
            dataset::write_patchset_file(patches, pat_out);
            std::cout << "windows " << report.windows_considered << ", accepted "
                      << report.accepted;
            for (int c = 1; c <= kNumTissueClasses; ++c) {
                std::cout << ", " << to_string(static_cast<TissueClass>(c)) << " "
                          << report.per_class[static_cast<size_t>(c)];
            }
            std::cout << "\n";
            return 0;
        }
        if (sp->parsed()) {
            dataset::PatchSet all;
            for (const fs::path& p : split_inputs) {
                expect_file_magic(p, "HSP1", "patch set");
                all.append(dataset::read_patchset_file(p));
            }
            const dataset::SplitPlan plan =
                dataset::plan_split(all, split_eval_subjects, split_seed);
            const dataset::SplitIndices idx = dataset::apply_split(all, plan);
            fs::create_directories(split_out_dir);
            dataset::write_split_plan(plan, split_out_dir / "plan.txt");
            auto materialize = [&](const std::vector<size_t>& which) {
                dataset::PatchSet out;
                out.patches.reserve(which.size());
                for (size_t i : which) out.patches.push_back(all.patches[i]);
                return out;
            };
            dataset::write_patchset_file(materialize(idx.train), split_out_dir / "train.hsp");
            dataset::write_patchset_file(materialize(idx.validation),
                                         split_out_dir / "validation.hsp");
            dataset::write_patchset_file(materialize(idx.eval), split_out_dir / "eval.hsp");
            std::cout << "eval subjects:";
            for (int s : plan.eval_subjects) std::cout << " " << s;
            std::cout << " | train " << idx.train.size() << ", validation "
                      << idx.validation.size() << ", eval " << idx.eval.size() << "\n";
            return 0;
        }
        if (tr->parsed()) {
            expect_file_magic(train_train, "HSP1", "training set");
            expect_file_magic(train_val, "HSP1", "validation set");
            train_config.threads = train_threads.threads;
            const auto result =
                model::train(dataset::read_patchset_file(train_train),
                             dataset::read_patchset_file(train_val),
                             model::Architecture::standard(), train_config);
            model::save_checkpoint(result.net, &result.adam, train_out);
            if (!train_report.empty()) {
                std::ofstream csv(train_report);
                if (!csv) throw IoError("cannot write " + train_report.string());
                csv << "epoch,train_loss,val_loss,val_accuracy,learning_rate\n";
                char buf[192];
                for (size_t e = 0; e < result.report.epochs.size(); ++e) {
                    const auto& s = result.report.epochs[e];
                    std::snprintf(buf, sizeof(buf), "%zu,%.9e,%.9e,%.6f,%.9e\n", e + 1,
                                  s.train_loss, s.val_loss, s.val_accuracy, s.learning_rate);
                    csv << buf;
                }
            }
            std::printf("epochs %zu, best epoch %d, best validation accuracy %.6f\n",
                        result.report.epochs.size(), result.report.best_epoch + 1,
                        result.report.best_val_accuracy);
            return 0;
        }
        if (ev->parsed()) {
            expect_file_magic(eval_net, "HSN1", "checkpoint");
            expect_file_magic(eval_set_path, "HSP1", "patch set");
            const auto checkpoint = model::load_checkpoint(eval_net);
            const auto patches = dataset::read_patchset_file(eval_set_path);
            const auto [matrix, metrics] =
                evalviz::evaluate_patches(checkpoint.net, patches, eval_opts.threads);
            if (eval_out.empty()) {
                evalviz::write_metrics_report(matrix, metrics, std::cout);
            } else {
                std::ofstream out(eval_out);
                if (!out) throw IoError("cannot write " + eval_out.string());
                evalviz::write_metrics_report(matrix, metrics, out);
            }
            if (!eval_confusion.empty()) {
                std::ofstream out(eval_confusion);
                if (!out) throw IoError("cannot write " + eval_confusion.string());
                evalviz::write_confusion_table(matrix, out);
            }
            return 0;
        }
        if (pr->parsed()) {
            expect_file_magic(pred_net, "HSN1", "checkpoint");
            expect_file_magic(pred_cube, "HSC1", "cube");
            const auto checkpoint = model::load_checkpoint(pred_net);
            Hypercube cube = read_cube_file(pred_cube);
            BoolMask validity;
            if (!pred_validity.empty()) {
                expect_file_magic(pred_validity, "HSB1", "validity mask");
                validity = read_flags_file(pred_validity);
            }
            evalviz::PredictionMaps maps =
                evalviz::predict_image(checkpoint.net, cube, validity, pred_opts.threads);
            if (!pred_specular.empty()) {
                expect_file_magic(pred_specular, "HSB1", "specular mask");
                maps.labels = evalviz::postprocess_speculars(
                    maps.labels, read_flags_file(pred_specular), pred_window);
            }
            write_mask_file(maps.labels, pred_out);
            if (!pred_probs.empty()) {
                Hypercube probs(maps.height, maps.width,
                                BandSet(std::vector<float>{1, 2, 3, 4, 5}), Hypercube::Kind::Raw);
                probs.data = maps.probs;
                write_cube_file(probs, pred_probs);
            }
            return 0;
        }
        if (ov->parsed()) {
            expect_file_magic(ov_cube, "HSC1", "cube");
            expect_file_magic(ov_labels, "HSM1", "label map");
            const auto image =
                evalviz::render_overlay(read_cube_file(ov_cube), read_mask_file(ov_labels),
                                        ov_alpha);
            evalviz::write_ppm(image, ov_out);
            return 0;
        }
        if (rp->parsed()) {
            repro.threads = repro_threads.threads;
            const auto t0 = std::chrono::steady_clock::now();
            const auto summary = pipeline::run_repro(repro);
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::printf("scenes %d, patches %lld (muscle share %.3f)\n", summary.scenes,
                        static_cast<long long>(summary.patches_total), summary.muscle_share);
            std::printf("split: train %lld / validation %lld / eval %lld (eval subjects:",
                        static_cast<long long>(summary.train_patches),
                        static_cast<long long>(summary.validation_patches),
                        static_cast<long long>(summary.eval_patches));
            for (int s : summary.eval_subject_ids) std::printf(" %d", s);
            std::printf(")\n");
            std::printf("epochs %d, best %d, validation accuracy %.6f\n", summary.epochs_run,
                        summary.best_epoch, summary.validation_accuracy);
            std::printf("eval accuracy %.6f\n", summary.eval_accuracy);
            std::printf("wall time %.1f s\n", seconds);
            return 0;
        }
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
