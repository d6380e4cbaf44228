#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hsi/dataset/patch.hpp"
#include "hsi/model/net.hpp"
#include "hsi/model/optimizer.hpp"

namespace hsi::model {

struct TrainConfig {
    double learning_rate = 1.2e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int batch_size = 64;
    int max_epochs = 60;
    PlateauConfig plateau;
    uint64_t seed = 0;
    /// Stop once validation accuracy reaches this value; > 1 disables.
    double stop_at_val_accuracy = 2.0;
    int threads = 1;

    /// Progress hook, called after each epoch (0-based index). Purely
    /// observational; file outputs never depend on it.
    std::function<void(int, const struct EpochStats&)> on_epoch;

    void validate() const;
};

struct EpochStats {
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_accuracy = 0.0;
    double learning_rate = 0.0;  // rate used during this epoch
};

struct TrainReport {
    std::vector<EpochStats> epochs;
    int best_epoch = -1;  // 0-based index into `epochs`
    double best_val_accuracy = 0.0;
};

struct TrainResult {
    Conv3dNet net;  // best-validation-accuracy checkpoint
    AdamState adam;
    TrainReport report;
};

/// Full training protocol: seeded He init, seeded per-epoch shuffling,
/// mini-batch Adam with mean-reduced cross-entropy, per-epoch validation,
/// plateau scheduling, and best-checkpoint selection by validation accuracy
/// (ties keep the earliest epoch). Deterministic for a fixed config,
/// independent of the thread count.
TrainResult train(const dataset::PatchSet& train_set, const dataset::PatchSet& val_set,
                  const Architecture& arch, const TrainConfig& config);

/// Mean loss and accuracy of `net` over a patch set (used for validation).
std::pair<double, double> evaluate_loss_accuracy(const Conv3dNet& net,
                                                 const dataset::PatchSet& set, int threads);

}  // namespace hsi::model
