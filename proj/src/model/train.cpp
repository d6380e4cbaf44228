#include "hsi/model/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>

#include "hsi/error.hpp"
#include "hsi/parallel.hpp"

namespace hsi::model {

void TrainConfig::validate() const {
    if (learning_rate < 0.0) throw ContractError("TrainConfig: negative learning rate");
    if (batch_size < 1) throw ContractError("TrainConfig: batch size must be >= 1");
    if (max_epochs < 1) throw ContractError("TrainConfig: max_epochs must be >= 1");
    if (!(plateau.factor > 0.0 && plateau.factor < 1.0)) {
        throw ContractError("TrainConfig: plateau factor must lie in (0, 1)");
    }
    if (plateau.patience < 1) throw ContractError("TrainConfig: plateau patience must be >= 1");
}

std::pair<double, double> evaluate_loss_accuracy(const Conv3dNet& net,
                                                 const dataset::PatchSet& set, int threads) {
    if (set.empty()) throw ContractError("evaluate_loss_accuracy: empty patch set");
    const int64_t n = static_cast<int64_t>(set.size());
    std::vector<double> losses(static_cast<size_t>(n));
    std::vector<uint8_t> correct(static_cast<size_t>(n));
    parallel_for(0, n, threads, [&](int64_t lo, int64_t hi) {
        Workspace<float> ws;
        for (int64_t i = lo; i < hi; ++i) {
            const dataset::Patch& p = set.patches[static_cast<size_t>(i)];
            forward(net, ws, std::span<const float>(p.data));
            const int label0 = static_cast<int>(p.label) - 1;
            losses[static_cast<size_t>(i)] = -std::log(
                std::max(ws.probs[static_cast<size_t>(label0)], 1e-300));
            correct[static_cast<size_t>(i)] = predicted_class(ws) == label0 ? 1 : 0;
        }
    });
    double loss_sum = 0.0;
    int64_t n_correct = 0;
    for (int64_t i = 0; i < n; ++i) {
        loss_sum += losses[static_cast<size_t>(i)];
        n_correct += correct[static_cast<size_t>(i)];
    }
    return {loss_sum / static_cast<double>(n),
            static_cast<double>(n_correct) / static_cast<double>(n)};
}

TrainResult train(const dataset::PatchSet& train_set, const dataset::PatchSet& val_set,
                  const Architecture& arch, const TrainConfig& config) {
    config.validate();
    if (train_set.empty() || val_set.empty()) {
        throw ContractError("train: training and validation sets must be non-empty");
    }
    const auto hist = train_set.class_histogram();
    for (int c = 1; c <= kNumTissueClasses; ++c) {
        if (hist[static_cast<size_t>(c)] == 0) {
            throw ValidationError(std::string("train: class ") +
                                  to_string(static_cast<TissueClass>(c)) +
                                  " is absent from the training set");
        }
    }

    TrainResult result;
    result.net = Conv3dNet::build(arch);
    result.net.init_he_uniform(config.seed);
    result.adam = AdamState(result.net.param_count());

    const size_t n_params = result.net.param_count();
    const int64_t n_train = static_cast<int64_t>(train_set.size());
    const int threads = std::max(1, config.threads);

    PlateauScheduler scheduler(config.learning_rate, config.plateau);
    AdamConfig adam_config{config.learning_rate, config.beta1, config.beta2, config.epsilon};

    // Per-sample gradient slots; reduced in sample order so results do not
    // depend on the thread count.
    const size_t batch_cap = static_cast<size_t>(std::min<int64_t>(config.batch_size, n_train));
    std::vector<std::vector<double>> sample_grads(batch_cap, std::vector<double>(n_params));
    std::vector<double> sample_losses(batch_cap);
    std::vector<double> batch_grad(n_params);

    std::vector<size_t> order(static_cast<size_t>(n_train));
    std::iota(order.begin(), order.end(), size_t{0});

    std::vector<Conv3dNet> best_net;  // snapshot storage without default ctor
    double best_acc = -1.0;
    int best_epoch = -1;

    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
        Rng shuffle_rng = Rng::derived(config.seed, /*stream=*/22, static_cast<uint64_t>(epoch));
        shuffle_rng.shuffle(std::span<size_t>(order));
        adam_config.learning_rate = scheduler.learning_rate();

        double train_loss_sum = 0.0;
        for (int64_t start = 0; start < n_train; start += config.batch_size) {
            const int64_t count = std::min<int64_t>(config.batch_size, n_train - start);
            parallel_for(0, count, threads, [&](int64_t lo, int64_t hi) {
                Workspace<float> ws;
                GradWorkspace<float> gws;
                for (int64_t s = lo; s < hi; ++s) {
                    const dataset::Patch& p =
                        train_set.patches[order[static_cast<size_t>(start + s)]];
                    sample_losses[static_cast<size_t>(s)] = loss_and_gradient(
                        result.net, ws, gws, std::span<const float>(p.data),
                        static_cast<int>(p.label) - 1,
                        std::span<double>(sample_grads[static_cast<size_t>(s)]));
                }
            });
            // Mean gradient, reduced in sample order.
            std::fill(batch_grad.begin(), batch_grad.end(), 0.0);
            for (int64_t s = 0; s < count; ++s) {
                const std::vector<double>& g = sample_grads[static_cast<size_t>(s)];
                for (size_t k = 0; k < n_params; ++k) batch_grad[k] += g[k];
                train_loss_sum += sample_losses[static_cast<size_t>(s)];
            }
            const double inv = 1.0 / static_cast<double>(count);
            for (double& g : batch_grad) g *= inv;
            adam_step(std::span<float>(result.net.params), std::span<const double>(batch_grad),
                      result.adam, adam_config);
        }

        const auto [val_loss, val_acc] = evaluate_loss_accuracy(result.net, val_set, threads);
        EpochStats stats;
        stats.train_loss = train_loss_sum / static_cast<double>(n_train);
        stats.val_loss = val_loss;
        stats.val_accuracy = val_acc;
        stats.learning_rate = adam_config.learning_rate;
        result.report.epochs.push_back(stats);
        if (config.on_epoch) config.on_epoch(epoch, stats);

        if (val_acc > best_acc) {
            best_acc = val_acc;
            best_epoch = epoch;
            best_net.clear();
            best_net.push_back(result.net);
        }
        scheduler.observe(val_loss);
        if (val_acc >= config.stop_at_val_accuracy) break;
    }

    result.report.best_epoch = best_epoch;
    result.report.best_val_accuracy = best_acc;
    if (!best_net.empty()) result.net = std::move(best_net.front());
    return result;
}

}  // namespace hsi::model
