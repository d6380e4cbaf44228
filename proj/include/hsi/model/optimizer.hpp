#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hsi::model {

struct AdamConfig {
    double learning_rate = 1.2e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// First/second moment estimates plus the step counter. Moments are stored in
/// float alongside the float parameters; the update math runs in double.
struct AdamState {
    std::vector<float> m;
    std::vector<float> v;
    uint64_t step = 0;

    explicit AdamState(size_t n = 0) : m(n, 0.0f), v(n, 0.0f) {}
};

/// One bias-corrected Adam update:
///   m <- b1*m + (1-b1)*g,  v <- b2*v + (1-b2)*g^2
///   theta <- theta - lr * m_hat / (sqrt(v_hat) + eps)
void adam_step(std::span<float> params, std::span<const double> grads, AdamState& state,
               const AdamConfig& config);

struct PlateauConfig {
    double factor = 0.5;
    int patience = 5;
    double min_lr = 1e-6;
    double threshold = 1e-5;  // absolute improvement below this is a plateau
};

/// Reduce-on-plateau learning-rate schedule over per-epoch validation losses.
/// After `patience` consecutive epochs without an improvement greater than
/// `threshold`, the rate is multiplied by `factor` (floored at `min_lr`) and
/// the stagnation counter resets.
class PlateauScheduler {
public:
    PlateauScheduler(double initial_lr, const PlateauConfig& config);

    /// Feed one epoch's validation loss; returns true when the rate dropped.
    bool observe(double validation_loss);

    double learning_rate() const { return lr_; }

private:
    PlateauConfig config_;
    double lr_;
    double best_ = 0.0;
    bool has_best_ = false;
    int stale_epochs_ = 0;
};

}  // namespace hsi::model
