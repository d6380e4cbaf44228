#include "hsi/model/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "hsi/error.hpp"

namespace hsi::model {

void adam_step(std::span<float> params, std::span<const double> grads, AdamState& state,
               const AdamConfig& config) {
    if (params.size() != grads.size() || state.m.size() != params.size() ||
        state.v.size() != params.size()) {
        throw ContractError("adam_step: parameter/gradient/state size mismatch");
    }
    state.step += 1;
    const double b1 = config.beta1;
    const double b2 = config.beta2;
    const double bias1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double bias2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
    for (size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        const double m = b1 * static_cast<double>(state.m[i]) + (1.0 - b1) * g;
        const double v = b2 * static_cast<double>(state.v[i]) + (1.0 - b2) * g * g;
        state.m[i] = static_cast<float>(m);
        state.v[i] = static_cast<float>(v);
        const double m_hat = m / bias1;
        const double v_hat = v / bias2;
        params[i] = static_cast<float>(static_cast<double>(params[i]) -
                                       config.learning_rate * m_hat /
                                           (std::sqrt(v_hat) + config.epsilon));
    }
}

PlateauScheduler::PlateauScheduler(double initial_lr, const PlateauConfig& config)
    : config_(config), lr_(initial_lr) {
    if (!(config.factor > 0.0 && config.factor < 1.0)) {
        throw ContractError("PlateauScheduler: factor must lie in (0, 1)");
    }
    if (config.patience < 1) throw ContractError("PlateauScheduler: patience must be >= 1");
}

bool PlateauScheduler::observe(double validation_loss) {
    if (!has_best_ || validation_loss < best_ - config_.threshold) {
        best_ = validation_loss;
        has_best_ = true;
        stale_epochs_ = 0;
        return false;
    }
    if (++stale_epochs_ >= config_.patience) {
        stale_epochs_ = 0;
        const double reduced = std::max(lr_ * config_.factor, config_.min_lr);
        const bool changed = reduced < lr_;
        lr_ = reduced;
        return changed;
    }
    return false;
}

}  // namespace hsi::model
