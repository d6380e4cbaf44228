#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "hsi/model/layers.hpp"
#include "hsi/rng.hpp"
#include "hsi/types.hpp"

namespace hsi::model {

struct FcSpec {
    int in = 0;
    int out = 0;
};

/// The classifier architecture: six valid 3-D convolutions with ReLU, max
/// pooling after conv2 and conv4, then three fully connected layers (ReLU
/// after the first two) and a softmax head over the five classes.
struct Architecture {
    int in_h = 31, in_w = 31, in_d = 41;
    std::vector<ConvSpec> conv;
    std::vector<FcSpec> fc;

    /// The fixed default: channels 1-8-8-16-16-32, 3x3x3 kernels except a
    /// 2x2x2 conv6, shape trace
    /// 31x31x41x1 -> 29x29x39x8 -> 27x27x37x8 -> 13x13x18x8 -> 11x11x16x16
    /// -> 9x9x14x16 -> 4x4x7x16 -> 2x2x5x32 -> 1x1x4x32 -> 128 -> 64 -> 32 -> 5.
    static Architecture standard();

    struct Stage {
        std::string name;
        std::array<int, 4> shape;  // h, w, d, c ({n,1,1,1} for fc outputs)
    };

    /// Per-stage output shapes; throws ContractError with the full trace if an
    /// extent underflows.
    std::vector<Stage> shape_trace() const;

    size_t parameter_count() const;
    int flatten_size() const;
    void validate() const;
};

/// Parameter container. One flat buffer in declaration order (conv1 weights,
/// conv1 bias, ..., conv6 bias, fc1 weights, fc1 bias, ..., fc3 bias); the
/// checkpoint format serializes exactly this buffer.
template <typename Real>
struct Net {
    Architecture arch;
    std::vector<Real> params;
    std::vector<size_t> offsets;  // 2 per layer + terminating total
    bool check_numerics = true;

    static Net build(const Architecture& a) {
        a.validate();
        Net net;
        net.arch = a;
        net.offsets.reserve(2 * (a.conv.size() + a.fc.size()) + 1);
        size_t off = 0;
        for (const ConvSpec& cs : a.conv) {
            net.offsets.push_back(off);
            off += cs.weight_count();
            net.offsets.push_back(off);
            off += static_cast<size_t>(cs.out_ch);
        }
        for (const FcSpec& fs : a.fc) {
            net.offsets.push_back(off);
            off += static_cast<size_t>(fs.in) * fs.out;
            net.offsets.push_back(off);
            off += static_cast<size_t>(fs.out);
        }
        net.offsets.push_back(off);
        net.params.assign(off, Real(0));
        return net;
    }

    size_t param_count() const { return params.size(); }

    Real* conv_w(size_t i) { return params.data() + offsets[2 * i]; }
    const Real* conv_w(size_t i) const { return params.data() + offsets[2 * i]; }
    Real* conv_b(size_t i) { return params.data() + offsets[2 * i + 1]; }
    const Real* conv_b(size_t i) const { return params.data() + offsets[2 * i + 1]; }

    Real* fc_w(size_t i) { return params.data() + offsets[2 * (arch.conv.size() + i)]; }
    const Real* fc_w(size_t i) const {
        return params.data() + offsets[2 * (arch.conv.size() + i)];
    }
    Real* fc_b(size_t i) { return params.data() + offsets[2 * (arch.conv.size() + i) + 1]; }
    const Real* fc_b(size_t i) const {
        return params.data() + offsets[2 * (arch.conv.size() + i) + 1];
    }

    /// He-uniform fan-in initialization for weights, zero biases. Parameters
    /// are drawn in declaration order from one derived stream.
    void init_he_uniform(uint64_t seed) {
        Rng rng = Rng::derived(seed, /*stream=*/21);
        for (size_t i = 0; i < arch.conv.size(); ++i) {
            const ConvSpec& cs = arch.conv[i];
            const double fan_in = static_cast<double>(cs.in_ch) * cs.kh * cs.kw * cs.kd;
            const double limit = std::sqrt(6.0 / fan_in);
            Real* w = conv_w(i);
            for (size_t k = 0; k < cs.weight_count(); ++k) {
                w[k] = static_cast<Real>(rng.uniform(-limit, limit));
            }
        }
        for (size_t i = 0; i < arch.fc.size(); ++i) {
            const FcSpec& fs = arch.fc[i];
            const double limit = std::sqrt(6.0 / static_cast<double>(fs.in));
            Real* w = fc_w(i);
            for (size_t k = 0; k < static_cast<size_t>(fs.in) * fs.out; ++k) {
                w[k] = static_cast<Real>(rng.uniform(-limit, limit));
            }
        }
    }
};

using Conv3dNet = Net<float>;

/// Per-thread forward state: every activation the backward pass needs.
template <typename Real>
struct Workspace {
    Tensor<Real> input;
    std::vector<Tensor<Real>> conv_out;              // post-ReLU
    std::vector<Tensor<Real>> pool_out;              // only for pool_after stages
    std::vector<std::vector<int32_t>> pool_argmax;
    std::vector<std::vector<Real>> fc_out;           // post-ReLU; last entry = raw logits
    std::array<double, kNumTissueClasses> probs{};
};

/// Runs the full forward pass; fills the workspace and the softmax
/// probabilities. `patch` is the 31*31*41 reflectance window (row, column,
/// band order), which is exactly the (h, w, d, 1-channel) input tensor.
template <typename Real>
void forward(const Net<Real>& net, Workspace<Real>& ws, std::span<const float> patch);

/// Index 0..4 of the most probable class after forward().
template <typename Real>
int predicted_class(const Workspace<Real>& ws) {
    int best = 0;
    for (int i = 1; i < kNumTissueClasses; ++i) {
        if (ws.probs[static_cast<size_t>(i)] > ws.probs[static_cast<size_t>(best)]) best = i;
    }
    return best;
}

/// Per-thread backward scratch (gradients w.r.t. activations, all double).
template <typename Real>
struct GradWorkspace {
    std::vector<Tensor<double>> scratch;  // ping-pong activation gradients
    std::vector<double> fc_grad_a, fc_grad_b;
    std::array<double, kNumTissueClasses> dlogits{};
};

/// Forward + backward for one sample. Writes dL/d(params) for this sample
/// into `grad_out` (assigned, not accumulated) and returns the cross-entropy
/// loss. `label0` is the 0-based class index.
template <typename Real>
double loss_and_gradient(const Net<Real>& net, Workspace<Real>& ws, GradWorkspace<Real>& gws,
                         std::span<const float> patch, int label0, std::span<double> grad_out);

extern template void forward<float>(const Net<float>&, Workspace<float>&,
                                    std::span<const float>);
extern template void forward<double>(const Net<double>&, Workspace<double>&,
                                     std::span<const float>);
extern template double loss_and_gradient<float>(const Net<float>&, Workspace<float>&,
                                                GradWorkspace<float>&, std::span<const float>,
                                                int, std::span<double>);
extern template double loss_and_gradient<double>(const Net<double>&, Workspace<double>&,
                                                 GradWorkspace<double>&, std::span<const float>,
                                                 int, std::span<double>);

}  // namespace hsi::model
