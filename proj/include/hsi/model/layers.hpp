#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hsi/error.hpp"

namespace hsi::model {

/// Dense 4-D tensor ordered (h, w, d, c) with channels innermost; d is the
/// spectral axis. Activations are Real (float in production, double in
/// gradient-check mode); every reduction accumulates in 64-bit.
template <typename Real>
struct Tensor {
    int h = 0, w = 0, d = 0, c = 0;
    std::vector<Real> v;

    void resize(int H, int W, int D, int C) {
        h = H;
        w = W;
        d = D;
        c = C;
        v.assign(static_cast<size_t>(H) * W * D * C, Real(0));
    }

    size_t idx(int i, int j, int k, int ch) const {
        return ((static_cast<size_t>(i) * w + j) * d + k) * c + ch;
    }

    size_t size() const { return v.size(); }
    void zero() { std::fill(v.begin(), v.end(), Real(0)); }
};

struct ConvSpec {
    int in_ch = 0, out_ch = 0;
    int kh = 0, kw = 0, kd = 0;
    bool pool_after = false;

    size_t weight_count() const {
        return static_cast<size_t>(kh) * kw * kd * in_ch * out_ch;
    }
};

// ---------------------------------------------------------------------------
// 3-D convolution, valid (no padding), stride 1.
//
// out[oh,ow,od,o] = bias[o] + sum_{i,j,k,c} in[oh+i, ow+j, od+k, c] * w[i,j,k,c,o]
//
// Weights are laid out [kh][kw][kd][in][out] so the innermost loop runs over
// contiguous output channels. Accumulation is double, in (i, j, k, c) order
// with the bias first; that order is part of the contract (the reference
// oracle reproduces it bit for bit).
// ---------------------------------------------------------------------------

namespace detail {

// Fully shape-specialized kernel: constant trip counts let the compiler
// unroll and vectorize the accumulator block. The per-output accumulation
// order (bias, then (i, j, k, c)) is identical to the generic path and the
// documented contract, so results stay bit-exact across paths.
template <typename Real, int IN_CH, int OC, int KH, int KW, int KD>
void conv3d_forward_fixed(const Tensor<Real>& in, const Real* w, const Real* b,
                          Tensor<Real>& out) {
    const int oh_n = out.h, ow_n = out.w, od_n = out.d;
    for (int oh = 0; oh < oh_n; ++oh) {
        for (int ow = 0; ow < ow_n; ++ow) {
            Real* out_row = &out.v[out.idx(oh, ow, 0, 0)];
            for (int od = 0; od < od_n; ++od) {
                double acc[OC];
                for (int o = 0; o < OC; ++o) acc[o] = static_cast<double>(b[o]);
                for (int i = 0; i < KH; ++i) {
                    for (int j = 0; j < KW; ++j) {
                        const Real* in_ptr = &in.v[in.idx(oh + i, ow + j, od, 0)];
                        const Real* w_ptr =
                            &w[(static_cast<size_t>(i) * KW + j) * KD * IN_CH * OC];
                        for (int t = 0; t < KD * IN_CH; ++t) {
                            const double x = static_cast<double>(in_ptr[t]);
                            const Real* wr = w_ptr + static_cast<size_t>(t) * OC;
                            for (int o = 0; o < OC; ++o) {
                                acc[o] += x * static_cast<double>(wr[o]);
                            }
                        }
                    }
                }
                for (int o = 0; o < OC; ++o) {
                    out_row[static_cast<size_t>(od) * OC + o] = static_cast<Real>(acc[o]);
                }
            }
        }
    }
}

template <typename Real>
void conv3d_forward_generic(const Tensor<Real>& in, const ConvSpec& spec, const Real* w,
                            const Real* b, Tensor<Real>& out) {
    const int kh = spec.kh, kw = spec.kw, kd = spec.kd;
    const int in_ch = spec.in_ch, out_ch = spec.out_ch;
    std::vector<double> acc(static_cast<size_t>(out_ch));
    for (int oh = 0; oh < out.h; ++oh) {
        for (int ow = 0; ow < out.w; ++ow) {
            for (int od = 0; od < out.d; ++od) {
                for (int o = 0; o < out_ch; ++o) acc[static_cast<size_t>(o)] = b[o];
                for (int i = 0; i < kh; ++i) {
                    for (int j = 0; j < kw; ++j) {
                        for (int k = 0; k < kd; ++k) {
                            const Real* in_ptr = &in.v[in.idx(oh + i, ow + j, od + k, 0)];
                            const Real* w_ptr =
                                &w[((static_cast<size_t>(i) * kw + j) * kd + k) *
                                   static_cast<size_t>(in_ch) * out_ch];
                            for (int c = 0; c < in_ch; ++c) {
                                const double x = static_cast<double>(in_ptr[c]);
                                const Real* wr = w_ptr + static_cast<size_t>(c) * out_ch;
                                for (int o = 0; o < out_ch; ++o) {
                                    acc[static_cast<size_t>(o)] += x * static_cast<double>(wr[o]);
                                }
                            }
                        }
                    }
                }
                Real* out_ptr = &out.v[out.idx(oh, ow, od, 0)];
                for (int o = 0; o < out_ch; ++o) {
                    out_ptr[o] = static_cast<Real>(acc[static_cast<size_t>(o)]);
                }
            }
        }
    }
}

}  // namespace detail

template <typename Real>
void conv3d_forward(const Tensor<Real>& in, const ConvSpec& spec, const Real* w, const Real* b,
                    Tensor<Real>& out) {
    if (in.c != spec.in_ch) {
        throw ContractError("conv3d_forward: input has " + std::to_string(in.c) +
                            " channels, layer expects " + std::to_string(spec.in_ch));
    }
    const int oh = in.h - spec.kh + 1;
    const int ow = in.w - spec.kw + 1;
    const int od = in.d - spec.kd + 1;
    if (oh <= 0 || ow <= 0 || od <= 0) {
        throw ContractError("conv3d_forward: kernel " + std::to_string(spec.kh) + "x" +
                            std::to_string(spec.kw) + "x" + std::to_string(spec.kd) +
                            " does not fit input " + std::to_string(in.h) + "x" +
                            std::to_string(in.w) + "x" + std::to_string(in.d));
    }
    out.resize(oh, ow, od, spec.out_ch);
    // Fast paths for the six standard layer shapes; anything else goes generic.
    auto matches = [&](int ic, int oc, int k) {
        return spec.in_ch == ic && spec.out_ch == oc && spec.kh == k && spec.kw == k &&
               spec.kd == k;
    };
    if (matches(1, 8, 3)) {
        detail::conv3d_forward_fixed<Real, 1, 8, 3, 3, 3>(in, w, b, out);
    } else if (matches(8, 8, 3)) {
        detail::conv3d_forward_fixed<Real, 8, 8, 3, 3, 3>(in, w, b, out);
    } else if (matches(8, 16, 3)) {
        detail::conv3d_forward_fixed<Real, 8, 16, 3, 3, 3>(in, w, b, out);
    } else if (matches(16, 16, 3)) {
        detail::conv3d_forward_fixed<Real, 16, 16, 3, 3, 3>(in, w, b, out);
    } else if (matches(16, 32, 3)) {
        detail::conv3d_forward_fixed<Real, 16, 32, 3, 3, 3>(in, w, b, out);
    } else if (matches(32, 32, 2)) {
        detail::conv3d_forward_fixed<Real, 32, 32, 2, 2, 2>(in, w, b, out);
    } else {
        detail::conv3d_forward_generic(in, spec, w, b, out);
    }
}

namespace detail {

template <typename Real, bool WITH_GIN, int IN_CH, int OC, int KH, int KW, int KD>
void conv3d_backward_fixed(const Tensor<Real>& in, const Real* w, const Tensor<double>& gout,
                           double* gw, double* gb, Tensor<double>* gin) {
    for (int oh = 0; oh < gout.h; ++oh) {
        for (int ow = 0; ow < gout.w; ++ow) {
            for (int od = 0; od < gout.d; ++od) {
                const double* g = &gout.v[gout.idx(oh, ow, od, 0)];
                for (int o = 0; o < OC; ++o) gb[o] += g[o];
                for (int i = 0; i < KH; ++i) {
                    for (int j = 0; j < KW; ++j) {
                        const Real* in_ptr = &in.v[in.idx(oh + i, ow + j, od, 0)];
                        const size_t w_base =
                            (static_cast<size_t>(i) * KW + j) * KD * IN_CH * OC;
                        double* gin_ptr =
                            WITH_GIN ? &gin->v[gin->idx(oh + i, ow + j, od, 0)] : nullptr;
                        for (int t = 0; t < KD * IN_CH; ++t) {
                            const double x = static_cast<double>(in_ptr[t]);
                            double* gw_row = gw + w_base + static_cast<size_t>(t) * OC;
                            const Real* w_row = w + w_base + static_cast<size_t>(t) * OC;
                            double dot = 0.0;
                            for (int o = 0; o < OC; ++o) {
                                gw_row[o] += x * g[o];
                                dot += static_cast<double>(w_row[o]) * g[o];
                            }
                            if constexpr (WITH_GIN) gin_ptr[t] += dot;
                        }
                    }
                }
            }
        }
    }
}

template <typename Real, int IC, int OC, int K>
void conv3d_backward_dispatch(const Tensor<Real>& in, const Real* w, const Tensor<double>& gout,
                              double* gw, double* gb, Tensor<double>* gin) {
    if (gin) {
        conv3d_backward_fixed<Real, true, IC, OC, K, K, K>(in, w, gout, gw, gb, gin);
    } else {
        conv3d_backward_fixed<Real, false, IC, OC, K, K, K>(in, w, gout, gw, gb, nullptr);
    }
}

template <typename Real>
void conv3d_backward_generic(const Tensor<Real>& in, const ConvSpec& spec, const Real* w,
                             const Tensor<double>& gout, double* gw, double* gb,
                             Tensor<double>* gin) {
    const int kh = spec.kh, kw = spec.kw, kd = spec.kd;
    const int in_ch = spec.in_ch, out_ch = spec.out_ch;
    for (int oh = 0; oh < gout.h; ++oh) {
        for (int ow = 0; ow < gout.w; ++ow) {
            for (int od = 0; od < gout.d; ++od) {
                const double* g = &gout.v[gout.idx(oh, ow, od, 0)];
                for (int o = 0; o < out_ch; ++o) gb[o] += g[o];
                for (int i = 0; i < kh; ++i) {
                    for (int j = 0; j < kw; ++j) {
                        for (int k = 0; k < kd; ++k) {
                            const Real* in_ptr = &in.v[in.idx(oh + i, ow + j, od + k, 0)];
                            const size_t w_base = ((static_cast<size_t>(i) * kw + j) * kd + k) *
                                                  static_cast<size_t>(in_ch) * out_ch;
                            double* gin_ptr =
                                gin ? &gin->v[gin->idx(oh + i, ow + j, od + k, 0)] : nullptr;
                            for (int c = 0; c < in_ch; ++c) {
                                const double x = static_cast<double>(in_ptr[c]);
                                double* gw_row = gw + w_base + static_cast<size_t>(c) * out_ch;
                                const Real* w_row = w + w_base + static_cast<size_t>(c) * out_ch;
                                double dot = 0.0;
                                for (int o = 0; o < out_ch; ++o) {
                                    gw_row[o] += x * g[o];
                                    dot += static_cast<double>(w_row[o]) * g[o];
                                }
                                if (gin_ptr) gin_ptr[c] += dot;
                            }
                        }
                    }
                }
            }
        }
    }
}

}  // namespace detail

/// Backward pass of the valid 3-D convolution. `gout` is dL/d(out); fills
/// dL/d(weights) and dL/d(bias) (assign, double precision) and, when `gin` is
/// non-null, dL/d(in).
template <typename Real>
void conv3d_backward(const Tensor<Real>& in, const ConvSpec& spec, const Real* w,
                     const Tensor<double>& gout, double* gw, double* gb, Tensor<double>* gin) {
    std::fill(gw, gw + spec.weight_count(), 0.0);
    std::fill(gb, gb + spec.out_ch, 0.0);
    if (gin) gin->resize(in.h, in.w, in.d, in.c);

    auto matches = [&](int ic, int oc, int k) {
        return spec.in_ch == ic && spec.out_ch == oc && spec.kh == k && spec.kw == k &&
               spec.kd == k;
    };
    if (matches(1, 8, 3)) {
        detail::conv3d_backward_dispatch<Real, 1, 8, 3>(in, w, gout, gw, gb, gin);
    } else if (matches(8, 8, 3)) {
        detail::conv3d_backward_dispatch<Real, 8, 8, 3>(in, w, gout, gw, gb, gin);
    } else if (matches(8, 16, 3)) {
        detail::conv3d_backward_dispatch<Real, 8, 16, 3>(in, w, gout, gw, gb, gin);
    } else if (matches(16, 16, 3)) {
        detail::conv3d_backward_dispatch<Real, 16, 16, 3>(in, w, gout, gw, gb, gin);
    } else if (matches(16, 32, 3)) {
        detail::conv3d_backward_dispatch<Real, 16, 32, 3>(in, w, gout, gw, gb, gin);
    } else if (matches(32, 32, 2)) {
        detail::conv3d_backward_dispatch<Real, 32, 32, 2>(in, w, gout, gw, gb, gin);
    } else {
        detail::conv3d_backward_generic(in, spec, w, gout, gw, gb, gin);
    }
}

// ---------------------------------------------------------------------------
// ReLU
// ---------------------------------------------------------------------------

template <typename Real>
void relu_forward(std::span<Real> values) {
    for (Real& v : values) v = v > Real(0) ? v : Real(0);
}

/// Derivative gate from the stored post-activation values: the gradient passes
/// where the activation stayed positive.
template <typename Real>
void relu_backward(std::span<const Real> post_activation, std::span<double> grad) {
    for (size_t i = 0; i < grad.size(); ++i) {
        if (!(post_activation[i] > Real(0))) grad[i] = 0.0;
    }
}

// ---------------------------------------------------------------------------
// 2x2x2 max pooling, stride 2, floor semantics (odd remainders dropped).
// ---------------------------------------------------------------------------

template <typename Real>
void maxpool3d_forward(const Tensor<Real>& in, Tensor<Real>& out,
                       std::vector<int32_t>& argmax) {
    const int oh = in.h / 2, ow = in.w / 2, od = in.d / 2;
    if (oh == 0 || ow == 0 || od == 0) {
        throw ContractError("maxpool3d: input extent below 2 in some axis");
    }
    out.resize(oh, ow, od, in.c);
    argmax.assign(out.size(), -1);
    for (int i = 0; i < oh; ++i) {
        for (int j = 0; j < ow; ++j) {
            for (int k = 0; k < od; ++k) {
                for (int ch = 0; ch < in.c; ++ch) {
                    Real best{};
                    int32_t best_idx = -1;
                    for (int di = 0; di < 2; ++di) {
                        for (int dj = 0; dj < 2; ++dj) {
                            for (int dk = 0; dk < 2; ++dk) {
                                const size_t idx = in.idx(2 * i + di, 2 * j + dj, 2 * k + dk, ch);
                                const Real v = in.v[idx];
                                if (best_idx < 0 || v > best) {
                                    best = v;
                                    best_idx = static_cast<int32_t>(idx);
                                }
                            }
                        }
                    }
                    const size_t out_idx = out.idx(i, j, k, ch);
                    out.v[out_idx] = best;
                    argmax[out_idx] = best_idx;
                }
            }
        }
    }
}

/// Routes each output gradient to the argmax input position.
inline void maxpool3d_backward(const std::vector<int32_t>& argmax, const Tensor<double>& gout,
                               Tensor<double>& gin, int in_h, int in_w, int in_d, int in_c) {
    gin.resize(in_h, in_w, in_d, in_c);
    for (size_t i = 0; i < gout.size(); ++i) {
        gin.v[static_cast<size_t>(argmax[i])] += gout.v[i];
    }
}

// ---------------------------------------------------------------------------
// Fully connected layer; weights [in][out], biases [out].
// ---------------------------------------------------------------------------

template <typename Real>
void fc_forward(std::span<const Real> x, int in_n, int out_n, const Real* w, const Real* b,
                std::span<Real> y) {
    std::vector<double> acc(static_cast<size_t>(out_n));
    for (int o = 0; o < out_n; ++o) acc[static_cast<size_t>(o)] = static_cast<double>(b[o]);
    for (int i = 0; i < in_n; ++i) {
        const double xv = static_cast<double>(x[static_cast<size_t>(i)]);
        const Real* wr = w + static_cast<size_t>(i) * out_n;
        for (int o = 0; o < out_n; ++o) {
            acc[static_cast<size_t>(o)] += xv * static_cast<double>(wr[o]);
        }
    }
    for (int o = 0; o < out_n; ++o) {
        y[static_cast<size_t>(o)] = static_cast<Real>(acc[static_cast<size_t>(o)]);
    }
}

template <typename Real>
void fc_backward(std::span<const Real> x, int in_n, int out_n, const Real* w,
                 std::span<const double> gy, double* gw, double* gb, std::span<double> gx) {
    for (int o = 0; o < out_n; ++o) gb[o] = gy[static_cast<size_t>(o)];
    for (int i = 0; i < in_n; ++i) {
        const double xv = static_cast<double>(x[static_cast<size_t>(i)]);
        double* gw_row = gw + static_cast<size_t>(i) * out_n;
        const Real* w_row = w + static_cast<size_t>(i) * out_n;
        double dot = 0.0;
        for (int o = 0; o < out_n; ++o) {
            gw_row[o] = xv * gy[static_cast<size_t>(o)];
            dot += static_cast<double>(w_row[o]) * gy[static_cast<size_t>(o)];
        }
        gx[static_cast<size_t>(i)] = dot;
    }
}

// ---------------------------------------------------------------------------
// Softmax + cross-entropy head (always double).
// ---------------------------------------------------------------------------

/// Fills `probs` with softmax(logits); returns -log p[label] (0 if label < 0).
/// When `dlogits` is non-null it receives p - onehot(label).
template <typename Real>
double softmax_cross_entropy(std::span<const Real> logits, int label, std::span<double> probs,
                             std::span<double> dlogits = {}) {
    const size_t n = logits.size();
    double max_logit = static_cast<double>(logits[0]);
    for (size_t i = 1; i < n; ++i) {
        max_logit = std::max(max_logit, static_cast<double>(logits[i]));
    }
    double z = 0.0;
    for (size_t i = 0; i < n; ++i) {
        probs[i] = std::exp(static_cast<double>(logits[i]) - max_logit);
        z += probs[i];
    }
    for (size_t i = 0; i < n; ++i) probs[i] /= z;
    double loss = 0.0;
    if (label >= 0) {
        loss = std::log(z) + max_logit - static_cast<double>(logits[static_cast<size_t>(label)]);
    }
    if (!dlogits.empty()) {
        for (size_t i = 0; i < n; ++i) {
            dlogits[i] = probs[i] - (static_cast<int>(i) == label ? 1.0 : 0.0);
        }
    }
    return loss;
}

/// Throws NumericError when a non-finite value appears in `values`.
template <typename Real>
void check_finite(std::span<const Real> values, const char* stage) {
    for (Real v : values) {
        if (!std::isfinite(static_cast<double>(v))) {
            throw NumericError(std::string("non-finite activation after ") + stage);
        }
    }
}

}  // namespace hsi::model
