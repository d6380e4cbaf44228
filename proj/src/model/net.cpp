#include "hsi/model/net.hpp"

#include <sstream>

#include "hsi/error.hpp"

namespace hsi::model {

Architecture Architecture::standard() {
    Architecture a;
    a.in_h = 31;
    a.in_w = 31;
    a.in_d = 41;
    a.conv = {
        {1, 8, 3, 3, 3, false},
        {8, 8, 3, 3, 3, true},
        {8, 16, 3, 3, 3, false},
        {16, 16, 3, 3, 3, true},
        {16, 32, 3, 3, 3, false},
        {32, 32, 2, 2, 2, false},
    };
    a.fc = {
        {128, 64},
        {64, 32},
        {32, kNumTissueClasses},
    };
    return a;
}

std::vector<Architecture::Stage> Architecture::shape_trace() const {
    std::vector<Stage> trace;
    int h = in_h, w = in_w, d = in_d, c = 1;
    trace.push_back({"input", {h, w, d, c}});
    auto fail = [&](const std::string& at) {
        std::ostringstream msg;
        msg << "architecture: extent underflow at " << at << "; trace so far:";
        for (const Stage& s : trace) {
            msg << " " << s.name << "=" << s.shape[0] << "x" << s.shape[1] << "x" << s.shape[2]
                << "x" << s.shape[3];
        }
        throw ContractError(msg.str());
    };
    for (size_t i = 0; i < conv.size(); ++i) {
        const ConvSpec& cs = conv[i];
        if (cs.in_ch != c) fail("conv" + std::to_string(i + 1) + " (channel mismatch)");
        h -= cs.kh - 1;
        w -= cs.kw - 1;
        d -= cs.kd - 1;
        c = cs.out_ch;
        if (h <= 0 || w <= 0 || d <= 0) fail("conv" + std::to_string(i + 1));
        trace.push_back({"conv" + std::to_string(i + 1), {h, w, d, c}});
        if (cs.pool_after) {
            h /= 2;
            w /= 2;
            d /= 2;
            if (h <= 0 || w <= 0 || d <= 0) fail("pool after conv" + std::to_string(i + 1));
            trace.push_back({"pool" + std::to_string(i + 1), {h, w, d, c}});
        }
    }
    int flat = h * w * d * c;
    trace.push_back({"flatten", {flat, 1, 1, 1}});
    for (size_t i = 0; i < fc.size(); ++i) {
        if (fc[i].in != flat) fail("fc" + std::to_string(i + 1) + " (input mismatch)");
        flat = fc[i].out;
        trace.push_back({"fc" + std::to_string(i + 1), {flat, 1, 1, 1}});
    }
    return trace;
}

size_t Architecture::parameter_count() const {
    size_t n = 0;
    for (const ConvSpec& cs : conv) n += cs.weight_count() + static_cast<size_t>(cs.out_ch);
    for (const FcSpec& fs : fc) n += static_cast<size_t>(fs.in) * fs.out + static_cast<size_t>(fs.out);
    return n;
}

int Architecture::flatten_size() const {
    int h = in_h, w = in_w, d = in_d, c = 1;
    for (const ConvSpec& cs : conv) {
        h -= cs.kh - 1;
        w -= cs.kw - 1;
        d -= cs.kd - 1;
        c = cs.out_ch;
        if (cs.pool_after) {
            h /= 2;
            w /= 2;
            d /= 2;
        }
    }
    return h * w * d * c;
}

void Architecture::validate() const {
    if (conv.empty() || fc.empty()) {
        throw ContractError("architecture: needs at least one conv and one fc layer");
    }
    if (fc.back().out != kNumTissueClasses) {
        throw ContractError("architecture: final layer must emit " +
                            std::to_string(kNumTissueClasses) + " logits");
    }
    shape_trace();  // throws on any extent/channel mismatch
}

namespace {

template <typename Real>
void prepare_workspace(const Net<Real>& net, Workspace<Real>& ws) {
    const size_t n_conv = net.arch.conv.size();
    ws.conv_out.resize(n_conv);
    ws.pool_out.resize(n_conv);
    ws.pool_argmax.resize(n_conv);
    ws.fc_out.resize(net.arch.fc.size());
    for (size_t i = 0; i < net.arch.fc.size(); ++i) {
        if (ws.fc_out[i].size() != static_cast<size_t>(net.arch.fc[i].out)) {
            ws.fc_out[i].assign(static_cast<size_t>(net.arch.fc[i].out), Real(0));
        }
    }
}

}  // namespace

template <typename Real>
void forward(const Net<Real>& net, Workspace<Real>& ws, std::span<const float> patch) {
    const Architecture& arch = net.arch;
    const size_t expected =
        static_cast<size_t>(arch.in_h) * arch.in_w * arch.in_d;
    if (patch.size() != expected) {
        throw ContractError("forward: patch has " + std::to_string(patch.size()) +
                            " values, architecture expects " + std::to_string(expected));
    }
    prepare_workspace(net, ws);

    ws.input.resize(arch.in_h, arch.in_w, arch.in_d, 1);
    for (size_t i = 0; i < patch.size(); ++i) ws.input.v[i] = static_cast<Real>(patch[i]);
    if (net.check_numerics) check_finite<Real>(ws.input.v, "input");

    const Tensor<Real>* cur = &ws.input;
    for (size_t i = 0; i < arch.conv.size(); ++i) {
        conv3d_forward(*cur, arch.conv[i], net.conv_w(i), net.conv_b(i), ws.conv_out[i]);
        relu_forward<Real>(ws.conv_out[i].v);
        if (net.check_numerics) {
            check_finite<Real>(ws.conv_out[i].v, ("conv" + std::to_string(i + 1)).c_str());
        }
        cur = &ws.conv_out[i];
        if (arch.conv[i].pool_after) {
            maxpool3d_forward(*cur, ws.pool_out[i], ws.pool_argmax[i]);
            cur = &ws.pool_out[i];
        }
    }

    // Flatten is a view: tensor memory order (h, w, d, c) is the fc input order.
    std::span<const Real> x(cur->v.data(), cur->v.size());
    for (size_t i = 0; i < arch.fc.size(); ++i) {
        const FcSpec& fs = arch.fc[i];
        fc_forward<Real>(x, fs.in, fs.out, net.fc_w(i), net.fc_b(i),
                         std::span<Real>(ws.fc_out[i]));
        if (i + 1 < arch.fc.size()) relu_forward<Real>(std::span<Real>(ws.fc_out[i]));
        if (net.check_numerics) {
            check_finite<Real>(std::span<const Real>(ws.fc_out[i]),
                               ("fc" + std::to_string(i + 1)).c_str());
        }
        x = std::span<const Real>(ws.fc_out[i]);
    }

    softmax_cross_entropy<Real>(std::span<const Real>(ws.fc_out.back()), -1,
                                std::span<double>(ws.probs));
}

template <typename Real>
double loss_and_gradient(const Net<Real>& net, Workspace<Real>& ws, GradWorkspace<Real>& gws,
                         std::span<const float> patch, int label0, std::span<double> grad_out) {
    if (label0 < 0 || label0 >= kNumTissueClasses) {
        throw ContractError("loss_and_gradient: label index outside 0..4");
    }
    if (grad_out.size() != net.param_count()) {
        throw ContractError("loss_and_gradient: gradient buffer size mismatch");
    }
    forward(net, ws, patch);

    const Architecture& arch = net.arch;
    const size_t n_conv = arch.conv.size();
    const size_t n_fc = arch.fc.size();
    const double loss =
        softmax_cross_entropy<Real>(std::span<const Real>(ws.fc_out.back()), label0,
                                    std::span<double>(ws.probs), std::span<double>(gws.dlogits));

    // Fully connected chain, backwards.
    const int flatten = arch.flatten_size();
    size_t max_fc = static_cast<size_t>(flatten);
    for (const FcSpec& fs : arch.fc) max_fc = std::max(max_fc, static_cast<size_t>(fs.out));
    gws.fc_grad_a.assign(max_fc, 0.0);
    gws.fc_grad_b.assign(max_fc, 0.0);

    std::copy(gws.dlogits.begin(), gws.dlogits.end(), gws.fc_grad_a.begin());
    std::span<double> gy(gws.fc_grad_a.data(), static_cast<size_t>(arch.fc.back().out));

    const Tensor<Real>* conv_tail = &ws.conv_out.back();
    if (arch.conv.back().pool_after) conv_tail = &ws.pool_out.back();

    for (size_t i = n_fc; i-- > 0;) {
        const FcSpec& fs = arch.fc[i];
        std::span<const Real> x =
            i == 0 ? std::span<const Real>(conv_tail->v.data(), conv_tail->v.size())
                   : std::span<const Real>(ws.fc_out[i - 1]);
        std::span<double> gx(gws.fc_grad_b.data(), static_cast<size_t>(fs.in));
        const size_t base = net.offsets[2 * (n_conv + i)];
        fc_backward<Real>(x, fs.in, fs.out, net.fc_w(i), gy, grad_out.data() + base,
                          grad_out.data() + net.offsets[2 * (n_conv + i) + 1], gx);
        if (i > 0) relu_backward<Real>(std::span<const Real>(ws.fc_out[i - 1]), gx);
        std::swap(gws.fc_grad_a, gws.fc_grad_b);
        gy = std::span<double>(gws.fc_grad_a.data(), static_cast<size_t>(fs.in));
    }

    // Convolution chain. scratch[0] carries the incoming gradient, shaped like
    // the conv tail; reuse two tensors ping-pong style.
    if (gws.scratch.size() != 2) gws.scratch.resize(2);
    Tensor<double>* gcur = &gws.scratch[0];
    Tensor<double>* gprev = &gws.scratch[1];
    gcur->resize(conv_tail->h, conv_tail->w, conv_tail->d, conv_tail->c);
    std::copy(gy.begin(), gy.end(), gcur->v.begin());

    for (size_t i = n_conv; i-- > 0;) {
        const ConvSpec& cs = arch.conv[i];
        if (cs.pool_after) {
            const Tensor<Real>& pre_pool = ws.conv_out[i];
            maxpool3d_backward(ws.pool_argmax[i], *gcur, *gprev, pre_pool.h, pre_pool.w,
                               pre_pool.d, pre_pool.c);
            std::swap(gcur, gprev);
        }
        relu_backward<Real>(std::span<const Real>(ws.conv_out[i].v), std::span<double>(gcur->v));
        const Tensor<Real>& in =
            i == 0 ? ws.input
                   : (arch.conv[i - 1].pool_after ? ws.pool_out[i - 1] : ws.conv_out[i - 1]);
        conv3d_backward<Real>(in, cs, net.conv_w(i), *gcur, grad_out.data() + net.offsets[2 * i],
                              grad_out.data() + net.offsets[2 * i + 1],
                              i == 0 ? nullptr : gprev);
        std::swap(gcur, gprev);
    }
    return loss;
}

template void forward<float>(const Net<float>&, Workspace<float>&, std::span<const float>);
template void forward<double>(const Net<double>&, Workspace<double>&, std::span<const float>);
template double loss_and_gradient<float>(const Net<float>&, Workspace<float>&,
                                         GradWorkspace<float>&, std::span<const float>, int,
                                         std::span<double>);
template double loss_and_gradient<double>(const Net<double>&, Workspace<double>&,
                                          GradWorkspace<double>&, std::span<const float>, int,
                                          std::span<double>);

}  // namespace hsi::model
