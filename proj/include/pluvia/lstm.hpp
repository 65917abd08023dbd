#pragma once

#include <cstddef>

#include "pluvia/tensor.hpp"

namespace pluvia {

/// Standard LSTM cell, rolled over a [T x F] input sequence with h0 = c0 = 0:
///   f_t = sigmoid(x_t W_f + h_{t-1} U_f + b_f)
///   i_t = sigmoid(x_t W_i + h_{t-1} U_i + b_i)
///   g_t = tanh   (x_t W_g + h_{t-1} U_g + b_g)
///   o_t = sigmoid(x_t W_o + h_{t-1} U_o + b_o)
///   c_t = f_t . c_{t-1} + i_t . g_t
///   h_t = o_t . tanh(c_t)
/// With return_sequences the forward pass emits every h_t, otherwise h_T only.
struct LstmLayer {
    std::size_t input_size = 0;
    std::size_t units = 0;
    bool return_sequences = true;
    Tensor W_f, W_i, W_g, W_o;  // [input_size x units]
    Tensor U_f, U_i, U_g, U_o;  // [units x units]
    Tensor b_f, b_i, b_g, b_o;  // [units]
};

/// Glorot for every weight matrix, zero biases. Draw order is fixed:
/// W_f, W_i, W_g, W_o, then U_f, U_i, U_g, U_o.
inline LstmLayer make_lstm(std::size_t input_size, std::size_t units, bool return_sequences,
                           Rng& rng) {
    if (input_size == 0 || units == 0) {
        throw ParameterError("lstm: input_size and units must be positive");
    }
    LstmLayer layer;
    layer.input_size = input_size;
    layer.units = units;
    layer.return_sequences = return_sequences;
    layer.W_f = glorot_uniform(rng, input_size, units, {input_size, units});
    layer.W_i = glorot_uniform(rng, input_size, units, {input_size, units});
    layer.W_g = glorot_uniform(rng, input_size, units, {input_size, units});
    layer.W_o = glorot_uniform(rng, input_size, units, {input_size, units});
    layer.U_f = glorot_uniform(rng, units, units, {units, units});
    layer.U_i = glorot_uniform(rng, units, units, {units, units});
    layer.U_g = glorot_uniform(rng, units, units, {units, units});
    layer.U_o = glorot_uniform(rng, units, units, {units, units});
    layer.b_f = Tensor({units});
    layer.b_i = Tensor({units});
    layer.b_g = Tensor({units});
    layer.b_o = Tensor({units});
    return layer;
}

/// Per-timestep activations saved by the forward pass for BPTT.
struct LstmCache {
    Tensor input;   // [T x F]
    Tensor f, i, g, o;  // [T x H], post-activation gate values
    Tensor c;       // [T x H]
    Tensor tanh_c;  // [T x H]
    Tensor h;       // [T x H]
};

namespace detail {

/// pre = b + x_t W + h_prev U, accumulated bias first, then input features
/// ascending, then hidden units ascending.
inline void lstm_gate_preactivation(const Tensor& W, const Tensor& U, const Tensor& b,
                                    const double* x_t, const double* h_prev, std::size_t F,
                                    std::size_t H, double* pre) {
    for (std::size_t j = 0; j < H; ++j) pre[j] = b[j];
    for (std::size_t k = 0; k < F; ++k) {
        const double xv = x_t[k];
        const double* wrow = W.data() + k * H;
        for (std::size_t j = 0; j < H; ++j) pre[j] += xv * wrow[j];
    }
    for (std::size_t k = 0; k < H; ++k) {
        const double hv = h_prev[k];
        const double* urow = U.data() + k * H;
        for (std::size_t j = 0; j < H; ++j) pre[j] += hv * urow[j];
    }
}

}  // namespace detail

inline Tensor lstm_forward_cached(const LstmLayer& layer, const Tensor& input, LstmCache& cache) {
    if (input.rank() != 2 || input.dim(1) != layer.input_size) {
        throw DimensionError("lstm: input " + input.shape_string() + " does not match " +
                             std::to_string(layer.input_size) + " feature(s)");
    }
    const std::size_t T = input.dim(0);
    const std::size_t F = layer.input_size;
    const std::size_t H = layer.units;

    cache.input = input;
    cache.f = Tensor({T, H});
    cache.i = Tensor({T, H});
    cache.g = Tensor({T, H});
    cache.o = Tensor({T, H});
    cache.c = Tensor({T, H});
    cache.tanh_c = Tensor({T, H});
    cache.h = Tensor({T, H});

    std::vector<double> pre(H);
    std::vector<double> h_prev(H, 0.0);
    std::vector<double> c_prev(H, 0.0);

    for (std::size_t t = 0; t < T; ++t) {
        const double* x_t = input.data() + t * F;
        double* f_t = cache.f.data() + t * H;
        double* i_t = cache.i.data() + t * H;
        double* g_t = cache.g.data() + t * H;
        double* o_t = cache.o.data() + t * H;
        double* c_t = cache.c.data() + t * H;
        double* tc_t = cache.tanh_c.data() + t * H;
        double* h_t = cache.h.data() + t * H;

        detail::lstm_gate_preactivation(layer.W_f, layer.U_f, layer.b_f, x_t, h_prev.data(), F, H,
                                        pre.data());
        for (std::size_t j = 0; j < H; ++j) f_t[j] = activate_scalar(pre[j], Activation::sigmoid);
        detail::lstm_gate_preactivation(layer.W_i, layer.U_i, layer.b_i, x_t, h_prev.data(), F, H,
                                        pre.data());
        for (std::size_t j = 0; j < H; ++j) i_t[j] = activate_scalar(pre[j], Activation::sigmoid);
        detail::lstm_gate_preactivation(layer.W_g, layer.U_g, layer.b_g, x_t, h_prev.data(), F, H,
                                        pre.data());
        for (std::size_t j = 0; j < H; ++j) g_t[j] = std::tanh(pre[j]);
        detail::lstm_gate_preactivation(layer.W_o, layer.U_o, layer.b_o, x_t, h_prev.data(), F, H,
                                        pre.data());
        for (std::size_t j = 0; j < H; ++j) o_t[j] = activate_scalar(pre[j], Activation::sigmoid);

        for (std::size_t j = 0; j < H; ++j) {
            c_t[j] = f_t[j] * c_prev[j] + i_t[j] * g_t[j];
            tc_t[j] = std::tanh(c_t[j]);
            h_t[j] = o_t[j] * tc_t[j];
        }
        for (std::size_t j = 0; j < H; ++j) {
            h_prev[j] = h_t[j];
            c_prev[j] = c_t[j];
        }
    }

    if (layer.return_sequences) return cache.h;
    Tensor last({H});
    for (std::size_t j = 0; j < H; ++j) last[j] = cache.h(T - 1, j);
    return last;
}

inline Tensor lstm_forward(const LstmLayer& layer, const Tensor& input) {
    LstmCache cache;
    return lstm_forward_cached(layer, input, cache);
}

struct LstmGrads {
    Tensor W_f, W_i, W_g, W_o;
    Tensor U_f, U_i, U_g, U_o;
    Tensor b_f, b_i, b_g, b_o;
    Tensor input;
};

/// Full backpropagation through time over the cached forward pass.
/// grad_out is [T x units] when the layer returns sequences, else [units]
/// (treated as the gradient at the final step).
inline LstmGrads lstm_backward(const LstmLayer& layer, const LstmCache& cache,
                               const Tensor& grad_out) {
    const std::size_t T = cache.input.dim(0);
    const std::size_t F = layer.input_size;
    const std::size_t H = layer.units;
    if (cache.input.rank() != 2 || cache.input.dim(1) != F || cache.h.numel() != T * H) {
        throw DimensionError("lstm_backward: cache does not match layer");
    }
    const bool seq_ok = layer.return_sequences && grad_out.rank() == 2 && grad_out.dim(0) == T &&
                        grad_out.dim(1) == H;
    const bool last_ok = !layer.return_sequences && grad_out.rank() == 1 && grad_out.dim(0) == H;
    if (!seq_ok && !last_ok) {
        throw DimensionError("lstm_backward: grad_out " + grad_out.shape_string() +
                             " does not match layer output");
    }

    LstmGrads grads;
    grads.W_f = Tensor({F, H});
    grads.W_i = Tensor({F, H});
    grads.W_g = Tensor({F, H});
    grads.W_o = Tensor({F, H});
    grads.U_f = Tensor({H, H});
    grads.U_i = Tensor({H, H});
    grads.U_g = Tensor({H, H});
    grads.U_o = Tensor({H, H});
    grads.b_f = Tensor({H});
    grads.b_i = Tensor({H});
    grads.b_g = Tensor({H});
    grads.b_o = Tensor({H});
    grads.input = Tensor({T, F});

    std::vector<double> dh(H, 0.0);      // dL/dh_t including recurrent flow
    std::vector<double> dc(H, 0.0);      // dL/dc_t carried from t+1
    std::vector<double> dq_f(H), dq_i(H), dq_g(H), dq_o(H);
    std::vector<double> dh_prev(H);

    for (std::size_t ti = T; ti-- > 0;) {
        const double* f_t = cache.f.data() + ti * H;
        const double* i_t = cache.i.data() + ti * H;
        const double* g_t = cache.g.data() + ti * H;
        const double* o_t = cache.o.data() + ti * H;
        const double* tc_t = cache.tanh_c.data() + ti * H;
        const double* x_t = cache.input.data() + ti * F;
        const double* h_prev = ti > 0 ? cache.h.data() + (ti - 1) * H : nullptr;
        const double* c_prev = ti > 0 ? cache.c.data() + (ti - 1) * H : nullptr;

        if (layer.return_sequences) {
            const double* go = grad_out.data() + ti * H;
            for (std::size_t j = 0; j < H; ++j) dh[j] += go[j];
        } else if (ti == T - 1) {
            for (std::size_t j = 0; j < H; ++j) dh[j] += grad_out[j];
        }

        for (std::size_t j = 0; j < H; ++j) {
            const double dct = dc[j] + dh[j] * o_t[j] * (1.0 - tc_t[j] * tc_t[j]);
            const double cp = ti > 0 ? c_prev[j] : 0.0;
            dq_o[j] = dh[j] * tc_t[j] * o_t[j] * (1.0 - o_t[j]);
            dq_f[j] = dct * cp * f_t[j] * (1.0 - f_t[j]);
            dq_i[j] = dct * g_t[j] * i_t[j] * (1.0 - i_t[j]);
            dq_g[j] = dct * i_t[j] * (1.0 - g_t[j] * g_t[j]);
            dc[j] = dct * f_t[j];
        }

        for (std::size_t j = 0; j < H; ++j) {
            grads.b_f[j] += dq_f[j];
            grads.b_i[j] += dq_i[j];
            grads.b_g[j] += dq_g[j];
            grads.b_o[j] += dq_o[j];
        }
        for (std::size_t k = 0; k < F; ++k) {
            const double xv = x_t[k];
            double* gwf = grads.W_f.data() + k * H;
            double* gwi = grads.W_i.data() + k * H;
            double* gwg = grads.W_g.data() + k * H;
            double* gwo = grads.W_o.data() + k * H;
            const double* wf = layer.W_f.data() + k * H;
            const double* wi = layer.W_i.data() + k * H;
            const double* wg = layer.W_g.data() + k * H;
            const double* wo = layer.W_o.data() + k * H;
            double acc = 0.0;
            for (std::size_t j = 0; j < H; ++j) {
                gwf[j] += xv * dq_f[j];
                gwi[j] += xv * dq_i[j];
                gwg[j] += xv * dq_g[j];
                gwo[j] += xv * dq_o[j];
                acc += dq_f[j] * wf[j] + dq_i[j] * wi[j] + dq_g[j] * wg[j] + dq_o[j] * wo[j];
            }
            grads.input(ti, k) = acc;
        }
        if (ti > 0) {
            for (std::size_t k = 0; k < H; ++k) {
                const double hv = h_prev[k];
                double* guf = grads.U_f.data() + k * H;
                double* gui = grads.U_i.data() + k * H;
                double* gug = grads.U_g.data() + k * H;
                double* guo = grads.U_o.data() + k * H;
                const double* uf = layer.U_f.data() + k * H;
                const double* ui = layer.U_i.data() + k * H;
                const double* ug = layer.U_g.data() + k * H;
                const double* uo = layer.U_o.data() + k * H;
                double acc = 0.0;
                for (std::size_t j = 0; j < H; ++j) {
                    guf[j] += hv * dq_f[j];
                    gui[j] += hv * dq_i[j];
                    gug[j] += hv * dq_g[j];
                    guo[j] += hv * dq_o[j];
                    acc += dq_f[j] * uf[j] + dq_i[j] * ui[j] + dq_g[j] * ug[j] + dq_o[j] * uo[j];
                }
                dh_prev[k] = acc;
            }
            for (std::size_t j = 0; j < H; ++j) dh[j] = dh_prev[j];
        }
    }
    return grads;
}

}  // namespace pluvia
