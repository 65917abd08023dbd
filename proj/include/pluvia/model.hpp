#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pluvia/conv1d.hpp"
#include "pluvia/dense.hpp"
#include "pluvia/lstm.hpp"

namespace pluvia {

/// Architecture constants. Defaults are the reference configuration:
/// Conv1D(32 filters, kernel 5, causal, relu) -> LSTM(64) -> LSTM(60) ->
/// Dense(30, relu) -> Dense(10, relu) -> Dense(1, linear) -> scale by S.
struct ModelConfig {
    std::size_t window_size = 64;
    std::size_t conv_filters = 32;
    std::size_t kernel_size = 5;
    std::size_t lstm1_units = 64;
    std::size_t lstm2_units = 60;
    bool lstm2_return_sequences = true;
    std::size_t dense1_units = 30;
    std::size_t dense2_units = 10;
    /// Output rescale S in mm; 0 means "resolve from the training split"
    /// (max precipitation seen in training). Checkpoints always carry the
    /// resolved positive value.
    double output_scale = 0.0;
};

struct CnnLstmModel {
    ModelConfig config;
    std::uint64_t init_seed = 0;
    Conv1dLayer conv;
    LstmLayer lstm1;
    LstmLayer lstm2;
    DenseLayer dense1;
    DenseLayer dense2;
    DenseLayer dense3;
};

/// Builds the layer stack with one deterministic RNG stream: conv kernels
/// first, then lstm1, lstm2, dense1..3 weights, in declaration order.
inline CnnLstmModel build_model(const ModelConfig& config, std::uint64_t seed) {
    CnnLstmModel m;
    m.config = config;
    m.init_seed = seed;
    Rng rng(seed);
    m.conv = make_conv1d(config.kernel_size, 1, config.conv_filters, rng, Activation::relu);
    m.lstm1 = make_lstm(config.conv_filters, config.lstm1_units, true, rng);
    m.lstm2 = make_lstm(config.lstm1_units, config.lstm2_units, config.lstm2_return_sequences, rng);
    m.dense1 = make_dense(config.lstm2_units, config.dense1_units, rng, Activation::relu);
    m.dense2 = make_dense(config.dense1_units, config.dense2_units, rng, Activation::relu);
    m.dense3 = make_dense(config.dense2_units, 1, rng, Activation::linear);
    return m;
}

/// Trainable parameters in the fixed order used by the optimizer and the
/// checkpoint format. The output scale is a normalization constant, not a
/// trainable parameter.
template <typename Model, typename TensorPtr>
inline std::vector<std::pair<std::string, TensorPtr>> parameter_entries(Model& m) {
    std::vector<std::pair<std::string, TensorPtr>> out;
    out.reserve(30);
    out.emplace_back("conv.kernels", &m.conv.kernels);
    out.emplace_back("conv.bias", &m.conv.bias);
    const auto add_lstm = [&out](const std::string& prefix, auto& l) {
        out.emplace_back(prefix + ".w_f", &l.W_f);
        out.emplace_back(prefix + ".w_i", &l.W_i);
        out.emplace_back(prefix + ".w_g", &l.W_g);
        out.emplace_back(prefix + ".w_o", &l.W_o);
        out.emplace_back(prefix + ".u_f", &l.U_f);
        out.emplace_back(prefix + ".u_i", &l.U_i);
        out.emplace_back(prefix + ".u_g", &l.U_g);
        out.emplace_back(prefix + ".u_o", &l.U_o);
        out.emplace_back(prefix + ".b_f", &l.b_f);
        out.emplace_back(prefix + ".b_i", &l.b_i);
        out.emplace_back(prefix + ".b_g", &l.b_g);
        out.emplace_back(prefix + ".b_o", &l.b_o);
    };
    add_lstm("lstm1", m.lstm1);
    add_lstm("lstm2", m.lstm2);
    out.emplace_back("dense1.weights", &m.dense1.weights);
    out.emplace_back("dense1.bias", &m.dense1.bias);
    out.emplace_back("dense2.weights", &m.dense2.weights);
    out.emplace_back("dense2.bias", &m.dense2.bias);
    out.emplace_back("dense3.weights", &m.dense3.weights);
    out.emplace_back("dense3.bias", &m.dense3.bias);
    return out;
}

inline std::vector<std::pair<std::string, Tensor*>> parameters(CnnLstmModel& m) {
    return parameter_entries<CnnLstmModel, Tensor*>(m);
}

inline std::vector<std::pair<std::string, const Tensor*>> parameters(const CnnLstmModel& m) {
    return parameter_entries<const CnnLstmModel, const Tensor*>(m);
}

inline std::size_t parameter_count(const CnnLstmModel& m) {
    std::size_t n = 0;
    for (const auto& [name, t] : parameters(m)) n += t->numel();
    return n;
}

struct ModelCache {
    Tensor input;       // [T x 1]
    Tensor conv_out;    // [T x filters]
    LstmCache lstm1;
    Tensor lstm1_out;   // [T x lstm1_units]
    LstmCache lstm2;
    Tensor lstm2_out;   // [T x lstm2_units] or [lstm2_units]
    Tensor dense1_out;
    Tensor dense2_out;
    Tensor dense3_out;  // pre-scale output
};

inline void check_window(const CnnLstmModel& m, const Tensor& window) {
    if (window.rank() != 2 || window.dim(0) != m.config.window_size || window.dim(1) != 1) {
        throw DimensionError("model: window " + window.shape_string() + " does not match [" +
                             std::to_string(m.config.window_size) + "x1]");
    }
}

/// Full stack. Output is [T x 1] (per-timestep predictions in mm) when the
/// second LSTM returns sequences, else [1 x 1].
inline Tensor model_forward_cached(const CnnLstmModel& m, const Tensor& window,
                                   ModelCache& cache) {
    check_window(m, window);
    cache.input = window;
    cache.conv_out = conv1d_forward(m.conv, window);
    cache.lstm1_out = lstm_forward_cached(m.lstm1, cache.conv_out, cache.lstm1);
    cache.lstm2_out = lstm_forward_cached(m.lstm2, cache.lstm1_out, cache.lstm2);
    cache.dense1_out = dense_forward(m.dense1, cache.lstm2_out);
    cache.dense2_out = dense_forward(m.dense2, cache.dense1_out);
    cache.dense3_out = dense_forward(m.dense3, cache.dense2_out);

    const std::size_t rows = m.config.lstm2_return_sequences ? m.config.window_size : 1;
    Tensor out({rows, 1});
    for (std::size_t t = 0; t < rows; ++t) out[t] = cache.dense3_out[t] * m.config.output_scale;
    return out;
}

inline Tensor model_forward(const CnnLstmModel& m, const Tensor& window) {
    ModelCache cache;
    return model_forward_cached(m, window, cache);
}

/// One-step-ahead forecast in mm: the last timestep of model_forward.
inline double model_predict_next(const CnnLstmModel& m, const Tensor& window) {
    const Tensor out = model_forward(m, window);
    return out[out.numel() - 1];
}

/// Gradients for every trainable parameter, aligned with parameters(m) order.
/// grad_out matches model_forward's output shape.
inline std::vector<Tensor> model_backward(const CnnLstmModel& m, const ModelCache& cache,
                                          const Tensor& grad_out) {
    const std::size_t rows = m.config.lstm2_return_sequences ? m.config.window_size : 1;
    if (grad_out.rank() != 2 || grad_out.dim(0) != rows || grad_out.dim(1) != 1) {
        throw DimensionError("model_backward: grad_out " + grad_out.shape_string() +
                             " does not match output [" + std::to_string(rows) + "x1]");
    }

    // OutputScale backward: multiply the incoming gradient by S.
    Tensor d3(cache.dense3_out.shape());
    for (std::size_t t = 0; t < rows; ++t) d3[t] = grad_out[t] * m.config.output_scale;

    const DenseGrads g3 = dense_backward(m.dense3, cache.dense2_out, d3);
    const DenseGrads g2 = dense_backward(m.dense2, cache.dense1_out, g3.input);
    const DenseGrads g1 = dense_backward(m.dense1, cache.lstm2_out, g2.input);
    const LstmGrads gl2 = lstm_backward(m.lstm2, cache.lstm2, g1.input);
    const LstmGrads gl1 = lstm_backward(m.lstm1, cache.lstm1, gl2.input);
    const Conv1dGrads gc = conv1d_backward(m.conv, cache.input, gl1.input);

    std::vector<Tensor> grads;
    grads.reserve(30);
    grads.push_back(gc.kernels);
    grads.push_back(gc.bias);
    const auto push_lstm = [&grads](const LstmGrads& g) {
        grads.push_back(g.W_f);
        grads.push_back(g.W_i);
        grads.push_back(g.W_g);
        grads.push_back(g.W_o);
        grads.push_back(g.U_f);
        grads.push_back(g.U_i);
        grads.push_back(g.U_g);
        grads.push_back(g.U_o);
        grads.push_back(g.b_f);
        grads.push_back(g.b_i);
        grads.push_back(g.b_g);
        grads.push_back(g.b_o);
    };
    push_lstm(gl1);
    push_lstm(gl2);
    grads.push_back(g1.weights);
    grads.push_back(g1.bias);
    grads.push_back(g2.weights);
    grads.push_back(g2.bias);
    grads.push_back(g3.weights);
    grads.push_back(g3.bias);
    return grads;
}

}  // namespace pluvia
