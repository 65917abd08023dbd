#pragma once

#include <cstddef>

#include "pluvia/tensor.hpp"

namespace pluvia {

/// Fully connected layer y = activation(x * weights + bias). A rank-2 input
/// [T x in] is mapped per timestep; a rank-1 input [in] gives a single row.
struct DenseLayer {
    std::size_t in_features = 0;
    std::size_t out_features = 0;
    Activation activation = Activation::relu;
    Tensor weights;  // [in_features, out_features]
    Tensor bias;     // [out_features]
};

inline DenseLayer make_dense(std::size_t in_features, std::size_t out_features, Rng& rng,
                             Activation act) {
    if (in_features == 0 || out_features == 0) {
        throw ParameterError("dense: feature counts must be positive");
    }
    DenseLayer layer;
    layer.in_features = in_features;
    layer.out_features = out_features;
    layer.activation = act;
    layer.weights = glorot_uniform(rng, in_features, out_features, {in_features, out_features});
    layer.bias = Tensor({out_features});
    return layer;
}

namespace detail {

inline void dense_check_input(const DenseLayer& layer, const Tensor& input) {
    const bool ok = (input.rank() == 1 && input.dim(0) == layer.in_features) ||
                    (input.rank() == 2 && input.dim(1) == layer.in_features);
    if (!ok) {
        throw DimensionError("dense: input " + input.shape_string() + " does not match " +
                             std::to_string(layer.in_features) + " feature(s)");
    }
}

inline std::size_t dense_rows(const Tensor& input) {
    return input.rank() == 1 ? 1 : input.dim(0);
}

/// z = x * W + b, accumulation over input features ascending.
inline Tensor dense_preactivation(const DenseLayer& layer, const Tensor& input) {
    dense_check_input(layer, input);
    const std::size_t T = dense_rows(input);
    const std::size_t in = layer.in_features;
    const std::size_t out = layer.out_features;
    Tensor z = input.rank() == 1 ? Tensor({out}) : Tensor({T, out});
    for (std::size_t t = 0; t < T; ++t) {
        double* zrow = z.data() + t * out;
        const double* xrow = input.data() + t * in;
        for (std::size_t j = 0; j < out; ++j) zrow[j] = layer.bias[j];
        for (std::size_t k = 0; k < in; ++k) {
            const double xv = xrow[k];
            const double* wrow = layer.weights.data() + k * out;
            for (std::size_t j = 0; j < out; ++j) zrow[j] += xv * wrow[j];
        }
    }
    return z;
}

}  // namespace detail

inline Tensor dense_forward(const DenseLayer& layer, const Tensor& input) {
    Tensor z = detail::dense_preactivation(layer, input);
    for (double& v : z.values()) v = activate_scalar(v, layer.activation);
    return z;
}

struct DenseGrads {
    Tensor weights;
    Tensor bias;
    Tensor input;
};

inline DenseGrads dense_backward(const DenseLayer& layer, const Tensor& input,
                                 const Tensor& grad_out) {
    detail::dense_check_input(layer, input);
    const std::size_t T = detail::dense_rows(input);
    const std::size_t in = layer.in_features;
    const std::size_t out = layer.out_features;
    const bool out_ok = (grad_out.rank() == input.rank()) &&
                        (grad_out.numel() == T * out) &&
                        (grad_out.rank() == 1 || grad_out.dim(0) == T);
    if (!out_ok) {
        throw DimensionError("dense_backward: grad_out " + grad_out.shape_string() +
                             " does not match output of " + std::to_string(out) + " feature(s)");
    }

    Tensor dz = detail::dense_preactivation(layer, input);
    for (std::size_t i = 0; i < dz.numel(); ++i) {
        dz[i] = grad_out[i] * activate_deriv_scalar(dz[i], layer.activation);
    }

    DenseGrads grads;
    grads.weights = Tensor({in, out});
    grads.bias = Tensor({out});
    grads.input = Tensor(input.shape());

    for (std::size_t t = 0; t < T; ++t) {
        const double* dzrow = dz.data() + t * out;
        const double* xrow = input.data() + t * in;
        double* dxrow = grads.input.data() + t * in;
        for (std::size_t j = 0; j < out; ++j) grads.bias[j] += dzrow[j];
        for (std::size_t k = 0; k < in; ++k) {
            const double xv = xrow[k];
            const double* wrow = layer.weights.data() + k * out;
            double* gwrow = grads.weights.data() + k * out;
            double acc = 0.0;
            for (std::size_t j = 0; j < out; ++j) {
                gwrow[j] += xv * dzrow[j];
                acc += dzrow[j] * wrow[j];
            }
            dxrow[k] = acc;
        }
    }
    return grads;
}

}  // namespace pluvia
