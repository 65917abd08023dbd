#pragma once

#include <cstddef>

#include "pluvia/tensor.hpp"

namespace pluvia {

/// Causal 1-D convolution: the input is implicitly left-padded with
/// kernel_size - 1 zeros, so the output has the same length as the input and
/// output t depends only on inputs at times <= t.
struct Conv1dLayer {
    std::size_t kernel_size = 5;
    std::size_t in_channels = 1;
    std::size_t filters = 32;
    Activation activation = Activation::relu;
    Tensor kernels;  // [kernel_size, in_channels, filters]
    Tensor bias;     // [filters]
};

/// Glorot-initialized kernels (fan_in = kernel_size * in_channels,
/// fan_out = filters), zero bias.
inline Conv1dLayer make_conv1d(std::size_t kernel_size, std::size_t in_channels,
                               std::size_t filters, Rng& rng,
                               Activation act = Activation::relu) {
    if (kernel_size == 0 || in_channels == 0 || filters == 0) {
        throw ParameterError("conv1d: kernel_size, in_channels and filters must be positive");
    }
    Conv1dLayer layer;
    layer.kernel_size = kernel_size;
    layer.in_channels = in_channels;
    layer.filters = filters;
    layer.activation = act;
    layer.kernels =
        glorot_uniform(rng, kernel_size * in_channels, filters, {kernel_size, in_channels, filters});
    layer.bias = Tensor({filters});
    return layer;
}

namespace detail {

/// Pre-activation map z[t,f] = bias[f] + sum_{k,c} kernels[k,c,f] * x[t-(K-1)+k, c],
/// with out-of-range x treated as zero. Accumulation order is fixed
/// (k ascending, then c ascending) for determinism.
inline Tensor conv1d_preactivation(const Conv1dLayer& layer, const Tensor& input) {
    if (input.rank() != 2 || input.dim(1) != layer.in_channels) {
        throw DimensionError("conv1d: input " + input.shape_string() + " does not match " +
                             std::to_string(layer.in_channels) + " channel(s)");
    }
    const std::size_t T = input.dim(0);
    const std::size_t K = layer.kernel_size;
    const std::size_t C = layer.in_channels;
    const std::size_t F = layer.filters;
    Tensor z({T, F});
    for (std::size_t t = 0; t < T; ++t) {
        double* zrow = z.data() + t * F;
        for (std::size_t f = 0; f < F; ++f) zrow[f] = layer.bias[f];
        for (std::size_t k = 0; k < K; ++k) {
            const std::ptrdiff_t tau = static_cast<std::ptrdiff_t>(t + k) -
                                       static_cast<std::ptrdiff_t>(K - 1);
            if (tau < 0) continue;
            for (std::size_t c = 0; c < C; ++c) {
                const double xv = input(static_cast<std::size_t>(tau), c);
                const double* wrow = layer.kernels.data() + (k * C + c) * F;
                for (std::size_t f = 0; f < F; ++f) zrow[f] += wrow[f] * xv;
            }
        }
    }
    return z;
}

}  // namespace detail

inline Tensor conv1d_forward(const Conv1dLayer& layer, const Tensor& input) {
    Tensor z = detail::conv1d_preactivation(layer, input);
    for (double& v : z.values()) v = activate_scalar(v, layer.activation);
    return z;
}

struct Conv1dGrads {
    Tensor kernels;
    Tensor bias;
    Tensor input;
};

/// Exact gradients of conv1d_forward, including the activation mask.
/// The pre-activation is recomputed from the stored input.
inline Conv1dGrads conv1d_backward(const Conv1dLayer& layer, const Tensor& input,
                                   const Tensor& grad_out) {
    const std::size_t T = input.dim(0);
    const std::size_t K = layer.kernel_size;
    const std::size_t C = layer.in_channels;
    const std::size_t F = layer.filters;
    if (grad_out.rank() != 2 || grad_out.dim(0) != T || grad_out.dim(1) != F) {
        throw DimensionError("conv1d_backward: grad_out " + grad_out.shape_string() +
                             " does not match output [" + std::to_string(T) + "x" +
                             std::to_string(F) + "]");
    }

    Tensor dz = detail::conv1d_preactivation(layer, input);
    for (std::size_t i = 0; i < dz.numel(); ++i) {
        dz[i] = grad_out[i] * activate_deriv_scalar(dz[i], layer.activation);
    }

    Conv1dGrads grads;
    grads.kernels = Tensor({K, C, F});
    grads.bias = Tensor({F});
    grads.input = Tensor({T, C});

    for (std::size_t t = 0; t < T; ++t) {
        const double* dzrow = dz.data() + t * F;
        for (std::size_t f = 0; f < F; ++f) grads.bias[f] += dzrow[f];
        for (std::size_t k = 0; k < K; ++k) {
            const std::ptrdiff_t tau = static_cast<std::ptrdiff_t>(t + k) -
                                       static_cast<std::ptrdiff_t>(K - 1);
            if (tau < 0) continue;
            const std::size_t ts = static_cast<std::size_t>(tau);
            for (std::size_t c = 0; c < C; ++c) {
                const double xv = input(ts, c);
                const double* wrow = layer.kernels.data() + (k * C + c) * F;
                double* gwrow = grads.kernels.data() + (k * C + c) * F;
                double acc = 0.0;
                for (std::size_t f = 0; f < F; ++f) {
                    gwrow[f] += dzrow[f] * xv;
                    acc += dzrow[f] * wrow[f];
                }
                grads.input(ts, c) += acc;
            }
        }
    }
    return grads;
}

}  // namespace pluvia
