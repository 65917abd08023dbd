#pragma once

#include <string>
#include <vector>

#include "pluvia/conv1d.hpp"
#include "pluvia/dense.hpp"
#include "pluvia/gradcheck.hpp"
#include "pluvia/lstm.hpp"
#include "pluvia/training.hpp"

namespace pluvia {

struct GradCheckResult {
    std::string layer;
    double max_rel_err = 0.0;
    std::size_t cases = 0;
};

constexpr double kGradCheckEps = 1e-5;
constexpr double kGradCheckTolerance = 1e-4;

namespace detail {

inline void fill_uniform(Tensor& t, Rng& rng, double lo = -1.0, double hi = 1.0) {
    for (double& v : t.values()) v = rng.next_uniform(lo, hi);
}

inline double project(const Tensor& y, const Tensor& r) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.numel(); ++i) s += y[i] * r[i];
    return s;
}

}  // namespace detail

/// Finite-difference check of conv1d_backward over random small shapes.
inline GradCheckResult gradcheck_conv1d(std::uint64_t seed, std::size_t cases) {
    GradCheckResult result{"conv1d", 0.0, cases};
    Rng rng(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        const std::size_t T = 2 + rng.next_index(5);
        const std::size_t C = 1 + rng.next_index(3);
        const std::size_t K = 1 + rng.next_index(4);
        const std::size_t F = 1 + rng.next_index(3);
        Conv1dLayer layer = make_conv1d(K, C, F, rng);
        detail::fill_uniform(layer.bias, rng);
        Tensor x({T, C});
        detail::fill_uniform(x, rng);
        Tensor r({T, F});
        detail::fill_uniform(r, rng);

        const Conv1dGrads analytic = conv1d_backward(layer, x, r);
        const auto check = [&](const Tensor& got, const std::function<double(const Tensor&)>& f,
                               const Tensor& at) {
            const Tensor numeric = finite_diff_grad(f, at, kGradCheckEps);
            result.max_rel_err = std::max(result.max_rel_err, max_rel_error(got, numeric));
        };
        check(analytic.kernels,
              [&](const Tensor& t) {
                  Conv1dLayer l = layer;
                  l.kernels = t;
                  return detail::project(conv1d_forward(l, x), r);
              },
              layer.kernels);
        check(analytic.bias,
              [&](const Tensor& t) {
                  Conv1dLayer l = layer;
                  l.bias = t;
                  return detail::project(conv1d_forward(l, x), r);
              },
              layer.bias);
        check(analytic.input,
              [&](const Tensor& t) { return detail::project(conv1d_forward(layer, t), r); }, x);
    }
    return result;
}

inline GradCheckResult gradcheck_lstm(std::uint64_t seed, std::size_t cases) {
    GradCheckResult result{"lstm", 0.0, cases};
    Rng rng(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        const std::size_t T = 1 + rng.next_index(4);
        const std::size_t F = 1 + rng.next_index(3);
        const std::size_t H = 1 + rng.next_index(5);
        const bool seq = (c % 2) == 0;
        LstmLayer layer = make_lstm(F, H, seq, rng);
        for (Tensor* b : {&layer.b_f, &layer.b_i, &layer.b_g, &layer.b_o}) {
            detail::fill_uniform(*b, rng, -0.5, 0.5);
        }
        Tensor x({T, F});
        detail::fill_uniform(x, rng);
        Tensor r(seq ? std::vector<std::size_t>{T, H} : std::vector<std::size_t>{H});
        detail::fill_uniform(r, rng);

        LstmCache cache;
        lstm_forward_cached(layer, x, cache);
        const LstmGrads analytic = lstm_backward(layer, cache, r);

        const std::vector<Tensor LstmLayer::*> members = {
            &LstmLayer::W_f, &LstmLayer::W_i, &LstmLayer::W_g, &LstmLayer::W_o,
            &LstmLayer::U_f, &LstmLayer::U_i, &LstmLayer::U_g, &LstmLayer::U_o,
            &LstmLayer::b_f, &LstmLayer::b_i, &LstmLayer::b_g, &LstmLayer::b_o};
        const std::vector<const Tensor LstmGrads::*> grad_members = {
            &LstmGrads::W_f, &LstmGrads::W_i, &LstmGrads::W_g, &LstmGrads::W_o,
            &LstmGrads::U_f, &LstmGrads::U_i, &LstmGrads::U_g, &LstmGrads::U_o,
            &LstmGrads::b_f, &LstmGrads::b_i, &LstmGrads::b_g, &LstmGrads::b_o};
        for (std::size_t mi = 0; mi < members.size(); ++mi) {
            const Tensor numeric = finite_diff_grad(
                [&](const Tensor& t) {
                    LstmLayer l = layer;
                    l.*members[mi] = t;
                    return detail::project(lstm_forward(l, x), r);
                },
                layer.*members[mi], kGradCheckEps);
            result.max_rel_err =
                std::max(result.max_rel_err, max_rel_error(analytic.*grad_members[mi], numeric));
        }
        const Tensor numeric_input = finite_diff_grad(
            [&](const Tensor& t) { return detail::project(lstm_forward(layer, t), r); }, x,
            kGradCheckEps);
        result.max_rel_err =
            std::max(result.max_rel_err, max_rel_error(analytic.input, numeric_input));
    }
    return result;
}

inline GradCheckResult gradcheck_dense(std::uint64_t seed, std::size_t cases) {
    GradCheckResult result{"dense", 0.0, cases};
    Rng rng(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        const std::size_t T = 1 + rng.next_index(6);
        const std::size_t in = 1 + rng.next_index(4);
        const std::size_t out = 1 + rng.next_index(4);
        const Activation act = (c % 2) == 0 ? Activation::relu : Activation::linear;
        DenseLayer layer = make_dense(in, out, rng, act);
        detail::fill_uniform(layer.bias, rng, -0.5, 0.5);
        Tensor x({T, in});
        detail::fill_uniform(x, rng);
        Tensor r({T, out});
        detail::fill_uniform(r, rng);

        const DenseGrads analytic = dense_backward(layer, x, r);
        const Tensor num_w = finite_diff_grad(
            [&](const Tensor& t) {
                DenseLayer l = layer;
                l.weights = t;
                return detail::project(dense_forward(l, x), r);
            },
            layer.weights, kGradCheckEps);
        const Tensor num_b = finite_diff_grad(
            [&](const Tensor& t) {
                DenseLayer l = layer;
                l.bias = t;
                return detail::project(dense_forward(l, x), r);
            },
            layer.bias, kGradCheckEps);
        const Tensor num_x = finite_diff_grad(
            [&](const Tensor& t) { return detail::project(dense_forward(layer, t), r); }, x,
            kGradCheckEps);
        result.max_rel_err = std::max(result.max_rel_err, max_rel_error(analytic.weights, num_w));
        result.max_rel_err = std::max(result.max_rel_err, max_rel_error(analytic.bias, num_b));
        result.max_rel_err = std::max(result.max_rel_err, max_rel_error(analytic.input, num_x));
    }
    return result;
}

/// The output rescale layer y = x * S; its backward is multiplication by S.
inline GradCheckResult gradcheck_output_scale(std::uint64_t seed, std::size_t cases) {
    GradCheckResult result{"output_scale", 0.0, cases};
    Rng rng(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        const std::size_t T = 1 + rng.next_index(6);
        const double scale = rng.next_uniform(0.5, 400.0);
        Tensor x({T, 1});
        detail::fill_uniform(x, rng);
        Tensor r({T, 1});
        detail::fill_uniform(r, rng);

        Tensor analytic({T, 1});
        for (std::size_t i = 0; i < T; ++i) analytic[i] = r[i] * scale;
        const Tensor numeric = finite_diff_grad(
            [&](const Tensor& t) {
                Tensor y = t;
                for (double& v : y.values()) v *= scale;
                return detail::project(y, r);
            },
            x, kGradCheckEps);
        result.max_rel_err = std::max(result.max_rel_err, max_rel_error(analytic, numeric));
    }
    return result;
}

/// huber_grad against central differences of huber_loss; residuals within
/// 10*eps of the |r| = delta kink are excluded (non-differentiable corner).
inline GradCheckResult gradcheck_huber(std::uint64_t seed, std::size_t cases) {
    GradCheckResult result{"huber", 0.0, cases};
    Rng rng(seed);
    std::size_t done = 0;
    while (done < cases) {
        const double delta = rng.next_uniform(0.25, 2.0);
        const double y = rng.next_uniform(-3.0, 3.0);
        const double yhat = rng.next_uniform(-3.0, 3.0);
        if (std::fabs(std::fabs(yhat - y) - delta) < 10.0 * kGradCheckEps) continue;
        Tensor at({1});
        at[0] = yhat;
        const Tensor numeric = finite_diff_grad(
            [&](const Tensor& t) { return huber_loss(y, t[0], delta); }, at, kGradCheckEps);
        Tensor analytic({1});
        analytic[0] = huber_grad(y, yhat, delta);
        result.max_rel_err = std::max(result.max_rel_err, max_rel_error(analytic, numeric));
        ++done;
    }
    result.cases = cases;
    return result;
}

/// The full battery behind `pluvia gradcheck` and the acceptance suite.
inline std::vector<GradCheckResult> run_gradient_checks(std::uint64_t seed,
                                                        std::size_t cases = 100) {
    return {gradcheck_conv1d(seed, cases), gradcheck_lstm(seed + 1, cases),
            gradcheck_dense(seed + 2, cases), gradcheck_output_scale(seed + 3, cases),
            gradcheck_huber(seed + 4, cases)};
}

}  // namespace pluvia
