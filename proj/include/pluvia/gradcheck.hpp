#pragma once

#include <cmath>
#include <functional>

#include "pluvia/errors.hpp"
#include "pluvia/tensor.hpp"

namespace pluvia {

/// Central-difference gradient of a scalar-valued function:
/// (f(x + eps*e_i) - f(x - eps*e_i)) / (2*eps) per coordinate.
inline Tensor finite_diff_grad(const std::function<double(const Tensor&)>& f, const Tensor& x,
                               double eps) {
    Tensor grad(x.shape());
    Tensor probe = x;
    for (std::size_t i = 0; i < x.numel(); ++i) {
        const double orig = probe[i];
        probe[i] = orig + eps;
        const double fp = f(probe);
        probe[i] = orig - eps;
        const double fm = f(probe);
        probe[i] = orig;
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw NumericError("finite_diff_grad: non-finite function value at coordinate " +
                               std::to_string(i));
        }
        grad[i] = (fp - fm) / (2.0 * eps);
    }
    return grad;
}

/// Max over elements of |analytic - numeric| / max(1, |analytic|).
inline double max_rel_error(const Tensor& analytic, const Tensor& numeric) {
    if (!analytic.same_shape(numeric)) {
        throw DimensionError("max_rel_error: shape mismatch " + analytic.shape_string() + " vs " +
                             numeric.shape_string());
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.numel(); ++i) {
        const double denom = std::max(1.0, std::fabs(analytic[i]));
        const double err = std::fabs(analytic[i] - numeric[i]) / denom;
        if (err > worst) worst = err;
    }
    return worst;
}

}  // namespace pluvia
