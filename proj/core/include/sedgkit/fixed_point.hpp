#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "sedgkit/errors.hpp"
#include "sedgkit/linalg.hpp"

namespace sedgkit {

struct FixedPointConfig {
    double abs_tol = 1e-13;
    double rel_tol = 1e-13;
    int max_iter = 100;

    void validate() const;
};

struct FixedPointResult {
    Vec x;
    int iterations = 0;
    double residual = 0.0;  ///< |x_k - x_{k-1}| at exit
};

/// Plain fixed-point iteration x_{k+1} = map(x_k) started at x0. Stops once
/// |x_{k+1} - x_k| <= abs_tol + rel_tol |x_{k+1}| (Euclidean norm).
///
/// Throws ConvergenceError after max_iter iterations or on a non-finite iterate.
template <class Map>
FixedPointResult fixed_point_iterate(Map&& map, const Vec& x0, const FixedPointConfig& cfg) {
    Vec x = x0;
    double residual = 0.0;
    for (int k = 1; k <= cfg.max_iter; ++k) {
        Vec next = map(x);
        residual = (next - x).norm();
        if (!std::isfinite(residual)) {
            throw ConvergenceError("fixed-point iteration produced a non-finite iterate", k, residual);
        }
        if (residual <= cfg.abs_tol + cfg.rel_tol * next.norm()) {
            return {next, k, residual};
        }
        x = next;
    }
    throw ConvergenceError("fixed-point iteration did not converge in " +
                               std::to_string(cfg.max_iter) + " iterations (residual " +
                               std::to_string(residual) + ")",
                           cfg.max_iter, residual);
}

FixedPointResult fixed_point_solve(const std::function<Vec(const Vec&)>& map, const Vec& x0,
                                   const FixedPointConfig& cfg = {});

} // namespace sedgkit
