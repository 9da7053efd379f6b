#pragma once

#include <functional>

#include "sedgkit/linalg.hpp"

namespace sedgkit {

/// Scalar function on R^dim together with its analytic derivatives.
struct ScalarField {
    int dim = 0;
    std::function<double(const Vec&)> eval;
    std::function<Vec(const Vec&)> grad;
    /// Optional. Needed by the Itô drift correction and the Milstein baseline.
    std::function<SquareMatrix(const Vec&)> hess;
    /// True when the field is affine: its discrete gradient is a constant,
    /// so it never makes a step implicit.
    bool affine = false;

    bool has_hessian() const noexcept { return static_cast<bool>(hess); }

    static ScalarField zero(int dim);
    /// H(x) = c . x
    static ScalarField linear(const Vec& c);
};

struct DgConfig {
    /// Relative threshold: a coordinate pair counts as coincident when
    /// |yhat_k - y_k| < coincidence_eps * (1 + |y_k| + |yhat_k|).
    double coincidence_eps = 1e-12;
    /// Gaps below quadrature_band * (1 + |y_k| + |yhat_k|) replace the divided
    /// difference by a 4-point Gauss-Legendre mean of the partial over the segment.
    /// Same value up to quadrature error, but free of the cancellation in H(yhat) - H(y)
    /// that otherwise leaves implicit solves cycling above tolerance.
    double quadrature_band = 1e-3;

    void validate() const;
};

/// Coordinate increment discrete gradient. Component k is the divided difference of H
/// along coordinate k with coordinates 1..k-1 already moved to yhat. Coincident
/// coordinates fall back to the analytic partial at the interval midpoint.
Vec coord_increment_dg(const ScalarField& field, const Vec& y, const Vec& yhat,
                       const DgConfig& cfg = {});

/// Symmetrized coordinate increment DG: (dg(y, yhat) + dg(yhat, y)) / 2.
///
/// Satisfies dg . (yhat - y) = H(yhat) - H(y), dg(y, y) = grad H(y), and is
/// invariant under swapping its arguments.
Vec symmetric_dg(const ScalarField& field, const Vec& y, const Vec& yhat,
                 const DgConfig& cfg = {});

} // namespace sedgkit
