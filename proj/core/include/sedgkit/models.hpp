#pragma once

#include <vector>

#include "sedgkit/dgrad.hpp"
#include "sedgkit/linalg.hpp"

namespace sedgkit {

/// Stratonovich SDE with linear-plus-gradient coefficients:
///
///   dX = (A X + Q1 grad U(X)) dt + sum_r Q2[r] grad V[r](X) o dW_r.
struct LgSdeModel {
    int d = 0;
    int m = 0;
    SquareMatrix A;
    SquareMatrix Q1;
    std::vector<SquareMatrix> Q2;
    ScalarField U;
    std::vector<ScalarField> V;

    /// Checks shapes and dimensions; throws InvalidArgument.
    void validate() const;

    bool has_hessians() const;

    /// Stratonovich drift A x + Q1 grad U(x).
    Vec drift(const Vec& x) const;
    /// g_r(x) = Q2[r] grad V[r](x).
    Vec diffusion(int r, const Vec& x) const;
    /// d g_r / dx = Q2[r] Hess V[r](x). Throws UnsupportedOperation without Hessians.
    SquareMatrix diffusion_jacobian(int r, const Vec& x) const;
};

/// Drift of the equivalent Itô SDE: A x + Q1 grad U + 1/2 sum_r (dg_r/dx) g_r.
Vec ito_drift(const LgSdeModel& model, const Vec& x);

/// dX = Q (M X + grad U(X)) (dt + sigma o dW), Q skew and nonsingular, M symmetric and
/// nonsingular. H(X) = X^T M X / 2 + U(X) is a first integral.
struct PoissonLgModel {
    int d = 0;
    SquareMatrix Q;
    SquareMatrix M;
    SquareMatrix M_inv;
    ScalarField U;
    double sigma = 0.0;

    void validate() const;
    double energy(const Vec& x) const;
    Vec energy_gradient(const Vec& x) const;

    /// Same vector fields as an LgSdeModel: A = Q M, Q1 = Q, Q2 = sigma Q, V = H.
    LgSdeModel as_lg() const;
};

/// Damped Langevin system on X = (P, Q):
///
///   dP = (-grad U0(Q) - nu P) dt + sigma o dW,   dQ = M^{-1} P dt.
struct LangevinLgModel {
    int dbar = 0;
    double nu = 0.0;
    SquareMatrix M;
    SquareMatrix M_inv;
    ScalarField U0;  ///< potential on the Q block, dimension dbar
    Vec sigma;

    void validate() const;

    Vec drift(const Vec& x) const;
    Vec diffusion(const Vec& x) const;

    /// Block embedding A = [[-nu I, 0], [M^{-1}, 0]], Q1 = [[0, -I], [I, 0]],
    /// U(P, Q) = U0(Q), Q2 = I, V = sigma^T P.
    LgSdeModel as_lg() const;
};

/// Stiff oscillator dx1 = -w^2 x2 dt + sigma o dW, dx2 = x1 dt.
LgSdeModel make_oscillator(double omega, double sigma);

/// Averaged wind-induced oscillation: Q = -J, M = lambda I,
/// U = -(x1 x2^2 - x1^3 / 3) / 2.
PoissonLgModel make_wind_poisson(double lambda, double sigma);

/// Linear damped oscillator: M = I, U0(q) = q^2 / 2.
LangevinLgModel make_damped_oscillator(double nu, double sigma);

/// Nonlinear high-frequency oscillator
///   dx1 = (-w^2 x2 + u'(x2)) dt + v'(x2) o dW,  dx2 = x1 dt,
/// where u_field and v_field are one-dimensional fields evaluated at x2.
LgSdeModel make_nonlinear_oscillator(double omega, const ScalarField& u_field,
                                     const ScalarField& v_field);

/// Defaults for the frequency sweep: u(y) = -cos y, v(y) = sin y, so the drift
/// forcing is sin(x2) and the noise amplitude cos(x2).
LgSdeModel make_nonlinear_oscillator(double omega);

/// Lift a field of one variable to the x2 coordinate of R^2.
ScalarField lift_to_second_coordinate(const ScalarField& f);

} // namespace sedgkit
