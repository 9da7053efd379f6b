#pragma once

#include <span>
#include <vector>

#include "sedgkit/fixed_point.hpp"
#include "sedgkit/linalg.hpp"
#include "sedgkit/models.hpp"

namespace sedgkit {

/// Matrix functions of A h used by one SEDG step of size h.
struct SedgPropagators {
    double h = 0.0;
    SquareMatrix exp_ah;               ///< exp(A h)
    SquareMatrix phi_h;                ///< h phi(A h)
    SquareMatrix exp_half_ah;          ///< exp(A h / 2)
    SquareMatrix phi_q1;               ///< h phi(A h) Q1
    std::vector<SquareMatrix> half_q2; ///< exp(A h / 2) Q2[r]
};

SedgPropagators make_sedg_propagators(const LgSdeModel& model, double h);

/// SEDG step for a general L-G SDE:
///
///   X' = exp(Ah) X + h phi(Ah) Q1 dgU(X, X') + sum_r exp(Ah/2) Q2[r] dgV_r(X, X') dW_r,
///
/// with dg the symmetric discrete gradient. Solved by fixed-point iteration seeded
/// at X; explicit (one evaluation) when U and every V_r are affine.
Vec sedg_step(const LgSdeModel& model, const SedgPropagators& props, const Vec& x,
              std::span<const double> dW, const FixedPointConfig& fp = {});
Vec sedg_step(const LgSdeModel& model, const Vec& x, double h, std::span<const double> dW,
              const FixedPointConfig& fp = {});

/// Energy-preserving step for the Poisson system:
///
///   X' = E X + (E - I) M^{-1} dgU(X, X'),  E = exp(Q M (h + sigma dW)).
Vec sedg_poisson_step(const PoissonLgModel& model, const Vec& x, double h, double dW,
                      const FixedPointConfig& fp = {});

/// Scalar weights of the Langevin step. Small nu h switches to Taylor series.
struct LangevinCoefficients {
    double decay = 0.0;       ///< exp(-nu h)
    double decay_half = 0.0;  ///< exp(-nu h / 2)
    double nu_bar = 0.0;      ///< (1 - exp(-nu h)) / nu
    double q_drift = 0.0;     ///< (nu_bar - h) / nu
    double q_noise = 0.0;     ///< (1 - exp(-nu h / 2)) / nu

    static LangevinCoefficients make(double nu, double h);
};

/// SEDG step for the damped Langevin system. Iterates on Q' only; P' is then explicit.
Vec sedg_langevin_step(const LangevinLgModel& model, const Vec& x, double h, double dW,
                       const FixedPointConfig& fp = {});

/// Closed-form SEDG step for the linear stiff oscillator. Exactly symplectic.
Vec sedg_oscillator_step(double omega, double sigma, const Vec& x, double h, double dW);

/// d x_{n+1} / d x_n of sedg_oscillator_step (independent of x and dW).
SquareMatrix sedg_oscillator_jacobian(double omega, double h);

/// Symplectic Euler-Maruyama for the linear oscillator: x1 first, then x2 with the new x1.
Vec sem_step(double omega, double sigma, const Vec& x, double h, double dW);

/// Symplectic Euler-Maruyama on a model split as x = (p, q) with equal halves:
/// p advanced from (p, q), then q from (p', q). Uses the Itô drift.
Vec partitioned_sem_step(const LgSdeModel& model, const Vec& x, double h,
                         std::span<const double> dW);

/// Single-noise Stratonovich Milstein: x + (Ax + f) h + g dW + (dg/dx g) dW^2 / 2.
Vec milstein_step(const LgSdeModel& model, const Vec& x, double h, std::span<const double> dW);

/// Euler-Maruyama on the Itô form.
Vec euler_maruyama_step(const LgSdeModel& model, const Vec& x, double h,
                        std::span<const double> dW);

} // namespace sedgkit
