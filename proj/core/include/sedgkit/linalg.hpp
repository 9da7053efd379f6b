#pragma once

#include <Eigen/Dense>

namespace sedgkit {

/// Largest supported state dimension. State vectors live on the stack.
inline constexpr int kMaxStateDim = 8;

/// State vector: dynamic size with a fixed upper bound, so stepping never allocates.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxStateDim, 1>;

/// Dense real square matrix.
using SquareMatrix = Eigen::MatrixXd;

/// Matrix exponential.
///
/// Scaling and squaring around a degree-13 Padé approximant. 2x2 inputs whose
/// eigenvalues are a complex-conjugate (or repeated) pair take a closed-form
/// path, which is what the rotation-like propagators of the oscillator and
/// Poisson models hit on every step.
///
/// Throws InvalidArgument for non-square or non-finite input.
SquareMatrix expm(const SquareMatrix& m);

/// The Padé path of expm, without the 2x2 shortcut.
SquareMatrix expm_pade(const SquareMatrix& m);

/// h * phi(a h), where phi(z) = (e^z - 1) / z, i.e. the integral of exp(a s) over [0, h].
///
/// Read off the top-right block of exp([[a h, h I], [0, 0]]); never inverts a,
/// so singular a (the Langevin drift matrix) is fine.
SquareMatrix phi1_times_h(const SquareMatrix& a, double h);

/// Canonical symplectic matrix [[0, I], [-I, 0]] of even size `dim`.
SquareMatrix symplectic_form(int dim);

bool all_finite(const SquareMatrix& m);
bool all_finite(const Vec& v);

} // namespace sedgkit
