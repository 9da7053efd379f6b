#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sedgkit/models.hpp"
#include "sedgkit/schemes.hpp"
#include "sedgkit/wiener.hpp"

namespace sedgkit {

/// Per-step structure quantities along one noise path. All arrays have one entry per
/// grid time t_0..t_N. Entries that a tracker does not compute are NaN.
struct StructureReport {
    std::vector<double> t;
    std::vector<double> energy;
    std::vector<double> jacobian_residual;
    std::vector<double> area;
    std::vector<double> normalized_area;
    std::vector<bool> degenerate;

    std::size_t size() const noexcept { return t.size(); }
};

/// H(x) = x^T M x / 2 + U(x).
double poisson_energy(const PoissonLgModel& model, const Vec& x);

/// H1(x) = (x1^2 + omega^2 x2^2) / 2.
double oscillator_h1(double omega, const Vec& x);

/// Central-difference Jacobian of x -> scheme.step(x, h, dW). The default step is
/// 1e-6 (1 + |x|). Implicit solves run with tolerances tightened to 1e-14.
SquareMatrix step_jacobian_fd(const StepScheme& scheme, const Vec& x, double h,
                              std::span<const double> dW,
                              std::optional<double> fd_eps = std::nullopt);

/// |G^T J G - exp(-nu h) J|_F with J the canonical symplectic form.
double conformal_residual(const SquareMatrix& G, double nu, double h);

/// Signed shoelace area of the planar triangle (a, b, c); positive when counter-clockwise.
double triangle_area(const Vec& a, const Vec& b, const Vec& c);

/// Evolve three vertices under one shared noise path and record the triangle area.
///
/// `area` is the shoelace area with the orientation of the initial triangle, so it stays
/// positive under orientation-preserving maps; `normalized_area` is area e^{nu t} / S_0.
/// A collinear evolved triangle records area 0 and sets `degenerate`. The Jacobian
/// residual is evaluated at the first vertex.
StructureReport triangle_area_track(const StepScheme& scheme, const std::array<Vec, 3>& vertices,
                                    double h, std::size_t n_steps, const Increments& dW,
                                    double nu = 0.0);

/// Energy along one trajectory; the other report columns are NaN.
StructureReport energy_track(const StepScheme& scheme, const std::function<double(const Vec&)>& energy,
                             const Vec& x0, double h, std::size_t n_steps, const Increments& dW);

} // namespace sedgkit
