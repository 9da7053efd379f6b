#include "sedgkit/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "sedgkit/errors.hpp"

namespace sedgkit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_grid(const StepScheme& scheme, double h, std::size_t n_steps, const Increments& dW) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidArgument("step size must be positive and finite");
    }
    if (dW.steps() < n_steps) {
        throw InvalidArgument("increment grid shorter than the requested number of steps");
    }
    if (dW.noise_count() != scheme.noise_count()) {
        throw InvalidArgument("increment grid has the wrong number of noise channels");
    }
}

} // namespace

double poisson_energy(const PoissonLgModel& model, const Vec& x) {
    return model.energy(x);
}

double oscillator_h1(double omega, const Vec& x) {
    if (x.size() != 2) {
        throw InvalidArgument("oscillator_h1: state must be 2-dimensional");
    }
    return 0.5 * (x[0] * x[0] + omega * omega * x[1] * x[1]);
}

SquareMatrix step_jacobian_fd(const StepScheme& scheme, const Vec& x, double h,
                              std::span<const double> dW, std::optional<double> fd_eps) {
    const int d = static_cast<int>(x.size());
    if (d != scheme.dim()) {
        throw InvalidArgument("step_jacobian_fd: state dimension does not match the scheme");
    }
    const double eps = fd_eps.value_or(1e-6 * (1.0 + x.norm()));
    if (!(eps > 0.0)) {
        throw InvalidArgument("step_jacobian_fd: fd_eps must be positive");
    }
    FixedPointConfig tight = scheme.options().fixed_point;
    tight.abs_tol = 1e-14;
    tight.rel_tol = 1e-14;

    SquareMatrix G(d, d);
    for (int j = 0; j < d; ++j) {
        Vec plus = x;
        Vec minus = x;
        plus[j] += eps;
        minus[j] -= eps;
        G.col(j) = (scheme.step(plus, h, dW, tight) - scheme.step(minus, h, dW, tight)) / (2.0 * eps);
    }
    return G;
}

double conformal_residual(const SquareMatrix& G, double nu, double h) {
    if (G.rows() != G.cols() || G.rows() % 2 != 0) {
        throw InvalidArgument("conformal_residual: G must be square with even dimension");
    }
    const SquareMatrix J = symplectic_form(static_cast<int>(G.rows()));
    return (G.transpose() * J * G - std::exp(-nu * h) * J).norm();
}

double triangle_area(const Vec& a, const Vec& b, const Vec& c) {
    if (a.size() != 2 || b.size() != 2 || c.size() != 2) {
        throw InvalidArgument("triangle_area: vertices must be planar");
    }
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

StructureReport triangle_area_track(const StepScheme& scheme, const std::array<Vec, 3>& vertices,
                                    double h, std::size_t n_steps, const Increments& dW,
                                    double nu) {
    if (scheme.dim() != 2) {
        throw InvalidArgument("triangle_area_track: phase space must be 2-dimensional");
    }
    check_grid(scheme, h, n_steps, dW);
    const double s0_signed = triangle_area(vertices[0], vertices[1], vertices[2]);
    if (s0_signed == 0.0) {
        throw InvalidArgument("triangle_area_track: initial triangle is degenerate");
    }
    const double orientation = s0_signed > 0.0 ? 1.0 : -1.0;
    const double s0 = std::abs(s0_signed);

    StructureReport report;
    report.t.reserve(n_steps + 1);
    std::array<Vec, 3> v = vertices;
    for (std::size_t n = 0;; ++n) {
        const double t = static_cast<double>(n) * h;
        double area = orientation * triangle_area(v[0], v[1], v[2]);
        const double scale = (v[1] - v[0]).squaredNorm() + (v[2] - v[0]).squaredNorm();
        const bool degenerate = std::abs(area) <= 1e-15 * scale;
        if (degenerate) {
            area = 0.0;
        }
        report.t.push_back(t);
        report.energy.push_back(kNaN);
        report.area.push_back(area);
        report.normalized_area.push_back(area * std::exp(nu * t) / s0);
        report.degenerate.push_back(degenerate);
        if (n == n_steps) {
            report.jacobian_residual.push_back(kNaN);
            break;
        }
        const auto w = dW.at(n);
        report.jacobian_residual.push_back(
            conformal_residual(step_jacobian_fd(scheme, v[0], h, w), nu, h));
        for (auto& vertex : v) {
            vertex = scheme.step(vertex, h, w);
        }
    }
    return report;
}

StructureReport energy_track(const StepScheme& scheme, const std::function<double(const Vec&)>& energy,
                             const Vec& x0, double h, std::size_t n_steps, const Increments& dW) {
    check_grid(scheme, h, n_steps, dW);
    StructureReport report;
    Vec x = x0;
    for (std::size_t n = 0;; ++n) {
        report.t.push_back(static_cast<double>(n) * h);
        report.energy.push_back(energy(x));
        report.jacobian_residual.push_back(kNaN);
        report.area.push_back(kNaN);
        report.normalized_area.push_back(kNaN);
        report.degenerate.push_back(false);
        if (n == n_steps) {
            break;
        }
        x = scheme.step(x, h, dW.at(n));
    }
    return report;
}

} // namespace sedgkit
