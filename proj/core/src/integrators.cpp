#include "sedgkit/integrators.hpp"

#include <cmath>
#include <string>

#include "sedgkit/dgrad.hpp"
#include "sedgkit/errors.hpp"

namespace sedgkit {

namespace {

void require_step(double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidArgument("step size must be positive and finite");
    }
}

void require_state(const Vec& x, int d, const char* who) {
    if (x.size() != d) {
        throw InvalidArgument(std::string(who) + ": state has dimension " + std::to_string(x.size()) +
                              ", expected " + std::to_string(d));
    }
}

void require_noise(std::span<const double> dW, int m, const char* who) {
    if (static_cast<int>(dW.size()) != m) {
        throw InvalidArgument(std::string(who) + ": expected " + std::to_string(m) + " increments");
    }
}

bool all_affine(const LgSdeModel& model) {
    if (!model.U.affine) {
        return false;
    }
    for (const auto& v : model.V) {
        if (!v.affine) {
            return false;
        }
    }
    return true;
}

} // namespace

// ---------------------------------------------------------------------------
// General SEDG

SedgPropagators make_sedg_propagators(const LgSdeModel& model, double h) {
    require_step(h);
    SedgPropagators p;
    p.h = h;
    p.exp_ah = expm(model.A * h);
    p.phi_h = phi1_times_h(model.A, h);
    p.exp_half_ah = expm(model.A * (0.5 * h));
    p.phi_q1 = p.phi_h * model.Q1;
    p.half_q2.reserve(model.Q2.size());
    for (const auto& q2 : model.Q2) {
        p.half_q2.push_back(p.exp_half_ah * q2);
    }
    return p;
}

Vec sedg_step(const LgSdeModel& model, const SedgPropagators& props, const Vec& x,
              std::span<const double> dW, const FixedPointConfig& fp) {
    require_state(x, model.d, "sedg_step");
    require_noise(dW, model.m, "sedg_step");
    const Vec linear = props.exp_ah * x;
    auto map = [&](const Vec& next) {
        Vec out = linear + props.phi_q1 * symmetric_dg(model.U, x, next);
        for (int r = 0; r < model.m; ++r) {
            out += props.half_q2[r] * (symmetric_dg(model.V[r], x, next) * dW[r]);
        }
        return out;
    };
    if (all_affine(model)) {
        return map(x);
    }
    return fixed_point_iterate(map, x, fp).x;
}

Vec sedg_step(const LgSdeModel& model, const Vec& x, double h, std::span<const double> dW,
              const FixedPointConfig& fp) {
    return sedg_step(model, make_sedg_propagators(model, h), x, dW, fp);
}

// ---------------------------------------------------------------------------
// Poisson

Vec sedg_poisson_step(const PoissonLgModel& model, const Vec& x, double h, double dW,
                      const FixedPointConfig& fp) {
    require_step(h);
    require_state(x, model.d, "sedg_poisson_step");
    const SquareMatrix e = expm(model.Q * model.M * (h + model.sigma * dW));
    const SquareMatrix weight = (e - SquareMatrix::Identity(model.d, model.d)) * model.M_inv;
    const Vec linear = e * x;
    auto map = [&](const Vec& next) { return Vec(linear + weight * symmetric_dg(model.U, x, next)); };
    if (model.U.affine) {
        return map(x);
    }
    return fixed_point_iterate(map, x, fp).x;
}

// ---------------------------------------------------------------------------
// Langevin

LangevinCoefficients LangevinCoefficients::make(double nu, double h) {
    require_step(h);
    LangevinCoefficients c;
    const double z = nu * h;
    c.decay = std::exp(-z);
    c.decay_half = std::exp(-0.5 * z);
    if (z < 1e-6) {
        c.nu_bar = h * (1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0);
        c.q_drift = h * h * (-0.5 + z / 6.0 - z * z / 24.0 + z * z * z / 120.0);
        c.q_noise = 0.5 * h * (1.0 - z / 4.0 + z * z / 24.0 - z * z * z / 192.0);
    } else {
        c.nu_bar = -std::expm1(-z) / nu;
        c.q_drift = (c.nu_bar - h) / nu;
        c.q_noise = -std::expm1(-0.5 * z) / nu;
    }
    return c;
}

Vec sedg_langevin_step(const LangevinLgModel& model, const Vec& x, double h, double dW,
                       const FixedPointConfig& fp) {
    const int n = model.dbar;
    require_state(x, 2 * n, "sedg_langevin_step");
    const LangevinCoefficients c = LangevinCoefficients::make(model.nu, h);
    const Vec p = x.head(n);
    const Vec q = x.tail(n);
    const Vec noise = model.sigma * dW;

    const Vec q_base = q + model.M_inv * (c.nu_bar * p + c.q_noise * noise);
    auto q_map = [&](const Vec& q_next) {
        return Vec(q_base + c.q_drift * (model.M_inv * symmetric_dg(model.U0, q, q_next)));
    };
    const Vec q_next = model.U0.affine ? q_map(q) : fixed_point_iterate(q_map, q, fp).x;
    const Vec p_next = c.decay * p - c.nu_bar * symmetric_dg(model.U0, q, q_next) + c.decay_half * noise;

    Vec out(2 * n);
    out.head(n) = p_next;
    out.tail(n) = q_next;
    return out;
}

// ---------------------------------------------------------------------------
// Oscillator closed forms

Vec sedg_oscillator_step(double omega, double sigma, const Vec& x, double h, double dW) {
    require_state(x, 2, "sedg_oscillator_step");
    const double c = std::cos(h * omega);
    const double s = std::sin(h * omega);
    const double noise1 = sigma * std::cos(0.5 * h * omega) * dW;
    const double noise2 = sigma / omega * std::sin(0.5 * h * omega) * dW;
    return Vec{{c * x[0] - omega * s * x[1] + noise1, s / omega * x[0] + c * x[1] + noise2}};
}

SquareMatrix sedg_oscillator_jacobian(double omega, double h) {
    const double c = std::cos(h * omega);
    const double s = std::sin(h * omega);
    SquareMatrix g(2, 2);
    g << c, -omega * s, s / omega, c;
    return g;
}

Vec sem_step(double omega, double sigma, const Vec& x, double h, double dW) {
    require_state(x, 2, "sem_step");
    const double x1 = x[0] - omega * omega * h * x[1] + sigma * dW;
    const double x2 = x[1] + h * x1;
    return Vec{{x1, x2}};
}

// ---------------------------------------------------------------------------
// Baselines on the general model

Vec partitioned_sem_step(const LgSdeModel& model, const Vec& x, double h,
                         std::span<const double> dW) {
    require_state(x, model.d, "partitioned_sem_step");
    require_noise(dW, model.m, "partitioned_sem_step");
    if (model.d % 2 != 0) {
        throw UnsupportedOperation("symplectic Euler needs an even-dimensional (p, q) state");
    }
    const int half = model.d / 2;

    auto increment = [&](const Vec& z) {
        Vec dz = ito_drift(model, z) * h;
        for (int r = 0; r < model.m; ++r) {
            dz += model.diffusion(r, z) * dW[r];
        }
        return dz;
    };

    Vec out = x;
    out.head(half) += increment(x).head(half);
    out.tail(half) += increment(out).tail(half);
    return out;
}

Vec milstein_step(const LgSdeModel& model, const Vec& x, double h, std::span<const double> dW) {
    require_state(x, model.d, "milstein_step");
    if (model.m != 1) {
        throw UnsupportedOperation("milstein_step: only single-noise models are supported");
    }
    require_noise(dW, 1, "milstein_step");
    const Vec g = model.diffusion(0, x);
    const Vec correction = model.diffusion_jacobian(0, x) * g;
    return x + model.drift(x) * h + g * dW[0] + 0.5 * correction * (dW[0] * dW[0]);
}

Vec euler_maruyama_step(const LgSdeModel& model, const Vec& x, double h,
                        std::span<const double> dW) {
    require_state(x, model.d, "euler_maruyama_step");
    require_noise(dW, model.m, "euler_maruyama_step");
    Vec out = x + ito_drift(model, x) * h;
    for (int r = 0; r < model.m; ++r) {
        out += model.diffusion(r, x) * dW[r];
    }
    return out;
}

} // namespace sedgkit
