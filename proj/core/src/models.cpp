#include "sedgkit/models.hpp"

#include <cmath>
#include <string>

#include "sedgkit/errors.hpp"

namespace sedgkit {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) {
        throw InvalidArgument(msg);
    }
}

bool is_square(const SquareMatrix& m, int d) {
    return m.rows() == d && m.cols() == d;
}

double scale_of(const SquareMatrix& m) {
    return 1.0 + m.cwiseAbs().maxCoeff();
}

void require_field(const ScalarField& f, int d, const std::string& who) {
    require(f.dim == d, who + ": field dimension mismatch");
    require(static_cast<bool>(f.eval) && static_cast<bool>(f.grad), who + ": field needs eval and grad");
}

} // namespace

// ---------------------------------------------------------------------------
// LgSdeModel

void LgSdeModel::validate() const {
    require(d >= 1 && d <= kMaxStateDim, "LgSdeModel: dimension out of range");
    require(m >= 1, "LgSdeModel: need at least one noise");
    require(is_square(A, d) && is_square(Q1, d), "LgSdeModel: A and Q1 must be d x d");
    require(static_cast<int>(Q2.size()) == m && static_cast<int>(V.size()) == m,
            "LgSdeModel: need m diffusion matrices and m fields");
    for (const auto& q : Q2) {
        require(is_square(q, d), "LgSdeModel: Q2 matrices must be d x d");
    }
    require(all_finite(A) && all_finite(Q1), "LgSdeModel: non-finite matrix entries");
    require_field(U, d, "LgSdeModel U");
    for (const auto& v : V) {
        require_field(v, d, "LgSdeModel V");
    }
}

bool LgSdeModel::has_hessians() const {
    for (const auto& v : V) {
        if (!v.has_hessian()) {
            return false;
        }
    }
    return true;
}

Vec LgSdeModel::drift(const Vec& x) const {
    return A * x + Q1 * U.grad(x);
}

Vec LgSdeModel::diffusion(int r, const Vec& x) const {
    return Q2[r] * V[r].grad(x);
}

SquareMatrix LgSdeModel::diffusion_jacobian(int r, const Vec& x) const {
    if (!V[r].has_hessian()) {
        throw UnsupportedOperation("model has no Hessian for diffusion field " + std::to_string(r));
    }
    return Q2[r] * V[r].hess(x);
}

Vec ito_drift(const LgSdeModel& model, const Vec& x) {
    if (!model.has_hessians()) {
        throw UnsupportedOperation("ito_drift: diffusion Hessians are required");
    }
    Vec out = model.drift(x);
    for (int r = 0; r < model.m; ++r) {
        out += 0.5 * (model.diffusion_jacobian(r, x) * model.diffusion(r, x));
    }
    return out;
}

// ---------------------------------------------------------------------------
// PoissonLgModel

void PoissonLgModel::validate() const {
    require(d >= 1 && d <= kMaxStateDim, "PoissonLgModel: dimension out of range");
    require(is_square(Q, d) && is_square(M, d), "PoissonLgModel: Q and M must be d x d");
    require(all_finite(Q) && all_finite(M) && std::isfinite(sigma), "PoissonLgModel: non-finite input");
    require((Q + Q.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale_of(Q),
            "PoissonLgModel: Q must be skew-symmetric");
    require((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale_of(M),
            "PoissonLgModel: M must be symmetric");
    require(std::abs(Q.determinant()) > 1e-14, "PoissonLgModel: Q must be nonsingular");
    require(std::abs(M.determinant()) > 1e-14, "PoissonLgModel: M must be nonsingular");
    require_field(U, d, "PoissonLgModel U");
}

double PoissonLgModel::energy(const Vec& x) const {
    return 0.5 * x.dot(M * x) + U.eval(x);
}

Vec PoissonLgModel::energy_gradient(const Vec& x) const {
    return M * x + U.grad(x);
}

LgSdeModel PoissonLgModel::as_lg() const {
    LgSdeModel lg;
    lg.d = d;
    lg.m = 1;
    lg.A = Q * M;
    lg.Q1 = Q;
    lg.Q2 = {sigma * Q};
    lg.U = U;

    ScalarField h;
    h.dim = d;
    const SquareMatrix m = M;
    const ScalarField u = U;
    h.eval = [m, u](const Vec& x) { return 0.5 * x.dot(m * x) + u.eval(x); };
    h.grad = [m, u](const Vec& x) { return Vec(m * x + u.grad(x)); };
    if (u.has_hessian()) {
        h.hess = [m, u](const Vec& x) { return SquareMatrix(m + u.hess(x)); };
    }
    lg.V = {h};
    return lg;
}

// ---------------------------------------------------------------------------
// LangevinLgModel

void LangevinLgModel::validate() const {
    require(dbar >= 1 && 2 * dbar <= kMaxStateDim, "LangevinLgModel: dimension out of range");
    require(nu > 0.0 && std::isfinite(nu), "LangevinLgModel: nu must be positive");
    require(is_square(M, dbar) && is_square(M_inv, dbar), "LangevinLgModel: M must be dbar x dbar");
    require(sigma.size() == dbar && all_finite(sigma), "LangevinLgModel: sigma must have dbar entries");
    require((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale_of(M),
            "LangevinLgModel: M must be symmetric");
    require(M.llt().info() == Eigen::Success, "LangevinLgModel: M must be positive definite");
    require_field(U0, dbar, "LangevinLgModel U0");
}

Vec LangevinLgModel::drift(const Vec& x) const {
    const Vec p = x.head(dbar);
    const Vec q = x.tail(dbar);
    Vec out(2 * dbar);
    out.head(dbar) = -U0.grad(q) - nu * p;
    out.tail(dbar) = M_inv * p;
    return out;
}

Vec LangevinLgModel::diffusion(const Vec&) const {
    Vec out = Vec::Zero(2 * dbar);
    out.head(dbar) = sigma;
    return out;
}

LgSdeModel LangevinLgModel::as_lg() const {
    const int n = dbar;
    const int d = 2 * n;
    LgSdeModel lg;
    lg.d = d;
    lg.m = 1;
    lg.A = SquareMatrix::Zero(d, d);
    lg.A.topLeftCorner(n, n) = -nu * SquareMatrix::Identity(n, n);
    lg.A.bottomLeftCorner(n, n) = M_inv;
    lg.Q1 = -symplectic_form(d);  // J^{-1} = -J

    ScalarField u;
    u.dim = d;
    const ScalarField u0 = U0;
    u.eval = [u0, n](const Vec& x) { return u0.eval(x.tail(n)); };
    u.grad = [u0, n, d](const Vec& x) {
        Vec g = Vec::Zero(d);
        g.tail(n) = u0.grad(x.tail(n));
        return g;
    };
    if (u0.has_hessian()) {
        u.hess = [u0, n, d](const Vec& x) {
            SquareMatrix hm = SquareMatrix::Zero(d, d);
            hm.bottomRightCorner(n, n) = u0.hess(x.tail(n));
            return hm;
        };
    }
    u.affine = u0.affine;
    lg.U = u;

    lg.Q2 = {SquareMatrix::Identity(d, d)};
    Vec c = Vec::Zero(d);
    c.head(n) = sigma;
    lg.V = {ScalarField::linear(c)};
    return lg;
}

// ---------------------------------------------------------------------------
// Factories

LgSdeModel make_oscillator(double omega, double sigma) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw InvalidArgument("oscillator: omega must be > 0");
    }
    if (sigma == 0.0 || !std::isfinite(sigma)) {
        throw InvalidArgument("oscillator: sigma must be nonzero");
    }
    LgSdeModel lg;
    lg.d = 2;
    lg.m = 1;
    lg.A = SquareMatrix(2, 2);
    lg.A << 0.0, -omega * omega, 1.0, 0.0;
    lg.Q1 = SquareMatrix::Zero(2, 2);
    lg.Q2 = {SquareMatrix::Identity(2, 2)};
    lg.U = ScalarField::zero(2);
    lg.V = {ScalarField::linear(Vec{{sigma, 0.0}})};
    return lg;
}

PoissonLgModel make_wind_poisson(double lambda, double sigma) {
    if (!std::isfinite(lambda) || lambda == 0.0) {
        throw InvalidArgument("wind_poisson: lambda must be finite and nonzero");
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw InvalidArgument("wind_poisson: sigma must be >= 0");
    }
    PoissonLgModel p;
    p.d = 2;
    p.Q = -symplectic_form(2);
    p.M = lambda * SquareMatrix::Identity(2, 2);
    p.M_inv = SquareMatrix::Identity(2, 2) / lambda;
    p.sigma = sigma;

    ScalarField u;
    u.dim = 2;
    u.eval = [](const Vec& x) { return -0.5 * (x[0] * x[1] * x[1] - x[0] * x[0] * x[0] / 3.0); };
    u.grad = [](const Vec& x) {
        return Vec{{0.5 * (x[0] * x[0] - x[1] * x[1]), -x[0] * x[1]}};
    };
    u.hess = [](const Vec& x) {
        SquareMatrix h(2, 2);
        h << x[0], -x[1], -x[1], -x[0];
        return h;
    };
    p.U = u;
    return p;
}

LangevinLgModel make_damped_oscillator(double nu, double sigma) {
    if (!(nu > 0.0) || !std::isfinite(nu)) {
        throw InvalidArgument("damped_oscillator: nu must be > 0");
    }
    if (sigma == 0.0 || !std::isfinite(sigma)) {
        throw InvalidArgument("damped_oscillator: sigma must be nonzero");
    }
    LangevinLgModel l;
    l.dbar = 1;
    l.nu = nu;
    l.M = SquareMatrix::Identity(1, 1);
    l.M_inv = SquareMatrix::Identity(1, 1);
    l.sigma = Vec::Constant(1, sigma);

    ScalarField u0;
    u0.dim = 1;
    u0.eval = [](const Vec& q) { return 0.5 * q[0] * q[0]; };
    u0.grad = [](const Vec& q) { return q; };
    u0.hess = [](const Vec&) { return SquareMatrix(SquareMatrix::Identity(1, 1)); };
    l.U0 = u0;
    return l;
}

ScalarField lift_to_second_coordinate(const ScalarField& f) {
    if (f.dim != 1) {
        throw InvalidArgument("lift_to_second_coordinate: field must be one-dimensional");
    }
    ScalarField out;
    out.dim = 2;
    out.affine = f.affine;
    out.eval = [f](const Vec& x) { return f.eval(Vec::Constant(1, x[1])); };
    out.grad = [f](const Vec& x) { return Vec{{0.0, f.grad(Vec::Constant(1, x[1]))[0]}}; };
    if (f.has_hessian()) {
        out.hess = [f](const Vec& x) {
            SquareMatrix h = SquareMatrix::Zero(2, 2);
            h(1, 1) = f.hess(Vec::Constant(1, x[1]))(0, 0);
            return h;
        };
    }
    return out;
}

LgSdeModel make_nonlinear_oscillator(double omega, const ScalarField& u_field,
                                     const ScalarField& v_field) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw InvalidArgument("nonlinear_oscillator: omega must be > 0");
    }
    LgSdeModel lg;
    lg.d = 2;
    lg.m = 1;
    lg.A = SquareMatrix(2, 2);
    lg.A << 0.0, -omega * omega, 1.0, 0.0;
    // Moves the x2-derivative of a field into the x1 equation.
    SquareMatrix shift = SquareMatrix::Zero(2, 2);
    shift(0, 1) = 1.0;
    lg.Q1 = shift;
    lg.Q2 = {shift};
    lg.U = lift_to_second_coordinate(u_field);
    lg.V = {lift_to_second_coordinate(v_field)};
    return lg;
}

LgSdeModel make_nonlinear_oscillator(double omega) {
    ScalarField u;
    u.dim = 1;
    u.eval = [](const Vec& y) { return -std::cos(y[0]); };
    u.grad = [](const Vec& y) { return Vec::Constant(1, std::sin(y[0])); };
    u.hess = [](const Vec& y) { return SquareMatrix(SquareMatrix::Constant(1, 1, std::cos(y[0]))); };

    ScalarField v;
    v.dim = 1;
    v.eval = [](const Vec& y) { return std::sin(y[0]); };
    v.grad = [](const Vec& y) { return Vec::Constant(1, std::cos(y[0])); };
    v.hess = [](const Vec& y) { return SquareMatrix(SquareMatrix::Constant(1, 1, -std::sin(y[0]))); };
    return make_nonlinear_oscillator(omega, u, v);
}

} // namespace sedgkit
