#include "sedgkit/linalg.hpp"

#include <array>
#include <cmath>

#include "sedgkit/errors.hpp"

namespace sedgkit {

namespace {

// Higham (2005), degree-13 Padé coefficients and the matching 1-norm bound.
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

void require_square_finite(const SquareMatrix& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw InvalidArgument(std::string(who) + ": matrix must be square and non-empty");
    }
    if (!all_finite(m)) {
        throw InvalidArgument(std::string(who) + ": matrix has non-finite entries");
    }
}

// exp of a 2x2 matrix with eigenvalues mu +/- i*delta (delta >= 0):
// e^mu (cos(delta) I + sin(delta)/delta (m - mu I)).
SquareMatrix expm_2x2_rotational(const SquareMatrix& m, double mu, double delta_sq) {
    double c = 0.0;
    double s = 0.0;  // sin(delta) / delta
    if (delta_sq < 1e-8) {
        c = 1.0 - delta_sq / 2.0 + delta_sq * delta_sq / 24.0;
        s = 1.0 - delta_sq / 6.0 + delta_sq * delta_sq / 120.0;
    } else {
        const double delta = std::sqrt(delta_sq);
        c = std::cos(delta);
        s = std::sin(delta) / delta;
    }
    const double scale = std::exp(mu);
    SquareMatrix out(2, 2);
    out(0, 0) = scale * (c + s * (m(0, 0) - mu));
    out(0, 1) = scale * s * m(0, 1);
    out(1, 0) = scale * s * m(1, 0);
    out(1, 1) = scale * (c + s * (m(1, 1) - mu));
    return out;
}

} // namespace

bool all_finite(const SquareMatrix& m) {
    return m.allFinite();
}

bool all_finite(const Vec& v) {
    return v.allFinite();
}

SquareMatrix expm_pade(const SquareMatrix& m) {
    require_square_finite(m, "expm");
    const Eigen::Index n = m.rows();

    const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
    if (norm1 == 0.0) {
        return SquareMatrix::Identity(n, n);
    }
    int squarings = 0;
    if (norm1 > kTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
    }
    const SquareMatrix a = m / std::ldexp(1.0, squarings);

    const SquareMatrix ident = SquareMatrix::Identity(n, n);
    const SquareMatrix a2 = a * a;
    const SquareMatrix a4 = a2 * a2;
    const SquareMatrix a6 = a4 * a2;
    const auto& b = kPade13;

    const SquareMatrix u_inner =
        a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
    const SquareMatrix u = a * u_inner;
    const SquareMatrix v =
        a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;

    SquareMatrix r = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < squarings; ++k) {
        r = (r * r).eval();
    }
    return r;
}

SquareMatrix expm(const SquareMatrix& m) {
    require_square_finite(m, "expm");
    if (m.rows() == 1) {
        return SquareMatrix::Constant(1, 1, std::exp(m(0, 0)));
    }
    if (m.rows() == 2) {
        const double mu = 0.5 * (m(0, 0) + m(1, 1));
        const double half_diff = 0.5 * (m(0, 0) - m(1, 1));
        // Eigenvalues mu +/- sqrt(-delta_sq).
        const double delta_sq = -(half_diff * half_diff + m(0, 1) * m(1, 0));
        if (delta_sq >= 0.0) {
            return expm_2x2_rotational(m, mu, delta_sq);
        }
    }
    return expm_pade(m);
}

SquareMatrix phi1_times_h(const SquareMatrix& a, double h) {
    require_square_finite(a, "phi1_times_h");
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidArgument("phi1_times_h: h must be positive and finite");
    }
    const Eigen::Index n = a.rows();
    SquareMatrix aug = SquareMatrix::Zero(2 * n, 2 * n);
    aug.topLeftCorner(n, n) = a * h;
    aug.topRightCorner(n, n) = SquareMatrix::Identity(n, n) * h;
    return expm(aug).topRightCorner(n, n);
}

SquareMatrix symplectic_form(int dim) {
    if (dim < 2 || dim % 2 != 0) {
        throw InvalidArgument("symplectic_form: dimension must be even and >= 2");
    }
    const int half = dim / 2;
    SquareMatrix j = SquareMatrix::Zero(dim, dim);
    j.topRightCorner(half, half).setIdentity();
    j.bottomLeftCorner(half, half) = -SquareMatrix::Identity(half, half);
    return j;
}

} // namespace sedgkit
