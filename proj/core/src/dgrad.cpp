#include "sedgkit/dgrad.hpp"

#include <array>
#include <cmath>

#include "sedgkit/errors.hpp"

namespace sedgkit {

ScalarField ScalarField::zero(int dim) {
    ScalarField f;
    f.dim = dim;
    f.eval = [](const Vec&) { return 0.0; };
    f.grad = [dim](const Vec&) { return Vec(Vec::Zero(dim)); };
    f.hess = [dim](const Vec&) { return SquareMatrix(SquareMatrix::Zero(dim, dim)); };
    f.affine = true;
    return f;
}

ScalarField ScalarField::linear(const Vec& c) {
    ScalarField f;
    f.dim = static_cast<int>(c.size());
    f.eval = [c](const Vec& x) { return c.dot(x); };
    f.grad = [c](const Vec&) { return c; };
    const int dim = f.dim;
    f.hess = [dim](const Vec&) { return SquareMatrix(SquareMatrix::Zero(dim, dim)); };
    f.affine = true;
    return f;
}

void DgConfig::validate() const {
    if (!(coincidence_eps > 0.0) || !(coincidence_eps <= 1e-6)) {
        throw InvalidArgument("DgConfig: coincidence_eps must lie in (0, 1e-6]");
    }
    if (!(quadrature_band >= coincidence_eps) || !(quadrature_band < 1.0)) {
        throw InvalidArgument("DgConfig: quadrature_band must lie in [coincidence_eps, 1)");
    }
}

namespace {

// Gauss-Legendre nodes and weights on [0, 1], 4 points.
constexpr std::array<double, 4> kGlNode = {0.069431844202973713, 0.33000947820757187,
                                           0.66999052179242813, 0.93056815579702629};
constexpr std::array<double, 4> kGlWeight = {0.17392742256872693, 0.32607257743127307,
                                             0.32607257743127307, 0.17392742256872693};

} // namespace

Vec coord_increment_dg(const ScalarField& field, const Vec& y, const Vec& yhat,
                       const DgConfig& cfg) {
    const Eigen::Index d = y.size();
    if (yhat.size() != d || field.dim != d) {
        throw InvalidArgument("coord_increment_dg: dimension mismatch");
    }
    Vec out(d);
    Vec z = y;
    double prev = field.eval(z);
    for (Eigen::Index k = 0; k < d; ++k) {
        const double diff = yhat[k] - y[k];
        const double threshold = cfg.coincidence_eps * (1.0 + std::abs(y[k]) + std::abs(yhat[k]));
        if (std::abs(diff) < threshold) {
            z[k] = 0.5 * (y[k] + yhat[k]);
            out[k] = field.grad(z)[k];
            z[k] = yhat[k];
            prev = field.eval(z);
        } else if (std::abs(diff) < cfg.quadrature_band * (1.0 + std::abs(y[k]) + std::abs(yhat[k]))) {
            double mean = 0.0;
            for (std::size_t q = 0; q < kGlNode.size(); ++q) {
                z[k] = y[k] + kGlNode[q] * diff;
                mean += kGlWeight[q] * field.grad(z)[k];
            }
            out[k] = mean;
            z[k] = yhat[k];
            prev = field.eval(z);
        } else {
            z[k] = yhat[k];
            const double next = field.eval(z);
            out[k] = (next - prev) / diff;
            prev = next;
        }
        if (!std::isfinite(out[k])) {
            throw NumericError("discrete gradient: non-finite component");
        }
    }
    return out;
}

Vec symmetric_dg(const ScalarField& field, const Vec& y, const Vec& yhat, const DgConfig& cfg) {
    return 0.5 * (coord_increment_dg(field, y, yhat, cfg) + coord_increment_dg(field, yhat, y, cfg));
}

} // namespace sedgkit
