#include <doctest.h>

#include <cmath>

#include "polynomial.hpp"
#include "sedgkit/catalog.hpp"
#include "sedgkit/diagnostics.hpp"
#include "sedgkit/dgrad.hpp"
#include "sedgkit/integrators.hpp"
#include "sedgkit/linalg.hpp"
#include "sedgkit/wiener.hpp"
#include "test_support.hpp"

using namespace sedgkit;
using sedgkit::test::max_abs;
using sedgkit::test::Polynomial;
using sedgkit::test::Rng;
using sedgkit::test::vec;

namespace {

std::span<const double> one(const double& dw) {
    return {&dw, 1};
}

} // namespace

TEST_CASE("chord identity and symmetry on random polynomials") {
    Rng rng(2024);
    for (int i = 0; i < 500; ++i) {
        const int dim = 1 + static_cast<int>(rng.integer(0, 5));
        const Polynomial p = Polynomial::random(rng, dim, 4, 4);
        const ScalarField f = p.field();
        const Vec y = rng.vec(dim, -1.5, 1.5);
        const Vec yhat = rng.vec(dim, -1.5, 1.5);
        const Vec g = symmetric_dg(f, y, yhat);
        const double scale = 1.0 + std::abs(p.eval(y)) + std::abs(p.eval(yhat));
        CHECK(std::abs(g.dot(yhat - y) - (p.eval(yhat) - p.eval(y))) < 1e-12 * scale);
        CHECK(max_abs(g - symmetric_dg(f, yhat, y)) == 0.0);
        const Vec at = symmetric_dg(f, y, y);
        CHECK(max_abs(at - p.grad(y)) < 1e-12 * (1.0 + max_abs(p.grad(y))));
    }
}

TEST_CASE("matrix exponential identities") {
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
        const int n = 1 + static_cast<int>(rng.integer(0, 7));
        const SquareMatrix m = rng.matrix(n, -1.0, 1.0);
        const SquareMatrix ident = SquareMatrix::Identity(n, n);
        CHECK(max_abs(expm(m) * expm(-m) - ident) < 1e-10);

        const double h = rng.uniform(0.01, 1.0);
        const SquareMatrix phi = phi1_times_h(m, h);
        CHECK(max_abs(m * phi + ident - expm(m * h)) < 1e-10);

        const SquareMatrix skew = m - m.transpose();
        const SquareMatrix q = expm(skew);
        CHECK(max_abs(q.transpose() * q - ident) < 1e-10);
    }
}

TEST_CASE("general SEDG agrees with the closed-form oscillator step") {
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        const double w = rng.uniform(1.0, 100.0);
        const double sigma = rng.uniform(0.1, 3.0);
        const double h = rng.uniform(1e-3, 0.1);
        const double dw = rng.normal() * std::sqrt(h);
        const Vec x = rng.vec(2, -1.0, 1.0);
        const LgSdeModel model = make_oscillator(w, sigma);
        const Vec general = sedg_step(model, x, h, one(dw));
        const Vec closed = sedg_oscillator_step(w, sigma, x, h, dw);
        CHECK(max_abs(general - closed) < 1e-10 * (1.0 + w) * (1.0 + max_abs(x)));
    }
}

TEST_CASE("Langevin SEDG agrees with the general SEDG step") {
    Rng rng(8);
    for (int i = 0; i < 100; ++i) {
        const double nu = rng.uniform(0.0, 3.0);
        const double sigma = rng.uniform(0.1, 1.0);
        const double h = rng.uniform(1e-3, 0.1);
        const double dw = rng.normal() * std::sqrt(h);
        const Vec x = rng.vec(2, -1.0, 1.0);
        const ModelInstance m =
            make_model("damped_oscillator", {{"nu", nu}, {"sigma", sigma}});
        const Vec general = sedg_step(*m.lg, x, h, one(dw));
        const Vec langevin = sedg_langevin_step(*m.langevin, x, h, dw);
        CHECK(max_abs(general - langevin) < 1e-10);
    }
}

TEST_CASE("partitioned SEM agrees with the closed-form SEM step") {
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        const double w = rng.uniform(1.0, 100.0);
        const double sigma = rng.uniform(0.1, 3.0);
        const double h = rng.uniform(1e-3, 0.1);
        const double dw = rng.normal() * std::sqrt(h);
        const Vec x = rng.vec(2, -1.0, 1.0);
        const Vec a = partitioned_sem_step(make_oscillator(w, sigma), x, h, one(dw));
        const Vec b = sem_step(w, sigma, x, h, dw);
        CHECK(max_abs(a - b) < 1e-10 * (1.0 + w * w * h));
    }
}

TEST_CASE("Poisson SEDG preserves the energy at random states") {
    Rng rng(10);
    for (int i = 0; i < 100; ++i) {
        const double lambda = rng.uniform(0.2, 2.0);
        const double sigma = rng.uniform(0.1, 1.0);
        const double h = rng.uniform(1e-3, 0.1);
        const double dw = rng.normal() * std::sqrt(h);
        const Vec x = rng.vec(2, -1.0, 1.0);
        const PoissonLgModel model = make_wind_poisson(lambda, sigma);
        const Vec next = sedg_poisson_step(model, x, h, dw);
        CHECK(std::abs(poisson_energy(model, next) - poisson_energy(model, x)) < 1e-12);
    }
}

TEST_CASE("oscillator Jacobian is symplectic") {
    Rng rng(11);
    const SquareMatrix j = symplectic_form(2);
    for (int i = 0; i < 100; ++i) {
        const double w = rng.uniform(1.0, 200.0);
        const double h = rng.uniform(1e-4, 0.2);
        const SquareMatrix g = sedg_oscillator_jacobian(w, h);
        CHECK(max_abs(g.transpose() * j * g - j) < 1e-12);
    }
}

TEST_CASE("truncation is a clamp at sqrt(2 k |ln h|)") {
    Rng rng(12);
    for (int i = 0; i < 1000; ++i) {
        const double h = rng.uniform(1e-6, 0.99);
        const double k = rng.uniform(1.0, 4.0);
        const double xi = 6.0 * rng.normal();
        const double bound = std::sqrt(2.0 * k * std::abs(std::log(h)));
        const double t = truncate_increment(xi, h, k);
        CHECK(std::abs(t) <= bound);
        if (std::abs(xi) <= bound) {
            CHECK(t == xi);
        } else {
            CHECK(t == std::copysign(bound, xi));
        }
        CHECK(truncate_increment(t, h, k) == t);
        const TruncationPolicy policy{true, k};
        const double dw = xi * std::sqrt(h);
        const double clipped = policy.apply(dw, h);
        CHECK(std::abs(clipped) <= bound * std::sqrt(h) * (1.0 + 1e-15));
        if (std::abs(xi) < 0.999 * bound) {
            CHECK(clipped == dw);
        }
    }
}

TEST_CASE("coarse increments are sums of fine increments") {
    for (std::uint64_t p = 0; p < 20; ++p) {
        const IncrementGrid g = generate(77, p, 2, 10, 1.0 / 1024.0);
        const Increments c = aggregate(g, 32);
        for (int r = 0; r < 2; ++r) {
            double total_fine = 0.0;
            double total_coarse = 0.0;
            for (std::size_t n = 0; n < g.fine.steps(); ++n) {
                total_fine += g.fine(r, n);
            }
            for (std::size_t n = 0; n < c.steps(); ++n) {
                total_coarse += c(r, n);
            }
            CHECK(std::abs(total_fine - total_coarse) < 1e-13);
        }
    }
}
