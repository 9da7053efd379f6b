#include <doctest.h>

#include <cmath>
#include <numeric>

#include "sedgkit/errors.hpp"
#include "sedgkit/wiener.hpp"

using namespace sedgkit;

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using C = std::array<std::uint32_t, 4>;
    using K = std::array<std::uint32_t, 2>;
    CHECK(philox4x32(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("generate is deterministic") {
    const IncrementGrid a = generate(42, 7, 2, 10, 1e-3);
    const IncrementGrid b = generate(42, 7, 2, 10, 1e-3);
    REQUIRE(a.n_fine() == 1024);
    REQUIRE(a.noise_count() == 2);
    for (std::size_t n = 0; n < a.n_fine(); ++n) {
        for (int r = 0; r < 2; ++r) {
            CHECK(a.fine(r, n) == b.fine(r, n));
        }
    }
}

TEST_CASE("distinct paths, noises and seeds give distinct draws") {
    const IncrementGrid a = generate(1, 0, 2, 4, 1.0);
    const IncrementGrid b = generate(1, 1, 2, 4, 1.0);
    const IncrementGrid c = generate(2, 0, 2, 4, 1.0);
    CHECK(a.fine(0, 0) != b.fine(0, 0));
    CHECK(a.fine(0, 0) != c.fine(0, 0));
    CHECK(a.fine(0, 0) != a.fine(1, 0));
    CHECK(a.fine(0, 0) != a.fine(0, 1));
}

TEST_CASE("a shorter grid is a prefix of a longer one") {
    const IncrementGrid shortg = generate(9, 3, 1, 3, 0.5);
    const IncrementGrid longg = generate(9, 3, 1, 8, 0.5);
    for (std::size_t n = 0; n < shortg.n_fine(); ++n) {
        CHECK(shortg.fine(0, n) == longg.fine(0, n));
    }
}

TEST_CASE("increment moments over a million draws") {
    const double h = 0.01;
    const IncrementGrid g = generate(2024, 0, 1, 20, h);
    const std::size_t n = g.n_fine();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += g.fine(0, i);
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ss += (g.fine(0, i) - mean) * (g.fine(0, i) - mean);
    }
    const double var = ss / static_cast<double>(n - 1);
    CHECK(std::abs(mean) < 4.0 * std::sqrt(h / static_cast<double>(n)));
    CHECK(std::abs(var / h - 1.0) < 0.02);
}

TEST_CASE("aggregate with factor 1 is the identity") {
    const IncrementGrid g = generate(5, 0, 2, 6, 0.1);
    const Increments same = aggregate(g, 1);
    REQUIRE(same.steps() == g.n_fine());
    CHECK(same.step() == g.h_fine());
    for (std::size_t n = 0; n < same.steps(); ++n) {
        CHECK(same(0, n) == g.fine(0, n));
        CHECK(same(1, n) == g.fine(1, n));
    }
}

TEST_CASE("aggregate entries are in-order sums of fine increments") {
    const IncrementGrid g = generate(5, 2, 1, 7, 0.1);
    const Increments coarse = aggregate(g, 8);
    REQUIRE(coarse.steps() == 16);
    CHECK(coarse.step() == doctest::Approx(0.8).epsilon(1e-15));
    for (std::size_t j = 0; j < coarse.steps(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < 8; ++i) {
            s += g.fine(0, j * 8 + i);
        }
        CHECK(coarse(0, j) == s);
    }
}

TEST_CASE("aggregate with factor n_fine gives the total") {
    const IncrementGrid g = generate(5, 2, 1, 5, 0.1);
    const Increments total = aggregate(g, g.n_fine());
    REQUIRE(total.steps() == 1);
    double s = 0.0;
    for (std::size_t i = 0; i < g.n_fine(); ++i) {
        s += g.fine(0, i);
    }
    CHECK(total(0, 0) == s);
}

TEST_CASE("coarse and fine totals agree up to rounding") {
    const IncrementGrid g = generate(77, 1, 1, 12, 1e-2);
    double fine_total = 0.0;
    for (std::size_t i = 0; i < g.n_fine(); ++i) {
        fine_total += g.fine(0, i);
    }
    for (std::size_t f : {2u, 16u, 256u}) {
        const Increments c = aggregate(g, f);
        double coarse_total = 0.0;
        for (std::size_t j = 0; j < c.steps(); ++j) {
            coarse_total += c(0, j);
        }
        CHECK(std::abs(coarse_total - fine_total) < 1e-12);
    }
}

TEST_CASE("aggregate rejects bad factors") {
    const IncrementGrid g = generate(5, 0, 1, 4, 0.1);
    CHECK_THROWS_AS(aggregate(g, 3), InvalidArgument);
    CHECK_THROWS_AS(aggregate(g, 0), InvalidArgument);
    CHECK_THROWS_AS(aggregate(g, 32), InvalidArgument);
}

TEST_CASE("generate validates its arguments") {
    CHECK_THROWS_AS(generate(0, 0, 0, 3, 0.1), InvalidArgument);
    CHECK_THROWS_AS(generate(0, 0, 1, -1, 0.1), InvalidArgument);
    CHECK_THROWS_AS(generate(0, 0, 1, 3, 0.0), InvalidArgument);
    CHECK_THROWS_AS(generate(0, 0, 1, 3, -1.0), InvalidArgument);
}

TEST_CASE("truncate_increment examples") {
    const double h = std::exp(-2.0);
    CHECK(truncate_increment(0.0, h, 1.0) == 0.0);
    CHECK(truncate_increment(5.0, h, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(truncate_increment(-5.0, h, 1.0) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(truncate_increment(1.5, h, 1.0) == 1.5);
}

TEST_CASE("truncate_increment rejects steps outside (0, 1) and k below 1") {
    CHECK_THROWS_AS(truncate_increment(0.3, 1.0, 2.0), InvalidArgument);
    CHECK_THROWS_AS(truncate_increment(0.3, 2.0, 2.0), InvalidArgument);
    CHECK_THROWS_AS(truncate_increment(0.3, 0.0, 2.0), InvalidArgument);
    CHECK_THROWS_AS(truncate_increment(0.3, 0.5, 0.5), InvalidArgument);
}

TEST_CASE("truncation is bounded, monotone and the identity inside the band") {
    const double h = 1.0 / 64.0;
    const double k = 2.0;
    const double c = std::sqrt(2.0 * k * std::abs(std::log(h)));
    double prev = -1e300;
    for (double xi = -10.0; xi <= 10.0; xi += 0.01) {
        const double t = truncate_increment(xi, h, k);
        CHECK(std::abs(t) <= c);
        CHECK(t >= prev);
        if (std::abs(xi) <= c) {
            CHECK(t == xi);
        }
        prev = t;
    }
}

TEST_CASE("truncation policy scales by sqrt(h)") {
    const double h = std::exp(-2.0);
    TruncationPolicy off;
    CHECK(off.apply(10.0, h) == 10.0);
    TruncationPolicy on{true, 1.0};
    CHECK(on.apply(10.0, h) == doctest::Approx(2.0 * std::sqrt(h)).epsilon(1e-15));
    CHECK(on.apply(0.1, h) == 0.1);
    TruncationPolicy bad{true, 0.5};
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}
