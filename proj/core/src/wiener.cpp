#include "sedgkit/wiener.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "sedgkit/errors.hpp"

namespace sedgkit {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(p);
    hi = static_cast<std::uint32_t>(p >> 32);
}

// 53 random bits -> (0, 1].
inline double to_unit_open_left(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

struct NormalPair {
    double first;
    double second;
};

NormalPair normal_pair(std::uint64_t seed, std::uint64_t path, std::uint32_t noise,
                       std::uint64_t pair_index) {
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(pair_index), noise, static_cast<std::uint32_t>(path),
        static_cast<std::uint32_t>(path >> 32)};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    const auto bits = philox4x32(counter, key);
    const double u1 = to_unit_open_left(bits[0], bits[1]);
    const double u2 = to_unit_open_left(bits[2], bits[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t lo0, hi0, lo1, hi1;
        mulhilo(kPhiloxM0, ctr[0], lo0, hi0);
        mulhilo(kPhiloxM1, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

double keyed_standard_normal(std::uint64_t seed, std::uint64_t path, std::uint32_t noise,
                             std::uint64_t time_index) {
    const NormalPair p = normal_pair(seed, path, noise, time_index / 2);
    return (time_index % 2 == 0) ? p.first : p.second;
}

Increments::Increments(int noise_count, std::size_t steps, double step)
    : m_(noise_count), n_(steps), step_(step), data_(static_cast<std::size_t>(noise_count) * steps, 0.0) {
    if (noise_count < 1) {
        throw InvalidArgument("Increments: noise count must be >= 1");
    }
}

std::vector<double> Increments::noise(int r) const {
    std::vector<double> out(n_);
    for (std::size_t n = 0; n < n_; ++n) {
        out[n] = (*this)(r, n);
    }
    return out;
}

IncrementGrid generate(std::uint64_t base_seed, std::uint64_t path_index, int m, int level,
                       double h_fine) {
    if (m < 1) {
        throw InvalidArgument("generate: noise count must be >= 1");
    }
    // The pair index fills one 32-bit counter word.
    if (level < 0 || level > 32) {
        throw InvalidArgument("generate: level must be in [0, 32]");
    }
    if (!(h_fine > 0.0) || !std::isfinite(h_fine)) {
        throw InvalidArgument("generate: h_fine must be positive and finite");
    }
    const std::size_t n_fine = std::size_t{1} << level;
    IncrementGrid grid{base_seed, path_index, level, Increments(m, n_fine, h_fine)};
    const double scale = std::sqrt(h_fine);
    for (int r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < n_fine; j += 2) {
            const NormalPair p = normal_pair(base_seed, path_index, static_cast<std::uint32_t>(r), j / 2);
            grid.fine(r, j) = scale * p.first;
            if (j + 1 < n_fine) {
                grid.fine(r, j + 1) = scale * p.second;
            }
        }
    }
    return grid;
}

Increments aggregate(const Increments& fine, std::size_t factor) {
    if (factor == 0 || !std::has_single_bit(factor)) {
        throw InvalidArgument("aggregate: factor must be a power of two");
    }
    if (fine.steps() % factor != 0) {
        throw InvalidArgument("aggregate: factor " + std::to_string(factor) +
                              " does not divide step count " + std::to_string(fine.steps()));
    }
    const std::size_t n_coarse = fine.steps() / factor;
    Increments coarse(fine.noise_count(), n_coarse, fine.step() * static_cast<double>(factor));
    for (int r = 0; r < fine.noise_count(); ++r) {
        for (std::size_t j = 0; j < n_coarse; ++j) {
            double sum = 0.0;
            for (std::size_t i = j * factor; i < (j + 1) * factor; ++i) {
                sum += fine(r, i);
            }
            coarse(r, j) = sum;
        }
    }
    return coarse;
}

Increments aggregate(const IncrementGrid& grid, std::size_t factor) {
    return aggregate(grid.fine, factor);
}

double truncate_increment(double xi, double h, double k) {
    if (!(h > 0.0) || !(h < 1.0)) {
        throw InvalidArgument("truncate_increment: h must lie in (0, 1)");
    }
    if (!(k >= 1.0)) {
        throw InvalidArgument("truncate_increment: k must be >= 1");
    }
    const double bound = std::sqrt(2.0 * k * std::abs(std::log(h)));
    if (xi > bound) {
        return bound;
    }
    if (xi < -bound) {
        return -bound;
    }
    return xi;
}

void TruncationPolicy::validate() const {
    if (!(k >= 1.0) || !std::isfinite(k)) {
        throw InvalidArgument("truncation: k must be finite and >= 1");
    }
}

double TruncationPolicy::apply(double dw, double h) const {
    if (!enabled) {
        return dw;
    }
    // Clip dW directly at sqrt(h) C_h so that in-band increments pass through bit-exact.
    const double bound = std::sqrt(h) * truncate_increment(HUGE_VAL, h, k);
    return std::clamp(dw, -bound, bound);
}

} // namespace sedgkit
