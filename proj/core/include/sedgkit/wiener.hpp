#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sedgkit {

/// Philox4x32-10 block function (Salmon et al., SC'11). Pure: same counter and key, same output.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Standard normal draw keyed by (seed, path, noise index, time index).
///
/// Draws come in Box-Muller pairs: time indices 2j and 2j+1 share one Philox block.
double keyed_standard_normal(std::uint64_t seed, std::uint64_t path, std::uint32_t noise,
                             std::uint64_t time_index);

/// m x n array of Wiener increments on a uniform step. Storage is time-major, so the
/// m increments of one step are contiguous.
class Increments {
public:
    Increments() = default;
    Increments(int noise_count, std::size_t steps, double step);

    int noise_count() const noexcept { return m_; }
    std::size_t steps() const noexcept { return n_; }
    double step() const noexcept { return step_; }

    double operator()(int r, std::size_t n) const { return data_[n * m_ + r]; }
    double& operator()(int r, std::size_t n) { return data_[n * m_ + r]; }

    /// The m increments driving step n.
    std::span<const double> at(std::size_t n) const {
        return {data_.data() + n * m_, static_cast<std::size_t>(m_)};
    }

    /// Increments of noise r, one per step (copy).
    std::vector<double> noise(int r) const;

private:
    int m_ = 0;
    std::size_t n_ = 0;
    double step_ = 0.0;
    std::vector<double> data_;
};

/// Finest-level increments of one Monte Carlo path. Coarser levels come from aggregate().
struct IncrementGrid {
    std::uint64_t base_seed = 0;
    std::uint64_t path_index = 0;
    int level = 0;  ///< n_fine = 2^level
    Increments fine;

    int noise_count() const noexcept { return fine.noise_count(); }
    std::size_t n_fine() const noexcept { return fine.steps(); }
    double h_fine() const noexcept { return fine.step(); }
};

/// I.i.d. N(0, h_fine) increments for path `path_index`, with 2^level steps per noise.
/// Bit-reproducible: independent of thread count and of which other paths were drawn.
IncrementGrid generate(std::uint64_t base_seed, std::uint64_t path_index, int m, int level,
                       double h_fine);

/// Coarse increments: entry j is the in-order sum of fine entries j*factor .. (j+1)*factor-1.
/// `factor` must be a power of two dividing the step count.
Increments aggregate(const Increments& fine, std::size_t factor);
Increments aggregate(const IncrementGrid& grid, std::size_t factor);

/// Clip a standard normal draw to [-C_h, C_h] with C_h = sqrt(2 k |ln h|).
/// Requires 0 < h < 1 and k >= 1.
double truncate_increment(double xi, double h, double k);

/// Whether and how strongly increments are clipped before an implicit step.
struct TruncationPolicy {
    bool enabled = false;
    double k = 2.0;

    void validate() const;

    /// dW -> sqrt(h) * truncate(dW / sqrt(h)) when enabled, identity otherwise.
    double apply(double dw, double h) const;
};

} // namespace sedgkit
