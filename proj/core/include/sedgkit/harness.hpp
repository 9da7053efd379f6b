#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sedgkit/catalog.hpp"
#include "sedgkit/schemes.hpp"
#include "sedgkit/wiener.hpp"

namespace sedgkit {

struct ExperimentConfig {
    std::string model = "wind_poisson";
    ParamMap params;
    std::string scheme = "sedg_poisson";
    std::optional<Vec> x0;               ///< model default when unset
    double t_end = 1.0;
    std::vector<double> h_list;          ///< strong_order: coarse step sizes
    double h = 0.0;                      ///< expectation_growth, frequency_sweep
    std::size_t refinement = 128;        ///< reference step = min(h_list) / refinement
    std::size_t paths = 1000;
    std::uint64_t seed = 0;
    std::optional<TruncationPolicy> truncation;  ///< scheme default when unset
    FixedPointConfig fixed_point;
    unsigned threads = 0;                ///< 0: SEDGKIT_THREADS, else hardware concurrency
    std::string output_path;

    /// Checks the fields shared by every experiment.
    void validate() const;
};

struct Trajectory {
    std::vector<double> t;
    std::vector<Vec> x;
};

struct ConvergenceRow {
    double h = 0.0;
    double rms = 0.0;
    double std_error = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;  ///< h strictly decreasing
    double slope = 0.0;
    double intercept = 0.0;
    bool degenerate = false;  ///< errors at rounding level: the slope carries no information
};

struct GrowthSeries {
    std::vector<double> t;
    std::vector<double> mean;
    std::vector<double> std_error;
};

struct SweepRow {
    double omega = 0.0;
    std::string scheme;
    int component = 0;  ///< 1-based state index
    double rms = 0.0;
};

struct SweepSlope {
    std::string scheme;
    int component = 0;
    double slope = 0.0;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    std::vector<SweepSlope> slopes;
};

/// Number of worker threads for `requested` (0 consults SEDGKIT_THREADS, then the hardware).
unsigned resolve_threads(unsigned requested);

/// X_0..X_N driven by increments 0..N-1 of `dW`, whose step must equal h.
Trajectory simulate_path(const StepScheme& scheme, const Vec& x0, double h, std::size_t n_steps,
                         const Increments& dW);

/// Terminal state only; same preconditions as simulate_path.
Vec propagate(const StepScheme& scheme, const Vec& x0, double h, std::size_t n_steps,
              const Increments& dW);

/// Unweighted least-squares line through (x, y). Returns {slope, intercept}.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Root mean-square error at t_end for each h in cfg.h_list against the same scheme run
/// at min(h) / refinement on the coupled Brownian path.
ConvergenceTable strong_order(const ExperimentConfig& cfg);
/// Same, on an already built model (cfg.model and cfg.params are ignored).
ConvergenceTable strong_order(const ExperimentConfig& cfg, const ModelInstance& model);

/// Sample mean of H1 at every grid time, with standard errors. Oscillator models only.
GrowthSeries expectation_growth(const ExperimentConfig& cfg);

/// For each omega, rms error of each scheme per component against that scheme run at
/// h / refinement on common paths, plus log-log slopes versus omega.
SweepTable frequency_sweep(const ExperimentConfig& cfg, const std::vector<double>& omegas,
                           const std::vector<std::string>& schemes = {"sedg", "sem"});

} // namespace sedgkit
