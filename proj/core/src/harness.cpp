#include "sedgkit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "sedgkit/diagnostics.hpp"
#include "sedgkit/errors.hpp"

namespace sedgkit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Steps of size h covering t_end exactly; throws unless t_end / h is (near) an integer.
std::size_t step_count(double t_end, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidArgument("step size must be positive and finite");
    }
    const double ratio = t_end / h;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(ratio - n) > 1e-9 * n) {
        throw InvalidArgument("t_end must be an integer multiple of the step size");
    }
    return static_cast<std::size_t>(n);
}

int log2_exact(std::size_t n, const char* what) {
    if (!std::has_single_bit(n)) {
        throw InvalidArgument(std::string(what) + " must be a power of two");
    }
    return std::countr_zero(n);
}

Vec initial_state(const ExperimentConfig& cfg, const ModelInstance& model) {
    Vec x0 = cfg.x0 ? *cfg.x0 : model.default_x0;
    if (x0.size() != model.dim()) {
        throw InvalidArgument("x0 has dimension " + std::to_string(x0.size()) + ", model " +
                              model.name + " needs " + std::to_string(model.dim()));
    }
    if (!all_finite(x0)) {
        throw InvalidArgument("x0 must be finite");
    }
    return x0;
}

/// Runs body(path) for every path on a pool of threads. Each body writes only its own
/// slot; if several paths fail, the one with the lowest index is rethrown.
template <class Body>
void for_each_path(std::size_t paths, unsigned threads, Body&& body) {
    const unsigned workers = static_cast<unsigned>(
        std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(paths, 1)));
    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::size_t failed_path = std::numeric_limits<std::size_t>::max();
    std::exception_ptr failure;

    auto run = [&] {
        for (;;) {
            const std::size_t p = next.fetch_add(1, std::memory_order_relaxed);
            if (p >= paths) {
                return;
            }
            try {
                body(p);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (p < failed_path) {
                    failed_path = p;
                    failure = std::current_exception();
                }
            }
        }
    };

    if (workers == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(run);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("path " + std::to_string(failed_path) + ": " + e.what(),
                                   e.iterations(), e.residual());
        } catch (const NumericError& e) {
            throw NumericError("path " + std::to_string(failed_path) + ": " + e.what());
        }
    }
}

} // namespace

void ExperimentConfig::validate() const {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw InvalidArgument("t_end must be positive and finite");
    }
    if (refinement < 32 || !std::has_single_bit(refinement)) {
        throw InvalidArgument("refinement must be a power of two no smaller than 32");
    }
    if (paths == 0) {
        throw InvalidArgument("path count must be positive");
    }
    if (truncation) {
        truncation->validate();
    }
    fixed_point.validate();
}

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("SEDGKIT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

Trajectory simulate_path(const StepScheme& scheme, const Vec& x0, double h, std::size_t n_steps,
                         const Increments& dW) {
    Trajectory out;
    out.t.reserve(n_steps + 1);
    out.x.reserve(n_steps + 1);
    if (n_steps > 0 && (dW.steps() < n_steps || dW.noise_count() != scheme.noise_count())) {
        throw InvalidArgument("simulate_path: increment grid does not cover the requested steps");
    }
    if (n_steps > 0 && std::abs(dW.step() - h) > 1e-12 * h) {
        throw InvalidArgument("simulate_path: increment grid step differs from h");
    }
    Vec x = x0;
    out.t.push_back(0.0);
    out.x.push_back(x);
    for (std::size_t n = 0; n < n_steps; ++n) {
        try {
            x = scheme.step(x, h, dW.at(n));
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("step " + std::to_string(n) + " (t = " +
                                       std::to_string(static_cast<double>(n) * h) + "): " + e.what(),
                                   e.iterations(), e.residual());
        }
        out.t.push_back(static_cast<double>(n + 1) * h);
        out.x.push_back(x);
    }
    return out;
}

Vec propagate(const StepScheme& scheme, const Vec& x0, double h, std::size_t n_steps,
              const Increments& dW) {
    if (n_steps > 0 && (dW.steps() < n_steps || dW.noise_count() != scheme.noise_count())) {
        throw InvalidArgument("propagate: increment grid does not cover the requested steps");
    }
    if (n_steps > 0 && std::abs(dW.step() - h) > 1e-12 * h) {
        throw InvalidArgument("propagate: increment grid step differs from h");
    }
    Vec x = x0;
    for (std::size_t n = 0; n < n_steps; ++n) {
        try {
            x = scheme.step(x, h, dW.at(n));
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("step " + std::to_string(n) + " (t = " +
                                       std::to_string(static_cast<double>(n) * h) + "): " + e.what(),
                                   e.iterations(), e.residual());
        }
    }
    return x;
}

std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw InvalidArgument("fit_line: need at least two points of matching length");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw InvalidArgument("fit_line: abscissae are all equal");
    }
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

ConvergenceTable strong_order(const ExperimentConfig& cfg) {
    return strong_order(cfg, make_model(cfg.model, cfg.params));
}

ConvergenceTable strong_order(const ExperimentConfig& cfg, const ModelInstance& model) {
    cfg.validate();
    if (cfg.paths < 100) {
        throw InvalidArgument("strong_order needs at least 100 paths");
    }
    if (cfg.h_list.empty()) {
        throw InvalidArgument("strong_order: h list is empty");
    }
    std::vector<double> hs = cfg.h_list;
    std::sort(hs.begin(), hs.end(), std::greater<>());
    if (std::adjacent_find(hs.begin(), hs.end()) != hs.end()) {
        throw InvalidArgument("strong_order: h list contains duplicates");
    }
    std::vector<std::size_t> counts;
    for (double h : hs) {
        counts.push_back(step_count(cfg.t_end, h));
        log2_exact(counts.back(), "t_end / h");
    }
    const std::size_t n_fine = counts.back() * cfg.refinement;
    const int level = log2_exact(n_fine, "reference step count");
    if (level > 32) {
        throw InvalidArgument("strong_order: reference grid too fine");
    }
    const double h_fine = cfg.t_end / static_cast<double>(n_fine);

    const auto scheme = make_scheme(cfg.scheme, model, cfg.truncation, cfg.fixed_point);
    const Vec x0 = initial_state(cfg, model);
    const int m = scheme->noise_count();

    const std::size_t k = hs.size();
    std::vector<double> err2(cfg.paths * k);
    std::vector<double> ref_norm(cfg.paths);
    for_each_path(cfg.paths, resolve_threads(cfg.threads), [&](std::size_t p) {
        const IncrementGrid grid = generate(cfg.seed, p, m, level, h_fine);
        const Vec ref = propagate(*scheme, x0, h_fine, n_fine, grid.fine);
        ref_norm[p] = ref.norm();
        for (std::size_t i = 0; i < k; ++i) {
            const Increments coarse = aggregate(grid, n_fine / counts[i]);
            const Vec xe = propagate(*scheme, x0, hs[i], counts[i], coarse);
            err2[p * k + i] = (xe - ref).squaredNorm();
        }
    });

    ConvergenceTable table;
    const double np = static_cast<double>(cfg.paths);
    double scale = 0.0;
    for (double r : ref_norm) {
        scale += r;
    }
    scale /= np;
    std::vector<double> lx;
    std::vector<double> ly;
    bool any_zero = false;
    double max_rms = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double sum = 0.0;
        for (std::size_t p = 0; p < cfg.paths; ++p) {
            sum += err2[p * k + i];
        }
        const double ms = sum / np;
        double var = 0.0;
        for (std::size_t p = 0; p < cfg.paths; ++p) {
            const double dv = err2[p * k + i] - ms;
            var += dv * dv;
        }
        var /= (np - 1.0);
        const double rms = std::sqrt(ms);
        // Delta method: se(sqrt(ms)) = se(ms) / (2 sqrt(ms)).
        const double se = rms > 0.0 ? std::sqrt(var / np) / (2.0 * rms) : 0.0;
        table.rows.push_back({hs[i], rms, se});
        any_zero = any_zero || rms == 0.0;
        max_rms = std::max(max_rms, rms);
        lx.push_back(std::log(hs[i]));
        ly.push_back(std::log(rms));
    }
    table.degenerate = any_zero || max_rms <= 1e-10 * (1.0 + scale);
    if (k >= 2 && !any_zero) {
        std::tie(table.slope, table.intercept) = fit_line(lx, ly);
    } else {
        table.slope = kNaN;
        table.intercept = kNaN;
    }
    return table;
}

GrowthSeries expectation_growth(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.paths < 2) {
        throw InvalidArgument("expectation_growth needs at least two paths");
    }
    const std::size_t n = step_count(cfg.t_end, cfg.h);
    const ModelInstance model = make_model(cfg.model, cfg.params);
    if (!model.omega) {
        throw UnsupportedOperation("expectation_growth needs an oscillator model, got " + model.name);
    }
    const double omega = *model.omega;
    const auto scheme = make_scheme(cfg.scheme, model, cfg.truncation, cfg.fixed_point);
    const Vec x0 = initial_state(cfg, model);
    const int level = std::bit_width(n - 1);
    if (level > 32) {
        throw InvalidArgument("expectation_growth: too many steps");
    }

    std::vector<double> h1(cfg.paths * (n + 1));
    for_each_path(cfg.paths, resolve_threads(cfg.threads), [&](std::size_t p) {
        const IncrementGrid grid = generate(cfg.seed, p, scheme->noise_count(), level, cfg.h);
        double* row = h1.data() + p * (n + 1);
        Vec x = x0;
        row[0] = oscillator_h1(omega, x);
        for (std::size_t j = 0; j < n; ++j) {
            x = scheme->step(x, cfg.h, grid.fine.at(j));
            row[j + 1] = oscillator_h1(omega, x);
        }
    });

    GrowthSeries out;
    const double np = static_cast<double>(cfg.paths);
    for (std::size_t j = 0; j <= n; ++j) {
        double sum = 0.0;
        for (std::size_t p = 0; p < cfg.paths; ++p) {
            sum += h1[p * (n + 1) + j];
        }
        const double mean = sum / np;
        double var = 0.0;
        for (std::size_t p = 0; p < cfg.paths; ++p) {
            const double dv = h1[p * (n + 1) + j] - mean;
            var += dv * dv;
        }
        var /= (np - 1.0);
        out.t.push_back(static_cast<double>(j) * cfg.h);
        out.mean.push_back(mean);
        out.std_error.push_back(std::sqrt(var / np));
    }
    return out;
}

SweepTable frequency_sweep(const ExperimentConfig& cfg, const std::vector<double>& omegas,
                           const std::vector<std::string>& schemes) {
    cfg.validate();
    if (omegas.empty()) {
        throw InvalidArgument("frequency_sweep: omega list is empty");
    }
    if (schemes.empty()) {
        throw InvalidArgument("frequency_sweep: scheme list is empty");
    }
    for (double w : omegas) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw InvalidArgument("frequency_sweep: omegas must be positive and finite");
        }
    }
    const std::size_t n = step_count(cfg.t_end, cfg.h);
    const std::size_t n_fine = n * cfg.refinement;
    const int level = log2_exact(n_fine, "reference step count");
    if (level > 32) {
        throw InvalidArgument("frequency_sweep: reference grid too fine");
    }
    const double h_fine = cfg.h / static_cast<double>(cfg.refinement);

    struct Case {
        double omega;
        std::string scheme_name;
        std::unique_ptr<StepScheme> scheme;
        Vec x0;
    };
    std::vector<Case> cases;
    int d = 0;
    int m = 0;
    for (double w : omegas) {
        ParamMap params = cfg.params;
        params["omega"] = w;
        const ModelInstance model = make_model(cfg.model, params);
        if (!model.omega) {
            throw UnsupportedOperation("frequency_sweep needs an oscillator model, got " + model.name);
        }
        d = model.dim();
        for (const auto& s : schemes) {
            auto scheme = make_scheme(s, model, cfg.truncation, cfg.fixed_point);
            m = scheme->noise_count();
            cases.push_back({w, s, std::move(scheme), initial_state(cfg, model)});
        }
    }

    const std::size_t nc = cases.size();
    std::vector<double> err2(cfg.paths * nc * static_cast<std::size_t>(d));
    for_each_path(cfg.paths, resolve_threads(cfg.threads), [&](std::size_t p) {
        const IncrementGrid grid = generate(cfg.seed, p, m, level, h_fine);
        const Increments coarse = aggregate(grid, cfg.refinement);
        for (std::size_t c = 0; c < nc; ++c) {
            const Case& cs = cases[c];
            const Vec ref = propagate(*cs.scheme, cs.x0, h_fine, n_fine, grid.fine);
            const Vec xe = propagate(*cs.scheme, cs.x0, cfg.h, n, coarse);
            for (int i = 0; i < d; ++i) {
                const double e = xe[i] - ref[i];
                err2[(p * nc + c) * d + i] = e * e;
            }
        }
    });

    SweepTable table;
    const double np = static_cast<double>(cfg.paths);
    for (std::size_t c = 0; c < nc; ++c) {
        for (int i = 0; i < d; ++i) {
            double sum = 0.0;
            for (std::size_t p = 0; p < cfg.paths; ++p) {
                sum += err2[(p * nc + c) * d + i];
            }
            table.rows.push_back({cases[c].omega, cases[c].scheme_name, i + 1, std::sqrt(sum / np)});
        }
    }
    for (const auto& s : schemes) {
        for (int i = 1; i <= d; ++i) {
            std::vector<double> lx;
            std::vector<double> ly;
            bool usable = true;
            for (const auto& row : table.rows) {
                if (row.scheme == s && row.component == i) {
                    usable = usable && row.rms > 0.0;
                    lx.push_back(std::log(row.omega));
                    ly.push_back(std::log(row.rms));
                }
            }
            double slope = kNaN;
            if (usable && lx.size() >= 2) {
                slope = fit_line(lx, ly).first;
            }
            table.slopes.push_back({s, i, slope});
        }
    }
    return table;
}

} // namespace sedgkit
