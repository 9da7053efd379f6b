#pragma once

#include <array>
#include <atomic>
#include <memory>
#include <mutex>
#include <span>
#include <string_view>
#include <vector>

#include "sedgkit/fixed_point.hpp"
#include "sedgkit/integrators.hpp"
#include "sedgkit/models.hpp"
#include "sedgkit/wiener.hpp"

namespace sedgkit {

struct SchemeOptions {
    FixedPointConfig fixed_point;
    TruncationPolicy truncation;
};

/// A one-step map (x, h, dW) -> x'. Instances are immutable after construction and
/// safe to step concurrently from several threads.
class StepScheme {
public:
    virtual ~StepScheme() = default;
    StepScheme(const StepScheme&) = delete;
    StepScheme& operator=(const StepScheme&) = delete;

    virtual std::string_view name() const = 0;
    virtual bool implicit() const = 0;
    virtual int dim() const = 0;
    virtual int noise_count() const = 0;

    const SchemeOptions& options() const noexcept { return options_; }

    /// Advance one step. The truncation policy is applied to dW first.
    Vec step(const Vec& x, double h, std::span<const double> dW) const;
    /// Same, with a caller-supplied fixed-point configuration (explicit schemes ignore it).
    Vec step(const Vec& x, double h, std::span<const double> dW, const FixedPointConfig& fp) const;

protected:
    explicit StepScheme(SchemeOptions options);

    virtual Vec advance(const Vec& x, double h, std::span<const double> dW,
                        const FixedPointConfig& fp) const = 0;

private:
    SchemeOptions options_;
};

/// General SEDG with propagators cached per step size. Cache entries are written
/// once and read without locking.
class SedgScheme final : public StepScheme {
public:
    SedgScheme(std::shared_ptr<const LgSdeModel> model, SchemeOptions options = {});
    ~SedgScheme() override;

    std::string_view name() const override { return "sedg"; }
    bool implicit() const override { return implicit_; }
    int dim() const override { return model_->d; }
    int noise_count() const override { return model_->m; }

    /// Propagators for h, built on first request. Returns nullptr only when the cache is full.
    const SedgPropagators* cached_propagators(double h) const;

protected:
    Vec advance(const Vec& x, double h, std::span<const double> dW,
                const FixedPointConfig& fp) const override;

private:
    static constexpr std::size_t kCacheSlots = 16;

    std::shared_ptr<const LgSdeModel> model_;
    bool implicit_;
    mutable std::array<std::atomic<const SedgPropagators*>, kCacheSlots> slots_{};
    mutable std::mutex insert_mutex_;
    mutable std::vector<std::unique_ptr<SedgPropagators>> owned_;
};

class SedgPoissonScheme final : public StepScheme {
public:
    SedgPoissonScheme(std::shared_ptr<const PoissonLgModel> model, SchemeOptions options = {});

    std::string_view name() const override { return "sedg_poisson"; }
    bool implicit() const override { return !model_->U.affine; }
    int dim() const override { return model_->d; }
    int noise_count() const override { return 1; }

protected:
    Vec advance(const Vec& x, double h, std::span<const double> dW,
                const FixedPointConfig& fp) const override;

private:
    std::shared_ptr<const PoissonLgModel> model_;
};

class SedgLangevinScheme final : public StepScheme {
public:
    SedgLangevinScheme(std::shared_ptr<const LangevinLgModel> model, SchemeOptions options = {});

    std::string_view name() const override { return "sedg_langevin"; }
    bool implicit() const override { return !model_->U0.affine; }
    int dim() const override { return 2 * model_->dbar; }
    int noise_count() const override { return 1; }

protected:
    Vec advance(const Vec& x, double h, std::span<const double> dW,
                const FixedPointConfig& fp) const override;

private:
    std::shared_ptr<const LangevinLgModel> model_;
};

class SedgOscillatorScheme final : public StepScheme {
public:
    SedgOscillatorScheme(double omega, double sigma, SchemeOptions options = {});

    std::string_view name() const override { return "sedg_oscillator"; }
    bool implicit() const override { return false; }
    int dim() const override { return 2; }
    int noise_count() const override { return 1; }

protected:
    Vec advance(const Vec& x, double h, std::span<const double> dW,
                const FixedPointConfig& fp) const override;

private:
    double omega_;
    double sigma_;
};

/// Symplectic Euler-Maruyama. Uses the closed form for the linear oscillator and
/// the partitioned (p, q) update otherwise.
class SemScheme final : public StepScheme {
public:
    SemScheme(std::shared_ptr<const LgSdeModel> model, SchemeOptions options = {});
    SemScheme(double omega, double sigma, SchemeOptions options = {});

    std::string_view name() const override { return "sem"; }
    bool implicit() const override { return false; }
    int dim() const override { return model_ ? model_->d : 2; }
    int noise_count() const override { return model_ ? model_->m : 1; }

protected:
    Vec advance(const Vec& x, double h, std::span<const double> dW,
                const FixedPointConfig& fp) const override;

private:
    std::shared_ptr<const LgSdeModel> model_;
    double omega_ = 0.0;
    double sigma_ = 0.0;
};

class MilsteinScheme final : public StepScheme {
public:
    MilsteinScheme(std::shared_ptr<const LgSdeModel> model, SchemeOptions options = {});

    std::string_view name() const override { return "milstein"; }
    bool implicit() const override { return false; }
    int dim() const override { return model_->d; }
    int noise_count() const override { return model_->m; }

protected:
    Vec advance(const Vec& x, double h, std::span<const double> dW,
                const FixedPointConfig& fp) const override;

private:
    std::shared_ptr<const LgSdeModel> model_;
};

class EulerMaruyamaScheme final : public StepScheme {
public:
    EulerMaruyamaScheme(std::shared_ptr<const LgSdeModel> model, SchemeOptions options = {});

    std::string_view name() const override { return "euler_maruyama"; }
    bool implicit() const override { return false; }
    int dim() const override { return model_->d; }
    int noise_count() const override { return model_->m; }

protected:
    Vec advance(const Vec& x, double h, std::span<const double> dW,
                const FixedPointConfig& fp) const override;

private:
    std::shared_ptr<const LgSdeModel> model_;
};

} // namespace sedgkit
