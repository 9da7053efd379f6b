#include "sedgkit/schemes.hpp"

#include <cstring>

#include "sedgkit/errors.hpp"

namespace sedgkit {

namespace {

template <class T>
std::shared_ptr<const T> require_model(std::shared_ptr<const T> model) {
    if (!model) {
        throw InvalidArgument("scheme: model must not be null");
    }
    model->validate();
    return model;
}

bool same_bits(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

} // namespace

// ---------------------------------------------------------------------------
// StepScheme

StepScheme::StepScheme(SchemeOptions options) : options_(options) {
    options_.fixed_point.validate();
    options_.truncation.validate();
}

Vec StepScheme::step(const Vec& x, double h, std::span<const double> dW) const {
    return step(x, h, dW, options_.fixed_point);
}

Vec StepScheme::step(const Vec& x, double h, std::span<const double> dW,
                     const FixedPointConfig& fp) const {
    if (static_cast<int>(dW.size()) != noise_count()) {
        throw InvalidArgument(std::string(name()) + ": wrong number of increments");
    }
    if (!options_.truncation.enabled) {
        return advance(x, h, dW, fp);
    }
    std::array<double, kMaxStateDim> clipped{};
    if (dW.size() > clipped.size()) {
        throw InvalidArgument("too many noise channels for truncation");
    }
    for (std::size_t r = 0; r < dW.size(); ++r) {
        clipped[r] = options_.truncation.apply(dW[r], h);
    }
    return advance(x, h, std::span<const double>(clipped.data(), dW.size()), fp);
}

// ---------------------------------------------------------------------------
// SedgScheme

SedgScheme::SedgScheme(std::shared_ptr<const LgSdeModel> model, SchemeOptions options)
    : StepScheme(options), model_(require_model(std::move(model))) {
    implicit_ = !model_->U.affine;
    for (const auto& v : model_->V) {
        implicit_ = implicit_ || !v.affine;
    }
}

SedgScheme::~SedgScheme() = default;

const SedgPropagators* SedgScheme::cached_propagators(double h) const {
    for (const auto& slot : slots_) {
        const SedgPropagators* p = slot.load(std::memory_order_acquire);
        if (p == nullptr) {
            break;
        }
        if (same_bits(p->h, h)) {
            return p;
        }
    }

    std::lock_guard<std::mutex> lock(insert_mutex_);
    std::size_t free_slot = kCacheSlots;
    for (std::size_t i = 0; i < kCacheSlots; ++i) {
        const SedgPropagators* p = slots_[i].load(std::memory_order_acquire);
        if (p == nullptr) {
            free_slot = i;
            break;
        }
        if (same_bits(p->h, h)) {
            return p;
        }
    }
    if (free_slot == kCacheSlots) {
        return nullptr;
    }
    owned_.push_back(std::make_unique<SedgPropagators>(make_sedg_propagators(*model_, h)));
    const SedgPropagators* fresh = owned_.back().get();
    slots_[free_slot].store(fresh, std::memory_order_release);
    return fresh;
}

Vec SedgScheme::advance(const Vec& x, double h, std::span<const double> dW,
                        const FixedPointConfig& fp) const {
    if (const SedgPropagators* p = cached_propagators(h)) {
        return sedg_step(*model_, *p, x, dW, fp);
    }
    return sedg_step(*model_, x, h, dW, fp);
}

// ---------------------------------------------------------------------------
// Specialized SEDG forms

SedgPoissonScheme::SedgPoissonScheme(std::shared_ptr<const PoissonLgModel> model,
                                     SchemeOptions options)
    : StepScheme(options), model_(require_model(std::move(model))) {}

Vec SedgPoissonScheme::advance(const Vec& x, double h, std::span<const double> dW,
                               const FixedPointConfig& fp) const {
    return sedg_poisson_step(*model_, x, h, dW[0], fp);
}

SedgLangevinScheme::SedgLangevinScheme(std::shared_ptr<const LangevinLgModel> model,
                                       SchemeOptions options)
    : StepScheme(options), model_(require_model(std::move(model))) {}

Vec SedgLangevinScheme::advance(const Vec& x, double h, std::span<const double> dW,
                                const FixedPointConfig& fp) const {
    return sedg_langevin_step(*model_, x, h, dW[0], fp);
}

SedgOscillatorScheme::SedgOscillatorScheme(double omega, double sigma, SchemeOptions options)
    : StepScheme(options), omega_(omega), sigma_(sigma) {
    if (!(omega > 0.0)) {
        throw InvalidArgument("sedg_oscillator: omega must be > 0");
    }
}

Vec SedgOscillatorScheme::advance(const Vec& x, double h, std::span<const double> dW,
                                  const FixedPointConfig&) const {
    return sedg_oscillator_step(omega_, sigma_, x, h, dW[0]);
}

// ---------------------------------------------------------------------------
// Baselines

SemScheme::SemScheme(std::shared_ptr<const LgSdeModel> model, SchemeOptions options)
    : StepScheme(options), model_(require_model(std::move(model))) {
    if (model_->d % 2 != 0) {
        throw UnsupportedOperation("sem: model state must split into equal (p, q) halves");
    }
    if (!model_->has_hessians()) {
        throw UnsupportedOperation("sem: model needs diffusion Hessians for the Itô drift");
    }
}

SemScheme::SemScheme(double omega, double sigma, SchemeOptions options)
    : StepScheme(options), omega_(omega), sigma_(sigma) {}

Vec SemScheme::advance(const Vec& x, double h, std::span<const double> dW,
                       const FixedPointConfig&) const {
    if (model_) {
        return partitioned_sem_step(*model_, x, h, dW);
    }
    return sem_step(omega_, sigma_, x, h, dW[0]);
}

MilsteinScheme::MilsteinScheme(std::shared_ptr<const LgSdeModel> model, SchemeOptions options)
    : StepScheme(options), model_(require_model(std::move(model))) {
    if (model_->m != 1) {
        throw UnsupportedOperation("milstein: multi-noise models need Levy areas (unsupported)");
    }
    if (!model_->has_hessians()) {
        throw UnsupportedOperation("milstein: model needs diffusion Hessians");
    }
}

Vec MilsteinScheme::advance(const Vec& x, double h, std::span<const double> dW,
                            const FixedPointConfig&) const {
    return milstein_step(*model_, x, h, dW);
}

EulerMaruyamaScheme::EulerMaruyamaScheme(std::shared_ptr<const LgSdeModel> model,
                                         SchemeOptions options)
    : StepScheme(options), model_(require_model(std::move(model))) {
    if (!model_->has_hessians()) {
        throw UnsupportedOperation("euler_maruyama: model needs diffusion Hessians for the Itô drift");
    }
}

Vec EulerMaruyamaScheme::advance(const Vec& x, double h, std::span<const double> dW,
                                 const FixedPointConfig&) const {
    return euler_maruyama_step(*model_, x, h, dW);
}

} // namespace sedgkit
