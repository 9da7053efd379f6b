#include "sedgkit/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "sedgkit/errors.hpp"

namespace sedgkit {

namespace {

Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

ParamMap resolve(const std::string& model, const ParamMap& defaults, const ParamMap& given) {
    ParamMap out = defaults;
    for (const auto& [key, value] : given) {
        if (!defaults.contains(key)) {
            throw InvalidArgument("model " + model + ": unknown parameter '" + key + "'");
        }
        if (!std::isfinite(value)) {
            throw InvalidArgument("model " + model + ": parameter '" + key + "' must be finite");
        }
        out[key] = value;
    }
    return out;
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

} // namespace

const std::vector<std::string>& model_names() {
    static const std::vector<std::string> names{"oscillator", "wind_poisson", "damped_oscillator",
                                                "nonlinear_oscillator"};
    return names;
}

const std::vector<std::string>& scheme_names() {
    static const std::vector<std::string> names{"sedg", "sedg_poisson", "sedg_langevin",
                                                "sedg_oscillator", "sem", "milstein",
                                                "euler_maruyama"};
    return names;
}

ParamMap parse_params(const std::string& text) {
    ParamMap out;
    if (trim(text).empty()) {
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = trim(text.substr(pos, comma - pos));
        pos = comma + 1;
        if (item.empty()) {
            throw InvalidArgument("params: empty entry in '" + text + "'");
        }
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument("params: expected key=value, got '" + item + "'");
        }
        const std::string key = trim(item.substr(0, eq));
        const std::string val = trim(item.substr(eq + 1));
        double value = 0.0;
        const auto [end, ec] = std::from_chars(val.data(), val.data() + val.size(), value);
        if (key.empty() || val.empty() || ec != std::errc() || end != val.data() + val.size()) {
            throw InvalidArgument("params: cannot parse '" + item + "'");
        }
        if (!out.emplace(key, value).second) {
            throw InvalidArgument("params: duplicate key '" + key + "'");
        }
    }
    return out;
}

ModelInstance make_model(const std::string& name, const ParamMap& params) {
    ModelInstance inst;
    inst.name = name;
    if (name == "oscillator") {
        inst.params = resolve(name, {{"omega", 50.0}, {"sigma", 2.0}}, params);
        const double omega = inst.params["omega"];
        const double sigma = inst.params["sigma"];
        inst.lg = std::make_shared<const LgSdeModel>(make_oscillator(omega, sigma));
        inst.omega = omega;
        inst.sigma = sigma;
        inst.default_x0 = vec2(0.0, 0.02);
    } else if (name == "wind_poisson") {
        inst.params = resolve(name, {{"lambda", 1.0}, {"sigma", 0.3}}, params);
        auto poisson = std::make_shared<const PoissonLgModel>(
            make_wind_poisson(inst.params["lambda"], inst.params["sigma"]));
        inst.lg = std::make_shared<const LgSdeModel>(poisson->as_lg());
        inst.poisson = std::move(poisson);
        inst.default_x0 = vec2(0.1, 1.0);
    } else if (name == "damped_oscillator") {
        inst.params = resolve(name, {{"nu", 1.0}, {"sigma", 0.3}}, params);
        auto langevin = std::make_shared<const LangevinLgModel>(
            make_damped_oscillator(inst.params["nu"], inst.params["sigma"]));
        inst.lg = std::make_shared<const LgSdeModel>(langevin->as_lg());
        inst.langevin = std::move(langevin);
        inst.default_x0 = vec2(0.0, 1.0);
    } else if (name == "nonlinear_oscillator") {
        inst.params = resolve(name, {{"omega", 10.0}}, params);
        const double omega = inst.params["omega"];
        inst.lg = std::make_shared<const LgSdeModel>(make_nonlinear_oscillator(omega));
        inst.omega = omega;
        inst.default_x0 = vec2(0.0, 0.0);
    } else {
        throw InvalidArgument("unknown model '" + name + "'");
    }
    return inst;
}

namespace {

std::unique_ptr<StepScheme> build(const std::string& name, const ModelInstance& model,
                                  const SchemeOptions& opts) {
    if (name == "sedg") {
        return std::make_unique<SedgScheme>(model.lg, opts);
    }
    if (name == "sedg_poisson") {
        if (!model.poisson) {
            throw UnsupportedOperation("scheme sedg_poisson needs a Poisson model, got " + model.name);
        }
        return std::make_unique<SedgPoissonScheme>(model.poisson, opts);
    }
    if (name == "sedg_langevin") {
        if (!model.langevin) {
            throw UnsupportedOperation("scheme sedg_langevin needs a Langevin model, got " +
                                       model.name);
        }
        return std::make_unique<SedgLangevinScheme>(model.langevin, opts);
    }
    if (name == "sedg_oscillator") {
        if (model.name != "oscillator") {
            throw UnsupportedOperation("scheme sedg_oscillator needs the linear oscillator, got " +
                                       model.name);
        }
        return std::make_unique<SedgOscillatorScheme>(*model.omega, *model.sigma, opts);
    }
    if (name == "sem") {
        if (model.name == "oscillator") {
            return std::make_unique<SemScheme>(*model.omega, *model.sigma, opts);
        }
        return std::make_unique<SemScheme>(model.lg, opts);
    }
    if (name == "milstein") {
        return std::make_unique<MilsteinScheme>(model.lg, opts);
    }
    if (name == "euler_maruyama") {
        return std::make_unique<EulerMaruyamaScheme>(model.lg, opts);
    }
    throw InvalidArgument("unknown scheme '" + name + "'");
}

} // namespace

std::unique_ptr<StepScheme> make_scheme(const std::string& name, const ModelInstance& model,
                                        std::optional<TruncationPolicy> truncation,
                                        const FixedPointConfig& fp) {
    SchemeOptions opts;
    opts.fixed_point = fp;
    if (truncation) {
        opts.truncation = *truncation;
        return build(name, model, opts);
    }
    auto scheme = build(name, model, opts);
    if (!scheme->implicit()) {
        return scheme;
    }
    opts.truncation = TruncationPolicy{true, 2.0};
    return build(name, model, opts);
}

} // namespace sedgkit
