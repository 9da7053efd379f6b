#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sedgkit/models.hpp"
#include "sedgkit/schemes.hpp"

namespace sedgkit {

using ParamMap = std::map<std::string, double>;

/// A model selected by name, in every form the schemes may need.
struct ModelInstance {
    std::string name;
    ParamMap params;  ///< fully resolved, defaults included
    std::shared_ptr<const LgSdeModel> lg;
    std::shared_ptr<const PoissonLgModel> poisson;    ///< wind_poisson only
    std::shared_ptr<const LangevinLgModel> langevin;  ///< damped_oscillator only
    std::optional<double> omega;                      ///< oscillator models
    std::optional<double> sigma;                      ///< linear oscillator noise amplitude
    Vec default_x0;

    int dim() const { return lg->d; }
};

const std::vector<std::string>& model_names();
const std::vector<std::string>& scheme_names();

/// Parse "k=v,k=v". Throws InvalidArgument on malformed input or duplicate keys.
ParamMap parse_params(const std::string& text);

/// Build a named model. Parameters not given take their defaults; unknown keys throw.
///
///   oscillator            omega=50 sigma=2
///   wind_poisson          lambda=1 sigma=0.3
///   damped_oscillator     nu=1 sigma=0.3
///   nonlinear_oscillator  omega=10
ModelInstance make_model(const std::string& name, const ParamMap& params = {});

/// Build a named scheme for `model`. Without an explicit truncation policy, implicit
/// schemes clip increments (k = 2) and explicit ones do not.
std::unique_ptr<StepScheme> make_scheme(const std::string& name, const ModelInstance& model,
                                        std::optional<TruncationPolicy> truncation = {},
                                        const FixedPointConfig& fp = {});

} // namespace sedgkit
