#include "sedgkit/fixed_point.hpp"

namespace sedgkit {

void FixedPointConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
        throw InvalidArgument("FixedPointConfig: tolerances must be > 0");
    }
    if (max_iter < 1) {
        throw InvalidArgument("FixedPointConfig: max_iter must be >= 1");
    }
}

FixedPointResult fixed_point_solve(const std::function<Vec(const Vec&)>& map, const Vec& x0,
                                   const FixedPointConfig& cfg) {
    cfg.validate();
    return fixed_point_iterate(map, x0, cfg);
}

} // namespace sedgkit
