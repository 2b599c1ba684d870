#include "nobond/market.hpp"

#include <cmath>

namespace nobond {

namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw NonFiniteInput(std::string(what) + " is not finite");
    }
}

} // namespace

void validate(const MarketLeg& leg) {
    require_finite(leg.spot, "leg spot");
    require_finite(leg.div_yield, "leg div_yield");
    require_finite(leg.sigma, "leg sigma");
    require_finite(leg.kappa, "leg kappa");
    if (leg.spot <= 0.0) {
        throw NonFiniteInput("leg spot must be > 0");
    }
    if (leg.sigma < 0.0) {
        throw NonFiniteInput("leg sigma must be >= 0");
    }
}

void validate(const TwoAssetSpec& spec) {
    require_finite(spec.mu_s, "mu_s");
    require_finite(spec.mu_z, "mu_z");
    require_finite(spec.sigma_s, "sigma_s");
    require_finite(spec.sigma_z, "sigma_z");
    require_finite(spec.kappa_s, "kappa_s");
    require_finite(spec.kappa_z, "kappa_z");
    require_finite(spec.lambda, "lambda");
    require_finite(spec.rho, "rho");
    if (spec.sigma_s < 0.0 || spec.sigma_z < 0.0) {
        throw NonFiniteInput("sigmas must be >= 0");
    }
    if (spec.lambda < 0.0) {
        throw NonFiniteInput("lambda must be >= 0");
    }
    if (spec.rho < -1.0 || spec.rho > 1.0) {
        throw NonFiniteInput("rho must lie in [-1, 1]");
    }
}

} // namespace nobond
