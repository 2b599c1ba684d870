#pragma once

#include <string>

#include "nobond/errors.hpp"

namespace nobond {

// One tradeable leg of the two-risky-asset market: spot, carry, and its
// loadings on the common diffusion and jump drivers.
struct MarketLeg {
    double spot = 100.0;     // current price, > 0
    double div_yield = 0.0;  // continuous dividend yield
    double sigma = 0.0;      // diffusion volatility loading, >= 0
    double kappa = 1.0;      // loading on the common Levy jump driver
    std::string label;       // optional display name
};

// Instantaneous two-asset parameters feeding the shadow-rate formula.
// mu_* are arithmetic drifts, sigma_* diffusion vols, kappa_* jump loadings,
// lambda the common jump intensity proxy, rho the diffusion correlation.
struct TwoAssetSpec {
    double mu_s = 0.0;
    double mu_z = 0.0;
    double sigma_s = 0.0;
    double sigma_z = 0.0;
    double kappa_s = 0.0;
    double kappa_z = 0.0;
    double lambda = 0.0;
    double rho = 1.0;
};

// Throws NonFiniteInput / InvalidModel-style errors on unusable values.
void validate(const MarketLeg& leg);
void validate(const TwoAssetSpec& spec);

} // namespace nobond
