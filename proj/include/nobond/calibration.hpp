#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nobond/fourier.hpp"
#include "nobond/shadow_rate.hpp"

namespace nobond {

// One option quote.  weight == 0 excludes the quote from objectives (set by
// ingest for static-arbitrage violators) without losing the row.
struct Quote {
    double strike = 0.0;
    double maturity = 0.0;  // years
    OptionKind kind = OptionKind::call;
    double mid = 0.0;
    double weight = 1.0;
};

struct OptionChain {
    double spot = 0.0;
    std::string as_of;
    std::vector<Quote> quotes;
};

void validate(const OptionChain& chain);

// Annualised sample volatility of log-returns (N-1 divisor).  Throws
// InsufficientData with fewer than two returns (three prices).
double historical_vol(const std::vector<double>& prices,
                      int trading_days = 252);

// Root mean squared pricing error of `model` against the chain's positive-
// weight quotes, priced with the COS engine at the given shadow rate.  A
// quote the model cannot price (moment explosion, truncation overflow)
// surfaces as an infinite objective rather than an exception.
double rmse_objective(const LevyModel& model, const OptionChain& chain,
                      const MarketLeg& leg, double r_bar,
                      const CosConfig& config = {});

// rmse / mean(mid) over the accepted quotes.
double relative_rmse(double rmse, const OptionChain& chain);

// mu = r_bar - div_yield + sigma^2 / 2 + Lambda(kappa) for one leg, with
// sigma the leg's historical diffusion vol estimate.
double risk_neutral_drift(const LevyModel& model, double r_bar,
                          double div_yield, double sigma, double kappa);

// Diffusion-only shadow-rate update from the two drifts:
//   (mu_S sigma_Z - mu_Z sigma_S) / (sigma_Z - sigma_S).
// Throws DegenerateSpec when the vol spread is below the floor.
double update_shadow_rate(double mu_s, double mu_z, double sigma_s,
                          double sigma_z, double floor = 1e-8);

struct CalibrationConfig {
    double seed_rate = 0.0;   // benchmark Treasury seed for r_bar
    double eps = 1e-4;        // |r_bar step| convergence threshold
    int max_outer = 50;       // outer iterations before NonConvergence
    int nm_max_iter = 500;    // Nelder-Mead budget per start
    double nm_tol = 1e-10;    // simplex objective-spread stop
    int n_starts = 5;         // multi-start count
    std::uint64_t seed = 20250816;  // jitter seed for the extra starts
    bool jump_wedge_update = false; // include lambda (kappa_Z - kappa_S) term
                                    // in the r_bar update (off: verbatim
                                    // diffusion-only update)
    double wedge_lambda = 0.0;      // intensity estimate for that option
    bool cgmy_two_step = true;      // fix Y, fit (C,G,M), then release Y
    CosConfig cos;
};

struct CalibrationResult {
    LevyModel model;               // fitted parameters
    double r_bar = 0.0;            // converged shadow rate
    double rmse = 0.0;
    double rel_rmse = 0.0;
    bool converged = false;
    int outer_iterations = 0;
    double sigma_s = 0.0;          // historical vols (step 1)
    double sigma_z = 0.0;
    double mu_s = 0.0;             // final risk-neutral drifts (step 5)
    double mu_z = 0.0;
    std::vector<double> r_bar_path;  // r_bar after each outer iteration
};

// Full loop: historical vols, seed rate, alternate (fit model | update
// r_bar) until the update moves less than eps or max_outer is hit.  The fit
// is Nelder-Mead over log/logit-transformed parameters with n_starts seeded
// starts, warm-started across outer iterations.  model_kind is one of
// "bs" | "nig" | "cgmy" | "vg" (case-insensitive).  Deterministic: identical
// inputs and config produce an identical result.
CalibrationResult calibrate(const OptionChain& chain,
                            const PairHistory& history,
                            const MarketLeg& leg_s, const MarketLeg& leg_z,
                            const std::string& model_kind,
                            const CalibrationConfig& config);

} // namespace nobond
