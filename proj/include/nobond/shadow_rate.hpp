#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nobond/market.hpp"

namespace nobond {

// Default floor below which |sigma_Z - sigma_S| is treated as degenerate.
inline constexpr double kDegeneracyFloor = 1e-10;

// Diffusion and jump-wedge parts of the shadow rate; r_bar is their sum.
struct ShadowRateParts {
    double diffusion = 0.0;
    double jump_wedge = 0.0;
    double r_bar = 0.0;
};

// r_bar = (mu_S sigma_Z - mu_Z sigma_S) / (sigma_Z - sigma_S)
//       + lambda (kappa_Z - kappa_S) / (sigma_Z - sigma_S).
// Throws DegenerateSpec when |sigma_Z - sigma_S| <= floor.
ShadowRateParts shadow_rate_parts(const TwoAssetSpec& spec,
                                  double floor = kDegeneracyFloor);
double shadow_rate(const TwoAssetSpec& spec, double floor = kDegeneracyFloor);

// ---------------------------------------------------------------------------
// Rolling estimation from a paired daily price history.
// ---------------------------------------------------------------------------

// Aligned date/price series for both legs (same calendar, same length).
struct PairHistory {
    std::vector<std::string> dates;
    std::vector<double> s;
    std::vector<double> z;
};

void validate(const PairHistory& history);

struct RollingConfig {
    int window = 60;              // log-returns per estimate, >= 2
    double jump_threshold = 3.0;  // |r| > threshold * daily sigma flags a jump
    double degeneracy_floor = 1e-8;
    int trading_days = 252;
};

// One dated estimate.  Degenerate dates (rolling vols closer than the floor)
// are flagged and carry NaN values rather than being dropped, so the output
// calendar always matches the input calendar from the first full window on.
struct ShadowRatePoint {
    std::string date;
    double r_bar = 0.0;
    double diffusion = 0.0;
    double jump_wedge = 0.0;
    bool degenerate = false;
};

// Rolling window estimators, annualised with `trading_days`:
//   mu     = mean(log-returns) * 252
//   sigma  = sample std (N-1 divisor) of log-returns * sqrt(252)
//   lambda = annualised count of jump days: either leg's |log-return| above
//            jump_threshold * (its rolling sigma / sqrt(252))
//   kappa  = per-leg mean log-return over the jump days (0 when none)
// Throws InsufficientData when the history cannot fill one window.
std::vector<ShadowRatePoint> rolling_shadow_series(
    const PairHistory& history, const RollingConfig& config = {});

// ---------------------------------------------------------------------------
// Comparison against a benchmark yield series.
// ---------------------------------------------------------------------------

struct DatedYield {
    std::string date;
    double yield = 0.0;
};

struct BenchmarkGapPoint {
    std::string date;
    double r_bar = 0.0;
    double yield = 0.0;
    double gap = 0.0;  // r_bar - yield
};

// Inner join on dates (degenerate shadow points excluded).  Throws
// EmptyIntersection when the joined calendar is empty.
std::vector<BenchmarkGapPoint> benchmark_gap(
    const std::vector<ShadowRatePoint>& series,
    const std::vector<DatedYield>& yields);

} // namespace nobond
