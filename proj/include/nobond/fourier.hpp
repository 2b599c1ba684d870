#pragma once

#include <vector>

#include "nobond/levy.hpp"

namespace nobond {

enum class OptionKind { call, put };

// Standard normal CDF via erfc (double precision across the whole axis).
double norm_cdf(double x);

// Black-Scholes European prices with continuous dividend yield.
// sigma == 0 degenerates to the discounted forward payoff.
double bs_call_analytic(double spot, double strike, double r, double div_yield,
                        double sigma, double t);
double bs_put_analytic(double spot, double strike, double r, double div_yield,
                       double sigma, double t);

// ---------------------------------------------------------------------------
// Carr-Madan damped-call FFT.
// ---------------------------------------------------------------------------

struct FftConfig {
    double alpha = 1.25;  // damping, > 0
    int n_points = 4096;  // power of two, >= 64
    double eta = 0.1;     // frequency spacing, > 0
};

// Call prices on the natural FFT log-strike grid (spacing 2 pi / (N eta),
// centred on ln spot), restricted to [k_min, k_max] in log-strike.
struct PriceGrid {
    std::vector<double> log_strikes;  // ascending
    std::vector<double> strikes;
    std::vector<double> prices;
    double spot = 0.0;
    double discount = 0.0;  // exp(-r_bar T)
};

// Damped transform with the full denominator
//   psi(v) = exp(-r T) phi(v - (alpha + 1) i) / (alpha^2 + alpha - v^2 + i (2 alpha + 1) v),
// integrated with Simpson weights and inverted by one forward FFT.  Requires
// the CF analytic at the shift, i.e. kappa (alpha + 1) inside the model strip
// (throws MomentExplosion otherwise).  Negative outputs within 1e-8 * spot
// are clamped to zero; anything more negative throws InternalError.
PriceGrid carr_madan_prices(const RiskNeutralSetup& setup, double k_min,
                            double k_max, const FftConfig& config = {});

// Linear interpolation in log-strike; throws RangeError off the grid.
double grid_interpolate(const PriceGrid& grid, double strike);

// ---------------------------------------------------------------------------
// COS method.
// ---------------------------------------------------------------------------

struct CosConfig {
    int n_terms = 256;        // >= 16
    double trunc_width = 10.0;  // L in [a,b] = c1 -/+ L sqrt(c2 + sqrt(c4))
    double fd_step = 1e-4;    // step for the cumulant finite differences
};

// Fourier-cosine price on the cumulant-based truncation interval.  Puts are
// priced directly; calls via put-call parity for stability at large strikes.
// Throws RangeError when ln strike falls outside [a, b].
double cos_price(const RiskNeutralSetup& setup, double strike, OptionKind kind,
                 const CosConfig& config = {});

// Same maturity, many strikes: the CF evaluations are shared across strikes.
std::vector<double> cos_price_many(const RiskNeutralSetup& setup,
                                   const std::vector<double>& strikes,
                                   OptionKind kind,
                                   const CosConfig& config = {});

// ---------------------------------------------------------------------------
// P1/P2 probability decomposition.
// ---------------------------------------------------------------------------

struct P1P2Result {
    double price = 0.0;
    double p1 = 0.0;  // delta-measure ITM probability
    double p2 = 0.0;  // risk-neutral ITM probability
    double truncation = 0.0;  // upper limit the quadrature settled on
};

// C = e^{-rT} [ phi(-i) P1 - K P2 ] with
//   P2 = 1/2 + (1/pi) Int_0^inf Re[e^{-iu ln K} phi(u) / (iu)] du,
//   P1 = 1/2 + (1/pi) Int_0^inf Re[e^{-iu ln K} phi(u - i) / (iu phi(-i))] du.
// Adaptive Gauss-Kronrod on [0, U]; U doubles until the tail is dead and the
// value is stable (QuadratureFailure if that never happens).
P1P2Result p1_p2_price(const RiskNeutralSetup& setup, double strike);

} // namespace nobond
