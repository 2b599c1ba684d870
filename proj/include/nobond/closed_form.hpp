#pragma once

#include <vector>

#include "nobond/errors.hpp"

namespace nobond {

// Inputs of the two-asset closed form for a European call on the portfolio
// eta S + (1 - eta) Z with strike K:
//   C = eta S Phi(d) + (1 - eta) Z Phi(d - (w - w~)) - K e^{-m} Phi(d - w),
// where d = -y* and y* solves F1(y) + F2(y) = K with
//   F1 = eta S exp(m + w^2/2 + w y),
//   F2 = (1 - eta) Z exp(m + w w~ - w~^2/2 + w~ y).
// m is the integrated rate over the remaining life, w and w~ the two
// volatility-time scales (both >= 0, no ordering assumed).
struct LrClosedFormInputs {
    double s = 100.0;
    double z = 100.0;
    double eta = 0.5;     // portfolio weight in [0, 1]
    double strike = 100.0;
    double m = 0.0;
    double w = 0.2;
    double w_tilde = 0.2;
};

void validate(const LrClosedFormInputs& in);

// Unique root of the strictly increasing y -> F1 + F2 (bisection bracket +
// Newton with the analytic derivative w F1 + w~ F2).  Residual
// |F1 + F2 - K| < 1e-10 guaranteed at the returned point.  Throws NoRoot when
// the map is constant (w = w~ = 0 or vanishing coefficients).
double solve_y_star(const LrClosedFormInputs& in);

struct LrPrice {
    double price = 0.0;
    double y_star = 0.0;
    double d = 0.0;  // -y_star
};

// The closed form above.  eta == 1 with m = r tau, w = sigma sqrt(tau)
// collapses to Black-Scholes on S alone.
LrPrice lr_closed_form_price(const LrClosedFormInputs& in);

// Implicit-function-theorem partials of y*.  dm_dt, dw_dt, dwt_dt are the
// time derivatives of m(t), w(t), w~(t) along the trajectory of interest
// (constant-coefficient case: m' = -r, w' = -sigma^2 (T-t) / (2 w)... i.e.
// w' = -w / (2 (T-t))).
struct YStarPartials {
    double dy_ds = 0.0;
    double dy_dz = 0.0;
    double dy_dt = 0.0;
};

YStarPartials y_star_partials(const LrClosedFormInputs& in, double dm_dt,
                              double dw_dt, double dwt_dt);

// ---------------------------------------------------------------------------
// PDE residual check (constant r, sigma, w == w~ == sigma sqrt(T - t)).
// ---------------------------------------------------------------------------

struct LrPdePoint {
    double s = 100.0;
    double z = 100.0;
    double eta = 0.5;
    double strike = 100.0;
    double t = 0.0;       // valuation time
    double expiry = 1.0;  // T > t
};

// Residual of  C_t + r (S C_S + Z C_Z) + sigma^2/2 (S^2 C_SS + 2 S Z C_SZ
// + Z^2 C_ZZ) - r C  evaluated with central differences: relative step h_rel
// in S and Z, absolute step h_t in t.  m, w, w~ are recomputed at every
// bumped point from (r, sigma, T - t).
double pde_residual(const LrPdePoint& p, double r, double sigma,
                    double h_rel = 1e-4, double h_t = 1e-5);

// Residuals at h0, h0/2, ..., h0/2^n (h_t scaled along with h_rel).
std::vector<double> pde_residual_study(const LrPdePoint& p, double r,
                                       double sigma, double h0, int n_halvings);

// As pde_residual, but verifies second-order decay by comparing h against
// h/2: ratio below `min_ratio` throws StepTooSmall (round-off floor), above
// `max_ratio` throws StepTooLarge.
double pde_residual_checked(const LrPdePoint& p, double r, double sigma,
                            double h_rel = 1e-4, double min_ratio = 2.0,
                            double max_ratio = 8.0);

} // namespace nobond
