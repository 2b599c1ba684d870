#pragma once

#include <complex>
#include <string>
#include <variant>

#include "nobond/market.hpp"

namespace nobond {

using cdouble = std::complex<double>;

// ---------------------------------------------------------------------------
// Model parameter sets.  All four share the same interface: a characteristic
// exponent psi with E[exp(i u L_1)] = exp(psi(u)).
// ---------------------------------------------------------------------------

// Brownian driver: psi(u) = -sigma^2 u^2 / 2.  Carrying sigma here (rather
// than on the leg) makes the BS column of a calibration a one-parameter fit.
struct BsParams {
    double sigma = 0.2;
};

// Normal inverse Gaussian: psi(u) = i mu u
//   + delta * (sqrt(alpha^2 - beta^2) - sqrt(alpha^2 - (beta + i u)^2)).
struct NigParams {
    double alpha = 1.0;  // tail heaviness, > 0
    double beta = 0.0;   // skew, |beta| < alpha
    double delta = 1.0;  // scale, > 0
    double mu = 0.0;     // location
};

// CGMY: psi(u) = C Gamma(-Y) [ (M - iu)^Y - M^Y + (G + iu)^Y - G^Y ].
// Y in (-inf, 2) excluding {0, 1} where Gamma(-Y) has poles.
struct CgmyParams {
    double c = 1.0;   // level, > 0
    double g = 5.0;   // left-tail tempering, >= 0
    double m = 5.0;   // right-tail tempering, >= 0
    double y = 0.5;   // fine structure, < 2, not 0 or 1
};

// Variance gamma: psi(u) = -ln(1 - i theta nu u + sigma^2 nu u^2 / 2) / nu.
struct VgParams {
    double sigma = 0.2;  // > 0
    double nu = 0.2;     // subordinator variance rate, > 0
    double theta = 0.0;  // drift of the subordinated Brownian motion
};

using LevyModel = std::variant<BsParams, NigParams, CgmyParams, VgParams>;

// Throws InvalidModel if the parameters leave their admissible domain.
void validate(const LevyModel& model);

// "BS", "NIG", "CGMY", "VG".
std::string model_name(const LevyModel& model);

// True when psi may be evaluated at complex u with the given imaginary part:
//   NIG  : |beta - Im(u)| < alpha
//   CGMY : -M < Im(u) < G
//   VG   : 1 + theta nu Im(u) - sigma^2 nu Im(u)^2 / 2 > 0
//   BS   : always
// The real axis (Im(u) == 0) is always admitted.
bool in_strip(const LevyModel& model, double im_u);

// Characteristic exponent at complex u, principal branches throughout.
// Throws DomainError outside the strip, InvalidModel on bad parameters.
cdouble char_exponent(const LevyModel& model, cdouble u);

// Lambda(kappa) = psi(-i kappa) = ln E[exp(kappa L_1)].  Real by construction;
// throws MomentExplosion when that exponential moment does not exist
// (NIG |beta + kappa| >= alpha; CGMY kappa >= M or kappa <= -G; VG quadratic
// root crossed).  Lambda(0) == 0 exactly.
double jump_compensator(const LevyModel& model, double kappa);

// ---------------------------------------------------------------------------
// Risk-neutral one-asset and two-asset characteristic functions.
// ---------------------------------------------------------------------------

// Everything needed to price European claims on one leg.
struct RiskNeutralSetup {
    LevyModel model;
    MarketLeg leg;
    double r_bar = 0.0;  // shadow riskless rate used for drift and discounting
    double t = 1.0;      // maturity in years, > 0
};

void validate(const RiskNeutralSetup& setup);

// phi(u) = E[exp(i u ln S_T)] under the martingale-corrected dynamics
//   ln S_T = ln S_0 + (r - delta - sigma^2/2 - Lambda) T + sigma W_T + kappa L_T,
// i.e. phi(u) = exp{ i u [ln S_0 + (r - delta - sigma^2/2 - Lambda) T]
//                    - sigma^2 u^2 T / 2 + T psi(kappa u) }.
// Satisfies phi(-i) = S_0 exp((r - delta) T) identically.
cdouble rn_log_price_cf(const RiskNeutralSetup& setup, cdouble u);

// Prebound evaluator for the same CF: validates once and caches the drift
// and compensator, which matters inside quadrature/calibration loops.
class LogPriceCf {
  public:
    explicit LogPriceCf(const RiskNeutralSetup& setup);

    // log phi(u) assembled analytically (no complex-log branch issues).
    cdouble exponent(cdouble u) const;
    cdouble operator()(cdouble u) const { return std::exp(exponent(u)); }

    // phi(-i) = S_0 exp((r - delta) T), computed in closed form.
    double forward() const;
    double discount() const;  // exp(-r_bar T)
    const RiskNeutralSetup& setup() const { return setup_; }

  private:
    RiskNeutralSetup setup_;
    double log_spot_plus_drift_t_ = 0.0;
    double sigma2_t_ = 0.0;
};

// Joint CF of (ln S_T, ln Z_T).  Both legs load the same jump driver, so the
// jump term enters once at the combined frequency u1 kappa_S + u2 kappa_Z;
// diffusions correlate with rho.  Setting u2 = 0 recovers the marginal CF of
// leg S exactly (and symmetrically for u1 = 0).
cdouble joint_cf(const LevyModel& model, const MarketLeg& leg_s,
                 const MarketLeg& leg_z, double rho, double r_bar, double t,
                 cdouble u1, cdouble u2);

// ---------------------------------------------------------------------------
// VG as the Y -> 0 limit of CGMY.
// ---------------------------------------------------------------------------

// Standard parameter map: C = 1/nu, G/M = sqrt(theta^2/sigma^4 + 2/(nu sigma^2))
// +/- theta/sigma^2, with the given small Y substituted for the limit value 0.
CgmyParams cgmy_from_vg(const VgParams& vg, double y);

// |psi_CGMY(u) - psi_VG(u)| for a CGMY built from vg by cgmy_from_vg.
// Decays linearly in Y as Y -> 0; identically 0 at u = 0.
double vg_limit_check(const CgmyParams& cgmy, const VgParams& vg, cdouble u);

} // namespace nobond
