#include "nobond/levy.hpp"

#include <cmath>
#include <sstream>

namespace nobond {

namespace {

constexpr double kYPoleGuard = 1e-9;  // exclusion radius around Y in {0, 1}

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw InvalidModel(std::string(what) + " is not finite");
    }
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

// VG quadratic 1 + theta nu b - sigma^2 nu b^2 / 2 along the imaginary axis;
// the log stays on the principal branch while this is positive.
double vg_strip_margin(const VgParams& p, double b) {
    return 1.0 + p.theta * p.nu * b - 0.5 * p.sigma * p.sigma * p.nu * b * b;
}

} // namespace

void validate(const LevyModel& model) {
    std::visit(
        [](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, BsParams>) {
                require_finite(p.sigma, "BS sigma");
                if (p.sigma < 0.0) {
                    throw InvalidModel("BS sigma must be >= 0");
                }
            } else if constexpr (std::is_same_v<P, NigParams>) {
                require_finite(p.alpha, "NIG alpha");
                require_finite(p.beta, "NIG beta");
                require_finite(p.delta, "NIG delta");
                require_finite(p.mu, "NIG mu");
                if (p.alpha <= 0.0) {
                    throw InvalidModel("NIG alpha must be > 0");
                }
                if (std::abs(p.beta) >= p.alpha) {
                    throw InvalidModel("NIG requires |beta| < alpha, got beta=" +
                                       fmt(p.beta) + " alpha=" + fmt(p.alpha));
                }
                if (p.delta <= 0.0) {
                    throw InvalidModel("NIG delta must be > 0");
                }
            } else if constexpr (std::is_same_v<P, CgmyParams>) {
                require_finite(p.c, "CGMY C");
                require_finite(p.g, "CGMY G");
                require_finite(p.m, "CGMY M");
                require_finite(p.y, "CGMY Y");
                if (p.c <= 0.0) {
                    throw InvalidModel("CGMY C must be > 0");
                }
                if (p.g < 0.0 || p.m < 0.0) {
                    throw InvalidModel("CGMY G and M must be >= 0");
                }
                if (p.y >= 2.0) {
                    throw InvalidModel("CGMY Y must be < 2");
                }
                if (std::abs(p.y) < kYPoleGuard || std::abs(p.y - 1.0) < kYPoleGuard) {
                    throw InvalidModel(
                        "CGMY Y=" + fmt(p.y) +
                        " sits on a Gamma(-Y) pole (Y in {0,1} excluded)");
                }
            } else {
                require_finite(p.sigma, "VG sigma");
                require_finite(p.nu, "VG nu");
                require_finite(p.theta, "VG theta");
                if (p.sigma <= 0.0) {
                    throw InvalidModel("VG sigma must be > 0");
                }
                if (p.nu <= 0.0) {
                    throw InvalidModel("VG nu must be > 0");
                }
            }
        },
        model);
}

std::string model_name(const LevyModel& model) {
    switch (model.index()) {
        case 0: return "BS";
        case 1: return "NIG";
        case 2: return "CGMY";
        default: return "VG";
    }
}

bool in_strip(const LevyModel& model, double im_u) {
    if (im_u == 0.0) {
        return true;  // the CF proper always exists on the real axis
    }
    return std::visit(
        [im_u](const auto& p) -> bool {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, BsParams>) {
                return true;  // entire
            } else if constexpr (std::is_same_v<P, NigParams>) {
                return std::abs(p.beta - im_u) < p.alpha;
            } else if constexpr (std::is_same_v<P, CgmyParams>) {
                return -p.m < im_u && im_u < p.g;
            } else {
                return vg_strip_margin(p, im_u) > 0.0;
            }
        },
        model);
}

cdouble char_exponent(const LevyModel& model, cdouble u) {
    validate(model);
    if (!in_strip(model, u.imag())) {
        throw DomainError("char_exponent: Im(u)=" + fmt(u.imag()) +
                          " outside analyticity strip of " + model_name(model));
    }
    return std::visit(
        [u](const auto& p) -> cdouble {
            using P = std::decay_t<decltype(p)>;
            const cdouble i(0.0, 1.0);
            if constexpr (std::is_same_v<P, BsParams>) {
                return -0.5 * p.sigma * p.sigma * u * u;
            } else if constexpr (std::is_same_v<P, NigParams>) {
                const double gamma = std::sqrt(p.alpha * p.alpha - p.beta * p.beta);
                const cdouble shifted = p.beta + i * u;
                return i * p.mu * u +
                       p.delta * (gamma - std::sqrt(p.alpha * p.alpha - shifted * shifted));
            } else if constexpr (std::is_same_v<P, CgmyParams>) {
                const double gy = std::tgamma(-p.y);
                const cdouble mp = std::pow(cdouble(p.m, 0.0) - i * u, p.y);
                const cdouble gp = std::pow(cdouble(p.g, 0.0) + i * u, p.y);
                return p.c * gy *
                       (mp - std::pow(p.m, p.y) + gp - std::pow(p.g, p.y));
            } else {
                const cdouble q = 1.0 - i * p.theta * p.nu * u +
                                  0.5 * p.sigma * p.sigma * p.nu * u * u;
                return -std::log(q) / p.nu;
            }
        },
        model);
}

double jump_compensator(const LevyModel& model, double kappa) {
    validate(model);
    if (!std::isfinite(kappa)) {
        throw NonFiniteInput("kappa is not finite");
    }
    if (kappa == 0.0) {
        return 0.0;  // psi(0) == 0 exactly for every model
    }
    if (!in_strip(model, -kappa)) {
        throw MomentExplosion("E[exp(kappa L)] does not exist for " +
                              model_name(model) + " at kappa=" + fmt(kappa));
    }
    const cdouble value = char_exponent(model, cdouble(0.0, -kappa));
    return value.real();
}

void validate(const RiskNeutralSetup& setup) {
    validate(setup.model);
    validate(setup.leg);
    if (!std::isfinite(setup.r_bar)) {
        throw NonFiniteInput("r_bar is not finite");
    }
    if (!std::isfinite(setup.t) || setup.t <= 0.0) {
        throw NonFiniteInput("maturity must be finite and > 0");
    }
}

LogPriceCf::LogPriceCf(const RiskNeutralSetup& setup) : setup_(setup) {
    validate(setup_);
    const MarketLeg& leg = setup_.leg;
    const double lambda = jump_compensator(setup_.model, leg.kappa);
    const double drift =
        setup_.r_bar - leg.div_yield - 0.5 * leg.sigma * leg.sigma - lambda;
    log_spot_plus_drift_t_ = std::log(leg.spot) + drift * setup_.t;
    sigma2_t_ = leg.sigma * leg.sigma * setup_.t;
}

cdouble LogPriceCf::exponent(cdouble u) const {
    const cdouble i(0.0, 1.0);
    return i * u * log_spot_plus_drift_t_ - 0.5 * sigma2_t_ * u * u +
           setup_.t * char_exponent(setup_.model, setup_.leg.kappa * u);
}

double LogPriceCf::forward() const {
    return setup_.leg.spot *
           std::exp((setup_.r_bar - setup_.leg.div_yield) * setup_.t);
}

double LogPriceCf::discount() const {
    return std::exp(-setup_.r_bar * setup_.t);
}

cdouble rn_log_price_cf(const RiskNeutralSetup& setup, cdouble u) {
    return LogPriceCf(setup)(u);
}

cdouble joint_cf(const LevyModel& model, const MarketLeg& leg_s,
                 const MarketLeg& leg_z, double rho, double r_bar, double t,
                 cdouble u1, cdouble u2) {
    validate(model);
    validate(leg_s);
    validate(leg_z);
    if (!std::isfinite(rho) || rho < -1.0 || rho > 1.0) {
        throw NonFiniteInput("rho must lie in [-1, 1]");
    }
    if (!std::isfinite(t) || t <= 0.0) {
        throw NonFiniteInput("maturity must be finite and > 0");
    }
    const double lambda_s = jump_compensator(model, leg_s.kappa);
    const double lambda_z = jump_compensator(model, leg_z.kappa);
    const double drift_s =
        r_bar - leg_s.div_yield - 0.5 * leg_s.sigma * leg_s.sigma - lambda_s;
    const double drift_z =
        r_bar - leg_z.div_yield - 0.5 * leg_z.sigma * leg_z.sigma - lambda_z;
    const cdouble i(0.0, 1.0);
    // Combined jump frequency: both legs ride the same driver.
    const cdouble w = leg_s.kappa * u1 + leg_z.kappa * u2;
    const cdouble quad = u1 * u1 * leg_s.sigma * leg_s.sigma +
                         2.0 * rho * u1 * u2 * leg_s.sigma * leg_z.sigma +
                         u2 * u2 * leg_z.sigma * leg_z.sigma;
    const cdouble exponent =
        i * u1 * (std::log(leg_s.spot) + drift_s * t) +
        i * u2 * (std::log(leg_z.spot) + drift_z * t) - 0.5 * quad * t +
        t * char_exponent(model, w);
    return std::exp(exponent);
}

CgmyParams cgmy_from_vg(const VgParams& vg, double y) {
    validate(LevyModel(vg));
    const double s2 = vg.sigma * vg.sigma;
    const double root =
        std::sqrt(vg.theta * vg.theta / (s2 * s2) + 2.0 / (vg.nu * s2));
    CgmyParams out;
    out.c = 1.0 / vg.nu;
    out.g = root + vg.theta / s2;
    out.m = root - vg.theta / s2;
    out.y = y;
    return out;
}

double vg_limit_check(const CgmyParams& cgmy, const VgParams& vg, cdouble u) {
    return std::abs(char_exponent(LevyModel(cgmy), u) -
                    char_exponent(LevyModel(vg), u));
}

} // namespace nobond
