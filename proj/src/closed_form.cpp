#include "nobond/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nobond/fourier.hpp"  // norm_cdf

namespace nobond {

namespace {

constexpr double kResidualTol = 1e-12;  // on |F1 + F2 - K|, relative to K
constexpr double kMaxExponent = 700.0;  // exp overflow guard

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

// F1, F2 and the implicit map F = F1 + F2 at a given y.
struct ImplicitMap {
    const LrClosedFormInputs& in;

    double f1(double y) const {
        const double e = in.m + 0.5 * in.w * in.w + in.w * y;
        if (e > kMaxExponent) return std::numeric_limits<double>::infinity();
        return in.eta * in.s * std::exp(e);
    }
    double f2(double y) const {
        const double e = in.m + in.w * in.w_tilde -
                         0.5 * in.w_tilde * in.w_tilde + in.w_tilde * y;
        if (e > kMaxExponent) return std::numeric_limits<double>::infinity();
        return (1.0 - in.eta) * in.z * std::exp(e);
    }
    double value(double y) const { return f1(y) + f2(y); }
    double derivative(double y) const {
        return in.w * f1(y) + in.w_tilde * f2(y);
    }
};

} // namespace

void validate(const LrClosedFormInputs& in) {
    for (double v : {in.s, in.z, in.eta, in.strike, in.m, in.w, in.w_tilde}) {
        if (!std::isfinite(v)) {
            throw NonFiniteInput("closed-form input is not finite");
        }
    }
    if (!(in.s > 0.0) || !(in.z > 0.0)) {
        throw NonFiniteInput("spots must be > 0");
    }
    if (in.eta < 0.0 || in.eta > 1.0) {
        throw NonFiniteInput("eta must lie in [0, 1]");
    }
    if (!(in.strike > 0.0)) {
        throw NonFiniteInput("strike must be > 0");
    }
    if (in.w < 0.0 || in.w_tilde < 0.0) {
        throw NonFiniteInput("w and w_tilde must be >= 0");
    }
}

double solve_y_star(const LrClosedFormInputs& in) {
    validate(in);
    const ImplicitMap map{in};

    const bool live1 = in.eta > 0.0 && in.w > 0.0;
    const bool live2 = in.eta < 1.0 && in.w_tilde > 0.0;
    if (!live1 && !live2) {
        throw NoRoot("F1 + F2 is constant in y (no strictly increasing term)");
    }
    // Deterministic floor: terms with zero vol-scale never decay as y -> -inf.
    double floor = 0.0;
    if (in.eta > 0.0 && in.w == 0.0) floor += map.f1(0.0);
    if (in.eta < 1.0 && in.w_tilde == 0.0) floor += map.f2(0.0);
    if (floor >= in.strike) {
        throw NoRoot("strike " + fmt(in.strike) +
                     " is at or below the deterministic floor " + fmt(floor) +
                     " of F1 + F2");
    }

    // Bracket the root, expanding geometrically around 0.
    double lo = 0.0, hi = 0.0;
    {
        const double f0 = map.value(0.0);
        double step = 1.0;
        if (f0 < in.strike) {
            lo = 0.0;
            hi = step;
            while (map.value(hi) < in.strike) {
                lo = hi;
                step *= 2.0;
                hi += step;
                if (hi > 1e8) {
                    throw NoRoot("failed to bracket y* above");
                }
            }
        } else {
            hi = 0.0;
            lo = -step;
            while (map.value(lo) >= in.strike) {
                hi = lo;
                step *= 2.0;
                lo -= step;
                if (lo < -1e8) {
                    throw NoRoot("failed to bracket y* below");
                }
            }
        }
    }

    // Newton with the analytic derivative, safeguarded by the bracket.
    double y = 0.5 * (lo + hi);
    const double target = in.strike;
    const double tol = kResidualTol * std::max(1.0, target);
    for (int iter = 0; iter < 200; ++iter) {
        const double f = map.value(y);
        const double resid = f - target;
        if (std::abs(resid) <= tol) {
            return y;
        }
        if (resid > 0.0) {
            hi = y;
        } else {
            lo = y;
        }
        const double fp = map.derivative(y);
        double next = y - resid / fp;
        if (!std::isfinite(next) || next <= lo || next >= hi) {
            next = 0.5 * (lo + hi);  // bisection fallback
        }
        if (next == y) {
            break;  // step underflow at double resolution
        }
        y = next;
    }
    if (std::abs(map.value(y) - target) <= 1e-10 * std::max(1.0, target)) {
        return y;
    }
    throw NoRoot("y* iteration stalled at residual " +
                 fmt(map.value(y) - target));
}

LrPrice lr_closed_form_price(const LrClosedFormInputs& in) {
    const double y_star = solve_y_star(in);
    const double d = -y_star;
    const double delta_w = in.w - in.w_tilde;
    LrPrice out;
    out.y_star = y_star;
    out.d = d;
    out.price = in.eta * in.s * norm_cdf(d) +
                (1.0 - in.eta) * in.z * norm_cdf(d - delta_w) -
                in.strike * std::exp(-in.m) * norm_cdf(d - in.w);
    return out;
}

YStarPartials y_star_partials(const LrClosedFormInputs& in, double dm_dt,
                              double dw_dt, double dwt_dt) {
    const double y = solve_y_star(in);
    const ImplicitMap map{in};
    const double f1 = map.f1(y);
    const double f2 = map.f2(y);
    const double fy = in.w * f1 + in.w_tilde * f2;
    if (fy == 0.0) {
        throw NoRoot("dF/dy vanishes at y*; partials undefined");
    }
    YStarPartials p;
    p.dy_ds = -(f1 / in.s) / fy;
    p.dy_dz = -(f2 / in.z) / fy;
    // dF/dt holding y: F1 (m' + w w' + w' y) + F2 (m' + w' w~ + w w~' - w~ w~' + w~' y)
    const double df_dt =
        f1 * (dm_dt + in.w * dw_dt + dw_dt * y) +
        f2 * (dm_dt + dw_dt * in.w_tilde + in.w * dwt_dt -
              in.w_tilde * dwt_dt + dwt_dt * y);
    p.dy_dt = -df_dt / fy;
    return p;
}

// ---------------------------------------------------------------------------
// PDE residual.
// ---------------------------------------------------------------------------

namespace {

double price_at(const LrPdePoint& p, double r, double sigma, double t,
                double s, double z) {
    const double tau = p.expiry - t;
    if (!(tau > 0.0)) {
        throw RangeError("PDE check needs t < expiry (tau = " + fmt(tau) + ")");
    }
    LrClosedFormInputs in;
    in.s = s;
    in.z = z;
    in.eta = p.eta;
    in.strike = p.strike;
    in.m = r * tau;
    in.w = sigma * std::sqrt(tau);
    in.w_tilde = in.w;
    return lr_closed_form_price(in).price;
}

} // namespace

double pde_residual(const LrPdePoint& p, double r, double sigma, double h_rel,
                    double h_t) {
    if (!(h_rel > 0.0) || !(h_t > 0.0)) {
        throw ConfigError("finite-difference steps must be > 0");
    }
    if (!(p.expiry > p.t)) {
        throw RangeError("PDE check needs t < expiry");
    }
    const double s = p.s, z = p.z, t = p.t;
    const double hs = h_rel * s;
    const double hz = h_rel * z;

    const double c0 = price_at(p, r, sigma, t, s, z);
    const double c_su = price_at(p, r, sigma, t, s + hs, z);
    const double c_sd = price_at(p, r, sigma, t, s - hs, z);
    const double c_zu = price_at(p, r, sigma, t, s, z + hz);
    const double c_zd = price_at(p, r, sigma, t, s, z - hz);
    const double c_tu = price_at(p, r, sigma, t + h_t, s, z);
    const double c_td = price_at(p, r, sigma, t - h_t, s, z);
    const double c_uu = price_at(p, r, sigma, t, s + hs, z + hz);
    const double c_ud = price_at(p, r, sigma, t, s + hs, z - hz);
    const double c_du = price_at(p, r, sigma, t, s - hs, z + hz);
    const double c_dd = price_at(p, r, sigma, t, s - hs, z - hz);

    const double c_t = (c_tu - c_td) / (2.0 * h_t);
    const double c_s = (c_su - c_sd) / (2.0 * hs);
    const double c_z = (c_zu - c_zd) / (2.0 * hz);
    const double c_ss = (c_su - 2.0 * c0 + c_sd) / (hs * hs);
    const double c_zz = (c_zu - 2.0 * c0 + c_zd) / (hz * hz);
    const double c_sz = (c_uu - c_ud - c_du + c_dd) / (4.0 * hs * hz);

    const double diffusion = 0.5 * sigma * sigma *
                             (s * s * c_ss + 2.0 * s * z * c_sz + z * z * c_zz);
    return c_t + r * (s * c_s + z * c_z) + diffusion - r * c0;
}

std::vector<double> pde_residual_study(const LrPdePoint& p, double r,
                                       double sigma, double h0,
                                       int n_halvings) {
    if (n_halvings < 0) {
        throw ConfigError("n_halvings must be >= 0");
    }
    std::vector<double> out;
    double h = h0;
    for (int k = 0; k <= n_halvings; ++k) {
        out.push_back(std::abs(pde_residual(p, r, sigma, h, 0.1 * h)));
        h *= 0.5;
    }
    return out;
}

double pde_residual_checked(const LrPdePoint& p, double r, double sigma,
                            double h_rel, double min_ratio, double max_ratio) {
    const double r1 = std::abs(pde_residual(p, r, sigma, h_rel, 0.1 * h_rel));
    const double r2 =
        std::abs(pde_residual(p, r, sigma, 0.5 * h_rel, 0.05 * h_rel));
    if (r2 == 0.0) {
        return r1;  // already at exact cancellation
    }
    const double ratio = r1 / r2;
    if (ratio < min_ratio) {
        throw StepTooSmall("halving h only shrank the residual by " +
                           fmt(ratio) + "x; h=" + fmt(h_rel) +
                           " is in the round-off regime");
    }
    if (ratio > max_ratio) {
        throw StepTooLarge("halving h shrank the residual by " + fmt(ratio) +
                           "x; h=" + fmt(h_rel) +
                           " is outside the quadratic regime");
    }
    return r1;
}

} // namespace nobond
