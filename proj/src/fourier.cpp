#include "nobond/fourier.hpp"

#include <fftw3.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <vector>

namespace nobond {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// ---------------------------------------------------------------------------
// Cumulants of ln S_T from central differences of the CF exponent.
// ---------------------------------------------------------------------------

struct Cumulants {
    double c1 = 0.0;
    double c2 = 0.0;
    double c4 = 0.0;
};

// exponent(u) has conjugate symmetry on the real axis, so the odd/even parts
// collapse to Im/Re of one-sided evaluations:
//   c1 = [8 Im f(h) - Im f(2h)] / (6h)            (4th order)
//   c2 = [Re f(2h) - 16 Re f(h)] / (6h^2)         (4th order)
//   c4 = [2 Re f(2h) - 8 Re f(h)] / h^4           (2nd order)
// The c4 stencil divides by h^4, so at the c1/c2 step the round-off floor
// (~1e-16 / 1e-16) would drown the signal; it gets a wider step instead --
// c4 only steers the truncation width, 1% accuracy is plenty.
Cumulants exponent_cumulants(const LogPriceCf& cf, double h) {
    Cumulants c;
    {
        const cdouble f1 = cf.exponent(cdouble(h, 0.0));
        const cdouble f2 = cf.exponent(cdouble(2.0 * h, 0.0));
        c.c1 = (8.0 * f1.imag() - f2.imag()) / (6.0 * h);
        c.c2 = (f2.real() - 16.0 * f1.real()) / (6.0 * h * h);
    }
    {
        const double h4 = std::max(h, 0.05);
        const cdouble f1 = cf.exponent(cdouble(h4, 0.0));
        const cdouble f2 = cf.exponent(cdouble(2.0 * h4, 0.0));
        c.c4 = (2.0 * f2.real() - 8.0 * f1.real()) / (h4 * h4 * h4 * h4);
    }
    c.c2 = std::max(c.c2, 0.0);
    c.c4 = std::max(c.c4, 0.0);
    return c;
}

void require_strike(double strike) {
    if (!std::isfinite(strike) || strike <= 0.0) {
        throw RangeError("strike must be finite and > 0, got " + fmt(strike));
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Black-Scholes analytics.
// ---------------------------------------------------------------------------

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double bs_call_analytic(double spot, double strike, double r, double div_yield,
                        double sigma, double t) {
    if (!(spot > 0.0) || !std::isfinite(spot)) {
        throw NonFiniteInput("spot must be > 0");
    }
    if (!std::isfinite(strike) || strike < 0.0) {
        throw NonFiniteInput("strike must be >= 0");
    }
    if (!std::isfinite(t) || t <= 0.0) {
        throw NonFiniteInput("maturity must be > 0");
    }
    if (!std::isfinite(sigma) || sigma < 0.0) {
        throw NonFiniteInput("sigma must be >= 0");
    }
    const double df_spot = spot * std::exp(-div_yield * t);
    const double df_strike = strike * std::exp(-r * t);
    const double srt = sigma * std::sqrt(t);
    if (strike == 0.0) {
        return df_spot;
    }
    if (srt == 0.0) {
        return std::max(df_spot - df_strike, 0.0);
    }
    const double d1 =
        (std::log(spot / strike) + (r - div_yield + 0.5 * sigma * sigma) * t) / srt;
    const double d2 = d1 - srt;
    return df_spot * norm_cdf(d1) - df_strike * norm_cdf(d2);
}

double bs_put_analytic(double spot, double strike, double r, double div_yield,
                       double sigma, double t) {
    // put-call parity: P = C - S e^{-qT} + K e^{-rT}
    return bs_call_analytic(spot, strike, r, div_yield, sigma, t) -
           spot * std::exp(-div_yield * t) + strike * std::exp(-r * t);
}

// ---------------------------------------------------------------------------
// Carr-Madan FFT.
// ---------------------------------------------------------------------------

PriceGrid carr_madan_prices(const RiskNeutralSetup& setup, double k_min,
                            double k_max, const FftConfig& config) {
    if (!is_power_of_two(config.n_points) || config.n_points < 64) {
        throw ConfigError("FFT n_points must be a power of two >= 64, got " +
                          std::to_string(config.n_points));
    }
    if (!(config.alpha > 0.0) || !std::isfinite(config.alpha)) {
        throw ConfigError("FFT damping alpha must be > 0");
    }
    if (!(config.eta > 0.0) || !std::isfinite(config.eta)) {
        throw ConfigError("FFT eta must be > 0");
    }
    if (!std::isfinite(k_min) || !std::isfinite(k_max) || k_min >= k_max) {
        throw RangeError("log-strike window is empty: [" + fmt(k_min) + ", " +
                         fmt(k_max) + "]");
    }

    const LogPriceCf cf(setup);
    // The damped transform needs phi at v - (alpha+1)i, i.e. the jump driver
    // at Im = -kappa (alpha + 1): the (alpha+1)-th moment of S_T.
    const double shift = -setup.leg.kappa * (config.alpha + 1.0);
    if (!in_strip(setup.model, shift)) {
        throw MomentExplosion("E[S^(1+alpha)] does not exist for " +
                              model_name(setup.model) +
                              " at alpha=" + fmt(config.alpha) +
                              ", kappa=" + fmt(setup.leg.kappa));
    }

    const int n = config.n_points;
    const double eta = config.eta;
    const double lambda = 2.0 * kPi / (n * eta);  // log-strike spacing
    const double log_spot = std::log(setup.leg.spot);
    const double k0 = log_spot - 0.5 * n * lambda;  // grid centred on ln S0
    const double alpha = config.alpha;
    const double discount = cf.discount();

    std::vector<std::complex<double>> in(static_cast<std::size_t>(n));
    const cdouble i(0.0, 1.0);
    for (int j = 0; j < n; ++j) {
        const double v = eta * j;
        const cdouble numer = discount * cf(cdouble(v, -(alpha + 1.0)));
        const cdouble denom =
            alpha * alpha + alpha - v * v + i * ((2.0 * alpha + 1.0) * v);
        // Simpson weights 1/3, 4/3, 2/3, ..., open-ended tail.
        const double w =
            j == 0 ? 1.0 / 3.0 : (j % 2 == 1 ? 4.0 / 3.0 : 2.0 / 3.0);
        in[static_cast<std::size_t>(j)] =
            (numer / denom) * std::exp(-i * (v * k0)) * (eta * w);
    }

    std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
    fftw_plan plan = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(in.data()),
        reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    if (plan == nullptr) {
        throw InternalError("fftw plan creation failed");
    }
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    const double log_k_min = k_min;
    const double log_k_max = k_max;
    if (log_k_min < k0 || log_k_max > k0 + (n - 1) * lambda) {
        throw RangeError("requested strike window exceeds the FFT grid; widen "
                         "eta/n_points or narrow the window");
    }

    PriceGrid grid;
    grid.spot = setup.leg.spot;
    grid.discount = discount;
    const double clamp_floor = -1e-8 * setup.leg.spot;
    for (int u = 0; u < n; ++u) {
        const double k = k0 + lambda * u;
        if (k < log_k_min - lambda || k > log_k_max + lambda) {
            continue;  // keep one guard node each side for interpolation
        }
        double price =
            std::exp(-alpha * k) / kPi * out[static_cast<std::size_t>(u)].real();
        if (price < 0.0) {
            if (price < clamp_floor) {
                throw InternalError("FFT produced price " + fmt(price) +
                                    " at strike " + fmt(std::exp(k)) +
                                    "; grid inconsistent");
            }
            price = 0.0;
        }
        grid.log_strikes.push_back(k);
        grid.strikes.push_back(std::exp(k));
        grid.prices.push_back(price);
    }
    if (grid.strikes.size() < 2) {
        throw RangeError("strike window too narrow for the FFT grid spacing");
    }
    return grid;
}

double grid_interpolate(const PriceGrid& grid, double strike) {
    require_strike(strike);
    if (grid.log_strikes.size() < 2) {
        throw RangeError("price grid has fewer than two nodes");
    }
    const double k = std::log(strike);
    const auto it =
        std::lower_bound(grid.log_strikes.begin(), grid.log_strikes.end(), k);
    if (it == grid.log_strikes.begin() || it == grid.log_strikes.end()) {
        throw RangeError("strike " + fmt(strike) + " outside the price grid");
    }
    const std::size_t hi = static_cast<std::size_t>(it - grid.log_strikes.begin());
    const std::size_t lo = hi - 1;
    const double t =
        (k - grid.log_strikes[lo]) / (grid.log_strikes[hi] - grid.log_strikes[lo]);
    return (1.0 - t) * grid.prices[lo] + t * grid.prices[hi];
}

// ---------------------------------------------------------------------------
// COS method.
// ---------------------------------------------------------------------------

namespace {

// Integrals over [c, d] within [a, b]:
//   chi_k = Int e^x cos(k pi (x-a)/(b-a)) dx
//   psi_k = Int     cos(k pi (x-a)/(b-a)) dx
struct CosBasis {
    double a, b;

    double chi(int k, double c, double d) const {
        const double omega = k * kPi / (b - a);
        const double tc = omega * (c - a);
        const double td = omega * (d - a);
        return (std::cos(td) * std::exp(d) - std::cos(tc) * std::exp(c) +
                omega * (std::sin(td) * std::exp(d) - std::sin(tc) * std::exp(c))) /
               (1.0 + omega * omega);
    }

    double psi(int k, double c, double d) const {
        if (k == 0) return d - c;
        const double omega = k * kPi / (b - a);
        return (std::sin(omega * (d - a)) - std::sin(omega * (c - a))) / omega;
    }
};

struct CosExpansion {
    double a = 0.0;
    double b = 0.0;
    std::vector<double> re_phi;  // Re[phi(u_k) e^{-i u_k a}], k = 0..N-1
};

CosExpansion cos_expansion(const LogPriceCf& cf, const CosConfig& config) {
    if (config.n_terms < 16) {
        throw ConfigError("COS n_terms must be >= 16");
    }
    if (!(config.trunc_width > 0.0)) {
        throw ConfigError("COS trunc_width must be > 0");
    }
    const Cumulants c = exponent_cumulants(cf, config.fd_step);
    const double half_width =
        config.trunc_width * std::sqrt(c.c2 + std::sqrt(c.c4));
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw QuadratureFailure("COS truncation width degenerate: c2=" +
                                fmt(c.c2) + " c4=" + fmt(c.c4));
    }
    CosExpansion e;
    e.a = c.c1 - half_width;
    e.b = c.c1 + half_width;
    e.re_phi.resize(static_cast<std::size_t>(config.n_terms));
    const cdouble i(0.0, 1.0);
    for (int k = 0; k < config.n_terms; ++k) {
        const double u = k * kPi / (e.b - e.a);
        e.re_phi[static_cast<std::size_t>(k)] =
            (cf(cdouble(u, 0.0)) * std::exp(-i * (u * e.a))).real();
    }
    return e;
}

double cos_put_from_expansion(const CosExpansion& e, const LogPriceCf& cf,
                              double strike) {
    const double log_k = std::log(strike);
    if (log_k <= e.a || log_k >= e.b) {
        throw RangeError("ln strike " + fmt(log_k) +
                         " outside the COS truncation [" + fmt(e.a) + ", " +
                         fmt(e.b) + "]");
    }
    const CosBasis basis{e.a, e.b};
    const double scale = 2.0 / (e.b - e.a);
    double sum = 0.0;
    const int n = static_cast<int>(e.re_phi.size());
    for (int k = 0; k < n; ++k) {
        // put payoff coefficients on [a, ln K]
        const double uk = scale * (strike * basis.psi(k, e.a, log_k) -
                                   basis.chi(k, e.a, log_k));
        const double term = e.re_phi[static_cast<std::size_t>(k)] * uk;
        sum += (k == 0) ? 0.5 * term : term;
    }
    return cf.discount() * sum;
}

} // namespace

double cos_price(const RiskNeutralSetup& setup, double strike, OptionKind kind,
                 const CosConfig& config) {
    return cos_price_many(setup, {strike}, kind, config).front();
}

std::vector<double> cos_price_many(const RiskNeutralSetup& setup,
                                   const std::vector<double>& strikes,
                                   OptionKind kind, const CosConfig& config) {
    const LogPriceCf cf(setup);
    const CosExpansion e = cos_expansion(cf, config);
    std::vector<double> out;
    out.reserve(strikes.size());
    for (double strike : strikes) {
        require_strike(strike);
        double price = cos_put_from_expansion(e, cf, strike);
        if (kind == OptionKind::call) {
            // parity keeps the call exact where the put series is stable
            price += cf.discount() * (cf.forward() - strike);
        }
        out.push_back(price);
    }
    return out;
}

// ---------------------------------------------------------------------------
// P1/P2 decomposition via adaptive Gauss-Kronrod.
// ---------------------------------------------------------------------------

namespace {

struct GslFunction {
    std::function<double(double)> f;

    static double call(double x, void* params) {
        return (*static_cast<std::function<double(double)>*>(params))(x);
    }
};

class GslWorkspace {
  public:
    explicit GslWorkspace(std::size_t n)
        : ws_(gsl_integration_workspace_alloc(n)) {
        if (ws_ == nullptr) {
            throw InternalError("gsl workspace allocation failed");
        }
    }
    ~GslWorkspace() { gsl_integration_workspace_free(ws_); }
    GslWorkspace(const GslWorkspace&) = delete;
    GslWorkspace& operator=(const GslWorkspace&) = delete;
    gsl_integration_workspace* get() { return ws_; }

  private:
    gsl_integration_workspace* ws_;
};

double gk_integrate(std::function<double(double)> f, double lo, double hi,
                    GslWorkspace& ws) {
    static const bool silenced = (gsl_set_error_handler_off(), true);
    (void)silenced;
    gsl_function gf;
    gf.function = &GslFunction::call;
    gf.params = &f;
    double result = 0.0, abserr = 0.0;
    const int status =
        gsl_integration_qag(&gf, lo, hi, 1e-12, 1e-10, 2000,
                            GSL_INTEG_GAUSS15, ws.get(), &result, &abserr);
    if (status != GSL_SUCCESS && status != GSL_EROUND) {
        throw QuadratureFailure(std::string("gsl qag failed: ") +
                                gsl_strerror(status));
    }
    return result;
}

} // namespace

P1P2Result p1_p2_price(const RiskNeutralSetup& setup, double strike) {
    require_strike(strike);
    const LogPriceCf cf(setup);
    const double log_k = std::log(strike);
    const double forward = cf.forward();
    const cdouble i(0.0, 1.0);

    // P2 integrand: Re[e^{-iu ln K} phi(u) / (iu)]
    auto f2 = [&](double u) -> double {
        const cdouble val =
            std::exp(-i * (u * log_k) + cf.exponent(cdouble(u, 0.0))) /
            (i * u);
        return val.real();
    };
    // P1 integrand: Re[e^{-iu ln K} phi(u - i) / (iu phi(-i))]
    auto f1 = [&](double u) -> double {
        const cdouble val =
            std::exp(-i * (u * log_k) + cf.exponent(cdouble(u, -1.0))) /
            (i * u * forward);
        return val.real();
    };

    GslWorkspace ws(2000);
    const double lo = 1e-9;
    double upper = 64.0;
    double int1 = gk_integrate(f1, lo, upper, ws);
    double int2 = gk_integrate(f2, lo, upper, ws);
    bool settled = false;
    // Double the truncation until both tails are dead and the increments are
    // beneath the target accuracy.
    for (int round = 0; round < 16; ++round) {
        const double inc1 = gk_integrate(f1, upper, 2.0 * upper, ws);
        const double inc2 = gk_integrate(f2, upper, 2.0 * upper, ws);
        int1 += inc1;
        int2 += inc2;
        upper *= 2.0;
        const double tail =
            std::abs(f1(upper)) + std::abs(f2(upper));
        if (std::abs(inc1) < 1e-12 && std::abs(inc2) < 1e-12 && tail < 1e-10) {
            settled = true;
            break;
        }
    }
    if (!settled) {
        throw QuadratureFailure(
            "P1/P2 truncation did not stabilise; final upper limit " +
            fmt(upper));
    }

    P1P2Result out;
    // [0, lo] contributes its limit value times lo (integrands are finite at 0).
    out.p1 = 0.5 + (int1 + f1(lo) * lo) / kPi;
    out.p2 = 0.5 + (int2 + f2(lo) * lo) / kPi;
    out.truncation = upper;
    out.price = cf.discount() * (forward * out.p1 - strike * out.p2);
    return out;
}

} // namespace nobond
