#include "nobond/calibration.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>

namespace nobond {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logit(double p) { return std::log(p / (1.0 - p)); }
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Unconstrained coordinates for the optimiser.  Every decode lands strictly
// inside the admissible region, so the simplex can wander freely.
struct Transform {
    std::function<LevyModel(const std::vector<double>&)> decode;
    std::vector<double> canonical;  // default starting point
};

Transform make_transform(const std::string& kind, double kappa_floor) {
    std::string k;
    for (char c : kind) k.push_back(static_cast<char>(std::tolower(c)));
    if (k == "bs") {
        return {[](const std::vector<double>& x) -> LevyModel {
                    return BsParams{std::exp(x[0])};
                },
                {std::log(0.2)}};
    }
    if (k == "nig") {
        // alpha = e^x0, beta = alpha tanh(x1), delta = e^x2; mu pinned at 0.
        return {[](const std::vector<double>& x) -> LevyModel {
                    const double alpha = std::exp(x[0]);
                    return NigParams{alpha, alpha * std::tanh(x[1]),
                                     std::exp(x[2]), 0.0};
                },
                {std::log(10.0), std::atanh(-0.15), std::log(0.2)}};
    }
    if (k == "cgmy") {
        // M stays above the largest exponential moment the pricer needs.
        const double floor = std::max(kappa_floor, 0.0);
        return {[floor](const std::vector<double>& x) -> LevyModel {
                    return CgmyParams{std::exp(x[0]), std::exp(x[1]),
                                      floor + std::exp(x[2]),
                                      2.0 * sigmoid(x[3])};
                },
                {std::log(1.0), std::log(10.0), std::log(12.0 - floor),
                 logit(0.5 / 2.0)}};
    }
    if (k == "vg") {
        return {[](const std::vector<double>& x) -> LevyModel {
                    return VgParams{std::exp(x[0]), std::exp(x[1]), x[2]};
                },
                {std::log(0.2), std::log(0.2), -0.1}};
    }
    throw ConfigError("unknown model kind '" + kind +
                      "' (expected bs | nig | cgmy | vg)");
}

struct NmOut {
    std::vector<double> x;
    double f = kInf;
};

// Plain Nelder-Mead on R^n.  Infinite objective values are legal (they mark
// inadmissible parameters) and simply rank worst.
NmOut nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                  const std::vector<double>& x0, double step, int max_iter,
                  double tol) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
    for (std::size_t i = 0; i <= n; ++i) fv[i] = fn(pts[i]);

    std::vector<std::size_t> order(n + 1);
    for (int iter = 0; iter < max_iter; ++iter) {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0], worst = order[n];
        if (!std::isfinite(fv[best])) break;  // hopeless start
        const double spread = fv[worst] - fv[best];
        if (std::isfinite(spread) && spread < tol) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        auto blend = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j)
                p[j] = centroid[j] + coef * (centroid[j] - pts[worst][j]);
            return p;
        };

        const std::vector<double> xr = blend(1.0);
        const double fr = fn(xr);
        if (fr < fv[best]) {
            const std::vector<double> xe = blend(2.0);
            const double fe = fn(xe);
            if (fe < fr) {
                pts[worst] = xe;
                fv[worst] = fe;
            } else {
                pts[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[order[n - 1]]) {
            pts[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        const bool outside = fr < fv[worst];
        const std::vector<double> xc = blend(outside ? 0.5 : -0.5);
        const double fc = fn(xc);
        if ((outside && fc <= fr) || (!outside && fc < fv[worst])) {
            pts[worst] = xc;
            fv[worst] = fc;
            continue;
        }
        // shrink toward the best vertex
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < n; ++j)
                pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
            fv[i] = fn(pts[i]);
        }
    }

    NmOut out;
    for (std::size_t i = 0; i <= n; ++i) {
        if (fv[i] < out.f || out.x.empty()) {
            out.f = fv[i];
            out.x = pts[i];
        }
    }
    return out;
}

// Nelder-Mead with one coordinate pinned (CGMY stage one: Y held fixed).
NmOut nelder_mead_pinned(
    const std::function<double(const std::vector<double>&)>& fn,
    const std::vector<double>& x0, std::size_t pinned, double step,
    int max_iter, double tol) {
    std::vector<double> reduced;
    for (std::size_t j = 0; j < x0.size(); ++j)
        if (j != pinned) reduced.push_back(x0[j]);
    auto lift = [&](const std::vector<double>& r) {
        std::vector<double> full(x0.size());
        std::size_t k = 0;
        for (std::size_t j = 0; j < x0.size(); ++j)
            full[j] = j == pinned ? x0[pinned] : r[k++];
        return full;
    };
    const NmOut sub = nelder_mead(
        [&](const std::vector<double>& r) { return fn(lift(r)); }, reduced,
        step, max_iter, tol);
    return {lift(sub.x), sub.f};
}

} // namespace

void validate(const OptionChain& chain) {
    if (!(chain.spot > 0.0) || !std::isfinite(chain.spot)) {
        throw NonFiniteInput("chain spot must be > 0");
    }
    for (std::size_t i = 0; i < chain.quotes.size(); ++i) {
        const Quote& q = chain.quotes[i];
        if (!(q.strike > 0.0) || !std::isfinite(q.strike) ||
            !(q.maturity > 0.0) || !std::isfinite(q.maturity) ||
            !(q.mid >= 0.0) || !std::isfinite(q.mid) ||
            !(q.weight >= 0.0) || !std::isfinite(q.weight)) {
            throw NonFiniteInput("quote " + std::to_string(i) +
                                 " has an unusable field");
        }
    }
}

double historical_vol(const std::vector<double>& prices, int trading_days) {
    if (trading_days < 1) {
        throw ConfigError("trading_days must be >= 1");
    }
    if (prices.size() < 3) {
        throw InsufficientData("need at least three prices (two returns)");
    }
    std::vector<double> rets(prices.size() - 1);
    for (std::size_t i = 0; i + 1 < prices.size(); ++i) {
        if (!(prices[i] > 0.0) || !std::isfinite(prices[i]) ||
            !(prices[i + 1] > 0.0)) {
            throw DomainError("prices must be strictly positive for log returns");
        }
        rets[i] = std::log(prices[i + 1] / prices[i]);
    }
    double mean = 0.0;
    for (double r : rets) mean += r;
    mean /= static_cast<double>(rets.size());
    double ss = 0.0;
    for (double r : rets) ss += (r - mean) * (r - mean);
    const double var = ss / static_cast<double>(rets.size() - 1);
    return std::sqrt(var * trading_days);
}

double rmse_objective(const LevyModel& model, const OptionChain& chain,
                      const MarketLeg& leg, double r_bar,
                      const CosConfig& config) {
    validate(chain);
    MarketLeg priced = leg;
    priced.spot = chain.spot;

    // group accepted quotes by maturity so each group shares its CF sweep
    std::map<double, std::vector<std::size_t>> by_t;
    for (std::size_t i = 0; i < chain.quotes.size(); ++i) {
        if (chain.quotes[i].weight > 0.0) by_t[chain.quotes[i].maturity].push_back(i);
    }
    if (by_t.empty()) {
        throw EmptyChain("no positive-weight quotes to fit");
    }

    double num = 0.0, den = 0.0;
    try {
        for (const auto& [t, idx] : by_t) {
            const RiskNeutralSetup setup{model, priced, r_bar, t};
            for (OptionKind kind : {OptionKind::call, OptionKind::put}) {
                std::vector<double> strikes;
                std::vector<std::size_t> rows;
                for (std::size_t i : idx) {
                    if (chain.quotes[i].kind == kind) {
                        strikes.push_back(chain.quotes[i].strike);
                        rows.push_back(i);
                    }
                }
                if (strikes.empty()) continue;
                const std::vector<double> prices =
                    cos_price_many(setup, strikes, kind, config);
                for (std::size_t j = 0; j < rows.size(); ++j) {
                    const Quote& q = chain.quotes[rows[j]];
                    const double e = prices[j] - q.mid;
                    num += q.weight * e * e;
                    den += q.weight;
                }
            }
        }
    } catch (const MomentExplosion&) {
        return kInf;
    } catch (const RangeError&) {
        return kInf;
    } catch (const InvalidModel&) {
        return kInf;
    } catch (const DomainError&) {
        return kInf;
    } catch (const QuadratureFailure&) {
        // degenerate COS truncation width at extreme parameters
        return kInf;
    }
    const double rmse = std::sqrt(num / den);
    return std::isfinite(rmse) ? rmse : kInf;
}

double relative_rmse(double rmse, const OptionChain& chain) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const Quote& q : chain.quotes) {
        if (q.weight > 0.0) {
            sum += q.mid;
            ++n;
        }
    }
    if (n == 0) {
        throw EmptyChain("no positive-weight quotes");
    }
    const double mean = sum / static_cast<double>(n);
    if (!(mean > 0.0)) {
        throw DomainError("mean quote is not positive; relative RMSE undefined");
    }
    return rmse / mean;
}

double risk_neutral_drift(const LevyModel& model, double r_bar,
                          double div_yield, double sigma, double kappa) {
    return r_bar - div_yield + 0.5 * sigma * sigma +
           jump_compensator(model, kappa);
}

double update_shadow_rate(double mu_s, double mu_z, double sigma_s,
                          double sigma_z, double floor) {
    if (!std::isfinite(mu_s) || !std::isfinite(mu_z) ||
        !std::isfinite(sigma_s) || !std::isfinite(sigma_z)) {
        throw NonFiniteInput("shadow-rate update inputs must be finite");
    }
    const double spread = sigma_z - sigma_s;
    if (std::abs(spread) < floor) {
        throw DegenerateSpec("sigma_Z - sigma_S below the degeneracy floor");
    }
    return (mu_s * sigma_z - mu_z * sigma_s) / spread;
}

CalibrationResult calibrate(const OptionChain& chain,
                            const PairHistory& history,
                            const MarketLeg& leg_s, const MarketLeg& leg_z,
                            const std::string& model_kind,
                            const CalibrationConfig& config) {
    validate(chain);
    validate(leg_s);
    validate(leg_z);
    if (history.s.size() != history.z.size()) {
        throw MisalignedSeries("pair history legs differ in length");
    }
    if (config.max_outer < 1 || config.n_starts < 1 || config.nm_max_iter < 1) {
        throw ConfigError("calibration budgets must be >= 1");
    }
    if (!(config.eps > 0.0)) {
        throw ConfigError("eps must be > 0");
    }

    CalibrationResult result;
    result.sigma_s = historical_vol(history.s);
    result.sigma_z = historical_vol(history.z);

    MarketLeg ls = leg_s;
    MarketLeg lz = leg_z;
    ls.sigma = result.sigma_s;
    lz.sigma = result.sigma_z;
    ls.spot = chain.spot;

    const Transform tf =
        make_transform(model_kind, std::max(ls.kappa, lz.kappa));
    const bool is_cgmy = tf.canonical.size() == 4;

    double r_bar = config.seed_rate;
    std::vector<double> warm = tf.canonical;
    bool have_warm = false;
    NmOut best;

    auto run_start = [&](const std::function<double(const std::vector<double>&)>&
                             fn,
                         const std::vector<double>& x0) {
        NmOut out;
        if (is_cgmy && config.cgmy_two_step) {
            // stage one: hold Y, settle (C, G, M); stage two: release Y
            const NmOut stage =
                nelder_mead_pinned(fn, x0, 3, 0.25, config.nm_max_iter,
                                   config.nm_tol);
            out = nelder_mead(fn, stage.x, 0.25, config.nm_max_iter,
                              config.nm_tol);
            if (stage.f < out.f) out = stage;
        } else {
            out = nelder_mead(fn, x0, 0.25, config.nm_max_iter, config.nm_tol);
        }
        return out;
    };

    for (int outer = 1; outer <= config.max_outer; ++outer) {
        result.outer_iterations = outer;
        const double rate = r_bar;
        auto fn = [&](const std::vector<double>& x) {
            const double f =
                rmse_objective(tf.decode(x), chain, ls, rate, config.cos);
            return std::isfinite(f) ? f : kInf;
        };

        if (!have_warm) {
            best = run_start(fn, tf.canonical);
            std::mt19937_64 rng(config.seed);
            std::uniform_real_distribution<double> jitter(-0.75, 0.75);
            for (int s = 1; s < config.n_starts; ++s) {
                std::vector<double> x0 = tf.canonical;
                for (double& v : x0) v += jitter(rng);
                const NmOut trial = run_start(fn, x0);
                if (trial.f < best.f) best = trial;
            }
            have_warm = true;
        } else {
            // r_bar moved, so older objective values are stale: refit from
            // the warm point and take whatever it settles on.
            best = run_start(fn, warm);
        }
        warm = best.x;

        const LevyModel model = tf.decode(best.x);
        result.mu_s = risk_neutral_drift(model, rate, ls.div_yield,
                                         result.sigma_s, ls.kappa);
        result.mu_z = risk_neutral_drift(model, rate, lz.div_yield,
                                         result.sigma_z, lz.kappa);
        double next = update_shadow_rate(result.mu_s, result.mu_z,
                                         result.sigma_s, result.sigma_z);
        if (config.jump_wedge_update) {
            next += config.wedge_lambda * (lz.kappa - ls.kappa) /
                    (result.sigma_z - result.sigma_s);
        }
        result.r_bar_path.push_back(next);

        const double step = next - rate;
        if (std::abs(step) < config.eps) {
            result.converged = true;
            r_bar = next;
            break;
        }
        r_bar = next;
    }

    result.model = tf.decode(best.x);
    result.r_bar = r_bar;
    result.rmse = rmse_objective(result.model, chain, ls, r_bar, config.cos);
    result.rel_rmse = relative_rmse(result.rmse, chain);
    return result;
}

} // namespace nobond
