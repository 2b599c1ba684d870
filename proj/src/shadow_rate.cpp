#include "nobond/shadow_rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace nobond {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct WindowStats {
    double mu = 0.0;      // annualised mean log-return
    double sigma = 0.0;   // annualised sample std
    double kappa = 0.0;   // mean log-return over jump days
};

double mean(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sample_std(const std::vector<double>& x) {
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

} // namespace

void validate(const PairHistory& history) {
    if (history.dates.size() != history.s.size() ||
        history.dates.size() != history.z.size()) {
        std::ostringstream os;
        os << "pair history columns disagree: " << history.dates.size()
           << " dates, " << history.s.size() << " S prices, "
           << history.z.size() << " Z prices";
        throw MisalignedSeries(os.str());
    }
    for (std::size_t i = 0; i < history.s.size(); ++i) {
        if (!(history.s[i] > 0.0) || !(history.z[i] > 0.0)) {
            throw NonFiniteInput("pair history prices must be positive (row " +
                                 std::to_string(i) + ")");
        }
    }
}

ShadowRateParts shadow_rate_parts(const TwoAssetSpec& spec, double floor) {
    validate(spec);
    const double spread = spec.sigma_z - spec.sigma_s;
    if (std::abs(spread) <= floor) {
        std::ostringstream os;
        os << "sigma_Z - sigma_S = " << spread
           << " is below the degeneracy floor " << floor;
        throw DegenerateSpec(os.str());
    }
    ShadowRateParts parts;
    parts.diffusion = (spec.mu_s * spec.sigma_z - spec.mu_z * spec.sigma_s) / spread;
    parts.jump_wedge = spec.lambda * (spec.kappa_z - spec.kappa_s) / spread;
    parts.r_bar = parts.diffusion + parts.jump_wedge;
    return parts;
}

double shadow_rate(const TwoAssetSpec& spec, double floor) {
    return shadow_rate_parts(spec, floor).r_bar;
}

std::vector<ShadowRatePoint> rolling_shadow_series(const PairHistory& history,
                                                   const RollingConfig& config) {
    validate(history);
    if (config.window < 2) {
        throw InsufficientData("rolling window must be >= 2");
    }
    const int n = static_cast<int>(history.dates.size());
    const int n_returns = n - 1;
    if (n_returns < config.window) {
        std::ostringstream os;
        os << "need at least " << config.window + 1 << " aligned prices, got " << n;
        throw InsufficientData(os.str());
    }

    std::vector<double> ret_s(n_returns), ret_z(n_returns);
    for (int i = 0; i < n_returns; ++i) {
        ret_s[i] = std::log(history.s[i + 1] / history.s[i]);
        ret_z[i] = std::log(history.z[i + 1] / history.z[i]);
    }

    const double ann = static_cast<double>(config.trading_days);
    const double sqrt_ann = std::sqrt(ann);
    std::vector<ShadowRatePoint> out;
    out.reserve(static_cast<std::size_t>(n_returns - config.window + 1));

    std::vector<double> win_s(config.window), win_z(config.window);
    for (int end = config.window; end <= n_returns; ++end) {
        // window covers returns [end - window, end), estimate dated at price end
        std::copy(ret_s.begin() + (end - config.window), ret_s.begin() + end,
                  win_s.begin());
        std::copy(ret_z.begin() + (end - config.window), ret_z.begin() + end,
                  win_z.begin());

        TwoAssetSpec spec;
        spec.mu_s = mean(win_s) * ann;
        spec.mu_z = mean(win_z) * ann;
        spec.sigma_s = sample_std(win_s) * sqrt_ann;
        spec.sigma_z = sample_std(win_z) * sqrt_ann;

        // Jump days: either leg beats its own threshold on the same date.
        const double thresh_s =
            config.jump_threshold * spec.sigma_s / sqrt_ann;
        const double thresh_z =
            config.jump_threshold * spec.sigma_z / sqrt_ann;
        int n_jump = 0;
        double sum_jump_s = 0.0, sum_jump_z = 0.0;
        for (int i = 0; i < config.window; ++i) {
            if (std::abs(win_s[i]) > thresh_s || std::abs(win_z[i]) > thresh_z) {
                ++n_jump;
                sum_jump_s += win_s[i];
                sum_jump_z += win_z[i];
            }
        }
        spec.lambda = ann * static_cast<double>(n_jump) /
                      static_cast<double>(config.window);
        spec.kappa_s = n_jump > 0 ? sum_jump_s / n_jump : 0.0;
        spec.kappa_z = n_jump > 0 ? sum_jump_z / n_jump : 0.0;

        ShadowRatePoint point;
        point.date = history.dates[static_cast<std::size_t>(end)];
        if (std::abs(spec.sigma_z - spec.sigma_s) <= config.degeneracy_floor) {
            point.degenerate = true;  // flagged, never dropped
            point.r_bar = kNan;
            point.diffusion = kNan;
            point.jump_wedge = kNan;
        } else {
            const ShadowRateParts parts =
                shadow_rate_parts(spec, config.degeneracy_floor);
            point.r_bar = parts.r_bar;
            point.diffusion = parts.diffusion;
            point.jump_wedge = parts.jump_wedge;
        }
        out.push_back(std::move(point));
    }
    return out;
}

std::vector<BenchmarkGapPoint> benchmark_gap(
    const std::vector<ShadowRatePoint>& series,
    const std::vector<DatedYield>& yields) {
    std::map<std::string, double> yield_by_date;
    for (const auto& y : yields) {
        yield_by_date.emplace(y.date, y.yield);
    }
    std::vector<BenchmarkGapPoint> out;
    for (const auto& p : series) {
        if (p.degenerate) continue;
        auto it = yield_by_date.find(p.date);
        if (it == yield_by_date.end()) continue;
        BenchmarkGapPoint g;
        g.date = p.date;
        g.r_bar = p.r_bar;
        g.yield = it->second;
        g.gap = p.r_bar - it->second;
        out.push_back(std::move(g));
    }
    if (out.empty()) {
        throw EmptyIntersection(
            "no usable dates shared between shadow series and benchmark");
    }
    return out;
}

} // namespace nobond
