#include "nobond/lattice.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace nobond {

namespace {

constexpr double kRatioGapTolerance = 1e-12;

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

struct StepWeights {
    double q = 0.0;  // risk-neutral up weight
    double g = 0.0;  // one-period discount divisor
};

StepWeights step_weights(const StepMoves& m) {
    StepWeights w;
    w.q = risk_neutral_prob(m);
    w.g = one_period_discount(m);
    return w;
}

} // namespace

void validate(const StepMoves& moves) {
    for (double v : {moves.u, moves.d, moves.u_tilde, moves.d_tilde}) {
        if (!std::isfinite(v)) {
            throw NonFiniteInput("step move is not finite");
        }
    }
    if (moves.u <= -1.0 || moves.d <= -1.0 || moves.u_tilde <= -1.0 ||
        moves.d_tilde <= -1.0) {
        throw NonFiniteInput("gross moves 1+move must stay positive");
    }
    if (!(moves.u > moves.d) || !(moves.u_tilde > moves.d_tilde)) {
        throw ConfigError("step moves need U > D on both legs");
    }
}

double shadow_growth_factor(const StepMoves& m) {
    validate(m);
    return (1.0 + m.u) * (1.0 + m.d_tilde) - (1.0 + m.u_tilde) * (1.0 + m.d);
}

double risk_neutral_prob(const StepMoves& m) {
    validate(m);
    const double denom = (m.d_tilde - m.d) - (m.u_tilde - m.u);
    if (denom == 0.0) {
        throw DegenerateStep(
            "(D~-D) == (U~-U): risk-neutral weight undefined for this step");
    }
    return (m.d_tilde - m.d) / denom;
}

double one_period_discount(const StepMoves& m) {
    const double r = shadow_growth_factor(m);
    if (r == 0.0) {
        throw ZeroGrowthFactor(
            "replication determinant R == 0: degenerate one-period market");
    }
    const double denom = (m.d_tilde - m.d) - (m.u_tilde - m.u);
    if (denom == 0.0) {
        throw DegenerateStep(
            "(D~-D) == (U~-U): risk-neutral weight undefined for this step");
    }
    // R / ((D~-D) - (U~-U)) == q(1+U) + (1-q)(1+D): 1 + shadow rate per step.
    return r / denom;
}

double ratio_martingale_gap(const StepMoves& m) {
    const StepWeights w = step_weights(m);
    const double growth_s = w.q * (1.0 + m.u) + (1.0 - w.q) * (1.0 + m.d);
    const double growth_z =
        w.q * (1.0 + m.u_tilde) + (1.0 - w.q) * (1.0 + m.d_tilde);
    return std::abs(growth_z / growth_s - 1.0);
}

void validate(const LatticeSpec& spec) {
    if (!(spec.s0 > 0.0) || !(spec.z0 > 0.0)) {
        throw NonFiniteInput("lattice spots must be > 0");
    }
    if (spec.n_steps < 1) {
        throw ConfigError("lattice needs n_steps >= 1");
    }
    if (spec.moves.empty()) {
        throw ConfigError("lattice needs at least one StepMoves entry");
    }
    if (spec.moves.size() != 1 &&
        spec.moves.size() != static_cast<std::size_t>(spec.n_steps)) {
        std::ostringstream os;
        os << "moves must have size 1 (constant) or n_steps=" << spec.n_steps
           << ", got " << spec.moves.size();
        throw ConfigError(os.str());
    }
    for (const StepMoves& m : spec.moves) {
        validate(m);
    }
}

namespace {

LatticeResult price_recombining(const LatticeSpec& spec, const Payoff2& payoff,
                                std::vector<LatticeNode>* dump) {
    const StepMoves& m = spec.moves.front();
    const StepWeights w = step_weights(m);
    const double gap = ratio_martingale_gap(m);
    if (gap > kRatioGapTolerance) {
        throw InternalError("per-step ratio martingale gap " + fmt(gap) +
                            " exceeds 1e-12");
    }
    const int n = spec.n_steps;

    // Terminal nodes: j up-moves out of n; Z moves in lockstep with S.
    std::vector<double> values(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        const double s = spec.s0 * std::pow(1.0 + m.u, j) *
                         std::pow(1.0 + m.d, n - j);
        const double z = spec.z0 * std::pow(1.0 + m.u_tilde, j) *
                         std::pow(1.0 + m.d_tilde, n - j);
        values[static_cast<std::size_t>(j)] = payoff(s, z);
        if (dump != nullptr) {
            dump->push_back({n, j, s, z, values[static_cast<std::size_t>(j)]});
        }
    }

    for (int step = n - 1; step >= 0; --step) {
        for (int j = 0; j <= step; ++j) {
            // node j at `step`: down-child j, up-child j+1
            values[static_cast<std::size_t>(j)] =
                (w.q * values[static_cast<std::size_t>(j) + 1] +
                 (1.0 - w.q) * values[static_cast<std::size_t>(j)]) /
                w.g;
            if (dump != nullptr) {
                const double s = spec.s0 * std::pow(1.0 + m.u, j) *
                                 std::pow(1.0 + m.d, step - j);
                const double z = spec.z0 * std::pow(1.0 + m.u_tilde, j) *
                                 std::pow(1.0 + m.d_tilde, step - j);
                dump->push_back(
                    {step, j, s, z, values[static_cast<std::size_t>(j)]});
            }
        }
    }
    return {values.front(), gap};
}

LatticeResult price_bushy(const LatticeSpec& spec, const Payoff2& payoff,
                          std::vector<LatticeNode>* dump) {
    const int n = spec.n_steps;
    if (n > spec.max_bushy_depth) {
        std::ostringstream os;
        os << "per-step moves build a bushy tree: n_steps=" << n
           << " exceeds max_bushy_depth=" << spec.max_bushy_depth;
        throw DepthExceeded(os.str());
    }
    const bool dump_ok = dump != nullptr && n <= 12;

    double max_gap = 0.0;
    std::vector<StepWeights> weights(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const StepMoves& m = spec.moves[static_cast<std::size_t>(k)];
        weights[static_cast<std::size_t>(k)] = step_weights(m);
        const double gap = ratio_martingale_gap(m);
        max_gap = std::max(max_gap, gap);
        if (gap > kRatioGapTolerance) {
            throw InternalError("per-step ratio martingale gap " + fmt(gap) +
                                " exceeds 1e-12 at step " + std::to_string(k));
        }
    }

    // Path index bit b (from the most significant step) set = up at that step.
    const std::size_t n_paths = std::size_t{1} << n;
    std::vector<double> values(n_paths);
    for (std::size_t path = 0; path < n_paths; ++path) {
        double s = spec.s0, z = spec.z0;
        for (int k = 0; k < n; ++k) {
            const StepMoves& m = spec.moves[static_cast<std::size_t>(k)];
            const bool up = (path >> (n - 1 - k)) & 1u;
            s *= up ? 1.0 + m.u : 1.0 + m.d;
            z *= up ? 1.0 + m.u_tilde : 1.0 + m.d_tilde;
        }
        values[path] = payoff(s, z);
        if (dump_ok) {
            dump->push_back({n, static_cast<int>(path), s, z, values[path]});
        }
    }

    for (int step = n - 1; step >= 0; --step) {
        const StepWeights& w = weights[static_cast<std::size_t>(step)];
        const std::size_t level = std::size_t{1} << step;
        for (std::size_t node = 0; node < level; ++node) {
            values[node] =
                (w.q * values[2 * node + 1] + (1.0 - w.q) * values[2 * node]) /
                w.g;
        }
        if (dump_ok) {
            for (std::size_t node = 0; node < level; ++node) {
                double s = spec.s0, z = spec.z0;
                for (int k = 0; k < step; ++k) {
                    const StepMoves& m = spec.moves[static_cast<std::size_t>(k)];
                    const bool up = (node >> (step - 1 - k)) & 1u;
                    s *= up ? 1.0 + m.u : 1.0 + m.d;
                    z *= up ? 1.0 + m.u_tilde : 1.0 + m.d_tilde;
                }
                dump->push_back(
                    {step, static_cast<int>(node), s, z, values[node]});
            }
        }
    }
    return {values.front(), max_gap};
}

} // namespace

LatticeResult price_on_lattice(const LatticeSpec& spec, const Payoff2& payoff,
                               std::vector<LatticeNode>* dump) {
    validate(spec);
    if (!payoff) {
        throw ConfigError("lattice payoff is empty");
    }
    if (spec.moves.size() == 1) {
        return price_recombining(spec, payoff, dump);
    }
    return price_bushy(spec, payoff, dump);
}

StepMoves diffusion_moves(double sigma_s, double sigma_z, double dt,
                          double drift_s, double drift_z) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("dt must be > 0");
    }
    if (sigma_s < 0.0 || sigma_z < 0.0) {
        throw ConfigError("sigmas must be >= 0");
    }
    const double sq = std::sqrt(dt);
    StepMoves m;
    m.u = std::exp(drift_s * dt + sigma_s * sq) - 1.0;
    m.d = std::exp(drift_s * dt - sigma_s * sq) - 1.0;
    m.u_tilde = std::exp(drift_z * dt + sigma_z * sq) - 1.0;
    m.d_tilde = std::exp(drift_z * dt - sigma_z * sq) - 1.0;
    return m;
}

} // namespace nobond
