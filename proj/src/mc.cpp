#include "nobond/mc.hpp"

#include <cmath>
#include <random>

namespace nobond {

namespace {

constexpr std::int64_t kBlockSize = 65536;

// splitmix64: decorrelates the per-block substream seeds.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d649bb133111ebULL;
    return x ^ (x >> 31);
}

// Inverse Gaussian with mean mu and shape lambda (Michael-Schucany-Haas).
double sample_inverse_gaussian(std::mt19937_64& rng, double mu, double lambda) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double nu = normal(rng);
    const double y = nu * nu;
    const double x = mu + mu * mu * y / (2.0 * lambda) -
                     mu / (2.0 * lambda) *
                         std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
    if (unif(rng) <= mu / (mu + x)) {
        return x;
    }
    return mu * mu / x;
}

// One exact increment of the jump driver L over dt, plus the driver kind.
struct JumpSampler {
    enum class Kind { none, brownian, nig, vg } kind = Kind::none;
    // BS-as-driver
    double bs_sigma = 0.0;
    // NIG
    double nig_beta = 0.0, nig_delta = 0.0, nig_mu = 0.0, nig_gamma = 0.0;
    // VG
    double vg_sigma = 0.0, vg_nu = 0.0, vg_theta = 0.0;

    explicit JumpSampler(const LevyModel& model) {
        if (const auto* bs = std::get_if<BsParams>(&model)) {
            kind = Kind::brownian;
            bs_sigma = bs->sigma;
        } else if (const auto* nig = std::get_if<NigParams>(&model)) {
            kind = Kind::nig;
            nig_beta = nig->beta;
            nig_delta = nig->delta;
            nig_mu = nig->mu;
            nig_gamma = std::sqrt(nig->alpha * nig->alpha - nig->beta * nig->beta);
        } else if (std::holds_alternative<VgParams>(model)) {
            const auto& vg = std::get<VgParams>(model);
            kind = Kind::vg;
            vg_sigma = vg.sigma;
            vg_nu = vg.nu;
            vg_theta = vg.theta;
        } else {
            throw ConfigError(
                "CGMY has no exact increment sampler here; use the Fourier "
                "pricers and cross-validate FFT vs COS instead");
        }
    }

    double draw(std::mt19937_64& rng, double dt, double* gaussian_part,
                double* conditioned_mean) const {
        std::normal_distribution<double> normal(0.0, 1.0);
        switch (kind) {
            case Kind::brownian: {
                const double n = normal(rng);
                *gaussian_part = bs_sigma * std::sqrt(dt);
                *conditioned_mean = 0.0;
                return *gaussian_part * n;
            }
            case Kind::nig: {
                // subordinate: z ~ IG(delta dt / gamma, (delta dt)^2 shape)
                const double a = nig_delta * dt;
                const double z =
                    sample_inverse_gaussian(rng, a / nig_gamma, a * a);
                const double n = normal(rng);
                *gaussian_part = std::sqrt(z);
                *conditioned_mean = nig_mu * dt + nig_beta * z;
                return *conditioned_mean + *gaussian_part * n;
            }
            default: {
                // VG subordinate: g ~ Gamma(dt/nu, scale nu)
                std::gamma_distribution<double> gamma(dt / vg_nu, vg_nu);
                const double g = gamma(rng);
                const double n = normal(rng);
                *gaussian_part = vg_sigma * std::sqrt(g);
                *conditioned_mean = vg_theta * g;
                return *conditioned_mean + *gaussian_part * n;
            }
        }
    }
};

} // namespace

void validate(const SimSpec& spec) {
    validate(spec.model);
    validate(spec.leg_s);
    validate(spec.leg_z);
    if (!std::isfinite(spec.r_bar)) {
        throw NonFiniteInput("r_bar is not finite");
    }
    if (!(spec.t > 0.0) || !std::isfinite(spec.t)) {
        throw NonFiniteInput("maturity must be > 0");
    }
    if (spec.n_steps < 1) {
        throw ConfigError("n_steps must be >= 1");
    }
    if (spec.n_paths < 1) {
        throw ConfigError("n_paths must be >= 1");
    }
    if (spec.antithetic && spec.n_paths % 2 != 0) {
        throw ConfigError("antithetic sampling needs an even n_paths");
    }
    if (spec.rho < -1.0 || spec.rho > 1.0) {
        throw NonFiniteInput("rho must lie in [-1, 1]");
    }
}

TerminalSample simulate_terminal(const SimSpec& spec) {
    validate(spec);
    const JumpSampler jumps(spec.model);

    const double lambda_s = jump_compensator(spec.model, spec.leg_s.kappa);
    const double lambda_z = jump_compensator(spec.model, spec.leg_z.kappa);
    const double dt = spec.t / spec.n_steps;
    const double sq_dt = std::sqrt(dt);
    const double drift_s = (spec.r_bar - spec.leg_s.div_yield -
                            0.5 * spec.leg_s.sigma * spec.leg_s.sigma -
                            lambda_s) *
                           spec.t;
    const double drift_z = (spec.r_bar - spec.leg_z.div_yield -
                            0.5 * spec.leg_z.sigma * spec.leg_z.sigma -
                            lambda_z) *
                           spec.t;
    const double rho_perp = std::sqrt(1.0 - spec.rho * spec.rho);

    TerminalSample out;
    out.s.resize(static_cast<std::size_t>(spec.n_paths));
    out.z.resize(static_cast<std::size_t>(spec.n_paths));

    const std::int64_t stride = spec.antithetic ? 2 : 1;
    const std::int64_t n_base = spec.n_paths / stride;
    std::vector<double> jump_mean(static_cast<std::size_t>(spec.n_steps));
    std::vector<double> jump_scale(static_cast<std::size_t>(spec.n_steps));
    std::vector<double> jump_n(static_cast<std::size_t>(spec.n_steps));
    std::vector<double> diff_n(static_cast<std::size_t>(spec.n_steps));
    std::vector<double> perp_n(static_cast<std::size_t>(spec.n_steps));

    std::mt19937_64 r;
    std::int64_t current_block = -1;
    for (std::int64_t base = 0; base < n_base; ++base) {
        // Fixed-size blocks with decorrelated substreams: the draw sequence
        // for a path depends only on (seed, block, offset in block), so the
        // same spec always reproduces the same sample.
        const std::int64_t block = base / kBlockSize;
        if (block != current_block) {
            r.seed(mix(spec.seed ^ mix(static_cast<std::uint64_t>(block))));
            current_block = block;
        }

        std::normal_distribution<double> normal(0.0, 1.0);
        double jump_sum = 0.0;
        for (int k = 0; k < spec.n_steps; ++k) {
            double scale = 0.0, cmean = 0.0;
            const double incr = jumps.draw(r, dt, &scale, &cmean);
            jump_sum += incr;
            jump_mean[static_cast<std::size_t>(k)] = cmean;
            jump_scale[static_cast<std::size_t>(k)] = scale;
            jump_n[static_cast<std::size_t>(k)] =
                scale > 0.0 ? (incr - cmean) / scale : 0.0;
            diff_n[static_cast<std::size_t>(k)] = normal(r);
            perp_n[static_cast<std::size_t>(k)] =
                rho_perp > 0.0 ? normal(r) : 0.0;
        }

        for (std::int64_t mirror = 0; mirror < stride; ++mirror) {
            const double sign = mirror == 0 ? 1.0 : -1.0;
            double w_s = 0.0, w_perp = 0.0, l = 0.0;
            for (int k = 0; k < spec.n_steps; ++k) {
                w_s += sign * diff_n[static_cast<std::size_t>(k)] * sq_dt;
                w_perp += sign * perp_n[static_cast<std::size_t>(k)] * sq_dt;
                l += jump_mean[static_cast<std::size_t>(k)] +
                     sign * jump_n[static_cast<std::size_t>(k)] *
                         jump_scale[static_cast<std::size_t>(k)];
            }
            const double w_z = spec.rho * w_s + rho_perp * w_perp;
            const std::int64_t path = base * stride + mirror;
            out.s[static_cast<std::size_t>(path)] =
                spec.leg_s.spot * std::exp(drift_s + spec.leg_s.sigma * w_s +
                                           spec.leg_s.kappa * l);
            out.z[static_cast<std::size_t>(path)] =
                spec.leg_z.spot * std::exp(drift_z + spec.leg_z.sigma * w_z +
                                           spec.leg_z.kappa * l);
        }
    }
    return out;
}

McPrice mc_price(const SimSpec& spec, const Payoff2& payoff) {
    if (!payoff) {
        throw ConfigError("mc payoff is empty");
    }
    const TerminalSample sample = simulate_terminal(spec);
    const double discount = std::exp(-spec.r_bar * spec.t);
    const std::size_t n = sample.s.size();

    double sum = 0.0, sum_sq = 0.0, sum_s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double h = payoff(sample.s[i], sample.z[i]);
        sum += h;
        sum_sq += h * h;
        sum_s += sample.s[i];
    }
    const double mean = sum / static_cast<double>(n);
    const double var =
        n > 1 ? std::max(0.0, (sum_sq - sum * mean) / static_cast<double>(n - 1))
              : 0.0;
    McPrice out;
    out.price = discount * mean;
    out.std_error = discount * std::sqrt(var / static_cast<double>(n));
    out.forward_s = sum_s / static_cast<double>(n);
    return out;
}

} // namespace nobond
