#pragma once

#include <cstdint>
#include <vector>

#include "nobond/lattice.hpp"  // Payoff2
#include "nobond/levy.hpp"

namespace nobond {

// Terminal simulation of both legs under the risk-neutral dynamics.  The
// Levy increments are sampled exactly per step from the subordinated
// representation (inverse Gaussian for NIG, gamma for VG), so n_steps only
// affects path granularity, never the terminal distribution.  CGMY has no
// exact sampler here and is rejected with ConfigError; cross-validate it
// across the Fourier pricers instead.
struct SimSpec {
    LevyModel model;
    MarketLeg leg_s;
    MarketLeg leg_z;
    double rho = 1.0;    // diffusion correlation between the legs
    double r_bar = 0.0;
    double t = 1.0;
    int n_steps = 1;
    std::int64_t n_paths = 100000;
    std::uint64_t seed = 1;
    bool antithetic = false;
};

void validate(const SimSpec& spec);

struct TerminalSample {
    std::vector<double> s;
    std::vector<double> z;
};

// Deterministic for a fixed (seed, n_paths, n_steps): paths are generated in
// fixed-size blocks with per-block seeded substreams, so results do not
// depend on scheduling.  Both legs share the jump driver (their jump parts
// are exactly proportional, ratio kappa_S : kappa_Z) and, for rho = 1, the
// diffusion driver as well.
TerminalSample simulate_terminal(const SimSpec& spec);

struct McPrice {
    double price = 0.0;
    double std_error = 0.0;
    double forward_s = 0.0;  // sample mean of S_T (martingale diagnostic)
};

// Discounted sample mean of H(S_T, Z_T) with its standard error.
McPrice mc_price(const SimSpec& spec, const Payoff2& payoff);

} // namespace nobond
