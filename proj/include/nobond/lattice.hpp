#pragma once

#include <functional>
#include <vector>

#include "nobond/errors.hpp"

namespace nobond {

// One period of the jump-binomial market: S moves by U/D, Z by U~/D~ on the
// same up/down event.
struct StepMoves {
    double u = 0.0;        // S up, > -1
    double d = 0.0;        // S down, > -1
    double u_tilde = 0.0;  // Z up
    double d_tilde = 0.0;  // Z down
};

void validate(const StepMoves& moves);

// R = (1+U)(1+D~) - (1+U~)(1+D): the replication determinant of the step.
// Identical moves on both legs give R == 0 (degenerate one-period market).
double shadow_growth_factor(const StepMoves& moves);

// q = (D~ - D) / ((D~ - D) - (U~ - U)); throws DegenerateStep when the
// denominator vanishes.  Not clamped: q outside [0,1] signals an arbitrage
// step and is surfaced, not hidden.
double risk_neutral_prob(const StepMoves& moves);

// One-period discount divisor of the replication price:
//   G = R / ((D~-D) - (U~-U)) == q(1+U) + (1-q)(1+D) == q(1+U~) + (1-q)(1+D~).
// This is "1 + shadow rate over the step".  Throws ZeroGrowthFactor when R
// vanishes, DegenerateStep when the q-denominator does.
double one_period_discount(const StepMoves& moves);

// |E_q[Z gross growth] / E_q[S gross growth] - 1|: exactly 0 in exact
// arithmetic, asserted <= 1e-12 per step by the pricer (the sense in which
// Z/S is driftless under the step's normalised measure).
double ratio_martingale_gap(const StepMoves& moves);

// ---------------------------------------------------------------------------
// Multi-period pricing.
// ---------------------------------------------------------------------------

struct LatticeSpec {
    double s0 = 100.0;
    double z0 = 100.0;
    // size 1: constant moves, recombining lattice (O(n^2) nodes).
    // size n_steps: per-step moves, bushy tree capped at max_bushy_depth.
    std::vector<StepMoves> moves;
    int n_steps = 1;
    int max_bushy_depth = 25;
};

void validate(const LatticeSpec& spec);

// Terminal payoff H(S_T, Z_T).
using Payoff2 = std::function<double(double, double)>;

struct LatticeNode {
    int step = 0;
    int node = 0;
    double s = 0.0;
    double z = 0.0;
    double value = 0.0;
};

struct LatticeResult {
    double price = 0.0;
    double max_ratio_gap = 0.0;  // worst per-step ratio_martingale_gap seen
};

// Backward induction C_k = [q C_up + (1-q) C_down] / G per step.  When `dump`
// is non-null it receives every (step, node, S, Z, value) triple visited
// (recombining lattices only; bushy dumps are limited to depth <= 12).
LatticeResult price_on_lattice(const LatticeSpec& spec, const Payoff2& payoff,
                               std::vector<LatticeNode>* dump = nullptr);

// CRR-style diffusion calibration of one step for both legs:
//   U = e^{drift_s dt + sigma_s sqrt(dt)} - 1, D = e^{drift_s dt - sigma_s sqrt(dt)} - 1,
// and the same with (drift_z, sigma_z) for U~/D~.  The drift-free default is
// the plain mapping U = e^{sigma sqrt(dt)} - 1.
StepMoves diffusion_moves(double sigma_s, double sigma_z, double dt,
                          double drift_s = 0.0, double drift_z = 0.0);

} // namespace nobond
