#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "nobond/fourier.hpp"
#include "nobond/mc.hpp"

using namespace nobond;

namespace {

// Table-1 parameter sets used throughout.
const NigParams kNig{8.214, -1.235, 0.184, 0.0};
const VgParams kVg{0.12, 0.2, -0.14};
const CgmyParams kCgmy{1.128, 12.347, 14.562, 0.312};

SimSpec make_spec(LevyModel model, double kappa_s = 1.0, double kappa_z = 1.0,
                  double sigma_s = 0.0, double sigma_z = 0.0) {
    SimSpec spec;
    spec.model = std::move(model);
    spec.leg_s.spot = 100.0;
    spec.leg_s.sigma = sigma_s;
    spec.leg_s.kappa = kappa_s;
    spec.leg_z.spot = 80.0;
    spec.leg_z.sigma = sigma_z;
    spec.leg_z.kappa = kappa_z;
    spec.r_bar = 0.02;
    spec.t = 0.4375;
    spec.n_paths = 10000;
    spec.seed = 99;
    return spec;
}

RiskNeutralSetup setup_for_leg_s(const SimSpec& spec) {
    RiskNeutralSetup s;
    s.model = spec.model;
    s.leg = spec.leg_s;
    s.r_bar = spec.r_bar;
    s.t = spec.t;
    return s;
}

double sample_corr(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace

TEST_CASE("simulate_terminal: a fixed seed reproduces the sample bitwise") {
    SimSpec spec = make_spec(kNig, 1.0, 0.5, 0.15, 0.1);
    spec.rho = 0.6;
    spec.n_steps = 3;
    spec.n_paths = 2000;

    const TerminalSample a = simulate_terminal(spec);
    const TerminalSample b = simulate_terminal(spec);
    REQUIRE(a.s.size() == 2000);
    REQUIRE(a.z.size() == 2000);
    CHECK(a.s == b.s);
    CHECK(a.z == b.z);

    // A different seed must actually change the draws.
    spec.seed = 100;
    const TerminalSample c = simulate_terminal(spec);
    CHECK(a.s != c.s);
}

TEST_CASE("simulate_terminal: longer runs extend shorter ones path for path") {
    // Paths are generated in seeded blocks, so the first n paths of a larger
    // run coincide with a smaller run of the same spec.
    SimSpec spec = make_spec(kVg, 1.0, 1.0, 0.1, 0.2);
    spec.rho = 0.3;
    spec.n_paths = 1000;
    const TerminalSample small = simulate_terminal(spec);

    spec.n_paths = 1500;
    const TerminalSample big = simulate_terminal(spec);
    for (std::size_t i = 0; i < 1000; ++i) {
        REQUIRE(small.s[i] == big.s[i]);
        REQUIRE(small.z[i] == big.z[i]);
    }
}

TEST_CASE("simulate_terminal: kappa = 0 and sigma = 0 collapse to the forward") {
    SimSpec spec = make_spec(kNig, 0.0, 0.0, 0.0, 0.0);
    spec.leg_s.div_yield = 0.01;
    spec.n_paths = 64;

    const TerminalSample ts = simulate_terminal(spec);
    const double fwd_s = 100.0 * std::exp((0.02 - 0.01) * spec.t);
    const double fwd_z = 80.0 * std::exp(0.02 * spec.t);
    for (std::size_t i = 0; i < ts.s.size(); ++i) {
        CHECK(ts.s[i] == doctest::Approx(fwd_s).epsilon(1e-14));
        CHECK(ts.z[i] == doctest::Approx(fwd_z).epsilon(1e-14));
        CHECK(ts.s[i] == ts.s[0]);
    }
}

TEST_CASE("mc_price: constant payoff prices the discount factor exactly") {
    SimSpec spec = make_spec(kVg);
    spec.n_paths = 777;
    const McPrice mc = mc_price(spec, [](double, double) { return 1.0; });
    CHECK(mc.price == doctest::Approx(std::exp(-0.02 * spec.t)).epsilon(1e-15));
    CHECK(mc.std_error == 0.0);
}

TEST_CASE("mc_price: aggregation matches a hand fold of the same sample") {
    SimSpec spec = make_spec(kNig, 1.0, 1.0, 0.1, 0.05);
    spec.n_paths = 500;
    const auto payoff = [](double s, double z) { return std::max(s - z, 0.0); };

    const TerminalSample ts = simulate_terminal(spec);
    double sum = 0.0, sum_sq = 0.0, sum_s = 0.0;
    for (std::size_t i = 0; i < ts.s.size(); ++i) {
        const double h = payoff(ts.s[i], ts.z[i]);
        sum += h;
        sum_sq += h * h;
        sum_s += ts.s[i];
    }
    const double n = 500.0;
    const double mean = sum / n;
    const double var = (sum_sq - sum * mean) / (n - 1.0);
    const double disc = std::exp(-0.02 * spec.t);

    const McPrice mc = mc_price(spec, payoff);
    CHECK(mc.price == doctest::Approx(disc * mean).epsilon(1e-14));
    CHECK(mc.std_error == doctest::Approx(disc * std::sqrt(var / n)).epsilon(1e-12));
    CHECK(mc.forward_s == doctest::Approx(sum_s / n).epsilon(1e-14));
}

TEST_CASE("mc_price: sample forward stays within three standard errors") {
    SimSpec spec = make_spec(kNig, 1.0, 1.0, 0.1, 0.1);
    spec.leg_s.div_yield = 0.01;
    spec.n_paths = 200000;

    const McPrice mc = mc_price(spec, [](double s, double) { return s; });
    const double fwd = 100.0 * std::exp((0.02 - 0.01) * spec.t);
    // H = S_T makes the price identity exact and the forward a martingale
    // check: discounted mean of S_T ~ S0 e^{-delta T}.
    CHECK(mc.price ==
          doctest::Approx(std::exp(-0.02 * spec.t) * mc.forward_s).epsilon(1e-14));
    const double se_fwd = mc.std_error * std::exp(0.02 * spec.t);
    CHECK(std::abs(mc.forward_s - fwd) < 3.0 * se_fwd);
    CHECK(se_fwd < 0.05);
}

TEST_CASE("simulate_terminal: identical legs with rho = 1 move in lockstep") {
    SimSpec spec = make_spec(kNig, 0.7, 0.7, 0.2, 0.2);
    spec.leg_z = spec.leg_s;
    spec.rho = 1.0;
    spec.n_steps = 4;
    spec.n_paths = 5000;

    const TerminalSample ts = simulate_terminal(spec);
    for (std::size_t i = 0; i < ts.s.size(); ++i) {
        REQUIRE(ts.s[i] == ts.z[i]);
    }
}

TEST_CASE("simulate_terminal: jump parts are exactly proportional kappa_s:kappa_z") {
    // Pure-jump legs: the log-return net of drift is kappa * L for the shared
    // driver L, so the Z part is exactly half the S part here.
    SimSpec spec = make_spec(kNig, 1.0, 0.5, 0.0, 0.0);
    spec.n_steps = 2;
    spec.n_paths = 4000;

    const double lam_s = jump_compensator(spec.model, 1.0);
    const double lam_z = jump_compensator(spec.model, 0.5);
    const double drift_s = (0.02 - lam_s) * spec.t;
    const double drift_z = (0.02 - lam_z) * spec.t;

    const TerminalSample ts = simulate_terminal(spec);
    for (std::size_t i = 0; i < ts.s.size(); ++i) {
        const double l_s = std::log(ts.s[i] / 100.0) - drift_s;
        const double l_z = std::log(ts.z[i] / 80.0) - drift_z;
        REQUIRE(l_z == doctest::Approx(0.5 * l_s).epsilon(1e-10));
    }
}

TEST_CASE("simulate_terminal: diffusion correlation shows up in the sample") {
    SimSpec spec = make_spec(BsParams{0.2}, 0.0, 0.0, 0.25, 0.2);
    spec.n_paths = 100000;

    std::vector<double> ls(100000), lz(100000);
    for (double rho : {0.0, 0.6, 1.0}) {
        spec.rho = rho;
        const TerminalSample ts = simulate_terminal(spec);
        for (std::size_t i = 0; i < ts.s.size(); ++i) {
            ls[i] = std::log(ts.s[i]);
            lz[i] = std::log(ts.z[i]);
        }
        CHECK(std::abs(sample_corr(ls, lz) - rho) < 0.01);
    }
}

TEST_CASE("simulate_terminal: antithetic pairs mirror the diffusion exactly") {
    SimSpec spec = make_spec(kNig, 0.0, 0.0, 0.2, 0.0);
    spec.antithetic = true;
    spec.n_paths = 2000;

    const double drift = (0.02 - 0.5 * 0.2 * 0.2) * spec.t;
    const TerminalSample ts = simulate_terminal(spec);
    double sum = 0.0;
    for (std::size_t i = 0; i < ts.s.size(); i += 2) {
        const double a = std::log(ts.s[i] / 100.0) - drift;
        const double b = std::log(ts.s[i + 1] / 100.0) - drift;
        CHECK(a == doctest::Approx(-b).epsilon(1e-12));
        sum += a + b;
    }
    CHECK(std::abs(sum) < 1e-9);
}

TEST_CASE("mc_price: antithetic and plain runs agree within joint noise") {
    SimSpec spec = make_spec(kVg, 1.0, 1.0);
    spec.n_paths = 100000;
    const auto call = [](double s, double) { return std::max(s - 100.0, 0.0); };

    const McPrice plain = mc_price(spec, call);
    spec.antithetic = true;
    spec.seed = 1234;
    const McPrice anti = mc_price(spec, call);
    const double joint = std::hypot(plain.std_error, anti.std_error);
    CHECK(std::abs(plain.price - anti.price) < 3.0 * joint);
    CHECK(anti.std_error > 0.0);
}

TEST_CASE("mc_price: standard error shrinks like one over sqrt(n)") {
    SimSpec spec = make_spec(kNig);
    spec.n_paths = 4096;
    const auto call = [](double s, double) { return std::max(s - 100.0, 0.0); };
    const McPrice coarse = mc_price(spec, call);

    spec.n_paths = 4096 * 16;
    const McPrice fine = mc_price(spec, call);
    const double ratio = coarse.std_error / fine.std_error;
    CHECK(ratio > 2.8);
    CHECK(ratio < 5.2);
}

TEST_CASE("mc_price: NIG and VG agree with the COS pricer within three SE") {
    for (const LevyModel& model : {LevyModel(kNig), LevyModel(kVg)}) {
        SimSpec spec = make_spec(model);
        spec.n_paths = 200000;
        const RiskNeutralSetup setup = setup_for_leg_s(spec);
        for (double k : {90.0, 100.0, 110.0}) {
            const double ref = cos_price(setup, k, OptionKind::call);
            const McPrice mc = mc_price(
                spec, [k](double s, double) { return std::max(s - k, 0.0); });
            CHECK(std::abs(mc.price - ref) < 3.0 * mc.std_error + 1e-6);
        }
    }
}

TEST_CASE("mc_price: mixed diffusion and jump leg agrees with COS") {
    SimSpec spec = make_spec(kNig, 0.5, 0.5, 0.15, 0.15);
    spec.n_paths = 200000;
    const RiskNeutralSetup setup = setup_for_leg_s(spec);
    const double ref = cos_price(setup, 100.0, OptionKind::call);
    const McPrice mc = mc_price(
        spec, [](double s, double) { return std::max(s - 100.0, 0.0); });
    CHECK(std::abs(mc.price - ref) < 3.0 * mc.std_error + 1e-6);
}

TEST_CASE("simulate_terminal: NIG terminal law has the right mean and variance") {
    // With sigma = 0, kappa = 1, r_bar = delta = 0 and t = 1 the log return is
    // L_1 minus the compensator, so adding it back recovers the driver law.
    SimSpec spec = make_spec(kNig, 1.0, 1.0);
    spec.r_bar = 0.0;
    spec.t = 1.0;
    spec.n_paths = 400000;

    const double lam = jump_compensator(spec.model, 1.0);
    const TerminalSample ts = simulate_terminal(spec);
    double mean = 0.0;
    for (double s : ts.s) {
        mean += std::log(s / 100.0) + lam;
    }
    mean /= 400000.0;
    double var = 0.0;
    for (double s : ts.s) {
        const double x = std::log(s / 100.0) + lam - mean;
        var += x * x;
    }
    var /= 399999.0;

    CHECK(std::abs(mean - (-0.027983063433026905)) < 1.2e-3);
    CHECK(var == doctest::Approx(0.023182413558002104).epsilon(0.03));
}

TEST_CASE("simulate_terminal: VG terminal law has the right mean and variance") {
    SimSpec spec = make_spec(kVg, 1.0, 1.0);
    spec.r_bar = 0.0;
    spec.t = 1.0;
    spec.n_paths = 400000;

    const double lam = jump_compensator(spec.model, 1.0);
    const TerminalSample ts = simulate_terminal(spec);
    double mean = 0.0;
    for (double s : ts.s) {
        mean += std::log(s / 100.0) + lam;
    }
    mean /= 400000.0;
    double var = 0.0;
    for (double s : ts.s) {
        const double x = std::log(s / 100.0) + lam - mean;
        var += x * x;
    }
    var /= 399999.0;

    // E[L_1] = theta, Var[L_1] = sigma^2 + theta^2 nu for VG.
    CHECK(std::abs(mean - (-0.14)) < 1.5e-3);
    CHECK(var == doctest::Approx(0.2 * 0.2 + 0.14 * 0.14 * 0.12).epsilon(0.03));
}

TEST_CASE("mc_price: step count does not move the terminal distribution") {
    // Increments are sampled exactly, so 1 step and 12 steps target the same
    // law and any gap is pure Monte Carlo noise.
    for (const LevyModel& model : {LevyModel(kNig), LevyModel(kVg)}) {
        SimSpec spec = make_spec(model, 1.0, 1.0, 0.1, 0.1);
        spec.n_paths = 150000;
        const auto call = [](double s, double) { return std::max(s - 100.0, 0.0); };

        spec.n_steps = 1;
        const McPrice one = mc_price(spec, call);
        spec.n_steps = 12;
        spec.seed = 7;
        const McPrice many = mc_price(spec, call);
        const double joint = std::hypot(one.std_error, many.std_error);
        CHECK(std::abs(one.price - many.price) < 3.0 * joint);
    }
}

TEST_CASE("simulate_terminal: CGMY has no exact sampler and is rejected") {
    SimSpec spec = make_spec(kCgmy);
    CHECK_THROWS_AS(simulate_terminal(spec), ConfigError);
    CHECK_THROWS_AS(
        mc_price(spec, [](double s, double) { return s; }), ConfigError);
}

TEST_CASE("validate(SimSpec): configuration and input screens") {
    const SimSpec good = make_spec(kNig);
    CHECK_NOTHROW(validate(good));

    SimSpec spec = good;
    spec.n_steps = 0;
    CHECK_THROWS_AS(validate(spec), ConfigError);

    spec = good;
    spec.n_paths = 0;
    CHECK_THROWS_AS(validate(spec), ConfigError);

    spec = good;
    spec.antithetic = true;
    spec.n_paths = 10001;
    CHECK_THROWS_AS(validate(spec), ConfigError);
    spec.n_paths = 10002;
    CHECK_NOTHROW(validate(spec));

    spec = good;
    spec.rho = 1.0001;
    CHECK_THROWS_AS(validate(spec), NonFiniteInput);
    spec.rho = -1.0001;
    CHECK_THROWS_AS(validate(spec), NonFiniteInput);

    spec = good;
    spec.t = 0.0;
    CHECK_THROWS_AS(validate(spec), NonFiniteInput);

    spec = good;
    spec.r_bar = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate(spec), NonFiniteInput);

    spec = good;
    spec.leg_z.spot = -5.0;
    CHECK_THROWS_AS(validate(spec), NonFiniteInput);

    spec = good;
    spec.model = NigParams{1.0, 2.0, 0.2, 0.0};  // |beta| > alpha
    CHECK_THROWS_AS(validate(spec), InvalidModel);

    CHECK_THROWS_AS(mc_price(good, Payoff2{}), ConfigError);
}
