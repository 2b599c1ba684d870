#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "nobond/levy.hpp"

using namespace nobond;

namespace {

// Table-1 parameter sets used throughout.
const NigParams kNig{8.214, -1.235, 0.184, 0.0};
const CgmyParams kCgmy{1.128, 12.347, 14.562, 0.312};
const VgParams kVg{0.12, 0.2, -0.14};
const BsParams kBs{0.1579};

MarketLeg leg(double spot, double div_yield, double sigma, double kappa) {
    return MarketLeg{spot, div_yield, sigma, kappa, ""};
}

} // namespace

TEST_CASE("char_exponent: psi(0) == 0 for every model") {
    for (const LevyModel model :
         {LevyModel{kBs}, LevyModel{kNig}, LevyModel{kCgmy}, LevyModel{kVg}}) {
        const cdouble v = char_exponent(model, cdouble(0.0, 0.0));
        CHECK(std::abs(v) == 0.0);
    }
}

TEST_CASE("char_exponent: BS is the exact Brownian quadratic") {
    const LevyModel model = kBs;
    for (double u : {0.3, 1.0, 4.2}) {
        const cdouble v = char_exponent(model, cdouble(u, 0.0));
        CHECK(v.real() ==
              doctest::Approx(-0.5 * kBs.sigma * kBs.sigma * u * u)
                  .epsilon(1e-15));
        CHECK(v.imag() == 0.0);
    }
}

TEST_CASE("char_exponent: NIG at u=1 matches the high-precision value") {
    // delta (sqrt(alpha^2 - beta^2) - sqrt(alpha^2 - (beta + i)^2)) evaluated
    // with 50-digit arithmetic for alpha=8.214, beta=-1.235, delta=0.184.
    const cdouble v = char_exponent(LevyModel{kNig}, cdouble(1.0, 0.0));
    CHECK(v.real() == doctest::Approx(-0.01154262160535149634264).epsilon(1e-13));
    CHECK(v.imag() == doctest::Approx(-0.02776855204814436544038).epsilon(1e-13));
}

TEST_CASE("char_exponent: symmetric NIG is purely real on the real axis") {
    const NigParams sym{5.0, 0.0, 0.7, 0.0};
    for (double u : {0.25, 1.0, 3.0}) {
        const cdouble v = char_exponent(LevyModel{sym}, cdouble(u, 0.0));
        const double expected =
            sym.delta * (sym.alpha - std::sqrt(sym.alpha * sym.alpha + u * u));
        CHECK(v.imag() == 0.0);
        CHECK(v.real() == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("char_exponent: CGMY at u=1 matches the high-precision value") {
    // C Gamma(-Y) [(M-i)^Y - M^Y + (G+i)^Y - G^Y] at the Table-1 parameters.
    const cdouble v = char_exponent(LevyModel{kCgmy}, cdouble(1.0, 0.0));
    CHECK(v.real() == doctest::Approx(-0.01287820120508248847488).epsilon(1e-13));
    CHECK(v.imag() == doctest::Approx(-0.02817609054976784140754).epsilon(1e-13));
}

TEST_CASE("char_exponent: VG at u=1 matches the high-precision value") {
    const cdouble v = char_exponent(LevyModel{kVg}, cdouble(1.0, 0.0));
    CHECK(v.real() == doctest::Approx(-0.009148424828198234330016).epsilon(1e-13));
    CHECK(v.imag() == doctest::Approx(-0.1397622778976415787673).epsilon(1e-13));
}

TEST_CASE("char_exponent: analyticity strip is enforced") {
    // NIG strip: |beta - Im(u)| < alpha -> Im(u) in (-9.449, 6.979).
    CHECK_THROWS_AS(char_exponent(LevyModel{kNig}, cdouble(0.0, 7.5)),
                    DomainError);
    CHECK_THROWS_AS(char_exponent(LevyModel{kNig}, cdouble(0.0, -9.6)),
                    DomainError);
    CHECK_NOTHROW(char_exponent(LevyModel{kNig}, cdouble(2.0, 6.5)));

    // CGMY strip: -M < Im(u) < G.
    CHECK_THROWS_AS(char_exponent(LevyModel{kCgmy}, cdouble(0.0, 12.5)),
                    DomainError);
    CHECK_THROWS_AS(char_exponent(LevyModel{kCgmy}, cdouble(0.0, -14.6)),
                    DomainError);
    CHECK_NOTHROW(char_exponent(LevyModel{kCgmy}, cdouble(1.0, -14.0)));

    // VG: the subordinator quadratic must stay positive.
    CHECK_THROWS_AS(char_exponent(LevyModel{kVg}, cdouble(0.0, -40.0)),
                    DomainError);

    // The real axis is always admitted.
    for (const LevyModel model :
         {LevyModel{kBs}, LevyModel{kNig}, LevyModel{kCgmy}, LevyModel{kVg}}) {
        CHECK(in_strip(model, 0.0));
    }
}

TEST_CASE("validate: parameter domains are enforced") {
    CHECK_THROWS_AS(validate(LevyModel{NigParams{1.0, 1.0, 0.5, 0.0}}),
                    InvalidModel);  // |beta| == alpha
    CHECK_THROWS_AS(validate(LevyModel{NigParams{-1.0, 0.0, 0.5, 0.0}}),
                    InvalidModel);
    CHECK_THROWS_AS(validate(LevyModel{NigParams{2.0, 0.0, 0.0, 0.0}}),
                    InvalidModel);  // delta == 0
    CHECK_THROWS_AS(validate(LevyModel{CgmyParams{1.0, 5.0, 5.0, 0.0}}),
                    InvalidModel);  // Gamma(-Y) pole at Y=0
    CHECK_THROWS_AS(validate(LevyModel{CgmyParams{1.0, 5.0, 5.0, 1.0}}),
                    InvalidModel);  // pole at Y=1
    CHECK_THROWS_AS(validate(LevyModel{CgmyParams{1.0, 5.0, 5.0, 2.0}}),
                    InvalidModel);  // Y must stay below 2
    CHECK_THROWS_AS(validate(LevyModel{CgmyParams{0.0, 5.0, 5.0, 0.5}}),
                    InvalidModel);  // C must be positive
    CHECK_THROWS_AS(validate(LevyModel{VgParams{0.0, 0.2, 0.0}}), InvalidModel);
    CHECK_THROWS_AS(validate(LevyModel{VgParams{0.2, 0.0, 0.0}}), InvalidModel);
    CHECK_THROWS_AS(validate(LevyModel{BsParams{-0.1}}), InvalidModel);
    CHECK_NOTHROW(validate(LevyModel{BsParams{0.0}}));  // sigma >= 0 is legal
}

TEST_CASE("jump_compensator: kappa=0 gives exactly zero") {
    for (const LevyModel model :
         {LevyModel{kBs}, LevyModel{kNig}, LevyModel{kCgmy}, LevyModel{kVg}}) {
        CHECK(jump_compensator(model, 0.0) == 0.0);
    }
}

TEST_CASE("jump_compensator: frozen high-precision values at kappa=1") {
    CHECK(jump_compensator(LevyModel{kNig}, 1.0) ==
          doctest::Approx(-0.01656209837515659669278).epsilon(1e-13));
    CHECK(jump_compensator(LevyModel{kCgmy}, 1.0) ==
          doctest::Approx(-0.01548147289584409709062).epsilon(1e-13));
    CHECK(jump_compensator(LevyModel{kVg}, 1.0) ==
          doctest::Approx(-0.1310670340795162054929).epsilon(1e-13));
    // BS carries its sigma as a Brownian exponent: Lambda = sigma^2 kappa^2/2.
    CHECK(jump_compensator(LevyModel{kBs}, 2.0) ==
          doctest::Approx(2.0 * kBs.sigma * kBs.sigma).epsilon(1e-14));
}

TEST_CASE("jump_compensator: agrees with char_exponent at u = -i kappa") {
    for (const LevyModel model :
         {LevyModel{kNig}, LevyModel{kCgmy}, LevyModel{kVg}}) {
        for (double kappa : {-0.8, 0.3, 1.0}) {
            const cdouble via_psi = char_exponent(model, cdouble(0.0, -kappa));
            const double lambda = jump_compensator(model, kappa);
            CHECK(via_psi.imag() == doctest::Approx(0.0).epsilon(1e-14));
            CHECK(lambda == doctest::Approx(via_psi.real()).epsilon(1e-13));
        }
    }
}

TEST_CASE("jump_compensator: moment explosions at the tempering boundaries") {
    CHECK_THROWS_AS(jump_compensator(LevyModel{kCgmy}, kCgmy.m),
                    MomentExplosion);
    CHECK_THROWS_AS(jump_compensator(LevyModel{kCgmy}, -kCgmy.g),
                    MomentExplosion);
    CHECK_THROWS_AS(jump_compensator(LevyModel{kCgmy}, 20.0), MomentExplosion);
    // NIG: |beta + kappa| >= alpha.
    CHECK_THROWS_AS(jump_compensator(LevyModel{kNig}, 9.5), MomentExplosion);
    CHECK_THROWS_AS(jump_compensator(LevyModel{kNig}, -7.0), MomentExplosion);
    // VG: quadratic root crossed.
    CHECK_THROWS_AS(jump_compensator(LevyModel{kVg}, 40.0), MomentExplosion);
    CHECK_NOTHROW(jump_compensator(LevyModel{kCgmy}, 14.5));
}

TEST_CASE("rn_log_price_cf: normalization, parity, and boundedness") {
    const RiskNeutralSetup setup{LevyModel{kNig}, leg(100.0, 0.01, 0.1, 1.0),
                                 0.02, 0.4375};
    CHECK(std::abs(rn_log_price_cf(setup, cdouble(0.0, 0.0)) - 1.0) < 1e-15);
    for (double u : {0.4, 1.7, 6.0}) {
        const cdouble plus = rn_log_price_cf(setup, cdouble(u, 0.0));
        const cdouble minus = rn_log_price_cf(setup, cdouble(-u, 0.0));
        CHECK(std::abs(plus - std::conj(minus)) < 1e-14);
        CHECK(std::abs(plus) <= 1.0 + 1e-12);
    }
}

TEST_CASE("rn_log_price_cf: martingale identity for the Table-1 BS setup") {
    const RiskNeutralSetup setup{LevyModel{kBs}, leg(100.0, 0.0, 0.0, 1.0),
                                 0.02, 0.4375};
    const cdouble v = rn_log_price_cf(setup, cdouble(0.0, -1.0));
    const double forward = 100.0 * std::exp(0.02 * 0.4375);
    CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(v.real() == doctest::Approx(forward).epsilon(1e-13));
}

TEST_CASE("rn_log_price_cf: martingale identity over random draws") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto pick = [&](double lo, double hi) { return lo + (hi - lo) * uni(rng); };

    for (int i = 0; i < 25; ++i) {
        std::vector<LevyModel> models;
        models.push_back(BsParams{pick(0.05, 0.6)});
        {
            const double alpha = pick(1.0, 15.0);
            models.push_back(NigParams{alpha, 0.8 * alpha * (2 * uni(rng) - 1),
                                       pick(0.05, 1.0), pick(-0.2, 0.2)});
        }
        {
            double y = pick(0.05, 1.8);
            if (std::abs(y - 1.0) < 0.05) y = 1.2;
            models.push_back(
                CgmyParams{pick(0.1, 3.0), pick(2.0, 20.0), pick(2.0, 20.0), y});
        }
        models.push_back(
            VgParams{pick(0.05, 0.6), pick(0.05, 1.0), pick(-0.5, 0.5)});

        for (const LevyModel& model : models) {
            MarketLeg l = leg(pick(50.0, 150.0), pick(0.0, 0.05),
                              pick(0.0, 0.4), 0.0);
            // keep the jump loading safely inside every strip
            double cap = 1.0;
            if (const auto* nig = std::get_if<NigParams>(&model)) {
                cap = 0.5 * (nig->alpha - std::abs(nig->beta));
            }
            l.kappa = std::min(1.0, cap) * (2 * uni(rng) - 1);
            const RiskNeutralSetup setup{model, l, pick(-0.02, 0.08),
                                         pick(0.1, 2.0)};
            const cdouble v = rn_log_price_cf(setup, cdouble(0.0, -1.0));
            const double forward =
                l.spot * std::exp((setup.r_bar - l.div_yield) * setup.t);
            CHECK(std::abs(v - cdouble(forward, 0.0)) / forward < 1e-10);
        }
    }
}

TEST_CASE("rn_log_price_cf: NIG exponent assembles drift and jump terms") {
    // sigma = 0, kappa = 1: log phi(u) = iu[ln S0 + (r - Lambda)T] + T psi(u).
    const MarketLeg l = leg(100.0, 0.0, 0.0, 1.0);
    const RiskNeutralSetup setup{LevyModel{kNig}, l, 0.02, 0.4375};
    const LogPriceCf cf(setup);
    const cdouble u(1.0, 0.0);
    const double lambda = jump_compensator(LevyModel{kNig}, 1.0);
    const cdouble expected =
        cdouble(0.0, 1.0) * (std::log(100.0) + (0.02 - lambda) * 0.4375) +
        0.4375 * char_exponent(LevyModel{kNig}, u);
    CHECK(std::abs(cf.exponent(u) - expected) < 1e-13);
    CHECK(std::abs(cf(u) - std::exp(expected)) < 1e-13);
}

TEST_CASE("LogPriceCf: forward and discount are closed-form") {
    const RiskNeutralSetup setup{LevyModel{kVg}, leg(80.0, 0.015, 0.2, 0.7),
                                 0.03, 1.25};
    const LogPriceCf cf(setup);
    CHECK(cf.forward() ==
          doctest::Approx(80.0 * std::exp((0.03 - 0.015) * 1.25))
              .epsilon(1e-14));
    CHECK(cf.discount() == doctest::Approx(std::exp(-0.03 * 1.25)).epsilon(1e-14));
}

TEST_CASE("moment consistency: finite differences of the NIG exponent") {
    // First/second cumulants of L_1 from the compensator CGF vs the analytic
    // NIG moments: mean = delta beta / sqrt(alpha^2 - beta^2),
    // variance = delta alpha^2 / (alpha^2 - beta^2)^{3/2}.
    const LevyModel model = kNig;
    const double h = 1e-3;
    const double lp = jump_compensator(model, h);
    const double lm = jump_compensator(model, -h);
    const double mean_fd = (lp - lm) / (2.0 * h);
    const double var_fd = (lp + lm) / (h * h);
    CHECK(mean_fd ==
          doctest::Approx(-0.02798306343302690527393).epsilon(1e-6));
    CHECK(var_fd == doctest::Approx(0.02318241355800210387847).epsilon(1e-6));
}

TEST_CASE("joint_cf: normalization and marginalization") {
    const MarketLeg ls = leg(100.0, 0.0, 0.25, 1.0);
    const MarketLeg lz = leg(90.0, 0.01, 0.15, 0.4);
    const LevyModel model = kNig;
    const double rho = 0.6, r = 0.02, t = 0.75;

    CHECK(std::abs(joint_cf(model, ls, lz, rho, r, t, cdouble(0, 0),
                            cdouble(0, 0)) -
                   1.0) < 1e-15);

    // u2 = 0 recovers the marginal CF of leg S exactly.
    const RiskNeutralSetup ss{model, ls, r, t};
    const RiskNeutralSetup sz{model, lz, r, t};
    for (double u : {0.5, 1.0, 2.5}) {
        const cdouble joint_s =
            joint_cf(model, ls, lz, rho, r, t, cdouble(u, 0), cdouble(0, 0));
        CHECK(std::abs(joint_s - rn_log_price_cf(ss, cdouble(u, 0))) < 1e-13);
        const cdouble joint_z =
            joint_cf(model, ls, lz, rho, r, t, cdouble(0, 0), cdouble(u, 0));
        CHECK(std::abs(joint_z - rn_log_price_cf(sz, cdouble(u, 0))) < 1e-13);
    }
}

TEST_CASE("joint_cf: the jump term rides the combined frequency") {
    // kappa_S = kappa_Z = 1, u1 = u2 = 1, all diffusion off: the jump part of
    // the joint exponent is T psi(2), the single driver at frequency 2.
    MarketLeg ls = leg(100.0, 0.0, 0.0, 1.0);
    MarketLeg lz = leg(100.0, 0.0, 0.0, 1.0);
    const LevyModel model = kNig;
    const double t = 1.0;
    const cdouble joint =
        joint_cf(model, ls, lz, 1.0, 0.0, t, cdouble(1, 0), cdouble(1, 0));
    const double lambda = jump_compensator(model, 1.0);
    const cdouble expected =
        std::exp(cdouble(0.0, 2.0) * (std::log(100.0) - lambda * t) +
                 t * char_exponent(model, cdouble(2.0, 0.0)));
    CHECK(std::abs(joint - expected) < 1e-13);
}

TEST_CASE("cgmy_from_vg: the standard parameter map") {
    const CgmyParams c = cgmy_from_vg(kVg, 0.01);
    CHECK(c.c == doctest::Approx(1.0 / kVg.nu).epsilon(1e-15));
    const double root = std::sqrt(kVg.theta * kVg.theta /
                                      (kVg.sigma * kVg.sigma * kVg.sigma *
                                       kVg.sigma) +
                                  2.0 / (kVg.nu * kVg.sigma * kVg.sigma));
    CHECK(c.g == doctest::Approx(root + kVg.theta / (kVg.sigma * kVg.sigma))
                     .epsilon(1e-14));
    CHECK(c.m == doctest::Approx(root - kVg.theta / (kVg.sigma * kVg.sigma))
                     .epsilon(1e-14));
    CHECK(c.y == 0.01);
}

TEST_CASE("vg_limit_check: deviation halves with Y") {
    // 50-digit reference deviations at u=1: 3.99146e-3 (Y=1e-2) and
    // 1.98049e-3 (Y=5e-3); the ratio is 2.0154.
    for (double u : {0.5, 1.0, 2.0}) {
        const double dev_hi =
            vg_limit_check(cgmy_from_vg(kVg, 1e-2), kVg, cdouble(u, 0.0));
        const double dev_lo =
            vg_limit_check(cgmy_from_vg(kVg, 5e-3), kVg, cdouble(u, 0.0));
        CHECK(dev_hi > 0.0);
        CHECK(dev_hi / dev_lo == doctest::Approx(2.0).epsilon(0.1));
    }
    const double at_one =
        vg_limit_check(cgmy_from_vg(kVg, 1e-2), kVg, cdouble(1.0, 0.0));
    CHECK(at_one == doctest::Approx(0.003991455900697687).epsilon(1e-9));
    CHECK(vg_limit_check(cgmy_from_vg(kVg, 1e-2), kVg, cdouble(0.0, 0.0)) ==
          doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("model_name reports the variant") {
    CHECK(model_name(LevyModel{kBs}) == "BS");
    CHECK(model_name(LevyModel{kNig}) == "NIG");
    CHECK(model_name(LevyModel{kCgmy}) == "CGMY");
    CHECK(model_name(LevyModel{kVg}) == "VG");
}
