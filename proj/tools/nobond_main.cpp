// nobond: pricing, calibration, and diagnostics for the two-risky-asset
// shadow-rate market.  Subcommands: price | calibrate | shadow-rate | tree |
// simulate | verify-pde.  Exit codes: 0 success, 1 domain error, 2 usage.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nobond/calibration.hpp"
#include "nobond/closed_form.hpp"
#include "nobond/data_io.hpp"
#include "nobond/fourier.hpp"
#include "nobond/lattice.hpp"
#include "nobond/levy.hpp"
#include "nobond/mc.hpp"
#include "nobond/shadow_rate.hpp"

namespace {

using namespace nobond;

std::string g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(c));
    return s;
}

void print_warnings(const IngestReport& report) {
    for (const std::string& w : report.warnings) {
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    return out;
}

// ---------------------------------------------------------------------------
// price
// ---------------------------------------------------------------------------

struct PriceOpts {
    std::string params_path, model_kind, kind = "call", method = "cos";
    double spot = 100.0, strike = 100.0, maturity = 1.0, rate = 0.0;
    double div_yield = 0.0, sigma = 0.0, kappa = 1.0;
    FftConfig fft;
    CosConfig cos;
    std::string grid_out, out;
    std::int64_t paths = 100000;
    int steps = 1;
    std::uint64_t seed = 1;
    bool antithetic = false;
    int tree_steps = 1000;
    double tree_sigma_z = 0.0;  // 0: half the total S volatility
};

void run_price(const PriceOpts& o) {
    const LevyModel model = load_model(o.params_path);
    if (!o.model_kind.empty() &&
        lower(o.model_kind) != lower(model_name(model))) {
        throw ConfigError("--model " + o.model_kind + " does not match '" +
                          model_name(model) + "' in " + o.params_path);
    }
    const MarketLeg leg{o.spot, o.div_yield, o.sigma, o.kappa, "S"};
    const RiskNeutralSetup setup{model, leg, o.rate, o.maturity};
    const OptionKind kind =
        o.kind == "put" ? OptionKind::put : OptionKind::call;

    const LogPriceCf cf(setup);
    const double parity = cf.discount() * (cf.forward() - o.strike);

    nlohmann::json extra;
    double price = 0.0;
    if (o.method == "cos") {
        price = cos_price(setup, o.strike, kind, o.cos);
    } else if (o.method == "fft") {
        const double lk = std::log(o.strike), ls = std::log(o.spot);
        const PriceGrid grid = carr_madan_prices(
            setup, std::min(lk, ls) - 1.0, std::max(lk, ls) + 1.0, o.fft);
        price = grid_interpolate(grid, o.strike);
        if (kind == OptionKind::put) price -= parity;
        if (!o.grid_out.empty()) {
            write_price_grid_csv(o.grid_out, grid);
            std::printf("grid %s\n", o.grid_out.c_str());
        }
    } else if (o.method == "p1p2") {
        const P1P2Result r = p1_p2_price(setup, o.strike);
        price = kind == OptionKind::put ? r.price - parity : r.price;
        extra["p1"] = r.p1;
        extra["p2"] = r.p2;
        std::printf("p1 %s\np2 %s\n", g12(r.p1).c_str(), g12(r.p2).c_str());
    } else if (o.method == "mc") {
        SimSpec sim;
        sim.model = model;
        sim.leg_s = leg;
        sim.leg_z = leg;
        sim.r_bar = o.rate;
        sim.t = o.maturity;
        sim.n_steps = o.steps;
        sim.n_paths = o.paths;
        sim.seed = o.seed;
        sim.antithetic = o.antithetic;
        const double k = o.strike;
        const Payoff2 payoff =
            kind == OptionKind::call
                ? Payoff2([k](double s, double) { return std::max(s - k, 0.0); })
                : Payoff2([k](double s, double) { return std::max(k - s, 0.0); });
        const McPrice r = mc_price(sim, payoff);
        price = r.price;
        extra["std_error"] = r.std_error;
        std::printf("std_error %s\n", g12(r.std_error).c_str());
    } else {  // tree
        const auto* bs = std::get_if<BsParams>(&model);
        if (!bs) {
            throw ConfigError(
                "--method tree prices diffusion dynamics only (BS model)");
        }
        if (o.div_yield != 0.0) {
            throw ConfigError("--method tree assumes zero dividend yield");
        }
        const double sig_s = std::hypot(o.sigma, o.kappa * bs->sigma);
        const double sig_z =
            o.tree_sigma_z > 0.0 ? o.tree_sigma_z : 0.5 * sig_s;
        if (std::abs(sig_z - sig_s) < 1e-8) {
            throw DegenerateSpec(
                "tree auxiliary leg volatility must differ from the S leg");
        }
        const double dt = o.maturity / o.tree_steps;
        const StepMoves moves =
            diffusion_moves(sig_s, sig_z, dt, o.rate - 0.5 * sig_s * sig_s,
                            o.rate - 0.5 * sig_z * sig_z);
        LatticeSpec spec;
        spec.s0 = o.spot;
        spec.z0 = o.spot;
        spec.moves = {moves};
        spec.n_steps = o.tree_steps;
        const double k = o.strike;
        const Payoff2 payoff =
            kind == OptionKind::call
                ? Payoff2([k](double s, double) { return std::max(s - k, 0.0); })
                : Payoff2([k](double s, double) { return std::max(k - s, 0.0); });
        price = price_on_lattice(spec, payoff).price;
    }

    std::printf("price %s\n", g12(price).c_str());
    if (!o.out.empty()) {
        nlohmann::json j = extra;
        j["method"] = o.method;
        j["model"] = model_to_json(model);
        j["spot"] = o.spot;
        j["strike"] = o.strike;
        j["maturity"] = o.maturity;
        j["rate"] = o.rate;
        j["kind"] = o.kind;
        j["price"] = price;
        write_json(o.out, j);
    }
}

// ---------------------------------------------------------------------------
// calibrate
// ---------------------------------------------------------------------------

struct CalibrateOpts {
    std::string chain_path, pair_path, model_kind, as_of;
    std::string out = "calibration_result.json";
    double spot = 100.0;
    double div_yield_s = 0.0, div_yield_z = 0.0;
    double kappa_s = 1.0, kappa_z = 0.0;
    CalibrationConfig config;
};

int run_calibrate(const CalibrateOpts& o) {
    IngestReport chain_report, pair_report;
    const OptionChain chain =
        load_option_chain(o.chain_path, o.spot, o.as_of, &chain_report);
    const PairHistory history = load_pair_history(o.pair_path, &pair_report);
    print_warnings(chain_report);
    print_warnings(pair_report);

    MarketLeg leg_s{o.spot, o.div_yield_s, 0.0, o.kappa_s, "S"};
    MarketLeg leg_z{100.0, o.div_yield_z, 0.0, o.kappa_z, "Z"};
    const CalibrationResult result =
        calibrate(chain, history, leg_s, leg_z, o.model_kind, o.config);

    write_json(o.out, calibration_to_json(result));
    std::printf("model %s\n", model_to_json(result.model).dump().c_str());
    std::printf("r_bar %s\n", g12(result.r_bar).c_str());
    std::printf("rmse %s\n", g12(result.rmse).c_str());
    std::printf("rel_rmse %s\n", g12(result.rel_rmse).c_str());
    std::printf("outer_iterations %d\n", result.outer_iterations);
    std::printf("converged %s\n", result.converged ? "true" : "false");
    std::printf("result %s\n", o.out.c_str());
    if (!result.converged) {
        std::fprintf(stderr,
                     "error: shadow-rate iteration did not converge within %d "
                     "outer iterations\n",
                     o.config.max_outer);
        return 1;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// shadow-rate
// ---------------------------------------------------------------------------

struct ShadowOpts {
    // pointwise
    TwoAssetSpec spec;
    // series
    std::string pair_path, benchmark_path;
    std::string out = "shadow_series.csv";
    std::string gap_out = "benchmark_gap.csv";
    RollingConfig rolling;
};

void run_shadow(const ShadowOpts& o) {
    if (o.pair_path.empty()) {
        const ShadowRateParts parts = shadow_rate_parts(o.spec);
        std::printf("diffusion %s\n", g12(parts.diffusion).c_str());
        std::printf("jump_wedge %s\n", g12(parts.jump_wedge).c_str());
        std::printf("r_bar %s\n", g12(parts.r_bar).c_str());
        return;
    }
    IngestReport report;
    const PairHistory history = load_pair_history(o.pair_path, &report);
    print_warnings(report);
    const std::vector<ShadowRatePoint> series =
        rolling_shadow_series(history, o.rolling);
    write_shadow_series_csv(o.out, series);
    int degenerate = 0;
    for (const ShadowRatePoint& p : series) degenerate += p.degenerate ? 1 : 0;
    std::printf("points %zu\n", series.size());
    std::printf("degenerate %d\n", degenerate);
    std::printf("series %s\n", o.out.c_str());
    if (!o.benchmark_path.empty()) {
        IngestReport bench_report;
        const std::vector<DatedYield> yields =
            load_benchmark(o.benchmark_path, &bench_report);
        print_warnings(bench_report);
        const std::vector<BenchmarkGapPoint> gaps =
            benchmark_gap(series, yields);
        write_benchmark_gap_csv(o.gap_out, gaps);
        double mean_gap = 0.0;
        for (const BenchmarkGapPoint& p : gaps) mean_gap += p.gap;
        mean_gap /= static_cast<double>(gaps.size());
        std::printf("mean_gap %s\n", g12(mean_gap).c_str());
        std::printf("gap %s\n", o.gap_out.c_str());
    }
}

// ---------------------------------------------------------------------------
// tree
// ---------------------------------------------------------------------------

struct TreeOpts {
    double s0 = 100.0, z0 = 100.0;
    StepMoves moves;
    int steps = 1;
    int max_depth = 25;
    std::string payoff = "call_s";
    double strike = 100.0;
    std::string nodes_out;
};

void run_tree(const TreeOpts& o) {
    std::printf("R %s\n", g12(shadow_growth_factor(o.moves)).c_str());
    std::printf("q %s\n", g12(risk_neutral_prob(o.moves)).c_str());
    std::printf("discount %s\n", g12(one_period_discount(o.moves)).c_str());

    LatticeSpec spec;
    spec.s0 = o.s0;
    spec.z0 = o.z0;
    spec.moves = {o.moves};
    spec.n_steps = o.steps;
    spec.max_bushy_depth = o.max_depth;
    const double k = o.strike;
    Payoff2 payoff;
    if (o.payoff == "call_s") {
        payoff = [k](double s, double) { return std::max(s - k, 0.0); };
    } else if (o.payoff == "put_s") {
        payoff = [k](double s, double) { return std::max(k - s, 0.0); };
    } else if (o.payoff == "call_z") {
        payoff = [k](double, double z) { return std::max(z - k, 0.0); };
    } else {
        payoff = [k](double, double z) { return std::max(k - z, 0.0); };
    }
    std::vector<LatticeNode> nodes;
    const LatticeResult result = price_on_lattice(
        spec, payoff, o.nodes_out.empty() ? nullptr : &nodes);
    std::printf("price %s\n", g12(result.price).c_str());
    std::printf("max_ratio_gap %s\n", g12(result.max_ratio_gap).c_str());
    if (!o.nodes_out.empty()) {
        write_node_dump_csv(o.nodes_out, nodes);
        std::printf("nodes %s\n", o.nodes_out.c_str());
    }
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOpts {
    std::string params_path, model_kind, dump_path, kind = "call";
    SimSpec spec;
    double strike = 0.0;  // 0: no pricing, stats only
};

void run_simulate(const SimulateOpts& o) {
    SimSpec spec = o.spec;
    spec.model = load_model(o.params_path);
    if (!o.model_kind.empty() &&
        lower(o.model_kind) != lower(model_name(spec.model))) {
        throw ConfigError("--model " + o.model_kind + " does not match '" +
                          model_name(spec.model) + "' in " + o.params_path);
    }
    const TerminalSample sample = simulate_terminal(spec);
    double mean_s = 0.0, mean_z = 0.0;
    for (std::size_t i = 0; i < sample.s.size(); ++i) {
        mean_s += sample.s[i];
        mean_z += sample.z[i];
    }
    mean_s /= static_cast<double>(sample.s.size());
    mean_z /= static_cast<double>(sample.z.size());
    const double fwd_s = spec.leg_s.spot *
                         std::exp((spec.r_bar - spec.leg_s.div_yield) * spec.t);
    const double fwd_z = spec.leg_z.spot *
                         std::exp((spec.r_bar - spec.leg_z.div_yield) * spec.t);
    std::printf("paths %lld\n", static_cast<long long>(spec.n_paths));
    std::printf("mean_s %s\n", g12(mean_s).c_str());
    std::printf("mean_z %s\n", g12(mean_z).c_str());
    std::printf("forward_gap_s %s\n", g12(mean_s / fwd_s - 1.0).c_str());
    std::printf("forward_gap_z %s\n", g12(mean_z / fwd_z - 1.0).c_str());

    if (o.strike > 0.0) {
        const double k = o.strike;
        const Payoff2 payoff =
            o.kind == "put"
                ? Payoff2([k](double s, double) { return std::max(k - s, 0.0); })
                : Payoff2([k](double s, double) { return std::max(s - k, 0.0); });
        const McPrice price = mc_price(spec, payoff);
        std::printf("price %s\n", g12(price.price).c_str());
        std::printf("std_error %s\n", g12(price.std_error).c_str());
    }
    if (!o.dump_path.empty()) {
        std::ofstream out = open_out(o.dump_path);
        out << "s_t,z_t\n";
        for (std::size_t i = 0; i < sample.s.size(); ++i) {
            out << g12(sample.s[i]) << ',' << g12(sample.z[i]) << '\n';
        }
        std::printf("samples %s\n", o.dump_path.c_str());
    }
}

// ---------------------------------------------------------------------------
// verify-pde
// ---------------------------------------------------------------------------

struct PdeOpts {
    double eta = 0.5, strike = 100.0, rate = 0.02, sigma = 0.2, expiry = 1.0;
    double s_low = 80.0, s_high = 120.0;
    double z_low = 80.0, z_high = 120.0;
    int s_n = 5, z_n = 5;
    std::vector<double> t_values = {0.0, 0.25, 0.5};
    double h = 1e-4;
    std::string out = "pde_residuals.csv";
};

void run_verify_pde(const PdeOpts& o) {
    if (o.s_n < 1 || o.z_n < 1 || o.t_values.empty()) {
        throw ConfigError("grid needs at least one point per axis");
    }
    std::ofstream out = open_out(o.out);
    out << "s,z,t,residual\n";
    double worst = 0.0;
    for (int i = 0; i < o.s_n; ++i) {
        const double s =
            o.s_n == 1 ? o.s_low
                       : o.s_low + (o.s_high - o.s_low) * i / (o.s_n - 1);
        for (int j = 0; j < o.z_n; ++j) {
            const double z =
                o.z_n == 1 ? o.z_low
                           : o.z_low + (o.z_high - o.z_low) * j / (o.z_n - 1);
            for (double t : o.t_values) {
                LrPdePoint p;
                p.s = s;
                p.z = z;
                p.eta = o.eta;
                p.strike = o.strike;
                p.t = t;
                p.expiry = o.expiry;
                const double resid =
                    pde_residual(p, o.rate, o.sigma, o.h, 0.1 * o.h);
                worst = std::max(worst, std::abs(resid));
                char buf[128];
                std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g\n", s,
                              z, t, resid);
                out << buf;
            }
        }
    }
    std::printf("max_abs_residual %s\n", g12(worst).c_str());
    std::printf("residuals %s\n", o.out.c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Pricing and calibration for European options in a two-risky-asset "
        "market with no traded riskless bond"};
    app.require_subcommand(1);
    int exit_code = 0;

    // --- price ---
    PriceOpts price;
    CLI::App* p = app.add_subcommand(
        "price", "Price one European option on the S leg");
    p->add_option("--params", price.params_path,
                  "model JSON {\"model\": \"NIG\", ...}")
        ->required();
    p->add_option("--model", price.model_kind,
                  "expected model kind (cross-checked against --params)");
    p->add_option("--spot", price.spot, "spot of the S leg");
    p->add_option("--strike", price.strike, "strike")->required();
    p->add_option("--maturity", price.maturity, "maturity in years")
        ->required();
    p->add_option("--rate", price.rate, "shadow riskless rate");
    p->add_option("--div-yield", price.div_yield, "continuous dividend yield");
    p->add_option("--sigma", price.sigma, "leg diffusion volatility");
    p->add_option("--kappa", price.kappa, "leg jump loading (default 1)");
    p->add_option("--kind", price.kind, "call | put")
        ->check(CLI::IsMember({"call", "put"}));
    p->add_option("--method", price.method, "pricer (default cos)")
        ->check(CLI::IsMember({"fft", "cos", "p1p2", "mc", "tree"}));
    p->add_option("--fft-alpha", price.fft.alpha, "Carr-Madan damping");
    p->add_option("--fft-n", price.fft.n_points, "FFT size (power of two)");
    p->add_option("--fft-eta", price.fft.eta, "FFT frequency spacing");
    p->add_option("--grid-out", price.grid_out,
                  "write the FFT price grid CSV here");
    p->add_option("--cos-n", price.cos.n_terms, "COS series terms");
    p->add_option("--cos-l", price.cos.trunc_width, "COS truncation width L");
    p->add_option("--paths", price.paths, "MC paths");
    p->add_option("--steps", price.steps, "MC time steps");
    p->add_option("--seed", price.seed, "MC seed");
    p->add_flag("--antithetic", price.antithetic, "MC antithetic pairs");
    p->add_option("--tree-steps", price.tree_steps, "lattice steps");
    p->add_option("--tree-sigma-z", price.tree_sigma_z,
                  "auxiliary leg volatility for --method tree");
    p->add_option("--out", price.out, "write a result JSON here");
    p->callback([&price] { run_price(price); });

    // --- calibrate ---
    CalibrateOpts cal;
    CLI::App* c = app.add_subcommand(
        "calibrate", "Fit a model and the shadow rate to an option chain");
    c->add_option("--chain", cal.chain_path,
                  "option chain CSV (strike,maturity_years,kind,mid)")
        ->required();
    c->add_option("--pair", cal.pair_path,
                  "paired history CSV (date,price_s,price_z)")
        ->required();
    c->add_option("--model", cal.model_kind, "bs | nig | cgmy | vg")
        ->required();
    c->add_option("--spot", cal.spot, "spot of the optioned S leg");
    c->add_option("--as-of", cal.as_of, "chain valuation date");
    c->add_option("--seed-rate", cal.config.seed_rate,
                  "benchmark seed for the shadow rate");
    c->add_option("--eps", cal.config.eps, "|r_bar step| stopping threshold");
    c->add_option("--max-outer", cal.config.max_outer, "outer iteration cap");
    c->add_option("--nm-iters", cal.config.nm_max_iter,
                  "Nelder-Mead iterations per start");
    c->add_option("--starts", cal.config.n_starts, "multi-start count");
    c->add_option("--seed", cal.config.seed, "jitter seed");
    c->add_option("--cos-n", cal.config.cos.n_terms, "COS series terms");
    c->add_option("--div-yield-s", cal.div_yield_s, "S dividend yield");
    c->add_option("--div-yield-z", cal.div_yield_z, "Z dividend yield");
    c->add_option("--kappa-s", cal.kappa_s, "S jump loading (default 1)");
    c->add_option("--kappa-z", cal.kappa_z, "Z jump loading (default 0)");
    c->add_flag("!--no-two-step", cal.config.cgmy_two_step,
                "disable the two-stage CGMY fit");
    c->add_option("--out", cal.out, "result JSON path");
    c->callback([&cal, &exit_code] { exit_code = run_calibrate(cal); });

    // --- shadow-rate ---
    ShadowOpts sh;
    CLI::App* s = app.add_subcommand(
        "shadow-rate",
        "Shadow rate pointwise (flags) or as a rolling series (--pair)");
    s->add_option("--mu-s", sh.spec.mu_s, "S arithmetic drift");
    s->add_option("--mu-z", sh.spec.mu_z, "Z arithmetic drift");
    s->add_option("--sigma-s", sh.spec.sigma_s, "S diffusion volatility");
    s->add_option("--sigma-z", sh.spec.sigma_z, "Z diffusion volatility");
    s->add_option("--kappa-s", sh.spec.kappa_s, "S jump loading");
    s->add_option("--kappa-z", sh.spec.kappa_z, "Z jump loading");
    s->add_option("--lambda", sh.spec.lambda, "jump intensity");
    s->add_option("--pair", sh.pair_path,
                  "paired history CSV; switches to rolling-series mode");
    s->add_option("--window", sh.rolling.window, "rolling window (returns)");
    s->add_option("--jump-threshold", sh.rolling.jump_threshold,
                  "jump day threshold in daily sigmas");
    s->add_option("--benchmark", sh.benchmark_path,
                  "benchmark yield CSV (date,yield)");
    s->add_option("--out", sh.out, "series CSV path");
    s->add_option("--gap-out", sh.gap_out, "benchmark gap CSV path");
    s->callback([&sh] { run_shadow(sh); });

    // --- tree ---
    TreeOpts tree;
    CLI::App* t = app.add_subcommand(
        "tree", "Jump-binomial lattice diagnostics and pricing");
    t->add_option("--s0", tree.s0, "S spot");
    t->add_option("--z0", tree.z0, "Z spot");
    t->add_option("--u", tree.moves.u, "S up move")->required();
    t->add_option("--d", tree.moves.d, "S down move")->required();
    t->add_option("--u-tilde", tree.moves.u_tilde, "Z up move")->required();
    t->add_option("--d-tilde", tree.moves.d_tilde, "Z down move")->required();
    t->add_option("--steps", tree.steps, "lattice steps");
    t->add_option("--max-depth", tree.max_depth, "bushy depth cap");
    t->add_option("--payoff", tree.payoff, "terminal payoff")
        ->check(CLI::IsMember({"call_s", "put_s", "call_z", "put_z"}));
    t->add_option("--strike", tree.strike, "payoff strike");
    t->add_option("--nodes-out", tree.nodes_out, "node dump CSV path");
    t->callback([&tree] { run_tree(tree); });

    // --- simulate ---
    SimulateOpts sim;
    CLI::App* m = app.add_subcommand(
        "simulate", "Terminal Monte Carlo of both legs under the common jump");
    m->add_option("--params", sim.params_path, "model JSON")->required();
    m->add_option("--model", sim.model_kind, "expected model kind");
    m->add_option("--spot", sim.spec.leg_s.spot, "S spot");
    m->add_option("--div-yield", sim.spec.leg_s.div_yield, "S dividend yield");
    m->add_option("--sigma", sim.spec.leg_s.sigma, "S diffusion volatility");
    m->add_option("--kappa", sim.spec.leg_s.kappa, "S jump loading");
    m->add_option("--spot-z", sim.spec.leg_z.spot, "Z spot");
    m->add_option("--div-yield-z", sim.spec.leg_z.div_yield,
                  "Z dividend yield");
    m->add_option("--sigma-z", sim.spec.leg_z.sigma, "Z diffusion volatility");
    m->add_option("--kappa-z", sim.spec.leg_z.kappa, "Z jump loading");
    m->add_option("--rho", sim.spec.rho, "diffusion correlation");
    m->add_option("--rate", sim.spec.r_bar, "shadow riskless rate");
    m->add_option("--maturity", sim.spec.t, "horizon in years");
    m->add_option("--paths", sim.spec.n_paths, "paths");
    m->add_option("--steps", sim.spec.n_steps, "time steps");
    m->add_option("--seed", sim.spec.seed, "seed");
    m->add_flag("--antithetic", sim.spec.antithetic, "antithetic pairs");
    m->add_option("--strike", sim.strike,
                  "also price a call/put on S at this strike");
    m->add_option("--kind", sim.kind, "call | put")
        ->check(CLI::IsMember({"call", "put"}));
    m->add_option("--dump", sim.dump_path, "terminal sample CSV (s_t,z_t)");
    m->callback([&sim] { run_simulate(sim); });

    // --- verify-pde ---
    PdeOpts pde;
    CLI::App* v = app.add_subcommand(
        "verify-pde",
        "Closed-form residual of the pricing PDE over an (S, Z, t) grid");
    v->add_option("--eta", pde.eta, "portfolio weight on S");
    v->add_option("--strike", pde.strike, "strike");
    v->add_option("--rate", pde.rate, "riskless rate in the reduction");
    v->add_option("--sigma", pde.sigma, "common volatility");
    v->add_option("--expiry", pde.expiry, "expiry T");
    v->add_option("--s-low", pde.s_low, "S grid low");
    v->add_option("--s-high", pde.s_high, "S grid high");
    v->add_option("--s-n", pde.s_n, "S grid points");
    v->add_option("--z-low", pde.z_low, "Z grid low");
    v->add_option("--z-high", pde.z_high, "Z grid high");
    v->add_option("--z-n", pde.z_n, "Z grid points");
    v->add_option("--t-values", pde.t_values, "valuation times")
        ->delimiter(',');
    v->add_option("--step", pde.h, "relative FD step");
    v->add_option("--out", pde.out, "residual table CSV path");
    v->callback([&pde] { run_verify_pde(pde); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
    return exit_code;
}
