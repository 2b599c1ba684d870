// Python bindings for the nobond library: model construction, pricing,
// shadow-rate computation, simulation, and calibration.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nobond/calibration.hpp"
#include "nobond/closed_form.hpp"
#include "nobond/data_io.hpp"
#include "nobond/fourier.hpp"
#include "nobond/lattice.hpp"
#include "nobond/levy.hpp"
#include "nobond/mc.hpp"
#include "nobond/shadow_rate.hpp"

namespace py = pybind11;
using namespace nobond;
using namespace pybind11::literals;

namespace {

LevyModel checked(LevyModel model) {
    validate(model);
    return model;
}

RiskNeutralSetup make_setup(const LevyModel& model, double spot, double rate,
                            double maturity, double div_yield, double sigma,
                            double kappa) {
    return RiskNeutralSetup{
        model, MarketLeg{spot, div_yield, sigma, kappa, "S"}, rate, maturity};
}

OptionKind parse_kind(const std::string& kind) {
    if (kind == "call") return OptionKind::call;
    if (kind == "put") return OptionKind::put;
    throw ConfigError("kind must be 'call' or 'put', got '" + kind + "'");
}

Payoff2 vanilla_payoff(OptionKind kind, double strike) {
    if (kind == OptionKind::call) {
        return [strike](double s, double) { return std::max(s - strike, 0.0); };
    }
    return [strike](double s, double) { return std::max(strike - s, 0.0); };
}

// LevyModel itself crosses the boundary through pybind11's std::variant
// caster, so each alternative is bound as its own class with the shared
// model surface.
template <typename Params>
void bind_params(py::module_& m, const char* pyname) {
    py::class_<Params>(m, pyname)
        .def_property_readonly(
            "name", [](const Params& p) { return model_name(LevyModel{p}); })
        .def("to_json",
             [](const Params& p) { return model_to_json(LevyModel{p}).dump(); })
        .def("__repr__", [](const Params& p) {
            return "Model(" + model_to_json(LevyModel{p}).dump() + ")";
        });
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "European option pricing and calibration in a two-risky-asset market "
        "with no traded riskless bond";

    py::register_exception<Error>(m, "NobondError");

    bind_params<BsParams>(m, "BsModel");
    bind_params<NigParams>(m, "NigModel");
    bind_params<CgmyParams>(m, "CgmyModel");
    bind_params<VgParams>(m, "VgModel");

    m.def(
        "bs", [](double sigma) { return checked(BsParams{sigma}); },
        "sigma"_a, "Brownian driver with volatility sigma");
    m.def(
        "nig",
        [](double alpha, double beta, double delta, double mu) {
            return checked(NigParams{alpha, beta, delta, mu});
        },
        "alpha"_a, "beta"_a, "delta"_a, "mu"_a = 0.0,
        "Normal inverse Gaussian driver");
    m.def(
        "cgmy",
        [](double c, double g, double mm, double y) {
            return checked(CgmyParams{c, g, mm, y});
        },
        "c"_a, "g"_a, "m"_a, "y"_a, "CGMY tempered-stable driver");
    m.def(
        "vg",
        [](double sigma, double nu, double theta) {
            return checked(VgParams{sigma, nu, theta});
        },
        "sigma"_a, "nu"_a, "theta"_a, "Variance gamma driver");
    m.def(
        "model_from_json",
        [](const std::string& text) {
            return checked(model_from_json(nlohmann::json::parse(text)));
        },
        "text"_a, "Parse a model from its JSON object form");

    m.def(
        "char_exponent",
        [](const LevyModel& mod, std::complex<double> u) {
            return char_exponent(mod, u);
        },
        "model"_a, "u"_a, "Characteristic exponent psi(u)");
    m.def("jump_compensator", &jump_compensator, "model"_a, "kappa"_a,
          "Lambda(kappa) = ln E[exp(kappa L_1)]");

    m.def(
        "shadow_rate",
        [](double mu_s, double mu_z, double sigma_s, double sigma_z,
           double kappa_s, double kappa_z, double lambda) {
            const ShadowRateParts parts = shadow_rate_parts(
                TwoAssetSpec{mu_s, mu_z, sigma_s, sigma_z, kappa_s, kappa_z,
                             lambda, 1.0});
            return py::dict("r_bar"_a = parts.r_bar,
                            "diffusion"_a = parts.diffusion,
                            "jump_wedge"_a = parts.jump_wedge);
        },
        "mu_s"_a, "mu_z"_a, "sigma_s"_a, "sigma_z"_a, "kappa_s"_a = 0.0,
        "kappa_z"_a = 0.0, "lambda"_a = 0.0,
        "Endogenous shadow riskless rate and its two parts");

    m.def(
        "cos_price",
        [](const LevyModel& mod, double spot, double strike, double maturity,
           double rate, double div_yield, double sigma, double kappa,
           const std::string& kind, int n_terms) {
            CosConfig cfg;
            cfg.n_terms = n_terms;
            return cos_price(
                make_setup(mod, spot, rate, maturity, div_yield, sigma, kappa),
                strike, parse_kind(kind), cfg);
        },
        "model"_a, "spot"_a, "strike"_a, "maturity"_a, "rate"_a,
        "div_yield"_a = 0.0, "sigma"_a = 0.0, "kappa"_a = 1.0,
        "kind"_a = "call", "n_terms"_a = 256, "Fourier-cosine price");

    m.def(
        "fft_price",
        [](const LevyModel& mod, double spot, double strike, double maturity,
           double rate, double div_yield, double sigma, double kappa,
           const std::string& kind) {
            const RiskNeutralSetup setup =
                make_setup(mod, spot, rate, maturity, div_yield, sigma, kappa);
            const double lk = std::log(strike), ls = std::log(spot);
            const PriceGrid grid = carr_madan_prices(
                setup, std::min(lk, ls) - 1.0, std::max(lk, ls) + 1.0);
            double price = grid_interpolate(grid, strike);
            if (parse_kind(kind) == OptionKind::put) {
                const LogPriceCf cf(setup);
                price -= cf.discount() * (cf.forward() - strike);
            }
            return price;
        },
        "model"_a, "spot"_a, "strike"_a, "maturity"_a, "rate"_a,
        "div_yield"_a = 0.0, "sigma"_a = 0.0, "kappa"_a = 1.0,
        "kind"_a = "call", "Carr-Madan FFT price");

    m.def(
        "p1_p2_price",
        [](const LevyModel& mod, double spot, double strike, double maturity,
           double rate, double div_yield, double sigma, double kappa) {
            const P1P2Result r = p1_p2_price(
                make_setup(mod, spot, rate, maturity, div_yield, sigma, kappa),
                strike);
            return py::dict("price"_a = r.price, "p1"_a = r.p1, "p2"_a = r.p2);
        },
        "model"_a, "spot"_a, "strike"_a, "maturity"_a, "rate"_a,
        "div_yield"_a = 0.0, "sigma"_a = 0.0, "kappa"_a = 1.0,
        "Probability-decomposition call price");

    m.def(
        "mc_price",
        [](const LevyModel& mod, double spot, double strike, double maturity,
           double rate, double div_yield, double sigma, double kappa,
           const std::string& kind, std::int64_t paths, int steps,
           std::uint64_t seed, bool antithetic) {
            SimSpec spec;
            spec.model = mod;
            spec.leg_s = MarketLeg{spot, div_yield, sigma, kappa, "S"};
            spec.leg_z = spec.leg_s;
            spec.r_bar = rate;
            spec.t = maturity;
            spec.n_steps = steps;
            spec.n_paths = paths;
            spec.seed = seed;
            spec.antithetic = antithetic;
            const McPrice r =
                mc_price(spec, vanilla_payoff(parse_kind(kind), strike));
            return py::dict("price"_a = r.price, "std_error"_a = r.std_error);
        },
        "model"_a, "spot"_a, "strike"_a, "maturity"_a, "rate"_a,
        "div_yield"_a = 0.0, "sigma"_a = 0.0, "kappa"_a = 1.0,
        "kind"_a = "call", "paths"_a = 100000, "steps"_a = 1, "seed"_a = 1,
        "antithetic"_a = false, "Monte Carlo price with standard error");

    m.def("bs_call", &bs_call_analytic, "spot"_a, "strike"_a, "rate"_a,
          "div_yield"_a, "sigma"_a, "maturity"_a, "Analytic BS call");
    m.def("bs_put", &bs_put_analytic, "spot"_a, "strike"_a, "rate"_a,
          "div_yield"_a, "sigma"_a, "maturity"_a, "Analytic BS put");

    m.def(
        "tree_step",
        [](double u, double d, double u_tilde, double d_tilde) {
            const StepMoves moves{u, d, u_tilde, d_tilde};
            return py::dict("R"_a = shadow_growth_factor(moves),
                            "q"_a = risk_neutral_prob(moves),
                            "discount"_a = one_period_discount(moves));
        },
        "u"_a, "d"_a, "u_tilde"_a, "d_tilde"_a,
        "One-period replication diagnostics (R, q, growth divisor)");

    m.def(
        "tree_price",
        [](double s0, double z0, double u, double d, double u_tilde,
           double d_tilde, int steps, double strike, const std::string& kind) {
            LatticeSpec spec;
            spec.s0 = s0;
            spec.z0 = z0;
            spec.moves = {StepMoves{u, d, u_tilde, d_tilde}};
            spec.n_steps = steps;
            const LatticeResult r = price_on_lattice(
                spec, vanilla_payoff(parse_kind(kind), strike));
            return r.price;
        },
        "s0"_a, "z0"_a, "u"_a, "d"_a, "u_tilde"_a, "d_tilde"_a, "steps"_a,
        "strike"_a, "kind"_a = "call",
        "Recombining jump-binomial lattice price of a vanilla on S");

    m.def(
        "closed_form_price",
        [](double s, double z, double eta, double strike, double mm, double w,
           double w_tilde) {
            const LrPrice r = lr_closed_form_price(
                LrClosedFormInputs{s, z, eta, strike, mm, w, w_tilde});
            return py::dict("price"_a = r.price, "y_star"_a = r.y_star,
                            "d"_a = r.d);
        },
        "s"_a, "z"_a, "eta"_a, "strike"_a, "m"_a, "w"_a, "w_tilde"_a,
        "Two-asset closed-form European call");

    m.def(
        "pde_residual",
        [](double s, double z, double eta, double strike, double t,
           double expiry, double rate, double sigma, double h) {
            return pde_residual(LrPdePoint{s, z, eta, strike, t, expiry}, rate,
                                sigma, h, 0.1 * h);
        },
        "s"_a, "z"_a, "eta"_a, "strike"_a, "t"_a, "expiry"_a, "rate"_a,
        "sigma"_a, "h"_a = 1e-4, "Pricing-PDE residual at one grid point");

    m.def("historical_vol", &historical_vol, "prices"_a,
          "trading_days"_a = 252, "Annualised log-return volatility");

    m.def(
        "rolling_shadow_series",
        [](const std::vector<std::string>& dates, const std::vector<double>& s,
           const std::vector<double>& z, int window, double jump_threshold) {
            RollingConfig cfg;
            cfg.window = window;
            cfg.jump_threshold = jump_threshold;
            const std::vector<ShadowRatePoint> series =
                rolling_shadow_series(PairHistory{dates, s, z}, cfg);
            py::list out;
            for (const ShadowRatePoint& p : series) {
                out.append(py::dict("date"_a = p.date, "r_bar"_a = p.r_bar,
                                    "diffusion"_a = p.diffusion,
                                    "jump_wedge"_a = p.jump_wedge,
                                    "degenerate"_a = p.degenerate));
            }
            return out;
        },
        "dates"_a, "s"_a, "z"_a, "window"_a = 60, "jump_threshold"_a = 3.0,
        "Rolling shadow-rate series from a paired price history");

    m.def(
        "calibrate",
        [](const std::vector<double>& strikes,
           const std::vector<double>& maturities,
           const std::vector<std::string>& kinds,
           const std::vector<double>& mids, double spot,
           const std::vector<double>& s_hist,
           const std::vector<double>& z_hist, const std::string& model_kind,
           double seed_rate, double kappa_s, double kappa_z,
           double div_yield_s, double div_yield_z, int max_outer, int n_starts,
           std::uint64_t seed) {
            if (strikes.size() != maturities.size() ||
                strikes.size() != kinds.size() ||
                strikes.size() != mids.size()) {
                throw MisalignedSeries(
                    "strikes, maturities, kinds, and mids must align");
            }
            OptionChain chain;
            chain.spot = spot;
            for (std::size_t i = 0; i < strikes.size(); ++i) {
                chain.quotes.push_back(Quote{strikes[i], maturities[i],
                                             parse_kind(kinds[i]), mids[i],
                                             1.0});
            }
            PairHistory history;
            history.s = s_hist;
            history.z = z_hist;
            CalibrationConfig cfg;
            cfg.seed_rate = seed_rate;
            cfg.max_outer = max_outer;
            cfg.n_starts = n_starts;
            cfg.seed = seed;
            const CalibrationResult r = calibrate(
                chain, history, MarketLeg{spot, div_yield_s, 0.0, kappa_s, "S"},
                MarketLeg{100.0, div_yield_z, 0.0, kappa_z, "Z"}, model_kind,
                cfg);
            return py::dict(
                "model"_a = r.model, "r_bar"_a = r.r_bar, "rmse"_a = r.rmse,
                "rel_rmse"_a = r.rel_rmse, "converged"_a = r.converged,
                "outer_iterations"_a = r.outer_iterations,
                "sigma_s"_a = r.sigma_s, "sigma_z"_a = r.sigma_z,
                "r_bar_path"_a = r.r_bar_path);
        },
        "strikes"_a, "maturities"_a, "kinds"_a, "mids"_a, "spot"_a, "s_hist"_a,
        "z_hist"_a, "model_kind"_a, "seed_rate"_a = 0.0, "kappa_s"_a = 1.0,
        "kappa_z"_a = 0.0, "div_yield_s"_a = 0.0, "div_yield_z"_a = 0.0,
        "max_outer"_a = 50, "n_starts"_a = 5, "seed"_a = 20250816,
        "Model + shadow-rate calibration against an option chain");
}
