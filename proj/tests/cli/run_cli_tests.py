#!/usr/bin/env python3
"""Black-box checks for the nobond command line tool.

Usage: run_cli_tests.py /path/to/nobond
Exit code 0 when every check passes; one line per check on stdout.
"""

import json
import math
import os
import subprocess
import sys
import tempfile

CLI = os.path.abspath(sys.argv[1]) if len(sys.argv) > 1 else "nobond"
FAILURES = []

# Black-Scholes references: S=100, sigma=0.1579, r=0.02, T=0.4375.
CALL_90 = 11.47036252531357
CALL_100 = 4.596682346734278
CALL_110 = 1.2447420520559512
PUT_100 = 3.7254993307512495
P1_100 = 0.5540892997165333
P2_100 = 0.5125880563379644


def run(*args, expect=None):
    proc = subprocess.run([CLI] + [str(a) for a in args],
                          capture_output=True, text=True)
    if expect is not None and proc.returncode != expect:
        raise AssertionError(
            f"exit {proc.returncode}, wanted {expect}\n"
            f"stdout: {proc.stdout}\nstderr: {proc.stderr}")
    return proc


def field(out, name):
    for line in out.splitlines():
        parts = line.split()
        if len(parts) == 2 and parts[0] == name:
            return parts[1]
    raise AssertionError(f"no '{name}' line in:\n{out}")


def ffield(out, name):
    return float(field(out, name))


def check(name, fn):
    try:
        fn()
        print(f"ok   {name}")
    except AssertionError as exc:
        FAILURES.append(name)
        print(f"FAIL {name}: {exc}")


def near(got, want, tol, what=""):
    if not math.isfinite(got) or abs(got - want) > tol:
        raise AssertionError(f"{what} got {got!r}, wanted {want!r} +/- {tol}")


TMP = tempfile.mkdtemp(prefix="nobond_cli_")


def tmp(name):
    return os.path.join(TMP, name)


def write(name, text):
    path = tmp(name)
    with open(path, "w") as f:
        f.write(text)
    return path


BS_JSON = write("bs.json", '{"model": "BS", "sigma": 0.1579}\n')
CGMY_JSON = write(
    "cgmy.json",
    '{"model": "CGMY", "C": 1.128, "G": 12.347, "M": 14.562, "Y": 0.312}\n')
PRICE_ARGS = ["price", "--params", BS_JSON, "--strike", 100,
              "--maturity", 0.4375, "--rate", 0.02]


# --- usage and exit codes ---------------------------------------------------

def t_help():
    out = run("--help", expect=0).stdout
    for sub in ("price", "calibrate", "shadow-rate", "tree", "simulate",
                "verify-pde"):
        assert sub in out, f"--help does not mention {sub}"


def t_no_subcommand():
    run(expect=2)


def t_unknown_flag():
    run(*PRICE_ARGS, "--bogus", expect=2)


def t_bad_kind_value():
    run(*PRICE_ARGS, "--kind", "straddle", expect=2)


def t_missing_params_file():
    proc = run("price", "--params", tmp("absent.json"), "--strike", 100,
               "--maturity", 0.4375, expect=1)
    assert "error" in proc.stderr


def t_garbage_params():
    path = write("garbage.json", "not json at all\n")
    run("price", "--params", path, "--strike", 100, "--maturity", 0.4375,
        expect=1)


def t_model_mismatch():
    proc = run(*PRICE_ARGS, "--model", "nig", expect=1)
    assert "does not match" in proc.stderr


# --- price ------------------------------------------------------------------

def t_price_cos():
    out = run(*PRICE_ARGS, expect=0).stdout
    near(ffield(out, "price"), CALL_100, 1e-9, "cos call")


def t_price_cos_put():
    out = run(*PRICE_ARGS, "--kind", "put", expect=0).stdout
    near(ffield(out, "price"), PUT_100, 1e-9, "cos put")


def t_price_deterministic():
    a = run(*PRICE_ARGS, "--method", "mc", "--paths", 20000, "--seed", 5,
            expect=0).stdout
    b = run(*PRICE_ARGS, "--method", "mc", "--paths", 20000, "--seed", 5,
            expect=0).stdout
    assert a == b, "same command, different output"


def t_price_fft():
    out = run(*PRICE_ARGS, "--method", "fft", expect=0).stdout
    near(ffield(out, "price"), CALL_100, 0.02, "fft call")


def t_price_fft_put_parity():
    out = run("price", "--params", BS_JSON, "--strike", 110, "--maturity",
              0.4375, "--rate", 0.02, "--method", "fft", "--kind", "put",
              expect=0).stdout
    fwd = 100.0 * math.exp(0.02 * 0.4375)
    put_110 = CALL_110 - math.exp(-0.02 * 0.4375) * (fwd - 110.0)
    near(ffield(out, "price"), put_110, 0.02, "fft put")


def t_price_fft_grid_out():
    grid = tmp("grid.csv")
    out = run(*PRICE_ARGS, "--method", "fft", "--grid-out", grid,
              expect=0).stdout
    assert field(out, "grid") == grid
    with open(grid) as f:
        lines = f.read().splitlines()
    assert lines[0] == "log_strike,strike,price", lines[0]
    assert len(lines) > 100, f"only {len(lines)} grid lines"


def t_price_p1p2():
    out = run(*PRICE_ARGS, "--method", "p1p2", expect=0).stdout
    near(ffield(out, "price"), CALL_100, 1e-8, "p1p2 call")
    near(ffield(out, "p1"), P1_100, 1e-9, "p1")
    near(ffield(out, "p2"), P2_100, 1e-9, "p2")


def t_price_mc():
    out = run(*PRICE_ARGS, "--method", "mc", "--paths", 40000, "--seed", 7,
              expect=0).stdout
    se = ffield(out, "std_error")
    assert se > 0.0
    near(ffield(out, "price"), CALL_100, 5.0 * se, "mc call")


def t_price_tree():
    out = run(*PRICE_ARGS, "--method", "tree", "--tree-steps", 400,
              expect=0).stdout
    near(ffield(out, "price"), CALL_100, 0.02, "tree call")


def t_price_out_json():
    path = tmp("price.json")
    run(*PRICE_ARGS, "--out", path, expect=0)
    with open(path) as f:
        j = json.load(f)
    assert j["method"] == "cos" and j["kind"] == "call"
    assert j["model"]["model"] == "BS"
    near(j["price"], CALL_100, 1e-9, "price json")


# --- shadow-rate ------------------------------------------------------------

def t_shadow_pointwise():
    out = run("shadow-rate", "--mu-s", 0.05, "--mu-z", 0.03, "--sigma-s", 0.3,
              "--sigma-z", 0.2, "--kappa-s", 0.5, "--kappa-z", 0.1,
              "--lambda", 0.25, expect=0).stdout
    near(ffield(out, "diffusion"), -0.01, 1e-12, "diffusion")
    near(ffield(out, "jump_wedge"), 1.0, 1e-12, "jump wedge")
    near(ffield(out, "r_bar"), 0.99, 1e-12, "r_bar")


def t_shadow_worked_example():
    out = run("shadow-rate", "--mu-s", 0.08, "--mu-z", 0.05, "--sigma-s",
              0.25, "--sigma-z", 0.15, "--kappa-s", 0.5, "--kappa-z", 0.3,
              "--lambda", 1.0, expect=0).stdout
    near(ffield(out, "diffusion"), 0.005, 1e-12, "diffusion")
    near(ffield(out, "jump_wedge"), 2.0, 1e-12, "jump wedge")
    near(ffield(out, "r_bar"), 2.005, 1e-12, "r_bar")


def t_shadow_degenerate():
    proc = run("shadow-rate", "--mu-s", 0.05, "--mu-z", 0.03, "--sigma-s",
               0.2, "--sigma-z", 0.2, expect=1)
    assert "error" in proc.stderr


def pair_csv(name, n=130):
    rows = ["date,price_s,price_z"]
    s, z = 100.0, 80.0
    for i in range(n):
        rows.append(f"r{i:04d},{s:.10f},{z:.10f}")
        s *= math.exp(0.010 * math.sin(2.7 * i + 0.3))
        z *= math.exp(0.005 * math.cos(1.9 * i))
    return write(name, "\n".join(rows) + "\n")


def t_shadow_series():
    pair = pair_csv("pair_series.csv")
    out_csv = tmp("series.csv")
    out = run("shadow-rate", "--pair", pair, "--window", 60, "--out", out_csv,
              expect=0).stdout
    points = int(field(out, "points"))
    assert points > 0
    with open(out_csv) as f:
        lines = f.read().splitlines()
    assert lines[0] == "date,r_bar,diffusion,jump_wedge,flag", lines[0]
    assert len(lines) == points + 1, f"{len(lines)} lines for {points} points"


def t_shadow_benchmark_gap():
    pair = pair_csv("pair_bench.csv")
    bench_rows = ["date,yield"] + [f"r{i:04d},0.02" for i in range(130)]
    bench = write("bench.csv", "\n".join(bench_rows) + "\n")
    out_csv, gap_csv = tmp("series_b.csv"), tmp("gap.csv")
    out = run("shadow-rate", "--pair", pair, "--window", 60, "--benchmark",
              bench, "--out", out_csv, "--gap-out", gap_csv, expect=0).stdout
    assert math.isfinite(ffield(out, "mean_gap"))
    with open(gap_csv) as f:
        lines = f.read().splitlines()
    assert lines[0] == "date,r_bar,yield,gap", lines[0]
    assert len(lines) > 1


# --- tree -------------------------------------------------------------------

TREE_ARGS = ["tree", "--u", 0.10, "--d", -0.05, "--u-tilde", 0.05,
             "--d-tilde", -0.02, "--strike", 100]


def t_tree_worked_example():
    out = run(*TREE_ARGS, expect=0).stdout
    near(ffield(out, "R"), 0.0805, 1e-12, "R")
    near(ffield(out, "q"), 0.375, 1e-12, "q")
    near(ffield(out, "discount"), 1.00625, 1e-12, "discount")
    near(ffield(out, "price"), 3.726708074534161, 1e-11, "one-step call")
    near(ffield(out, "max_ratio_gap"), 0.0, 1e-12, "ratio gap")


def t_tree_nodes_dump():
    nodes = tmp("nodes.csv")
    run(*TREE_ARGS, "--steps", 2, "--nodes-out", nodes, expect=0)
    with open(nodes) as f:
        lines = f.read().splitlines()
    assert lines[0] == "step,node,s,z,value", lines[0]
    assert len(lines) >= 4


def t_tree_degenerate():
    run("tree", "--u", 0.10, "--d", -0.05, "--u-tilde", 0.10, "--d-tilde",
        -0.05, expect=1)


# --- simulate ---------------------------------------------------------------

def t_simulate():
    dump = tmp("sample.csv")
    out = run("simulate", "--params", BS_JSON, "--paths", 20000, "--seed", 3,
              "--rate", 0.02, "--maturity", 0.4375, "--strike", 100,
              "--dump", dump, expect=0).stdout
    assert int(field(out, "paths")) == 20000
    assert abs(ffield(out, "forward_gap_s")) < 5e-3
    se = ffield(out, "std_error")
    near(ffield(out, "price"), CALL_100, 5.0 * se, "simulate price")
    with open(dump) as f:
        lines = f.read().splitlines()
    assert lines[0] == "s_t,z_t" and len(lines) == 20001


def t_simulate_cgmy_rejected():
    proc = run("simulate", "--params", CGMY_JSON, "--paths", 1000, expect=1)
    assert "CGMY" in proc.stderr


# --- calibrate --------------------------------------------------------------

def bs_call(spot, strike, rate, vol, mat):
    phi = lambda x: 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))
    d1 = (math.log(spot / strike) + (rate + 0.5 * vol * vol) * mat) / (
        vol * math.sqrt(mat))
    d2 = d1 - vol * math.sqrt(mat)
    return spot * phi(d1) - strike * math.exp(-rate * mat) * phi(d2)


def t_calibrate_bs_roundtrip():
    # The chain is priced with the S leg's historical diffusion vol plus the
    # fitted model on top, so generate mids at the combined volatility.
    sig_s = 0.010 * math.sqrt(504.0 / 503.0) * math.sqrt(252.0)
    sig_z = 0.005 * math.sqrt(504.0 / 503.0) * math.sqrt(252.0)
    sig_model = 0.10
    total = math.hypot(sig_s, sig_model)
    rows = ["strike,maturity_years,kind,mid"]
    for k in (90.0, 100.0, 110.0):
        rows.append(f"{k},0.4375,call,{bs_call(100.0, k, 0.02, total, 0.4375):.15f}")
    chain = write("chain.csv", "\n".join(rows) + "\n")

    rows = ["date,price_s,price_z"]
    for i in range(505):
        s = 100.0 * math.exp(0.010) if i % 2 else 100.0
        z = 100.0 * math.exp(0.005) if i % 2 else 100.0
        rows.append(f"d{i:04d},{s:.12f},{z:.12f}")
    pair = write("pair_cal.csv", "\n".join(rows) + "\n")

    # Z-leg dividend that zeroes the rate-update bias at the generating model
    lam = 0.5 * sig_model ** 2  # model compensator at kappa_s = 1
    div_z = (0.5 * sig_s * sig_z * (sig_z - sig_s) - lam * sig_z) / sig_s

    result = tmp("calibration.json")
    out = run("calibrate", "--chain", chain, "--pair", pair, "--model", "bs",
              "--seed-rate", 0.02, "--div-yield-z", f"{div_z:.17g}",
              "--starts", 3, "--out", result, expect=0).stdout
    assert field(out, "converged") == "true"
    near(ffield(out, "r_bar"), 0.02, 2e-3, "calibrated rate")
    assert ffield(out, "rel_rmse") < 1e-3

    with open(result) as f:
        j = json.load(f)
    assert j["converged"] is True
    assert j["model"]["model"] == "BS"
    near(j["model"]["sigma"], sig_model, 2e-3, "calibrated sigma")
    assert 1 <= j["outer_iterations"] <= 50
    assert len(j["r_bar_path"]) == j["outer_iterations"]
    near(j["r_bar_path"][-1], j["r_bar"], 1e-12, "path tail")


def t_calibrate_unknown_model():
    chain = write("chain_u.csv", "strike,maturity_years,kind,mid\n"
                  f"100,0.4375,call,{CALL_100:.15f}\n")
    pair = pair_csv("pair_u.csv")
    proc = run("calibrate", "--chain", chain, "--pair", pair, "--model",
               "heston", expect=1)
    assert "error" in proc.stderr


def t_calibrate_bad_chain_header():
    chain = write("chain_bad.csv", "strike,tenor,kind,mid\n100,1,call,5\n")
    pair = pair_csv("pair_b.csv")
    proc = run("calibrate", "--chain", chain, "--pair", pair, "--model", "bs",
               expect=1)
    assert "line 1" in proc.stderr


# --- verify-pde -------------------------------------------------------------

def t_verify_pde():
    out_csv = tmp("pde.csv")
    out = run("verify-pde", "--out", out_csv, expect=0).stdout
    assert ffield(out, "max_abs_residual") < 1e-6
    with open(out_csv) as f:
        lines = f.read().splitlines()
    assert lines[0] == "s,z,t,residual", lines[0]
    assert len(lines) == 1 + 5 * 5 * 3, f"{len(lines)} lines"


def t_verify_pde_custom_grid():
    out_csv = tmp("pde_custom.csv")
    out = run("verify-pde", "--eta", 1.0, "--s-n", 3, "--z-n", 1,
              "--t-values", "0.25,0.75", "--out", out_csv, expect=0).stdout
    assert ffield(out, "max_abs_residual") < 1e-6
    with open(out_csv) as f:
        lines = f.read().splitlines()
    assert len(lines) == 1 + 3 * 1 * 2


def main():
    if not os.path.exists(CLI):
        print(f"FAIL setup: CLI binary not found at {CLI}")
        return 1
    tests = [(name[2:], fn) for name, fn in sorted(globals().items())
             if name.startswith("t_") and callable(fn)]
    for name, fn in tests:
        check(name, fn)
    print(f"{len(tests) - len(FAILURES)}/{len(tests)} CLI checks passed")
    return 1 if FAILURES else 0


if __name__ == "__main__":
    sys.exit(main())
