#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nobond/calibration.hpp"
#include "nobond/fourier.hpp"
#include "nobond/lattice.hpp"
#include "nobond/shadow_rate.hpp"

namespace nobond {

// What ingest accepted, dropped, or flagged; every entry names the row.
struct IngestReport {
    int rows_read = 0;
    int rows_used = 0;
    std::vector<std::string> warnings;
};

// CSV `strike,maturity_years,kind,mid` (kind: call|put).  Quotes violating
// the model-free screens keep their row with weight 0 and a warning:
//   - call mid above spot (upper bound),
//   - call mid below max(spot - strike, 0) (r = 0 lower-bound screen),
//   - put mid above strike,
//   - negative butterfly across adjacent same-kind, same-maturity strikes.
// Throws ParseError (row/column context), EmptyChain, IoError.
OptionChain load_option_chain(const std::string& path, double spot,
                              const std::string& as_of,
                              IngestReport* report = nullptr);

// CSV `date,price_s,price_z`.  Rows with a missing/unparseable price are
// dropped with a warning; dates are sorted ascending; duplicate dates keep
// the first occurrence.
PairHistory load_pair_history(const std::string& path,
                              IngestReport* report = nullptr);

// CSV `date,yield`.
std::vector<DatedYield> load_benchmark(const std::string& path,
                                       IngestReport* report = nullptr);

// ---------------------------------------------------------------------------
// Writers.  Numeric formatting is fixed (%.12g) so identical inputs produce
// byte-identical files.
// ---------------------------------------------------------------------------

// `date,r_bar,diffusion,jump_wedge,flag` (flag: ok|degenerate, NaNs as nan).
void write_shadow_series_csv(const std::string& path,
                             const std::vector<ShadowRatePoint>& series);

// `date,r_bar,yield,gap`.
void write_benchmark_gap_csv(const std::string& path,
                             const std::vector<BenchmarkGapPoint>& gaps);

// `log_strike,strike,price`.
void write_price_grid_csv(const std::string& path, const PriceGrid& grid);

// `step,node,s,z,value`.
void write_node_dump_csv(const std::string& path,
                         const std::vector<LatticeNode>& nodes);

// ---------------------------------------------------------------------------
// JSON: model objects `{"model": "NIG", "alpha": ..., ...}` and full-fidelity
// calibration reports (round-trip exact through doubles).
// ---------------------------------------------------------------------------

nlohmann::json model_to_json(const LevyModel& model);
LevyModel model_from_json(const nlohmann::json& j);
LevyModel load_model(const std::string& path);

nlohmann::json calibration_to_json(const CalibrationResult& result);
CalibrationResult calibration_from_json(const nlohmann::json& j);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

} // namespace nobond
