#include "nobond/data_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace nobond {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(c));
    return s;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

// Non-empty lines of the file with the header checked and consumed.  Line
// numbers in messages are 1-based file lines, so they survive blank rows.
struct CsvRow {
    int line = 0;
    std::vector<std::string> fields;
};

std::vector<CsvRow> read_csv(const std::string& path,
                             const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::vector<CsvRow> rows;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (!header_seen) {
            std::string got;
            for (const std::string& f : split_csv(line)) {
                if (!got.empty()) got += ",";
                got += lower(f);
            }
            if (got != expected_header) {
                throw ParseError(path + ": line 1: expected header '" +
                                 expected_header + "', found '" + got + "'");
            }
            header_seen = true;
            continue;
        }
        rows.push_back({line_no, split_csv(line)});
    }
    if (!header_seen) {
        throw ParseError(path + ": empty file (header '" + expected_header +
                         "' required)");
    }
    return rows;
}

double parse_double(const std::string& field, const std::string& path,
                    int line, const char* column) {
    const std::string t = trim(field);
    if (!t.empty()) {
        char* end = nullptr;
        const double v = std::strtod(t.c_str(), &end);
        if (end == t.c_str() + t.size() && std::isfinite(v)) return v;
    }
    throw ParseError(path + ": line " + std::to_string(line) + ", column '" +
                     column + "': cannot parse '" + field + "' as a number");
}

void require_columns(const CsvRow& row, std::size_t n, const std::string& path) {
    if (row.fields.size() != n) {
        throw ParseError(path + ": line " + std::to_string(row.line) +
                         ": expected " + std::to_string(n) + " columns, found " +
                         std::to_string(row.fields.size()));
    }
}

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    return out;
}

void warn(IngestReport* report, const std::string& msg) {
    if (report) report->warnings.push_back(msg);
}

} // namespace

OptionChain load_option_chain(const std::string& path, double spot,
                              const std::string& as_of, IngestReport* report) {
    if (!(spot > 0.0) || !std::isfinite(spot)) {
        throw NonFiniteInput("spot must be > 0");
    }
    OptionChain chain;
    chain.spot = spot;
    chain.as_of = as_of;

    for (const CsvRow& row : read_csv(path, "strike,maturity_years,kind,mid")) {
        require_columns(row, 4, path);
        if (report) ++report->rows_read;
        Quote q;
        q.strike = parse_double(row.fields[0], path, row.line, "strike");
        q.maturity =
            parse_double(row.fields[1], path, row.line, "maturity_years");
        const std::string kind = lower(row.fields[2]);
        if (kind == "call") {
            q.kind = OptionKind::call;
        } else if (kind == "put") {
            q.kind = OptionKind::put;
        } else {
            throw ParseError(path + ": line " + std::to_string(row.line) +
                             ", column 'kind': expected call|put, found '" +
                             row.fields[2] + "'");
        }
        q.mid = parse_double(row.fields[3], path, row.line, "mid");
        if (!(q.strike > 0.0) || !(q.maturity > 0.0) || q.mid < 0.0) {
            throw ParseError(path + ": line " + std::to_string(row.line) +
                             ": strike and maturity must be > 0, mid >= 0");
        }

        // model-free price screens: keep the row but zero its weight
        const char* why = nullptr;
        if (q.kind == OptionKind::call && q.mid > spot) {
            why = "call mid above spot";
        } else if (q.kind == OptionKind::call &&
                   q.mid < std::max(spot - q.strike, 0.0)) {
            why = "call mid below intrinsic floor";
        } else if (q.kind == OptionKind::put && q.mid > q.strike) {
            why = "put mid above strike";
        }
        if (why) {
            q.weight = 0.0;
            warn(report, path + ": line " + std::to_string(row.line) + ": " +
                             why + "; quote excluded from objectives");
        }
        chain.quotes.push_back(q);
    }

    // Butterfly screen per (kind, maturity): the middle quote of a concave
    // triple is the one excluded.  Non-uniform strikes use the chord bound
    //   P2 <= P1 (K3-K2)/(K3-K1) + P3 (K2-K1)/(K3-K1).
    std::map<std::pair<int, double>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < chain.quotes.size(); ++i) {
        if (chain.quotes[i].weight <= 0.0) continue;
        groups[{chain.quotes[i].kind == OptionKind::call ? 0 : 1,
                chain.quotes[i].maturity}]
            .push_back(i);
    }
    const double tol = 1e-9 * spot;
    for (auto& [key, idx] : groups) {
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return chain.quotes[a].strike < chain.quotes[b].strike;
        });
        for (std::size_t j = 1; j + 1 < idx.size(); ++j) {
            const Quote& a = chain.quotes[idx[j - 1]];
            Quote& b = chain.quotes[idx[j]];
            const Quote& c = chain.quotes[idx[j + 1]];
            if (a.strike == b.strike || b.strike == c.strike) continue;
            const double span = c.strike - a.strike;
            const double chord = a.mid * (c.strike - b.strike) / span +
                                 c.mid * (b.strike - a.strike) / span;
            if (b.mid > chord + tol) {
                b.weight = 0.0;
                warn(report, path + ": strike " + fmt_g(b.strike) +
                                 " maturity " + fmt_g(b.maturity) +
                                 ": negative butterfly; quote excluded");
            }
        }
    }

    int used = 0;
    for (const Quote& q : chain.quotes) {
        if (q.weight > 0.0) ++used;
    }
    if (report) report->rows_used = used;
    if (used == 0) {
        throw EmptyChain(path + ": no quote survived the ingest screens");
    }
    return chain;
}

PairHistory load_pair_history(const std::string& path, IngestReport* report) {
    struct Row {
        std::string date;
        double s, z;
    };
    std::vector<Row> rows;
    for (const CsvRow& row : read_csv(path, "date,price_s,price_z")) {
        if (report) ++report->rows_read;
        if (row.fields.size() != 3) {
            warn(report, path + ": line " + std::to_string(row.line) +
                             ": expected 3 columns; row dropped");
            continue;
        }
        const std::string date = row.fields[0];
        double s = 0.0, z = 0.0;
        try {
            s = parse_double(row.fields[1], path, row.line, "price_s");
            z = parse_double(row.fields[2], path, row.line, "price_z");
        } catch (const ParseError& e) {
            warn(report, std::string(e.what()) + "; row dropped");
            continue;
        }
        if (date.empty() || !(s > 0.0) || !(z > 0.0)) {
            warn(report, path + ": line " + std::to_string(row.line) +
                             ": empty date or non-positive price; row dropped");
            continue;
        }
        rows.push_back({date, s, z});
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    PairHistory out;
    for (const Row& r : rows) {
        if (!out.dates.empty() && out.dates.back() == r.date) {
            warn(report, path + ": duplicate date " + r.date +
                             "; keeping the first occurrence");
            continue;
        }
        out.dates.push_back(r.date);
        out.s.push_back(r.s);
        out.z.push_back(r.z);
    }
    if (report) report->rows_used = static_cast<int>(out.dates.size());
    if (out.dates.empty()) {
        throw InsufficientData(path + ": no usable rows");
    }
    return out;
}

std::vector<DatedYield> load_benchmark(const std::string& path,
                                       IngestReport* report) {
    struct Row {
        std::string date;
        double yield;
    };
    std::vector<Row> rows;
    for (const CsvRow& row : read_csv(path, "date,yield")) {
        if (report) ++report->rows_read;
        if (row.fields.size() != 2 || row.fields[0].empty()) {
            warn(report, path + ": line " + std::to_string(row.line) +
                             ": malformed row dropped");
            continue;
        }
        double y = 0.0;
        try {
            y = parse_double(row.fields[1], path, row.line, "yield");
        } catch (const ParseError& e) {
            warn(report, std::string(e.what()) + "; row dropped");
            continue;
        }
        rows.push_back({row.fields[0], y});
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    std::vector<DatedYield> out;
    for (const Row& r : rows) {
        if (!out.empty() && out.back().date == r.date) {
            warn(report, path + ": duplicate date " + r.date +
                             "; keeping the first occurrence");
            continue;
        }
        out.push_back({r.date, r.yield});
    }
    if (report) report->rows_used = static_cast<int>(out.size());
    if (out.empty()) {
        throw InsufficientData(path + ": no usable rows");
    }
    return out;
}

void write_shadow_series_csv(const std::string& path,
                             const std::vector<ShadowRatePoint>& series) {
    std::ofstream out = open_out(path);
    out << "date,r_bar,diffusion,jump_wedge,flag\n";
    for (const ShadowRatePoint& p : series) {
        out << p.date << ',' << fmt_g(p.r_bar) << ',' << fmt_g(p.diffusion)
            << ',' << fmt_g(p.jump_wedge) << ','
            << (p.degenerate ? "degenerate" : "ok") << '\n';
    }
}

void write_benchmark_gap_csv(const std::string& path,
                             const std::vector<BenchmarkGapPoint>& gaps) {
    std::ofstream out = open_out(path);
    out << "date,r_bar,yield,gap\n";
    for (const BenchmarkGapPoint& p : gaps) {
        out << p.date << ',' << fmt_g(p.r_bar) << ',' << fmt_g(p.yield) << ','
            << fmt_g(p.gap) << '\n';
    }
}

void write_price_grid_csv(const std::string& path, const PriceGrid& grid) {
    std::ofstream out = open_out(path);
    out << "log_strike,strike,price\n";
    for (std::size_t i = 0; i < grid.strikes.size(); ++i) {
        out << fmt_g(grid.log_strikes[i]) << ',' << fmt_g(grid.strikes[i])
            << ',' << fmt_g(grid.prices[i]) << '\n';
    }
}

void write_node_dump_csv(const std::string& path,
                         const std::vector<LatticeNode>& nodes) {
    std::ofstream out = open_out(path);
    out << "step,node,s,z,value\n";
    for (const LatticeNode& n : nodes) {
        out << n.step << ',' << n.node << ',' << fmt_g(n.s) << ',' << fmt_g(n.z)
            << ',' << fmt_g(n.value) << '\n';
    }
}

nlohmann::json model_to_json(const LevyModel& model) {
    nlohmann::json j;
    j["model"] = model_name(model);
    if (const auto* bs = std::get_if<BsParams>(&model)) {
        j["sigma"] = bs->sigma;
    } else if (const auto* nig = std::get_if<NigParams>(&model)) {
        j["alpha"] = nig->alpha;
        j["beta"] = nig->beta;
        j["delta"] = nig->delta;
        j["mu"] = nig->mu;
    } else if (const auto* cgmy = std::get_if<CgmyParams>(&model)) {
        j["C"] = cgmy->c;
        j["G"] = cgmy->g;
        j["M"] = cgmy->m;
        j["Y"] = cgmy->y;
    } else {
        const auto& vg = std::get<VgParams>(model);
        j["sigma"] = vg.sigma;
        j["nu"] = vg.nu;
        j["theta"] = vg.theta;
    }
    return j;
}

LevyModel model_from_json(const nlohmann::json& j) {
    try {
        const std::string name = lower(j.at("model").get<std::string>());
        if (name == "bs") {
            return BsParams{j.at("sigma").get<double>()};
        }
        if (name == "nig") {
            return NigParams{j.at("alpha").get<double>(),
                             j.at("beta").get<double>(),
                             j.at("delta").get<double>(),
                             j.value("mu", 0.0)};
        }
        if (name == "cgmy") {
            return CgmyParams{j.at("C").get<double>(), j.at("G").get<double>(),
                              j.at("M").get<double>(), j.at("Y").get<double>()};
        }
        if (name == "vg") {
            return VgParams{j.at("sigma").get<double>(),
                            j.at("nu").get<double>(),
                            j.at("theta").get<double>()};
        }
        throw ParseError("unknown model name '" + name +
                         "' (expected BS | NIG | CGMY | VG)");
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model JSON: ") + e.what());
    }
}

LevyModel load_model(const std::string& path) {
    const LevyModel model = model_from_json(read_json(path));
    validate(model);
    return model;
}

nlohmann::json calibration_to_json(const CalibrationResult& result) {
    nlohmann::json j;
    j["model"] = model_to_json(result.model);
    j["r_bar"] = result.r_bar;
    j["rmse"] = result.rmse;
    j["rel_rmse"] = result.rel_rmse;
    j["converged"] = result.converged;
    j["outer_iterations"] = result.outer_iterations;
    j["sigma_s"] = result.sigma_s;
    j["sigma_z"] = result.sigma_z;
    j["mu_s"] = result.mu_s;
    j["mu_z"] = result.mu_z;
    j["r_bar_path"] = result.r_bar_path;
    return j;
}

CalibrationResult calibration_from_json(const nlohmann::json& j) {
    try {
        CalibrationResult r;
        r.model = model_from_json(j.at("model"));
        r.r_bar = j.at("r_bar").get<double>();
        r.rmse = j.at("rmse").get<double>();
        r.rel_rmse = j.at("rel_rmse").get<double>();
        r.converged = j.at("converged").get<bool>();
        r.outer_iterations = j.at("outer_iterations").get<int>();
        r.sigma_s = j.at("sigma_s").get<double>();
        r.sigma_z = j.at("sigma_z").get<double>();
        r.mu_s = j.at("mu_s").get<double>();
        r.mu_z = j.at("mu_z").get<double>();
        r.r_bar_path = j.at("r_bar_path").get<std::vector<double>>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("calibration JSON: ") + e.what());
    }
}

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

} // namespace nobond
