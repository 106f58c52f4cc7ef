#include "sdirac/json_io.hpp"

#include <cstdio>
#include <fstream>

namespace sdirac {

namespace {

using nlohmann::json;

Complex complex_from_json(const json& j, const std::string& context) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw SchemaError(context + ": complex entries must be [re, im] number pairs");
    }
    return Complex{j[0].get<double>(), j[1].get<double>()};
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

const json& require_field(const json& j, const std::string& key, const std::string& context) {
    const auto it = j.find(key);
    if (it == j.end()) throw SchemaError(context + ": missing field \"" + key + "\"");
    return *it;
}

std::size_t require_count(const json& j, const std::string& key, const std::string& context) {
    const json& f = require_field(j, key, context);
    if (!f.is_number_unsigned() && !(f.is_number_integer() && f.get<long long>() >= 0)) {
        throw SchemaError(context + ": field \"" + key + "\" must be a nonnegative integer");
    }
    return f.get<std::size_t>();
}

}  // namespace

json matrix_to_json(const CMatrix& m) {
    json data = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        data.push_back(std::move(row));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const json& j, const std::string& context) {
    if (!j.is_object()) throw SchemaError(context + ": matrix must be an object");
    const std::size_t rows = require_count(j, "rows", context);
    const std::size_t cols = require_count(j, "cols", context);
    const json& data = require_field(j, "data", context);
    if (!data.is_array() || data.size() != rows) {
        throw SchemaError(context + ": \"data\" must be an array of " + std::to_string(rows) +
                          " rows");
    }
    CMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!data[r].is_array() || data[r].size() != cols) {
            throw SchemaError(context + ": row " + std::to_string(r) + " must have " +
                              std::to_string(cols) + " entries");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = complex_from_json(data[r][c], context);
        }
    }
    if (!m.is_finite()) throw SchemaError(context + ": non-finite matrix entry");
    return m;
}

json realization_to_json(const Realization& r) {
    return json{{"convention",
                 r.convention == Convention::continuous ? "continuous" : "discrete"},
                {"n", r.n()},
                {"m1", r.m1()},
                {"m2", r.m2()},
                {"A", matrix_to_json(r.A)},
                {"B", matrix_to_json(r.B)},
                {"C", matrix_to_json(r.C)}};
}

Realization realization_from_json(const json& j) {
    const std::string context = "realization";
    if (!j.is_object()) throw SchemaError(context + ": document must be an object");
    const json& conv = require_field(j, "convention", context);
    if (!conv.is_string() || (conv != "continuous" && conv != "discrete")) {
        throw SchemaError(context + ": \"convention\" must be \"continuous\" or \"discrete\"");
    }
    Realization r;
    r.convention = conv == "continuous" ? Convention::continuous : Convention::discrete;
    r.A = matrix_from_json(require_field(j, "A", context), context + ".A");
    r.B = matrix_from_json(require_field(j, "B", context), context + ".B");
    r.C = matrix_from_json(require_field(j, "C", context), context + ".C");

    const std::size_t n = require_count(j, "n", context);
    const std::size_t m1 = require_count(j, "m1", context);
    const std::size_t m2 = require_count(j, "m2", context);
    try {
        r.validate();
    } catch (const std::invalid_argument& e) {
        throw SchemaError(context + ": " + e.what());
    }
    if (r.n() != n || r.m1() != m1 || r.m2() != m2) {
        throw SchemaError(context + ": declared (n, m1, m2) = (" + std::to_string(n) + ", " +
                          std::to_string(m1) + ", " + std::to_string(m2) +
                          ") disagree with the matrix shapes for this convention");
    }
    return r;
}

json quadruple_to_json(const AdmissibleQuadruple& q) {
    return json{{"n", q.n()},         {"m1", q.m1()},
                {"m2", q.m2()},       {"alpha", matrix_to_json(q.alpha)},
                {"S0", matrix_to_json(q.S0)}, {"theta1", matrix_to_json(q.theta1)},
                {"theta2", matrix_to_json(q.theta2)}};
}

AdmissibleQuadruple quadruple_from_json(const json& j) {
    const std::string context = "quadruple";
    if (!j.is_object()) throw SchemaError(context + ": document must be an object");
    const CMatrix alpha = matrix_from_json(require_field(j, "alpha", context), context + ".alpha");
    const CMatrix S0 = matrix_from_json(require_field(j, "S0", context), context + ".S0");
    const CMatrix th1 =
        matrix_from_json(require_field(j, "theta1", context), context + ".theta1");
    const CMatrix th2 =
        matrix_from_json(require_field(j, "theta2", context), context + ".theta2");
    const std::size_t n = require_count(j, "n", context);
    const std::size_t m1 = require_count(j, "m1", context);
    const std::size_t m2 = require_count(j, "m2", context);
    AdmissibleQuadruple q;
    try {
        q = make_quadruple(alpha, S0, th1, th2);
    } catch (const std::invalid_argument& e) {
        throw SchemaError(context + ": " + e.what());
    }
    if (q.n() != n || q.m1() != m1 || q.m2() != m2) {
        throw SchemaError(context + ": declared (n, m1, m2) disagree with the matrix shapes");
    }
    return q;
}

SweepConfig sweep_config_from_json(const json& j) {
    const std::string context = "sweep config";
    if (!j.is_object()) throw SchemaError(context + ": document must be an object");
    SweepConfig cfg;
    cfg.base = realization_from_json(require_field(j, "realization", context));
    const json& mode = require_field(j, "mode", context);
    if (!mode.is_string() || (mode != "continuous" && mode != "discrete")) {
        throw SchemaError(context + ": \"mode\" must be \"continuous\" or \"discrete\"");
    }
    cfg.mode = mode == "continuous" ? SweepMode::continuous : SweepMode::discrete;
    const json& deltas = require_field(j, "deltas", context);
    if (!deltas.is_array() || deltas.empty()) {
        throw SchemaError(context + ": \"deltas\" must be a nonempty array");
    }
    for (const auto& d : deltas) {
        if (!d.is_number()) throw SchemaError(context + ": deltas must be numbers");
        cfg.deltas.push_back(d.get<double>());
    }
    const json& trials = require_field(j, "trials", context);
    if (!trials.is_number_integer()) throw SchemaError(context + ": \"trials\" must be integral");
    cfg.trials = trials.get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("grid_samples")) cfg.grid_samples = j["grid_samples"].get<std::size_t>();
    if (j.contains("x_max")) cfg.x_max = j["x_max"].get<double>();
    if (j.contains("K")) cfg.K = j["K"].get<std::size_t>();
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw SchemaError(context + ": " + e.what());
    }
    return cfg;
}

json sweep_result_to_json(const SweepResult& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back(json{{"delta", row.delta},
                            {"quad_median", row.quad_median},
                            {"quad_max", row.quad_max},
                            {"pot_median", row.pot_median},
                            {"pot_max", row.pot_max},
                            {"completed", row.completed},
                            {"skipped", row.skipped}});
    }
    return json{{"rows", std::move(rows)},
                {"trend_pass", r.trend_pass},
                {"inconclusive", r.inconclusive},
                {"quad_reduction", r.quad_reduction},
                {"pot_reduction", r.pot_reduction}};
}

json defect_report_to_json(const WeylDefectReport& r) {
    const char* verdict = r.verdict == Verdict::pass ? "pass"
                          : r.verdict == Verdict::fail ? "fail"
                                                       : "inconclusive";
    return json{{"z", complex_to_json(r.z)},
                {"bound_M", r.bound_M},
                {"z_in_region", r.z_in_region},
                {"checkpoints", r.checkpoints},
                {"first_half", r.first_half},
                {"second_half", r.second_half},
                {"ratio", r.ratio},
                {"min_sample", r.min_sample},
                {"verdict", verdict}};
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open input file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw SchemaError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace sdirac
