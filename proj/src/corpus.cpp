#include "sdirac/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>

#include "sdirac/continuous.hpp"
#include "sdirac/discrete.hpp"
#include "sdirac/json_io.hpp"

namespace sdirac {

namespace {

using nlohmann::json;

struct CheckAccumulator {
    CorpusRow row;

    void record(const std::string& check, double deviation, double tolerance) {
        const double ratio = tolerance > 0.0 ? deviation / tolerance
                                             : (deviation > 0.0 ? 2.0 : 0.0);
        if (ratio >= row.ratio) {
            row.ratio = ratio;
            row.deviation = deviation;
            row.tolerance = tolerance;
            row.worst_check = check;
        }
    }

    void record_flag(const std::string& check, bool ok) {
        // Booleans map onto the ratio scale: 0 when satisfied, 2 when not.
        record(check, ok ? 0.0 : 1.0, 0.5);
    }
};

Complex complex_from(const json& j) { return Complex{j[0].get<double>(), j[1].get<double>()}; }

double get_tolerance(const json& doc, const char* key, double fallback) {
    return doc.contains(key) ? doc[key].get<double>() : fallback;
}

void check_weyl_probes(CheckAccumulator& acc, const json& doc, double tol,
                       const std::function<CMatrix(Complex)>& weyl) {
    if (!doc.contains("weyl_probes")) return;
    const json& probes = doc["weyl_probes"];
    const json& zs = probes.at("z");
    const json& values = probes.at("values");
    double worst = 0.0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const Complex z = complex_from(zs[i]);
        const CMatrix expected = matrix_from_json(values[i], "weyl probe value");
        const CMatrix got = weyl(z);
        worst = std::max(worst,
                         (got - expected).frobenius_norm() /
                             std::max(1.0, expected.frobenius_norm()));
    }
    acc.record("weyl_probes", worst, tol);
}

void run_continuous_case(CheckAccumulator& acc, const json& doc) {
    const Realization r = realization_from_json(doc.at("realization"));
    const double tol = get_tolerance(doc, "tolerance", 1e-9);
    const ContinuousInverseResult res = solve_inverse_continuous(r);
    const AdmissibleQuadruple& q = res.potential.quadruple();

    const AdmissibilityReport adm = check_admissible(q);
    acc.record("quadruple_identity", adm.identity_residual,
               1e-10 * std::max(adm.identity_scale, 1e-300));

    if (doc.contains("expected_quadruple")) {
        const AdmissibleQuadruple expected = quadruple_from_json(doc["expected_quadruple"]);
        acc.record("expected_quadruple", quadruple_distance(q, expected),
                   get_tolerance(doc, "quadruple_tolerance", tol));
    }
    if (doc.contains("potential_samples")) {
        const json& samples = doc["potential_samples"];
        const json& xs = samples.at("x");
        const json& values = samples.at("values");
        double worst = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const CMatrix expected = matrix_from_json(values[i], "potential sample");
            worst = std::max(
                worst, (res.potential.value(xs[i].get<double>()) - expected).frobenius_norm());
        }
        acc.record("potential_samples", worst, tol);
    }
    check_weyl_probes(acc, doc, tol,
                      [&](Complex z) { return weyl_continuous(q, z); });
    if (doc.value("decay_check", false)) {
        const DecayProfile prof =
            decay_profile(res.potential, res.potential.default_x_max(), 400);
        acc.record_flag("decay", prof.v_below_threshold);
    }
}

void run_discrete_case(CheckAccumulator& acc, const json& doc) {
    const Realization r = realization_from_json(doc.at("realization"));
    const double tol = get_tolerance(doc, "tolerance", 1e-9);
    const std::size_t K = doc.value("K", default_K(r.n()));
    const DiscreteInverseResult res = solve_inverse_discrete(r, K);
    const AdmissibleQuadruple& q = res.potential.quadruple;

    const AdmissibilityReport adm = check_admissible(q);
    acc.record("quadruple_identity", adm.identity_residual,
               1e-10 * std::max(adm.identity_scale, 1e-300));

    if (doc.contains("expected_quadruple")) {
        const AdmissibleQuadruple expected = quadruple_from_json(doc["expected_quadruple"]);
        acc.record("expected_quadruple", quadruple_distance(q, expected),
                   get_tolerance(doc, "quadruple_tolerance", tol));
    }
    if (doc.contains("sequence_samples")) {
        const json& samples = doc["sequence_samples"];
        const json& ks = samples.at("k");
        const json& values = samples.at("values");
        double worst = 0.0;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            const std::size_t k = ks[i].get<std::size_t>();
            const CMatrix expected = matrix_from_json(values[i], "sequence sample");
            worst = std::max(worst, (res.potential.C.at(k) - expected).frobenius_norm());
        }
        acc.record("sequence_samples", worst, tol);
    }
    check_weyl_probes(acc, doc, tol, [&](Complex z) { return weyl_discrete(q, z); });

    // Structural invariants of every C_k in the sequence.
    const CMatrix j = signature_matrix(res.potential.m1(), res.potential.m2());
    double herm = 0.0, invol = 0.0;
    for (const auto& C : res.potential.C) {
        herm = std::max(herm, C.hermiticity_defect() / std::max(1.0, C.frobenius_norm()));
        invol = std::max(invol,
                         (C * C - CMatrix::identity(C.rows())).frobenius_norm());
    }
    acc.record("hermiticity", herm, 1e-10);
    acc.record("involution", invol, 1e-9);
    if (doc.contains("tail_tolerance")) {
        acc.record("tail", operator_norm(res.potential.C.back() - j),
                   doc["tail_tolerance"].get<double>());
    }
}

void run_quadruple_sequence_case(CheckAccumulator& acc, const json& doc) {
    const AdmissibleQuadruple q = quadruple_from_json(doc.at("quadruple"));
    const std::size_t K = doc.value("K", default_K(q.n()));
    const double tol = get_tolerance(doc, "tolerance", 1e-12);
    const DiscretePotential p = C_k_sequence(q, K);
    const CMatrix j = signature_matrix(q.m1(), q.m2());
    double worst = 0.0;
    for (const auto& C : p.C) worst = std::max(worst, (C - j).max_abs());
    acc.record("constant_signature_sequence", worst, tol);
}

}  // namespace

CorpusRow run_corpus_case(const json& doc, const std::string& name) {
    CheckAccumulator acc;
    acc.row.name = name;
    try {
        const std::string kind = doc.at("kind").get<std::string>();
        if (kind == "continuous_pipeline") {
            run_continuous_case(acc, doc);
        } else if (kind == "discrete_pipeline") {
            run_discrete_case(acc, doc);
        } else if (kind == "quadruple_sequence") {
            run_quadruple_sequence_case(acc, doc);
        } else {
            throw SchemaError("unknown corpus case kind: " + kind);
        }
        acc.row.pass = acc.row.ratio <= 1.0;
    } catch (const std::exception& e) {
        acc.row.pass = false;
        acc.row.error = e.what();
    }
    return acc.row;
}

CorpusReport run_corpus(const std::string& dir) {
    namespace fs = std::filesystem;
    CorpusReport report;
    std::vector<fs::path> files;
    if (fs::exists(dir)) {
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") {
                files.push_back(entry.path());
            }
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        const std::string name = file.stem().string();
        try {
            const json doc = load_json_file(file.string());
            report.rows.push_back(run_corpus_case(doc, name));
        } catch (const std::exception& e) {
            CorpusRow row;
            row.name = name;
            row.pass = false;
            row.error = e.what();
            report.rows.push_back(std::move(row));
        }
    }
    report.all_pass = !report.rows.empty() &&
                      std::all_of(report.rows.begin(), report.rows.end(),
                                  [](const CorpusRow& r) { return r.pass; });
    return report;
}

}  // namespace sdirac
