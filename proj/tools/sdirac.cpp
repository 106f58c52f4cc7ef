// Command-line front end for the inverse-problem pipelines: recover
// potentials from realization files, verify Weyl defects, run stability
// sweeps, and replay the example corpus. All file formats are documented in
// the README.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdirac/continuous.hpp"
#include "sdirac/corpus.hpp"
#include "sdirac/discrete.hpp"
#include "sdirac/json_io.hpp"
#include "sdirac/stability.hpp"
#include "sdirac/verify.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitNotMinimal = 3;
constexpr int kExitSolver = 4;
constexpr int kExitSpectrum = 5;
constexpr int kExitVerifyFail = 6;
constexpr int kExitInconclusive = 7;

using nlohmann::json;
using namespace sdirac;

struct GridSpec {
    double start = 0.0;
    double end = 0.0;
    std::size_t count = 0;  // 0 = derive defaults
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    const auto p1 = text.find(':');
    const auto p2 = text.find(':', p1 == std::string::npos ? p1 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos) {
        throw SchemaError("--grid expects start:end:count");
    }
    try {
        g.start = std::stod(text.substr(0, p1));
        g.end = std::stod(text.substr(p1 + 1, p2 - p1 - 1));
        const long long n = std::stoll(text.substr(p2 + 1));
        if (n < 1) throw SchemaError("--grid count must be >= 1");
        g.count = static_cast<std::size_t>(n);
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception&) {
        throw SchemaError("--grid expects numeric start:end:count");
    }
    if (!(g.end > g.start) && g.count > 1) throw SchemaError("--grid needs end > start");
    return g;
}

// Accepts "3i", "-2i", "1+2i", "1-2i", "2.5", "i".
Complex parse_complex(std::string s) {
    if (s.empty()) throw SchemaError("empty complex literal");
    auto parse_num = [](const std::string& t) -> double {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return std::stod(t);
    };
    try {
        if (s.back() == 'i') {
            s.pop_back();
            // Split at the last +/- that is not an exponent sign or leading.
            for (std::size_t i = s.size(); i-- > 1;) {
                if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
                    return Complex{std::stod(s.substr(0, i)), parse_num(s.substr(i))};
                }
            }
            return Complex{0.0, parse_num(s)};
        }
        return Complex{std::stod(s), 0.0};
    } catch (const std::exception&) {
        throw SchemaError("cannot parse complex literal: " + s);
    }
}

std::vector<Complex> parse_complex_list(const std::string& text) {
    std::vector<Complex> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string tok =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) out.push_back(parse_complex(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw SchemaError("--z list is empty");
    return out;
}

// SEED env overrides the flag (documented in the README).
std::uint64_t resolve_seed(std::uint64_t flag_seed, std::string& source) {
    if (const char* env = std::getenv("SEED")) {
        source = "env";
        return std::strtoull(env, nullptr, 10);
    }
    source = "flag";
    return flag_seed;
}

class ManifestWriter {
public:
    ManifestWriter(std::string prefix, std::string command)
        : prefix_(std::move(prefix)), start_(std::chrono::steady_clock::now()) {
        doc_["command"] = std::move(command);
        doc_["tool_version"] = kVersion;
        doc_["inputs"] = json::array();
        doc_["outputs"] = json::array();
        doc_["parameters"] = json::object();
    }

    void add_input(const std::string& path) { doc_["inputs"].push_back(path); }
    void add_output(const std::string& path) { doc_["outputs"].push_back(path); }
    void set_parameter(const std::string& key, const json& value) {
        doc_["parameters"][key] = value;
    }
    void set_seed(std::uint64_t seed, const std::string& source) {
        doc_["seed"] = seed;
        doc_["seed_source"] = source;
    }

    void finalize(const std::string& status, const std::string& error = "") {
        const auto elapsed = std::chrono::steady_clock::now() - start_;
        doc_["wall_time_s"] =
            std::chrono::duration_cast<std::chrono::duration<double>>(elapsed).count();
        doc_["status"] = status;
        if (!error.empty()) doc_["error"] = error;
        write_json_file(prefix_ + "_manifest.json", doc_);
    }

private:
    std::string prefix_;
    json doc_;
    std::chrono::steady_clock::time_point start_;
};

void write_potential_csv(const std::string& path, const ContinuousPotential& p,
                         const GridSpec& grid) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "x";
    for (std::size_t r = 0; r < p.m1(); ++r) {
        for (std::size_t c = 0; c < p.m2(); ++c) {
            out << ",re_v_" << r << "_" << c << ",im_v_" << r << "_" << c;
        }
    }
    out << ",norm\n";
    for (std::size_t k = 0; k < grid.count; ++k) {
        const double x = grid.count == 1
                             ? grid.start
                             : grid.start + (grid.end - grid.start) *
                                                static_cast<double>(k) /
                                                static_cast<double>(grid.count - 1);
        const CMatrix v = p.value(x);
        out << format_full(x);
        for (std::size_t r = 0; r < v.rows(); ++r) {
            for (std::size_t c = 0; c < v.cols(); ++c) {
                out << "," << format_full(v(r, c).real()) << ","
                    << format_full(v(r, c).imag());
            }
        }
        out << "," << format_full(operator_norm(v)) << "\n";
    }
}

void write_sequence_csv(const std::string& path, const DiscretePotential& p) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    const CMatrix j = signature_matrix(p.m1(), p.m2());
    out << "k,c_minus_j_norm,lambda_min_R\n";
    for (std::size_t k = 0; k < p.K(); ++k) {
        out << k << "," << format_full(operator_norm(p.C[k] - j)) << ",";
        if (k < p.diagnostics.R.size()) {
            out << format_full(min_eigenvalue_hermitian(p.diagnostics.R[k]));
        } else {
            out << "nan";
        }
        out << "\n";
    }
}

json sequence_to_json(const DiscretePotential& p) {
    json cs = json::array();
    for (const auto& C : p.C) cs.push_back(matrix_to_json(C));
    return json{{"K", p.K()}, {"m1", p.m1()}, {"m2", p.m2()}, {"C", std::move(cs)}};
}

json spectrum_summary(const AdmissibleQuadruple& q) {
    json eigs = json::array();
    if (q.n() > 0) {
        for (const auto& l : spectrum(q.alpha).eigenvalues) {
            eigs.push_back(json::array({l.real(), l.imag()}));
        }
    }
    const AlphaSpectrumFlags flags = alpha_spectrum_flags(q);
    return json{{"alpha_eigenvalues", std::move(eigs)},
                {"min_imag", q.n() > 0 ? flags.min_imag : 0.0},
                {"has_i", flags.has_i},
                {"has_zero", flags.has_zero}};
}

int run_invert_continuous(const std::string& input, const std::string& out_prefix,
                          const std::string& grid_text, bool reduce) {
    ManifestWriter manifest(out_prefix, "invert-continuous");
    manifest.add_input(input);
    manifest.set_parameter("reduce", reduce);
    try {
        const Realization r = realization_from_json(load_json_file(input));
        if (!is_minimal(r) && !reduce) {
            manifest.finalize("error", "realization is not minimal (pass --reduce)");
            std::cerr << "error: realization is not minimal; pass --reduce to reduce it first\n";
            return kExitNotMinimal;
        }
        const ContinuousInverseResult res = solve_inverse_continuous(r, reduce);
        const ContinuousPotential& p = res.potential;

        GridSpec grid;
        if (!grid_text.empty()) {
            grid = parse_grid(grid_text);
        } else {
            grid = GridSpec{0.0, p.default_x_max(), 400};
        }
        manifest.set_parameter("grid", json::array({grid.start, grid.end, grid.count}));

        const std::string quad_path = out_prefix + "_quadruple.json";
        const std::string csv_path = out_prefix + "_potential.csv";
        const std::string report_path = out_prefix + "_report.json";

        write_json_file(quad_path, quadruple_to_json(p.quadruple()));
        write_potential_csv(csv_path, p, grid);

        const DecayProfile prof = decay_profile(p, grid.end > 0 ? grid.end : 1.0,
                                                std::max<std::size_t>(grid.count, 4));
        const AdmissibilityReport adm = check_admissible(p.quadruple());
        write_json_file(report_path,
                        json{{"riccati_residual", res.riccati.residual_norm},
                             {"riccati_iterations", res.riccati.iterations},
                             {"reduced", res.reduced},
                             {"identity_residual", adm.identity_residual},
                             {"alpha", spectrum_summary(p.quadruple())},
                             {"bound_M", p.sup_norm_on_grid(grid.end > 0 ? grid.end : 1.0)},
                             {"decay_below_threshold", prof.v_below_threshold},
                             {"eventually_decreasing", prof.eventually_decreasing}});
        manifest.add_output(quad_path);
        manifest.add_output(csv_path);
        manifest.add_output(report_path);
        manifest.finalize("ok");
        std::cout << "wrote " << quad_path << ", " << csv_path << ", " << report_path << "\n";
        return kExitOk;
    } catch (const SchemaError& e) {
        manifest.finalize("error", e.what());
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const std::exception& e) {
        manifest.finalize("error", e.what());
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

int run_invert_discrete(const std::string& input, const std::string& out_prefix, long long K,
                        bool reduce) {
    ManifestWriter manifest(out_prefix, "invert-discrete");
    manifest.add_input(input);
    manifest.set_parameter("reduce", reduce);
    try {
        if (K < 0) throw SchemaError("--K must be >= 0");
        const Realization r = realization_from_json(load_json_file(input));
        if (!is_minimal(r) && !reduce) {
            manifest.finalize("error", "realization is not minimal (pass --reduce)");
            std::cerr << "error: realization is not minimal; pass --reduce to reduce it first\n";
            return kExitNotMinimal;
        }
        const std::size_t KK = K == 0 && !r.A.empty() ? default_K(r.n())
                               : static_cast<std::size_t>(K);
        manifest.set_parameter("K", KK);
        const DiscreteInverseResult res = solve_inverse_discrete(r, KK, reduce);

        const std::string quad_path = out_prefix + "_quadruple.json";
        const std::string csv_path = out_prefix + "_ck.csv";
        const std::string seq_path = out_prefix + "_ck.json";
        const std::string report_path = out_prefix + "_report.json";

        write_json_file(quad_path, quadruple_to_json(res.potential.quadruple));
        write_sequence_csv(csv_path, res.potential);
        write_json_file(seq_path, sequence_to_json(res.potential));

        const AsymptoticsReport asym = asymptotics_check(res.potential);
        const AdmissibilityReport adm = check_admissible(res.potential.quadruple);
        write_json_file(report_path,
                        json{{"riccati_residual", res.riccati.residual_norm},
                             {"reduced", res.reduced},
                             {"identity_residual", adm.identity_residual},
                             {"alpha", spectrum_summary(res.potential.quadruple)},
                             {"tail_threshold", asym.threshold},
                             {"tail_below_threshold", asym.tail_below_threshold},
                             {"block_gaps",
                              json{{"c11", asym.c11_gap},
                                   {"c12", asym.c12_gap},
                                   {"c21", asym.c21_gap},
                                   {"c22", asym.c22_gap}}}});
        manifest.add_output(quad_path);
        manifest.add_output(csv_path);
        manifest.add_output(seq_path);
        manifest.add_output(report_path);
        manifest.finalize("ok");
        std::cout << "wrote " << quad_path << ", " << csv_path << ", " << seq_path << ", "
                  << report_path << "\n";
        return kExitOk;
    } catch (const SchemaError& e) {
        manifest.finalize("error", e.what());
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const SpectrumConditionError& e) {
        manifest.finalize("error", e.what());
        std::cerr << "error: " << e.what() << "\n";
        return kExitSpectrum;
    } catch (const std::exception& e) {
        manifest.finalize("error", e.what());
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

int run_verify(const std::string& realization_path, const std::string& quadruple_path,
               const std::string& mode, const std::string& z_text, double L, double h,
               long long K, const std::string& out_prefix) {
    ManifestWriter manifest(out_prefix, "verify");
    manifest.add_input(realization_path);
    manifest.add_input(quadruple_path);
    try {
        const std::vector<Complex> zs = parse_complex_list(z_text);
        const Realization r = realization_from_json(load_json_file(realization_path));
        const AdmissibleQuadruple q = quadruple_from_json(load_json_file(quadruple_path));
        manifest.set_parameter("mode", mode);
        manifest.set_parameter("L", L);
        manifest.set_parameter("h", h);

        json reports = json::array();
        bool any_fail = false;
        bool any_inconclusive = false;
        if (mode == "continuous") {
            if (r.convention != Convention::continuous) {
                throw SchemaError("verify: realization convention must match --mode");
            }
            const ContinuousPotential p(q);
            for (Complex z : zs) {
                const CMatrix phi = evaluate(r, z);
                const WeylDefectReport rep = weyl_defect_continuous(p, phi, z, L, h);
                reports.push_back(defect_report_to_json(rep));
                any_fail |= rep.verdict == Verdict::fail;
                any_inconclusive |= rep.verdict == Verdict::inconclusive;
                std::cout << "z = " << z.real() << (z.imag() < 0 ? "" : "+") << z.imag()
                          << "i: "
                          << (rep.verdict == Verdict::pass          ? "pass"
                              : rep.verdict == Verdict::fail        ? "fail"
                                                                    : "inconclusive")
                          << " (tail ratio " << rep.ratio << ")\n";
            }
        } else if (mode == "discrete") {
            if (r.convention != Convention::discrete) {
                throw SchemaError("verify: realization convention must match --mode");
            }
            const std::size_t KK = K <= 0 ? default_K(q.n()) : static_cast<std::size_t>(K);
            manifest.set_parameter("K", KK);
            const DiscretePotential p = C_k_sequence(q, KK);
            for (Complex z : zs) {
                const CMatrix phi = evaluate(r, z);
                const WeylDefectReport rep = weyl_defect_discrete(p, phi, z, KK);
                reports.push_back(defect_report_to_json(rep));
                any_fail |= rep.verdict == Verdict::fail;
                any_inconclusive |= rep.verdict == Verdict::inconclusive;
                std::cout << "z = " << z.real() << (z.imag() < 0 ? "" : "+") << z.imag()
                          << "i: "
                          << (rep.verdict == Verdict::pass          ? "pass"
                              : rep.verdict == Verdict::fail        ? "fail"
                                                                    : "inconclusive")
                          << " (tail ratio " << rep.ratio << ")\n";
            }
        } else {
            throw SchemaError("verify: --mode must be continuous or discrete");
        }

        const std::string report_path = out_prefix + "_verify.json";
        write_json_file(report_path, json{{"reports", std::move(reports)}});
        manifest.add_output(report_path);
        manifest.finalize(any_fail ? "fail" : (any_inconclusive ? "inconclusive" : "ok"));
        if (any_fail) return kExitVerifyFail;
        if (any_inconclusive) return kExitInconclusive;
        return kExitOk;
    } catch (const SchemaError& e) {
        manifest.finalize("error", e.what());
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const std::exception& e) {
        manifest.finalize("error", e.what());
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

int run_stability(const std::string& config_path, const std::string& out_prefix,
                  std::uint64_t flag_seed, bool seed_flag_given, int trials_override) {
    ManifestWriter manifest(out_prefix, "stability");
    manifest.add_input(config_path);
    try {
        SweepConfig cfg = sweep_config_from_json(load_json_file(config_path));
        std::string seed_source = "config";
        if (seed_flag_given) {
            cfg.seed = flag_seed;
            seed_source = "flag";
        }
        if (const char* env = std::getenv("SEED")) {
            cfg.seed = std::strtoull(env, nullptr, 10);
            seed_source = "env";
        }
        if (trials_override > 0) cfg.trials = trials_override;
        manifest.set_seed(cfg.seed, seed_source);
        manifest.set_parameter("trials", cfg.trials);
        try {
            cfg.validate();
        } catch (const std::invalid_argument& e) {
            throw SchemaError(e.what());
        }

        const SweepResult res = run_sweep(cfg);

        const std::string csv_path = out_prefix + "_sweep.csv";
        const std::string summary_path = out_prefix + "_summary.json";
        std::ofstream csv(csv_path);
        if (!csv) throw std::runtime_error("cannot write " + csv_path);
        csv << "delta,trial,quad_distance,potential_dev,skipped\n";
        for (const auto& t : res.trials) {
            csv << format_full(t.delta) << "," << t.trial << ","
                << format_full(t.quad_distance) << "," << format_full(t.potential_dev) << ","
                << (t.skipped ? 1 : 0) << "\n";
        }
        csv.close();
        write_json_file(summary_path, sweep_result_to_json(res));
        manifest.add_output(csv_path);
        manifest.add_output(summary_path);
        manifest.finalize("ok");
        std::cout << "trend " << (res.trend_pass ? "pass" : (res.inconclusive ? "inconclusive"
                                                                              : "fail"))
                  << "; wrote " << csv_path << ", " << summary_path << "\n";
        return kExitOk;
    } catch (const SchemaError& e) {
        manifest.finalize("error", e.what());
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const std::exception& e) {
        manifest.finalize("error", e.what());
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

int run_corpus_command(const std::string& dir) {
    const CorpusReport report = run_corpus(dir);
    std::size_t width = 12;
    for (const auto& row : report.rows) width = std::max(width, row.name.size() + 2);
    for (const auto& row : report.rows) {
        std::cout << (row.pass ? "PASS " : "FAIL ") << row.name;
        for (std::size_t i = row.name.size(); i < width; ++i) std::cout << ' ';
        if (!row.error.empty()) {
            std::cout << "error: " << row.error << "\n";
        } else {
            std::cout << "worst " << row.worst_check << ": " << row.deviation
                      << " (tolerance " << row.tolerance << ")\n";
        }
    }
    std::cout << (report.all_pass ? "corpus: all cases pass\n" : "corpus: FAILURES present\n");
    return report.all_pass ? kExitOk : 1;
}

int run_evaluate(const std::string& quadruple_path, const std::string& mode,
                 const std::string& grid_text, long long K, const std::string& out_prefix) {
    ManifestWriter manifest(out_prefix, "evaluate");
    manifest.add_input(quadruple_path);
    try {
        const AdmissibleQuadruple q = quadruple_from_json(load_json_file(quadruple_path));
        if (mode == "continuous") {
            const ContinuousPotential p(q);
            GridSpec grid = grid_text.empty() ? GridSpec{0.0, p.default_x_max(), 400}
                                              : parse_grid(grid_text);
            const std::string csv_path = out_prefix + "_potential.csv";
            write_potential_csv(csv_path, p, grid);
            manifest.add_output(csv_path);
            manifest.finalize("ok");
            std::cout << "wrote " << csv_path << "\n";
        } else if (mode == "discrete") {
            const std::size_t KK = K <= 0 ? default_K(q.n()) : static_cast<std::size_t>(K);
            const DiscretePotential p = C_k_sequence(q, KK);
            const std::string csv_path = out_prefix + "_ck.csv";
            const std::string seq_path = out_prefix + "_ck.json";
            write_sequence_csv(csv_path, p);
            write_json_file(seq_path, sequence_to_json(p));
            manifest.add_output(csv_path);
            manifest.add_output(seq_path);
            manifest.finalize("ok");
            std::cout << "wrote " << csv_path << ", " << seq_path << "\n";
        } else {
            throw SchemaError("evaluate: --mode must be continuous or discrete");
        }
        return kExitOk;
    } catch (const SchemaError& e) {
        manifest.finalize("error", e.what());
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const SpectrumConditionError& e) {
        manifest.finalize("error", e.what());
        std::cerr << "error: " << e.what() << "\n";
        return kExitSpectrum;
    } catch (const std::exception& e) {
        manifest.finalize("error", e.what());
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inverse problems for skew-selfadjoint Dirac systems from rational Weyl "
                 "functions"};
    app.set_version_flag("--version", std::string("sdirac ") + kVersion);
    app.require_subcommand(1);

    // invert-continuous
    std::string ic_input, ic_out, ic_grid;
    bool ic_reduce = false;
    auto* ic = app.add_subcommand("invert-continuous",
                                  "Recover the continuous potential from a realization");
    ic->add_option("--input", ic_input, "realization JSON")->required();
    ic->add_option("--out", ic_out, "output path prefix")->required();
    ic->add_option("--grid", ic_grid, "sampling grid start:end:count");
    ic->add_flag("--reduce", ic_reduce, "reduce a non-minimal realization first");

    // invert-discrete
    std::string id_input, id_out;
    long long id_K = 0;
    bool id_reduce = false;
    auto* id = app.add_subcommand("invert-discrete",
                                  "Recover the discrete potential sequence from a realization");
    id->add_option("--input", id_input, "realization JSON")->required();
    id->add_option("--out", id_out, "output path prefix")->required();
    id->add_option("--K", id_K, "sequence length (default max(5n+20, 50))");
    id->add_flag("--reduce", id_reduce, "reduce a non-minimal realization first");

    // verify
    std::string v_real, v_quad, v_mode = "continuous", v_z = "2i,3i,4i", v_out;
    double v_L = 5.0, v_h = 1e-3;
    long long v_K = 0;
    auto* ver = app.add_subcommand("verify",
                                   "Check the Weyl defect of a recovered potential against "
                                   "the realization's transfer function");
    ver->add_option("--realization", v_real, "realization JSON")->required();
    ver->add_option("--quadruple", v_quad, "quadruple JSON")->required();
    ver->add_option("--mode", v_mode, "continuous | discrete");
    ver->add_option("--z", v_z, "comma-separated spectral points, e.g. 2i,3i,1+4i");
    ver->add_option("--L", v_L, "integration range (continuous)");
    ver->add_option("--h", v_h, "integration step (continuous)");
    ver->add_option("--K", v_K, "sequence length (discrete)");
    ver->add_option("--out", v_out, "output path prefix")->required();

    // stability
    std::string st_config, st_out;
    std::uint64_t st_seed = 0;
    int st_trials = 0;
    auto* st = app.add_subcommand("stability", "Run a perturbation sweep");
    st->add_option("--config", st_config, "sweep config JSON")->required();
    st->add_option("--out", st_out, "output path prefix")->required();
    auto* seed_opt = st->add_option("--seed", st_seed, "override the config seed");
    st->add_option("--trials", st_trials, "override the config trial count");

    // corpus
    std::string co_dir = "corpus/cases";
    auto* co = app.add_subcommand("corpus", "Replay the example corpus");
    co->add_option("--dir", co_dir, "corpus case directory");

    // evaluate (re-ingestion path: potential directly from a quadruple file)
    std::string ev_quad, ev_mode = "continuous", ev_grid, ev_out;
    long long ev_K = 0;
    auto* ev = app.add_subcommand("evaluate",
                                  "Evaluate the potential generated by a quadruple file");
    ev->add_option("--quadruple", ev_quad, "quadruple JSON")->required();
    ev->add_option("--mode", ev_mode, "continuous | discrete");
    ev->add_option("--grid", ev_grid, "sampling grid start:end:count (continuous)");
    ev->add_option("--K", ev_K, "sequence length (discrete)");
    ev->add_option("--out", ev_out, "output path prefix")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitSchema;
    }

    if (ic->parsed()) return run_invert_continuous(ic_input, ic_out, ic_grid, ic_reduce);
    if (id->parsed()) return run_invert_discrete(id_input, id_out, id_K, id_reduce);
    if (ver->parsed()) return run_verify(v_real, v_quad, v_mode, v_z, v_L, v_h, v_K, v_out);
    if (st->parsed()) {
        return run_stability(st_config, st_out, st_seed, seed_opt->count() > 0, st_trials);
    }
    if (co->parsed()) return run_corpus_command(co_dir);
    if (ev->parsed()) return run_evaluate(ev_quad, ev_mode, ev_grid, ev_K, ev_out);
    return kExitSchema;
}
