#include "sdirac/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sdirac {

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

// Random T = U diag(s) V* with log-spaced singular values, so the condition
// number is controlled exactly.
CMatrix random_conditioned(std::size_t n, double cond, std::uint64_t seed) {
    const CMatrix U = random_unitary(n, derive_seed(seed, 11));
    const CMatrix V = random_unitary(n, derive_seed(seed, 12));
    std::vector<Complex> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
        s[i] = std::pow(cond, 0.5 - t);  // from sqrt(cond) down to 1/sqrt(cond)
    }
    return U * CMatrix::diagonal(s) * V.adjoint();
}

struct PipelineOutputs {
    AdmissibleQuadruple quadruple;
    std::vector<CMatrix> potential_samples;  // v on grid, or C_k
};

PipelineOutputs run_pipeline(const Realization& r, SweepMode mode,
                             const std::vector<double>& grid, std::size_t K) {
    PipelineOutputs out;
    if (mode == SweepMode::continuous) {
        const ContinuousInverseResult res = solve_inverse_continuous(r, false);
        out.quadruple = res.potential.quadruple();
        out.potential_samples.reserve(grid.size());
        for (double x : grid) out.potential_samples.push_back(res.potential.value(x));
    } else {
        const DiscreteInverseResult res = solve_inverse_discrete(r, K, false);
        out.quadruple = res.potential.quadruple;
        out.potential_samples = res.potential.C;
    }
    return out;
}

double sup_deviation(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b) {
    const std::size_t count = std::min(a.size(), b.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < count; ++i) sup = std::max(sup, operator_norm(a[i] - b[i]));
    return sup;
}

}  // namespace

void SweepConfig::validate() const {
    base.validate();
    if (deltas.empty()) throw std::invalid_argument("SweepConfig: delta list is empty");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        // Strictly descending; a single trailing zero serves as a control row.
        if (deltas[i] < 0.0) {
            throw std::invalid_argument("SweepConfig: deltas must be nonnegative");
        }
        if (i > 0 && deltas[i] >= deltas[i - 1]) {
            throw std::invalid_argument("SweepConfig: deltas must be strictly descending");
        }
    }
    if (trials <= 0) throw std::invalid_argument("SweepConfig: trials must be positive");
}

Realization perturb_realization(const Realization& r, double delta, std::uint64_t seed) {
    if (delta < 0.0) throw std::invalid_argument("perturb_realization: delta must be >= 0");
    const TriplePerturbation d = perturb_triple(r.A, r.B, r.C, delta, seed);
    return Realization{r.A + d.A, r.B + d.B, r.C + d.C, r.convention};
}

SweepResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    if (!is_minimal(cfg.base)) {
        throw std::invalid_argument("run_sweep: base realization must be minimal");
    }
    const SweepMode mode = cfg.mode;
    const std::size_t K = cfg.K > 0 ? cfg.K : default_K(cfg.base.n());

    // Deviation grid from the base recovery (shared across all trials).
    std::vector<double> grid;
    PipelineOutputs base;
    if (mode == SweepMode::continuous) {
        const ContinuousInverseResult res = solve_inverse_continuous(cfg.base, false);
        const double x_max = cfg.x_max > 0.0 ? cfg.x_max : res.potential.default_x_max();
        const std::size_t samples = std::max<std::size_t>(cfg.grid_samples, 2);
        grid.reserve(samples);
        for (std::size_t k = 0; k < samples; ++k) {
            grid.push_back(x_max * static_cast<double>(k) / static_cast<double>(samples - 1));
        }
    }
    base = run_pipeline(cfg.base, mode, grid, K);

    SweepResult result;
    result.rows.reserve(cfg.deltas.size());
    bool any_inconclusive = false;
    for (std::size_t di = 0; di < cfg.deltas.size(); ++di) {
        const double delta = cfg.deltas[di];
        DeltaStats row;
        row.delta = delta;
        std::vector<double> quad_devs, pot_devs;
        for (int t = 0; t < cfg.trials; ++t) {
            const std::uint64_t trial_seed =
                derive_seed(cfg.seed, di * static_cast<std::uint64_t>(cfg.trials) + t);
            TrialRecord rec;
            rec.delta = delta;
            rec.trial = t;
            const Realization pert = perturb_realization(cfg.base, delta, trial_seed);
            if (!is_minimal(pert)) {
                ++row.skipped;
                rec.skipped = true;
                result.trials.push_back(rec);
                continue;
            }
            PipelineOutputs trial;
            try {
                trial = run_pipeline(pert, mode, grid, K);
            } catch (const NumericalError&) {
                ++row.skipped;  // includes i in sigma(alpha) for discrete mode
                rec.skipped = true;
                result.trials.push_back(rec);
                continue;
            }
            rec.quad_distance = quadruple_distance(trial.quadruple, base.quadruple);
            rec.potential_dev =
                sup_deviation(trial.potential_samples, base.potential_samples);
            result.trials.push_back(rec);
            quad_devs.push_back(rec.quad_distance);
            pot_devs.push_back(rec.potential_dev);
            ++row.completed;
        }
        row.quad_median = median(quad_devs);
        row.pot_median = median(pot_devs);
        for (double v : quad_devs) row.quad_max = std::max(row.quad_max, v);
        for (double v : pot_devs) row.pot_max = std::max(row.pot_max, v);
        if (row.skipped * 5 > cfg.trials) any_inconclusive = true;  // > 20% skips
        result.rows.push_back(row);
    }

    result.inconclusive = any_inconclusive;
    bool monotone = true;
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        if (result.rows[i].quad_median > result.rows[i - 1].quad_median * (1.0 + 1e-9) ||
            result.rows[i].pot_median > result.rows[i - 1].pot_median * (1.0 + 1e-9)) {
            monotone = false;
        }
    }
    const DeltaStats& first = result.rows.front();
    const DeltaStats& last = result.rows.back();
    result.quad_reduction =
        last.quad_median > 0.0 ? first.quad_median / last.quad_median
                               : std::numeric_limits<double>::infinity();
    result.pot_reduction = last.pot_median > 0.0
                               ? first.pot_median / last.pot_median
                               : std::numeric_limits<double>::infinity();
    result.trend_pass = monotone && last.quad_median < first.quad_median / 10.0 &&
                        last.pot_median < first.pot_median / 10.0 && !any_inconclusive;
    return result;
}

UniquenessReport uniqueness_experiment(const Realization& r, int trials, std::uint64_t seed,
                                       SweepMode mode, std::size_t grid_samples, std::size_t K) {
    if (!is_minimal(r)) {
        throw std::invalid_argument("uniqueness_experiment: realization must be minimal");
    }
    const std::size_t n = r.n();
    const std::size_t KK = K > 0 ? K : default_K(n);

    std::vector<double> grid;
    if (mode == SweepMode::continuous) {
        const ContinuousInverseResult res = solve_inverse_continuous(r, false);
        const double x_max = res.potential.default_x_max();
        const std::size_t samples = std::max<std::size_t>(grid_samples, 2);
        for (std::size_t k = 0; k < samples; ++k) {
            grid.push_back(x_max * static_cast<double>(k) / static_cast<double>(samples - 1));
        }
    }
    const PipelineOutputs base = run_pipeline(r, mode, grid, KK);

    UniquenessReport rep;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t ts = derive_seed(seed, static_cast<std::uint64_t>(t));
        // Condition numbers spread over [1, 100].
        const double cond = 1.0 + 99.0 * static_cast<double>(t) / std::max(1, trials - 1);
        const CMatrix T = n > 0 ? random_conditioned(n, cond, ts) : CMatrix(0, 0);
        const Realization transformed = similarity(r, T);

        UniquenessTrial trial;
        trial.condition = n > 0 ? condition_number(T) : 1.0;
        trial.tolerance = 1e-8 * (1.0 + trial.condition);
        const PipelineOutputs other = run_pipeline(transformed, mode, grid, KK);
        trial.deviation = sup_deviation(other.potential_samples, base.potential_samples);
        trial.pass = trial.deviation <= trial.tolerance;
        rep.max_deviation = std::max(rep.max_deviation, trial.deviation);
        rep.trials.push_back(trial);
    }
    rep.pass = std::all_of(rep.trials.begin(), rep.trials.end(),
                           [](const UniquenessTrial& t) { return t.pass; });
    return rep;
}

}  // namespace sdirac
