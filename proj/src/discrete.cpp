#include "sdirac/discrete.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sdirac {

namespace {

struct RecursionRun {
    std::vector<CMatrix> Lambda;  // 0..K
    std::vector<CMatrix> S;       // 0..K
    CMatrix alpha_inv;
};

// Runs (d3)-(d4)-style recursions up to index K inclusive. With
// truncate_on_overflow the vectors stop at the last finite state instead of
// throwing (diagnostics use); otherwise overflow is an error.
RecursionRun run_recursion(const AdmissibleQuadruple& q, std::size_t K,
                           bool truncate_on_overflow = false) {
    const std::size_t n = q.n();
    RecursionRun run;
    run.Lambda.reserve(K + 1);
    run.S.reserve(K + 1);
    const CMatrix j = signature_matrix(q.m1(), q.m2());
    if (n > 0) {
        run.alpha_inv = inverse(q.alpha);
    } else {
        run.alpha_inv = CMatrix(0, 0);
    }
    CMatrix Lam = hcat(q.theta1, q.theta2);
    CMatrix S = q.S0.hermitian_part();
    for (std::size_t k = 0; k <= K; ++k) {
        if (!S.is_finite() || !Lam.is_finite()) {
            if (truncate_on_overflow) return run;
            throw NumericalError("discrete recursion: S_" + std::to_string(k) +
                                 " overflowed; reduce K");
        }
        run.Lambda.push_back(Lam);
        run.S.push_back(S);
        if (k == K) break;
        const CMatrix next_Lam = Lam + iu * (run.alpha_inv * (Lam * j));
        const CMatrix SaInv = S * run.alpha_inv.adjoint();
        const CMatrix next_S =
            (S + run.alpha_inv * SaInv + run.alpha_inv * (Lam * (j * Lam.adjoint())) *
                                             run.alpha_inv.adjoint())
                .hermitian_part();
        Lam = next_Lam;
        S = next_S;
    }
    return run;
}

void require_alpha_invertible(const AdmissibleQuadruple& q, const char* who) {
    if (q.n() == 0) return;
    const AlphaSpectrumFlags f = alpha_spectrum_flags(q);
    if (f.has_zero) {
        throw NumericalError(std::string(who) + ": 0 in sigma(alpha), recursion undefined");
    }
}

}  // namespace

std::pair<CMatrix, CMatrix> recursion_step(const AdmissibleQuadruple& q, const CMatrix& Lambda,
                                           const CMatrix& S) {
    require_alpha_invertible(q, "recursion_step");
    const std::size_t m = q.m1() + q.m2();
    if (Lambda.rows() != q.n() || Lambda.cols() != m || S.rows() != q.n() || !S.is_square()) {
        throw std::invalid_argument("recursion_step: state shapes do not match the quadruple");
    }
    if (q.n() == 0) return {Lambda, S};
    const CMatrix j = signature_matrix(q.m1(), q.m2());
    const CMatrix ainv = inverse(q.alpha);
    const CMatrix next_Lam = Lambda + iu * (ainv * (Lambda * j));
    const CMatrix next_S =
        (S + ainv * (S * ainv.adjoint()) + ainv * (Lambda * (j * Lambda.adjoint())) *
                                               ainv.adjoint())
            .hermitian_part();
    return {next_Lam, next_S};
}

CMatrix explicit_Lambda(const AdmissibleQuadruple& q, std::size_t k) {
    require_alpha_invertible(q, "explicit_Lambda");
    if (q.n() == 0) return hcat(q.theta1, q.theta2);
    const CMatrix ainv = inverse(q.alpha);
    const CMatrix I = CMatrix::identity(q.n());
    CMatrix plus = q.theta1;   // (I + i alpha^{-1})^k theta1
    CMatrix minus = q.theta2;  // (I - i alpha^{-1})^k theta2
    const CMatrix gp = I + iu * ainv;
    const CMatrix gm = I - iu * ainv;
    for (std::size_t s = 0; s < k; ++s) {
        plus = gp * plus;
        minus = gm * minus;
    }
    return hcat(plus, minus);
}

DiscretePotential C_k_sequence(const AdmissibleQuadruple& q, std::size_t K,
                               bool allow_i_in_spectrum) {
    require_alpha_invertible(q, "C_k_sequence");
    AlphaSpectrumFlags flags;
    if (q.n() > 0) flags = alpha_spectrum_flags(q);
    if (flags.has_i && !allow_i_in_spectrum) {
        throw SpectrumConditionError(
            "C_k_sequence: i in sigma(alpha); the sequence diagnostics are undefined. "
            "Pass allow_i_in_spectrum to proceed without them.");
    }

    DiscretePotential pot;
    pot.quadruple = q;
    const std::size_t m1 = q.m1();
    const std::size_t m2 = q.m2();
    const CMatrix j = signature_matrix(m1, m2);
    if (K == 0) return pot;

    // F_k = Lambda_k* S_k^{-1} Lambda_k is invariant under congruence of the
    // recursion state, and the recursion restarted from (Lambda_k, S_k)
    // continues the same sequence. Re-anchoring the state at S = I every few
    // steps therefore changes nothing algebraically while keeping the S_k
    // solves conditioned, which is what lets long sequences run in doubles.
    std::vector<CMatrix> F;
    F.reserve(K + 1);
    if (q.n() == 0) {
        F.assign(K + 1, CMatrix(m1 + m2, m1 + m2));
    } else {
        AdmissibleQuadruple local = q;
        CMatrix Lam = hcat(local.theta1, local.theta2);
        CMatrix S = local.S0.hermitian_part();
        CMatrix ainv = inverse(local.alpha);
        std::size_t since_restart = 0;
        for (std::size_t k = 0; k <= K; ++k) {
            const PosDefResult pd = is_positive_definite(S);
            if (!pd.positive) {
                throw NumericalError(
                    "C_k_sequence: S_" + std::to_string(k) + " lost positivity (" + pd.reason +
                    "); the generating data is inconsistent or a theta pair is nearly "
                    "uncontrollable (reduce_quadruple first)");
            }
            F.push_back((Lam.adjoint() * cholesky_solve(pd.factor, Lam)).hermitian_part());
            if (k == K) break;

            // Re-anchor once the spread of S endangers the solves; the pivot
            // ratio of the factor is a cheap spread estimate.
            double dmin = pd.factor(0, 0).real();
            double dmax = dmin;
            for (std::size_t i = 1; i < q.n(); ++i) {
                dmin = std::min(dmin, pd.factor(i, i).real());
                dmax = std::max(dmax, pd.factor(i, i).real());
            }
            const bool spread = (dmax / dmin) * (dmax / dmin) > 1e4;
            if (since_restart > 0 && (spread || since_restart >= 16)) {
                const AdmissibleQuadruple shifted =
                    make_quadruple(local.alpha, S, Lam.block(0, 0, q.n(), m1),
                                   Lam.block(0, m1, q.n(), m2));
                local = normalize_S0(shifted);
                Lam = hcat(local.theta1, local.theta2);
                S = local.S0;
                ainv = inverse(local.alpha);
                since_restart = 0;
            }

            const CMatrix next_Lam = Lam + iu * (ainv * (Lam * j));
            S = (S + ainv * (S * ainv.adjoint()) +
                 ainv * (Lam * (j * Lam.adjoint())) * ainv.adjoint())
                    .hermitian_part();
            Lam = next_Lam;
            ++since_restart;
        }
    }

    pot.C.reserve(K);
    for (std::size_t k = 0; k < K; ++k) {
        pot.C.push_back((j + F[k] - F[k + 1]).hermitian_part());
    }

    // Diagnostics stay in the original frame; they are computable as far as
    // the un-anchored S_k remain representable at working precision.
    {
        RecursionRun run = run_recursion(q, K, /*truncate_on_overflow=*/true);
        pot.diagnostics.Lambda = std::move(run.Lambda);
        pot.diagnostics.S = std::move(run.S);
    }

    if (q.n() > 0 && !flags.has_i) {
        try {
            pot.diagnostics.R = R_k_sequence(q, K);
        } catch (const NumericalError&) {
            pot.diagnostics.R.clear();  // out of representable range; C_k unaffected
        }
        // Psi_k = (alpha - iI)^{-k} (alpha + iI)^k theta1.
        const CMatrix I = CMatrix::identity(q.n());
        const CMatrix step = solve_linear(q.alpha - iu * I, q.alpha + iu * I);
        CMatrix psi = q.theta1;
        pot.diagnostics.Psi.push_back(psi);
        for (std::size_t k = 0; k < K; ++k) {
            psi = step * psi;
            if (!psi.is_finite()) break;
            pot.diagnostics.Psi.push_back(psi);
        }
        if (!flags.has_minus_i) {
            try {
                pot.diagnostics.Q = Q_k_sequence(q, K);
            } catch (const NumericalError&) {
                pot.diagnostics.Q.clear();
            }
        }
    }
    return pot;
}

namespace {

// Shared driver for the R_k / Q_k sequences. The increment form is the
// primary construction: it accumulates (signed) Gram terms without
// cancellation. The definition form (powers sandwiching S_k) is the
// independent cross-check, binding only while its own rounding floor
// (eps * ||P^k||^2 ||S_k||, catastrophic cancellation past that) stays
// below the comparison tolerance.
std::vector<CMatrix> sandwich_sequence(const AdmissibleQuadruple& q, std::size_t K,
                                       bool r_variant, const char* who) {
    const std::size_t n = q.n();
    const CMatrix I = CMatrix::identity(n);
    const Complex sgn = r_variant ? iu : -iu;  // R: (I - i a^{-1}); Q: (I + i a^{-1})

    // Increment form: R: +2 W W* with W_k = (a - iI)^{-k-1} (a + iI)^k th1;
    //                 Q: -2 V V* with V_k = (a + iI)^{-k-1} (a - iI)^k th2.
    const CMatrix shift_num = q.alpha + (r_variant ? iu : -iu) * I;
    const CMatrix shift_den = q.alpha - (r_variant ? iu : -iu) * I;
    const CMatrix step = solve_linear(shift_den, shift_num);
    CMatrix W = solve_linear(shift_den, r_variant ? q.theta1 : q.theta2);
    const double sign = r_variant ? 2.0 : -2.0;

    std::vector<CMatrix> seq;
    seq.reserve(K + 1);
    seq.push_back(q.S0.hermitian_part());
    for (std::size_t k = 0; k + 1 <= K; ++k) {
        seq.push_back((seq.back() + sign * (W * W.adjoint())).hermitian_part());
        if (!seq.back().is_finite()) {
            throw NumericalError(std::string(who) + ": sequence overflowed at k = " +
                                 std::to_string(k + 1) + "; reduce K");
        }
        W = step * W;
    }

    // Definition-form cross-check within its honest precision horizon.
    RecursionRun run = run_recursion(q, K);
    const CMatrix P = inverse(I - sgn * run.alpha_inv);
    CMatrix Pk = I;
    for (std::size_t k = 0; k <= K; ++k) {
        const double pknorm = Pk.frobenius_norm();
        const double floor_est = 16.0 * static_cast<double>(n) *
                                 std::numeric_limits<double>::epsilon() * pknorm * pknorm *
                                 run.S[k].frobenius_norm();
        const double tol = 1e-9 * std::max(1.0, seq[k].frobenius_norm());
        if (floor_est < 0.5 * tol) {
            const CMatrix def = (Pk * run.S[k] * Pk.adjoint()).hermitian_part();
            if ((def - seq[k]).frobenius_norm() > tol) {
                throw NumericalError(std::string(who) +
                                     ": definition and increment forms disagree at k = " +
                                     std::to_string(k));
            }
        }
        Pk = P * Pk;
        if (!Pk.is_finite()) break;
    }
    return seq;
}

}  // namespace

std::vector<CMatrix> R_k_sequence(const AdmissibleQuadruple& q, std::size_t K) {
    require_alpha_invertible(q, "R_k_sequence");
    if (q.n() == 0) return std::vector<CMatrix>(K + 1, CMatrix(0, 0));
    if (alpha_spectrum_flags(q).has_i) {
        throw SpectrumConditionError("R_k_sequence: i in sigma(alpha)");
    }
    return sandwich_sequence(q, K, true, "R_k_sequence");
}

std::vector<CMatrix> Q_k_sequence(const AdmissibleQuadruple& q, std::size_t K) {
    require_alpha_invertible(q, "Q_k_sequence");
    if (q.n() == 0) return std::vector<CMatrix>(K + 1, CMatrix(0, 0));
    if (alpha_spectrum_flags(q).has_minus_i) {
        throw SpectrumConditionError("Q_k_sequence: -i in sigma(alpha)");
    }
    return sandwich_sequence(q, K, false, "Q_k_sequence");
}

CMatrix weyl_discrete(const AdmissibleQuadruple& q, Complex z) {
    const std::size_t n = q.n();
    if (n == 0) return CMatrix(q.m1(), q.m2());
    const CMatrix S0inv_th2th2 = solve_linear(q.S0, q.theta2 * q.theta2.adjoint());
    const CMatrix gamma = q.alpha - iu * S0inv_th2th2.adjoint();
    const double gap_tol = 1e-10 * std::max(operator_norm(gamma), 1.0);
    for (const auto& lambda : spectrum(gamma).eigenvalues) {
        if (std::abs(z + lambda) < gap_tol) {
            throw NumericalError("weyl_discrete: z within " + std::to_string(gap_tol) +
                                 " of a pole");
        }
    }
    const CMatrix zI_gamma = z * CMatrix::identity(n) + gamma;
    const CMatrix resolvent_th2 = solve_linear(zI_gamma, q.theta2);
    return -iu * (solve_linear(q.S0, q.theta1).adjoint() * resolvent_th2);
}

std::size_t default_K(std::size_t n) { return std::max<std::size_t>(5 * n + 20, 50); }

DiscreteInverseResult solve_inverse_discrete(const Realization& r, std::size_t K,
                                             bool allow_reduce) {
    r.validate();
    if (r.convention != Convention::discrete) {
        throw std::invalid_argument("solve_inverse_discrete: realization must use the discrete "
                                    "convention");
    }
    Realization work = r;
    bool reduced = false;
    if (!is_minimal(work)) {
        if (!allow_reduce) {
            throw std::invalid_argument("solve_inverse_discrete: realization not minimal");
        }
        work = minimal_realization(work);
        reduced = true;
    }
    RiccatiSolution sol =
        solve_max_positive(RiccatiProblem{work.A, work.B, work.C, RiccatiVariant::discrete});
    AdmissibleQuadruple q = from_discrete(work.A, work.B, work.C, sol.X);
    if (q.n() > 0) {
        const AlphaSpectrumFlags flags = alpha_spectrum_flags(q);
        if (flags.has_zero) {
            throw SpectrumConditionError(
                "solve_inverse_discrete: recovered alpha is singular; the recursion is "
                "undefined for this input");
        }
        if (flags.has_i) {
            throw SpectrumConditionError(
                "solve_inverse_discrete: recovered alpha has i in its spectrum "
                "(min |lambda - i| below tolerance); the asymptotic machinery is undefined "
                "for this input");
        }
    }
    DiscretePotential pot = C_k_sequence(q, K);
    return DiscreteInverseResult{std::move(pot), std::move(sol), reduced};
}

AsymptoticsReport asymptotics_check(const DiscretePotential& p) {
    AsymptoticsReport rep;
    const CMatrix j = signature_matrix(p.m1(), p.m2());
    rep.c_minus_j.reserve(p.K());
    for (const auto& C : p.C) rep.c_minus_j.push_back(operator_norm(C - j));
    if (!p.diagnostics.R.empty() && !p.diagnostics.Psi.empty()) {
        const std::size_t count = std::min(p.diagnostics.R.size(), p.diagnostics.Psi.size());
        rep.tail_factor.reserve(count);
        for (std::size_t k = 0; k < count; ++k) {
            // R_k eventually exceeds the representable condition range; the
            // report keeps the prefix where the solve is trustworthy.
            try {
                rep.tail_factor.push_back(
                    operator_norm(solve_linear(p.diagnostics.R[k], p.diagnostics.Psi[k])));
            } catch (const NumericalError&) {
                break;
            }
        }
    }
    if (!rep.c_minus_j.empty()) {
        const double base = rep.c_minus_j.front();
        rep.threshold = base > 1e-12 ? 1e-6 * base : 1e-6;
        rep.tail_below_threshold = rep.c_minus_j.back() < rep.threshold;
        const CMatrix& last = p.C.back();
        const std::size_t m1 = p.m1();
        const std::size_t m2 = p.m2();
        rep.c11_gap = (last.block(0, 0, m1, m1) - CMatrix::identity(m1)).frobenius_norm();
        rep.c12_gap = last.block(0, m1, m1, m2).frobenius_norm();
        rep.c21_gap = last.block(m1, 0, m2, m1).frobenius_norm();
        rep.c22_gap = (last.block(m1, m1, m2, m2) + CMatrix::identity(m2)).frobenius_norm();
    }
    return rep;
}

ReductionResult reduce_quadruple(const AdmissibleQuadruple& q, ReduceTarget which) {
    ReductionResult out;
    out.original_n = q.n();
    if (q.n() > 0) {
        const AlphaSpectrumFlags flags = alpha_spectrum_flags(q);
        if (flags.has_zero || flags.has_i) {
            throw SpectrumConditionError("reduce_quadruple: 0 or i in sigma(alpha)");
        }
    }
    const bool selected_controllable =
        which == ReduceTarget::theta1 ? q.controllable_theta1 : q.controllable_theta2;
    if (selected_controllable || q.n() == 0) {
        out.reduced = q;
        out.passthrough = true;
        return out;
    }

    const AdmissibleQuadruple base = normalize_S0(q);
    const CMatrix& sel = which == ReduceTarget::theta1 ? base.theta1 : base.theta2;
    const KrylovBasis kb = krylov_image_basis(base.alpha, sel);
    const std::size_t n = base.n();
    const std::size_t nr = kb.rank;

    if (nr == 0) {
        // The selected theta vanishes, so C_k == j. The canonical generator
        // of that sequence: scalar alpha = 2i, S0 = 1, controllable theta1,
        // theta2 = 0 (identity: 4i = i * theta1 theta1*).
        CMatrix th1(1, q.m1());
        if (q.m1() > 0) th1(0, 0) = 2.0;
        out.reduced = make_quadruple(CMatrix::diagonal({Complex{0.0, 2.0}}),
                                     CMatrix::identity(1), th1, CMatrix(1, q.m2()));
        out.replaced_trivial = true;
        return out;
    }
    if (nr == n) {
        // Rank tolerance disagreed with the stored flag; keep the input.
        out.reduced = q;
        out.passthrough = true;
        return out;
    }

    // Unitary change mapping the Krylov image onto the last nr coordinates:
    // rows of T are the complement basis followed by the image basis.
    const CMatrix basis_img = kb.full_q.block(0, 0, n, nr);
    const CMatrix basis_comp = kb.full_q.block(0, nr, n, n - nr);
    const CMatrix T = hcat(basis_comp, basis_img).adjoint();

    const CMatrix alpha_hat = T * base.alpha * T.adjoint();
    const CMatrix th1_hat = T * base.theta1;
    const CMatrix th2_hat = T * base.theta2;

    // Invariance must make the top-right block of alpha_hat and the top
    // block of the selected theta vanish.
    const double tol = 1e-8 * std::max(1.0, operator_norm(base.alpha));
    if (alpha_hat.block(0, n - nr, n - nr, nr).frobenius_norm() > tol) {
        throw NumericalError("reduce_quadruple: Krylov subspace not invariant at tolerance");
    }
    const CMatrix& sel_hat = which == ReduceTarget::theta1 ? th1_hat : th2_hat;
    if (sel_hat.block(0, 0, n - nr, sel_hat.cols()).frobenius_norm() >
        1e-8 * std::max(1.0, operator_norm(sel))) {
        throw NumericalError("reduce_quadruple: selected theta not supported on the subspace");
    }

    out.reduced = make_quadruple(alpha_hat.block(n - nr, n - nr, nr, nr), CMatrix::identity(nr),
                                 th1_hat.block(n - nr, 0, nr, th1_hat.cols()),
                                 th2_hat.block(n - nr, 0, nr, th2_hat.cols()));
    return out;
}

}  // namespace sdirac
