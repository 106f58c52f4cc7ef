#pragma once

#include <cstdint>

#include "sdirac/matcore.hpp"
#include "sdirac/matrix.hpp"
#include "sdirac/realization.hpp"

namespace sdirac {

/// Sign convention of the i(AX - XA*) term. The discrete equation is the
/// continuous one for -A, so both reduce to one standard form internally.
enum class RiccatiVariant { continuous, discrete };

struct RiccatiProblem {
    CMatrix A;
    CMatrix B;
    CMatrix C;
    RiccatiVariant variant = RiccatiVariant::continuous;
};

struct RiccatiSolution {
    CMatrix X;  // Hermitian positive
    double residual_norm = 0.0;
    int iterations = 0;
};

/// Operator norm of X C*C X +/- i(AX - XA*) - BB* at the given X.
double residual(const RiccatiProblem& p, const CMatrix& X);

/// Scale used for relative residual verdicts:
/// ||X||^2 ||C||^2 + ||A|| ||X|| + ||B||^2.
double residual_scale(const RiccatiProblem& p, const CMatrix& X);

/// Rewrites the equation in the standard form G*X + XG - X(C*C)X + BB* = 0
/// and extracts the stabilizing (= maximal) solution from the stable
/// invariant subspace of the 2n x 2n Hamiltonian, then polishes with a few
/// Newton steps. Throws NumericalError when the stable/antistable split is
/// not n/n.
RiccatiSolution solve_via_hamiltonian(const RiccatiProblem& p);

/// Independent path: Newton-Kleinman iteration started from a stabilizing
/// X0 = P^{-1} obtained by a shifted-Lyapunov stabilization of {G, C*}.
/// Each iterate solves one Lyapunov equation and is Hermitian-projected.
RiccatiSolution solve_via_newton(const RiccatiProblem& p);

/// The unique positive solution under minimality of (A, B, C). Refuses
/// non-minimal input (uniqueness is not guaranteed there). Tries the
/// Hamiltonian path first and falls back to Newton-Kleinman; the returned
/// solution satisfies X > 0 and residual <= 1e-10 * residual_scale.
RiccatiSolution solve_max_positive(const RiccatiProblem& p);

/// Deterministic perturbation of a triple: Gaussian directions normalized so
/// the summed operator norms equal delta/2 (strictly inside the delta ball).
struct TriplePerturbation {
    CMatrix A, B, C;
};
TriplePerturbation perturb_triple(const CMatrix& A, const CMatrix& B, const CMatrix& C,
                                  double delta, std::uint64_t seed);

struct SensitivityStats {
    double max_deviation = 0.0;
    double mean_deviation = 0.0;
    int completed = 0;
    int skipped = 0;  // perturbed problem lost minimality
};

/// Re-solves `trials` perturbed problems (sub-seeded from seed) and reports
/// the spread of ||X - X_perturbed||.
SensitivityStats sensitivity_probe(const RiccatiProblem& p, double delta, int trials,
                                   std::uint64_t seed);

}  // namespace sdirac
