#pragma once

#include <utility>
#include <vector>

#include "sdirac/quadruple.hpp"
#include "sdirac/realization.hpp"
#include "sdirac/riccati.hpp"

namespace sdirac {

/// Per-step state of the discrete recursions together with the derived
/// diagnostic sequences. Index k runs 0..K (Lambda, S, R, Q, Psi) while the
/// potential itself has K entries C_0..C_{K-1}.
struct DiscreteDiagnostics {
    std::vector<CMatrix> Lambda;
    std::vector<CMatrix> S;
    std::vector<CMatrix> R;
    std::vector<CMatrix> Q;
    std::vector<CMatrix> Psi;
};

/// Finite prefix {C_0, ..., C_{K-1}} of the discrete potential: Hermitian
/// involutions with eigenvalue signature (m1, m2), tending to the signature
/// matrix j.
struct DiscretePotential {
    AdmissibleQuadruple quadruple;
    std::vector<CMatrix> C;
    DiscreteDiagnostics diagnostics;

    std::size_t K() const { return C.size(); }
    std::size_t m1() const { return quadruple.m1(); }
    std::size_t m2() const { return quadruple.m2(); }
    std::size_t m() const { return m1() + m2(); }
};

/// One step of the coupled recursions
///   Lambda' = Lambda + i alpha^{-1} Lambda j,
///   S'      = S + alpha^{-1} S alpha^{-*} + alpha^{-1} Lambda j Lambda* alpha^{-*},
/// with S' Hermitian-projected. Requires 0 not in sigma(alpha).
std::pair<CMatrix, CMatrix> recursion_step(const AdmissibleQuadruple& q, const CMatrix& Lambda,
                                           const CMatrix& S);

/// Closed form Lambda_k = [(I + i alpha^{-1})^k theta1, (I - i alpha^{-1})^k theta2].
CMatrix explicit_Lambda(const AdmissibleQuadruple& q, std::size_t k);

/// Builds C_k = j + Lambda_k* S_k^{-1} Lambda_k - Lambda_{k+1}* S_{k+1}^{-1} Lambda_{k+1}
/// for k < K, with all diagnostic sequences filled. Enforces 0 not in
/// sigma(alpha); i in sigma(alpha) is refused unless allow_i_in_spectrum
/// (the R_k diagnostics are skipped in that case). Loss of positivity of
/// any S_k is a fatal inconsistency.
DiscretePotential C_k_sequence(const AdmissibleQuadruple& q, std::size_t K,
                               bool allow_i_in_spectrum = false);

/// R_k = (I - i alpha^{-1})^{-k} S_k (I + i alpha^{-*})^{-k}. Built from the
/// definition and cross-checked against the rank-m1 PSD increment form;
/// disagreement beyond 1e-9 * scale throws. Requires 0, i not in sigma(alpha).
std::vector<CMatrix> R_k_sequence(const AdmissibleQuadruple& q, std::size_t K);

/// Q_k = (I + i alpha^{-1})^{-k} S_k (I - i alpha^{-*})^{-k}, the dual
/// sequence with negative-semidefinite rank-m2 increments. Requires
/// 0, -i not in sigma(alpha).
std::vector<CMatrix> Q_k_sequence(const AdmissibleQuadruple& q, std::size_t K);

/// Weyl function phi(z) = -i theta1* S0^{-1} (zI + gamma)^{-1} theta2 with
/// gamma = alpha - i theta2 theta2* S0^{-1}.
CMatrix weyl_discrete(const AdmissibleQuadruple& q, Complex z);

/// Default sequence length: max(5n + 20, 50), long enough to expose the
/// C_k -> j tail.
std::size_t default_K(std::size_t n);

struct DiscreteInverseResult {
    DiscretePotential potential;
    RiccatiSolution riccati;
    bool reduced = false;
};

/// Thrown by the discrete pipeline when the recovered alpha has i in its
/// spectrum (the sequence diagnostics are undefined there).
class SpectrumConditionError : public NumericalError {
public:
    explicit SpectrumConditionError(const std::string& what) : NumericalError(what) {}
};

DiscreteInverseResult solve_inverse_discrete(const Realization& r, std::size_t K,
                                             bool allow_reduce = true);

struct AsymptoticsReport {
    std::vector<double> c_minus_j;    // ||C_k - j|| per k
    std::vector<double> tail_factor;  // ||R_k^{-1} Psi_k|| per k (empty if i in sigma)
    double threshold = 0.0;
    bool tail_below_threshold = false;
    // Block limits at the last index: C11 -> I_{m1}, C22 -> -I_{m2},
    // off-diagonal blocks -> 0.
    double c11_gap = 0.0;
    double c12_gap = 0.0;
    double c21_gap = 0.0;
    double c22_gap = 0.0;
};

AsymptoticsReport asymptotics_check(const DiscretePotential& p);

enum class ReduceTarget { theta1, theta2 };

struct ReductionResult {
    AdmissibleQuadruple reduced;
    std::size_t original_n = 0;
    bool passthrough = false;      // selected pair already controllable
    bool replaced_trivial = false; // selected theta was zero; canonical
                                   // generator of C_k == j returned instead
};

/// Cuts the quadruple down to the controllability subspace of the selected
/// pair via a unitary Krylov-basis change, after normalizing S0 to the
/// identity. The reduced quadruple generates the same {C_k}.
ReductionResult reduce_quadruple(const AdmissibleQuadruple& q, ReduceTarget which);

}  // namespace sdirac
