#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdirac/matrix.hpp"

namespace sdirac {

/// Thrown when an iterative kernel fails to converge or a factorization
/// meets a numerically singular pivot. Carries enough context to diagnose.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Linear solves
// ---------------------------------------------------------------------------

/// X with M X = RHS via partially pivoted elimination. Throws NumericalError
/// when a pivot is singular to working precision (message carries a
/// reciprocal-condition estimate).
CMatrix solve_linear(const CMatrix& M, const CMatrix& rhs);

/// Inverse via solve_linear against the identity.
CMatrix inverse(const CMatrix& M);

/// ||M|| * ||M^-1|| in the l2-induced norm; infinity when singular.
double condition_number(const CMatrix& M);

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

/// Largest singular value. Power iteration on M*M, switching to the exact
/// Hermitian eigensolver if the iteration stalls near a cluster.
double operator_norm(const CMatrix& M);

// ---------------------------------------------------------------------------
// Hermitian machinery
// ---------------------------------------------------------------------------

struct PosDefResult {
    bool positive = false;
    /// Lower-triangular factor with H_herm = L L*, populated iff positive.
    CMatrix factor;
    /// "ok", "not_hermitian", "nonpositive_pivot", "empty"
    std::string reason;
};

/// Tests H Hermitian (within 1e-10 * ||H||) and positive definite via the
/// pivots of a Cholesky factorization of the Hermitian part. Recursion
/// outputs carry tiny Hermiticity drift, which the symmetrization absorbs.
PosDefResult is_positive_definite(const CMatrix& H);

/// Solve H X = RHS given the Cholesky factor L of H (forward then back
/// substitution).
CMatrix cholesky_solve(const CMatrix& L, const CMatrix& rhs);

struct HermitianEig {
    std::vector<double> values;  // ascending
    CMatrix vectors;             // unitary, columns are eigenvectors
};

/// Cyclic complex Jacobi diagonalization of the Hermitian part of H.
HermitianEig hermitian_eig(const CMatrix& H);

/// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue_hermitian(const CMatrix& H);

/// Hermitian square root computed from the eigendecomposition; throws if any
/// eigenvalue is below -1e-12 * scale. Eigenvalues in [-tol, 0) clamp to 0.
CMatrix hermitian_sqrt(const CMatrix& H);

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

struct Spectrum {
    std::vector<Complex> eigenvalues;  // with multiplicity, length = order
};

struct SchurDecomposition {
    CMatrix Q;  // unitary
    CMatrix T;  // upper triangular; M = Q T Q*
};

/// Complex Schur form via Householder Hessenberg reduction followed by
/// shifted QR. Deterministic; throws NumericalError on non-convergence.
SchurDecomposition schur_decompose(const CMatrix& M);

/// Eigenvalues of a square matrix (diagonal of the Schur form). The
/// eigenvalue sum is validated against the trace before returning.
Spectrum spectrum(const CMatrix& M);

/// Unit eigenvector for the eigenvalue T(k,k) of a Schur pair, mapped back
/// through Q. Used for residual certification of spectra.
CMatrix schur_eigenvector(const SchurDecomposition& s, std::size_t k);

/// Reorders the Schur form so that every eigenvalue with select()==true is
/// moved to the leading block. Returns the number of selected eigenvalues.
std::size_t schur_reorder(SchurDecomposition& s, const std::vector<bool>& select);

// ---------------------------------------------------------------------------
// Matrix exponential and integrals
// ---------------------------------------------------------------------------

/// e^M by scaling-and-squaring with diagonal Pade approximants of degree up
/// to 13, thresholds from the standard backward-error analysis. Throws when
/// the result overflows the double range.
CMatrix expm(const CMatrix& M);

/// int_0^x e^{tA} Q e^{tA*} dt via the block-exponential identity: the
/// (1,2) block of exp(x [[A, Q], [0, -A*]]) times e^{xA*}. Result is
/// Hermitian PSD for Hermitian PSD Q. Requires x >= 0.
CMatrix gramian_integral(const CMatrix& A, const CMatrix& Q, double x);

// ---------------------------------------------------------------------------
// Rank-revealing QR
// ---------------------------------------------------------------------------

struct PivotedQR {
    CMatrix Q;                      // full unitary (rows(M) x rows(M))
    CMatrix R;                      // rows(M) x cols(M)
    std::vector<std::size_t> perm;  // M(:, perm) = Q R
    /// Numerical rank: diagonal entries of R above tol * |R(0,0)|.
    std::size_t rank(double rel_tol) const;
};

/// Householder QR with greedy column pivoting. The leading rank(t) columns
/// of Q form an orthonormal basis of the column space of M at tolerance t.
PivotedQR qr_column_pivoted(const CMatrix& M);

// ---------------------------------------------------------------------------
// Deterministic random generation for tests and harnesses
// ---------------------------------------------------------------------------

/// SplitMix-style stream derivation so that (seed, index) pairs give
/// independent reproducible substreams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Matrix with independent standard complex Gaussian entries.
CMatrix random_gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// Haar-like random unitary via QR of a Gaussian sample.
CMatrix random_unitary(std::size_t n, std::uint64_t seed);

}  // namespace sdirac
