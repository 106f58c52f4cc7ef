#pragma once

#include <vector>

#include "sdirac/matcore.hpp"
#include "sdirac/matrix.hpp"

namespace sdirac {

/// Which inverse pipeline a realization feeds. The conventions differ in the
/// off-diagonal block sizes: continuous takes B of size n x m1 and C of size
/// m2 x n; discrete takes B of size n x m2 and C of size m1 x n.
enum class Convention { continuous, discrete };

/// State-space realization of the strictly proper rational matrix function
/// phi(z) = C (zI - A)^{-1} B.
struct Realization {
    CMatrix A;  // n x n
    CMatrix B;
    CMatrix C;
    Convention convention = Convention::continuous;

    std::size_t n() const { return A.rows(); }
    std::size_t m1() const {
        return convention == Convention::continuous ? B.cols() : C.rows();
    }
    std::size_t m2() const {
        return convention == Convention::continuous ? C.rows() : B.cols();
    }

    /// Throws std::invalid_argument if the block shapes are not conformable.
    void validate() const;
};

/// Relative tolerance for all rank decisions on Krylov matrices.
inline constexpr double kRankTol = 1e-10;

struct RankReport {
    bool full_rank = false;
    std::size_t rank = 0;
};

/// Rank of [B, AB, ..., A^{n-1}B] at the shared tolerance; full_rank means
/// the pair {A, B} is controllable.
RankReport is_controllable(const CMatrix& A, const CMatrix& B);

/// Dual test through {A*, C*}.
RankReport is_observable(const CMatrix& C, const CMatrix& A);

bool is_minimal(const Realization& r);

/// phi(z) by linear solve; throws NumericalError when z is at or numerically
/// near an eigenvalue of A.
CMatrix evaluate(const Realization& r, Complex z);

/// Probe points away from every spectrum involved:
/// z_k = 2(1+||A||) e^{2 pi i k/count} + 2 i (1+||A||).
std::vector<Complex> probe_points(const Realization& r, std::size_t count = 20);

/// Controllable-then-observable Kalman reduction via orthonormal Krylov
/// bases. The output evaluates identically at probe points and has minimal
/// state dimension (the McMillan degree).
Realization minimal_realization(const Realization& r);

/// Basis change {T^{-1}AT, T^{-1}B, CT}; throws on singular T.
Realization similarity(const Realization& r, const CMatrix& T);

/// Krylov column-space basis: the leading rank columns of Q are orthonormal
/// and span span{B, AB, ..., A^{n-1}B}.
struct KrylovBasis {
    CMatrix full_q;    // n x n unitary
    std::size_t rank;  // dimension of the span
};
KrylovBasis krylov_image_basis(const CMatrix& A, const CMatrix& B);

}  // namespace sdirac
