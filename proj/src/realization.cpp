#include "sdirac/realization.hpp"

#include <cmath>
#include <stdexcept>

namespace sdirac {

void Realization::validate() const {
    if (!A.is_square()) throw std::invalid_argument("Realization: A must be square");
    if (B.rows() != A.rows()) throw std::invalid_argument("Realization: B row count != n");
    if (C.cols() != A.rows()) throw std::invalid_argument("Realization: C column count != n");
    if (!A.is_finite() || !B.is_finite() || !C.is_finite()) {
        throw std::invalid_argument("Realization: non-finite entry");
    }
}

namespace {

CMatrix krylov_matrix(const CMatrix& A, const CMatrix& B) {
    const std::size_t n = A.rows();
    CMatrix K(n, n * B.cols());
    CMatrix P = B;
    for (std::size_t k = 0; k < n; ++k) {
        K.set_block(0, k * B.cols(), P);
        if (k + 1 < n) P = A * P;
    }
    return K;
}

}  // namespace

RankReport is_controllable(const CMatrix& A, const CMatrix& B) {
    if (!A.is_square() || A.rows() != B.rows()) {
        throw std::invalid_argument("is_controllable: nonconformable pair");
    }
    const std::size_t n = A.rows();
    RankReport rep;
    if (n == 0) {
        rep.full_rank = true;  // vacuous span condition
        return rep;
    }
    if (B.cols() == 0) return rep;
    const PivotedQR qr = qr_column_pivoted(krylov_matrix(A, B));
    rep.rank = qr.rank(kRankTol);
    rep.full_rank = rep.rank == n;
    return rep;
}

RankReport is_observable(const CMatrix& C, const CMatrix& A) {
    return is_controllable(A.adjoint(), C.adjoint());
}

bool is_minimal(const Realization& r) {
    return is_controllable(r.A, r.B).full_rank && is_observable(r.C, r.A).full_rank;
}

CMatrix evaluate(const Realization& r, Complex z) {
    r.validate();
    const std::size_t n = r.n();
    if (n == 0) return CMatrix(r.C.rows(), r.B.cols());
    const CMatrix zIA = z * CMatrix::identity(n) - r.A;
    // Nearness to the spectrum is reported rather than silently degraded.
    const double gap_tol = 1e-10 * std::max(operator_norm(r.A), 1.0);
    for (const auto& lambda : spectrum(r.A).eigenvalues) {
        if (std::abs(z - lambda) < gap_tol) {
            throw NumericalError("evaluate: z within " + std::to_string(gap_tol) +
                                 " of an eigenvalue of A");
        }
    }
    return r.C * solve_linear(zIA, r.B);
}

std::vector<Complex> probe_points(const Realization& r, std::size_t count) {
    const double radius = 2.0 * (1.0 + operator_norm(r.A));
    std::vector<Complex> pts;
    pts.reserve(count);
    const double pi = std::acos(-1.0);
    for (std::size_t k = 0; k < count; ++k) {
        const double t = 2.0 * pi * static_cast<double>(k) / static_cast<double>(count);
        pts.push_back(radius * std::exp(iu * t) + iu * radius);
    }
    return pts;
}

KrylovBasis krylov_image_basis(const CMatrix& A, const CMatrix& B) {
    const PivotedQR qr = qr_column_pivoted(krylov_matrix(A, B));
    return KrylovBasis{qr.Q, qr.rank(kRankTol)};
}

Realization minimal_realization(const Realization& r) {
    r.validate();
    Realization cur = r;

    // Stage 1: restrict to the reachable subspace.
    if (cur.n() > 0 && cur.B.cols() > 0) {
        const KrylovBasis kb = krylov_image_basis(cur.A, cur.B);
        if (kb.rank < cur.n()) {
            const CMatrix U = kb.full_q.block(0, 0, cur.n(), kb.rank);
            cur = Realization{(U.adjoint() * cur.A * U), U.adjoint() * cur.B, cur.C * U,
                              cur.convention};
        }
    } else if (cur.B.cols() == 0 && cur.n() > 0) {
        cur = Realization{CMatrix(0, 0), CMatrix(0, cur.B.cols()), CMatrix(cur.C.rows(), 0),
                          cur.convention};
    }

    // Stage 2: quotient by the unobservable subspace (dual Krylov image).
    if (cur.n() > 0 && cur.C.rows() > 0) {
        const KrylovBasis kb = krylov_image_basis(cur.A.adjoint(), cur.C.adjoint());
        if (kb.rank < cur.n()) {
            const CMatrix W = kb.full_q.block(0, 0, cur.n(), kb.rank);
            cur = Realization{(W.adjoint() * cur.A * W), W.adjoint() * cur.B, cur.C * W,
                              cur.convention};
        }
    } else if (cur.C.rows() == 0 && cur.n() > 0) {
        cur = Realization{CMatrix(0, 0), CMatrix(0, cur.B.cols()), CMatrix(cur.C.rows(), 0),
                          cur.convention};
    }
    return cur;
}

Realization similarity(const Realization& r, const CMatrix& T) {
    r.validate();
    if (!T.is_square() || T.rows() != r.n()) {
        throw std::invalid_argument("similarity: T must be n x n");
    }
    const CMatrix Tinv_A = solve_linear(T, r.A * T);
    const CMatrix Tinv_B = solve_linear(T, r.B);
    return Realization{Tinv_A, Tinv_B, r.C * T, r.convention};
}

}  // namespace sdirac
