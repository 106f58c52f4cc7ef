#include "sdirac/quadruple.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sdirac/realization.hpp"

namespace sdirac {

AdmissibleQuadruple make_quadruple(CMatrix alpha, CMatrix S0, CMatrix theta1, CMatrix theta2) {
    if (!alpha.is_square() || !S0.is_square() || alpha.rows() != S0.rows()) {
        throw std::invalid_argument("make_quadruple: alpha and S0 must be square of equal order");
    }
    if (theta1.rows() != alpha.rows() || theta2.rows() != alpha.rows()) {
        throw std::invalid_argument("make_quadruple: theta blocks must have n rows");
    }
    AdmissibleQuadruple q;
    q.alpha = std::move(alpha);
    q.S0 = std::move(S0);
    q.theta1 = std::move(theta1);
    q.theta2 = std::move(theta2);
    q.controllable_theta1 = is_controllable(q.alpha, q.theta1).full_rank;
    q.controllable_theta2 = is_controllable(q.alpha, q.theta2).full_rank;
    return q;
}

AdmissibilityReport check_admissible(const AdmissibleQuadruple& q) {
    AdmissibilityReport rep;
    const CMatrix lhs = q.alpha * q.S0 - q.S0 * q.alpha.adjoint();
    const CMatrix rhs = iu * (q.theta1 * q.theta1.adjoint() + q.theta2 * q.theta2.adjoint());
    rep.identity_residual = operator_norm(lhs - rhs);
    const double n1 = operator_norm(q.theta1);
    const double n2 = operator_norm(q.theta2);
    rep.identity_scale = operator_norm(q.alpha) * operator_norm(q.S0) + n1 * n1 + n2 * n2;

    const PosDefResult pd = is_positive_definite(q.S0);
    rep.s0_positive = pd.positive;
    rep.s0_reason = pd.reason;
    rep.controllable_theta1 = q.controllable_theta1;
    rep.controllable_theta2 = q.controllable_theta2;

    if (q.n() > 0) {
        rep.alpha_spectrum = spectrum(q.alpha).eigenvalues;
        rep.min_imag_alpha = rep.alpha_spectrum.front().imag();
        for (const auto& l : rep.alpha_spectrum) {
            rep.min_imag_alpha = std::min(rep.min_imag_alpha, l.imag());
        }
    }

    rep.admissible = rep.s0_positive &&
                     rep.identity_residual <=
                         1e-10 * std::max(rep.identity_scale, 1e-300);
    return rep;
}

AlphaSpectrumFlags alpha_spectrum_flags(const AdmissibleQuadruple& q, double tol) {
    AlphaSpectrumFlags f;
    if (q.n() == 0) {
        f.min_imag = std::numeric_limits<double>::infinity();
        return f;
    }
    const double scale = std::max(1.0, operator_norm(q.alpha));
    bool first = true;
    for (const auto& l : spectrum(q.alpha).eigenvalues) {
        if (std::abs(l) <= tol * scale) f.has_zero = true;
        if (std::abs(l - iu) <= tol * scale) f.has_i = true;
        if (std::abs(l + iu) <= tol * scale) f.has_minus_i = true;
        f.min_imag = first ? l.imag() : std::min(f.min_imag, l.imag());
        first = false;
    }
    return f;
}

AdmissibleQuadruple from_continuous(const CMatrix& A, const CMatrix& B, const CMatrix& C,
                                    const CMatrix& X) {
    const PosDefResult pd = is_positive_definite(X);
    if (!pd.positive && X.rows() > 0) {
        throw std::invalid_argument("from_continuous: X is not Hermitian positive (" + pd.reason +
                                    ")");
    }
    // alpha = A + i B B* X^{-1}; the solve runs through the Cholesky factor.
    const CMatrix BBs = B * B.adjoint();
    const CMatrix alpha =
        X.rows() > 0 ? A + iu * cholesky_solve(pd.factor, BBs.adjoint()).adjoint() : A;
    return make_quadruple(alpha, X, B, iu * (X * C.adjoint()));
}

AdmissibleQuadruple from_discrete(const CMatrix& A, const CMatrix& B, const CMatrix& C,
                                  const CMatrix& X) {
    const PosDefResult pd = is_positive_definite(X);
    if (!pd.positive && X.rows() > 0) {
        throw std::invalid_argument("from_discrete: X is not Hermitian positive (" + pd.reason +
                                    ")");
    }
    const CMatrix BBs = B * B.adjoint();
    const CMatrix alpha =
        X.rows() > 0 ? -A + iu * cholesky_solve(pd.factor, BBs.adjoint()).adjoint() : -A;
    return make_quadruple(alpha, X, X * C.adjoint(), iu * B);
}

AdmissibleQuadruple normalize_S0(const AdmissibleQuadruple& q) {
    const std::size_t n = q.n();
    if (n == 0) return q;
    if ((q.S0 - CMatrix::identity(n)).max_abs() == 0.0) return q;
    const CMatrix root = hermitian_sqrt(q.S0);
    // S0^{-1/2} applied through solves against the Hermitian square root.
    const CMatrix alpha = solve_linear(root, q.alpha * root);
    const CMatrix th1 = solve_linear(root, q.theta1);
    const CMatrix th2 = solve_linear(root, q.theta2);
    return make_quadruple(alpha, CMatrix::identity(n), th1, th2);
}

double quadruple_distance(const AdmissibleQuadruple& a, const AdmissibleQuadruple& b) {
    if (a.n() != b.n() || a.m1() != b.m1() || a.m2() != b.m2()) {
        throw std::invalid_argument("quadruple_distance: dimension mismatch");
    }
    return operator_norm(a.alpha - b.alpha) + operator_norm(a.S0 - b.S0) +
           operator_norm(a.theta1 - b.theta1) + operator_norm(a.theta2 - b.theta2);
}

}  // namespace sdirac
