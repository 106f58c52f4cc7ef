#pragma once

#include <string>
#include <vector>

#include "sdirac/matcore.hpp"
#include "sdirac/matrix.hpp"

namespace sdirac {

/// The generating data {alpha, S0, theta1, theta2} of a pseudo-exponential
/// potential: S0 > 0 and alpha S0 - S0 alpha* = i (theta1 theta1* +
/// theta2 theta2*). Controllability flags are computed at construction and
/// stored so reports stay consistent with the rank tolerance in force.
struct AdmissibleQuadruple {
    CMatrix alpha;   // n x n
    CMatrix S0;      // n x n Hermitian positive
    CMatrix theta1;  // n x m1
    CMatrix theta2;  // n x m2
    bool controllable_theta1 = false;
    bool controllable_theta2 = false;

    std::size_t n() const { return alpha.rows(); }
    std::size_t m1() const { return theta1.cols(); }
    std::size_t m2() const { return theta2.cols(); }
};

/// Builds the quadruple and fills the controllability flags; shape errors
/// throw, admissibility itself is not enforced here (see check_admissible).
AdmissibleQuadruple make_quadruple(CMatrix alpha, CMatrix S0, CMatrix theta1, CMatrix theta2);

struct AdmissibilityReport {
    double identity_residual = 0.0;  // ||alpha S0 - S0 alpha* - i(...)||
    double identity_scale = 0.0;     // ||alpha|| ||S0|| + ||th1||^2 + ||th2||^2
    bool s0_positive = false;
    std::string s0_reason;
    bool controllable_theta1 = false;
    bool controllable_theta2 = false;
    std::vector<Complex> alpha_spectrum;
    double min_imag_alpha = 0.0;
    bool admissible = false;  // identity within 1e-10 * scale and S0 > 0
};

AdmissibilityReport check_admissible(const AdmissibleQuadruple& q);

/// Spectral location flags of alpha needed by the discrete pipeline.
struct AlphaSpectrumFlags {
    bool has_zero = false;     // 0 in sigma(alpha): recursion undefined
    bool has_i = false;        // i in sigma(alpha): R_k machinery undefined
    bool has_minus_i = false;  // -i in sigma(alpha): Q_k machinery undefined
    double min_imag = 0.0;
};
AlphaSpectrumFlags alpha_spectrum_flags(const AdmissibleQuadruple& q, double tol = 1e-10);

/// Continuous recovery step: alpha = A + i B B* X^{-1}, S0 = X, theta1 = B,
/// theta2 = i X C*, for X the positive solution of the continuous equation.
AdmissibleQuadruple from_continuous(const CMatrix& A, const CMatrix& B, const CMatrix& C,
                                    const CMatrix& X);

/// Discrete recovery step: alpha = -A + i B B* X^{-1}, S0 = X,
/// theta1 = X C*, theta2 = i B.
AdmissibleQuadruple from_discrete(const CMatrix& A, const CMatrix& B, const CMatrix& C,
                                  const CMatrix& X);

/// Equivalent quadruple with S0 = I via conjugation by S0^{-1/2}; generates
/// the same potential. Idempotent.
AdmissibleQuadruple normalize_S0(const AdmissibleQuadruple& q);

/// ||alpha-alpha'|| + ||S0-S0'|| + ||theta1-theta1'|| + ||theta2-theta2'||.
double quadruple_distance(const AdmissibleQuadruple& a, const AdmissibleQuadruple& b);

}  // namespace sdirac
