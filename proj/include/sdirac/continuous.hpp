#pragma once

#include <vector>

#include "sdirac/quadruple.hpp"
#include "sdirac/realization.hpp"
#include "sdirac/riccati.hpp"

namespace sdirac {

/// Pseudo-exponential potential v(x) generated by an admissible quadruple.
/// Evaluation is pointwise on demand; the default grid and range guards are
/// derived from the spectrum of alpha at construction.
class ContinuousPotential {
public:
    explicit ContinuousPotential(AdmissibleQuadruple q);

    const AdmissibleQuadruple& quadruple() const { return q_; }
    std::size_t m1() const { return q_.m1(); }
    std::size_t m2() const { return q_.m2(); }

    /// Block row [e^{-ix alpha} theta1, e^{ix alpha} theta2].
    CMatrix lambda(double x) const;

    /// R(x) = S0 + 2 int_0^x e^{-2it alpha} theta1 theta1* e^{2it alpha*} dt,
    /// Hermitian and >= S0; computed through the block-exponential gramian.
    CMatrix R(double x) const;

    /// S(x) = e^{ix alpha} R(x) e^{-ix alpha*}; Hermitian positive, and the
    /// antiderivative of Lambda j Lambda*. Throws on loss of positivity,
    /// which signals inconsistent generating data.
    CMatrix S(double x) const;

    /// v(x) = 2 theta1* e^{2ix alpha*} R(x)^{-1} theta2 (the growth-safe
    /// form: both factors blow up at matching rates, the product stays
    /// bounded). Requires 0 <= x <= x_cap().
    CMatrix value(double x) const;

    /// The same potential through v(x) = 2 theta1* e^{ix alpha*} S(x)^{-1}
    /// e^{ix alpha} theta2; kept as the second algebraic route for
    /// cross-checks.
    CMatrix value_S_form(double x) const;

    /// ||theta1* e^{2ix alpha*} R(x)^{-1}||, the tail factor whose decay
    /// drives v -> 0.
    double tail_factor_norm(double x) const;

    /// 10 / min Im sigma(alpha), clamped to x_cap(); resolves the decay
    /// scale of the potential.
    double default_x_max() const;

    /// Overflow guard: beyond 300 / (2 max Im sigma(alpha)) the intermediate
    /// exponentials leave the double range.
    double x_cap() const { return x_cap_; }

    double min_imag_alpha() const { return min_imag_alpha_; }

    /// Sup of ||v|| over a uniform grid; the reported boundedness constant.
    double sup_norm_on_grid(double x_max, std::size_t samples = 400) const;

private:
    AdmissibleQuadruple q_;
    double min_imag_alpha_ = 0.0;
    double max_imag_alpha_ = 0.0;
    double x_cap_ = 0.0;
};

/// Weyl function phi(z) = i theta2* S0^{-1} (zI - theta)^{-1} theta1 with
/// theta = alpha - i theta1 theta1* S0^{-1}.
CMatrix weyl_continuous(const AdmissibleQuadruple& q, Complex z);

struct ContinuousInverseResult {
    ContinuousPotential potential;
    RiccatiSolution riccati;
    bool reduced = false;  // input was non-minimal and was reduced first
};

/// Full pipeline: minimality (reduce on request), positive Riccati solution,
/// quadruple, potential.
ContinuousInverseResult solve_inverse_continuous(const Realization& r, bool allow_reduce = true);

struct DecayProfile {
    std::vector<double> x;
    std::vector<double> v_norm;
    std::vector<double> tail_norm;  // ||theta1* e^{2ix alpha*} R(x)^{-1}||
    bool v_below_threshold = false;       // final ||v|| < 1e-3 ||v(0)||
    bool eventually_decreasing = false;   // both columns decrease on the tail half
};

DecayProfile decay_profile(const ContinuousPotential& p, double x_max, std::size_t samples);

}  // namespace sdirac
