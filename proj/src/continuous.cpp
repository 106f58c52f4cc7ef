#include "sdirac/continuous.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sdirac {

ContinuousPotential::ContinuousPotential(AdmissibleQuadruple q) : q_(std::move(q)) {
    if (q_.n() == 0) {
        min_imag_alpha_ = std::numeric_limits<double>::infinity();
        max_imag_alpha_ = 0.0;
        x_cap_ = std::numeric_limits<double>::infinity();
        return;
    }
    const Spectrum sp = spectrum(q_.alpha);
    min_imag_alpha_ = sp.eigenvalues.front().imag();
    max_imag_alpha_ = min_imag_alpha_;
    for (const auto& l : sp.eigenvalues) {
        min_imag_alpha_ = std::min(min_imag_alpha_, l.imag());
        max_imag_alpha_ = std::max(max_imag_alpha_, l.imag());
    }
    x_cap_ = max_imag_alpha_ > 0.0 ? 300.0 / (2.0 * max_imag_alpha_)
                                   : std::numeric_limits<double>::infinity();
}

CMatrix ContinuousPotential::lambda(double x) const {
    const CMatrix e_minus = expm(-iu * x * q_.alpha);
    const CMatrix e_plus = expm(iu * x * q_.alpha);
    return hcat(e_minus * q_.theta1, e_plus * q_.theta2);
}

CMatrix ContinuousPotential::R(double x) const {
    if (x < 0.0) throw std::invalid_argument("ContinuousPotential::R: x must be >= 0");
    if (q_.n() == 0) return CMatrix(0, 0);
    const CMatrix A = Complex{0.0, -2.0} * q_.alpha;
    const CMatrix Q = q_.theta1 * q_.theta1.adjoint();
    return (q_.S0 + 2.0 * gramian_integral(A, Q, x)).hermitian_part();
}

CMatrix ContinuousPotential::S(double x) const {
    if (q_.n() == 0) return CMatrix(0, 0);
    const CMatrix E = expm(iu * x * q_.alpha);
    const CMatrix s = (E * R(x) * E.adjoint()).hermitian_part();
    if (!is_positive_definite(s).positive) {
        throw NumericalError("ContinuousPotential::S lost positivity at x = " +
                             std::to_string(x) + "; generating data inconsistent");
    }
    return s;
}

// The one-shot formulas lose precision once the condition number of R(x)
// outgrows the double range (entries spread like e^{2x (max-min) Im
// sigma(alpha)}). Evaluation therefore walks in segments: the recursion data
// restarted at x0 -- theta1 -> e^{-i x0 alpha} theta1, theta2 -> e^{i x0
// alpha} theta2, S0 -> S(x0), then conjugated back to S0 = I -- generates
// the shifted potential exactly, so v(x0 + t) can be computed from a
// freshly conditioned quadruple. The tail factor picks up an accumulated
// right multiplier W along the way.
namespace {

struct SegmentState {
    AdmissibleQuadruple q;
    CMatrix W;  // tail(x0 + t) = tail_local(t) * W
};

double segment_length(double max_imag, double cap) {
    const double len = 9.0 / (1.0 + 2.0 * std::max(max_imag, 0.0));
    return std::min(len, cap);
}

CMatrix local_R(const AdmissibleQuadruple& q, double t) {
    const CMatrix A = Complex{0.0, -2.0} * q.alpha;
    return (q.S0 + 2.0 * gramian_integral(A, q.theta1 * q.theta1.adjoint(), t))
        .hermitian_part();
}

SegmentState advance_segment(const SegmentState& cur, double step) {
    const CMatrix E_minus = expm(-iu * step * cur.q.alpha);
    const CMatrix E_plus = expm(iu * step * cur.q.alpha);
    const CMatrix S_step =
        (E_plus * local_R(cur.q, step) * E_plus.adjoint()).hermitian_part();
    const PosDefResult pd = is_positive_definite(S_step);
    if (!pd.positive) {
        throw NumericalError("potential evaluation: S lost positivity during segment walk");
    }
    const CMatrix root = hermitian_sqrt(S_step);
    SegmentState next;
    next.q = make_quadruple(solve_linear(root, cur.q.alpha * root),
                            CMatrix::identity(cur.q.n()),
                            solve_linear(root, E_minus * cur.q.theta1),
                            solve_linear(root, E_plus * cur.q.theta2));
    // tail(x0 + step + s) = tail_hat(s) e^{i step alpha} = tail'(s) root^{-1}
    // e^{i step alpha}: fold both factors into W.
    next.W = solve_linear(root, E_plus * cur.W);
    return next;
}

}  // namespace

CMatrix ContinuousPotential::value(double x) const {
    if (x < 0.0) throw std::invalid_argument("potential evaluation: x must be >= 0");
    if (!std::isfinite(x)) throw std::invalid_argument("potential evaluation: x must be finite");
    if (q_.n() == 0) return CMatrix(q_.m1(), q_.m2());

    const double seg = segment_length(max_imag_alpha_, x_cap_);
    SegmentState state{q_, CMatrix::identity(q_.n())};
    double remaining = x;
    while (remaining > seg) {
        state = advance_segment(state, seg);
        remaining -= seg;
    }
    const CMatrix E2 = expm(Complex{0.0, 2.0} * remaining * state.q.alpha.adjoint());
    const CMatrix Rx = local_R(state.q, remaining);
    const PosDefResult pd = is_positive_definite(Rx);
    if (!pd.positive) {
        throw NumericalError("potential evaluation: R not positive at x = " +
                             std::to_string(x));
    }
    return 2.0 * (state.q.theta1.adjoint() * E2 * cholesky_solve(pd.factor, state.q.theta2));
}

CMatrix ContinuousPotential::value_S_form(double x) const {
    if (q_.n() == 0) return CMatrix(q_.m1(), q_.m2());
    const CMatrix E = expm(iu * x * q_.alpha);
    const CMatrix E_star = expm(iu * x * q_.alpha.adjoint());
    const CMatrix Sx = S(x);
    return 2.0 * (q_.theta1.adjoint() * E_star * solve_linear(Sx, E * q_.theta2));
}

double ContinuousPotential::tail_factor_norm(double x) const {
    if (q_.n() == 0) return 0.0;
    const double seg = segment_length(max_imag_alpha_, x_cap_);
    SegmentState state{q_, CMatrix::identity(q_.n())};
    double remaining = x;
    while (remaining > seg) {
        state = advance_segment(state, seg);
        remaining -= seg;
    }
    const CMatrix E2 = expm(Complex{0.0, 2.0} * remaining * state.q.alpha.adjoint());
    const CMatrix local =
        state.q.theta1.adjoint() * E2 * inverse(local_R(state.q, remaining));
    return operator_norm(local * state.W);
}

double ContinuousPotential::default_x_max() const {
    if (q_.n() == 0) return 1.0;
    if (min_imag_alpha_ <= 0.0) return 10.0;
    return 10.0 / min_imag_alpha_;
}

double ContinuousPotential::sup_norm_on_grid(double x_max, std::size_t samples) const {
    double sup = 0.0;
    const std::size_t count = std::max<std::size_t>(samples, 2);
    for (std::size_t k = 0; k < count; ++k) {
        const double x = x_max * static_cast<double>(k) / static_cast<double>(count - 1);
        sup = std::max(sup, operator_norm(value(x)));
    }
    return sup;
}

CMatrix weyl_continuous(const AdmissibleQuadruple& q, Complex z) {
    const std::size_t n = q.n();
    if (n == 0) return CMatrix(q.m2(), q.m1());
    const CMatrix S0inv_th1th1 = solve_linear(q.S0, (q.theta1 * q.theta1.adjoint()).adjoint());
    const CMatrix theta = q.alpha - iu * S0inv_th1th1.adjoint();
    const CMatrix zI_theta = z * CMatrix::identity(n) - theta;
    const CMatrix resolvent_th1 = solve_linear(zI_theta, q.theta1);
    return iu * (solve_linear(q.S0, q.theta2).adjoint() * resolvent_th1);
}

ContinuousInverseResult solve_inverse_continuous(const Realization& r, bool allow_reduce) {
    r.validate();
    if (r.convention != Convention::continuous) {
        throw std::invalid_argument("solve_inverse_continuous: realization must use the "
                                    "continuous convention");
    }
    Realization work = r;
    bool reduced = false;
    if (!is_minimal(work)) {
        if (!allow_reduce) {
            throw std::invalid_argument("solve_inverse_continuous: realization not minimal");
        }
        work = minimal_realization(work);
        reduced = true;
    }
    RiccatiSolution sol = solve_max_positive(
        RiccatiProblem{work.A, work.B, work.C, RiccatiVariant::continuous});
    AdmissibleQuadruple q = from_continuous(work.A, work.B, work.C, sol.X);
    return ContinuousInverseResult{ContinuousPotential(std::move(q)), std::move(sol), reduced};
}

DecayProfile decay_profile(const ContinuousPotential& p, double x_max, std::size_t samples) {
    if (x_max <= 0.0) throw std::invalid_argument("decay_profile: x_max must be > 0");
    DecayProfile prof;
    const std::size_t count = std::max<std::size_t>(samples, 4);
    prof.x.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double x = x_max * static_cast<double>(k) / static_cast<double>(count - 1);
        prof.x.push_back(x);
        prof.v_norm.push_back(operator_norm(p.value(x)));
        prof.tail_norm.push_back(p.tail_factor_norm(x));
    }
    const double v0 = prof.v_norm.front();
    prof.v_below_threshold = prof.v_norm.back() < 1e-3 * v0 || v0 == 0.0;
    prof.eventually_decreasing = true;
    for (std::size_t k = count / 2; k + 1 < count; ++k) {
        const double slack = 1e-12 * (1.0 + prof.v_norm[k]);
        if (prof.v_norm[k + 1] > prof.v_norm[k] + slack ||
            prof.tail_norm[k + 1] > prof.tail_norm[k] + 1e-12 * (1.0 + prof.tail_norm[k])) {
            prof.eventually_decreasing = false;
            break;
        }
    }
    return prof;
}

}  // namespace sdirac
