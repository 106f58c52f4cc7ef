#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "sdirac/discrete.hpp"

using namespace sdirac;

namespace {

AdmissibleQuadruple scalar_quadruple(Complex alpha, double s0, Complex th1, Complex th2) {
    return make_quadruple(CMatrix{{alpha}}, CMatrix{{Complex{s0, 0.0}}}, CMatrix{{th1}},
                          CMatrix{{th2}});
}

// Independent plain-loop recursion for a scalar quadruple (n = 1, m1 = m2 = 1),
// using raw complex arithmetic only: the oracle for the production sequence.
std::vector<std::array<Complex, 4>> scalar_oracle(Complex alpha, double s0, Complex th1,
                                                  Complex th2, std::size_t K) {
    std::vector<Complex> a(K + 2), b(K + 2);
    std::vector<double> S(K + 2);
    a[0] = th1;
    b[0] = th2;
    S[0] = s0;
    const Complex ia = iu / alpha;
    const double inv_abs2 = 1.0 / std::norm(alpha);
    for (std::size_t k = 0; k + 1 <= K + 1; ++k) {
        a[k + 1] = a[k] * (1.0 + ia);
        b[k + 1] = b[k] * (1.0 - ia);
        S[k + 1] = S[k] + S[k] * inv_abs2 + (std::norm(a[k]) - std::norm(b[k])) * inv_abs2;
    }
    auto F = [&](std::size_t k) {
        return std::array<Complex, 4>{std::norm(a[k]) / S[k], std::conj(a[k]) * b[k] / S[k],
                                      std::conj(b[k]) * a[k] / S[k], std::norm(b[k]) / S[k]};
    };
    std::vector<std::array<Complex, 4>> C(K);
    for (std::size_t k = 0; k < K; ++k) {
        const auto fk = F(k);
        const auto fk1 = F(k + 1);
        C[k] = {Complex{1.0, 0.0} + fk[0] - fk1[0], fk[1] - fk1[1], fk[2] - fk1[2],
                Complex{-1.0, 0.0} + fk[3] - fk1[3]};
    }
    return C;
}

Realization random_minimal_discrete(std::size_t n, std::size_t m2, std::size_t m1,
                                    std::uint64_t seed) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        Realization r{random_gaussian(n, n, derive_seed(seed, 3 * attempt)),
                      random_gaussian(n, m2, derive_seed(seed, 3 * attempt + 1)),
                      random_gaussian(m1, n, derive_seed(seed, 3 * attempt + 2)),
                      Convention::discrete};
        if (is_minimal(r)) return r;
    }
}

double max_c_gap(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
        worst = std::max(worst, (a[k] - b[k]).frobenius_norm());
    }
    return worst;
}

}  // namespace

TEST_CASE("recursion_step: initial block row and scalar multipliers") {
    const AdmissibleQuadruple q =
        scalar_quadruple(2.0 * iu, 1.0, std::sqrt(2.0), std::sqrt(2.0));
    const CMatrix L0 = hcat(q.theta1, q.theta2);
    const auto [L1, S1] = recursion_step(q, L0, q.S0);
    // i alpha^{-1} = 1/2: column 1 scales by 3/2, column 2 by 1/2.
    CHECK(std::abs(L1(0, 0) - 1.5 * std::sqrt(2.0)) <= 1e-15);
    CHECK(std::abs(L1(0, 1) - 0.5 * std::sqrt(2.0)) <= 1e-15);
    CHECK(std::abs(S1(0, 0) - Complex{1.25, 0.0}) <= 1e-15);
}

TEST_CASE("C_k_sequence: vanishing theta gives the constant signature sequence") {
    // theta2 = 0 (identity: 4i = i * 4).
    const AdmissibleQuadruple q2 = scalar_quadruple(2.0 * iu, 1.0, 2.0, 0.0);
    const DiscretePotential p2 = C_k_sequence(q2, 30);
    const CMatrix j = signature_matrix(1, 1);
    for (const auto& C : p2.C) CHECK((C - j).max_abs() <= 1e-12);

    // theta1 = 0.
    const AdmissibleQuadruple q1 = scalar_quadruple(2.0 * iu, 1.0, 0.0, 2.0);
    const DiscretePotential p1 = C_k_sequence(q1, 30);
    for (const auto& C : p1.C) CHECK((C - j).max_abs() <= 1e-12);
}

TEST_CASE("C_k_sequence matches the plain-loop oracle") {
    const Complex alpha = 2.0 * iu;
    const AdmissibleQuadruple q =
        scalar_quadruple(alpha, 1.0, std::sqrt(2.0), std::sqrt(2.0));
    const std::size_t K = 40;
    const DiscretePotential p = C_k_sequence(q, K);
    const auto oracle = scalar_oracle(alpha, 1.0, std::sqrt(2.0), std::sqrt(2.0), K);
    const CMatrix j = signature_matrix(1, 1);
    for (std::size_t k = 0; k < K; ++k) {
        CHECK(std::abs(p.C[k](0, 0) - oracle[k][0]) <= 1e-12);
        CHECK(std::abs(p.C[k](0, 1) - oracle[k][1]) <= 1e-12);
        CHECK(std::abs(p.C[k](1, 0) - oracle[k][2]) <= 1e-12);
        CHECK(std::abs(p.C[k](1, 1) - oracle[k][3]) <= 1e-12);
        CHECK(p.C[k].hermiticity_defect() <= 1e-10);
        CHECK((p.C[k] * p.C[k] - CMatrix::identity(2)).frobenius_norm() <= 1e-9);
    }
    CHECK((p.C.back() - j).frobenius_norm() <= 1e-10);
}

TEST_CASE("C_k structure for a matrix quadruple: involution and signature") {
    const Realization r = random_minimal_discrete(3, 2, 1, 610);
    const DiscreteInverseResult res = solve_inverse_discrete(r, 40);
    const std::size_t m1 = res.potential.m1();
    const std::size_t m2 = res.potential.m2();
    REQUIRE(m1 == 1);
    REQUIRE(m2 == 2);
    for (const auto& C : res.potential.C) {
        CHECK(C.hermiticity_defect() <= 1e-10 * std::max(1.0, C.frobenius_norm()));
        CHECK((C * C - CMatrix::identity(m1 + m2)).frobenius_norm() <= 1e-9);
        const HermitianEig eig = hermitian_eig(C);
        std::size_t plus = 0, minus = 0;
        for (double v : eig.values) {
            if (std::abs(v - 1.0) <= 1e-8) ++plus;
            if (std::abs(v + 1.0) <= 1e-8) ++minus;
        }
        CHECK(plus == m1);
        CHECK(minus == m2);
    }
}

TEST_CASE("explicit_Lambda: base case, scalar powers, recursion agreement") {
    const AdmissibleQuadruple q =
        scalar_quadruple(2.0 * iu, 1.0, std::sqrt(2.0), std::sqrt(2.0));
    CHECK((explicit_Lambda(q, 0) - hcat(q.theta1, q.theta2)).max_abs() <= 1e-15);

    const CMatrix L3 = explicit_Lambda(q, 3);
    CHECK(std::abs(L3(0, 0) - std::sqrt(2.0) * std::pow(1.5, 3)) <= 1e-14);
    CHECK(std::abs(L3(0, 1) - std::sqrt(2.0) * std::pow(0.5, 3)) <= 1e-14);

    const Realization r = random_minimal_discrete(3, 1, 2, 620);
    const AdmissibleQuadruple rq = solve_inverse_discrete(r, 5).potential.quadruple;
    CMatrix L = hcat(rq.theta1, rq.theta2);
    CMatrix S = rq.S0;
    for (std::size_t k = 0; k <= 30; ++k) {
        const CMatrix E = explicit_Lambda(rq, k);
        CHECK((E - L).frobenius_norm() <= 1e-10 * std::max(1.0, E.frobenius_norm()));
        std::tie(L, S) = recursion_step(rq, L, S);
    }
}

TEST_CASE("R_k: base value, PSD increments of rank <= m1, window growth") {
    const Realization r = random_minimal_discrete(2, 2, 1, 630);  // m1 = 1 < n
    const DiscreteInverseResult res = solve_inverse_discrete(r, 30);
    const AdmissibleQuadruple& q = res.potential.quadruple;
    const std::vector<CMatrix>& R = res.potential.diagnostics.R;
    REQUIRE(R.size() == 31);
    CHECK((R[0] - q.S0).frobenius_norm() <= 1e-12 * q.S0.frobenius_norm());

    const std::size_t m1 = q.m1();
    for (std::size_t k = 0; k + 1 < R.size(); ++k) {
        const CMatrix inc = R[k + 1] - R[k];
        const HermitianEig eig = hermitian_eig(inc);
        CHECK(eig.values.front() >= -1e-10 * std::max(1.0, inc.frobenius_norm()));
        // Rank of the increment cannot exceed m1.
        std::size_t rank = 0;
        for (double v : eig.values) {
            if (v > 1e-9 * std::max(1.0, eig.values.back())) ++rank;
        }
        CHECK(rank <= m1);
    }

    // lambda_min(R_{k+n}) - lambda_min(R_k) lower-bounded by the first
    // window, over the range where lambda_min is measurable at all (the
    // eigenvalue spread of R_k eventually passes 1/eps).
    const std::size_t n = q.n();
    std::vector<double> mins;
    for (const auto& Rk : R) {
        const HermitianEig eig = hermitian_eig(Rk);
        if (eig.values.front() <= 1e-12 * eig.values.back()) break;
        mins.push_back(eig.values.front());
    }
    REQUIRE(mins.size() >= 2 * n + 2);
    const double first_window = mins[n] - mins[0];
    CHECK(first_window > 0.0);
    for (std::size_t k = 0; k + n < mins.size(); ++k) {
        CHECK(mins[k + n] - mins[k] >= first_window * (1.0 - 1e-6));
    }
}

TEST_CASE("Q_k: base value and constant sequence when theta2 vanishes") {
    const Realization r = random_minimal_discrete(2, 2, 1, 640);
    const DiscreteInverseResult res = solve_inverse_discrete(r, 25);
    const std::vector<CMatrix>& Q = res.potential.diagnostics.Q;
    REQUIRE(Q.size() == 26);
    CHECK((Q[0] - res.potential.quadruple.S0).frobenius_norm() <=
          1e-12 * res.potential.quadruple.S0.frobenius_norm());
    // Increments are negative semidefinite.
    for (std::size_t k = 0; k + 1 < Q.size(); ++k) {
        const CMatrix inc = Q[k + 1] - Q[k];
        CHECK(hermitian_eig(inc).values.back() <= 1e-10 * std::max(1.0, inc.frobenius_norm()));
    }

    const AdmissibleQuadruple qz = scalar_quadruple(2.0 * iu, 1.0, 2.0, 0.0);
    const std::vector<CMatrix> Qz = Q_k_sequence(qz, 20);
    for (const auto& Qk : Qz) CHECK((Qk - qz.S0).max_abs() <= 1e-12);

    // Scalar example: both construction routes agree (validated internally;
    // this exercises the code path).
    const AdmissibleQuadruple qs =
        scalar_quadruple(2.0 * iu, 1.0, std::sqrt(2.0), std::sqrt(2.0));
    CHECK_NOTHROW(Q_k_sequence(qs, 30));
    CHECK_NOTHROW(R_k_sequence(qs, 30));
}

TEST_CASE("weyl_discrete: scalar closed form, zero theta2, round trip") {
    const AdmissibleQuadruple q = scalar_quadruple(2.0 * iu, 1.0, std::sqrt(3.0), iu);
    // gamma = 2i - i * 1 = i, so phi(z) = sqrt(3)/(z + i).
    for (Complex z : {Complex{1.0, 1.0}, Complex{0.0, 4.0}, Complex{-2.0, 0.5}}) {
        CHECK(std::abs(weyl_discrete(q, z)(0, 0) - std::sqrt(3.0) / (z + iu)) <= 1e-14);
    }

    const AdmissibleQuadruple qz = scalar_quadruple(2.0 * iu, 1.0, 2.0, 0.0);
    CHECK(weyl_discrete(qz, Complex{1.0, 2.0}).max_abs() <= 1e-15);

    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Realization r = random_minimal_discrete(2 + seed % 3, 1 + seed % 2, 2, 700 + seed);
        const AdmissibleQuadruple rec = solve_inverse_discrete(r, 5).potential.quadruple;
        for (Complex z : probe_points(r)) {
            const CMatrix lhs = weyl_discrete(rec, z);
            const CMatrix rhs = evaluate(r, z);
            CHECK((lhs - rhs).frobenius_norm() <= 1e-8 * std::max(1e-12, rhs.frobenius_norm()));
        }
    }
}

TEST_CASE("solve_inverse_discrete: scalar pipeline recovers the expected quadruple") {
    const Realization r{CMatrix{{-iu}}, CMatrix{{1.0}}, CMatrix{{std::sqrt(3.0)}},
                        Convention::discrete};
    const DiscreteInverseResult res = solve_inverse_discrete(r, 40);
    const AdmissibleQuadruple& q = res.potential.quadruple;
    CHECK(std::abs(q.alpha(0, 0) - 2.0 * iu) <= 1e-12);
    CHECK(std::abs(q.S0(0, 0) - Complex{1.0, 0.0}) <= 1e-12);
    CHECK(std::abs(q.theta1(0, 0) - std::sqrt(3.0)) <= 1e-12);
    CHECK(std::abs(q.theta2(0, 0) - iu) <= 1e-12);

    const AsymptoticsReport rep = asymptotics_check(res.potential);
    CHECK(rep.tail_below_threshold);
    CHECK(rep.c_minus_j.back() < 1e-10);
    CHECK(rep.tail_factor.back() < rep.tail_factor.front());
}

TEST_CASE("solve_inverse_discrete: empty state space") {
    const Realization r{CMatrix(0, 0), CMatrix(0, 1), CMatrix(1, 0), Convention::discrete};
    const DiscretePotential p = solve_inverse_discrete(r, 10).potential;
    const CMatrix j = signature_matrix(1, 1);
    for (const auto& C : p.C) CHECK((C - j).max_abs() == 0.0);
}

TEST_CASE("similarity-transformed input recovers an identical sequence") {
    const Realization r = random_minimal_discrete(2, 1, 1, 710);
    const DiscretePotential base = solve_inverse_discrete(r, 30).potential;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const CMatrix T =
            random_gaussian(2, 2, derive_seed(720, seed)) + 2.0 * CMatrix::identity(2);
        const DiscretePotential other =
            solve_inverse_discrete(similarity(r, T), 30).potential;
        CHECK(max_c_gap(base.C, other.C) <= 1e-8 * (1.0 + condition_number(T)));
    }
}

TEST_CASE("asymptotic block limits") {
    // Deterministic case with spectrum well inside the upper half-plane, so
    // the k = default_K tail is deep.
    CMatrix A(2, 2), B(2, 2), C(1, 2);
    A(0, 0) = -1.2 * iu;
    A(0, 1) = 1.0;
    A(1, 1) = -2.0 * iu;
    B(0, 0) = 1.0;
    B(1, 1) = 1.0;
    C(0, 0) = 1.0;
    C(0, 1) = 0.5;
    const Realization r{A, B, C, Convention::discrete};
    REQUIRE(is_minimal(r));
    const DiscreteInverseResult res = solve_inverse_discrete(r, default_K(2));
    const AsymptoticsReport rep = asymptotics_check(res.potential);
    CHECK(rep.tail_below_threshold);
    CHECK(rep.c11_gap <= 1e-6);
    CHECK(rep.c12_gap <= 1e-6);
    CHECK(rep.c21_gap <= 1e-6);
    CHECK(rep.c22_gap <= 1e-6);
}

TEST_CASE("matrix identities along the sequences") {
    const Realization r = random_minimal_discrete(3, 1, 2, 740);
    const DiscretePotential p = solve_inverse_discrete(r, 25).potential;
    const AdmissibleQuadruple& q = p.quadruple;

    // alpha S_k - S_k alpha* = i Lambda_k Lambda_k*.
    for (std::size_t k = 0; k < p.diagnostics.S.size(); ++k) {
        const CMatrix& S = p.diagnostics.S[k];
        const CMatrix& L = p.diagnostics.Lambda[k];
        const CMatrix defect = q.alpha * S - S * q.alpha.adjoint() - iu * (L * L.adjoint());
        const double scale =
            operator_norm(q.alpha) * operator_norm(S) + std::pow(operator_norm(L), 2);
        CHECK(operator_norm(defect) <= 1e-9 * scale);
    }

    // alpha R_k - R_k alpha* = i ([Psi_k theta2] [Psi_k theta2]*).
    for (std::size_t k = 0; k < p.diagnostics.R.size(); ++k) {
        const CMatrix& R = p.diagnostics.R[k];
        const CMatrix W = hcat(p.diagnostics.Psi[k], q.theta2);
        const CMatrix defect = q.alpha * R - R * q.alpha.adjoint() - iu * (W * W.adjoint());
        const double scale =
            operator_norm(q.alpha) * operator_norm(R) + std::pow(operator_norm(W), 2);
        CHECK(operator_norm(defect) <= 1e-9 * scale);
    }
}

TEST_CASE("S0 normalization conjugates the whole sequence") {
    const Realization r = random_minimal_discrete(2, 1, 1, 750);
    const DiscretePotential p = solve_inverse_discrete(r, 15).potential;
    const AdmissibleQuadruple qn = normalize_S0(p.quadruple);
    const DiscretePotential pn = C_k_sequence(qn, 15);

    CHECK(max_c_gap(p.C, pn.C) <= 1e-9);

    const CMatrix root = hermitian_sqrt(p.quadruple.S0);
    for (std::size_t k = 0; k < p.diagnostics.S.size(); ++k) {
        const CMatrix conj_S =
            solve_linear(root, solve_linear(root, p.diagnostics.S[k].adjoint()).adjoint());
        CHECK((pn.diagnostics.S[k] - conj_S).frobenius_norm() <=
              1e-9 * std::max(1.0, conj_S.frobenius_norm()));
        const CMatrix conj_R =
            solve_linear(root, solve_linear(root, p.diagnostics.R[k].adjoint()).adjoint());
        CHECK((pn.diagnostics.R[k] - conj_R).frobenius_norm() <=
              1e-9 * std::max(1.0, conj_R.frobenius_norm()));
    }
}

TEST_CASE("reduce_quadruple: pass-through, padded reduction, trivial replacement") {
    // Controllable pair: untouched.
    const AdmissibleQuadruple q = scalar_quadruple(2.0 * iu, 1.0, std::sqrt(3.0), iu);
    const ReductionResult pass = reduce_quadruple(q, ReduceTarget::theta1);
    CHECK(pass.passthrough);
    CHECK(quadruple_distance(pass.reduced, q) == 0.0);

    // Padded quadruple: alpha = diag(4i, 20i), theta1 supported on the first
    // coordinate only, S0 solving the identity blockwise. The modes are slow
    // (pad mode decays like 0.9^{2k}) so the k <= 50 comparison stays within
    // double range despite the lost controllability.
    const Complex p_pad{0.3, 0.0};
    CMatrix alpha(2, 2), S0(2, 2), th1(2, 1), th2(2, 1);
    alpha(0, 0) = 4.0 * iu;
    alpha(1, 1) = 20.0 * iu;
    th1(0, 0) = 2.0;
    th2(0, 0) = 2.0;
    th2(1, 0) = p_pad;
    S0(0, 0) = 1.0;
    // Entry (0,1) of the identity: s12 (alpha1 - conj(mu)) = i th2[0] conj(th2[1]).
    S0(0, 1) = iu * (2.0 * std::conj(p_pad)) / (4.0 * iu - std::conj(20.0 * iu));
    S0(1, 0) = std::conj(S0(0, 1));
    S0(1, 1) = std::norm(p_pad) / 40.0;
    AdmissibleQuadruple padded = make_quadruple(alpha, S0, th1, th2);
    REQUIRE(check_admissible(padded).admissible);
    REQUIRE_FALSE(padded.controllable_theta1);

    const ReductionResult red = reduce_quadruple(padded, ReduceTarget::theta1);
    CHECK_FALSE(red.passthrough);
    CHECK(red.reduced.n() == 1);
    const DiscretePotential before = C_k_sequence(padded, 50);
    const DiscretePotential after = C_k_sequence(red.reduced, 50);
    CHECK(max_c_gap(before.C, after.C) <= 1e-9);

    // theta1 identically zero: canonical replacement generating C_k == j.
    const AdmissibleQuadruple zero1 = scalar_quadruple(2.0 * iu, 1.0, 0.0, 2.0);
    const ReductionResult rz = reduce_quadruple(zero1, ReduceTarget::theta1);
    CHECK(rz.replaced_trivial);
    CHECK(rz.reduced.theta2.max_abs() == 0.0);
    CHECK(rz.reduced.controllable_theta1);
    const DiscretePotential pj = C_k_sequence(rz.reduced, 50);
    const CMatrix j = signature_matrix(1, 1);
    for (const auto& C : pj.C) CHECK((C - j).max_abs() <= 1e-12);
}
