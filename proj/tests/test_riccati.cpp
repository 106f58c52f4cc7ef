#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sdirac/riccati.hpp"

using namespace sdirac;

namespace {

RiccatiProblem scalar_problem(Complex a, Complex b, Complex c,
                              RiccatiVariant v = RiccatiVariant::continuous) {
    return RiccatiProblem{CMatrix{{a}}, CMatrix{{b}}, CMatrix{{c}}, v};
}

// Closed-form positive root of |c|^2 X^2 - 2 Im(a) X - |b|^2 = 0.
double scalar_solution(Complex a, Complex b, Complex c) {
    const double im = a.imag();
    const double bc = std::abs(b) * std::abs(c);
    return (im + std::sqrt(im * im + bc * bc)) / std::norm(c);
}

RiccatiProblem random_minimal_problem(std::size_t n, std::size_t p, std::size_t q,
                                      std::uint64_t seed, RiccatiVariant variant) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        RiccatiProblem prob{random_gaussian(n, n, derive_seed(seed, 3 * attempt)),
                            random_gaussian(n, p, derive_seed(seed, 3 * attempt + 1)),
                            random_gaussian(q, n, derive_seed(seed, 3 * attempt + 2)), variant};
        if (is_controllable(prob.A, prob.B).full_rank &&
            is_observable(prob.C, prob.A).full_rank) {
            return prob;
        }
    }
}

}  // namespace

TEST_CASE("scalar closed forms, both variants") {
    const RiccatiSolution s1 = solve_max_positive(scalar_problem(0.0, 1.0, iu));
    CHECK(std::abs(s1.X(0, 0) - Complex{1.0, 0.0}) <= 1e-12);

    for (auto [a, b, c] : {std::tuple<Complex, Complex, Complex>{Complex{0.3, 1.2}, 1.5, 0.7},
                           {Complex{-0.5, 0.4}, Complex{0.0, 2.0}, Complex{1.0, 1.0}},
                           {Complex{2.0, 3.0}, 0.25, Complex{0.0, -1.5}}}) {
        const RiccatiSolution s = solve_max_positive(scalar_problem(a, b, c));
        CHECK(std::abs(s.X(0, 0).real() - scalar_solution(a, b, c)) <=
              1e-11 * scalar_solution(a, b, c));
        CHECK(std::abs(s.X(0, 0).imag()) <= 1e-12);
    }

    // Discrete variant: A = -i, B = 1, C = sqrt(3) gives 3X^2 - 2X - 1 = 0.
    const RiccatiSolution sd = solve_max_positive(
        scalar_problem(-iu, 1.0, std::sqrt(3.0), RiccatiVariant::discrete));
    CHECK(std::abs(sd.X(0, 0) - Complex{1.0, 0.0}) <= 1e-12);
}

TEST_CASE("residual: defining property, zero point, continuity") {
    const RiccatiProblem p = scalar_problem(0.0, 1.0, iu);
    CHECK(residual(p, CMatrix{{1.0}}) <= 1e-14);

    const RiccatiProblem q = scalar_problem(Complex{0.3, 1.2}, 1.5, 0.7);
    const CMatrix zero(1, 1);
    CHECK(residual(q, zero) ==
          doctest::Approx(operator_norm(q.B * q.B.adjoint())).epsilon(1e-12));

    const CMatrix X = solve_max_positive(q).X;
    const double base = residual(q, X);
    const double r4 = residual(q, X + 1e-4 * CMatrix::identity(1));
    const double r6 = residual(q, X + 1e-6 * CMatrix::identity(1));
    CHECK(r4 > r6);
    CHECK(r6 > base);
    CHECK(r6 <= 1e-4);  // residual shrinks continuously toward the solution
}

TEST_CASE("two solver paths agree on random minimal problems") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const std::size_t n = 2 + seed % 5;  // up to 6
        const std::size_t p = 1 + seed % 3;
        const std::size_t q = 1 + (seed / 2) % 3;
        const RiccatiVariant variant =
            seed % 2 == 0 ? RiccatiVariant::continuous : RiccatiVariant::discrete;
        const RiccatiProblem prob = random_minimal_problem(n, p, q, 3000 + seed, variant);
        const RiccatiSolution h = solve_via_hamiltonian(prob);
        const RiccatiSolution nk = solve_via_newton(prob);
        const double scale = operator_norm(h.X);
        CHECK(operator_norm(h.X - nk.X) <= 1e-9 * scale);
        CHECK(is_positive_definite(h.X).positive);
        CHECK(h.residual_norm <= 1e-10 * residual_scale(prob, h.X));
        CHECK(nk.residual_norm <= 1e-10 * residual_scale(prob, nk.X));
        ++checked;
    }
    CHECK(checked == 12);
}

TEST_CASE("discrete variant solves the continuous equation for -A") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const RiccatiProblem disc =
            random_minimal_problem(3, 2, 1, 4000 + seed, RiccatiVariant::discrete);
        const RiccatiProblem cont{-disc.A, disc.B, disc.C, RiccatiVariant::continuous};
        const CMatrix Xd = solve_max_positive(disc).X;
        const CMatrix Xc = solve_max_positive(cont).X;
        CHECK(operator_norm(Xd - Xc) <= 1e-10 * std::max(1.0, operator_norm(Xd)));
    }
}

TEST_CASE("non-minimal input is refused") {
    // B = 0 column: uncontrollable.
    RiccatiProblem p{CMatrix::identity(2), CMatrix(2, 1), random_gaussian(1, 2, 5),
                     RiccatiVariant::continuous};
    CHECK_THROWS_AS(solve_max_positive(p), std::invalid_argument);
}

TEST_CASE("sensitivity probe: zero delta, scalar Lipschitz bound, monotone trend") {
    const RiccatiProblem p = scalar_problem(Complex{0.0, 1.0}, 1.0, 1.0);

    const SensitivityStats zero = sensitivity_probe(p, 0.0, 10, 9);
    CHECK(zero.max_deviation <= 1e-14);
    CHECK(zero.skipped == 0);

    // The scalar root formula is differentiable; deviations stay within a
    // modest Lipschitz multiple of delta.
    const SensitivityStats small = sensitivity_probe(p, 1e-6, 20, 10);
    CHECK(small.max_deviation <= 1e-4);
    CHECK(small.completed == 20);

    const SensitivityStats coarse = sensitivity_probe(p, 1e-3, 50, 11);
    const SensitivityStats fine = sensitivity_probe(p, 1e-5, 50, 11);
    CHECK(coarse.mean_deviation >= fine.mean_deviation);
    CHECK(coarse.max_deviation >= fine.max_deviation);
}

TEST_CASE("perturb_triple is deterministic with norm delta/2") {
    const CMatrix A = random_gaussian(3, 3, 1);
    const CMatrix B = random_gaussian(3, 2, 2);
    const CMatrix C = random_gaussian(2, 3, 3);
    const double delta = 1e-3;
    const TriplePerturbation d1 = perturb_triple(A, B, C, delta, 77);
    const TriplePerturbation d2 = perturb_triple(A, B, C, delta, 77);
    CHECK((d1.A - d2.A).max_abs() == 0.0);
    CHECK((d1.B - d2.B).max_abs() == 0.0);
    CHECK((d1.C - d2.C).max_abs() == 0.0);
    const double total = operator_norm(d1.A) + operator_norm(d1.B) + operator_norm(d1.C);
    CHECK(total == doctest::Approx(delta / 2.0).epsilon(1e-9));
    CHECK(total < delta);
}
