#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "sdirac/matcore.hpp"
#include "sdirac/matrix.hpp"

using namespace sdirac;

namespace {

double dist(const CMatrix& a, const CMatrix& b) { return (a - b).frobenius_norm(); }

// Composite-Simpson quadrature of e^{tA} Q e^{tA*}; the independent oracle
// for the block-exponential gramian path.
CMatrix gramian_quadrature(const CMatrix& A, const CMatrix& Q, double x, int intervals = 2048) {
    const std::size_t n = A.rows();
    CMatrix acc(n, n);
    if (x == 0.0) return acc;
    const double h = x / intervals;
    auto f = [&](double t) {
        const CMatrix E = expm(t * A);
        return E * Q * E.adjoint();
    };
    for (int k = 0; k <= intervals; ++k) {
        double w = (k == 0 || k == intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        acc += w * f(k * h);
    }
    return (h / 3.0) * acc;
}

void check_multiset_close(std::vector<Complex> expected, std::vector<Complex> actual, double tol) {
    REQUIRE(expected.size() == actual.size());
    for (const auto& e : expected) {
        auto best = std::min_element(actual.begin(), actual.end(), [&](Complex a, Complex b) {
            return std::abs(a - e) < std::abs(b - e);
        });
        REQUIRE(best != actual.end());
        CHECK(std::abs(*best - e) <= tol);
        actual.erase(best);
    }
}

}  // namespace

TEST_CASE("expm: zero, nilpotent, and diagonal cases") {
    CHECK(dist(expm(CMatrix(3, 3)), CMatrix::identity(3)) == doctest::Approx(0.0));

    const CMatrix N{{0.0, 1.0}, {0.0, 0.0}};
    const CMatrix expN{{1.0, 1.0}, {0.0, 1.0}};
    CHECK(dist(expm(N), expN) <= 1e-15);

    const double pi = std::acos(-1.0);
    const CMatrix D = CMatrix::diagonal({Complex{0.0, pi}});
    CHECK(std::abs(expm(D)(0, 0) - Complex{-1.0, 0.0}) <= 1e-13);
}

TEST_CASE("expm: inverse identity for random matrices up to order 8") {
    for (std::size_t n : {2u, 4u, 8u}) {
        for (std::uint64_t trial = 0; trial < 6; ++trial) {
            CMatrix M = random_gaussian(n, n, derive_seed(101, n * 10 + trial));
            // Scale into the ||M|| <= 20 regime, covering several magnitudes.
            const double target = (trial % 3 == 0) ? 0.5 : (trial % 3 == 1 ? 5.0 : 18.0);
            M *= Complex{target / operator_norm(M), 0.0};
            const CMatrix E = expm(M);
            const CMatrix Einv = expm(-M);
            const double cond = operator_norm(E) * operator_norm(Einv);
            CHECK(dist(E * Einv, CMatrix::identity(n)) <= 1e-10 * cond);
        }
    }
}

TEST_CASE("expm maps spectra exponentially for diagonalizable matrices") {
    for (std::uint64_t trial = 0; trial < 8; ++trial) {
        const std::size_t n = 2 + trial % 4;
        CMatrix M = random_gaussian(n, n, derive_seed(202, trial));
        M *= Complex{1.5 / std::max(operator_norm(M), 1e-12), 0.0};
        const Spectrum sm = spectrum(M);
        std::vector<Complex> expected;
        for (const auto& l : sm.eigenvalues) expected.push_back(std::exp(l));
        const Spectrum se = spectrum(expm(M));
        check_multiset_close(expected, se.eigenvalues, 1e-8);
    }
}

TEST_CASE("spectrum: diagonal, rotation, and scalar cases") {
    check_multiset_close({Complex{1.0, 0.0}, Complex{0.0, 2.0}},
                         spectrum(CMatrix::diagonal({Complex{1.0, 0.0}, Complex{0.0, 2.0}}))
                             .eigenvalues,
                         1e-14);
    const CMatrix R{{0.0, -1.0}, {1.0, 0.0}};
    check_multiset_close({iu, -iu}, spectrum(R).eigenvalues, 1e-14);
    check_multiset_close({iu}, spectrum(CMatrix::diagonal({iu})).eigenvalues, 1e-15);
}

TEST_CASE("spectrum: eigenvector residuals stay below 1e-9 * norm") {
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + trial % 6;
        const CMatrix M = random_gaussian(n, n, derive_seed(303, trial));
        const SchurDecomposition s = schur_decompose(M);
        CHECK(dist(s.Q * s.T * s.Q.adjoint(), M) <= 1e-12 * std::max(1.0, M.frobenius_norm()));
        const double nrm = operator_norm(M);
        for (std::size_t k = 0; k < n; ++k) {
            const CMatrix v = schur_eigenvector(s, k);
            const Complex lambda = s.T(k, k);
            CHECK((M * v - lambda * v).frobenius_norm() <= 1e-9 * std::max(nrm, 1e-12));
        }
    }
}

TEST_CASE("schur_reorder moves selected eigenvalues to the leading block") {
    for (std::uint64_t trial = 0; trial < 8; ++trial) {
        const std::size_t n = 3 + trial % 4;
        const CMatrix M = random_gaussian(n, n, derive_seed(404, trial));
        SchurDecomposition s = schur_decompose(M);
        std::vector<bool> select(n);
        std::size_t expected = 0;
        for (std::size_t i = 0; i < n; ++i) {
            select[i] = s.T(i, i).real() < 0.0;
            expected += select[i] ? 1 : 0;
        }
        std::vector<Complex> before;
        for (std::size_t i = 0; i < n; ++i) before.push_back(s.T(i, i));
        const std::size_t count = schur_reorder(s, select);
        CHECK(count == expected);
        CHECK(dist(s.Q * s.T * s.Q.adjoint(), M) <= 1e-11 * std::max(1.0, M.frobenius_norm()));
        for (std::size_t i = 0; i < count; ++i) CHECK(s.T(i, i).real() < 0.0);
        for (std::size_t i = count; i < n; ++i) CHECK(s.T(i, i).real() >= 0.0);
        std::vector<Complex> after;
        for (std::size_t i = 0; i < n; ++i) after.push_back(s.T(i, i));
        check_multiset_close(before, after, 1e-10 * std::max(1.0, M.frobenius_norm()));
    }
}

TEST_CASE("is_positive_definite: identity, indefinite, scalar") {
    CHECK(is_positive_definite(CMatrix::identity(4)).positive);

    const CMatrix ind{{1.0, 2.0}, {2.0, 1.0}};  // eigenvalues 3 and -1
    const PosDefResult r = is_positive_definite(ind);
    CHECK_FALSE(r.positive);
    CHECK(r.reason == "nonpositive_pivot");

    CMatrix s(1, 1);
    s(0, 0) = std::cosh(2.0);
    CHECK(is_positive_definite(s).positive);

    CMatrix nh{{1.0, iu}, {iu, 1.0}};  // not Hermitian
    CHECK(is_positive_definite(nh).reason == "not_hermitian");
}

TEST_CASE("is_positive_definite returns a usable Cholesky factor") {
    for (std::uint64_t trial = 0; trial < 6; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const CMatrix G = random_gaussian(n, n, derive_seed(505, trial));
        const CMatrix H = G * G.adjoint() + 0.1 * CMatrix::identity(n);
        const PosDefResult r = is_positive_definite(H);
        REQUIRE(r.positive);
        CHECK(dist(r.factor * r.factor.adjoint(), H.hermitian_part()) <=
              1e-12 * H.frobenius_norm());
        const CMatrix rhs = random_gaussian(n, 2, derive_seed(506, trial));
        const CMatrix x = cholesky_solve(r.factor, rhs);
        CHECK(dist(H * x, rhs) <= 1e-10 * H.frobenius_norm() * std::max(1.0, x.frobenius_norm()));
    }
}

TEST_CASE("hermitian_eig diagonalizes and reproduces the trace") {
    for (std::uint64_t trial = 0; trial < 8; ++trial) {
        const std::size_t n = 1 + trial % 6;
        const CMatrix G = random_gaussian(n, n, derive_seed(606, trial));
        const CMatrix H = (G + G.adjoint()).hermitian_part();
        const HermitianEig e = hermitian_eig(H);
        CHECK(dist(e.vectors.adjoint() * e.vectors, CMatrix::identity(n)) <= 1e-12 * n);
        CMatrix D(n, n);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            D(i, i) = e.values[i];
            sum += e.values[i];
        }
        CHECK(dist(H * e.vectors, e.vectors * D) <= 1e-12 * std::max(1.0, H.frobenius_norm()));
        CHECK(std::abs(sum - H.trace().real()) <= 1e-11 * (1.0 + std::abs(H.trace().real())));
        CHECK(std::is_sorted(e.values.begin(), e.values.end()));
    }
}

TEST_CASE("hermitian_sqrt squares back to the input") {
    const CMatrix G = random_gaussian(4, 4, 707);
    const CMatrix H = (G * G.adjoint()).hermitian_part();
    const CMatrix S = hermitian_sqrt(H);
    CHECK(dist(S * S, H) <= 1e-11 * H.frobenius_norm());
}

TEST_CASE("gramian_integral: constant, scalar decay, scalar growth") {
    CHECK(dist(gramian_integral(CMatrix(2, 2), CMatrix::identity(2), 2.0),
               2.0 * CMatrix::identity(2)) <= 1e-12);

    CMatrix a(1, 1), q(1, 1);
    a(0, 0) = -1.0;
    q(0, 0) = 1.0;
    for (double x : {0.3, 1.0, 2.5}) {
        const double expected = (1.0 - std::exp(-2.0 * x)) / 2.0;
        CHECK(std::abs(gramian_integral(a, q, x)(0, 0).real() - expected) <= 1e-13);
    }

    a(0, 0) = 2.0;  // -2i * alpha for alpha = i
    for (double x : {0.4, 1.0}) {
        const double expected = (std::exp(4.0 * x) - 1.0) / 4.0;
        CHECK(std::abs(gramian_integral(a, q, x)(0, 0).real() - expected) <=
              1e-12 * expected);
    }

    CHECK_THROWS_AS(gramian_integral(a, q, -1.0), std::invalid_argument);
}

TEST_CASE("gramian_integral agrees with Simpson quadrature") {
    for (std::uint64_t trial = 0; trial < 4; ++trial) {
        const std::size_t n = 2 + trial % 3;
        CMatrix A = random_gaussian(n, n, derive_seed(808, trial));
        A *= Complex{1.0 / std::max(operator_norm(A), 1e-12), 0.0};
        const CMatrix G = random_gaussian(n, n, derive_seed(809, trial));
        const CMatrix Q = (G * G.adjoint()).hermitian_part();
        const double x = 0.7 + 0.3 * trial;
        const CMatrix primary = gramian_integral(A, Q, x);
        const CMatrix oracle = gramian_quadrature(A, Q, x);
        CHECK(dist(primary, oracle) <= 1e-8 * std::max(1.0, oracle.frobenius_norm()));
    }
}

TEST_CASE("gramian_integral is monotone in x in the PSD order") {
    const CMatrix A = random_gaussian(3, 3, 901);
    const CMatrix G = random_gaussian(3, 2, 902);
    const CMatrix Q = (G * G.adjoint()).hermitian_part();
    CMatrix prev(3, 3);
    for (double x : {0.0, 0.2, 0.5, 1.0, 2.0}) {
        const CMatrix cur = gramian_integral(A, Q, x);
        CHECK(min_eigenvalue_hermitian(cur - prev) >= -1e-10 * std::max(1.0, cur.frobenius_norm()));
        prev = cur;
    }
}

TEST_CASE("operator_norm: identity, diagonal, nilpotent") {
    CHECK(operator_norm(CMatrix::identity(3)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(operator_norm(CMatrix::diagonal({Complex{3.0, 0.0}, Complex{0.0, -4.0}})) ==
          doctest::Approx(4.0).epsilon(1e-12));
    const CMatrix N{{0.0, 2.0}, {0.0, 0.0}};
    CHECK(operator_norm(N) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(operator_norm(CMatrix(2, 3)) == 0.0);
}

TEST_CASE("operator_norm is unitarily invariant") {
    for (std::uint64_t trial = 0; trial < 6; ++trial) {
        const std::size_t n = 2 + trial % 4;
        const CMatrix M = random_gaussian(n, n, derive_seed(111, trial));
        const CMatrix U = random_unitary(n, derive_seed(112, trial));
        const CMatrix V = random_unitary(n, derive_seed(113, trial));
        const double a = operator_norm(M);
        const double b = operator_norm(U * M * V);
        CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, a));
    }
}

TEST_CASE("solve_linear: direct cases and singular detection") {
    const CMatrix B = random_gaussian(3, 2, 121);
    CHECK(dist(solve_linear(CMatrix::identity(3), B), B) <= 1e-14);

    CMatrix d(1, 1), r(1, 1);
    d(0, 0) = 2.0;
    r(0, 0) = 4.0;
    CHECK(std::abs(solve_linear(d, r)(0, 0) - Complex{2.0, 0.0}) <= 1e-15);

    for (double x : {0.5, 1.5}) {
        CMatrix m(1, 1), one(1, 1);
        m(0, 0) = std::cosh(2.0 * x);
        one(0, 0) = 1.0;
        CHECK(std::abs(solve_linear(m, one)(0, 0).real() - 1.0 / std::cosh(2.0 * x)) <= 1e-15);
    }

    CMatrix sing{{1.0, 2.0}, {2.0, 4.0}};
    CHECK_THROWS_AS(solve_linear(sing, CMatrix::identity(2)), NumericalError);
}

TEST_CASE("solve_linear residuals on random systems") {
    for (std::uint64_t trial = 0; trial < 8; ++trial) {
        const std::size_t n = 1 + trial % 8;
        const CMatrix M = random_gaussian(n, n, derive_seed(131, trial));
        const CMatrix rhs = random_gaussian(n, 3, derive_seed(132, trial));
        const CMatrix X = solve_linear(M, rhs);
        CHECK((M * X - rhs).frobenius_norm() <=
              1e-10 * operator_norm(M) * std::max(1.0, X.frobenius_norm()));
    }
}

TEST_CASE("qr_column_pivoted: rank detection and orthonormal image basis") {
    // Rank-2 matrix from an outer product pair.
    const CMatrix u = random_gaussian(5, 2, 141);
    const CMatrix v = random_gaussian(2, 4, 142);
    const CMatrix M = u * v;
    const PivotedQR qr = qr_column_pivoted(M);
    CHECK(qr.rank(1e-10) == 2);
    CHECK(dist(qr.Q.adjoint() * qr.Q, CMatrix::identity(5)) <= 1e-12 * 5);

    // Reconstruction against the permuted input.
    CMatrix Mp(M.rows(), M.cols());
    for (std::size_t c = 0; c < M.cols(); ++c) Mp.set_block(0, c, M.col(qr.perm[c]));
    CHECK(dist(qr.Q * qr.R, Mp) <= 1e-12 * std::max(1.0, M.frobenius_norm()));

    // Leading rank columns of Q span the image: projector fixes M.
    const CMatrix Qr = qr.Q.block(0, 0, 5, 2);
    CHECK(dist(Qr * (Qr.adjoint() * M), M) <= 1e-11 * M.frobenius_norm());

    CHECK(qr_column_pivoted(CMatrix(3, 3)).rank(1e-10) == 0);
}

TEST_CASE("zero-dimension propagation") {
    CHECK(expm(CMatrix(0, 0)).rows() == 0);
    CHECK(solve_linear(CMatrix(0, 0), CMatrix(0, 2)).cols() == 2);
    CHECK(spectrum(CMatrix(0, 0)).eigenvalues.empty());
    CHECK(is_positive_definite(CMatrix(0, 0)).positive);
    CHECK(operator_norm(CMatrix(0, 0)) == 0.0);
}
