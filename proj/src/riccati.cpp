#include "sdirac/riccati.hpp"

#include <cmath>
#include <stdexcept>

namespace sdirac {

namespace {

void validate_problem(const RiccatiProblem& p) {
    if (!p.A.is_square()) throw std::invalid_argument("RiccatiProblem: A must be square");
    if (p.B.rows() != p.A.rows() || p.C.cols() != p.A.rows()) {
        throw std::invalid_argument("RiccatiProblem: nonconformable blocks");
    }
}

// Standard-form drift: continuous G = iA*, discrete G = -iA* (the discrete
// equation is the continuous one with A replaced by -A).
CMatrix standard_drift(const RiccatiProblem& p) {
    return (p.variant == RiccatiVariant::continuous ? iu : -iu) * p.A.adjoint();
}

// Solve L* Y + Y L = W through the Kronecker system; unique when
// sigma(L*) and sigma(-L) are disjoint. Column-stacked vec ordering.
CMatrix solve_lyapunov(const CMatrix& L, const CMatrix& W) {
    const std::size_t n = L.rows();
    if (n == 0) return CMatrix(0, 0);
    CMatrix K(n * n, n * n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) {
            const std::size_t row = c * n + r;
            for (std::size_t k = 0; k < n; ++k) {
                K(row, c * n + k) += std::conj(L(k, r));  // (L* Y)(r, c)
                K(row, k * n + r) += L(k, c);             // (Y L)(r, c)
            }
        }
    }
    CMatrix w(n * n, 1);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) w(c * n + r, 0) = W(r, c);
    const CMatrix y = solve_linear(K, w);
    CMatrix Y(n, n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) Y(r, c) = y(c * n + r, 0);
    return Y;
}

// One Newton-Kleinman step for G*X + XG - XDX + Q = 0 at the iterate X.
CMatrix newton_step(const CMatrix& G, const CMatrix& D, const CMatrix& Q, const CMatrix& X) {
    const CMatrix L = G - D * X;
    const CMatrix W = -(Q + X * D * X);
    return solve_lyapunov(L, W).hermitian_part();
}

int newton_polish(const RiccatiProblem& p, const CMatrix& G, const CMatrix& D, const CMatrix& Q,
                  CMatrix& X, int max_steps) {
    double best = residual(p, X);
    int steps = 0;
    for (; steps < max_steps; ++steps) {
        const double scale = residual_scale(p, X);
        if (best <= 1e-13 * std::max(scale, 1e-300)) break;
        CMatrix next;
        try {
            next = newton_step(G, D, Q, X);
        } catch (const NumericalError&) {
            break;
        }
        const double res = residual(p, next);
        if (!next.is_finite() || res >= best) break;
        X = next;
        best = res;
    }
    return steps;
}

}  // namespace

double residual(const RiccatiProblem& p, const CMatrix& X) {
    validate_problem(p);
    if (X.rows() != p.A.rows() || !X.is_square()) {
        throw std::invalid_argument("residual: X must be n x n");
    }
    const Complex sign = (p.variant == RiccatiVariant::continuous) ? iu : -iu;
    const CMatrix lhs =
        X * (p.C.adjoint() * p.C) * X + sign * (p.A * X - X * p.A.adjoint()) -
        p.B * p.B.adjoint();
    return operator_norm(lhs);
}

double residual_scale(const RiccatiProblem& p, const CMatrix& X) {
    const double nx = operator_norm(X);
    const double nc = operator_norm(p.C);
    const double na = operator_norm(p.A);
    const double nb = operator_norm(p.B);
    return nx * nx * nc * nc + na * nx + nb * nb;
}

RiccatiSolution solve_via_hamiltonian(const RiccatiProblem& p) {
    validate_problem(p);
    const std::size_t n = p.A.rows();
    RiccatiSolution sol;
    if (n == 0) {
        sol.X = CMatrix(0, 0);
        return sol;
    }
    const CMatrix G = standard_drift(p);
    const CMatrix D = p.C.adjoint() * p.C;
    const CMatrix Q = p.B * p.B.adjoint();

    CMatrix H(2 * n, 2 * n);
    H.set_block(0, 0, G);
    H.set_block(0, n, -D);
    H.set_block(n, 0, -Q);
    H.set_block(n, n, -G.adjoint());

    SchurDecomposition s = schur_decompose(H);
    std::vector<bool> stable(2 * n);
    std::size_t count = 0;
    for (std::size_t i = 0; i < 2 * n; ++i) {
        stable[i] = s.T(i, i).real() < 0.0;
        count += stable[i] ? 1 : 0;
    }
    if (count != n) {
        throw NumericalError("solve_via_hamiltonian: stable subspace has dimension " +
                             std::to_string(count) + ", expected " + std::to_string(n));
    }
    schur_reorder(s, stable);
    const CMatrix U1 = s.Q.block(0, 0, n, n);
    const CMatrix U2 = s.Q.block(n, 0, n, n);
    sol.X = solve_linear(U1.adjoint(), U2.adjoint()).adjoint().hermitian_part();
    sol.iterations = newton_polish(p, G, D, Q, sol.X, 5);
    sol.residual_norm = residual(p, sol.X);
    return sol;
}

RiccatiSolution solve_via_newton(const RiccatiProblem& p) {
    validate_problem(p);
    const std::size_t n = p.A.rows();
    RiccatiSolution sol;
    if (n == 0) {
        sol.X = CMatrix(0, 0);
        return sol;
    }
    const CMatrix G = standard_drift(p);
    const CMatrix D = p.C.adjoint() * p.C;
    const CMatrix Q = p.B * p.B.adjoint();

    // Stabilizing start: (G + beta I) P + P (G + beta I)* = 2 C*C gives
    // P > 0 under observability, and G - C*C P^{-1} is then a stable
    // closed loop (Lyapunov certificate -2 beta P).
    const double beta = operator_norm(G) + 1.0;
    const CMatrix M = G + beta * CMatrix::identity(n);
    const CMatrix P = solve_lyapunov(M.adjoint(), 2.0 * D).hermitian_part();
    const PosDefResult pd = is_positive_definite(P);
    if (!pd.positive) {
        throw NumericalError("solve_via_newton: stabilization Gramian not positive (" +
                             pd.reason + "); is {C, A} observable?");
    }
    CMatrix X = inverse(P).hermitian_part();

    double prev_res = residual(p, X);
    int stagnant = 0;
    constexpr int kMaxIter = 200;
    for (int iter = 1; iter <= kMaxIter; ++iter) {
        X = newton_step(G, D, Q, X);
        sol.iterations = iter;
        const double res = residual(p, X);
        const double scale = std::max(residual_scale(p, X), 1e-300);
        if (res <= 1e-12 * scale) {
            prev_res = res;
            break;
        }
        if (res >= prev_res * (1.0 - 1e-12)) {
            if (++stagnant >= 3) {
                prev_res = std::min(res, prev_res);
                break;
            }
        } else {
            stagnant = 0;
        }
        prev_res = res;
        if (iter == kMaxIter) {
            throw NumericalError("solve_via_newton: no convergence after 200 iterations, "
                                 "residual " +
                                 std::to_string(res));
        }
    }
    sol.X = X;
    sol.residual_norm = residual(p, X);
    return sol;
}

RiccatiSolution solve_max_positive(const RiccatiProblem& p) {
    validate_problem(p);
    if (!is_controllable(p.A, p.B).full_rank || !is_observable(p.C, p.A).full_rank) {
        throw std::invalid_argument(
            "solve_max_positive: (A, B, C) is not minimal; the positive solution is not "
            "guaranteed unique. Reduce the realization first.");
    }

    auto valid = [&](const RiccatiSolution& s) {
        if (p.A.rows() == 0) return true;
        if (!s.X.is_finite()) return false;
        if (!is_positive_definite(s.X).positive) return false;
        return s.residual_norm <= 1e-10 * residual_scale(p, s.X);
    };

    RiccatiSolution sol;
    std::string first_failure;
    try {
        sol = solve_via_hamiltonian(p);
        if (valid(sol)) return sol;
        first_failure = "hamiltonian path residual " + std::to_string(sol.residual_norm);
    } catch (const NumericalError& e) {
        first_failure = e.what();
    }
    sol = solve_via_newton(p);
    if (!valid(sol)) {
        throw NumericalError("solve_max_positive: both paths failed (" + first_failure +
                             "; newton residual " + std::to_string(sol.residual_norm) + ")");
    }
    return sol;
}

TriplePerturbation perturb_triple(const CMatrix& A, const CMatrix& B, const CMatrix& C,
                                  double delta, std::uint64_t seed) {
    TriplePerturbation d;
    d.A = random_gaussian(A.rows(), A.cols(), derive_seed(seed, 0));
    d.B = random_gaussian(B.rows(), B.cols(), derive_seed(seed, 1));
    d.C = random_gaussian(C.rows(), C.cols(), derive_seed(seed, 2));
    const double total = operator_norm(d.A) + operator_norm(d.B) + operator_norm(d.C);
    const double f = total > 0.0 ? (delta / 2.0) / total : 0.0;
    d.A *= Complex{f, 0.0};
    d.B *= Complex{f, 0.0};
    d.C *= Complex{f, 0.0};
    return d;
}

SensitivityStats sensitivity_probe(const RiccatiProblem& p, double delta, int trials,
                                   std::uint64_t seed) {
    if (delta < 0.0) throw std::invalid_argument("sensitivity_probe: delta must be >= 0");
    const RiccatiSolution base = solve_max_positive(p);
    SensitivityStats stats;
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        const TriplePerturbation d =
            perturb_triple(p.A, p.B, p.C, delta, derive_seed(seed, static_cast<std::uint64_t>(t)));
        RiccatiProblem q{p.A + d.A, p.B + d.B, p.C + d.C, p.variant};
        if (!is_controllable(q.A, q.B).full_rank || !is_observable(q.C, q.A).full_rank) {
            ++stats.skipped;
            continue;
        }
        RiccatiSolution sol;
        try {
            sol = solve_max_positive(q);
        } catch (const NumericalError&) {
            ++stats.skipped;
            continue;
        }
        const double dev = operator_norm(sol.X - base.X);
        stats.max_deviation = std::max(stats.max_deviation, dev);
        sum += dev;
        ++stats.completed;
    }
    if (stats.completed > 0) stats.mean_deviation = sum / stats.completed;
    return stats;
}

}  // namespace sdirac
