#include "sdirac/verify.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sdirac {

namespace {

// Coefficient matrix izj + jV(x) with V = [[0, v], [v*, 0]].
CMatrix dirac_coefficient(const CMatrix& v, std::size_t m1, std::size_t m2, Complex z) {
    CMatrix M(m1 + m2, m1 + m2);
    const Complex izz = iu * z;
    for (std::size_t i = 0; i < m1; ++i) M(i, i) = izz;
    for (std::size_t i = m1; i < m1 + m2; ++i) M(i, i) = -izz;
    M.set_block(0, m1, v);
    M.set_block(m1, 0, -v.adjoint());
    return M;
}

Verdict tail_verdict(double first, double second, double& ratio) {
    constexpr double tiny = 1e-300;
    if (first <= tiny) {
        ratio = second <= tiny ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
        ratio = second / first;
    }
    if (ratio <= kTailPassRatio) return Verdict::pass;
    if (ratio >= kTailFailRatio) return Verdict::fail;
    return Verdict::inconclusive;
}

}  // namespace

FundamentalSolutionContinuous integrate_dirac(const PotentialFn& v, std::size_t m1,
                                              std::size_t m2, Complex z, double L, double h) {
    if (L <= 0.0 || h <= 0.0) {
        throw std::invalid_argument("integrate_dirac: L and h must be positive");
    }
    std::size_t steps = static_cast<std::size_t>(std::ceil(L / h));
    steps = ((steps + 3) / 4) * 4;  // Simpson-compatible grid
    if (steps > 50'000'000) throw std::invalid_argument("integrate_dirac: step count overflow");
    const double hh = L / static_cast<double>(steps);

    FundamentalSolutionContinuous sol;
    sol.h = hh;
    sol.L = L;
    sol.z = z;
    sol.Y.reserve(steps + 1);

    const std::size_t m = m1 + m2;
    CMatrix Y = CMatrix::identity(m);
    sol.Y.push_back(Y);
    for (std::size_t k = 0; k < steps; ++k) {
        const double x = hh * static_cast<double>(k);
        const CMatrix v0 = v(x);
        const CMatrix vh = v(x + 0.5 * hh);
        const CMatrix v1 = v(x + hh);
        if (!v0.is_finite() || !vh.is_finite() || !v1.is_finite()) {
            throw std::invalid_argument("integrate_dirac: non-finite potential sample");
        }
        const CMatrix M0 = dirac_coefficient(v0, m1, m2, z);
        const CMatrix Mh = dirac_coefficient(vh, m1, m2, z);
        const CMatrix M1 = dirac_coefficient(v1, m1, m2, z);
        const CMatrix k1 = M0 * Y;
        const CMatrix k2 = Mh * (Y + (0.5 * hh) * k1);
        const CMatrix k3 = Mh * (Y + (0.5 * hh) * k2);
        const CMatrix k4 = M1 * (Y + hh * k3);
        Y += (hh / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        sol.Y.push_back(Y);
    }
    return sol;
}

FundamentalSolutionContinuous integrate_dirac(const ContinuousPotential& p, Complex z, double L,
                                              double h) {
    return integrate_dirac([&p](double x) { return p.value(x); }, p.m1(), p.m2(), z, L, h);
}

WeylDefectReport weyl_defect_continuous(const PotentialFn& v, std::size_t m1, std::size_t m2,
                                        const CMatrix& phi_z, Complex z, double L, double h,
                                        double bound_M) {
    if (phi_z.rows() != m2 || phi_z.cols() != m1) {
        throw std::invalid_argument("weyl_defect_continuous: phi must be m2 x m1");
    }
    const FundamentalSolutionContinuous sol = integrate_dirac(v, m1, m2, z, L, h);
    const std::size_t steps = sol.Y.size() - 1;

    // Weyl column [I; phi].
    CMatrix col(m1 + m2, m1);
    col.set_block(0, 0, CMatrix::identity(m1));
    col.set_block(m1, 0, phi_z);

    std::vector<double> f(steps + 1);
    WeylDefectReport rep;
    rep.min_sample = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= steps; ++k) {
        const double val = (sol.Y[k] * col).frobenius_norm();
        f[k] = val * val;
        rep.min_sample = std::min(rep.min_sample, f[k]);
    }

    auto simpson = [&](std::size_t a, std::size_t b) {
        double acc = f[a] + f[b];
        for (std::size_t k = a + 1; k < b; ++k) acc += ((k - a) % 2 == 1 ? 4.0 : 2.0) * f[k];
        return acc * sol.h / 3.0;
    };

    rep.z = z;
    rep.bound_M = bound_M;
    rep.z_in_region = z.imag() > bound_M;
    const std::size_t q = steps / 4;
    rep.checkpoints = {simpson(0, q), simpson(0, 2 * q), simpson(0, 3 * q), simpson(0, steps)};
    rep.first_half = simpson(0, 2 * q);
    rep.second_half = simpson(2 * q, steps);
    rep.verdict = tail_verdict(rep.first_half, rep.second_half, rep.ratio);
    return rep;
}

WeylDefectReport weyl_defect_continuous(const ContinuousPotential& p, const CMatrix& phi_z,
                                        Complex z, double L, double h) {
    const double M = p.sup_norm_on_grid(p.default_x_max()) + 1.0;
    return weyl_defect_continuous([&p](double x) { return p.value(x); }, p.m1(), p.m2(), phi_z,
                                  z, L, h, M);
}

std::vector<CMatrix> propagate_discrete(const DiscretePotential& p, Complex z, std::size_t K) {
    if (z == Complex{0.0, 0.0}) {
        throw std::invalid_argument("propagate_discrete: z must be nonzero");
    }
    if (K > p.K()) {
        throw std::invalid_argument("propagate_discrete: K exceeds the stored sequence length");
    }
    const std::size_t m = p.m();
    std::vector<CMatrix> w;
    w.reserve(K + 1);
    w.push_back(CMatrix::identity(m));
    const Complex iz = iu / z;
    for (std::size_t k = 0; k < K; ++k) {
        w.push_back((CMatrix::identity(m) + iz * p.C[k]) * w.back());
    }
    return w;
}

WeylDefectReport weyl_defect_discrete(const DiscretePotential& p, const CMatrix& phi_z, Complex z,
                                      std::size_t K) {
    const std::size_t m1 = p.m1();
    const std::size_t m2 = p.m2();
    if (phi_z.rows() != m1 || phi_z.cols() != m2) {
        throw std::invalid_argument("weyl_defect_discrete: phi must be m1 x m2");
    }
    const std::vector<CMatrix> w = propagate_discrete(p, z, K);

    double bound = 0.0;
    for (const auto& C : p.C) bound = std::max(bound, operator_norm(C));

    // Weyl column [phi; I].
    CMatrix col(m1 + m2, m2);
    col.set_block(0, 0, phi_z);
    col.set_block(m1, 0, CMatrix::identity(m2));

    WeylDefectReport rep;
    rep.z = z;
    rep.bound_M = bound + 1.0;
    rep.z_in_region = z.imag() > rep.bound_M;
    rep.min_sample = std::numeric_limits<double>::infinity();

    std::vector<double> partial;
    partial.reserve(w.size());
    double acc = 0.0;
    for (const auto& wk : w) {
        const double s = (wk * col).frobenius_norm();
        const double val = s * s;
        rep.min_sample = std::min(rep.min_sample, val);
        acc += val;
        partial.push_back(acc);
    }
    const std::size_t total = partial.size();
    const std::size_t half = total / 2;
    rep.checkpoints = {partial[total / 4], partial[half], partial[(3 * total) / 4],
                       partial[total - 1]};
    rep.first_half = partial[half];
    rep.second_half = partial[total - 1] - partial[half];
    rep.verdict = tail_verdict(rep.first_half, rep.second_half, rep.ratio);
    return rep;
}

}  // namespace sdirac
