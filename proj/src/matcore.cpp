#include "sdirac/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace sdirac {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Unitary 2x2 zeroing rotation: U(a,b) * [a; b] = [r; 0] with
// U = (1/r) [[conj(a), conj(b)], [-b, a]].
struct Givens {
    Complex ca, cb;  // conj(a)/r, conj(b)/r
    double r = 0.0;
    bool trivial = true;
};

Givens make_givens(Complex a, Complex b) {
    Givens g;
    g.r = std::sqrt(std::norm(a) + std::norm(b));
    if (g.r == 0.0 || std::abs(b) == 0.0) {
        g.trivial = true;
        g.ca = 1.0;
        g.cb = 0.0;
        g.r = std::abs(a);
        return g;
    }
    g.trivial = false;
    g.ca = std::conj(a) / g.r;
    g.cb = std::conj(b) / g.r;
    return g;
}

// Rows i and i+1 of M over columns [c0, c1): M <- U M.
void apply_givens_left(CMatrix& M, const Givens& g, std::size_t i, std::size_t c0, std::size_t c1) {
    if (g.trivial) return;
    for (std::size_t c = c0; c < c1; ++c) {
        const Complex x = M(i, c);
        const Complex y = M(i + 1, c);
        M(i, c) = g.ca * x + g.cb * y;
        M(i + 1, c) = -std::conj(g.cb) * x + std::conj(g.ca) * y;
    }
}

// Columns i and i+1 of M over rows [r0, r1): M <- M U*.
void apply_givens_right(CMatrix& M, const Givens& g, std::size_t i, std::size_t r0, std::size_t r1) {
    if (g.trivial) return;
    for (std::size_t r = r0; r < r1; ++r) {
        const Complex x = M(r, i);
        const Complex y = M(r, i + 1);
        M(r, i) = std::conj(g.ca) * x + std::conj(g.cb) * y;
        M(r, i + 1) = -g.cb * x + g.ca * y;
    }
}

struct Householder {
    std::vector<Complex> v;
    double tau = 0.0;  // 2 / (v* v); zero means identity
};

// Reflector P = I - tau v v* with P x = beta e1, |beta| = ||x||.
Householder make_householder(const std::vector<Complex>& x) {
    Householder h;
    h.v = x;
    double nrm2 = 0.0;
    for (const auto& e : x) nrm2 += std::norm(e);
    const double nrm = std::sqrt(nrm2);
    if (nrm == 0.0) return h;
    Complex phase = x[0] == Complex{0.0, 0.0} ? Complex{1.0, 0.0} : x[0] / std::abs(x[0]);
    const Complex beta = -phase * nrm;
    h.v[0] -= beta;
    double vnrm2 = 0.0;
    for (const auto& e : h.v) vnrm2 += std::norm(e);
    if (vnrm2 == 0.0) return h;
    h.tau = 2.0 / vnrm2;
    return h;
}

// M <- P M on rows [r0, r0+len) for all columns.
void apply_householder_left(CMatrix& M, const Householder& h, std::size_t r0) {
    if (h.tau == 0.0) return;
    const std::size_t len = h.v.size();
    for (std::size_t c = 0; c < M.cols(); ++c) {
        Complex dot{0.0, 0.0};
        for (std::size_t k = 0; k < len; ++k) dot += std::conj(h.v[k]) * M(r0 + k, c);
        dot *= h.tau;
        for (std::size_t k = 0; k < len; ++k) M(r0 + k, c) -= h.v[k] * dot;
    }
}

// M <- M P on columns [c0, c0+len) for all rows.
void apply_householder_right(CMatrix& M, const Householder& h, std::size_t c0) {
    if (h.tau == 0.0) return;
    const std::size_t len = h.v.size();
    for (std::size_t r = 0; r < M.rows(); ++r) {
        Complex dot{0.0, 0.0};
        for (std::size_t k = 0; k < len; ++k) dot += M(r, c0 + k) * h.v[k];
        dot *= h.tau;
        for (std::size_t k = 0; k < len; ++k) M(r, c0 + k) -= dot * std::conj(h.v[k]);
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Linear solves
// ---------------------------------------------------------------------------

CMatrix solve_linear(const CMatrix& M, const CMatrix& rhs) {
    if (!M.is_square()) throw std::invalid_argument("solve_linear: matrix not square");
    if (M.rows() != rhs.rows()) throw std::invalid_argument("solve_linear: rhs row mismatch");
    const std::size_t n = M.rows();
    if (n == 0) return CMatrix(0, rhs.cols());

    CMatrix a = M;
    CMatrix x = rhs;
    const double scale = std::max(a.max_abs(), std::numeric_limits<double>::min());

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a(k, k));
        for (std::size_t r = k + 1; r < n; ++r) {
            const double v = std::abs(a(r, k));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best <= 16.0 * kEps * scale * static_cast<double>(n)) {
            throw NumericalError("solve_linear: matrix singular to working precision "
                                 "(pivot/scale = " +
                                 std::to_string(best / scale) + ")");
        }
        if (piv != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(piv, c));
            for (std::size_t c = 0; c < x.cols(); ++c) std::swap(x(k, c), x(piv, c));
        }
        const Complex d = a(k, k);
        for (std::size_t r = k + 1; r < n; ++r) {
            const Complex f = a(r, k) / d;
            if (f == Complex{0.0, 0.0}) continue;
            a(r, k) = f;
            for (std::size_t c = k + 1; c < n; ++c) a(r, c) -= f * a(k, c);
            for (std::size_t c = 0; c < x.cols(); ++c) x(r, c) -= f * x(k, c);
        }
    }
    // Back substitution.
    for (std::size_t kk = n; kk-- > 0;) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            Complex s = x(kk, c);
            for (std::size_t j = kk + 1; j < n; ++j) s -= a(kk, j) * x(j, c);
            x(kk, c) = s / a(kk, kk);
        }
    }
    return x;
}

CMatrix inverse(const CMatrix& M) { return solve_linear(M, CMatrix::identity(M.rows())); }

double condition_number(const CMatrix& M) {
    if (M.rows() == 0) return 1.0;
    try {
        return operator_norm(M) * operator_norm(inverse(M));
    } catch (const NumericalError&) {
        return std::numeric_limits<double>::infinity();
    }
}

// ---------------------------------------------------------------------------
// Operator norm
// ---------------------------------------------------------------------------

double operator_norm(const CMatrix& M) {
    if (M.empty()) return 0.0;
    const double scale = M.max_abs();
    if (scale == 0.0) return 0.0;

    const std::size_t n = M.cols();
    // Start from the dominant column of M*M.
    std::vector<Complex> v(n, Complex{0.0, 0.0});
    {
        std::size_t best = 0;
        double best_norm = -1.0;
        for (std::size_t c = 0; c < n; ++c) {
            double s = 0.0;
            for (std::size_t r = 0; r < M.rows(); ++r) s += std::norm(M(r, c));
            if (s > best_norm) {
                best_norm = s;
                best = c;
            }
        }
        v[best] = 1.0;
    }

    auto apply = [&](const std::vector<Complex>& in, std::vector<Complex>& out) {
        // out = M* (M in)
        std::vector<Complex> w(M.rows(), Complex{0.0, 0.0});
        for (std::size_t r = 0; r < M.rows(); ++r) {
            Complex s{0.0, 0.0};
            for (std::size_t c = 0; c < n; ++c) s += M(r, c) * in[c];
            w[r] = s;
        }
        for (std::size_t c = 0; c < n; ++c) {
            Complex s{0.0, 0.0};
            for (std::size_t r = 0; r < M.rows(); ++r) s += std::conj(M(r, c)) * w[r];
            out[c] = s;
        }
    };

    double lambda = 0.0;
    int stable = 0;
    std::vector<Complex> u(n);
    for (int iter = 0; iter < 5000; ++iter) {
        apply(v, u);
        double rayleigh = 0.0;
        for (std::size_t c = 0; c < n; ++c) rayleigh += (std::conj(v[c]) * u[c]).real();
        double unrm = 0.0;
        for (const auto& e : u) unrm += std::norm(e);
        unrm = std::sqrt(unrm);
        if (unrm == 0.0) return 0.0;
        for (std::size_t c = 0; c < n; ++c) v[c] = u[c] / unrm;
        if (std::abs(rayleigh - lambda) <= 1e-13 * std::max(rayleigh, 1e-300)) {
            if (++stable >= 3) return std::sqrt(std::max(rayleigh, 0.0));
        } else {
            stable = 0;
        }
        lambda = rayleigh;
    }
    // Clustered top singular values stall the power step; fall back to the
    // exact Hermitian eigensolver on M*M.
    const HermitianEig eig = hermitian_eig(M.adjoint() * M);
    return std::sqrt(std::max(eig.values.back(), 0.0));
}

// ---------------------------------------------------------------------------
// Hermitian machinery
// ---------------------------------------------------------------------------

PosDefResult is_positive_definite(const CMatrix& H) {
    if (!H.is_square()) throw std::invalid_argument("is_positive_definite: matrix not square");
    PosDefResult res;
    if (H.rows() == 0) {
        res.positive = true;
        res.reason = "empty";
        res.factor = CMatrix(0, 0);
        return res;
    }
    const double scale = H.frobenius_norm();
    if (H.hermiticity_defect() > 1e-10 * std::max(scale, std::numeric_limits<double>::min())) {
        res.reason = "not_hermitian";
        return res;
    }
    const CMatrix A = H.hermitian_part();
    const std::size_t n = A.rows();
    CMatrix L(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        double d = A(k, k).real();
        for (std::size_t j = 0; j < k; ++j) d -= std::norm(L(k, j));
        if (!(d > 0.0)) {
            res.reason = "nonpositive_pivot";
            return res;
        }
        L(k, k) = std::sqrt(d);
        for (std::size_t i = k + 1; i < n; ++i) {
            Complex s = A(i, k);
            for (std::size_t j = 0; j < k; ++j) s -= L(i, j) * std::conj(L(k, j));
            L(i, k) = s / L(k, k).real();
        }
    }
    res.positive = true;
    res.factor = std::move(L);
    res.reason = "ok";
    return res;
}

CMatrix cholesky_solve(const CMatrix& L, const CMatrix& rhs) {
    const std::size_t n = L.rows();
    if (rhs.rows() != n) throw std::invalid_argument("cholesky_solve: rhs row mismatch");
    CMatrix y = rhs;
    for (std::size_t c = 0; c < y.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            Complex s = y(i, c);
            for (std::size_t j = 0; j < i; ++j) s -= L(i, j) * y(j, c);
            y(i, c) = s / L(i, i).real();
        }
        for (std::size_t ii = n; ii-- > 0;) {
            Complex s = y(ii, c);
            for (std::size_t j = ii + 1; j < n; ++j) s -= std::conj(L(j, ii)) * y(j, c);
            y(ii, c) = s / L(ii, ii).real();
        }
    }
    return y;
}

HermitianEig hermitian_eig(const CMatrix& H) {
    if (!H.is_square()) throw std::invalid_argument("hermitian_eig: matrix not square");
    const std::size_t n = H.rows();
    HermitianEig out;
    out.vectors = CMatrix::identity(n);
    if (n == 0) return out;

    CMatrix A = H.hermitian_part();
    CMatrix& V = out.vectors;
    const double total = std::max(A.frobenius_norm(), std::numeric_limits<double>::min());

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(A(p, q));
        off = std::sqrt(2.0 * off);
        if (off <= 1e-14 * total) break;
        if (sweep == 99) throw NumericalError("hermitian_eig: Jacobi sweeps did not converge");

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex w = A(p, q);
                const double aw = std::abs(w);
                if (aw <= 1e-300 || aw <= 1e-18 * total) continue;
                const Complex d = w / aw;  // phase
                const double app = A(p, p).real();
                const double aqq = A(q, q).real();
                const double tau = (aqq - app) / (2.0 * aw);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // J = [[c, s], [-conj(d) s, conj(d) c]] on the (p, q) plane.
                const Complex jqp = -std::conj(d) * s;
                const Complex jqq = std::conj(d) * c;
                // A <- J* A J
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = A(k, p);
                    const Complex akq = A(k, q);
                    A(k, p) = akp * c + akq * jqp;
                    A(k, q) = akp * s + akq * jqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = A(p, k);
                    const Complex aqk = A(q, k);
                    A(p, k) = c * apk + std::conj(jqp) * aqk;
                    A(q, k) = s * apk + std::conj(jqq) * aqk;
                }
                A(p, q) = 0.0;
                A(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vkp = V(k, p);
                    const Complex vkq = V(k, q);
                    V(k, p) = vkp * c + vkq * jqp;
                    V(k, q) = vkp * s + vkq * jqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return A(a, a).real() < A(b, b).real(); });
    out.values.resize(n);
    CMatrix sorted(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        out.values[c] = A(order[c], order[c]).real();
        for (std::size_t r = 0; r < n; ++r) sorted(r, c) = V(r, order[c]);
    }
    out.vectors = std::move(sorted);
    return out;
}

double min_eigenvalue_hermitian(const CMatrix& H) {
    if (H.rows() == 0) return 0.0;
    return hermitian_eig(H).values.front();
}

CMatrix hermitian_sqrt(const CMatrix& H) {
    const HermitianEig eig = hermitian_eig(H);
    const std::size_t n = H.rows();
    const double scale = std::max(H.frobenius_norm(), std::numeric_limits<double>::min());
    CMatrix D(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = eig.values[i];
        if (v < -1e-12 * scale) {
            throw NumericalError("hermitian_sqrt: matrix has negative eigenvalue " +
                                 std::to_string(v));
        }
        D(i, i) = std::sqrt(std::max(v, 0.0));
    }
    return (eig.vectors * D * eig.vectors.adjoint()).hermitian_part();
}

// ---------------------------------------------------------------------------
// Schur decomposition and spectra
// ---------------------------------------------------------------------------

SchurDecomposition schur_decompose(const CMatrix& M) {
    if (!M.is_square()) throw std::invalid_argument("schur_decompose: matrix not square");
    const std::size_t n = M.rows();
    SchurDecomposition s;
    s.Q = CMatrix::identity(n);
    s.T = M;
    if (n <= 1) return s;

    CMatrix& H = s.T;
    CMatrix& Q = s.Q;

    // Householder reduction to Hessenberg form.
    for (std::size_t k = 0; k + 2 < n; ++k) {
        std::vector<Complex> x(n - k - 1);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = H(k + 1 + i, k);
        const Householder hh = make_householder(x);
        apply_householder_left(H, hh, k + 1);
        apply_householder_right(H, hh, k + 1);
        apply_householder_right(Q, hh, k + 1);
        for (std::size_t i = k + 2; i < n; ++i) H(i, k) = 0.0;
    }

    const double hnorm = std::max(H.frobenius_norm(), std::numeric_limits<double>::min());
    auto negligible = [&](std::size_t i) {
        double tst = std::abs(H(i, i)) + std::abs(H(i + 1, i + 1));
        if (tst == 0.0) tst = hnorm;
        return std::abs(H(i + 1, i)) <= std::max(kEps * tst, 1e-291);
    };

    std::size_t total_iter = 0;
    const std::size_t max_total = 60 * n + 100;
    std::size_t hi = n - 1;
    std::size_t stuck = 0;
    while (true) {
        // Deflate converged subdiagonals.
        while (hi > 0 && negligible(hi - 1)) {
            H(hi, hi - 1) = 0.0;
            --hi;
            stuck = 0;
        }
        if (hi == 0) break;
        std::size_t lo = hi;
        while (lo > 0 && !negligible(lo - 1)) --lo;
        if (lo > 0) H(lo, lo - 1) = 0.0;

        if (++total_iter > max_total) {
            throw NumericalError("schur_decompose: QR iteration did not converge");
        }

        // Wilkinson shift from the trailing 2x2 block, exceptional every 10
        // stalled steps.
        Complex mu;
        ++stuck;
        if (stuck % 10 == 0) {
            mu = H(hi, hi) + 0.75 * std::abs(H(hi, hi - 1));
        } else {
            const Complex a = H(hi - 1, hi - 1);
            const Complex b = H(hi - 1, hi);
            const Complex c = H(hi, hi - 1);
            const Complex d = H(hi, hi);
            const Complex tr2 = 0.5 * (a + d);
            const Complex disc = std::sqrt(tr2 * tr2 - (a * d - b * c));
            const Complex l1 = tr2 + disc;
            const Complex l2 = tr2 - disc;
            mu = (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
        }

        // Explicit single-shift QR sweep on [lo, hi].
        for (std::size_t i = lo; i <= hi; ++i) H(i, i) -= mu;
        std::vector<Givens> rot(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) {
            Givens g = make_givens(H(i, i), H(i + 1, i));
            rot[i - lo] = g;
            apply_givens_left(H, g, i, i, n);
            H(i + 1, i) = 0.0;
        }
        for (std::size_t i = lo; i < hi; ++i) {
            const Givens& g = rot[i - lo];
            apply_givens_right(H, g, i, 0, std::min(i + 2, hi) + 1);
            apply_givens_right(Q, g, i, 0, n);
        }
        for (std::size_t i = lo; i <= hi; ++i) H(i, i) += mu;
    }

    for (std::size_t r = 1; r < n; ++r)
        for (std::size_t c = 0; c < r; ++c) H(r, c) = 0.0;
    return s;
}

Spectrum spectrum(const CMatrix& M) {
    const SchurDecomposition s = schur_decompose(M);
    Spectrum sp;
    sp.eigenvalues.reserve(M.rows());
    for (std::size_t i = 0; i < M.rows(); ++i) sp.eigenvalues.push_back(s.T(i, i));
    // Consistency guard: eigenvalue sum must reproduce the trace.
    Complex sum{0.0, 0.0};
    for (const auto& l : sp.eigenvalues) sum += l;
    const Complex tr = M.rows() ? M.trace() : Complex{0.0, 0.0};
    if (std::abs(sum - tr) > 1e-9 * (1.0 + std::abs(tr)) * std::max<double>(1, M.rows())) {
        throw NumericalError("spectrum: eigenvalue sum deviates from trace by " +
                             std::to_string(std::abs(sum - tr)));
    }
    return sp;
}

CMatrix schur_eigenvector(const SchurDecomposition& s, std::size_t k) {
    const std::size_t n = s.T.rows();
    if (k >= n) throw std::invalid_argument("schur_eigenvector: index out of range");
    const Complex lambda = s.T(k, k);
    const double scale = std::max(s.T.frobenius_norm(), std::numeric_limits<double>::min());
    std::vector<Complex> u(n, Complex{0.0, 0.0});
    u[k] = 1.0;
    for (std::size_t ii = k; ii-- > 0;) {
        Complex rhs{0.0, 0.0};
        for (std::size_t j = ii + 1; j <= k; ++j) rhs += s.T(ii, j) * u[j];
        Complex den = s.T(ii, ii) - lambda;
        if (std::abs(den) < kEps * scale) den = kEps * scale;
        u[ii] = -rhs / den;
    }
    CMatrix uv(n, 1);
    for (std::size_t i = 0; i < n; ++i) uv(i, 0) = u[i];
    CMatrix v = s.Q * uv;
    const double nrm = v.frobenius_norm();
    if (nrm > 0.0) v *= Complex{1.0 / nrm, 0.0};
    return v;
}

std::size_t schur_reorder(SchurDecomposition& s, const std::vector<bool>& select) {
    const std::size_t n = s.T.rows();
    if (select.size() != n) throw std::invalid_argument("schur_reorder: selector size mismatch");
    std::vector<bool> sel = select;
    CMatrix& T = s.T;
    CMatrix& Q = s.Q;

    bool moved = true;
    while (moved) {
        moved = false;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (sel[i] || !sel[i + 1]) continue;
            // Swap the adjacent diagonal entries with a unitary similarity
            // built from the eigenvector of the 2x2 block for T(i+1, i+1).
            const Complex a = T(i, i);
            const Complex b = T(i, i + 1);
            const Complex d = T(i + 1, i + 1);
            Complex w1 = b;
            Complex w2 = d - a;
            const double wn = std::sqrt(std::norm(w1) + std::norm(w2));
            if (wn > 0.0) {
                w1 /= wn;
                w2 /= wn;
                // G = [[w1, -conj(w2)], [w2, conj(w1)]]
                for (std::size_t r = 0; r < n; ++r) {  // T <- T G, Q <- Q G
                    const Complex x = T(r, i);
                    const Complex y = T(r, i + 1);
                    T(r, i) = x * w1 + y * w2;
                    T(r, i + 1) = -x * std::conj(w2) + y * std::conj(w1);
                }
                for (std::size_t c = 0; c < n; ++c) {  // T <- G* T
                    const Complex x = T(i, c);
                    const Complex y = T(i + 1, c);
                    T(i, c) = std::conj(w1) * x + std::conj(w2) * y;
                    T(i + 1, c) = -w2 * x + w1 * y;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const Complex x = Q(r, i);
                    const Complex y = Q(r, i + 1);
                    Q(r, i) = x * w1 + y * w2;
                    Q(r, i + 1) = -x * std::conj(w2) + y * std::conj(w1);
                }
            }  // wn == 0 means a == d with b == 0: nothing to rotate.
            T(i + 1, i) = 0.0;
            const bool tmp = sel[i];
            sel[i] = sel[i + 1];
            sel[i + 1] = tmp;
            moved = true;
        }
    }
    std::size_t count = 0;
    for (bool b : sel) count += b ? 1 : 0;
    return count;
}

// ---------------------------------------------------------------------------
// Matrix exponential
// ---------------------------------------------------------------------------

namespace {

// Backward-error thresholds for the 1-norm, diagonal Pade degrees 3..13.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

CMatrix pade_solve(const CMatrix& U, const CMatrix& V) {
    return solve_linear(V - U, V + U);
}

CMatrix expm_pade(const CMatrix& A, int degree) {
    const std::size_t n = A.rows();
    const CMatrix I = CMatrix::identity(n);
    const CMatrix A2 = A * A;
    switch (degree) {
        case 3: {
            const double b[] = {120, 60, 12, 1};
            const CMatrix U = A * (b[3] * A2 + b[1] * I);
            const CMatrix V = b[2] * A2 + b[0] * I;
            return pade_solve(U, V);
        }
        case 5: {
            const double b[] = {30240, 15120, 3360, 420, 30, 1};
            const CMatrix A4 = A2 * A2;
            const CMatrix U = A * (b[5] * A4 + b[3] * A2 + b[1] * I);
            const CMatrix V = b[4] * A4 + b[2] * A2 + b[0] * I;
            return pade_solve(U, V);
        }
        case 7: {
            const double b[] = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
            const CMatrix A4 = A2 * A2;
            const CMatrix A6 = A4 * A2;
            const CMatrix U = A * (b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
            const CMatrix V = b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
            return pade_solve(U, V);
        }
        case 9: {
            const double b[] = {17643225600, 8821612800, 2075673600, 302702400, 30270240,
                                2162160,     110880,     3960,       90,        1};
            const CMatrix A4 = A2 * A2;
            const CMatrix A6 = A4 * A2;
            const CMatrix A8 = A6 * A2;
            const CMatrix U = A * (b[9] * A8 + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
            const CMatrix V = b[8] * A8 + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
            return pade_solve(U, V);
        }
        case 13: {
            const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                670442572800.0,      33522128640.0,       1323241920.0,
                                40840800.0,          960960.0,            16380.0,
                                182.0,               1.0};
            const CMatrix A4 = A2 * A2;
            const CMatrix A6 = A4 * A2;
            const CMatrix U =
                A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 +
                     b[3] * A2 + b[1] * I);
            const CMatrix V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 +
                              b[4] * A4 + b[2] * A2 + b[0] * I;
            return pade_solve(U, V);
        }
        default:
            throw std::logic_error("expm_pade: unsupported degree");
    }
}

}  // namespace

CMatrix expm(const CMatrix& M) {
    if (!M.is_square()) throw std::invalid_argument("expm: matrix not square");
    const std::size_t n = M.rows();
    if (n == 0) return CMatrix(0, 0);
    if (!M.is_finite()) throw std::invalid_argument("expm: non-finite entry");
    if (n == 1) {
        CMatrix r(1, 1);
        r(0, 0) = std::exp(M(0, 0));
        if (!r.is_finite()) throw NumericalError("expm: scalar overflow");
        return r;
    }

    const double eta = M.one_norm();
    if (eta <= kTheta3) return expm_pade(M, 3);
    if (eta <= kTheta5) return expm_pade(M, 5);
    if (eta <= kTheta7) return expm_pade(M, 7);
    if (eta <= kTheta9) return expm_pade(M, 9);

    int s = 0;
    if (eta > kTheta13) {
        s = static_cast<int>(std::ceil(std::log2(eta / kTheta13)));
        if (s > 1060) throw NumericalError("expm: norm too large for double range");
    }
    CMatrix scaled = std::ldexp(1.0, -s) * M;
    CMatrix F = expm_pade(scaled, 13);
    for (int i = 0; i < s; ++i) {
        F = F * F;
        if (!F.is_finite()) throw NumericalError("expm: overflow during squaring");
    }
    return F;
}

CMatrix gramian_integral(const CMatrix& A, const CMatrix& Q, double x) {
    if (!A.is_square() || !Q.is_square() || A.rows() != Q.rows()) {
        throw std::invalid_argument("gramian_integral: A and Q must be square of equal order");
    }
    if (x < 0.0) throw std::invalid_argument("gramian_integral: x must be nonnegative");
    const std::size_t n = A.rows();
    if (n == 0) return CMatrix(0, 0);

    CMatrix H(2 * n, 2 * n);
    H.set_block(0, 0, A);
    H.set_block(0, n, Q.hermitian_part());
    H.set_block(n, n, -A.adjoint());
    const CMatrix F = expm(x * H);
    const CMatrix F11 = F.block(0, 0, n, n);
    const CMatrix F12 = F.block(0, n, n, n);
    return (F12 * F11.adjoint()).hermitian_part();
}

// ---------------------------------------------------------------------------
// Rank-revealing QR
// ---------------------------------------------------------------------------

std::size_t PivotedQR::rank(double rel_tol) const {
    const std::size_t k = std::min(R.rows(), R.cols());
    if (k == 0) return 0;
    const double head = std::abs(R(0, 0));
    if (head == 0.0) return 0;
    std::size_t r = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (std::abs(R(i, i)) > rel_tol * head) ++r;
    }
    return r;
}

PivotedQR qr_column_pivoted(const CMatrix& M) {
    const std::size_t n = M.rows();
    const std::size_t m = M.cols();
    PivotedQR out;
    out.Q = CMatrix::identity(n);
    out.R = M;
    out.perm.resize(m);
    std::iota(out.perm.begin(), out.perm.end(), 0);

    CMatrix& R = out.R;
    const std::size_t steps = std::min(n, m);
    for (std::size_t k = 0; k < steps; ++k) {
        // Greedy pivot: recompute trailing column norms (cheap at this scale).
        std::size_t piv = k;
        double best = -1.0;
        for (std::size_t c = k; c < m; ++c) {
            double s = 0.0;
            for (std::size_t r = k; r < n; ++r) s += std::norm(R(r, c));
            if (s > best) {
                best = s;
                piv = c;
            }
        }
        if (piv != k) {
            for (std::size_t r = 0; r < n; ++r) std::swap(R(r, k), R(r, piv));
            std::swap(out.perm[k], out.perm[piv]);
        }
        if (best <= 0.0) break;

        std::vector<Complex> x(n - k);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = R(k + i, k);
        const Householder hh = make_householder(x);
        apply_householder_left(R, hh, k);
        apply_householder_right(out.Q, hh, k);
        for (std::size_t i = k + 1; i < n; ++i) R(i, k) = 0.0;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Deterministic randomness
// ---------------------------------------------------------------------------

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

CMatrix random_gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    CMatrix m(rows, cols);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double re = dist(rng);
            const double im = dist(rng);
            m(r, c) = Complex{re * inv_sqrt2, im * inv_sqrt2};
        }
    }
    return m;
}

CMatrix random_unitary(std::size_t n, std::uint64_t seed) {
    if (n == 0) return CMatrix(0, 0);
    const CMatrix G = random_gaussian(n, n, seed);
    // Modified Gram-Schmidt with one re-orthogonalization pass.
    CMatrix Q = G;
    for (std::size_t c = 0; c < n; ++c) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < c; ++j) {
                Complex dot{0.0, 0.0};
                for (std::size_t r = 0; r < n; ++r) dot += std::conj(Q(r, j)) * Q(r, c);
                for (std::size_t r = 0; r < n; ++r) Q(r, c) -= dot * Q(r, j);
            }
        }
        double nrm = 0.0;
        for (std::size_t r = 0; r < n; ++r) nrm += std::norm(Q(r, c));
        nrm = std::sqrt(nrm);
        if (nrm < 1e-14) {
            // Degenerate draw; replace with a unit vector and continue.
            for (std::size_t r = 0; r < n; ++r) Q(r, c) = (r == c) ? 1.0 : 0.0;
            --c;
            continue;
        }
        for (std::size_t r = 0; r < n; ++r) Q(r, c) /= nrm;
    }
    return Q;
}

}  // namespace sdirac
