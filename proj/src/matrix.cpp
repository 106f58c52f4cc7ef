#include "sdirac/matrix.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sdirac {

namespace {

void check_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(op) + ": shape mismatch (" +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                    " vs " + std::to_string(b.rows()) + "x" +
                                    std::to_string(b.cols()) + ")");
    }
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw std::invalid_argument("CMatrix: entry count " + std::to_string(data_.size()) +
                                    " does not match shape " + std::to_string(rows_) + "x" +
                                    std::to_string(cols_));
    }
    if (!is_finite()) {
        throw std::invalid_argument("CMatrix: non-finite entry");
    }
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw std::invalid_argument("CMatrix: ragged initializer");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
    if (!is_finite()) {
        throw std::invalid_argument("CMatrix: non-finite entry");
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(const std::vector<Complex>& d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
    check_same_shape(*this, other, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
    check_same_shape(*this, other, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(Complex scalar) {
    for (auto& e : data_) e *= scalar;
    return *this;
}

CMatrix CMatrix::operator-() const {
    CMatrix m = *this;
    for (auto& e : m.data_) e = -e;
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
}

CMatrix CMatrix::transpose() const {
    CMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
    return m;
}

CMatrix CMatrix::conjugate() const {
    CMatrix m = *this;
    for (auto& e : m.data_) e = std::conj(e);
    return m;
}

Complex CMatrix::trace() const {
    if (!is_square()) throw std::invalid_argument("trace: matrix not square");
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double CMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& e : data_) s += std::norm(e);
    return std::sqrt(s);
}

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& e : data_) m = std::max(m, std::abs(e));
    return m;
}

double CMatrix::one_norm() const {
    double best = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) s += std::abs((*this)(r, c));
        best = std::max(best, s);
    }
    return best;
}

CMatrix CMatrix::hermitian_part() const {
    if (!is_square()) throw std::invalid_argument("hermitian_part: matrix not square");
    CMatrix m(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            m(r, c) = 0.5 * ((*this)(r, c) + std::conj((*this)(c, r)));
    return m;
}

double CMatrix::hermiticity_defect() const {
    if (!is_square()) throw std::invalid_argument("hermiticity_defect: matrix not square");
    double s = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            s += std::norm((*this)(r, c) - std::conj((*this)(c, r)));
    return std::sqrt(s);
}

bool CMatrix::is_finite() const {
    for (const auto& e : data_) {
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
    }
    return true;
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const {
    if (r0 + nrows > rows_ || c0 + ncols > cols_) {
        throw std::invalid_argument("block: out of range");
    }
    CMatrix m(nrows, ncols);
    for (std::size_t r = 0; r < nrows; ++r)
        for (std::size_t c = 0; c < ncols; ++c) m(r, c) = (*this)(r0 + r, c0 + c);
    return m;
}

void CMatrix::set_block(std::size_t r0, std::size_t c0, const CMatrix& sub) {
    if (r0 + sub.rows() > rows_ || c0 + sub.cols() > cols_) {
        throw std::invalid_argument("set_block: out of range");
    }
    for (std::size_t r = 0; r < sub.rows(); ++r)
        for (std::size_t c = 0; c < sub.cols(); ++c) (*this)(r0 + r, c0 + c) = sub(r, c);
}

CMatrix CMatrix::row(std::size_t r) const { return block(r, 0, 1, cols_); }

CMatrix CMatrix::col(std::size_t c) const { return block(0, c, rows_, 1); }

std::string CMatrix::to_string(int precision) const {
    std::ostringstream os;
    os.precision(precision);
    for (std::size_t r = 0; r < rows_; ++r) {
        os << (r == 0 ? "[" : " ");
        for (std::size_t c = 0; c < cols_; ++c) {
            const Complex& e = (*this)(r, c);
            os << e.real() << (e.imag() < 0 ? "" : "+") << e.imag() << "i";
            if (c + 1 < cols_) os << ", ";
        }
        os << (r + 1 == rows_ ? "]" : ";\n");
    }
    return os.str();
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
    CMatrix m = a;
    m += b;
    return m;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
    CMatrix m = a;
    m -= b;
    return m;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("operator*: inner dimension mismatch (" +
                                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                    ")");
    }
    CMatrix m(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex ark = a(r, k);
            if (ark == Complex{0.0, 0.0}) continue;
            for (std::size_t c = 0; c < b.cols(); ++c) m(r, c) += ark * b(k, c);
        }
    }
    return m;
}

CMatrix operator*(Complex scalar, const CMatrix& m) {
    CMatrix r = m;
    r *= scalar;
    return r;
}

CMatrix operator*(const CMatrix& m, Complex scalar) { return scalar * m; }

CMatrix operator*(double scalar, const CMatrix& m) { return Complex{scalar, 0.0} * m; }

CMatrix operator*(const CMatrix& m, double scalar) { return Complex{scalar, 0.0} * m; }

CMatrix hcat(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hcat: row count mismatch");
    CMatrix m(a.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(0, a.cols(), b);
    return m;
}

CMatrix vcat(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("vcat: column count mismatch");
    CMatrix m(a.rows() + b.rows(), a.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), 0, b);
    return m;
}

CMatrix signature_matrix(std::size_t m1, std::size_t m2) {
    CMatrix j(m1 + m2, m1 + m2);
    for (std::size_t i = 0; i < m1; ++i) j(i, i) = 1.0;
    for (std::size_t i = m1; i < m1 + m2; ++i) j(i, i) = -1.0;
    return j;
}

}  // namespace sdirac
