#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace sdirac {

using Complex = std::complex<double>;

/// Imaginary unit.
inline constexpr Complex iu{0.0, 1.0};

/// Dense complex matrix, row-major storage. All pipeline quantities
/// (realization triples, quadruples, recursion states) are values of this
/// type. Dimensions of zero are legal and propagate through arithmetic.
class CMatrix {
public:
    CMatrix() = default;

    /// Zero matrix of the given shape.
    CMatrix(std::size_t rows, std::size_t cols);

    /// From row-major entries; throws if the entry count mismatches the
    /// shape or any entry is non-finite.
    CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    /// Row-by-row brace construction; all rows must have equal length.
    CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(const std::vector<Complex>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    bool is_square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<Complex>& data() const { return data_; }

    CMatrix& operator+=(const CMatrix& other);
    CMatrix& operator-=(const CMatrix& other);
    CMatrix& operator*=(Complex scalar);

    CMatrix operator-() const;

    /// Conjugate transpose.
    CMatrix adjoint() const;
    CMatrix transpose() const;
    CMatrix conjugate() const;

    Complex trace() const;
    double frobenius_norm() const;
    /// Largest entry magnitude.
    double max_abs() const;
    /// Maximum absolute column sum (the induced 1-norm).
    double one_norm() const;

    /// (M + M*)/2; requires a square matrix.
    CMatrix hermitian_part() const;
    /// ||M - M*||_F, a Hermiticity defect measure.
    double hermiticity_defect() const;

    bool is_finite() const;

    CMatrix block(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const;
    void set_block(std::size_t r0, std::size_t c0, const CMatrix& sub);
    CMatrix row(std::size_t r) const;
    CMatrix col(std::size_t c) const;

    std::string to_string(int precision = 5) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

CMatrix operator+(const CMatrix& a, const CMatrix& b);
CMatrix operator-(const CMatrix& a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(Complex scalar, const CMatrix& m);
CMatrix operator*(const CMatrix& m, Complex scalar);
CMatrix operator*(double scalar, const CMatrix& m);
CMatrix operator*(const CMatrix& m, double scalar);

/// [a b] side by side; row counts must match.
CMatrix hcat(const CMatrix& a, const CMatrix& b);
/// [a; b] stacked; column counts must match.
CMatrix vcat(const CMatrix& a, const CMatrix& b);

/// diag(I_{m1}, -I_{m2}), the signature matrix of the system.
CMatrix signature_matrix(std::size_t m1, std::size_t m2);

}  // namespace sdirac
