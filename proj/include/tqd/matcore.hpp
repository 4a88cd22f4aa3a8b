#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace tqd {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
    /// Row-major nested literal; every row must have the same length as the list.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const double> values);

    std::size_t dim() const noexcept { return dim_; }
    std::span<const Complex> entries() const noexcept { return entries_; }

    Complex& operator()(std::size_t row, std::size_t col) noexcept { return entries_[row * dim_ + col]; }
    const Complex& operator()(std::size_t row, std::size_t col) const noexcept
    {
        return entries_[row * dim_ + col];
    }

    ComplexMatrix adjoint() const;
    Complex trace() const noexcept;
    /// max |A[i][j] - conj(A[j][i])|
    double hermiticity_error() const noexcept;
    bool is_hermitian(double tol = 1e-12) const noexcept { return hermiticity_error() <= tol; }
    double max_abs() const noexcept;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex scale) noexcept;

    friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
    friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
    friend ComplexMatrix operator*(ComplexMatrix lhs, Complex scale) { return lhs *= scale; }
    friend ComplexMatrix operator*(Complex scale, ComplexMatrix rhs) { return rhs *= scale; }
    friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<Complex> entries_;
};

/// Largest entrywise modulus of a - b.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
} // namespace pauli

/// Eigenvalues ascending; eigenvectors are the columns of `vectors`.
struct EigenDecomposition {
    std::vector<double> values;
    ComplexMatrix vectors;
};

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Each eigenvector is normalised so that its largest-magnitude component is
/// real and positive (first index wins among equal magnitudes), which makes
/// the output a deterministic function of the input.
///
/// Throws NotHermitian when the input deviates from Hermitian by more than
/// `hermitian_tol`, NoConvergence if 100 sweeps do not suffice.
EigenDecomposition eigh(const ComplexMatrix& h, double hermitian_tol = 1e-12);

/// Eigenvalues only (same algorithm, eigenvectors not accumulated).
std::vector<double> eigvalsh(const ComplexMatrix& h, double hermitian_tol = 1e-12);

/// Eigenvalues (ascending) of the row-major Hermitian matrix held in
/// `entries`, which is overwritten. No Hermiticity check and no allocation.
void eigvalsh_inplace(std::span<Complex> entries, std::size_t dim, std::span<double> values);

/// V diag(f(lambda)) V^dagger for Hermitian h.
ComplexMatrix matfunc_hermitian(const ComplexMatrix& h, const std::function<double(double)>& f);

/// V diag(values) V^dagger.
ComplexMatrix reassemble(const ComplexMatrix& vectors, std::span<const double> values);

} // namespace tqd
