#include "tqd/matcore.hpp"

#include "tqd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tqd {

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries))
{
    if (entries_.size() != dim_ * dim_) {
        throw std::invalid_argument("ComplexMatrix: entry count does not match dim^2");
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size())
{
    entries_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
        if (row.size() != dim_) {
            throw std::invalid_argument("ComplexMatrix: literal is not square");
        }
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim)
{
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values)
{
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(i, i) = values[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const
{
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            out(j, i) = std::conj((*this)(i, j));
        }
    }
    return out;
}

Complex ComplexMatrix::trace() const noexcept
{
    Complex sum = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        sum += (*this)(i, i);
    }
    return sum;
}

double ComplexMatrix::hermiticity_error() const noexcept
{
    double err = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i; j < dim_; ++j) {
            err = std::max(err, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        }
    }
    return err;
}

double ComplexMatrix::max_abs() const noexcept
{
    double m = 0.0;
    for (const auto& z : entries_) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs)
{
    if (rhs.dim_ != dim_) {
        throw std::invalid_argument("ComplexMatrix: dimension mismatch in +");
    }
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        entries_[k] += rhs.entries_[k];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs)
{
    if (rhs.dim_ != dim_) {
        throw std::invalid_argument("ComplexMatrix: dimension mismatch in -");
    }
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        entries_[k] -= rhs.entries_[k];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) noexcept
{
    for (auto& z : entries_) {
        z *= scale;
    }
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs)
{
    if (lhs.dim_ != rhs.dim_) {
        throw std::invalid_argument("ComplexMatrix: dimension mismatch in *");
    }
    const std::size_t n = lhs.dim_;
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex a = lhs(i, k);
            if (a == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += a * rhs(k, j);
            }
        }
    }
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    }
    double m = 0.0;
    auto ea = a.entries();
    auto eb = b.entries();
    for (std::size_t k = 0; k < ea.size(); ++k) {
        m = std::max(m, std::abs(ea[k] - eb[k]));
    }
    return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b)
{
    const std::size_t na = a.dim();
    const std::size_t nb = b.dim();
    ComplexMatrix out(na * nb);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
            const Complex aij = a(i, j);
            for (std::size_t k = 0; k < nb; ++k) {
                for (std::size_t l = 0; l < nb; ++l) {
                    out(i * nb + k, j * nb + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

namespace pauli {

ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix y() { return {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

} // namespace pauli

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTol = 1e-13;

template <typename At>
double off_diagonal_norm(At&& at, std::size_t n)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) {
                sum += std::norm(at(i, j));
            }
        }
    }
    return std::sqrt(sum);
}

// Cyclic Jacobi on the row-major n x n buffer `a`; accumulates the rotations
// into the row-major buffer `v` when it is non-empty.
void jacobi_diagonalize(std::span<Complex> a, std::size_t n, std::span<Complex> v)
{
    auto at = [&](std::size_t i, std::size_t j) -> Complex& { return a[i * n + j]; };

    double frob = 0.0;
    for (const auto& z : a) {
        frob += std::norm(z);
    }
    // Round-off reintroduces off-diagonal mass of order eps*||A||, so the
    // stopping threshold scales with the matrix norm once that exceeds 1.
    const double tol = kOffDiagonalTol * std::max(1.0, std::sqrt(frob));

    for (std::size_t i = 0; i < n; ++i) {
        at(i, i) = at(i, i).real();
    }

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(at, n) < tol) {
            return;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = at(p, q);
                const double mag = std::sqrt(std::norm(apq));
                if (mag == 0.0) {
                    continue;
                }
                // Below the diagonal round-off the rotation cannot change anything.
                const double app = std::abs(at(p, p).real());
                const double aqq = std::abs(at(q, q).real());
                if (sweep > 3 && app + 100.0 * mag == app && aqq + 100.0 * mag == aqq) {
                    at(p, q) = 0.0;
                    at(q, p) = 0.0;
                    continue;
                }
                const Complex phase = apq / mag;
                const double tau = (at(q, q).real() - at(p, p).real()) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // U = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
                const Complex upp = c;
                const Complex upq = s;
                const Complex uqp = -s * std::conj(phase);
                const Complex uqq = c * std::conj(phase);

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = at(k, p);
                    const Complex akq = at(k, q);
                    at(k, p) = akp * upp + akq * uqp;
                    at(k, q) = akp * upq + akq * uqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = at(p, k);
                    const Complex aqk = at(q, k);
                    at(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
                    at(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
                }
                at(p, q) = 0.0;
                at(q, p) = 0.0;
                at(p, p) = at(p, p).real();
                at(q, q) = at(q, q).real();

                if (!v.empty()) {
                    for (std::size_t k = 0; k < n; ++k) {
                        const Complex vkp = v[k * n + p];
                        const Complex vkq = v[k * n + q];
                        v[k * n + p] = vkp * upp + vkq * uqp;
                        v[k * n + q] = vkp * upq + vkq * uqq;
                    }
                }
            }
        }
    }
    if (off_diagonal_norm(at, n) >= tol) {
        std::ostringstream msg;
        msg << "eigh: Jacobi iteration did not converge in " << kMaxSweeps << " sweeps";
        throw NoConvergence(msg.str());
    }
}

void require_hermitian(const ComplexMatrix& h, double tol)
{
    const double err = h.hermiticity_error();
    if (err > tol) {
        std::ostringstream msg;
        msg << "matrix is not Hermitian (max |A - A^dagger| = " << err << ")";
        throw NotHermitian(msg.str());
    }
}

} // namespace

EigenDecomposition eigh(const ComplexMatrix& h, double hermitian_tol)
{
    require_hermitian(h, hermitian_tol);
    const std::size_t n = h.dim();
    std::vector<Complex> a(h.entries().begin(), h.entries().end());
    std::vector<Complex> v(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i * n + i] = 1.0;
    }
    jacobi_diagonalize(a, n, v);
    auto diag = [&](std::size_t i) { return a[i * n + i].real(); };

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return diag(i) < diag(j); });

    EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t col = 0; col < n; ++col) {
        const std::size_t src = order[col];
        out.values[col] = diag(src);

        double biggest = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            biggest = std::max(biggest, std::abs(v[k * n + src]));
        }
        std::size_t pivot = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (std::abs(v[k * n + src]) >= biggest - 1e-12) {
                pivot = k;
                break;
            }
        }
        const Complex fix = std::conj(v[pivot * n + src]) / std::abs(v[pivot * n + src]);
        for (std::size_t k = 0; k < n; ++k) {
            out.vectors(k, col) = v[k * n + src] * fix;
        }
        out.vectors(pivot, col) = std::abs(v[pivot * n + src]);
    }
    return out;
}

std::vector<double> eigvalsh(const ComplexMatrix& h, double hermitian_tol)
{
    require_hermitian(h, hermitian_tol);
    std::vector<Complex> a(h.entries().begin(), h.entries().end());
    std::vector<double> values(h.dim());
    eigvalsh_inplace(a, h.dim(), values);
    return values;
}

void eigvalsh_inplace(std::span<Complex> entries, std::size_t dim, std::span<double> values)
{
    if (entries.size() != dim * dim || values.size() != dim) {
        throw std::invalid_argument("eigvalsh_inplace: buffer sizes do not match dim");
    }
    jacobi_diagonalize(entries, dim, {});
    for (std::size_t i = 0; i < dim; ++i) {
        values[i] = entries[i * dim + i].real();
    }
    std::sort(values.begin(), values.end());
}

ComplexMatrix reassemble(const ComplexMatrix& vectors, std::span<const double> values)
{
    const std::size_t n = vectors.dim();
    if (values.size() != n) {
        throw std::invalid_argument("reassemble: eigenvalue count does not match dimension");
    }
    ComplexMatrix out(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (values[k] == 0.0) {
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const Complex vik = vectors(i, k) * values[k];
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += vik * std::conj(vectors(j, k));
            }
        }
    }
    return out;
}

ComplexMatrix matfunc_hermitian(const ComplexMatrix& h, const std::function<double(double)>& f)
{
    const auto dec = eigh(h);
    std::vector<double> mapped(dec.values.size());
    std::transform(dec.values.begin(), dec.values.end(), mapped.begin(), f);
    return reassemble(dec.vectors, mapped);
}

} // namespace tqd
