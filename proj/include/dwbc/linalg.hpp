#ifndef DWBC_LINALG_HPP
#define DWBC_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

namespace dwbc
{

// Row-major dense complex matrix; only what the transfer-matrix route, the
// Yang-Baxter residuals and the Izergin determinant need.
class DenseMatrix
{
public:
    using value_type = std::complex<double>;

    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols)
    {}

    static DenseMatrix identity(std::size_t n)
    {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    value_type& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const value_type& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b)
    {
        DenseMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const value_type aik = a(i, k);
                if (aik == value_type{})
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    out(i, j) += aik * b(k, j);
            }
        return out;
    }

    friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b)
    {
        for (std::size_t i = 0; i < a.data_.size(); ++i)
            a.data_[i] += b.data_[i];
        return a;
    }

    friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b)
    {
        for (std::size_t i = 0; i < a.data_.size(); ++i)
            a.data_[i] -= b.data_[i];
        return a;
    }

    double max_abs() const
    {
        double m = 0.0;
        for (const auto& x : data_)
            m = std::max(m, std::abs(x));
        return m;
    }

    double norm1() const
    {
        double best = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < rows_; ++i)
                s += std::abs((*this)(i, j));
            best = std::max(best, s);
        }
        return best;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<value_type> data_;
};

// LU factorisation with partial pivoting, PA = LU stored in place.
class PartialPivotLU
{
public:
    explicit PartialPivotLU(DenseMatrix a)
        : lu_(std::move(a)), perm_(lu_.rows())
    {
        const std::size_t n = lu_.rows();
        for (std::size_t i = 0; i < n; ++i)
            perm_[i] = i;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t piv = k;
            double best = std::abs(lu_(k, k));
            for (std::size_t i = k + 1; i < n; ++i)
                if (std::abs(lu_(i, k)) > best) {
                    best = std::abs(lu_(i, k));
                    piv = i;
                }
            if (piv != k) {
                for (std::size_t j = 0; j < n; ++j)
                    std::swap(lu_(k, j), lu_(piv, j));
                std::swap(perm_[k], perm_[piv]);
                sign_ = -sign_;
            }
            if (best == 0.0) {
                singular_ = true;
                continue;
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                lu_(i, k) /= lu_(k, k);
                const auto f = lu_(i, k);
                for (std::size_t j = k + 1; j < n; ++j)
                    lu_(i, j) -= f * lu_(k, j);
            }
        }
    }

    bool singular() const noexcept { return singular_; }

    std::complex<double> determinant() const
    {
        std::complex<double> d = static_cast<double>(sign_);
        for (std::size_t i = 0; i < lu_.rows(); ++i)
            d *= lu_(i, i);
        return d;
    }

    // Solves A x = b.
    std::vector<std::complex<double>> solve(const std::vector<std::complex<double>>& b) const
    {
        const std::size_t n = lu_.rows();
        std::vector<std::complex<double>> x(n);
        for (std::size_t i = 0; i < n; ++i)
            x[i] = b[perm_[i]];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j)
                x[i] -= lu_(i, j) * x[j];
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t j = i + 1; j < n; ++j)
                x[i] -= lu_(i, j) * x[j];
            x[i] /= lu_(i, i);
        }
        return x;
    }

    DenseMatrix inverse() const
    {
        const std::size_t n = lu_.rows();
        DenseMatrix inv(n, n);
        std::vector<std::complex<double>> e(n);
        for (std::size_t j = 0; j < n; ++j) {
            std::fill(e.begin(), e.end(), std::complex<double>{});
            e[j] = 1.0;
            const auto col = solve(e);
            for (std::size_t i = 0; i < n; ++i)
                inv(i, j) = col[i];
        }
        return inv;
    }

private:
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
    int sign_ = 1;
    bool singular_ = false;
};

// |a - b| / max(|a|, |b|), zero when both vanish.
inline double relative_difference(std::complex<double> a, std::complex<double> b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// 1-norm condition number; infinity for singular input.
inline double condition_number_1(const DenseMatrix& a)
{
    PartialPivotLU lu(a);
    if (lu.singular())
        return std::numeric_limits<double>::infinity();
    return a.norm1() * lu.inverse().norm1();
}

} // namespace dwbc

#endif
