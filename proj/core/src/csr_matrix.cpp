#include "spectra/csr_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spectra/error.hpp"
#include "spectra/linear_operator.hpp"

namespace spectra {

CsrMatrix::CsrMatrix(std::size_t n, std::vector<std::size_t> row_ptr,
                     std::vector<std::size_t> col_idx, std::vector<double> values)
    : n_(n), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), values_(std::move(values)) {
    if (row_ptr_.size() != n_ + 1 || row_ptr_.front() != 0) {
        throw ContractViolation("CsrMatrix: row_ptr must have n+1 entries starting at 0");
    }
    if (row_ptr_.back() != col_idx_.size() || col_idx_.size() != values_.size()) {
        throw ContractViolation("CsrMatrix: row_ptr[n] must equal the number of stored entries");
    }
    for (std::size_t i = 0; i < n_; ++i) {
        if (row_ptr_[i] > row_ptr_[i + 1]) {
            throw ContractViolation("CsrMatrix: row_ptr must be non-decreasing");
        }
        for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            if (col_idx_[p] >= n_) {
                throw ContractViolation("CsrMatrix: column index out of range in row " + std::to_string(i));
            }
            if (p > row_ptr_[i] && col_idx_[p] <= col_idx_[p - 1]) {
                throw ContractViolation("CsrMatrix: columns not strictly increasing in row " + std::to_string(i));
            }
        }
    }
}

CsrMatrix CsrMatrix::from_triplets(std::size_t n, std::span<const Triplet> entries) {
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (const auto& t : entries) {
        if (t.row >= n || t.col >= n) {
            throw ContractViolation("from_triplets: index out of range");
        }
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ea = entries[a];
        const auto& eb = entries[b];
        return ea.row != eb.row ? ea.row < eb.row : ea.col < eb.col;
    });

    std::vector<std::size_t> row_ptr(n + 1, 0);
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    cols.reserve(entries.size());
    vals.reserve(entries.size());
    std::size_t prev_row = n;
    std::size_t prev_col = n;
    for (std::size_t idx : order) {
        const auto& t = entries[idx];
        if (t.row == prev_row && t.col == prev_col) {
            vals.back() += t.value;
            continue;
        }
        cols.push_back(t.col);
        vals.push_back(t.value);
        ++row_ptr[t.row + 1];
        prev_row = t.row;
        prev_col = t.col;
    }
    std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
    return CsrMatrix(n, std::move(row_ptr), std::move(cols), std::move(vals));
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
    Vector ones(n, 1.0);
    return diagonal(ones);
}

CsrMatrix CsrMatrix::diagonal(std::span<const double> diag) {
    const std::size_t n = diag.size();
    std::vector<std::size_t> row_ptr(n + 1);
    std::vector<std::size_t> cols(n);
    std::iota(row_ptr.begin(), row_ptr.end(), std::size_t{0});
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    return CsrMatrix(n, std::move(row_ptr), std::move(cols), Vector(diag.begin(), diag.end()));
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) {
        throw ContractViolation("CsrMatrix::at: index out of range");
    }
    auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
    auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) {
        return 0.0;
    }
    return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

Vector CsrMatrix::diagonal_values() const {
    Vector d(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        d[i] = at(i, i);
    }
    return d;
}

double CsrMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double CsrMatrix::frobenius_norm() const noexcept {
    double s = 0.0;
    for (double v : values_) {
        s += v * v;
    }
    return std::sqrt(s);
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != n_ || y.size() != n_) {
        throw ContractViolation("matvec: dimension mismatch (matrix " + std::to_string(n_) + ", x " +
                                std::to_string(x.size()) + ", y " + std::to_string(y.size()) + ")");
    }
    const std::size_t* rp = row_ptr_.data();
    const std::size_t* ci = col_idx_.data();
    const double* va = values_.data();
    for (std::size_t i = 0; i < n_; ++i) {
        double sum = 0.0;
        for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) {
            sum += va[p] * x[ci[p]];
        }
        y[i] = sum;
    }
}

bool CsrMatrix::is_symmetric(double rel_tol) const {
    const double tol = rel_tol * max_abs();
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            const std::size_t j = col_idx_[p];
            if (j == i) {
                continue;
            }
            auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[j]);
            auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[j + 1]);
            auto it = std::lower_bound(first, last, i);
            if (it == last || *it != i) {
                return false;
            }
            const double mirror = values_[static_cast<std::size_t>(it - col_idx_.begin())];
            if (std::abs(mirror - values_[p]) > tol) {
                return false;
            }
        }
    }
    return true;
}

std::vector<double> CsrMatrix::to_dense() const {
    std::vector<double> dense(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            dense[i * n_ + col_idx_[p]] = values_[p];
        }
    }
    return dense;
}

Vector matvec(const CsrMatrix& a, std::span<const double> x) {
    Vector y(a.size());
    a.multiply(x, y);
    return y;
}

void LinearOperator::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != n_ || y.size() != n_) {
        throw ContractViolation("LinearOperator::apply: dimension mismatch");
    }
    fn_(x, y);
}

Vector LinearOperator::apply(std::span<const double> x) const {
    Vector y(n_);
    apply(x, y);
    return y;
}

void ShiftedOperator::apply(std::span<const double> x, std::span<double> y) const {
    base_->multiply(x, y);
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) {
        y[i] -= shift_ * x[i];
    }
}

LinearOperator ShiftedOperator::as_operator() const {
    ShiftedOperator copy = *this;
    return LinearOperator(size(), [copy](std::span<const double> x, std::span<double> y) { copy.apply(x, y); });
}

LinearOperator make_operator(const CsrMatrix& a) {
    const CsrMatrix* ptr = &a;
    return LinearOperator(a.size(), [ptr](std::span<const double> x, std::span<double> y) { ptr->multiply(x, y); });
}

}  // namespace spectra
