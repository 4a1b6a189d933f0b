#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace spectra {

using Vector = std::vector<double>;

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Square sparse matrix in compressed sparse row form. Immutable once built;
/// column indices are strictly increasing within each row.
class CsrMatrix {
public:
    CsrMatrix() = default;

    /// Takes ownership of raw CSR arrays and validates the structural invariants.
    CsrMatrix(std::size_t n, std::vector<std::size_t> row_ptr,
              std::vector<std::size_t> col_idx, std::vector<double> values);

    /// Builds from coordinate entries; duplicates are summed, explicit zeros kept.
    static CsrMatrix from_triplets(std::size_t n, std::span<const Triplet> entries);

    static CsrMatrix identity(std::size_t n);
    static CsrMatrix diagonal(std::span<const double> diag);

    std::size_t size() const noexcept { return n_; }
    std::size_t nnz() const noexcept { return values_.size(); }

    std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
    std::span<const std::size_t> col_idx() const noexcept { return col_idx_; }
    std::span<const double> values() const noexcept { return values_; }

    /// Entry (i, j), zero when not stored.
    double at(std::size_t i, std::size_t j) const;

    Vector diagonal_values() const;
    double max_abs() const noexcept;
    double frobenius_norm() const noexcept;

    /// y = A x. Throws ContractViolation on size mismatch.
    void multiply(std::span<const double> x, std::span<double> y) const;

    /// True when every stored (i,j,v) has a partner (j,i,w) with |v - w| <= rel_tol * max|a|.
    bool is_symmetric(double rel_tol = 1e-12) const;

    /// Row-major dense copy, n*n entries.
    std::vector<double> to_dense() const;

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> col_idx_;
    std::vector<double> values_;
};

/// Returns A x.
Vector matvec(const CsrMatrix& a, std::span<const double> x);

}  // namespace spectra
