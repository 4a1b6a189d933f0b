#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>

#include "spectra/csr_matrix.hpp"

namespace spectra {

/// Type-erased square linear map. The callable writes op(x) into y, which
/// never aliases x. Implementations may keep scratch space, so a single
/// instance is not shared between threads; build one per worker instead.
class LinearOperator {
public:
    using ApplyFn = std::function<void(std::span<const double>, std::span<double>)>;

    LinearOperator() = default;
    LinearOperator(std::size_t n, ApplyFn fn) : n_(n), fn_(std::move(fn)) {}

    std::size_t size() const noexcept { return n_; }

    void apply(std::span<const double> x, std::span<double> y) const;
    Vector apply(std::span<const double> x) const;

private:
    std::size_t n_ = 0;
    ApplyFn fn_;
};

/// A - tau I over a borrowed matrix; the matrix must outlive the operator.
class ShiftedOperator {
public:
    ShiftedOperator(const CsrMatrix& base, double shift) : base_(&base), shift_(shift) {}

    std::size_t size() const noexcept { return base_->size(); }
    double shift() const noexcept { return shift_; }
    const CsrMatrix& base() const noexcept { return *base_; }

    void apply(std::span<const double> x, std::span<double> y) const;

    LinearOperator as_operator() const;

private:
    const CsrMatrix* base_;
    double shift_;
};

/// Wraps a matrix (borrowed) as an operator.
LinearOperator make_operator(const CsrMatrix& a);

}  // namespace spectra
