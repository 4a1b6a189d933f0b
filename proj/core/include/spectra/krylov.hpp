#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "spectra/csr_matrix.hpp"
#include "spectra/dense.hpp"
#include "spectra/dense_eig.hpp"
#include "spectra/linear_operator.hpp"

namespace spectra {

/// Column-major n x cols basis with contiguous columns.
class KrylovBasis {
public:
    KrylovBasis() = default;
    explicit KrylovBasis(std::size_t n) : n_(n) {}

    std::size_t rows() const noexcept { return n_; }
    std::size_t cols() const noexcept { return n_ == 0 ? 0 : data_.size() / n_; }

    std::span<const double> col(std::size_t j) const { return {data_.data() + j * n_, n_}; }
    std::span<double> col(std::size_t j) { return {data_.data() + j * n_, n_}; }

    void reserve(std::size_t cols) { data_.reserve(cols * n_); }
    void push_back(std::span<const double> v) { data_.insert(data_.end(), v.begin(), v.end()); }

private:
    std::size_t n_ = 0;
    Vector data_;
};

/// Output of k steps of Lanczos: C Q_k = Q_{k+1} J_{k+1,k}.
struct LanczosDecomposition {
    Vector alphas;  ///< alpha_1..alpha_{k_eff}
    Vector betas;   ///< beta_2..beta_{k_eff+1}; the last one is tiny on breakdown
    KrylovBasis basis;  ///< k_eff + 1 columns, or k_eff after a breakdown
    std::size_t steps_completed = 0;
    bool breakdown = false;
    double vnorm = 0.0;  ///< ||v|| of the starting vector

    /// Leading k_eff x k_eff tridiagonal section J_k.
    TridiagonalSym section() const;
};

/// Output of k steps of Arnoldi: C Q_k = Q_{k+1} H_{k+1,k}.
struct ArnoldiDecomposition {
    DenseMatrix h;  ///< (k_eff + 1) x k_eff upper Hessenberg
    KrylovBasis basis;
    std::size_t steps_completed = 0;
    bool breakdown = false;
    double vnorm = 0.0;

    /// Leading k_eff x k_eff block H_k.
    DenseMatrix section() const;
};

/// Lanczos with a full reorthogonalization pass per step (a second pass when
/// the first removes more than half of the vector's norm). Stops early with
/// `breakdown` set when beta_{j+1} <= 1e-12 * (max|alpha| + 2 max beta).
LanczosDecomposition lanczos(const LinearOperator& c, std::span<const double> v, std::size_t k);

/// Arnoldi with modified Gram-Schmidt and the same conditional second pass.
ArnoldiDecomposition arnoldi(const LinearOperator& c, std::span<const double> v, std::size_t k);

/// Maps the k x k tridiagonal section to f(J_k) e_1.
using SectionFunction = std::function<Vector(const TridiagonalSym&)>;

/// ||v|| Q_k f(J_k) e_1, which equals p(C) v for the polynomial of degree
/// k_eff - 1 interpolating f on the Ritz values.
Vector krylov_poly_apply(const LanczosDecomposition& dec, const SectionFunction& f_on_section);

/// Convenience overload: evaluates f(J_k) e_1 through the eigendecomposition of J_k.
Vector krylov_poly_apply(const LanczosDecomposition& dec, const std::function<double(double)>& f);

}  // namespace spectra
