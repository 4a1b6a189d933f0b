#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "spectra/csr_matrix.hpp"

namespace spectra {

/// HPD preconditioner in factored form T = M^* M. Both maps are reentrant.
struct FactoredPreconditioner {
    using Map = std::function<void(std::span<const double>, std::span<double>)>;

    std::size_t dimension = 0;
    Map apply_m;          ///< y = M x
    Map apply_m_adjoint;  ///< y = M^* x
    std::string name;
    std::size_t boosted_pivots = 0;

    Vector m(std::span<const double> x) const;
    Vector m_adjoint(std::span<const double> x) const;
};

/// HPD preconditioner available only through its action y = T x.
struct UnfactoredPreconditioner {
    using Map = std::function<void(std::span<const double>, std::span<double>)>;

    std::size_t dimension = 0;
    Map apply_t;
    std::string name;

    Vector t(std::span<const double> x) const;
};

/// Unit lower-triangular L (strict part, compressed by columns), 1x1 pivots D
/// and a symmetric permutation with P (A - tau I) P^T ~ L D L^T.
struct IldlFactors {
    std::size_t n = 0;
    std::vector<std::size_t> col_ptr;  ///< n + 1 offsets into row_idx / values
    std::vector<std::size_t> row_idx;  ///< strictly below the diagonal, ascending per column
    Vector values;
    Vector d;
    std::vector<std::size_t> perm;  ///< perm[new] = old
    double drop_tol = 0.0;
    double boost_threshold = 0.0;
    std::size_t boosted_pivots = 0;

    std::size_t nnz_l() const noexcept { return values.size(); }

    /// x <- L^{-1} x
    void solve_lower(std::span<double> x) const;
    /// x <- L^{-T} x
    void solve_upper(std::span<double> x) const;
};

/// Reverse Cuthill-McKee ordering of the symmetric sparsity pattern (perm[new] = old).
std::vector<std::size_t> reverse_cuthill_mckee(const CsrMatrix& a);

/// Crout-ordered incomplete LDL^T of P (A - tau I) P^T with an RCM permutation.
/// Entries of column j of L with |l_ij| <= drop_tol * ||L(:, j)||_2 are dropped;
/// drop_tol = 0 gives the complete factorization. Pivots smaller than
/// 1e-8 * max|diag(A - tau I)| are replaced by sign(d) times that threshold.
IldlFactors ildl_factorize(const CsrMatrix& a, double tau, double drop_tol);

/// M = |D|^{-1/2} L^{-1} P, so T = M^* M = P^T L^{-T} |D|^{-1} L^{-1} P.
FactoredPreconditioner make_abs_ildl(IldlFactors factors);

/// M = diag(|a_ii - tau|^{-1/2}), with the same pivot boosting rule.
FactoredPreconditioner make_abs_diagonal(const CsrMatrix& a, double tau);

/// M = I.
FactoredPreconditioner make_identity_preconditioner(std::size_t n);

/// T = M^* M as a single map.
UnfactoredPreconditioner as_unfactored(const FactoredPreconditioner& p);

}  // namespace spectra
