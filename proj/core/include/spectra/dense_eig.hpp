#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "spectra/csr_matrix.hpp"
#include "spectra/dense.hpp"

namespace spectra {

/// Symmetric tridiagonal matrix: diag alpha_1..alpha_k, offdiag beta_2..beta_k.
struct TridiagonalSym {
    Vector diag;
    Vector offdiag;

    std::size_t size() const noexcept { return diag.size(); }
    bool consistent() const noexcept {
        return offdiag.size() + 1 == diag.size() || (diag.empty() && offdiag.empty());
    }
};

/// Ascending eigenvalues with orthonormal eigenvectors in the columns of `vectors`.
struct EigenPairsSym {
    Vector values;
    DenseMatrix vectors;
};

/// Eigenpairs of a real (non-symmetric) matrix. Columns of `vectors` have unit
/// 2-norm; `inverse_first_column` is the first column of vectors^{-1}.
struct EigenPairsGeneral {
    std::vector<std::complex<double>> values;
    ComplexMatrix vectors;
    std::vector<std::complex<double>> inverse_first_column;
};

/// Implicit QL with Wilkinson-type shifts; throws NumericalError carrying the
/// index of the eigenvalue that failed to converge within 40*k sweeps.
EigenPairsSym tridiag_eig(const TridiagonalSym& t);

/// Eigenvalues only of a symmetric tridiagonal matrix (same QL iteration).
Vector tridiag_eigenvalues(const TridiagonalSym& t);

/// Francis double-shift QR on an upper Hessenberg matrix, eigenvectors from the
/// quasi-triangular Schur form. Throws QuadratureBreakdown when the
/// eigenvector matrix is numerically singular (defective H).
EigenPairsGeneral hessenberg_eig(const DenseMatrix& h);

struct SturmCount {
    std::size_t below = 0;
    /// A pivot was exactly zero: tau coincides with an eigenvalue.
    bool pivot_perturbed = false;
};

/// Number of eigenvalues strictly below tau, by counting negative pivots of
/// the LDL^T recurrence of t - tau I.
SturmCount sturm_count_below(const TridiagonalSym& t, double tau);

/// Householder reduction of a dense symmetric row-major n x n matrix.
TridiagonalSym householder_tridiagonalize(std::vector<double> a, std::size_t n);

inline constexpr std::size_t kDefaultDenseOracleCap = 4096;

/// Exact negative inertia of A - tau I via densification, tridiagonal
/// reduction and a Sturm count. Refuses (OracleRefusal) when n > cap.
std::size_t dense_inertia_oracle(const CsrMatrix& a, double tau, std::size_t cap = kDefaultDenseOracleCap);

}  // namespace spectra
