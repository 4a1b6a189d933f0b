#pragma once

// Reference computations for tests. Everything here goes through Eigen or
// plain loops and never through the library kernels under test.

#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "spectra/csr_matrix.hpp"
#include "spectra/dense.hpp"
#include "spectra/dense_eig.hpp"
#include "spectra/linear_operator.hpp"

namespace oracle {

using Rng = std::mt19937_64;

Eigen::MatrixXd to_eigen(const spectra::CsrMatrix& a);
Eigen::MatrixXd to_eigen(const spectra::DenseMatrix& a);
Eigen::MatrixXd to_eigen(const spectra::TridiagonalSym& t);
spectra::CsrMatrix to_csr(const Eigen::MatrixXd& a);
spectra::DenseMatrix to_dense(const Eigen::MatrixXd& a);
Eigen::VectorXd to_eigen(const std::vector<double>& v);
std::vector<double> to_std(const Eigen::VectorXd& v);

/// Operator wrapping a dense copy of `a`.
spectra::LinearOperator dense_operator(const Eigen::MatrixXd& a);

Eigen::VectorXd gaussian_vector(std::size_t n, Rng& rng);
/// Entries N(0,1), then (B + B^T) / 2.
Eigen::MatrixXd random_symmetric(std::size_t n, Rng& rng);
/// Random nonsingular matrix: N(0,1) entries plus a diagonal shift of sqrt(n).
Eigen::MatrixXd random_nonsingular(std::size_t n, Rng& rng);
/// Random symmetric positive definite matrix with eigenvalues in [lo, hi].
Eigen::MatrixXd random_spd(std::size_t n, double lo, double hi, Rng& rng);
spectra::TridiagonalSym random_tridiagonal(std::size_t k, Rng& rng);
/// Upper Hessenberg with N(0,1) entries in the band.
Eigen::MatrixXd random_hessenberg(std::size_t k, Rng& rng);

std::vector<double> sym_eigenvalues(const Eigen::MatrixXd& a);
std::size_t count_below(const std::vector<double>& values, double tau);
std::size_t count_negative_eigenvalues(const Eigen::MatrixXd& a);

/// v^T C^j v for j = 0..max_power.
std::vector<double> moments(const Eigen::MatrixXd& c, const Eigen::VectorXd& v, std::size_t max_power);

/// v^T h(C) v with h the indicator of the negative half-line, C symmetric.
double step_quadratic_form(const Eigen::MatrixXd& c, const Eigen::VectorXd& v);

/// Eigenvalues of a symmetric tridiagonal matrix by bisection on the
/// classical Sturm sequence; independent of the library's QL and pivot count.
std::vector<double> bisection_eigenvalues(const spectra::TridiagonalSym& t, double tol = 1e-14);

/// Sorted eigenvalues of the 2D Dirichlet Laplacian of the given level, built
/// as a dense Kronecker sum and diagonalised by Eigen.
std::vector<double> dense_laplace_eigenvalues(int level);

}  // namespace oracle
