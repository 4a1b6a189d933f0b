#pragma once

#include <cstddef>

#include "spectra/csr_matrix.hpp"

namespace spectra {

/// Five-point finite-difference Dirichlet Laplacian on the unit square with
/// h = 2^-level: dimension (2^level - 1)^2, diagonal 4/h^2, neighbours -1/h^2.
/// Unknowns are numbered row by row.
CsrMatrix gen_laplace_2d(int level);

/// Closed-form eigenvalues (4/h^2)(sin^2(i pi h/2) + sin^2(j pi h/2)),
/// i, j = 1..2^level - 1, sorted ascending.
Vector laplace_2d_eigenvalues(int level);

/// Number of closed-form eigenvalues strictly below tau.
std::size_t count_laplace_eigs_below(int level, double tau);

}  // namespace spectra
