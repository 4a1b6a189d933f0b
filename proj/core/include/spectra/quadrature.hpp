#pragma once

#include <complex>
#include <vector>

#include "spectra/krylov.hpp"

namespace spectra {

/// Real quadrature rule for v^T f(C) v: nodes ascending, weights >= 0.
struct GaussRule {
    Vector nodes;
    Vector weights;
    double vnorm_sq = 0.0;
    /// Set when a GA rule was requested but the decomposition broke down, so
    /// the plain Gauss rule was returned instead.
    bool fell_back_to_gauss = false;
};

/// Complex rule from H_k: v^T f(C) v ~ sum_i left_i * f(node_i) * right_i.
struct ArnoldiRule {
    std::vector<std::complex<double>> nodes;
    std::vector<std::complex<double>> left_factors;   ///< ||v||^2 z_i(1)
    std::vector<std::complex<double>> right_factors;  ///< i-th entry of Z^{-1} e_1
};

/// Gauss rule from the eigendecomposition of J_k.
GaussRule gauss_rule(const LanczosDecomposition& dec);

/// Generalized averaged Gauss rule: eigen-decomposes the (2k-1)-order matrix
/// obtained by mirroring J_k around beta_{k+1}. Exact one degree beyond Gauss.
/// Falls back to gauss_rule (flag set) after a breakdown, where beta_{k+1} is
/// not meaningful.
GaussRule ga_rule(const LanczosDecomposition& dec);

/// The extended tridiagonal matrix used by ga_rule (exposed for tests).
TridiagonalSym ga_extended_section(const LanczosDecomposition& dec);

/// Quadrature rule from the eigendecomposition of H_k. Throws
/// QuadratureBreakdown if H_k is defective.
ArnoldiRule arnoldi_rule(const ArnoldiDecomposition& dec);

struct StepValue {
    double value = 0.0;
    /// Imaginary part of the Arnoldi sum before the real part was taken.
    double imag = 0.0;
    /// Some node lies within the zero band: the shift may coincide with an eigenvalue.
    bool near_zero_node = false;
};

/// Default half-width of the warning band around zero, relative to max |node|.
inline constexpr double kZeroBandRelative = 1e-12;

/// Sum of weights at nodes strictly below zero.
StepValue apply_step_function(const GaussRule& rule, double zero_band = kZeroBandRelative);

/// Real part of sum(left * right) over nodes with negative real part.
StepValue apply_step_function(const ArnoldiRule& rule, double zero_band = kZeroBandRelative);

}  // namespace spectra
