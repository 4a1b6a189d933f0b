#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "spectra/csr_matrix.hpp"

namespace spectra {

struct SpectralBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Bounds on the spectrum of A - tau I from 20 Lanczos steps started at a
/// fixed vector, widened by 5% of the Ritz span on each side.
SpectralBounds estimate_spectral_bounds(const CsrMatrix& a, double tau);

/// Chebyshev coefficients c_0..c_degree of the indicator of t < step on [-1, 1]:
/// c_0 = 1 - acos(step)/pi, c_i = -2 sin(i acos(step)) / (i pi).
Vector chebyshev_step_coefficients(double step, std::size_t degree);

/// Affine map of [lower, upper] onto [-1, 1].
struct ChebyshevMap {
    double scale = 1.0;   ///< 2 / (upper - lower)
    double offset = 0.0;  ///< -(upper + lower) / (upper - lower)

    static ChebyshevMap from_bounds(const SpectralBounds& b);
    /// Image of x = 0, where the step sits.
    double step_position() const noexcept { return offset; }
};

/// Moments v^T T_i(B) v, i = 0..degree, for B = scale (A - tau I) + offset I,
/// through the three-term recurrence (one matvec per degree).
Vector chebyshev_moments(const CsrMatrix& a, double tau, const ChebyshevMap& map, std::span<const double> v,
                         std::size_t degree);

}  // namespace spectra
