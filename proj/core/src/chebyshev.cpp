#include "spectra/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spectra/error.hpp"
#include "spectra/krylov.hpp"
#include "spectra/linear_operator.hpp"
#include "spectra/sampling.hpp"

namespace spectra {

namespace {

constexpr std::uint64_t kBoundsSeed = 0xB0B0'5EED'2015'0001ULL;
constexpr std::size_t kBoundsSteps = 20;
constexpr double kBoundsMargin = 0.05;

}  // namespace

SpectralBounds estimate_spectral_bounds(const CsrMatrix& a, double tau) {
    const ShiftedOperator shifted(a, tau);
    const Vector v = sample_vector(kBoundsSeed, 0, a.size(), RngKind::gaussian);
    const LanczosDecomposition dec = lanczos(shifted.as_operator(), v, kBoundsSteps);
    const Vector ritz = tridiag_eigenvalues(dec.section());
    const double lo = ritz.front();
    const double hi = ritz.back();
    double span = hi - lo;
    if (!(span > 0.0)) {
        span = std::max(std::abs(lo), 1.0);
    }
    return {lo - kBoundsMargin * span, hi + kBoundsMargin * span};
}

Vector chebyshev_step_coefficients(double step, std::size_t degree) {
    const double theta = std::acos(std::clamp(step, -1.0, 1.0));
    Vector c(degree + 1);
    c[0] = 1.0 - theta / std::numbers::pi;
    for (std::size_t i = 1; i <= degree; ++i) {
        const double di = static_cast<double>(i);
        c[i] = -2.0 * std::sin(di * theta) / (di * std::numbers::pi);
    }
    return c;
}

ChebyshevMap ChebyshevMap::from_bounds(const SpectralBounds& b) {
    if (!(b.upper > b.lower)) {
        throw NumericalError("Chebyshev map needs upper bound above lower bound");
    }
    const double width = b.upper - b.lower;
    return {2.0 / width, -(b.upper + b.lower) / width};
}

Vector chebyshev_moments(const CsrMatrix& a, double tau, const ChebyshevMap& map, std::span<const double> v,
                         std::size_t degree) {
    const std::size_t n = a.size();
    if (v.size() != n) {
        throw ContractViolation("chebyshev_moments: vector has wrong dimension");
    }
    // apply_b(x) = scale * (A x - tau x) + offset * x
    Vector ax(n);
    auto apply_b = [&](std::span<const double> x, std::span<double> y) {
        a.multiply(x, ax);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = map.scale * (ax[i] - tau * x[i]) + map.offset * x[i];
        }
    };
    auto dot = [](std::span<const double> x, std::span<const double> y) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            s += x[i] * y[i];
        }
        return s;
    };

    Vector moments(degree + 1);
    Vector t_prev(v.begin(), v.end());
    moments[0] = dot(v, t_prev);
    if (degree == 0) {
        return moments;
    }
    Vector t_cur(n);
    apply_b(t_prev, t_cur);
    moments[1] = dot(v, t_cur);
    Vector t_next(n);
    for (std::size_t i = 2; i <= degree; ++i) {
        apply_b(t_cur, t_next);
        for (std::size_t r = 0; r < n; ++r) {
            t_next[r] = 2.0 * t_next[r] - t_prev[r];
        }
        moments[i] = dot(v, t_next);
        std::swap(t_prev, t_cur);
        std::swap(t_cur, t_next);
    }
    return moments;
}

}  // namespace spectra
