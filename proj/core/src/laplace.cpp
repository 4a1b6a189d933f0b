#include "spectra/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spectra/error.hpp"

namespace spectra {

namespace {

void check_level(int level) {
    if (level < 2 || level > 15) {
        throw ContractViolation("Laplacian refinement level must lie in [2, 15], got " + std::to_string(level));
    }
}

Vector one_dim_eigenvalues(int level) {
    const std::size_t m = (std::size_t{1} << level) - 1;
    const double h = std::ldexp(1.0, -level);
    const double scale = 4.0 / (h * h);
    Vector mu(m);
    for (std::size_t i = 1; i <= m; ++i) {
        const double s = std::sin(static_cast<double>(i) * std::numbers::pi * h / 2.0);
        mu[i - 1] = scale * s * s;
    }
    return mu;
}

}  // namespace

CsrMatrix gen_laplace_2d(int level) {
    check_level(level);
    const std::size_t m = (std::size_t{1} << level) - 1;
    const std::size_t n = m * m;
    const double h = std::ldexp(1.0, -level);
    const double inv_h2 = 1.0 / (h * h);

    std::vector<std::size_t> row_ptr(n + 1, 0);
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    cols.reserve(5 * n);
    vals.reserve(5 * n);

    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
            const std::size_t row = r * m + c;
            // ascending column order: south, west, centre, east, north
            if (r > 0) {
                cols.push_back(row - m);
                vals.push_back(-inv_h2);
            }
            if (c > 0) {
                cols.push_back(row - 1);
                vals.push_back(-inv_h2);
            }
            cols.push_back(row);
            vals.push_back(4.0 * inv_h2);
            if (c + 1 < m) {
                cols.push_back(row + 1);
                vals.push_back(-inv_h2);
            }
            if (r + 1 < m) {
                cols.push_back(row + m);
                vals.push_back(-inv_h2);
            }
            row_ptr[row + 1] = cols.size();
        }
    }
    return CsrMatrix(n, std::move(row_ptr), std::move(cols), std::move(vals));
}

Vector laplace_2d_eigenvalues(int level) {
    check_level(level);
    const Vector mu = one_dim_eigenvalues(level);
    Vector lambda;
    lambda.reserve(mu.size() * mu.size());
    for (double a : mu) {
        for (double b : mu) {
            lambda.push_back(a + b);
        }
    }
    std::sort(lambda.begin(), lambda.end());
    return lambda;
}

std::size_t count_laplace_eigs_below(int level, double tau) {
    check_level(level);
    const Vector mu = one_dim_eigenvalues(level);
    // mu is ascending, so for each i the admissible j form a prefix.
    std::size_t count = 0;
    std::size_t j_end = mu.size();
    for (double a : mu) {
        while (j_end > 0 && a + mu[j_end - 1] >= tau) {
            --j_end;
        }
        count += j_end;
    }
    return count;
}

}  // namespace spectra
