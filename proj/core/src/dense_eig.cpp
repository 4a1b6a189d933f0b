#include "spectra/dense_eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "spectra/error.hpp"

namespace spectra {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Implicit QL (tql2 lineage). d, e are overwritten; e[i] couples i and i+1.
// When z is non-null it holds an n x n orthogonal matrix that accumulates the rotations.
void ql_implicit(Vector& d, Vector& e, DenseMatrix* z) {
    const std::size_t n = d.size();
    if (n <= 1) {
        return;
    }
    const std::size_t max_sweeps = 40 * n;
    std::size_t sweeps = 0;
    double f = 0.0;
    double tst1 = 0.0;

    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n - 1) {
            if (std::abs(e[m]) <= kEps * tst1) {
                break;
            }
            ++m;
        }
        if (m > l) {
            do {
                if (++sweeps > max_sweeps) {
                    throw NumericalError("tridiag_eig: no convergence for eigenvalue " + std::to_string(l) +
                                             " after " + std::to_string(max_sweeps) + " sweeps",
                                         static_cast<std::ptrdiff_t>(l));
                }
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) {
                    d[i] -= h;
                }
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t ii = m; ii-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[ii];
                    h = c * p;
                    r = std::hypot(p, e[ii]);
                    e[ii + 1] = s * r;
                    s = e[ii] / r;
                    c = p / r;
                    p = c * d[ii] - s * g;
                    d[ii + 1] = h + s * (c * g + s * d[ii]);
                    if (z != nullptr) {
                        for (std::size_t k = 0; k < n; ++k) {
                            h = (*z)(k, ii + 1);
                            (*z)(k, ii + 1) = s * (*z)(k, ii) + c * h;
                            (*z)(k, ii) = c * (*z)(k, ii) - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > kEps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

void check_tridiagonal(const TridiagonalSym& t) {
    if (t.diag.empty()) {
        throw ContractViolation("tridiagonal matrix must have k >= 1");
    }
    if (!t.consistent()) {
        throw ContractViolation("tridiagonal offdiag must be one shorter than diag");
    }
}

}  // namespace

EigenPairsSym tridiag_eig(const TridiagonalSym& t) {
    check_tridiagonal(t);
    const std::size_t n = t.size();
    Vector d = t.diag;
    Vector e(n, 0.0);
    std::copy(t.offdiag.begin(), t.offdiag.end(), e.begin());
    DenseMatrix z = DenseMatrix::identity(n);
    ql_implicit(d, e, &z);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    EigenPairsSym out;
    out.values.resize(n);
    out.vectors = DenseMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = d[order[j]];
        for (std::size_t i = 0; i < n; ++i) {
            out.vectors(i, j) = z(i, order[j]);
        }
    }
    return out;
}

Vector tridiag_eigenvalues(const TridiagonalSym& t) {
    check_tridiagonal(t);
    Vector d = t.diag;
    Vector e(t.size(), 0.0);
    std::copy(t.offdiag.begin(), t.offdiag.end(), e.begin());
    ql_implicit(d, e, nullptr);
    std::sort(d.begin(), d.end());
    return d;
}

SturmCount sturm_count_below(const TridiagonalSym& t, double tau) {
    if (!t.consistent()) {
        throw ContractViolation("tridiagonal offdiag must be one shorter than diag");
    }
    double max_e2 = 1.0;
    for (double b : t.offdiag) {
        max_e2 = std::max(max_e2, b * b);
    }
    // Smallest pivot magnitude that keeps e^2 / q finite.
    const double pivmin = std::numeric_limits<double>::min() / kEps * max_e2;

    SturmCount result;
    double q = 1.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double e2 = i == 0 ? 0.0 : t.offdiag[i - 1] * t.offdiag[i - 1];
        q = (t.diag[i] - tau) - (i == 0 ? 0.0 : e2 / q);
        if (q == 0.0) {
            result.pivot_perturbed = true;
            q = pivmin;
        } else if (std::abs(q) < pivmin) {
            q = std::copysign(pivmin, q);
        }
        if (q < 0.0) {
            ++result.below;
        }
    }
    return result;
}

TridiagonalSym householder_tridiagonalize(std::vector<double> a, std::size_t n) {
    if (a.size() != n * n) {
        throw ContractViolation("householder_tridiagonalize: expected n*n entries");
    }
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    TridiagonalSym t;
    t.diag.resize(n);
    t.offdiag.resize(n == 0 ? 0 : n - 1);
    Vector v(n), p(n), w(n);

    for (std::size_t k = 0; k + 2 < n; ++k) {
        // Reflector that zeroes a(k+2:n, k).
        double alpha = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            alpha += at(i, k) * at(i, k);
        }
        alpha = std::sqrt(alpha);
        const double x0 = at(k + 1, k);
        if (alpha == 0.0) {
            continue;
        }
        const double sign_alpha = x0 >= 0.0 ? -alpha : alpha;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = at(i, k);
        }
        v[k + 1] -= sign_alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 == 0.0) {
            continue;
        }
        const double beta = 2.0 / vnorm2;

        // p = beta * A v, w = p - (beta/2)(p.v) v, A -= v w^T + w v^T on the trailing block.
        for (std::size_t i = k + 1; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) {
                s += at(i, j) * v[j];
            }
            p[i] = beta * s;
        }
        double pv = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            pv += p[i] * v[i];
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            w[i] = p[i] - 0.5 * beta * pv * v[i];
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                at(i, j) -= v[i] * w[j] + w[i] * v[j];
            }
        }
        at(k + 1, k) = sign_alpha;
        at(k, k + 1) = sign_alpha;
        for (std::size_t i = k + 2; i < n; ++i) {
            at(i, k) = 0.0;
            at(k, i) = 0.0;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        t.diag[i] = at(i, i);
        if (i + 1 < n) {
            t.offdiag[i] = at(i + 1, i);
        }
    }
    return t;
}

std::size_t dense_inertia_oracle(const CsrMatrix& a, double tau, std::size_t cap) {
    const std::size_t n = a.size();
    if (n > cap) {
        throw OracleRefusal("dense inertia oracle refuses n = " + std::to_string(n) + " (cap " +
                            std::to_string(cap) + "); use the analytic Laplacian oracle for generated matrices");
    }
    if (n == 0) {
        return 0;
    }
    std::vector<double> dense = a.to_dense();
    for (std::size_t i = 0; i < n; ++i) {
        dense[i * n + i] -= tau;
    }
    const TridiagonalSym t = householder_tridiagonalize(std::move(dense), n);
    return sturm_count_below(t, 0.0).below;
}

}  // namespace spectra
