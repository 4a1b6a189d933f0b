#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "spectra/dense_eig.hpp"
#include "spectra/error.hpp"

namespace spectra {

namespace {

using Complex = std::complex<double>;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Francis double-shift QR (hqr2 lineage). On return h holds the quasi-triangular
// Schur form overwritten by back-substituted eigenvectors, and v the
// eigenvectors of the original matrix in real storage: a real eigenvalue owns one
// column, a complex pair (wr + i wi, wi > 0) owns columns (re, im).
void francis_qr(DenseMatrix& h, DenseMatrix& v, Vector& wr, Vector& wi) {
    const int nn = static_cast<int>(h.rows());
    int n = nn - 1;
    const int low = 0;
    const int high = nn - 1;
    double exshift = 0.0;
    double p = 0, q = 0, r = 0, s = 0, z = 0, t, w, x, y;

    double norm = 0.0;
    for (int i = 0; i < nn; ++i) {
        for (int j = std::max(i - 1, 0); j < nn; ++j) {
            norm += std::abs(h(i, j));
        }
    }

    const int max_sweeps = 40 * nn;
    int total_sweeps = 0;
    int iter = 0;
    while (n >= low) {
        int l = n;
        while (l > low) {
            s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
            if (s == 0.0) {
                s = norm;
            }
            if (std::abs(h(l, l - 1)) < kEps * s) {
                break;
            }
            --l;
        }

        if (l == n) {
            // one root
            h(n, n) += exshift;
            wr[n] = h(n, n);
            wi[n] = 0.0;
            --n;
            iter = 0;
        } else if (l == n - 1) {
            // two roots
            w = h(n, n - 1) * h(n - 1, n);
            p = (h(n - 1, n - 1) - h(n, n)) / 2.0;
            q = p * p + w;
            z = std::sqrt(std::abs(q));
            h(n, n) += exshift;
            h(n - 1, n - 1) += exshift;
            x = h(n, n);
            if (q >= 0) {
                z = p >= 0 ? p + z : p - z;
                wr[n - 1] = x + z;
                wr[n] = wr[n - 1];
                if (z != 0.0) {
                    wr[n] = x - w / z;
                }
                wi[n - 1] = 0.0;
                wi[n] = 0.0;
                x = h(n, n - 1);
                s = std::abs(x) + std::abs(z);
                p = x / s;
                q = z / s;
                r = std::sqrt(p * p + q * q);
                p /= r;
                q /= r;
                for (int j = n - 1; j < nn; ++j) {
                    z = h(n - 1, j);
                    h(n - 1, j) = q * z + p * h(n, j);
                    h(n, j) = q * h(n, j) - p * z;
                }
                for (int i = 0; i <= n; ++i) {
                    z = h(i, n - 1);
                    h(i, n - 1) = q * z + p * h(i, n);
                    h(i, n) = q * h(i, n) - p * z;
                }
                for (int i = low; i <= high; ++i) {
                    z = v(i, n - 1);
                    v(i, n - 1) = q * z + p * v(i, n);
                    v(i, n) = q * v(i, n) - p * z;
                }
            } else {
                wr[n - 1] = x + p;
                wr[n] = x + p;
                wi[n - 1] = z;
                wi[n] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            if (++total_sweeps > max_sweeps) {
                throw NumericalError("hessenberg_eig: no convergence for eigenvalue " + std::to_string(n) +
                                         " after " + std::to_string(max_sweeps) + " sweeps",
                                     n);
            }
            x = h(n, n);
            y = 0.0;
            w = 0.0;
            if (l < n) {
                y = h(n - 1, n - 1);
                w = h(n, n - 1) * h(n - 1, n);
            }
            // exceptional shifts
            if (iter == 10) {
                exshift += x;
                for (int i = low; i <= n; ++i) {
                    h(i, i) -= x;
                }
                s = std::abs(h(n, n - 1)) + std::abs(h(n - 1, n - 2));
                x = y = 0.75 * s;
                w = -0.4375 * s * s;
            }
            if (iter == 30) {
                s = (y - x) / 2.0;
                s = s * s + w;
                if (s > 0) {
                    s = std::sqrt(s);
                    if (y < x) {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for (int i = low; i <= n; ++i) {
                        h(i, i) -= s;
                    }
                    exshift += s;
                    x = y = w = 0.964;
                }
            }
            ++iter;

            // two consecutive small subdiagonal elements
            int m = n - 2;
            while (m >= l) {
                z = h(m, m);
                r = x - z;
                s = y - z;
                p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
                q = h(m + 1, m + 1) - z - r - s;
                r = h(m + 2, m + 1);
                s = std::abs(p) + std::abs(q) + std::abs(r);
                p /= s;
                q /= s;
                r /= s;
                if (m == l) {
                    break;
                }
                if (std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r)) <
                    kEps * (std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(z) + std::abs(h(m + 1, m + 1))))) {
                    break;
                }
                --m;
            }
            for (int i = m + 2; i <= n; ++i) {
                h(i, i - 2) = 0.0;
                if (i > m + 2) {
                    h(i, i - 3) = 0.0;
                }
            }

            // double QR step on rows l..n, columns m..n
            for (int k = m; k <= n - 1; ++k) {
                const bool notlast = k != n - 1;
                if (k != m) {
                    p = h(k, k - 1);
                    q = h(k + 1, k - 1);
                    r = notlast ? h(k + 2, k - 1) : 0.0;
                    x = std::abs(p) + std::abs(q) + std::abs(r);
                    if (x == 0.0) {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = std::sqrt(p * p + q * q + r * r);
                if (p < 0) {
                    s = -s;
                }
                if (s != 0) {
                    if (k != m) {
                        h(k, k - 1) = -s * x;
                    } else if (l != m) {
                        h(k, k - 1) = -h(k, k - 1);
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;
                    for (int j = k; j < nn; ++j) {
                        p = h(k, j) + q * h(k + 1, j);
                        if (notlast) {
                            p += r * h(k + 2, j);
                            h(k + 2, j) -= p * z;
                        }
                        h(k, j) -= p * x;
                        h(k + 1, j) -= p * y;
                    }
                    for (int i = 0; i <= std::min(n, k + 3); ++i) {
                        p = x * h(i, k) + y * h(i, k + 1);
                        if (notlast) {
                            p += z * h(i, k + 2);
                            h(i, k + 2) -= p * r;
                        }
                        h(i, k) -= p;
                        h(i, k + 1) -= p * q;
                    }
                    for (int i = low; i <= high; ++i) {
                        p = x * v(i, k) + y * v(i, k + 1);
                        if (notlast) {
                            p += z * v(i, k + 2);
                            v(i, k + 2) -= p * r;
                        }
                        v(i, k) -= p;
                        v(i, k + 1) -= p * q;
                    }
                }
            }
        }
    }

    if (norm == 0.0) {
        return;
    }

    // back substitution on the quasi-triangular form
    for (n = nn - 1; n >= 0; --n) {
        p = wr[n];
        q = wi[n];
        if (q == 0) {
            int l = n;
            h(n, n) = 1.0;
            for (int i = n - 1; i >= 0; --i) {
                w = h(i, i) - p;
                r = 0.0;
                for (int j = l; j <= n; ++j) {
                    r += h(i, j) * h(j, n);
                }
                if (wi[i] < 0.0) {
                    z = w;
                    s = r;
                } else {
                    l = i;
                    if (wi[i] == 0.0) {
                        h(i, n) = w != 0.0 ? -r / w : -r / (kEps * norm);
                    } else {
                        x = h(i, i + 1);
                        y = h(i + 1, i);
                        q = (wr[i] - p) * (wr[i] - p) + wi[i] * wi[i];
                        t = (x * s - z * r) / q;
                        h(i, n) = t;
                        h(i + 1, n) = std::abs(x) > std::abs(z) ? (-r - w * t) / x : (-s - y * t) / z;
                    }
                    t = std::abs(h(i, n));
                    if ((kEps * t) * t > 1) {
                        for (int j = i; j <= n; ++j) {
                            h(j, n) /= t;
                        }
                    }
                }
            }
        } else if (q < 0) {
            int l = n - 1;
            if (std::abs(h(n, n - 1)) > std::abs(h(n - 1, n))) {
                h(n - 1, n - 1) = q / h(n, n - 1);
                h(n - 1, n) = -(h(n, n) - p) / h(n, n - 1);
            } else {
                const Complex c = Complex(0.0, -h(n - 1, n)) / Complex(h(n - 1, n - 1) - p, q);
                h(n - 1, n - 1) = c.real();
                h(n - 1, n) = c.imag();
            }
            h(n, n - 1) = 0.0;
            h(n, n) = 1.0;
            for (int i = n - 2; i >= 0; --i) {
                double ra = 0.0;
                double sa = 0.0;
                for (int j = l; j <= n; ++j) {
                    ra += h(i, j) * h(j, n - 1);
                    sa += h(i, j) * h(j, n);
                }
                w = h(i, i) - p;
                if (wi[i] < 0.0) {
                    z = w;
                    r = ra;
                    s = sa;
                } else {
                    l = i;
                    if (wi[i] == 0) {
                        const Complex c = Complex(-ra, -sa) / Complex(w, q);
                        h(i, n - 1) = c.real();
                        h(i, n) = c.imag();
                    } else {
                        x = h(i, i + 1);
                        y = h(i + 1, i);
                        double vr = (wr[i] - p) * (wr[i] - p) + wi[i] * wi[i] - q * q;
                        const double vi = (wr[i] - p) * 2.0 * q;
                        if (vr == 0.0 && vi == 0.0) {
                            vr = kEps * norm * (std::abs(w) + std::abs(q) + std::abs(x) + std::abs(y) + std::abs(z));
                        }
                        const Complex c =
                            Complex(x * r - z * ra + q * sa, x * s - z * sa - q * ra) / Complex(vr, vi);
                        h(i, n - 1) = c.real();
                        h(i, n) = c.imag();
                        if (std::abs(x) > (std::abs(z) + std::abs(q))) {
                            h(i + 1, n - 1) = (-ra - w * h(i, n - 1) + q * h(i, n)) / x;
                            h(i + 1, n) = (-sa - w * h(i, n) - q * h(i, n - 1)) / x;
                        } else {
                            const Complex c2 = Complex(-r - y * h(i, n - 1), -s - y * h(i, n)) / Complex(z, q);
                            h(i + 1, n - 1) = c2.real();
                            h(i + 1, n) = c2.imag();
                        }
                    }
                    t = std::max(std::abs(h(i, n - 1)), std::abs(h(i, n)));
                    if ((kEps * t) * t > 1) {
                        for (int j = i; j <= n; ++j) {
                            h(j, n - 1) /= t;
                            h(j, n) /= t;
                        }
                    }
                }
            }
        }
    }

    // back transformation
    for (int j = nn - 1; j >= low; --j) {
        for (int i = low; i <= high; ++i) {
            z = 0.0;
            for (int k = low; k <= std::min(j, high); ++k) {
                z += v(i, k) * h(k, j);
            }
            v(i, j) = z;
        }
    }
}

// Solves Z s = e1 by LU with partial pivoting. Returns false when a pivot is
// negligible relative to the largest, i.e. Z is numerically singular.
bool solve_first_unit(ComplexMatrix z, std::vector<Complex>& s) {
    const std::size_t n = z.rows();
    s.assign(n, Complex{});
    s[0] = 1.0;
    double max_pivot = 0.0;
    double min_pivot = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(z(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(z(i, k)) > best) {
                best = std::abs(z(i, k));
                piv = i;
            }
        }
        max_pivot = std::max(max_pivot, best);
        min_pivot = std::min(min_pivot, best);
        if (best == 0.0) {
            return false;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(z(k, j), z(piv, j));
            }
            std::swap(s[k], s[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = z(i, k) / z(k, k);
            if (f == Complex{}) {
                continue;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                z(i, j) -= f * z(k, j);
            }
            s[i] -= f * s[k];
        }
    }
    if (min_pivot < 1e-13 * max_pivot) {
        return false;
    }
    for (std::size_t k = n; k-- > 0;) {
        Complex acc = s[k];
        for (std::size_t j = k + 1; j < n; ++j) {
            acc -= z(k, j) * s[j];
        }
        s[k] = acc / z(k, k);
    }
    return true;
}

}  // namespace

EigenPairsGeneral hessenberg_eig(const DenseMatrix& h_in) {
    const std::size_t n = h_in.rows();
    if (n == 0 || h_in.cols() != n) {
        throw ContractViolation("hessenberg_eig: expected a non-empty square matrix");
    }
    for (std::size_t i = 2; i < n; ++i) {
        for (std::size_t j = 0; j + 1 < i; ++j) {
            if (h_in(i, j) != 0.0) {
                throw ContractViolation("hessenberg_eig: input is not upper Hessenberg");
            }
        }
    }

    DenseMatrix h = h_in;
    DenseMatrix v = DenseMatrix::identity(n);
    Vector wr(n, 0.0), wi(n, 0.0);
    francis_qr(h, v, wr, wi);

    EigenPairsGeneral out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = Complex(wr[j], wi[j]);
        if (wi[j] == 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                out.vectors(i, j) = v(i, j);
            }
        } else if (wi[j] > 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                out.vectors(i, j) = Complex(v(i, j), v(i, j + 1));
                out.vectors(i, j + 1) = Complex(v(i, j), -v(i, j + 1));
            }
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            nrm += std::norm(out.vectors(i, j));
        }
        nrm = std::sqrt(nrm);
        if (nrm == 0.0 || !std::isfinite(nrm)) {
            throw QuadratureBreakdown("hessenberg_eig: degenerate eigenvector " + std::to_string(j),
                                      static_cast<std::ptrdiff_t>(j));
        }
        for (std::size_t i = 0; i < n; ++i) {
            out.vectors(i, j) /= nrm;
        }
    }
    if (!solve_first_unit(out.vectors, out.inverse_first_column)) {
        throw QuadratureBreakdown(
            "hessenberg_eig: eigenvector matrix is numerically singular (defective H); "
            "the Arnoldi quadrature is undefined for this starting vector");
    }
    return out;
}

}  // namespace spectra
