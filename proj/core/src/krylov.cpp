#include "spectra/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spectra/error.hpp"

namespace spectra {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] += alpha * x[i];
    }
}

void check_start(const LinearOperator& c, std::span<const double> v, std::size_t k, const char* who) {
    if (v.size() != c.size()) {
        throw ContractViolation(std::string(who) + ": starting vector has wrong dimension");
    }
    if (k == 0) {
        throw ContractViolation(std::string(who) + ": k must be at least 1");
    }
}

void check_finite(double value, std::size_t step, const char* who) {
    if (!std::isfinite(value)) {
        throw NumericalError(std::string(who) + ": non-finite value at step " + std::to_string(step + 1),
                             static_cast<std::ptrdiff_t>(step));
    }
}

// Full reorthogonalization of w against q(0..cols-1). Returns the coefficients
// removed (summed over passes). A second pass runs when the first shrinks w by
// more than half.
Vector reorthogonalize(const KrylovBasis& q, std::size_t cols, std::span<double> w) {
    Vector coeff(cols, 0.0);
    Vector pass(cols);
    for (int sweep = 0; sweep < 2; ++sweep) {
        const double before = norm2(w);
        std::fill(pass.begin(), pass.end(), 0.0);
        for (std::size_t j = 0; j < cols; ++j) {
            pass[j] = dot(q.col(j), w);
        }
        for (std::size_t j = 0; j < cols; ++j) {
            axpy(-pass[j], q.col(j), w);
            coeff[j] += pass[j];
        }
        const double after = norm2(w);
        if (after >= 0.5 * before) {
            break;
        }
    }
    return coeff;
}

}  // namespace

TridiagonalSym LanczosDecomposition::section() const {
    TridiagonalSym t;
    t.diag = alphas;
    if (steps_completed > 1) {
        t.offdiag.assign(betas.begin(), betas.begin() + static_cast<std::ptrdiff_t>(steps_completed - 1));
    }
    return t;
}

DenseMatrix ArnoldiDecomposition::section() const {
    const std::size_t k = steps_completed;
    DenseMatrix s(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            s(i, j) = h(i, j);
        }
    }
    return s;
}

LanczosDecomposition lanczos(const LinearOperator& c, std::span<const double> v, std::size_t k) {
    check_start(c, v, k, "lanczos");
    const std::size_t n = c.size();
    const double vnorm = norm2(v);
    if (!(vnorm > 0.0)) {
        throw ContractViolation("lanczos: starting vector must be nonzero");
    }

    LanczosDecomposition dec;
    dec.vnorm = vnorm;
    dec.basis = KrylovBasis(n);
    dec.basis.reserve(std::min(k, n) + 1);
    dec.alphas.reserve(k);
    dec.betas.reserve(k);

    Vector q(n);
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = v[i] / vnorm;
    }
    dec.basis.push_back(q);

    // the Krylov space cannot exceed the dimension
    k = std::min(k, n);
    Vector w(n);
    double max_alpha = 0.0;
    double max_beta = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        c.apply(dec.basis.col(j), w);
        if (j > 0) {
            axpy(-dec.betas[j - 1], dec.basis.col(j - 1), w);
        }
        double alpha = dot(dec.basis.col(j), w);
        axpy(-alpha, dec.basis.col(j), w);
        const Vector coeff = reorthogonalize(dec.basis, j + 1, w);
        alpha += coeff[j];
        const double beta = norm2(w);
        check_finite(alpha, j, "lanczos");
        check_finite(beta, j, "lanczos");

        dec.alphas.push_back(alpha);
        dec.betas.push_back(beta);
        dec.steps_completed = j + 1;
        max_alpha = std::max(max_alpha, std::abs(alpha));
        max_beta = std::max(max_beta, beta);

        if (beta <= 1e-12 * (max_alpha + 2.0 * max_beta)) {
            dec.breakdown = true;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            q[i] = w[i] / beta;
        }
        dec.basis.push_back(q);
    }
    return dec;
}

ArnoldiDecomposition arnoldi(const LinearOperator& c, std::span<const double> v, std::size_t k) {
    check_start(c, v, k, "arnoldi");
    const std::size_t n = c.size();
    const double vnorm = norm2(v);
    if (!(vnorm > 0.0)) {
        throw ContractViolation("arnoldi: starting vector must be nonzero");
    }

    ArnoldiDecomposition dec;
    dec.vnorm = vnorm;
    dec.basis = KrylovBasis(n);
    k = std::min(k, n);
    dec.basis.reserve(k + 1);
    DenseMatrix h(k + 1, k);

    Vector q(n);
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = v[i] / vnorm;
    }
    dec.basis.push_back(q);

    Vector w(n);
    double scale = 0.0;
    std::size_t done = 0;
    for (std::size_t j = 0; j < k; ++j) {
        c.apply(dec.basis.col(j), w);
        const double before = norm2(w);
        for (std::size_t i = 0; i <= j; ++i) {
            const double hij = dot(dec.basis.col(i), w);
            h(i, j) = hij;
            axpy(-hij, dec.basis.col(i), w);
        }
        if (norm2(w) < 0.5 * before) {
            for (std::size_t i = 0; i <= j; ++i) {
                const double corr = dot(dec.basis.col(i), w);
                h(i, j) += corr;
                axpy(-corr, dec.basis.col(i), w);
            }
        }
        const double beta = norm2(w);
        for (std::size_t i = 0; i <= j; ++i) {
            check_finite(h(i, j), j, "arnoldi");
            scale = std::max(scale, std::abs(h(i, j)));
        }
        check_finite(beta, j, "arnoldi");
        h(j + 1, j) = beta;
        scale = std::max(scale, beta);
        done = j + 1;

        if (beta <= 1e-12 * 3.0 * scale) {
            dec.breakdown = true;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            q[i] = w[i] / beta;
        }
        dec.basis.push_back(q);
    }

    dec.steps_completed = done;
    dec.h = DenseMatrix(done + 1, done);
    for (std::size_t i = 0; i <= done; ++i) {
        for (std::size_t j = 0; j < done; ++j) {
            dec.h(i, j) = h(i, j);
        }
    }
    return dec;
}

Vector krylov_poly_apply(const LanczosDecomposition& dec, const SectionFunction& f_on_section) {
    const TridiagonalSym t = dec.section();
    const Vector fe1 = f_on_section(t);
    if (fe1.size() != dec.steps_completed) {
        throw ContractViolation("krylov_poly_apply: f(J_k) e1 has wrong length");
    }
    Vector out(dec.basis.rows(), 0.0);
    for (std::size_t j = 0; j < dec.steps_completed; ++j) {
        axpy(dec.vnorm * fe1[j], dec.basis.col(j), out);
    }
    return out;
}

Vector krylov_poly_apply(const LanczosDecomposition& dec, const std::function<double(double)>& f) {
    return krylov_poly_apply(dec, [&f](const TridiagonalSym& t) {
        const EigenPairsSym eig = tridiag_eig(t);
        const std::size_t k = t.size();
        Vector out(k, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            const double coef = f(eig.values[i]) * eig.vectors(0, i);
            for (std::size_t r = 0; r < k; ++r) {
                out[r] += coef * eig.vectors(r, i);
            }
        }
        return out;
    });
}

}  // namespace spectra
