#include "spectra/precond.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "spectra/error.hpp"

namespace spectra {

namespace {

constexpr double kBoostRelative = 1e-8;
constexpr std::size_t kNone = static_cast<std::size_t>(-1);

double boost_threshold_for(std::span<const double> shifted_diag, double fallback_scale) {
    double m = 0.0;
    for (double v : shifted_diag) {
        m = std::max(m, std::abs(v));
    }
    if (m == 0.0) {
        m = fallback_scale > 0.0 ? fallback_scale : 1.0;
    }
    return kBoostRelative * m;
}

// Returns the boosted pivot and bumps `count` when boosting happened.
double boost(double d, double threshold, std::size_t& count) {
    if (std::abs(d) >= threshold) {
        return d;
    }
    ++count;
    return d < 0.0 ? -threshold : threshold;
}

// P (A - tau I) P^T in CSR form.
CsrMatrix permuted_shifted(const CsrMatrix& a, double tau, const std::vector<std::size_t>& perm) {
    const std::size_t n = a.size();
    std::vector<std::size_t> inv(n);
    for (std::size_t i = 0; i < n; ++i) {
        inv[perm[i]] = i;
    }
    const auto rp = a.row_ptr();
    const auto ci = a.col_idx();
    const auto va = a.values();
    std::vector<Triplet> entries;
    entries.reserve(a.nnz() + n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) {
            entries.push_back({inv[i], inv[ci[p]], va[p]});
        }
        entries.push_back({inv[i], inv[i], -tau});
    }
    return CsrMatrix::from_triplets(n, entries);
}

}  // namespace

Vector FactoredPreconditioner::m(std::span<const double> x) const {
    Vector y(dimension);
    apply_m(x, y);
    return y;
}

Vector FactoredPreconditioner::m_adjoint(std::span<const double> x) const {
    Vector y(dimension);
    apply_m_adjoint(x, y);
    return y;
}

Vector UnfactoredPreconditioner::t(std::span<const double> x) const {
    Vector y(dimension);
    apply_t(x, y);
    return y;
}

void IldlFactors::solve_lower(std::span<double> x) const {
    for (std::size_t j = 0; j < n; ++j) {
        const double xj = x[j];
        if (xj == 0.0) {
            continue;
        }
        for (std::size_t q = col_ptr[j]; q < col_ptr[j + 1]; ++q) {
            x[row_idx[q]] -= values[q] * xj;
        }
    }
}

void IldlFactors::solve_upper(std::span<double> x) const {
    for (std::size_t j = n; j-- > 0;) {
        double s = x[j];
        for (std::size_t q = col_ptr[j]; q < col_ptr[j + 1]; ++q) {
            s -= values[q] * x[row_idx[q]];
        }
        x[j] = s;
    }
}

IldlFactors ildl_factorize(const CsrMatrix& a, double tau, double drop_tol) {
    if (!(drop_tol >= 0.0)) {
        throw ContractViolation("ildl_factorize: drop tolerance must be nonnegative");
    }
    const std::size_t n = a.size();

    IldlFactors f;
    f.n = n;
    f.drop_tol = drop_tol;
    f.perm = reverse_cuthill_mckee(a);
    const CsrMatrix b = permuted_shifted(a, tau, f.perm);
    const Vector bdiag = b.diagonal_values();
    f.boost_threshold = boost_threshold_for(bdiag, a.max_abs());
    f.d.assign(n, 0.0);
    f.col_ptr.assign(1, 0);

    const auto rp = b.row_ptr();
    const auto ci = b.col_idx();
    const auto va = b.values();

    // Row access to the finished part of L: column j sits in the list of the
    // row of its next unconsumed entry, starting at position cursor[j].
    std::vector<std::size_t> list_head(n, kNone);
    std::vector<std::size_t> list_next(n, kNone);
    std::vector<std::size_t> cursor(n, 0);

    Vector z(n, 0.0);
    std::vector<char> occupied(n, 0);
    std::vector<std::size_t> pattern;
    std::vector<std::pair<std::size_t, double>> column;

    for (std::size_t k = 0; k < n; ++k) {
        pattern.clear();
        for (std::size_t p = rp[k]; p < rp[k + 1]; ++p) {
            const std::size_t i = ci[p];
            if (i < k) {
                continue;
            }
            z[i] = va[p];
            if (!occupied[i]) {
                occupied[i] = 1;
                pattern.push_back(i);
            }
        }
        if (!occupied[k]) {
            occupied[k] = 1;
            pattern.push_back(k);
            z[k] = 0.0;
        }

        // z(k:n) -= sum_j L(k:n, j) d_j L(k, j) over columns j with L(k, j) != 0
        std::size_t j = list_head[k];
        list_head[k] = kNone;
        while (j != kNone) {
            const std::size_t following = list_next[j];
            const std::size_t start = cursor[j];
            const std::size_t end = f.col_ptr[j + 1];
            const double factor = f.values[start] * f.d[j];
            for (std::size_t q = start; q < end; ++q) {
                const std::size_t i = f.row_idx[q];
                if (!occupied[i]) {
                    occupied[i] = 1;
                    pattern.push_back(i);
                    z[i] = 0.0;
                }
                z[i] -= f.values[q] * factor;
            }
            cursor[j] = start + 1;
            if (start + 1 < end) {
                const std::size_t r = f.row_idx[start + 1];
                list_next[j] = list_head[r];
                list_head[r] = j;
            }
            j = following;
        }

        const double dk = boost(z[k], f.boost_threshold, f.boosted_pivots);
        f.d[k] = dk;

        column.clear();
        double norm_sq = 0.0;
        for (std::size_t i : pattern) {
            if (i != k) {
                const double l = z[i] / dk;
                column.emplace_back(i, l);
                norm_sq += l * l;
            }
            occupied[i] = 0;
            z[i] = 0.0;
        }
        const double cutoff = drop_tol * std::sqrt(norm_sq);
        std::erase_if(column, [cutoff](const auto& e) { return std::abs(e.second) <= cutoff; });
        std::sort(column.begin(), column.end());

        const std::size_t col_start = f.values.size();
        for (const auto& [i, l] : column) {
            f.row_idx.push_back(i);
            f.values.push_back(l);
        }
        f.col_ptr.push_back(f.values.size());
        cursor[k] = col_start;
        if (!column.empty()) {
            const std::size_t r = column.front().first;
            list_next[k] = list_head[r];
            list_head[r] = k;
        }
    }
    return f;
}

FactoredPreconditioner make_abs_ildl(IldlFactors factors) {
    auto fac = std::make_shared<const IldlFactors>(std::move(factors));
    const std::size_t n = fac->n;
    auto inv_sqrt = std::make_shared<Vector>(n);
    for (std::size_t i = 0; i < n; ++i) {
        (*inv_sqrt)[i] = 1.0 / std::sqrt(std::abs(fac->d[i]));
    }

    FactoredPreconditioner p;
    p.dimension = n;
    p.name = fac->drop_tol == 0.0 ? "ldl-exact" : "ildl";
    p.boosted_pivots = fac->boosted_pivots;
    p.apply_m = [fac, inv_sqrt](std::span<const double> x, std::span<double> y) {
        const std::size_t n = fac->n;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = x[fac->perm[i]];
        }
        fac->solve_lower(y);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] *= (*inv_sqrt)[i];
        }
    };
    p.apply_m_adjoint = [fac, inv_sqrt](std::span<const double> x, std::span<double> y) {
        const std::size_t n = fac->n;
        Vector tmp(n);
        for (std::size_t i = 0; i < n; ++i) {
            tmp[i] = x[i] * (*inv_sqrt)[i];
        }
        fac->solve_upper(tmp);
        for (std::size_t i = 0; i < n; ++i) {
            y[fac->perm[i]] = tmp[i];
        }
    };
    return p;
}

FactoredPreconditioner make_abs_diagonal(const CsrMatrix& a, double tau) {
    const std::size_t n = a.size();
    Vector shifted = a.diagonal_values();
    for (double& v : shifted) {
        v -= tau;
    }
    const double threshold = boost_threshold_for(shifted, a.max_abs());
    FactoredPreconditioner p;
    p.dimension = n;
    p.name = "absdiag";
    auto scale = std::make_shared<Vector>(n);
    for (std::size_t i = 0; i < n; ++i) {
        (*scale)[i] = 1.0 / std::sqrt(std::abs(boost(shifted[i], threshold, p.boosted_pivots)));
    }
    auto apply = [scale](std::span<const double> x, std::span<double> y) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            y[i] = (*scale)[i] * x[i];
        }
    };
    p.apply_m = apply;
    p.apply_m_adjoint = apply;
    return p;
}

FactoredPreconditioner make_identity_preconditioner(std::size_t n) {
    FactoredPreconditioner p;
    p.dimension = n;
    p.name = "none";
    auto copy = [](std::span<const double> x, std::span<double> y) { std::copy(x.begin(), x.end(), y.begin()); };
    p.apply_m = copy;
    p.apply_m_adjoint = copy;
    return p;
}

UnfactoredPreconditioner as_unfactored(const FactoredPreconditioner& p) {
    UnfactoredPreconditioner t;
    t.dimension = p.dimension;
    t.name = p.name;
    auto m = p.apply_m;
    auto m_adj = p.apply_m_adjoint;
    const std::size_t n = p.dimension;
    t.apply_t = [m, m_adj, n](std::span<const double> x, std::span<double> y) {
        Vector tmp(n);
        m(x, tmp);
        m_adj(tmp, y);
    };
    return t;
}

}  // namespace spectra
