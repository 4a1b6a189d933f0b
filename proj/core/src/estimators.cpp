#include "spectra/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <utility>

#include "spectra/error.hpp"
#include "spectra/krylov.hpp"
#include "spectra/laplace.hpp"
#include "spectra/linear_operator.hpp"
#include "spectra/quadrature.hpp"

namespace spectra {

namespace {

// Tag mixed into the seed for the one-off redraw of a sample whose H_k was defective.
constexpr std::uint64_t kRedrawTag = 0x5EED'0000'00AD'0001ULL;

struct SampleOutcome {
    double value = 0.0;
    std::size_t k_eff = 0;
    double imag = 0.0;
    bool near_zero = false;
    bool ga_fallback = false;
    bool breakdown = false;
    bool redrawn = false;
    std::string redraw_reason;
};

unsigned resolve_threads(unsigned requested, std::size_t work) {
    unsigned t = requested;
    if (t == 0) {
        t = std::max(1u, std::thread::hardware_concurrency());
    }
    return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(work, 1)));
}

// Runs body(j) for j in [0, m) on up to `threads` workers. Results are stored
// by index, so the reduction order never depends on the schedule. The first
// failure (lowest index among those observed) is rethrown.
template <class Body>
std::vector<SampleOutcome> run_samples(std::size_t m, unsigned threads, Body&& body) {
    std::vector<SampleOutcome> out(m);
    const unsigned workers = resolve_threads(threads, m);
    if (workers <= 1) {
        for (std::size_t j = 0; j < m; ++j) {
            out[j] = body(j);
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex err_mutex;
    std::exception_ptr error;
    std::size_t error_index = m;

    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t j = next.fetch_add(1);
            if (j >= m) {
                return;
            }
            try {
                out[j] = body(j);
            } catch (...) {
                std::lock_guard lock(err_mutex);
                if (j < error_index) {
                    error_index = j;
                    error = std::current_exception();
                }
                failed.store(true);
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    pool.clear();
    if (error) {
        std::rethrow_exception(error);
    }
    return out;
}

[[noreturn]] void rethrow_with_sample(const NumericalError& e, std::size_t j) {
    const std::string msg = std::string(e.what()) + " (sample " + std::to_string(j) + ")";
    if (dynamic_cast<const QuadratureBreakdown*>(&e) != nullptr) {
        throw QuadratureBreakdown(msg, static_cast<std::ptrdiff_t>(j));
    }
    throw NumericalError(msg, static_cast<std::ptrdiff_t>(j));
}

std::int64_t round_half_away(double x) {
    return static_cast<std::int64_t>(std::llround(x));
}

void finalize(EstimateReport& r, const std::vector<SampleOutcome>& samples) {
    const std::size_t m = samples.size();
    r.per_sample.resize(m);
    r.per_sample_k_eff.resize(m);
    double sum = 0.0;
    std::size_t near_zero = 0;
    std::size_t fallbacks = 0;
    std::size_t breakdowns = 0;
    for (std::size_t j = 0; j < m; ++j) {
        const SampleOutcome& s = samples[j];
        r.per_sample[j] = s.value;
        r.per_sample_k_eff[j] = s.k_eff;
        sum += s.value;
        r.max_abs_imag = std::max(r.max_abs_imag, std::abs(s.imag));
        near_zero += s.near_zero ? 1 : 0;
        fallbacks += s.ga_fallback ? 1 : 0;
        breakdowns += s.breakdown ? 1 : 0;
        if (s.redrawn) {
            ++r.redraws;
            r.warnings.push_back("sample " + std::to_string(j) + " redrawn: " + s.redraw_reason);
        }
    }
    r.raw_mean = sum / static_cast<double>(m);
    r.estimate = round_half_away(r.raw_mean);
    if (m > 1) {
        double ss = 0.0;
        for (const double x : r.per_sample) {
            ss += (x - r.raw_mean) * (x - r.raw_mean);
        }
        const double sd = std::sqrt(ss / static_cast<double>(m - 1));
        r.std_error = sd / std::sqrt(static_cast<double>(m));
    }
    if (near_zero > 0) {
        r.warnings.push_back(std::to_string(near_zero) +
                             " sample(s) produced a node within the zero band; the shift may coincide with an "
                             "eigenvalue");
    }
    if (fallbacks > 0) {
        r.warnings.push_back(std::to_string(fallbacks) +
                             " sample(s) broke down early; the plain Gauss rule was used for them");
    }
    r.diagnostics["breakdowns"] = static_cast<double>(breakdowns);
}

void check_dimension(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got) {
        throw ContractViolation(std::string(what) + " dimension " + std::to_string(got) +
                                " does not match matrix dimension " + std::to_string(expected));
    }
}

}  // namespace

std::string_view to_string(Method m) {
    switch (m) {
        case Method::lanczos: return "lanczos";
        case Method::lanczos_ga: return "lanczos-ga";
        case Method::arnoldi: return "arnoldi";
        case Method::chebyshev: return "chebyshev";
    }
    return "?";
}

std::string_view to_string(PrecondKind p) {
    switch (p) {
        case PrecondKind::none: return "none";
        case PrecondKind::absdiag: return "absdiag";
        case PrecondKind::ildl: return "ildl";
        case PrecondKind::ldl_exact: return "ldl-exact";
    }
    return "?";
}

Method parse_method(std::string_view text) {
    if (text == "lanczos_ga") {
        return Method::lanczos_ga;
    }
    for (const Method m : {Method::lanczos, Method::lanczos_ga, Method::arnoldi, Method::chebyshev}) {
        if (text == to_string(m)) {
            return m;
        }
    }
    throw ContractViolation("unknown method '" + std::string(text) + "'");
}

PrecondKind parse_precond_kind(std::string_view text) {
    for (const PrecondKind p : {PrecondKind::none, PrecondKind::absdiag, PrecondKind::ildl, PrecondKind::ldl_exact}) {
        if (text == to_string(p)) {
            return p;
        }
    }
    throw ContractViolation("unknown preconditioner '" + std::string(text) + "'");
}

void CountConfig::validate() const {
    if (k < 1) {
        throw ContractViolation("k must be at least 1");
    }
    if (m < 1) {
        throw ContractViolation("m must be at least 1");
    }
    if (!std::isfinite(tau)) {
        throw ContractViolation("shift must be finite");
    }
    if (!(drop_tol >= 0.0) || !std::isfinite(drop_tol)) {
        throw ContractViolation("drop tolerance must be finite and non-negative");
    }
}

EstimateReport estimate_count_lanczos(const CsrMatrix& a, const CountConfig& cfg, const FactoredPreconditioner& p) {
    cfg.validate();
    if (cfg.method != Method::lanczos && cfg.method != Method::lanczos_ga) {
        throw ContractViolation("estimate_count_lanczos needs method lanczos or lanczos_ga");
    }
    const std::size_t n = a.size();
    check_dimension(n, p.dimension, "preconditioner");
    const bool use_ga = cfg.method == Method::lanczos_ga;

    auto body = [&](std::size_t j) {
        Vector t1(n);
        Vector t2(n);
        // C x = M (A - tau I) M^* x
        const LinearOperator c(n, [&](std::span<const double> x, std::span<double> y) {
            p.apply_m_adjoint(x, t1);
            a.multiply(t1, t2);
            for (std::size_t i = 0; i < n; ++i) {
                t2[i] -= cfg.tau * t1[i];
            }
            p.apply_m(t2, y);
        });
        const Vector v = sample_vector(cfg.seed, j, n, cfg.rng);
        SampleOutcome s;
        try {
            const LanczosDecomposition dec = lanczos(c, v, cfg.k);
            const GaussRule rule = use_ga ? ga_rule(dec) : gauss_rule(dec);
            const StepValue sv = apply_step_function(rule);
            s.value = sv.value;
            s.k_eff = dec.steps_completed;
            s.near_zero = sv.near_zero_node;
            s.ga_fallback = rule.fell_back_to_gauss;
            s.breakdown = dec.breakdown;
        } catch (const NumericalError& e) {
            rethrow_with_sample(e, j);
        }
        return s;
    };

    EstimateReport r;
    r.config = cfg;
    r.stream_seed = cfg.seed;
    finalize(r, run_samples(cfg.m, cfg.threads, body));
    if (p.boosted_pivots > 0) {
        r.warnings.push_back("preconditioner boosted " + std::to_string(p.boosted_pivots) +
                             " small pivot(s); the shift may be close to an eigenvalue");
    }
    r.diagnostics["boosted_pivots"] = static_cast<double>(p.boosted_pivots);
    return r;
}

EstimateReport estimate_count_arnoldi(const CsrMatrix& a, const CountConfig& cfg, const UnfactoredPreconditioner& t) {
    cfg.validate();
    if (cfg.method != Method::arnoldi) {
        throw ContractViolation("estimate_count_arnoldi needs method arnoldi");
    }
    const std::size_t n = a.size();
    check_dimension(n, t.dimension, "preconditioner");

    auto body = [&](std::size_t j) {
        Vector t1(n);
        // C x = T (A - tau I) x
        const LinearOperator c(n, [&](std::span<const double> x, std::span<double> y) {
            a.multiply(x, t1);
            for (std::size_t i = 0; i < n; ++i) {
                t1[i] -= cfg.tau * x[i];
            }
            t.apply_t(t1, y);
        });
        auto attempt = [&](const Vector& v, SampleOutcome& s) {
            const ArnoldiDecomposition dec = arnoldi(c, v, cfg.k);
            const ArnoldiRule rule = arnoldi_rule(dec);
            const StepValue sv = apply_step_function(rule);
            s.value = sv.value;
            s.imag = sv.imag;
            s.k_eff = dec.steps_completed;
            s.near_zero = sv.near_zero_node;
            s.breakdown = dec.breakdown;
        };
        SampleOutcome s;
        try {
            try {
                attempt(sample_vector(cfg.seed, j, n, cfg.rng), s);
            } catch (const QuadratureBreakdown& e) {
                s = SampleOutcome{};
                s.redrawn = true;
                s.redraw_reason = e.what();
                attempt(sample_vector(derive_seed(cfg.seed, kRedrawTag), j, n, cfg.rng), s);
            }
        } catch (const NumericalError& e) {
            rethrow_with_sample(e, j);
        }
        return s;
    };

    EstimateReport r;
    r.config = cfg;
    r.stream_seed = cfg.seed;
    finalize(r, run_samples(cfg.m, cfg.threads, body));
    r.diagnostics["max_abs_imag"] = r.max_abs_imag;
    return r;
}

namespace {

struct ChebyshevSetup {
    SpectralBounds bounds;
    ChebyshevMap map;
    Vector coeffs;
};

ChebyshevSetup chebyshev_setup(const CsrMatrix& a, double tau, std::size_t degree) {
    ChebyshevSetup s;
    s.bounds = estimate_spectral_bounds(a, tau);
    s.map = ChebyshevMap::from_bounds(s.bounds);
    s.coeffs = chebyshev_step_coefficients(s.map.step_position(), degree);
    return s;
}

}  // namespace

EstimateReport estimate_count_chebyshev(const CsrMatrix& a, const CountConfig& cfg, std::size_t degree) {
    cfg.validate();
    const std::size_t n = a.size();
    const ChebyshevSetup setup = chebyshev_setup(a, cfg.tau, degree);

    auto body = [&](std::size_t j) {
        const Vector v = sample_vector(cfg.seed, j, n, cfg.rng);
        const Vector mu = chebyshev_moments(a, cfg.tau, setup.map, v, degree);
        SampleOutcome s;
        for (std::size_t i = 0; i <= degree; ++i) {
            s.value += setup.coeffs[i] * mu[i];
        }
        s.k_eff = degree;
        return s;
    };

    EstimateReport r;
    r.config = cfg;
    r.config.method = Method::chebyshev;
    r.config.k = degree;
    r.stream_seed = cfg.seed;
    finalize(r, run_samples(cfg.m, cfg.threads, body));
    r.diagnostics["bound_lower"] = setup.bounds.lower;
    r.diagnostics["bound_upper"] = setup.bounds.upper;
    if (setup.bounds.lower >= 0.0 || setup.bounds.upper <= 0.0) {
        r.warnings.push_back("estimated spectral bounds do not straddle the shift");
    }
    return r;
}

ChebyshevScan chebyshev_degree_scan(const CsrMatrix& a, const CountConfig& cfg, std::size_t max_degree) {
    cfg.validate();
    const std::size_t n = a.size();
    const ChebyshevSetup setup = chebyshev_setup(a, cfg.tau, max_degree);

    std::vector<Vector> partial(cfg.m);
    auto body = [&](std::size_t j) {
        const Vector v = sample_vector(cfg.seed, j, n, cfg.rng);
        const Vector mu = chebyshev_moments(a, cfg.tau, setup.map, v, max_degree);
        Vector& sums = partial[j];
        sums.resize(max_degree + 1);
        double acc = 0.0;
        for (std::size_t i = 0; i <= max_degree; ++i) {
            acc += setup.coeffs[i] * mu[i];
            sums[i] = acc;
        }
        return SampleOutcome{};
    };
    run_samples(cfg.m, cfg.threads, body);

    ChebyshevScan scan;
    scan.bounds = setup.bounds;
    scan.raw_means.assign(max_degree + 1, 0.0);
    for (std::size_t j = 0; j < cfg.m; ++j) {
        for (std::size_t d = 0; d <= max_degree; ++d) {
            scan.raw_means[d] += partial[j][d];
        }
    }
    scan.estimates.resize(max_degree + 1);
    for (std::size_t d = 0; d <= max_degree; ++d) {
        scan.raw_means[d] /= static_cast<double>(cfg.m);
        scan.estimates[d] = round_half_away(scan.raw_means[d]);
    }
    return scan;
}

FactoredPreconditioner build_preconditioner(const CsrMatrix& a, double tau, PrecondKind kind, double drop_tol) {
    switch (kind) {
        case PrecondKind::none: return make_identity_preconditioner(a.size());
        case PrecondKind::absdiag: return make_abs_diagonal(a, tau);
        case PrecondKind::ildl: return make_abs_ildl(ildl_factorize(a, tau, drop_tol));
        case PrecondKind::ldl_exact: return make_abs_ildl(ildl_factorize(a, tau, 0.0));
    }
    throw ContractViolation("unknown preconditioner kind");
}

EstimateReport estimate_count(const CsrMatrix& a, const CountConfig& cfg, const FactoredPreconditioner& p) {
    switch (cfg.method) {
        case Method::lanczos:
        case Method::lanczos_ga: return estimate_count_lanczos(a, cfg, p);
        case Method::arnoldi: return estimate_count_arnoldi(a, cfg, as_unfactored(p));
        case Method::chebyshev: return estimate_count_chebyshev(a, cfg, cfg.k);
    }
    throw ContractViolation("unknown method");
}

EstimateReport estimate_count(const CsrMatrix& a, const CountConfig& cfg) {
    cfg.validate();
    if (cfg.method == Method::chebyshev) {
        return estimate_count_chebyshev(a, cfg, cfg.k);
    }
    return estimate_count(a, cfg, build_preconditioner(a, cfg.tau, cfg.precond, cfg.drop_tol));
}

IntervalReport estimate_interval_count(const CsrMatrix& a, double xi, double eta, const CountConfig& cfg,
                                       const FactoredPreconditioner& p_xi, const FactoredPreconditioner& p_eta) {
    if (!(xi < eta)) {
        throw ContractViolation("interval needs xi < eta");
    }
    IntervalReport out;
    out.xi = xi;
    out.eta = eta;

    CountConfig c_xi = cfg;
    c_xi.tau = xi;
    c_xi.seed = derive_seed(cfg.seed, 0);
    CountConfig c_eta = cfg;
    c_eta.tau = eta;
    c_eta.seed = derive_seed(cfg.seed, 1);

    out.at_xi = estimate_count(a, c_xi, p_xi);
    out.at_eta = estimate_count(a, c_eta, p_eta);
    // echo the user-facing seed; the stream seed keeps the derived one
    out.at_xi.config.seed = cfg.seed;
    out.at_eta.config.seed = cfg.seed;
    out.difference = out.at_eta.estimate - out.at_xi.estimate;
    if (out.difference < 0) {
        out.warnings.push_back("negative interval count " + std::to_string(out.difference) +
                               " (statistical noise); reported unclamped");
    }
    return out;
}

std::size_t exact_count(const CsrMatrix& a, double tau, std::optional<int> laplace_level, std::size_t dense_cap) {
    if (laplace_level) {
        const std::size_t side = (std::size_t{1} << *laplace_level) - 1;
        if (side * side != a.size()) {
            throw ContractViolation("matrix size does not match the Laplacian level");
        }
        return count_laplace_eigs_below(*laplace_level, tau);
    }
    return dense_inertia_oracle(a, tau, dense_cap);
}

}  // namespace spectra
