#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spectra/chebyshev.hpp"
#include "spectra/csr_matrix.hpp"
#include "spectra/dense_eig.hpp"
#include "spectra/precond.hpp"
#include "spectra/sampling.hpp"

namespace spectra {

enum class Method { lanczos, lanczos_ga, arnoldi, chebyshev };
enum class PrecondKind { none, absdiag, ildl, ldl_exact };

std::string_view to_string(Method m);
std::string_view to_string(PrecondKind p);
Method parse_method(std::string_view text);
PrecondKind parse_precond_kind(std::string_view text);

struct CountConfig {
    double tau = 0.0;
    std::size_t k = 10;  ///< Krylov steps, or polynomial degree for the Chebyshev baseline
    std::size_t m = 50;  ///< number of random samples
    std::uint64_t seed = 0;
    Method method = Method::lanczos;
    RngKind rng = RngKind::gaussian;
    PrecondKind precond = PrecondKind::none;
    double drop_tol = 1e-3;
    /// Worker cap for the sample loop; 0 means available parallelism. Never affects results.
    unsigned threads = 0;

    void validate() const;
};

struct EstimateReport {
    std::int64_t estimate = 0;  ///< raw_mean rounded half away from zero
    double raw_mean = 0.0;
    std::vector<double> per_sample;
    double std_error = 0.0;  ///< sample standard deviation / sqrt(m)
    std::vector<std::size_t> per_sample_k_eff;
    std::vector<std::string> warnings;
    CountConfig config;
    std::uint64_t stream_seed = 0;  ///< seed of the per-sample streams actually drawn
    std::size_t redraws = 0;
    double max_abs_imag = 0.0;
    std::map<std::string, double> diagnostics;
};

/// Preconditioned Lanczos estimator (Gauss, or GA when cfg.method is lanczos_ga).
EstimateReport estimate_count_lanczos(const CsrMatrix& a, const CountConfig& cfg, const FactoredPreconditioner& p);

/// Preconditioned Arnoldi estimator on C = T (A - tau I).
EstimateReport estimate_count_arnoldi(const CsrMatrix& a, const CountConfig& cfg, const UnfactoredPreconditioner& t);

/// Unpreconditioned Chebyshev-expansion baseline of the given degree.
EstimateReport estimate_count_chebyshev(const CsrMatrix& a, const CountConfig& cfg, std::size_t degree);

struct ChebyshevScan {
    SpectralBounds bounds;
    std::vector<double> raw_means;   ///< index d: truncation at degree d
    std::vector<std::int64_t> estimates;
};

/// Runs the Chebyshev baseline once up to max_degree and returns the sample
/// mean at every truncation degree (same samples for all degrees).
ChebyshevScan chebyshev_degree_scan(const CsrMatrix& a, const CountConfig& cfg, std::size_t max_degree);

/// Builds the HPD preconditioner named by `kind` for A - tau I.
FactoredPreconditioner build_preconditioner(const CsrMatrix& a, double tau, PrecondKind kind, double drop_tol);

/// Dispatches on cfg.method, building cfg.precond internally.
EstimateReport estimate_count(const CsrMatrix& a, const CountConfig& cfg);

/// Same, with a caller-supplied preconditioner (ignored by the Chebyshev baseline).
EstimateReport estimate_count(const CsrMatrix& a, const CountConfig& cfg, const FactoredPreconditioner& p);

struct IntervalReport {
    double xi = 0.0;
    double eta = 0.0;
    EstimateReport at_xi;
    EstimateReport at_eta;
    std::int64_t difference = 0;  ///< estimate(eta) - estimate(xi), never clamped
    std::vector<std::string> warnings;
};

/// Eigenvalue count in [xi, eta) as the difference of two shifted counts.
/// The two runs draw from independent streams derived from (seed, 0) and (seed, 1).
IntervalReport estimate_interval_count(const CsrMatrix& a, double xi, double eta, const CountConfig& cfg,
                                       const FactoredPreconditioner& p_xi, const FactoredPreconditioner& p_eta);

/// Exact n_-(A - tau I): the closed form when the matrix is a generated
/// Laplacian of the given level, otherwise the dense oracle (refuses above cap).
std::size_t exact_count(const CsrMatrix& a, double tau, std::optional<int> laplace_level = std::nullopt,
                        std::size_t dense_cap = kDefaultDenseOracleCap);

}  // namespace spectra
