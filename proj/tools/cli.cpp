#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spectra/error.hpp"
#include "spectra/estimators.hpp"
#include "spectra/laplace.hpp"
#include "spectra/matrix_market.hpp"

namespace spectra::cli {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr const char* kThreadsEnv = "SPECTRA_COUNT_THREADS";

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t x) {
    std::ostringstream s;
    s << std::hex;
    s.width(16);
    s.fill('0');
    s << x;
    return s.str();
}

struct Options {
    std::string matrix;
    int gen_laplace = 0;
    std::optional<double> tau;
    std::optional<double> xi;
    std::optional<double> eta;
    std::string method = "lanczos";
    std::string precond = "none";
    std::string rng = "gaussian";
    double drop_tol = 1e-3;
    std::size_t k = 10;
    std::size_t m = 50;
    std::uint64_t seed = 0;
    std::optional<unsigned> threads;
    std::size_t oracle_cap = kDefaultDenseOracleCap;
    std::string over;
    std::vector<std::string> values;
};

struct Input {
    CsrMatrix a;
    std::optional<int> level;
    json provenance;
    double load_ms = 0.0;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Input load_input(const Options& o) {
    const auto t0 = Clock::now();
    Input in;
    if (o.gen_laplace != 0) {
        in.a = gen_laplace_2d(o.gen_laplace);
        in.level = o.gen_laplace;
        in.provenance = {{"kind", "generator"}, {"generator", "laplace_2d"}, {"level", o.gen_laplace}};
    } else if (!o.matrix.empty()) {
        std::ifstream file(o.matrix, std::ios::binary);
        if (!file) {
            throw ParseError("cannot open '" + o.matrix + "'", 0);
        }
        const std::string bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
        std::istringstream stream(bytes);
        in.a = read_matrix_market(stream);
        in.provenance = {{"kind", "file"}, {"path", o.matrix}, {"fnv1a64", hex64(fnv1a64(bytes))}};
    } else {
        throw UsageError("one of --matrix or --gen-laplace is required");
    }
    in.provenance["n"] = in.a.size();
    in.provenance["nnz"] = in.a.nnz();
    in.load_ms = ms_since(t0);
    return in;
}

unsigned resolve_threads(const Options& o) {
    if (o.threads) {
        return *o.threads;
    }
    if (const char* env = std::getenv(kThreadsEnv); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (*end != '\0' || v > 4096) {
            throw UsageError(std::string(kThreadsEnv) + " must be a non-negative integer, got '" + env + "'");
        }
        return static_cast<unsigned>(v);
    }
    return 0;
}

CountConfig make_config(const Options& o) {
    CountConfig c;
    c.k = o.k;
    c.m = o.m;
    c.seed = o.seed;
    c.method = parse_method(o.method);
    c.rng = parse_rng_kind(o.rng);
    c.precond = parse_precond_kind(o.precond);
    c.drop_tol = o.drop_tol;
    c.threads = resolve_threads(o);
    if (o.tau) {
        c.tau = *o.tau;
    }
    return c;
}

json config_json(const CountConfig& c, const Options& o) {
    json j = {{"k", c.k},
              {"m", c.m},
              {"seed", c.seed},
              {"method", to_string(c.method)},
              {"rng", to_string(c.rng)},
              {"precond", to_string(c.precond)},
              {"drop_tol", c.drop_tol}};
    if (o.xi) {
        j["xi"] = *o.xi;
        j["eta"] = *o.eta;
    } else {
        j["tau"] = c.tau;
    }
    return j;
}

json report_json(const EstimateReport& r) {
    json j = {{"estimate", r.estimate},
              {"raw_mean", r.raw_mean},
              {"std_error", r.std_error},
              {"per_sample", r.per_sample},
              {"per_sample_k_eff", r.per_sample_k_eff},
              {"warnings", r.warnings},
              {"redraws", r.redraws},
              {"stream_seed", r.stream_seed},
              {"tau", r.config.tau}};
    json diag = json::object();
    for (const auto& [key, value] : r.diagnostics) {
        diag[key] = value;
    }
    if (r.config.method == Method::arnoldi) {
        diag["max_abs_imag"] = r.max_abs_imag;
    }
    j["diagnostics"] = diag;
    return j;
}

json precond_json(const FactoredPreconditioner& p, double ms) {
    return {{"name", p.name}, {"boosted_pivots", p.boosted_pivots}, {"factorize_ms", ms}};
}

json base_manifest(const std::string& command, const std::vector<std::string>& argv, const Input& in) {
    return {{"tool", "spectra-count"},
            {"version", SPECTRA_VERSION},
            {"command", command},
            {"argv", argv},
            {"input", in.provenance}};
}

json run_count(const Options& o, const Input& in, const std::vector<std::string>& argv) {
    const auto t_total = Clock::now();
    const CountConfig cfg = make_config(o);
    cfg.validate();
    const bool chebyshev = cfg.method == Method::chebyshev;
    json manifest = base_manifest("count", argv, in);
    manifest["config"] = config_json(cfg, o);
    manifest["threads"] = cfg.threads;
    json timings = {{"load", in.load_ms}};
    json out;

    std::vector<std::string> extra_warnings;
    if (chebyshev && cfg.precond != PrecondKind::none) {
        extra_warnings.push_back("the chebyshev baseline is unpreconditioned; --precond " +
                                 std::string(to_string(cfg.precond)) + " was ignored");
    }

    if (o.xi) {
        auto t0 = Clock::now();
        const FactoredPreconditioner p_xi = chebyshev ? make_identity_preconditioner(in.a.size())
                                                      : build_preconditioner(in.a, *o.xi, cfg.precond, cfg.drop_tol);
        const double f_xi = ms_since(t0);
        t0 = Clock::now();
        const FactoredPreconditioner p_eta = chebyshev
                                                 ? make_identity_preconditioner(in.a.size())
                                                 : build_preconditioner(in.a, *o.eta, cfg.precond, cfg.drop_tol);
        const double f_eta = ms_since(t0);
        t0 = Clock::now();
        const IntervalReport r = estimate_interval_count(in.a, *o.xi, *o.eta, cfg, p_xi, p_eta);
        timings["sample_loop"] = ms_since(t0);
        timings["factorize"] = f_xi + f_eta;

        // Paired differences of the two independent streams.
        std::vector<double> diff(cfg.m);
        for (std::size_t j = 0; j < cfg.m; ++j) {
            diff[j] = r.at_eta.per_sample[j] - r.at_xi.per_sample[j];
        }
        double mean = 0.0;
        for (const double x : diff) {
            mean += x;
        }
        mean /= static_cast<double>(cfg.m);
        double se = 0.0;
        if (cfg.m > 1) {
            double ss = 0.0;
            for (const double x : diff) {
                ss += (x - mean) * (x - mean);
            }
            se = std::sqrt(ss / static_cast<double>(cfg.m - 1)) / std::sqrt(static_cast<double>(cfg.m));
        }
        std::vector<std::size_t> k_eff(cfg.m);
        for (std::size_t j = 0; j < cfg.m; ++j) {
            k_eff[j] = std::max(r.at_xi.per_sample_k_eff[j], r.at_eta.per_sample_k_eff[j]);
        }
        std::vector<std::string> warnings = extra_warnings;
        warnings.insert(warnings.end(), r.warnings.begin(), r.warnings.end());
        for (const auto* side : {&r.at_xi, &r.at_eta}) {
            for (const std::string& w : side->warnings) {
                warnings.push_back((side == &r.at_xi ? "xi: " : "eta: ") + w);
            }
        }
        out = {{"estimate", r.difference},
               {"raw_mean", mean},
               {"std_error", se},
               {"per_sample", diff},
               {"per_sample_k_eff", k_eff},
               {"warnings", warnings},
               {"interval", {{"xi", r.xi}, {"eta", r.eta}}},
               {"at_xi", report_json(r.at_xi)},
               {"at_eta", report_json(r.at_eta)}};
        manifest["preconditioner"] = {{"xi", precond_json(p_xi, f_xi)}, {"eta", precond_json(p_eta, f_eta)}};
    } else {
        auto t0 = Clock::now();
        const FactoredPreconditioner p = chebyshev ? make_identity_preconditioner(in.a.size())
                                                   : build_preconditioner(in.a, cfg.tau, cfg.precond, cfg.drop_tol);
        const double f_ms = ms_since(t0);
        timings["factorize"] = f_ms;
        t0 = Clock::now();
        EstimateReport r = estimate_count(in.a, cfg, p);
        timings["sample_loop"] = ms_since(t0);
        r.warnings.insert(r.warnings.begin(), extra_warnings.begin(), extra_warnings.end());
        out = report_json(r);
        manifest["preconditioner"] = precond_json(p, f_ms);
    }
    timings["total"] = ms_since(t_total) + in.load_ms;
    manifest["timings_ms"] = timings;
    out["manifest"] = manifest;
    return out;
}

json error_json(const std::string& kind, const std::string& message, std::optional<std::ptrdiff_t> index = {}) {
    json e = {{"kind", kind}, {"message", message}};
    if (index && *index >= 0) {
        e["index"] = *index;
    }
    return {{"error", e}};
}

// Maps the library's exception types to (exit code, error document).
template <class F>
std::pair<int, json> guarded(F&& f) {
    try {
        return {kOk, f()};
    } catch (const UsageError& e) {
        return {kUsage, error_json("usage", e.what())};
    } catch (const ParseError& e) {
        return {kUsage, error_json("input", e.what(), static_cast<std::ptrdiff_t>(e.line()))};
    } catch (const ContractViolation& e) {
        return {kUsage, error_json("usage", e.what())};
    } catch (const OracleRefusal& e) {
        return {kOracleRefusal, error_json("oracle_refusal", e.what())};
    } catch (const NumericalError& e) {
        return {kNumerical, error_json("numerical", e.what(), e.index())};
    } catch (const std::exception& e) {
        return {kNumerical, error_json("numerical", e.what())};
    }
}

void add_input_options(CLI::App* cmd, Options& o) {
    auto* mtx = cmd->add_option("--matrix", o.matrix, "Matrix Market file (real, symmetric or general)");
    auto* gen = cmd->add_option("--gen-laplace", o.gen_laplace, "Generate the 2D Dirichlet Laplacian of this level")
                    ->check(CLI::Range(2, 15));
    mtx->excludes(gen);
}

void add_shift_options(CLI::App* cmd, Options& o) {
    auto* tau = cmd->add_option("--tau", o.tau, "Shift: count eigenvalues below tau");
    auto* xi = cmd->add_option("--xi", o.xi, "Interval lower end");
    auto* eta = cmd->add_option("--eta", o.eta, "Interval upper end");
    tau->excludes(xi)->excludes(eta);
    xi->needs(eta);
    eta->needs(xi);
}

void add_estimator_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--method", o.method, "Estimator")
        ->check(CLI::IsMember({"lanczos", "lanczos-ga", "lanczos_ga", "arnoldi", "chebyshev"}));
    cmd->add_option("--precond", o.precond, "Preconditioner")
        ->check(CLI::IsMember({"none", "absdiag", "ildl", "ldl-exact"}));
    cmd->add_option("--drop-tol", o.drop_tol, "ILDL drop tolerance")->check(CLI::NonNegativeNumber);
    cmd->add_option("--k", o.k, "Krylov steps (polynomial degree for chebyshev)")->check(CLI::PositiveNumber);
    cmd->add_option("--m", o.m, "Number of random samples")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "64-bit seed");
    cmd->add_option("--rng", o.rng, "Sample distribution")->check(CLI::IsMember({"gaussian", "rademacher"}));
    cmd->add_option("--threads", o.threads, "Worker cap for the sample loop (0 = all cores)");
}

std::string dump(const json& j) {
    return j.dump(2) + "\n";
}

}  // namespace

Outcome run(const std::vector<std::string>& args, std::ostream& err) {
    Options o;
    CLI::App app("Stochastic eigenvalue counts for sparse symmetric matrices", "spectra-count");
    app.set_version_flag("--version", std::string(SPECTRA_VERSION));
    app.require_subcommand(1);

    auto* count = app.add_subcommand("count", "Estimate the number of eigenvalues below tau or inside [xi, eta)");
    add_input_options(count, o);
    add_shift_options(count, o);
    add_estimator_options(count, o);

    auto* exact = app.add_subcommand("exact", "Exact count from the analytic or dense oracle");
    add_input_options(exact, o);
    exact->add_option("--tau", o.tau, "Shift")->required();
    exact->add_option("--oracle-cap", o.oracle_cap, "Largest n the dense oracle accepts");

    auto* sweep = app.add_subcommand("sweep", "Run count over a list of k values or mesh levels");
    add_input_options(sweep, o);
    add_shift_options(sweep, o);
    add_estimator_options(sweep, o);
    sweep->add_option("--over", o.over, "Swept parameter")->required()->check(CLI::IsMember({"k", "mesh"}));
    sweep->add_option("--values", o.values, "Comma-separated values")->required()->delimiter(',');

    std::vector<std::string> argv_store{"spectra-count"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (std::string& s : argv_store) {
        argv.push_back(s.data());
    }

    std::ostringstream help;
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        app.exit(e, help, err);
        return {kOk, help.str()};
    } catch (const CLI::ParseError& e) {
        app.exit(e, help, err);
        return {kUsage, dump(error_json("usage", e.what()))};
    }

    std::pair<int, json> result;
    if (count->parsed()) {
        result = guarded([&] {
            if (!o.tau && !o.xi) {
                throw UsageError("count needs --tau or --xi/--eta");
            }
            return run_count(o, load_input(o), args);
        });
    } else if (exact->parsed()) {
        result = guarded([&] {
            const Input in = load_input(o);
            const std::size_t c = exact_count(in.a, *o.tau, in.level, o.oracle_cap);
            json manifest = base_manifest("exact", args, in);
            manifest["config"] = {{"tau", *o.tau}, {"oracle_cap", o.oracle_cap}};
            return json{{"count", c},
                        {"oracle", in.level ? "laplace-analytic" : "dense-sturm"},
                        {"manifest", manifest}};
        });
    } else {
        result = guarded([&] {
            if (o.values.empty()) {
                throw UsageError("--values must list at least one value");
            }
            if (!o.tau && !o.xi) {
                throw UsageError("sweep needs --tau or --xi/--eta");
            }
            if (o.over == "mesh" && !o.matrix.empty()) {
                throw UsageError("--over mesh generates Laplacians and cannot be combined with --matrix");
            }
            std::vector<long long> values;
            for (const std::string& v : o.values) {
                std::size_t used = 0;
                long long x = 0;
                try {
                    x = std::stoll(v, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != v.size() || x < 1) {
                    throw UsageError("--values entry '" + v + "' is not a positive integer");
                }
                values.push_back(x);
            }
            json points = json::array();
            std::optional<Input> shared;
            if (o.over == "k") {
                shared = load_input(o);
            }
            for (const long long v : values) {
                Options point = o;
                json tag = {{"over", o.over}, {"value", v}};
                auto [code, doc] = guarded([&] {
                    if (o.over == "k") {
                        point.k = static_cast<std::size_t>(v);
                        return run_count(point, *shared, args);
                    }
                    point.gen_laplace = static_cast<int>(v);
                    if (v < 2 || v > 15) {
                        throw UsageError("mesh level must lie in [2, 15]");
                    }
                    return run_count(point, load_input(point), args);
                });
                doc["point"] = tag;
                doc["exit_code"] = code;
                points.push_back(doc);
            }
            return points;
        });
    }
    return {result.first, dump(result.second)};
}

int main_entry(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    const Outcome out = run(args, std::cerr);
    std::cout << out.json;
    if (out.exit_code != kOk) {
        // Human-readable echo of the error document.
        try {
            const auto doc = json::parse(out.json);
            if (doc.is_object() && doc.contains("error")) {
                std::cerr << "spectra-count: " << doc["error"]["message"].get<std::string>() << "\n";
            }
        } catch (const json::exception&) {
        }
    }
    return out.exit_code;
}

}  // namespace spectra::cli
