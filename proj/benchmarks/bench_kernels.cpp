#include <benchmark/benchmark.h>

#include "spectra/dense_eig.hpp"
#include "spectra/estimators.hpp"
#include "spectra/krylov.hpp"
#include "spectra/laplace.hpp"
#include "spectra/linear_operator.hpp"
#include "spectra/precond.hpp"
#include "spectra/sampling.hpp"

using namespace spectra;

static void BM_Matvec(benchmark::State& state) {
    const CsrMatrix a = gen_laplace_2d(static_cast<int>(state.range(0)));
    const Vector x = sample_vector(1, 0, a.size(), RngKind::gaussian);
    Vector y(a.size());
    for (auto _ : state) {
        a.multiply(x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.nnz()));
}
BENCHMARK(BM_Matvec)->Arg(5)->Arg(7)->Arg(9);

static void BM_IldlFactorize(benchmark::State& state) {
    const CsrMatrix a = gen_laplace_2d(static_cast<int>(state.range(0)));
    const double drop = state.range(1) == 0 ? 0.0 : 1e-5;
    for (auto _ : state) {
        IldlFactors f = ildl_factorize(a, 3000.0, drop);
        benchmark::DoNotOptimize(f.values.data());
    }
}
BENCHMARK(BM_IldlFactorize)->Args({6, 1})->Args({7, 1})->Args({7, 0})->Unit(benchmark::kMillisecond);

static void BM_LanczosSample(benchmark::State& state) {
    const CsrMatrix a = gen_laplace_2d(7);
    const LinearOperator c = ShiftedOperator(a, 3000.0).as_operator();
    const Vector v = sample_vector(1, 0, a.size(), RngKind::gaussian);
    const auto k = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        LanczosDecomposition dec = lanczos(c, v, k);
        benchmark::DoNotOptimize(dec.alphas.data());
    }
}
BENCHMARK(BM_LanczosSample)->Arg(20)->Arg(134)->Unit(benchmark::kMillisecond);

static void BM_TridiagEig(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    TridiagonalSym t;
    t.diag.assign(k, 2.0);
    t.offdiag.assign(k - 1, -1.0);
    for (auto _ : state) {
        EigenPairsSym e = tridiag_eig(t);
        benchmark::DoNotOptimize(e.values.data());
    }
}
BENCHMARK(BM_TridiagEig)->Arg(20)->Arg(134)->Arg(400);

static void BM_EstimatePreconditioned(benchmark::State& state) {
    const CsrMatrix a = gen_laplace_2d(7);
    CountConfig c;
    c.tau = 3000.0;
    c.k = 8;
    c.m = 10;
    c.precond = PrecondKind::ildl;
    c.drop_tol = 1e-5;
    c.threads = 1;
    const FactoredPreconditioner p = build_preconditioner(a, c.tau, c.precond, c.drop_tol);
    for (auto _ : state) {
        EstimateReport r = estimate_count(a, c, p);
        benchmark::DoNotOptimize(r.raw_mean);
    }
}
BENCHMARK(BM_EstimatePreconditioned)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
