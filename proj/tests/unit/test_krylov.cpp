#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "spectra/error.hpp"
#include "spectra/krylov.hpp"

using namespace spectra;
using Catch::Matchers::WithinAbs;

namespace {

Eigen::MatrixXd basis_matrix(const KrylovBasis& q) {
    Eigen::MatrixXd out(q.rows(), q.cols());
    for (std::size_t j = 0; j < q.cols(); ++j) {
        for (std::size_t i = 0; i < q.rows(); ++i) {
            out(i, j) = q.col(j)[i];
        }
    }
    return out;
}

double orthogonality_defect(const Eigen::MatrixXd& q) {
    return (q.transpose() * q - Eigen::MatrixXd::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd lanczos_j(const LanczosDecomposition& d) {
    const std::size_t k = d.steps_completed;
    const std::size_t rows = d.basis.cols();
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(rows, k);
    for (std::size_t i = 0; i < k; ++i) {
        j(i, i) = d.alphas[i];
        if (i + 1 < rows) {
            j(i + 1, i) = d.betas[i];
        }
        if (i + 1 < k) {
            j(i, i + 1) = d.betas[i];
        }
    }
    return j;
}

Eigen::MatrixXd diag2(double a, double b) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 2);
    c(0, 0) = a;
    c(1, 1) = b;
    return c;
}

}  // namespace

TEST_CASE("lanczos stops on an eigenvector", "[lanczos]") {
    const LanczosDecomposition d = lanczos(oracle::dense_operator(diag2(-1, 1)), Vector{1.0, 0.0}, 2);
    CHECK(d.steps_completed == 1);
    CHECK(d.breakdown);
    CHECK(d.alphas[0] == -1.0);
}

TEST_CASE("lanczos two-step hand example", "[lanczos]") {
    const double r = 1.0 / std::sqrt(2.0);
    const LanczosDecomposition d = lanczos(oracle::dense_operator(diag2(-1, 1)), Vector{r, r}, 2);
    REQUIRE(d.steps_completed == 2);
    CHECK_THAT(d.alphas[0], WithinAbs(0.0, 1e-15));
    CHECK_THAT(d.betas[0], WithinAbs(1.0, 1e-15));
    CHECK_THAT(d.alphas[1], WithinAbs(0.0, 1e-15));
    const Vector ritz = tridiag_eigenvalues(d.section());
    CHECK_THAT(ritz[0], WithinAbs(-1.0, 1e-14));
    CHECK_THAT(ritz[1], WithinAbs(1.0, 1e-14));
}

TEST_CASE("full-dimension lanczos reproduces the spectrum", "[lanczos]") {
    oracle::Rng rng(41);
    const Eigen::MatrixXd c = oracle::random_symmetric(20, rng);
    const LanczosDecomposition d = lanczos(oracle::dense_operator(c), oracle::to_std(oracle::gaussian_vector(20, rng)), 20);
    REQUIRE(d.steps_completed == 20);
    const Vector ritz = tridiag_eigenvalues(d.section());
    const std::vector<double> ref = oracle::sym_eigenvalues(c);
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK_THAT(ritz[i], WithinAbs(ref[i], 1e-8));
    }
}

TEST_CASE("lanczos invariants on random operators", "[lanczos]") {
    oracle::Rng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 20 + 9 * trial;
        const std::size_t k = 5 + trial * 2 % 36;
        const Eigen::MatrixXd c = oracle::random_symmetric(n, rng);
        const LanczosDecomposition d = lanczos(oracle::dense_operator(c), oracle::to_std(oracle::gaussian_vector(n, rng)), k);
        REQUIRE(d.steps_completed == k);
        CHECK_FALSE(d.breakdown);
        const Eigen::MatrixXd q = basis_matrix(d.basis);
        REQUIRE(q.cols() == static_cast<Eigen::Index>(k + 1));
        CHECK(orthogonality_defect(q) <= 1e-10);
        const Eigen::MatrixXd j = lanczos_j(d);
        const double resid = (c * q.leftCols(k) - q * j).norm();
        CHECK(resid <= 1e-8 * j.norm() * q.norm());
        for (const double b : d.betas) {
            CHECK(b > 0.0);
        }
    }
}

TEST_CASE("lanczos basis is shift invariant", "[lanczos]") {
    oracle::Rng rng(47);
    const Eigen::MatrixXd c = oracle::random_symmetric(50, rng);
    const Vector v = oracle::to_std(oracle::gaussian_vector(50, rng));
    const double sigma = 3.25;
    const LanczosDecomposition a = lanczos(oracle::dense_operator(c), v, 12);
    const LanczosDecomposition b =
        lanczos(oracle::dense_operator(c + sigma * Eigen::MatrixXd::Identity(50, 50)), v, 12);
    const Eigen::MatrixXd qa = basis_matrix(a.basis);
    const Eigen::MatrixXd qb = basis_matrix(b.basis);
    CHECK((qa - qb).cwiseAbs().maxCoeff() <= 1e-10);
    for (std::size_t i = 0; i < 12; ++i) {
        CHECK_THAT(b.alphas[i] - a.alphas[i], WithinAbs(sigma, 1e-10));
    }
}

TEST_CASE("lanczos contract checks", "[lanczos]") {
    const LinearOperator op = oracle::dense_operator(diag2(-1, 1));
    CHECK_THROWS_AS(lanczos(op, Vector{0.0, 0.0}, 2), ContractViolation);
    CHECK_THROWS_AS(lanczos(op, Vector{1.0, 0.0}, 0), ContractViolation);
    CHECK_THROWS_AS(lanczos(op, Vector{1.0}, 1), ContractViolation);
    const LinearOperator nan_op(2, [](std::span<const double>, std::span<double> y) {
        y[0] = std::nan("");
        y[1] = 0.0;
    });
    CHECK_THROWS_AS(lanczos(nan_op, Vector{1.0, 1.0}, 2), NumericalError);
}

TEST_CASE("arnoldi reduces to lanczos on symmetric operators", "[arnoldi]") {
    oracle::Rng rng(53);
    const Eigen::MatrixXd c = oracle::random_symmetric(40, rng);
    const Vector v = oracle::to_std(oracle::gaussian_vector(40, rng));
    const ArnoldiDecomposition a = arnoldi(oracle::dense_operator(c), v, 10);
    const LanczosDecomposition l = lanczos(oracle::dense_operator(c), v, 10);
    const Eigen::MatrixXd h = oracle::to_eigen(a.h);
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        for (Eigen::Index j = 0; j < h.cols(); ++j) {
            if (i == j) {
                CHECK_THAT(h(i, j), WithinAbs(l.alphas[j], 1e-8));
            } else if (i == j + 1 || j == i + 1) {
                CHECK_THAT(h(i, j), WithinAbs(l.betas[std::min(i, j)], 1e-8));
            } else {
                CHECK(std::abs(h(i, j)) <= 1e-8);
            }
        }
    }
}

TEST_CASE("arnoldi on a rotation", "[arnoldi]") {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 2);
    c(0, 1) = -1.0;
    c(1, 0) = 1.0;
    const ArnoldiDecomposition a = arnoldi(oracle::dense_operator(c), Vector{1.0, 0.0}, 2);
    REQUIRE(a.steps_completed == 2);
    const DenseMatrix h = a.section();
    CHECK_THAT(h(0, 0), WithinAbs(0.0, 1e-15));
    CHECK_THAT(h(0, 1), WithinAbs(-1.0, 1e-15));
    CHECK_THAT(h(1, 0), WithinAbs(1.0, 1e-15));
    CHECK_THAT(h(1, 1), WithinAbs(0.0, 1e-15));
}

TEST_CASE("arnoldi stops on an eigenvector", "[arnoldi]") {
    oracle::Rng rng(59);
    // e_1 is an eigenvector once the first column is replaced by 2.5 e_1.
    Eigen::MatrixXd m = oracle::random_nonsingular(8, rng);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(8);
    x(0) = 1.0;
    m.col(0) = 2.5 * x;
    const ArnoldiDecomposition a = arnoldi(oracle::dense_operator(m), oracle::to_std(x), 4);
    CHECK(a.steps_completed == 1);
    CHECK(a.breakdown);
    CHECK_THAT(a.h(0, 0), WithinAbs(2.5, 1e-14));
}

TEST_CASE("arnoldi invariants on nonsymmetric operators", "[arnoldi]") {
    oracle::Rng rng(61);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t n = 30 + 11 * trial;
        const std::size_t k = 4 + trial * 3 % 37;
        const Eigen::MatrixXd c = oracle::random_nonsingular(n, rng);
        const ArnoldiDecomposition a = arnoldi(oracle::dense_operator(c), oracle::to_std(oracle::gaussian_vector(n, rng)), k);
        REQUIRE(a.steps_completed == k);
        const Eigen::MatrixXd q = basis_matrix(a.basis);
        CHECK(orthogonality_defect(q) <= 1e-10);
        const Eigen::MatrixXd h = oracle::to_eigen(a.h);
        CHECK((c * q.leftCols(k) - q * h).norm() <= 1e-8 * c.norm());
    }
}

TEST_CASE("krylov_poly_apply exactness", "[poly]") {
    oracle::Rng rng(67);
    const Eigen::MatrixXd c = oracle::random_symmetric(30, rng);
    const Eigen::VectorXd v = oracle::gaussian_vector(30, rng);
    const LanczosDecomposition d = lanczos(oracle::dense_operator(c), oracle::to_std(v), 6);

    const Eigen::VectorXd id = oracle::to_eigen(krylov_poly_apply(d, [](double x) { return x; }));
    CHECK((id - c * v).norm() <= 1e-10 * (c * v).norm());
    const Eigen::VectorXd one = oracle::to_eigen(krylov_poly_apply(d, [](double) { return 1.0; }));
    CHECK((one - v).norm() <= 1e-10 * v.norm());
    const Eigen::VectorXd sq = oracle::to_eigen(krylov_poly_apply(d, [](double x) { return x * x; }));
    CHECK((sq - c * c * v).norm() <= 1e-9 * (c * c * v).norm());
}

TEST_CASE("krylov_poly_apply reproduces random polynomials up to degree k-1", "[poly]") {
    oracle::Rng rng(71);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 40;
        const std::size_t k = 2 + trial % 8;
        const Eigen::MatrixXd c = oracle::random_symmetric(n, rng);
        const Eigen::VectorXd v = oracle::gaussian_vector(n, rng);
        const LanczosDecomposition d = lanczos(oracle::dense_operator(c), oracle::to_std(v), k);
        std::vector<double> coef(k);
        for (auto& x : coef) {
            x = g(rng);
        }
        auto p = [&](double x) {
            double acc = 0.0;
            for (std::size_t i = coef.size(); i-- > 0;) {
                acc = acc * x + coef[i];
            }
            return acc;
        };
        Eigen::VectorXd ref = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd power = v;
        for (std::size_t i = 0; i < k; ++i) {
            ref += coef[i] * power;
            power = c * power;
        }
        const Eigen::VectorXd got = oracle::to_eigen(krylov_poly_apply(d, p));
        CHECK((got - ref).norm() <= 1e-9 * ref.norm());
    }
}
