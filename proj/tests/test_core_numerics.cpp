#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "tsecon/distributions.hpp"
#include "tsecon/linalg.hpp"
#include "tsecon/parallel.hpp"

using namespace tsecon;

namespace {

Matrix col(std::initializer_list<double> v) {
    Matrix m(static_cast<Eigen::Index>(v.size()), 1);
    Eigen::Index i = 0;
    for (double x : v) m(i++, 0) = x;
    return m;
}

Vector vec(std::initializer_list<double> v) { return col(v).col(0); }

Matrix random_design(std::mt19937_64& rng, Eigen::Index T, Eigen::Index k) {
    std::normal_distribution<double> N;
    Matrix X(T, k);
    for (Eigen::Index i = 0; i < T; ++i) {
        X(i, 0) = 1.0;
        for (Eigen::Index j = 1; j < k; ++j) X(i, j) = N(rng);
    }
    return X;
}

}  // namespace

TEST_CASE("ols exact fit through the origin") {
    const auto f = ols_fit(vec({1, 2, 3}), col({1, 2, 3}));
    CHECK(f.coefficients(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.ssr < 1e-24);
}

TEST_CASE("ols on an intercept returns the mean") {
    const auto f = ols_fit(vec({2, 2, 2}), col({1, 1, 1}));
    CHECK(f.coefficients(0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("ols matches the hand-solved 2x2 normal equations") {
    // n=4, sum x=6, sum x^2=14, sum y=9, sum xy=18: slope 18/20, intercept (9-5.4)/4
    Matrix X(4, 2);
    X << 1, 0, 1, 1, 1, 2, 1, 3;
    const auto f = ols_fit(vec({1, 2, 2, 4}), X);
    CHECK(f.coefficients(0) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(f.coefficients(1) == doctest::Approx(0.9).epsilon(1e-12));
    // residuals (0.1, 0.2, -0.7, 0.4)
    CHECK(f.ssr == doctest::Approx(0.01 + 0.04 + 0.49 + 0.16).epsilon(1e-12));
    CHECK(f.sigma2 == doctest::Approx(0.70 / 2.0).epsilon(1e-12));
}

TEST_CASE("ols invariants on random designs") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix X = random_design(rng, 50, 4);
        const Vector y = oracle::normals(rng, 50);
        const auto f = ols_fit(y, X);
        CHECK((f.fitted + f.residuals - y).cwiseAbs().maxCoeff() < 1e-12);
        const double scale = X.norm() * y.norm();
        CHECK((X.transpose() * f.residuals).cwiseAbs().maxCoeff() < 1e-8 * scale);
        const auto o = oracle::ols(y, X);
        CHECK((f.coefficients - o.b).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((f.coef_covariance - o.cov).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("ols rejects singular and mis-shaped designs") {
    std::mt19937_64 rng(3);
    Matrix X = random_design(rng, 30, 3);
    Matrix dup(30, 4);
    dup << X, X.col(2) * 2.0;
    const Vector y = oracle::normals(rng, 30);
    try {
        (void)ols_fit(y, dup);
        FAIL("expected RankDeficient");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RankDeficient);
    }
    try {
        (void)ols_fit(y.head(29), X);
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
    CHECK(gram_rcond(dup) < kRankTolerance);
    CHECK(gram_rcond(X) > 1e-3);
}

TEST_CASE("long-run covariance") {
    SUBCASE("bandwidth zero is the second-moment matrix") {
        std::mt19937_64 rng(11);
        Matrix U(40, 2);
        for (Eigen::Index i = 0; i < U.size(); ++i) U.data()[i] = std::normal_distribution<double>()(rng);
        const auto lr = long_run_covariance(U, Kernel::Bartlett, 0);
        const Matrix m = U.transpose() * U / 40.0;
        CHECK((lr.omega - m).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((lr.lambda_one_sided - m).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("alternating series with bandwidth one") {
        CHECK(long_run_variance(vec({1, -1, 1, -1}), 1) == doctest::Approx(0.25).epsilon(1e-14));
    }
    SUBCASE("iid draws approach the population variance") {
        std::mt19937_64 rng(2024);
        const Vector u = oracle::normals(rng, 10000, 2.0);
        const double om = long_run_variance(u, default_bandwidth(10000));
        CHECK(std::abs(om - 4.0) < 0.05 * 4.0);
    }
    SUBCASE("symmetric and positive semi-definite") {
        std::mt19937_64 rng(5);
        for (std::size_t bw : {0u, 1u, 3u, 8u}) {
            Matrix U(60, 3);
            for (Eigen::Index i = 0; i < U.size(); ++i) U.data()[i] = std::normal_distribution<double>()(rng);
            U.col(1) += 0.8 * U.col(0);
            const auto lr = long_run_covariance(U, Kernel::Bartlett, bw);
            CHECK((lr.omega - lr.omega.transpose()).cwiseAbs().maxCoeff() < 1e-10);
            Eigen::SelfAdjointEigenSolver<Matrix> es(lr.omega);
            CHECK(es.eigenvalues().minCoeff() >= -1e-8);
        }
    }
    SUBCASE("bandwidth must stay below T") {
        CHECK_THROWS_AS((void)long_run_variance(vec({1, 2, 3}), 3), Error);
    }
    CHECK(default_bandwidth(100) == 4);
    CHECK(default_bandwidth(43) == 3);  // 4 * 0.43^(2/9) = 3.32
    CHECK(kernel_weight(Kernel::Bartlett, 1, 1) == doctest::Approx(0.5));
}

TEST_CASE("generalized eigenvalues") {
    Matrix A(2, 2), B(2, 2);
    SUBCASE("identity B gives ordinary eigenvalues") {
        A << 2, 1, 1, 2;
        const Vector l = generalized_eigen(A, Matrix::Identity(2, 2));
        CHECK(l(0) == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(l(1) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("identity pencil") {
        A << 4, 1, 1, 3;
        const Vector l = generalized_eigen(A, A);
        CHECK(l(0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(l(1) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("hand-solved quadratic") {
        // det(A - l B) = 1.75 l^2 - 9 l + 11, roots (9 +- 2) / 3.5
        A << 4, 1, 1, 3;
        B << 2, 0.5, 0.5, 1;
        const Vector l = generalized_eigen(A, B);
        CHECK(l(0) == doctest::Approx(11.0 / 3.5).epsilon(1e-12));
        CHECK(l(1) == doctest::Approx(2.0).epsilon(1e-12));
        const Vector s = generalized_eigen(7.3 * A, 7.3 * B);
        CHECK((s - l).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("B must be positive definite") {
        A << 1, 0, 0, 1;
        B << 1, 2, 2, 1;
        try {
            (void)generalized_eigen(A, B);
            FAIL("expected NotPositiveDefinite");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NotPositiveDefinite);
        }
    }
    SUBCASE("congruence scaling on random pencils") {
        std::mt19937_64 rng(99);
        for (int rep = 0; rep < 10; ++rep) {
            Matrix M(20, 4), N(20, 4);
            for (Eigen::Index i = 0; i < M.size(); ++i) {
                M.data()[i] = std::normal_distribution<double>()(rng);
                N.data()[i] = std::normal_distribution<double>()(rng);
            }
            const Matrix a = M.transpose() * M, b = N.transpose() * N;
            const Vector l = generalized_eigen(a, b);
            CHECK((generalized_eigen(0.37 * a, 0.37 * b) - l).cwiseAbs().maxCoeff() < 1e-10 * l.maxCoeff());
            for (Eigen::Index i = 1; i < l.size(); ++i) CHECK(l(i - 1) >= l(i));
        }
    }
}

TEST_CASE("information criteria") {
    const auto ic = information_criteria(10.0, 10, 1);
    CHECK(ic.aic == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ic.bic == doctest::Approx(std::log(10.0)).epsilon(1e-14));
    CHECK(ic.hq == doctest::Approx(2.0 * std::log(std::log(10.0))).epsilon(1e-14));
    const auto e2 = information_criteria(7.389, 2, 1);
    CHECK(e2.aic == doctest::Approx(2.0 * std::log(3.6945) + 2.0).epsilon(1e-12));
    const auto k1 = information_criteria(5.0, 30, 1), k2 = information_criteria(5.0, 30, 2);
    CHECK(k1.aic < k2.aic);
    CHECK(k1.bic < k2.bic);
    CHECK(k1.hq < k2.hq);
    const auto z = information_criteria(0.0, 10, 1);
    CHECK(z.degenerate);
    CHECK(std::isinf(z.aic));
    CHECK(z.aic < 0);
}

TEST_CASE("distribution tails") {
    CHECK(dist::chi2_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(dist::chi2_sf(5.991464547107979, 2) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(dist::chi2_sf(-1.0, 3) == 1.0);
    CHECK(dist::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-10));
    CHECK(dist::normal_cdf(0.0) == doctest::Approx(0.5));
    // F(1, d) upper tail equals the two-sided t tail: t_{0.975, 10} = 2.228138851986274
    CHECK(dist::f_sf(2.228138851986274 * 2.228138851986274, 1, 10) == doctest::Approx(0.05).epsilon(1e-8));
}

TEST_CASE("parallel_for writes every index once and rethrows the lowest failure") {
    std::vector<int> out(1000, 0);
    parallel_for(out.size(), 4, [&](std::size_t i) { out[i] += static_cast<int>(i); });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i));
    try {
        parallel_for(100, 4, [](std::size_t i) {
            if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "17");
    }
}
