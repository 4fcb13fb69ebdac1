#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "tsecon/diagnostics.hpp"
#include "tsecon/montecarlo.hpp"

using namespace tsecon;

namespace {

Matrix const_and(const Vector& x) {
    Matrix X(x.size(), 2);
    X.col(0).setOnes();
    X.col(1) = x;
    return X;
}

Vector v(std::initializer_list<double> l) {
    Vector out(static_cast<Eigen::Index>(l.size()));
    Eigen::Index i = 0;
    for (double d : l) out(i++) = d;
    return out;
}

}  // namespace

TEST_CASE("breusch-godfrey is zero for residuals orthogonal to their lag") {
    const Vector e = v({1, 0, -1, 0, 1, 0, -1, 0});
    const Matrix X = Matrix::Ones(8, 1);
    const Vector y = 5.0 + e.array();
    const auto f = ols_fit(y, X);
    const auto r = breusch_godfrey(f, X, 1);
    CHECK(std::abs(r.statistic) < 1e-12);
    CHECK(r.p_value == doctest::Approx(1.0));
}

TEST_CASE("breusch-pagan is zero when squared residuals are orthogonal to X") {
    const Vector x = v({1, -1, 1, -1, 1, -1, 1, -1});
    const Vector e = v({2, 2, -2, -2, 1, 1, -1, -1});
    const Matrix X = const_and(x);
    const auto f = ols_fit(1.0 + 0.5 * x.array() + e.array(), X);
    CHECK((f.residuals - e).cwiseAbs().maxCoeff() < 1e-12);
    const auto r = heteroskedasticity_test(f, X);
    CHECK(std::abs(r.statistic) < 1e-12);
    CHECK(r.p_value == doctest::Approx(1.0));
    CHECK(r.df == 1.0);
}

TEST_CASE("jarque-bera hand value and symmetry") {
    const auto r = jarque_bera(v({-1, 0, 1}));
    CHECK(r.statistic == doctest::Approx(0.28125).epsilon(1e-14));
    std::mt19937_64 rng(1);
    const Vector h = oracle::normals(rng, 20);
    Vector sym(40);
    sym << h, -h;
    // zero skewness: JB reduces to the kurtosis term
    const Vector d = sym.array() - sym.mean();
    const double m2 = d.squaredNorm() / 40.0, m4 = d.array().pow(4).sum() / 40.0;
    const double K = m4 / (m2 * m2);
    CHECK(jarque_bera(sym).statistic == doctest::Approx(40.0 * (K - 3.0) * (K - 3.0) / 24.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)jarque_bera(v({2, 2, 2, 2})), Error);
}

TEST_CASE("RESET flags a collinear augmentation") {
    const Vector d = v({0, 1, 0, 1, 0, 1, 0, 1, 1, 0});
    const Vector e = v({0.1, -0.2, 0.3, 0.1, -0.1, 0.2, -0.3, -0.1, 0.0, 0.05});
    const Matrix X = const_and(d);
    const Vector y = 2.0 + 3.0 * d.array() + e.array();
    const auto f = ols_fit(y, X);
    const auto r = ramsey_reset(f, X, y);
    CHECK(r.f.p_value == 1.0);
    CHECK(r.f.warning == "CollinearAugmentation");
}

TEST_CASE("recursive residuals") {
    std::mt19937_64 rng(2);
    const Vector x = oracle::normals(rng, 30);
    const Matrix X = const_and(x);
    SUBCASE("exact fit gives zeros") {
        const Vector w = recursive_residuals(X * v({1.5, -2.0}), X);
        CHECK(w.size() == 28);
        CHECK(w.cwiseAbs().maxCoeff() < 1e-9);
    }
    SUBCASE("definition check") {
        const Vector y = 1.0 + x.array() + oracle::normals(rng, 30).array();
        const Vector w = recursive_residuals(y, X);
        for (Eigen::Index t = 2; t < 30; ++t) {
            const oracle::Mat Xp = X.topRows(t);
            const auto o = oracle::ols(y.head(t), Xp);
            const Eigen::RowVectorXd xt = X.row(t);
            const double denom = std::sqrt(1.0 + (xt * (Xp.transpose() * Xp).inverse() * xt.transpose())(0, 0));
            CHECK(w(t - 2) == doctest::Approx((y(t) - xt.dot(o.b)) / denom).epsilon(1e-9));
        }
    }
    SUBCASE("T equal to k gives an empty vector") {
        CHECK(recursive_residuals(v({1, 2}), const_and(v({0, 1}))).size() == 0);
    }
}

TEST_CASE("cusum paths") {
    std::mt19937_64 rng(3);
    const Vector w = oracle::normals(rng, 40);
    const auto c = cusum_paths(w, 2);
    CHECK(c.cusumsq.value.back() == 1.0);
    CHECK(c.cusumsq.value.front() >= 0.0);
    for (std::size_t i = 1; i < c.cusumsq.value.size(); ++i) CHECK(c.cusumsq.value[i] >= c.cusumsq.value[i - 1]);
    // band half-width 0.948 sqrt(n) (1 + 2 r / n)
    const double n = 40.0;
    CHECK(c.cusum.upper.back() == doctest::Approx(0.948 * std::sqrt(n) * 3.0).epsilon(1e-12));
    bool inside = true;
    for (std::size_t i = 0; i < c.cusum.value.size(); ++i) {
        inside = inside && c.cusum.value[i] >= c.cusum.lower[i] && c.cusum.value[i] <= c.cusum.upper[i];
    }
    CHECK((c.cusum.verdict == Stability::Stable) == inside);
    CHECK_THROWS_AS((void)cusum_paths(Vector::Zero(10), 1), Error);
}

TEST_CASE("diagnostics are invariant to regressor order") {
    std::mt19937_64 rng(4);
    Matrix X(60, 3);
    X.col(0).setOnes();
    X.col(1) = oracle::normals(rng, 60);
    X.col(2) = oracle::normals(rng, 60);
    const Vector y = X * v({1, 2, -1}) + oracle::normals(rng, 60);
    Matrix P(60, 3);
    P << X.col(2), X.col(0), X.col(1);
    const auto a = run_diagnostics(y, X, ols_fit(y, X));
    const auto b = run_diagnostics(y, P, ols_fit(y, P));
    CHECK(std::abs(a.serial_correlation.statistic - b.serial_correlation.statistic) < 1e-10);
    CHECK(std::abs(a.heteroskedasticity.statistic - b.heteroskedasticity.statistic) < 1e-10);
    CHECK(std::abs(a.normality.statistic - b.normality.statistic) < 1e-10);
    CHECK(std::abs(a.functional_form.lm.statistic - b.functional_form.lm.statistic) < 1e-10);
    for (const auto* t : {&a.serial_correlation, &a.heteroskedasticity, &a.normality, &a.functional_form.f,
                          &a.functional_form.lm}) {
        CHECK(t->p_value >= 0.0);
        CHECK(t->p_value <= 1.0);
        CHECK(t->statistic >= 0.0);
    }
    const auto w = heteroskedasticity_test(ols_fit(y, X), X, HeteroskedasticityVariant::White);
    CHECK(w.df == 5.0);  // two squares, one cross product, two levels
}

TEST_CASE("diagnostic power in simulation") {
    int bg = 0, bp = 0, reset = 0, sq_unstable = 0, cusum_stable = 0, sq_stable = 0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
        auto rng = replication_rng(8080, static_cast<std::uint64_t>(s));
        std::normal_distribution<double> N;
        const Vector x = oracle::normals(rng, 200);
        const Matrix X = const_and(x);
        // AR(0.9) errors
        Vector u(200);
        double prev = 0.0;
        for (auto& e : u) e = prev = 0.9 * prev + N(rng);
        const Vector y1 = 1.0 + x.array() + u.array();
        if (breusch_godfrey(ols_fit(y1, X), X).p_value < 0.01) ++bg;
        // error variance proportional to a positive regressor
        const Vector z = 1.0 + 4.0 * oracle::normals(rng, 200).cwiseAbs().array();
        const Matrix Z = const_and(z);
        Vector y2(200);
        for (Eigen::Index t = 0; t < 200; ++t) y2(t) = 1.0 + z(t) + std::sqrt(z(t)) * z(t) * N(rng);
        if (heteroskedasticity_test(ols_fit(y2, Z), Z).p_value < 0.01) ++bp;
        // quadratic truth fit linearly
        const Vector y3 = 1.0 + x.array() + x.array().square() + oracle::normals(rng, 200).array();
        if (ramsey_reset(ols_fit(y3, X), X, y3).f.p_value < 0.01) ++reset;
        // slope doubles mid-sample
        const Vector xs = 1.0 + oracle::normals(rng, 200).array();
        const Matrix XS = const_and(xs);
        Vector y4 = 1.0 + xs.array() + 0.2 * oracle::normals(rng, 200).array();
        for (Eigen::Index t = 100; t < 200; ++t) y4(t) = 1.0 + 4.0 * xs(t) + 2.0 * N(rng);
        if (cusum_paths(recursive_residuals(y4, XS), 2).cusumsq.verdict == Stability::Unstable) ++sq_unstable;
        const Vector y5 = 1.0 + xs.array() + oracle::normals(rng, 200).array();
        const auto cp = cusum_paths(recursive_residuals(y5, XS), 2);
        if (cp.cusum.verdict == Stability::Stable) ++cusum_stable;
        if (cp.cusumsq.verdict == Stability::Stable) ++sq_stable;
    }
    CHECK(bg >= 95);
    CHECK(bp >= 95);
    CHECK(reset >= 95);
    CHECK(sq_unstable >= 80);
    CHECK(cusum_stable >= 90);
    CHECK(sq_stable >= 90);
}

TEST_CASE("recursive residuals of a stable model centre on zero") {
    std::mt19937_64 rng(9);
    const Vector x = oracle::normals(rng, 300);
    const Matrix X = const_and(x);
    const Vector w = recursive_residuals(2.0 + x.array() + oracle::normals(rng, 300).array(), X);
    CHECK(std::abs(w.mean()) < 3.0 / std::sqrt(298.0));
}
