#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "tsecon/montecarlo.hpp"
#include "tsecon/unit_root.hpp"

using namespace tsecon;

namespace {

TimeSeries ts(const Vector& v) { return TimeSeries{"y", 1, to_std(v)}; }

// ADF t-ratio with constant (and optional trend) on rows t = first..T, p lags.
double adf_oracle(const Vector& y, bool trend, std::size_t p, std::size_t first, double* last_lag_t = nullptr) {
    const auto T = static_cast<std::size_t>(y.size());
    const std::size_t n = T - first + 1;
    const Eigen::Index det = trend ? 2 : 1;
    oracle::Mat X(static_cast<Eigen::Index>(n), det + 1 + static_cast<Eigen::Index>(p));
    oracle::Vec dep(static_cast<Eigen::Index>(n));
    auto Y = [&](std::size_t t) { return y(static_cast<Eigen::Index>(t - 1)); };
    for (std::size_t t = first, r = 0; t <= T; ++t, ++r) {
        const auto ri = static_cast<Eigen::Index>(r);
        dep(ri) = Y(t) - Y(t - 1);
        X(ri, 0) = 1.0;
        if (trend) X(ri, 1) = static_cast<double>(t);
        X(ri, det) = Y(t - 1);
        for (std::size_t i = 1; i <= p; ++i) X(ri, det + static_cast<Eigen::Index>(i)) = Y(t - i) - Y(t - i - 1);
    }
    if (last_lag_t && p > 0) *last_lag_t = oracle::t_ratio(dep, X, X.cols() - 1);
    return oracle::t_ratio(dep, X, det);
}

}  // namespace

TEST_CASE("adf statistic matches an independent regression") {
    std::mt19937_64 rng(42);
    const Vector y = oracle::random_walk(rng, 80);
    for (std::size_t p : {0u, 1u, 3u}) {
        AdfSpec spec{Deterministic::Constant, 4, LagRule::fixed_at(p)};
        CHECK(adf_test(ts(y), spec).statistic == doctest::Approx(adf_oracle(y, false, p, p + 2)).epsilon(1e-9));
        spec.deterministic = Deterministic::ConstantTrend;
        CHECK(adf_test(ts(y), spec).statistic == doctest::Approx(adf_oracle(y, true, p, p + 2)).epsilon(1e-9));
    }
}

TEST_CASE("general-to-specific lag choice matches a hand loop") {
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 10; ++rep) {
        // AR(2) differences so that some lags matter
        Vector y(120);
        double d1 = 0, d2 = 0, lvl = 0;
        std::normal_distribution<double> N;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double d = 0.5 * d1 - 0.3 * d2 + N(rng);
            d2 = d1;
            d1 = d;
            y(i) = lvl += d;
        }
        const std::size_t kmax = default_max_lag(120);
        std::size_t expect = 0;
        for (std::size_t p = kmax; p >= 1; --p) {
            double tl = 0.0;
            (void)adf_oracle(y, false, p, kmax + 2, &tl);
            if (std::abs(tl) > 1.6448536269514722) {
                expect = p;
                break;
            }
        }
        const auto r = adf_test(ts(y));
        CHECK(r.chosen_lag == expect);
        CHECK(r.statistic == doctest::Approx(adf_oracle(y, false, expect, expect + 2)).epsilon(1e-9));
    }
}

TEST_CASE("adf rejects a perfectly linear series as degenerate") {
    Vector y = Vector::LinSpaced(60, 1.0, 60.0);
    try {
        (void)adf_test(ts(y), AdfSpec{Deterministic::ConstantTrend, 2, LagRule::fixed_at(0)});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK((e.code() == ErrorCode::DegenerateRegression || e.code() == ErrorCode::RankDeficient));
    }
}

TEST_CASE("adf size and power in simulation") {
    // random walk: fail to reject at 5% in at least 90% of draws; AR(0.2): reject in at least 90%
    std::size_t keep = 0, reject = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        auto rng = replication_rng(777, s);
        const Vector rw = oracle::random_walk(rng, 200);
        if (!adf_test(ts(rw)).rejects(Level::Pct5)) ++keep;
        std::normal_distribution<double> N;
        Vector ar(200);
        double prev = 0.0;
        for (auto& v : ar) v = prev = 0.2 * prev + N(rng);
        if (adf_test(ts(ar)).rejects(Level::Pct5)) ++reject;
    }
    CHECK(keep >= 900);
    CHECK(reject >= 900);
}

TEST_CASE("break grid bounds") {
    const auto r = break_range(60, 0.15);
    CHECK(r.lo == 9);
    CHECK(r.hi == 51);
    CHECK(r.min_gap == 9);
    for (std::size_t T = 20; T <= 60; ++T) {
        const auto g = break_range(T, 0.15);
        for (const auto& p : break_pairs(g)) {
            CHECK(p[1] - p[0] >= g.min_gap);
            CHECK(p[0] >= g.lo);
            CHECK(p[1] <= g.hi);
        }
    }
    CHECK_THROWS_AS((void)break_range(60, 0.30), Error);
    try {
        (void)break_range(60, 0.01);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TrimOutOfRange);
    }
}

TEST_CASE("zivot-andrews equals the brute-force grid minimum") {
    std::mt19937_64 rng(1234);
    for (BreakModel m : {BreakModel::A, BreakModel::B, BreakModel::C}) {
        const char mc = m == BreakModel::A ? 'A' : m == BreakModel::B ? 'B' : 'C';
        for (std::size_t p : {0u, 2u}) {
            const Vector y = oracle::random_walk(rng, 50);
            const auto rep = za_test(ts(y), m, AdfSpec{Deterministic::ConstantTrend, p, LagRule::fixed_at(p)});
            const auto o = oracle::za_grid(y, mc, p, 0.15);
            CHECK(rep.statistic == doctest::Approx(o.value).epsilon(1e-9));
            REQUIRE(rep.break_indices.size() == 1);
            CHECK(rep.break_indices[0] == o.b1);
            CHECK(rep.break_years[0] == static_cast<int>(o.b1));
            // invariant: the statistic is the exact minimum of the stored profile
            double mn = rep.candidate_profile.front().statistic;
            for (const auto& c : rep.candidate_profile) mn = std::min(mn, c.statistic);
            CHECK(rep.statistic == mn);
            for (std::size_t i = 0; i < 3; ++i) CHECK(rep.reject_at[i] == (rep.statistic < rep.critical_values.values[i]));
        }
    }
}

TEST_CASE("zivot-andrews without dummies reduces to the trend ADF") {
    std::mt19937_64 rng(5);
    const Vector y = oracle::random_walk(rng, 70);
    for (std::size_t p : {0u, 1u, 3u}) {
        const double plain = adf_test(ts(y), AdfSpec{Deterministic::ConstantTrend, p, LagRule::fixed_at(p)}).statistic;
        CHECK(std::abs(za_statistic_at(y, BreakModel::C, 30, p, false) - plain) < 1e-10);
    }
}

TEST_CASE("zivot-andrews locates a large level shift") {
    std::mt19937_64 rng(2718);
    for (int rep = 0; rep < 5; ++rep) {
        Vector y = oracle::normals(rng, 100);
        for (Eigen::Index i = 60; i < 100; ++i) y(i) += 10.0;  // shift after tb = 60
        const auto r = za_test(ts(y), BreakModel::A, AdfSpec{Deterministic::ConstantTrend, 0, LagRule::fixed_at(0)});
        const auto o = oracle::za_grid(y, 'A', 0, 0.15);
        CHECK(r.break_indices[0] == o.b1);
        CHECK(std::abs(static_cast<long>(r.break_indices[0]) - 60) <= 1);
    }
}

TEST_CASE("lee-strazicich equals the brute-force grid minimum") {
    std::mt19937_64 rng(99);
    for (BreakModel m : {BreakModel::A, BreakModel::C}) {
        for (std::size_t p : {0u, 1u}) {
            const Vector y = oracle::random_walk(rng, 45);
            const auto rep = ls_test(ts(y), m, 2, AdfSpec{Deterministic::Constant, p, LagRule::fixed_at(p)});
            const auto o = oracle::ls_grid(y, m == BreakModel::A ? 'A' : 'C', p, 0.15);
            CHECK(rep.statistic == doctest::Approx(o.value).epsilon(1e-8));
            REQUIRE(rep.break_indices.size() == 2);
            CHECK(rep.break_indices[0] == o.b1);
            CHECK(rep.break_indices[1] == o.b2);
        }
    }
}

TEST_CASE("closed-form model A grid agrees with the regression form") {
    std::mt19937_64 rng(31);
    const Vector y = oracle::random_walk(rng, 60);
    const LsModelAFastGrid fast(y);
    for (const auto& pr : break_pairs(break_range(60, 0.15))) {
        const std::size_t b[2] = {pr[0], pr[1]};
        CHECK(fast.statistic(pr[0], pr[1]) == doctest::Approx(ls_statistic_at(y, BreakModel::A, b, 0)).epsilon(1e-9));
    }
}

TEST_CASE("lee-strazicich minimum lies below any fixed pair") {
    std::mt19937_64 rng(17);
    const Vector y = oracle::random_walk(rng, 60);
    const auto rep = ls_test(ts(y), BreakModel::C, 2, AdfSpec{Deterministic::Constant, 1, LagRule::fixed_at(1)});
    const auto pairs = break_pairs(break_range(60, 0.15));
    std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
    for (int i = 0; i < 20; ++i) {
        const auto& pr = pairs[pick(rng)];
        const std::size_t b[2] = {pr[0], pr[1]};
        CHECK(rep.statistic <= ls_statistic_at(y, BreakModel::C, b, 1) + 1e-12);
    }
}

TEST_CASE("embedded critical values") {
    CHECK(za_critical_values(BreakModel::A).at(Level::Pct5) == -4.93);
    CHECK(za_critical_values(BreakModel::C).at(Level::Pct1) == -5.57);
    CHECK(ls_critical_values(BreakModel::A, 2).at(Level::Pct5) == -3.842);
    CHECK(ls_critical_values(BreakModel::C, 2).at(Level::Pct10) == -4.989);
    const auto r = left_tail_rejections(-5.0, za_critical_values(BreakModel::A));
    CHECK_FALSE(r[0]);
    CHECK(r[1]);
    CHECK(r[2]);
}

TEST_CASE("break tests reject bad arguments") {
    std::mt19937_64 rng(1);
    const Vector y = oracle::random_walk(rng, 50);
    CHECK_THROWS_AS((void)ls_test(ts(y), BreakModel::B, 2), Error);
    CHECK_THROWS_AS((void)za_test(ts(y), BreakModel::A, {}, BreakSearchOptions{0.4, 1}), Error);
    CHECK_THROWS_AS((void)za_test(ts(oracle::random_walk(rng, 10)), BreakModel::A), Error);
}

TEST_CASE("break search is identical across worker counts") {
    std::mt19937_64 rng(64);
    const Vector y = oracle::random_walk(rng, 55);
    const auto a = ls_test(ts(y), BreakModel::C, 2, {}, BreakSearchOptions{0.15, 1});
    const auto b = ls_test(ts(y), BreakModel::C, 2, {}, BreakSearchOptions{0.15, 4});
    CHECK(a.statistic == b.statistic);
    CHECK(a.break_indices == b.break_indices);
    const auto c = za_test(ts(y), BreakModel::C, {}, BreakSearchOptions{0.15, 1});
    const auto d = za_test(ts(y), BreakModel::C, {}, BreakSearchOptions{0.15, 3});
    CHECK(c.statistic == d.statistic);
    CHECK(c.chosen_lag == d.chosen_lag);
}
