#include "tsecon/unit_root.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "tsecon/parallel.hpp"

namespace tsecon {

std::string_view to_string(Level level) noexcept {
    switch (level) {
        case Level::Pct1: return "1%";
        case Level::Pct5: return "5%";
        case Level::Pct10: return "10%";
    }
    return "?";
}

std::string_view to_string(UnitRootTest t) noexcept {
    switch (t) {
        case UnitRootTest::ADF: return "ADF";
        case UnitRootTest::ZA: return "ZA";
        case UnitRootTest::LS: return "LS";
    }
    return "?";
}

std::array<bool, 3> left_tail_rejections(double statistic, const CriticalValues& cv) {
    return {statistic < cv.values[0], statistic < cv.values[1], statistic < cv.values[2]};
}

std::size_t default_max_lag(std::size_t T) {
    auto k = static_cast<std::size_t>(std::floor(12.0 * std::pow(static_cast<double>(T) / 100.0, 0.25)));
    // keep max_lag < T/3
    while (k > 0 && 3 * k >= T) --k;
    return k;
}

// --------------------------------------------------------------------------
// Augmented regressions

AugmentedFit fit_augmented(const AugmentedRegression& reg, std::size_t p, std::size_t first_t) {
    const auto T = static_cast<std::size_t>(reg.dep.size());
    if (first_t < p + 2 || first_t > T) {
        throw Error(ErrorCode::SeriesTooShort,
                    fmt::format("no rows for lag {} starting at t={}", p, first_t));
    }
    const std::size_t n = T - first_t + 1;
    const std::size_t k = reg.fixed.size() + 1 + p;
    if (n <= k) {
        throw Error(ErrorCode::SeriesTooShort,
                    fmt::format("{} observations for {} regressors", n, k));
    }
    Matrix X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    Vector y(static_cast<Eigen::Index>(n));
    const auto level_col = static_cast<Eigen::Index>(reg.fixed.size());
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t pos = first_t - 1 + r;  // 0-based position of time t
        const auto row = static_cast<Eigen::Index>(r);
        y(row) = reg.dep(static_cast<Eigen::Index>(pos));
        Eigen::Index c = 0;
        for (const auto& col : reg.fixed) X(row, c++) = col(static_cast<Eigen::Index>(pos));
        X(row, c++) = reg.level(static_cast<Eigen::Index>(pos));
        for (std::size_t i = 1; i <= p; ++i) X(row, c++) = reg.aug(static_cast<Eigen::Index>(pos - i));
    }
    OlsFit fit;
    try {
        fit = ols_fit(y, X);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::RankDeficient) {
            throw Error(ErrorCode::DegenerateRegression, e.what());
        }
        throw;
    }
    const double scale = std::max(y.squaredNorm(), std::numeric_limits<double>::min());
    if (fit.ssr <= 1e-24 * scale) {
        throw Error(ErrorCode::DegenerateRegression, "zero residual variance");
    }
    AugmentedFit out;
    out.coefficient = fit.coefficients(level_col);
    out.statistic = fit.t_stat(level_col);
    out.lag = p;
    out.n_obs = n;
    out.ssr = fit.ssr;
    return out;
}

namespace {

double last_lag_t(const AugmentedRegression& reg, std::size_t p, std::size_t first_t) {
    // t-ratio of the deepest augmentation lag
    const auto T = static_cast<std::size_t>(reg.dep.size());
    const std::size_t n = T - first_t + 1;
    const std::size_t k = reg.fixed.size() + 1 + p;
    Matrix X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    Vector y(static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t pos = first_t - 1 + r;
        const auto row = static_cast<Eigen::Index>(r);
        y(row) = reg.dep(static_cast<Eigen::Index>(pos));
        Eigen::Index c = 0;
        for (const auto& col : reg.fixed) X(row, c++) = col(static_cast<Eigen::Index>(pos));
        X(row, c++) = reg.level(static_cast<Eigen::Index>(pos));
        for (std::size_t i = 1; i <= p; ++i) X(row, c++) = reg.aug(static_cast<Eigen::Index>(pos - i));
    }
    const OlsFit fit = ols_fit(y, X);
    return fit.t_stat(static_cast<Eigen::Index>(k - 1));
}

double aic_at(const AugmentedRegression& reg, std::size_t p, std::size_t first_t) {
    const AugmentedFit f = fit_augmented(reg, p, first_t);
    const std::size_t k = reg.fixed.size() + 1 + p;
    return information_criteria(f.ssr, f.n_obs, k).aic;
}

}  // namespace

AugmentedFit select_and_fit(const AugmentedRegression& reg, std::size_t max_lag, LagRule rule) {
    std::size_t chosen = 0;
    const std::size_t common_start = max_lag + 2;
    switch (rule.kind) {
        case LagRule::Kind::Fixed:
            chosen = rule.fixed;
            break;
        case LagRule::Kind::TSig10: {
            // 10% two-sided normal cutoff, general to specific
            constexpr double kCut = 1.6448536269514722;
            for (std::size_t p = max_lag; p >= 1; --p) {
                if (std::abs(last_lag_t(reg, p, common_start)) > kCut) {
                    chosen = p;
                    break;
                }
            }
            break;
        }
        case LagRule::Kind::Aic: {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t p = 0; p <= max_lag; ++p) {
                const double v = aic_at(reg, p, common_start);
                if (v < best) {
                    best = v;
                    chosen = p;
                }
            }
            break;
        }
    }
    return fit_augmented(reg, chosen, chosen + 2);
}

// --------------------------------------------------------------------------
// ADF

namespace {

Vector diff_at_t(const Vector& y) {
    // value at position t-1 is y_t - y_{t-1}; undefined first entry set to 0
    Vector d = Vector::Zero(y.size());
    for (Eigen::Index i = 1; i < y.size(); ++i) d(i) = y(i) - y(i - 1);
    return d;
}

Vector lag1_at_t(const Vector& y) {
    Vector l = Vector::Zero(y.size());
    for (Eigen::Index i = 1; i < y.size(); ++i) l(i) = y(i - 1);
    return l;
}

std::vector<Vector> deterministic_columns(Deterministic det, Eigen::Index T) {
    std::vector<Vector> cols;
    if (det != Deterministic::None) cols.push_back(Vector::Ones(T));
    if (det == Deterministic::ConstantTrend) cols.push_back(Vector::LinSpaced(T, 1.0, static_cast<double>(T)));
    return cols;
}

AugmentedRegression adf_regression(const Vector& y, Deterministic det) {
    AugmentedRegression reg;
    reg.dep = diff_at_t(y);
    reg.fixed = deterministic_columns(det, y.size());
    reg.level = lag1_at_t(y);
    reg.aug = reg.dep;
    return reg;
}

void check_finite(const TimeSeries& y) {
    for (double v : y.values) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite value in " + y.name);
    }
}

}  // namespace

CriticalValues adf_critical_values(Deterministic det, std::size_t n_obs) {
    // MacKinnon (2010) response surfaces: b_inf + b1/T + b2/T^2 + b3/T^3
    struct Row { double b0, b1, b2, b3; };
    static constexpr Row none[3] = {{-2.56574, -2.2358, -3.627, 0.0},
                                    {-1.94100, -0.2686, -3.365, 31.223},
                                    {-1.61682, 0.2656, -2.714, 25.364}};
    static constexpr Row constant[3] = {{-3.43035, -6.5393, -16.786, -79.433},
                                        {-2.86154, -2.8903, -4.234, -40.040},
                                        {-2.56677, -1.5384, -2.809, 0.0}};
    static constexpr Row trend[3] = {{-3.95877, -9.0531, -28.428, -134.155},
                                     {-3.41049, -4.3904, -9.036, -45.374},
                                     {-3.12705, -2.5856, -3.925, -22.380}};
    const Row* rows = det == Deterministic::None       ? none
                      : det == Deterministic::Constant ? constant
                                                       : trend;
    const double inv = 1.0 / static_cast<double>(std::max<std::size_t>(n_obs, 1));
    CriticalValues cv;
    for (std::size_t i = 0; i < 3; ++i) {
        const Row& r = rows[i];
        cv.values[i] = r.b0 + r.b1 * inv + r.b2 * inv * inv + r.b3 * inv * inv * inv;
    }
    return cv;
}

BreakTestReport adf_test(const TimeSeries& y, const AdfSpec& spec) {
    check_finite(y);
    const std::size_t T = y.size();
    const std::size_t kmax = spec.max_lag.value_or(default_max_lag(T));
    if (T < kmax + 2 || T - kmax - 1 < 15) {
        throw Error(ErrorCode::SeriesTooShort,
                    fmt::format("{} observations with max lag {} leaves fewer than 15", T, kmax));
    }
    if (3 * kmax >= T) {
        throw Error(ErrorCode::InvalidArgument, "max_lag must stay below T/3");
    }
    const AugmentedRegression reg = adf_regression(y.as_vector(), spec.deterministic);
    const AugmentedFit fit = select_and_fit(reg, kmax, spec.lag_rule);

    BreakTestReport rep;
    rep.test = UnitRootTest::ADF;
    rep.series = y.name;
    rep.start_year = y.start_year;
    rep.n_obs = fit.n_obs;
    rep.statistic = fit.statistic;
    rep.chosen_lag = fit.lag;
    rep.candidate_profile.push_back({{}, fit.statistic, fit.lag});
    rep.critical_values = adf_critical_values(spec.deterministic, fit.n_obs);
    rep.reject_at = left_tail_rejections(rep.statistic, rep.critical_values);
    return rep;
}

// --------------------------------------------------------------------------
// Break grids

BreakRange break_range(std::size_t T, double trim) {
    if (!(trim >= 0.05 && trim <= 0.25)) {
        throw Error(ErrorCode::TrimOutOfRange, fmt::format("trim {} outside [0.05, 0.25]", trim));
    }
    const double Td = static_cast<double>(T);
    if (Td * trim < 2.0) {
        throw Error(ErrorCode::SeriesTooShort,
                    fmt::format("T*trim = {:.3f} < 2 with T={}", Td * trim, T));
    }
    BreakRange r;
    r.lo = static_cast<std::size_t>(std::ceil(trim * Td - 1e-9));
    r.hi = static_cast<std::size_t>(std::floor((1.0 - trim) * Td + 1e-9));
    r.lo = std::max<std::size_t>(r.lo, 2);
    r.hi = std::min(r.hi, T - 2);
    r.min_gap = static_cast<std::size_t>(std::ceil(trim * Td - 1e-9));
    if (r.lo > r.hi) throw Error(ErrorCode::SeriesTooShort, "empty break range");
    return r;
}

std::vector<std::array<std::size_t, 2>> break_pairs(const BreakRange& range) {
    std::vector<std::array<std::size_t, 2>> pairs;
    for (std::size_t a = range.lo; a <= range.hi; ++a) {
        for (std::size_t b = a + range.min_gap; b <= range.hi; ++b) pairs.push_back({a, b});
    }
    return pairs;
}

namespace {

/// Largest lag that keeps at least two pre-break rows inside every
/// candidate regression sample.
std::size_t lag_cap_for_breaks(std::size_t kmax, std::size_t first_break) {
    if (first_break < 3) return 0;
    return std::min(kmax, first_break - 3);
}

template <class Eval>
void reduce_profile(BreakTestReport& rep, std::vector<CandidateStat> profile) {
    // ascending candidate order; strict < keeps the earliest break on ties
    std::size_t best = 0;
    for (std::size_t i = 1; i < profile.size(); ++i) {
        if (profile[i].statistic < profile[best].statistic) best = i;
    }
    rep.statistic = profile[best].statistic;
    rep.chosen_lag = profile[best].lag;
    rep.break_indices = profile[best].breaks;
    rep.break_years.clear();
    for (auto tb : rep.break_indices) rep.break_years.push_back(rep.start_year + static_cast<int>(tb) - 1);
    rep.candidate_profile = std::move(profile);
}

AugmentedRegression za_regression(const Vector& y, BreakModel model, std::size_t tb,
                                  bool include_dummies) {
    AugmentedRegression reg = adf_regression(y, Deterministic::ConstantTrend);
    if (include_dummies) {
        const auto d = break_dummies(static_cast<std::size_t>(y.size()), tb, model);
        if (!d.du.empty()) reg.fixed.push_back(to_vector(d.du));
        if (!d.dt.empty()) reg.fixed.push_back(to_vector(d.dt));
    }
    return reg;
}

}  // namespace

CriticalValues za_critical_values(BreakModel model) {
    switch (model) {
        case BreakModel::A: return {{-5.34, -4.93, -4.58}};
        case BreakModel::B: return {{-4.93, -4.42, -4.11}};
        case BreakModel::C: return {{-5.57, -5.08, -4.82}};
    }
    return {};
}

double za_statistic_at(const Vector& y, BreakModel model, std::size_t tb, std::size_t lag,
                       bool include_dummies) {
    const AugmentedRegression reg = za_regression(y, model, tb, include_dummies);
    return fit_augmented(reg, lag, lag + 2).statistic;
}

BreakTestReport za_test(const TimeSeries& y, BreakModel model, const AdfSpec& spec,
                        const BreakSearchOptions& options) {
    check_finite(y);
    const std::size_t T = y.size();
    const BreakRange range = break_range(T, options.trim);
    std::size_t kmax = spec.max_lag.value_or(default_max_lag(T));
    if (spec.lag_rule.kind == LagRule::Kind::Fixed) kmax = std::max(kmax, spec.lag_rule.fixed);
    kmax = lag_cap_for_breaks(kmax, range.lo);
    LagRule rule = spec.lag_rule;
    if (rule.kind == LagRule::Kind::Fixed) rule.fixed = std::min(rule.fixed, kmax);
    if (T < kmax + 2 + 15) {
        throw Error(ErrorCode::SeriesTooShort, fmt::format("T={} too short for ZA", T));
    }

    const Vector yv = y.as_vector();
    const std::size_t n = range.hi - range.lo + 1;
    std::vector<CandidateStat> profile(n);
    parallel_for(n, options.workers, [&](std::size_t i) {
        const std::size_t tb = range.lo + i;
        const AugmentedFit f = select_and_fit(za_regression(yv, model, tb, true), kmax, rule);
        profile[i] = {{tb}, f.statistic, f.lag};
    });

    BreakTestReport rep;
    rep.test = UnitRootTest::ZA;
    rep.model = model;
    rep.series = y.name;
    rep.start_year = y.start_year;
    rep.n_obs = T;
    reduce_profile<void>(rep, std::move(profile));
    rep.critical_values = za_critical_values(model);
    rep.reject_at = left_tail_rejections(rep.statistic, rep.critical_values);
    return rep;
}

// --------------------------------------------------------------------------
// Lee-Strazicich

namespace {

AugmentedRegression ls_regression(const Vector& y, BreakModel model,
                                  std::span<const std::size_t> breaks) {
    if (model == BreakModel::B) {
        throw Error(ErrorCode::InvalidArgument, "LS test supports models A and C only");
    }
    const auto T = static_cast<std::size_t>(y.size());
    const auto Ti = y.size();
    const bool slope = model == BreakModel::C;

    // Z_t without the constant: [t, D_j..., DT_j...]; dZ_t: [1, B_j..., D_j...]
    std::vector<Vector> Z;
    std::vector<Vector> dZ;
    Z.push_back(Vector::LinSpaced(Ti, 1.0, static_cast<double>(T)));
    dZ.push_back(Vector::Ones(Ti));
    for (auto tb : breaks) {
        const auto d = break_dummies(T, tb, BreakModel::C);
        Vector impulse = Vector::Zero(Ti);
        impulse(static_cast<Eigen::Index>(tb)) = 1.0;  // t = tb+1
        Z.push_back(to_vector(d.du));
        dZ.push_back(impulse);
    }
    if (slope) {
        for (auto tb : breaks) {
            const auto d = break_dummies(T, tb, BreakModel::C);
            Z.push_back(to_vector(d.dt));
            dZ.push_back(to_vector(d.du));
        }
    }

    const Vector dy = diff_at_t(y);
    // first-difference regression over t = 2..T
    const Eigen::Index n = Ti - 1;
    Matrix X(n, static_cast<Eigen::Index>(dZ.size()));
    for (std::size_t j = 0; j < dZ.size(); ++j) X.col(static_cast<Eigen::Index>(j)) = dZ[j].tail(n);
    const OlsFit step1 = ols_fit(dy.tail(n), X);
    const Vector& delta = step1.coefficients;

    Vector zdelta = Vector::Zero(Ti);
    for (std::size_t j = 0; j < Z.size(); ++j) zdelta += delta(static_cast<Eigen::Index>(j)) * Z[j];
    const double psi = y(0) - zdelta(0);
    const Vector S = y - Vector::Constant(Ti, psi) - zdelta;

    AugmentedRegression reg;
    reg.dep = dy;
    reg.fixed = std::move(dZ);
    reg.level = lag1_at_t(S);
    reg.aug = diff_at_t(S);
    return reg;
}

}  // namespace

double ls_statistic_at(const Vector& y, BreakModel model, std::span<const std::size_t> breaks,
                       std::size_t lag) {
    const AugmentedRegression reg = ls_regression(y, model, breaks);
    return fit_augmented(reg, lag, lag + 2).statistic;
}

CriticalValues ls_critical_values(BreakModel model, std::size_t n_breaks) {
    if (n_breaks == 2) {
        if (model == BreakModel::A) return {{-4.545, -3.842, -3.504}};
        return {{-5.823, -5.286, -4.989}};
    }
    if (model == BreakModel::A) return {{-4.239, -3.566, -3.211}};
    // one-break model C, break fraction 0.5
    return {{-5.11, -4.51, -4.17}};
}

BreakTestReport ls_test(const TimeSeries& y, BreakModel model, std::size_t n_breaks,
                        const AdfSpec& spec, const BreakSearchOptions& options) {
    check_finite(y);
    if (model == BreakModel::B) {
        throw Error(ErrorCode::InvalidArgument, "LS test supports models A and C only");
    }
    if (n_breaks != 1 && n_breaks != 2) {
        throw Error(ErrorCode::InvalidArgument, "LS test takes one or two breaks");
    }
    const std::size_t T = y.size();
    const BreakRange range = break_range(T, options.trim);
    std::size_t kmax = spec.max_lag.value_or(default_max_lag(T));
    if (spec.lag_rule.kind == LagRule::Kind::Fixed) kmax = std::max(kmax, spec.lag_rule.fixed);
    kmax = lag_cap_for_breaks(kmax, range.lo);
    LagRule rule = spec.lag_rule;
    if (rule.kind == LagRule::Kind::Fixed) rule.fixed = std::min(rule.fixed, kmax);
    if (T < kmax + 2 + 15) {
        throw Error(ErrorCode::SeriesTooShort, fmt::format("T={} too short for LS", T));
    }

    std::vector<std::vector<std::size_t>> candidates;
    if (n_breaks == 1) {
        for (std::size_t tb = range.lo; tb <= range.hi; ++tb) candidates.push_back({tb});
    } else {
        for (const auto& p : break_pairs(range)) candidates.push_back({p[0], p[1]});
    }
    if (candidates.empty()) throw Error(ErrorCode::SeriesTooShort, "no admissible break pairs");

    const Vector yv = y.as_vector();
    std::vector<CandidateStat> profile(candidates.size());
    const bool fast = n_breaks == 2 && model == BreakModel::A &&
                      rule.kind == LagRule::Kind::Fixed && rule.fixed == 0;
    if (fast) {
        const LsModelAFastGrid grid(yv);
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            profile[i] = {candidates[i], grid.statistic(candidates[i][0], candidates[i][1]), 0};
        }
    } else {
        parallel_for(candidates.size(), options.workers, [&](std::size_t i) {
            const AugmentedFit f = select_and_fit(ls_regression(yv, model, candidates[i]), kmax, rule);
            profile[i] = {candidates[i], f.statistic, f.lag};
        });
    }

    BreakTestReport rep;
    rep.test = UnitRootTest::LS;
    rep.model = model;
    rep.series = y.name;
    rep.start_year = y.start_year;
    rep.n_obs = T;
    reduce_profile<void>(rep, std::move(profile));
    rep.critical_values = ls_critical_values(model, n_breaks);
    rep.reject_at = left_tail_rejections(rep.statistic, rep.critical_values);
    return rep;
}

// --------------------------------------------------------------------------
// Closed-form two-break Model A grid

LsModelAFastGrid::LsModelAFastGrid(const Vector& y) : T_(static_cast<std::size_t>(y.size())) {
    if (T_ < 6) throw Error(ErrorCode::SeriesTooShort, "LS grid needs T >= 6");
    y_.assign(y.data(), y.data() + y.size());
    d_.assign(T_ + 1, 0.0);
    for (std::size_t t = 2; t <= T_; ++t) d_[t] = y_[t - 1] - y_[t - 2];
    const std::size_t m = T_ - 1;
    pu_.assign(m + 1, 0.0);
    pu2_ = pus_ = pud_ = psd_ = pd_ = pd2_ = pu_;
    for (std::size_t s = 1; s <= m; ++s) {
        const double u = y_[s - 1] - y_[0];
        const double e = static_cast<double>(s - 1);
        const double d = d_[s + 1];
        pu_[s] = pu_[s - 1] + u;
        pu2_[s] = pu2_[s - 1] + u * u;
        pus_[s] = pus_[s - 1] + u * e;
        pud_[s] = pud_[s - 1] + u * d;
        psd_[s] = psd_[s - 1] + e * d;
        pd_[s] = pd_[s - 1] + d;
        pd2_[s] = pd2_[s - 1] + d * d;
    }
}

double LsModelAFastGrid::statistic(std::size_t tb1, std::size_t tb2) const {
    if (tb1 < 1 || tb2 <= tb1 || tb2 > T_ - 1) {
        throw Error(ErrorCode::BreakOutOfRange, fmt::format("pair ({}, {})", tb1, tb2));
    }
    const std::size_t m = T_ - 1;  // s = 1..m
    const double n = static_cast<double>(T_ - 3);
    const double d1 = d_[tb1 + 1];
    const double d2 = d_[tb2 + 1];
    const double g = ((y_[T_ - 1] - y_[0]) - d1 - d2) / n;
    const double b1 = d1 - g;
    const double b2 = d2 - g;

    // sums of e = s-1 and e^2 over s = a..m
    auto sum_e = [](std::size_t a, std::size_t b) {
        // sum_{s=a}^{b} (s-1)
        if (a > b) return 0.0;
        const double lo = static_cast<double>(a - 1);
        const double hi = static_cast<double>(b - 1);
        return (lo + hi) * (hi - lo + 1.0) / 2.0;
    };
    auto sum_e2 = [](std::size_t a, std::size_t b) {
        if (a > b) return 0.0;
        auto f = [](double k) { return k * (k + 1.0) * (2.0 * k + 1.0) / 6.0; };  // sum_{0..k} i^2
        const double hi = static_cast<double>(b - 1);
        const double lo = static_cast<double>(a - 1);
        return f(hi) - (lo >= 1.0 ? f(lo - 1.0) : 0.0);
    };
    auto tail = [m](const std::vector<double>& p, std::size_t tb) { return p[m] - p[tb]; };

    const double N1 = static_cast<double>(m - tb1);
    const double N2 = static_cast<double>(m - tb2);

    double sx = pu_[m] - g * sum_e(1, m) - b1 * N1 - b2 * N2;
    double sxx = pu2_[m] + g * g * sum_e2(1, m) + b1 * b1 * N1 + b2 * b2 * N2 -
                 2.0 * g * pus_[m] - 2.0 * b1 * tail(pu_, tb1) - 2.0 * b2 * tail(pu_, tb2) +
                 2.0 * g * b1 * sum_e(tb1 + 1, m) + 2.0 * g * b2 * sum_e(tb2 + 1, m) +
                 2.0 * b1 * b2 * N2;
    double sxd = pud_[m] - g * psd_[m] - b1 * tail(pd_, tb1) - b2 * tail(pd_, tb2);
    double sd = pd_[m];
    double sdd = pd2_[m];

    // drop the two impulse observations t = tb_j + 1, i.e. s = tb_j
    for (std::size_t tb : {tb1, tb2}) {
        const double u = y_[tb - 1] - y_[0];
        const double x = u - g * static_cast<double>(tb - 1) - b1 * (tb > tb1 ? 1.0 : 0.0) -
                         b2 * (tb > tb2 ? 1.0 : 0.0);
        const double d = d_[tb + 1];
        sx -= x;
        sxx -= x * x;
        sxd -= x * d;
        sd -= d;
        sdd -= d * d;
    }

    const double Sxx = sxx - sx * sx / n;
    const double Sxd = sxd - sx * sd / n;
    const double Sdd = sdd - sd * sd / n;
    const double phi = Sxd / Sxx;
    const double ssr = Sdd - Sxd * phi;
    const double sigma2 = ssr / static_cast<double>(T_ - 5);
    return phi / std::sqrt(sigma2 / Sxx);
}

}  // namespace tsecon
