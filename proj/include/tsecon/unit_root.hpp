#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "tsecon/linalg.hpp"
#include "tsecon/timeseries.hpp"

namespace tsecon {

enum class Deterministic { None, Constant, ConstantTrend };

struct LagRule {
    enum class Kind { Fixed, TSig10, Aic };
    Kind kind = Kind::TSig10;
    std::size_t fixed = 0;

    static LagRule fixed_at(std::size_t k) { return {Kind::Fixed, k}; }
    static LagRule t_sig_10pct() { return {Kind::TSig10, 0}; }
    static LagRule aic() { return {Kind::Aic, 0}; }
};

struct AdfSpec {
    Deterministic deterministic = Deterministic::Constant;
    /// Upper bound for lag search; defaults to floor(12 (T/100)^0.25).
    std::optional<std::size_t> max_lag;
    LagRule lag_rule = LagRule::t_sig_10pct();
};

/// floor(12 (T/100)^(1/4)), capped below T/3.
[[nodiscard]] std::size_t default_max_lag(std::size_t T);

enum class Level { Pct1 = 0, Pct5 = 1, Pct10 = 2 };
inline constexpr std::array<Level, 3> kLevels{Level::Pct1, Level::Pct5, Level::Pct10};
[[nodiscard]] std::string_view to_string(Level level) noexcept;

/// Left-tail critical values ordered {1%, 5%, 10%}.
struct CriticalValues {
    std::array<double, 3> values{};
    [[nodiscard]] double at(Level l) const { return values[static_cast<std::size_t>(l)]; }
};

/// Reject when statistic < critical value.
[[nodiscard]] std::array<bool, 3> left_tail_rejections(double statistic, const CriticalValues& cv);

enum class UnitRootTest { ADF, ZA, LS };
[[nodiscard]] std::string_view to_string(UnitRootTest t) noexcept;

struct CandidateStat {
    std::vector<std::size_t> breaks;  // 1-based break indices, ascending
    double statistic = 0.0;
    std::size_t lag = 0;
};

struct BreakTestReport {
    UnitRootTest test = UnitRootTest::ADF;
    BreakModel model = BreakModel::A;
    std::string series;
    int start_year = 0;  // calendar year of index 1
    std::size_t n_obs = 0;
    double statistic = 0.0;
    std::vector<std::size_t> break_indices;
    std::vector<int> break_years;
    std::size_t chosen_lag = 0;
    std::vector<CandidateStat> candidate_profile;
    CriticalValues critical_values;
    std::array<bool, 3> reject_at{};

    [[nodiscard]] bool rejects(Level l) const { return reject_at[static_cast<std::size_t>(l)]; }
};

/// Regression Dy_t = mu + gamma t + rho y_{t-1} + sum c_i Dy_{t-i} + e_t.
[[nodiscard]] BreakTestReport adf_test(const TimeSeries& y, const AdfSpec& spec = {});

/// MacKinnon response-surface critical values for the DF t-statistic.
[[nodiscard]] CriticalValues adf_critical_values(Deterministic det, std::size_t n_obs);

struct BreakSearchOptions {
    double trim = 0.15;
    std::size_t workers = 1;
};

/// Zivot-Andrews: minimum ADF t-statistic over single-break candidates,
/// regressions always carry a constant and trend plus the model's dummies.
[[nodiscard]] BreakTestReport za_test(const TimeSeries& y, BreakModel model,
                                      const AdfSpec& spec = {},
                                      const BreakSearchOptions& options = {});

/// ZA statistic at one fixed break with a fixed lag. With include_dummies
/// false the regression is the plain constant+trend ADF regression.
[[nodiscard]] double za_statistic_at(const Vector& y, BreakModel model, std::size_t tb,
                                     std::size_t lag, bool include_dummies = true);

[[nodiscard]] CriticalValues za_critical_values(BreakModel model);

/// Lee-Strazicich minimum LM test with one or two breaks (models A and C).
[[nodiscard]] BreakTestReport ls_test(const TimeSeries& y, BreakModel model,
                                      std::size_t n_breaks, const AdfSpec& spec = {},
                                      const BreakSearchOptions& options = {});

/// LM t-statistic at fixed break indices and a fixed augmentation lag.
[[nodiscard]] double ls_statistic_at(const Vector& y, BreakModel model,
                                     std::span<const std::size_t> breaks, std::size_t lag);

/// Closed-form evaluation of the two-break Model A LM statistic with no
/// augmentation lags, O(1) per pair after O(T) prefix sums.
class LsModelAFastGrid {
public:
    explicit LsModelAFastGrid(const Vector& y);
    [[nodiscard]] double statistic(std::size_t tb1, std::size_t tb2) const;

private:
    std::size_t T_;
    std::vector<double> y_;
    std::vector<double> d_;  // d_[t] = y_t - y_{t-1}, t = 2..T (1-based)
    // prefix sums over s = 1..T-1, index s holds sum_{r<=s}
    std::vector<double> pu_, pu2_, pus_, pud_, psd_, pd_, pd2_;
};

[[nodiscard]] CriticalValues ls_critical_values(BreakModel model, std::size_t n_breaks);

/// Candidate break range [ceil(trim T), floor((1-trim) T)] clipped to [2, T-2].
struct BreakRange {
    std::size_t lo = 0;
    std::size_t hi = 0;
    std::size_t min_gap = 0;  // ceil(trim T)
};
[[nodiscard]] BreakRange break_range(std::size_t T, double trim);

/// Admissible (tb1, tb2) pairs, tb1 < tb2 with tb2 - tb1 >= min_gap.
[[nodiscard]] std::vector<std::array<std::size_t, 2>> break_pairs(const BreakRange& range);

/// Generic Dickey-Fuller style regression used by ADF, LS and the residual
/// tests. Every column is stored at its 1-based time index t (position t-1):
/// dep_t is regressed on fixed_t, level_t and aug_{t-1..t-p}.
struct AugmentedRegression {
    Vector dep;
    std::vector<Vector> fixed;
    Vector level;
    Vector aug;
};

struct AugmentedFit {
    double statistic = 0.0;  // t-ratio on the level regressor
    double coefficient = 0.0;
    std::size_t lag = 0;
    std::size_t n_obs = 0;
    double ssr = 0.0;
};

/// Fits with p augmentation lags on rows t = first_t..T (first_t >= p + 2).
[[nodiscard]] AugmentedFit fit_augmented(const AugmentedRegression& reg, std::size_t p,
                                         std::size_t first_t);

/// Chooses the lag on the common sample t = max_lag+2..T, then refits with
/// the chosen lag on its own maximal sample.
[[nodiscard]] AugmentedFit select_and_fit(const AugmentedRegression& reg, std::size_t max_lag,
                                          LagRule rule);

}  // namespace tsecon
