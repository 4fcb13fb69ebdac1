#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tsecon/linalg.hpp"
#include "tsecon/longrun.hpp"
#include "tsecon/timeseries.hpp"
#include "tsecon/unit_root.hpp"

namespace tsecon {

/// ARDL(p, q_1..q_k) in levels:
/// y_t = c + sum_{i=1..p} a_i y_{t-i} + sum_k sum_{j=0..q_k} b_kj x_{k,t-j} + e_t.
struct ArdlFit {
    std::size_t p = 1;
    std::vector<std::size_t> q;
    std::vector<std::string> regressors;
    std::string dependent;
    OlsFit levels_fit;
    Vector y;   // dependent over the estimation rows
    Matrix X;   // levels design, columns in variable_layout order
    std::vector<std::string> variable_layout;  // "C", "y(-1)".., "x", "x(-1)"..
    std::size_t first_t = 1;  // 1-based first estimation row
    int first_year = 0;

    // source data kept for re-parameterization
    Vector y_full;
    Matrix x_full;

    [[nodiscard]] std::size_t effective_T() const { return levels_fit.T; }
};

/// Estimation rows start at first_t when given, else at max(p, max q) + 1.
[[nodiscard]] ArdlFit ardl_fit(const Vector& y, const Matrix& X, std::size_t p,
                               const std::vector<std::size_t>& q,
                               std::optional<std::size_t> first_t = std::nullopt);
[[nodiscard]] ArdlFit ardl_fit(const TimeSeries& y, const Dataset& X, std::size_t p,
                               const std::vector<std::size_t>& q);

enum class SelectionCriterion { Aic, Bic };

struct ArdlSelection {
    ArdlFit best;
    std::size_t candidates = 0;
    double criterion_value = 0.0;  // on the common sample
};

/// Exhaustive search, p in 1..p_max and each q_k in 0..q_max, on the
/// common sample t = max(p_max, q_max)+1..T. Ties go to the
/// lexicographically smallest (p, q_1, ...).
[[nodiscard]] ArdlSelection ardl_select(const TimeSeries& y, const Dataset& X, std::size_t p_max,
                                        std::size_t q_max, SelectionCriterion criterion,
                                        std::size_t workers = 1);
[[nodiscard]] ArdlSelection ardl_select(const Vector& y, const Matrix& X, std::size_t p_max,
                                        std::size_t q_max, SelectionCriterion criterion,
                                        std::size_t workers = 1);

/// Conditional error-correction regression on the same rows as the levels fit:
/// dy_t on [1, y_{t-1}, l_k, dy_{t-1..t-p+1}, dx_{k,t..t-q_k+1}] where l_k is
/// x_{k,t-1} when q_k >= 1 and x_{k,t} otherwise.
struct EcmRegression {
    Vector dy;
    Matrix Z;
    std::vector<std::string> columns;
    OlsFit fit;
    std::size_t n_level_terms = 0;  // y_{t-1} and the l_k, columns 1..n_level_terms
};
[[nodiscard]] EcmRegression ecm_regression(const ArdlFit& fit);

enum class BoundsVerdict { Cointegrated, NotCointegrated, Inconclusive };
[[nodiscard]] std::string_view to_string(BoundsVerdict v) noexcept;

struct BoundsDecision {
    double f_statistic = 0.0;
    std::size_t k = 0;
    double lower_bound_5pct = 0.0;
    double upper_bound_5pct = 0.0;
    BoundsVerdict verdict = BoundsVerdict::Inconclusive;
    double ssr_unrestricted = 0.0;
    double ssr_restricted = 0.0;
    std::size_t df_num = 0;
    std::size_t df_den = 0;
};

struct BoundsPair {
    double lower = 0.0;
    double upper = 0.0;
};
/// Unrestricted-intercept, no-trend bounds for k regressors (1..6).
[[nodiscard]] BoundsPair pss_bounds(std::size_t k, Level level);

[[nodiscard]] BoundsDecision bounds_test(const ArdlFit& fit);

struct EcmForm {
    std::vector<std::string> short_run_names;
    Vector short_run;
    Vector short_run_se;
    double adjustment = 0.0;
    double adjustment_se = 0.0;
    LongRunEstimate long_run;
    Vector ecm_fitted_levels;  // dy fitted + y_{t-1}, comparable to levels fitted
    std::vector<std::string> warnings;
};

[[nodiscard]] EcmForm ecm_reparameterize(const ArdlFit& fit);

/// theta_k = sum_j b_kj / (1 - sum a_i), constant c / (1 - sum a_i); delta-method SEs.
[[nodiscard]] LongRunEstimate ardl_longrun(const ArdlFit& fit);

}  // namespace tsecon
