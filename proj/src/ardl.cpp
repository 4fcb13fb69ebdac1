#include "tsecon/ardl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "tsecon/parallel.hpp"

namespace tsecon {

namespace {

std::vector<std::string> default_names(Eigen::Index m) {
    std::vector<std::string> out;
    for (Eigen::Index k = 0; k < m; ++k) out.push_back(fmt::format("x{}", k + 1));
    return out;
}

std::size_t max_of(const std::vector<std::size_t>& q) {
    return q.empty() ? 0 : *std::max_element(q.begin(), q.end());
}

void name_layout(ArdlFit& fit) {
    fit.variable_layout.clear();
    fit.variable_layout.push_back("C");
    for (std::size_t i = 1; i <= fit.p; ++i) fit.variable_layout.push_back(fmt::format("{}(-{})", fit.dependent, i));
    for (std::size_t k = 0; k < fit.q.size(); ++k) {
        fit.variable_layout.push_back(fit.regressors[k]);
        for (std::size_t j = 1; j <= fit.q[k]; ++j) {
            fit.variable_layout.push_back(fmt::format("{}(-{})", fit.regressors[k], j));
        }
    }
}

}  // namespace

ArdlFit ardl_fit(const Vector& y, const Matrix& X, std::size_t p, const std::vector<std::size_t>& q,
                 std::optional<std::size_t> first_t) {
    if (p < 1) throw Error(ErrorCode::InvalidArgument, "ARDL needs p >= 1");
    if (X.rows() != y.size()) throw Error(ErrorCode::DimensionMismatch, "y and X lengths differ");
    if (static_cast<std::size_t>(X.cols()) != q.size()) {
        throw Error(ErrorCode::DimensionMismatch, "one lag order per regressor required");
    }
    const auto T = static_cast<std::size_t>(y.size());
    const std::size_t start = std::max(p, max_of(q)) + 1;
    const std::size_t t0 = first_t.value_or(start);
    if (t0 < start) throw Error(ErrorCode::InvalidArgument, "first row leaves lags undefined");
    if (t0 > T) throw Error(ErrorCode::InsufficientSample, "no estimation rows");
    const std::size_t n = T - t0 + 1;
    std::size_t K = 1 + p;
    for (auto qk : q) K += qk + 1;
    if (n <= K) {
        throw Error(ErrorCode::InsufficientSample, fmt::format("{} rows for {} ARDL parameters", n, K));
    }

    ArdlFit fit;
    fit.p = p;
    fit.q = q;
    fit.regressors = default_names(X.cols());
    fit.dependent = "y";
    fit.first_t = t0;
    fit.first_year = static_cast<int>(t0);
    fit.y_full = y;
    fit.x_full = X;
    fit.y = y.segment(static_cast<Eigen::Index>(t0 - 1), static_cast<Eigen::Index>(n));
    fit.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(K));

    const auto col_at = [&](const Vector& v, std::size_t shift) {
        return v.segment(static_cast<Eigen::Index>(t0 - 1 - shift), static_cast<Eigen::Index>(n));
    };
    Eigen::Index c = 0;
    fit.X.col(c++).setOnes();
    for (std::size_t i = 1; i <= p; ++i) fit.X.col(c++) = col_at(y, i);
    for (Eigen::Index k = 0; k < X.cols(); ++k) {
        const Vector xk = X.col(k);
        for (std::size_t j = 0; j <= q[static_cast<std::size_t>(k)]; ++j) fit.X.col(c++) = col_at(xk, j);
    }
    fit.levels_fit = ols_fit(fit.y, fit.X);
    name_layout(fit);
    return fit;
}

ArdlFit ardl_fit(const TimeSeries& y, const Dataset& X, std::size_t p, const std::vector<std::size_t>& q) {
    if (X.start_year() != y.start_year || X.size() != y.size()) {
        throw Error(ErrorCode::AlignmentMismatch, "dependent and regressors are not aligned");
    }
    ArdlFit fit = ardl_fit(y.as_vector(), X.as_matrix(), p, q);
    fit.dependent = y.name;
    fit.regressors = X.names();
    fit.first_year = y.start_year + static_cast<int>(fit.first_t) - 1;
    name_layout(fit);
    return fit;
}

ArdlSelection ardl_select(const Vector& y, const Matrix& X, std::size_t p_max, std::size_t q_max,
                          SelectionCriterion criterion, std::size_t workers) {
    if (p_max < 1) throw Error(ErrorCode::InvalidArgument, "p_max must be >= 1");
    const auto m = static_cast<std::size_t>(X.cols());
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> grid;
    std::vector<std::size_t> q(m, 0);
    for (std::size_t p = 1; p <= p_max; ++p) {
        std::fill(q.begin(), q.end(), 0);
        while (true) {
            grid.emplace_back(p, q);
            // odometer, q_1 most significant
            std::size_t pos = m;
            while (pos > 0 && q[pos - 1] == q_max) q[--pos] = 0;
            if (pos == 0) break;
            ++q[pos - 1];
        }
    }

    const std::size_t common = std::max(p_max, q_max) + 1;
    std::vector<double> score(grid.size());
    parallel_for(grid.size(), workers, [&](std::size_t i) {
        const ArdlFit f = ardl_fit(y, X, grid[i].first, grid[i].second, common);
        const auto ic = information_criteria(f.levels_fit.ssr, f.levels_fit.T, f.levels_fit.k);
        score[i] = criterion == SelectionCriterion::Aic ? ic.aic : ic.bic;
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (score[i] < score[best]) best = i;
    }
    ArdlSelection sel;
    sel.candidates = grid.size();
    sel.criterion_value = score[best];
    sel.best = ardl_fit(y, X, grid[best].first, grid[best].second);
    return sel;
}

ArdlSelection ardl_select(const TimeSeries& y, const Dataset& X, std::size_t p_max, std::size_t q_max,
                          SelectionCriterion criterion, std::size_t workers) {
    if (X.start_year() != y.start_year || X.size() != y.size()) {
        throw Error(ErrorCode::AlignmentMismatch, "dependent and regressors are not aligned");
    }
    ArdlSelection sel = ardl_select(y.as_vector(), X.as_matrix(), p_max, q_max, criterion, workers);
    sel.best.dependent = y.name;
    sel.best.regressors = X.names();
    sel.best.first_year = y.start_year + static_cast<int>(sel.best.first_t) - 1;
    name_layout(sel.best);
    return sel;
}

EcmRegression ecm_regression(const ArdlFit& fit) {
    const Vector& y = fit.y_full;
    const Matrix& X = fit.x_full;
    const std::size_t t0 = fit.first_t;
    const auto n = static_cast<Eigen::Index>(fit.levels_fit.T);
    const std::size_t m = fit.q.size();

    // value of v at time t - shift for rows t = t0..T
    const auto at = [&](const Vector& v, std::size_t shift) {
        return Vector(v.segment(static_cast<Eigen::Index>(t0 - 1 - shift), n));
    };
    const auto diff_at = [&](const Vector& v, std::size_t shift) { return Vector(at(v, shift) - at(v, shift + 1)); };

    std::vector<Vector> cols;
    EcmRegression out;
    cols.push_back(Vector::Ones(n));
    out.columns.push_back("C");
    cols.push_back(at(y, 1));
    out.columns.push_back(fmt::format("{}(-1)", fit.dependent));
    for (std::size_t k = 0; k < m; ++k) {
        const Vector xk = X.col(static_cast<Eigen::Index>(k));
        const bool lagged = fit.q[k] >= 1;
        cols.push_back(at(xk, lagged ? 1 : 0));
        out.columns.push_back(lagged ? fmt::format("{}(-1)", fit.regressors[k]) : fit.regressors[k]);
    }
    out.n_level_terms = 1 + m;
    for (std::size_t i = 1; i < fit.p; ++i) {
        cols.push_back(diff_at(y, i));
        out.columns.push_back(fmt::format("D({})(-{})", fit.dependent, i));
    }
    for (std::size_t k = 0; k < m; ++k) {
        const Vector xk = X.col(static_cast<Eigen::Index>(k));
        for (std::size_t j = 0; j < fit.q[k]; ++j) {
            cols.push_back(diff_at(xk, j));
            out.columns.push_back(j == 0 ? fmt::format("D({})", fit.regressors[k])
                                         : fmt::format("D({})(-{})", fit.regressors[k], j));
        }
    }
    out.dy = diff_at(y, 0);
    out.Z = hstack(cols);
    out.fit = ols_fit(out.dy, out.Z);
    return out;
}

std::string_view to_string(BoundsVerdict v) noexcept {
    switch (v) {
        case BoundsVerdict::Cointegrated: return "cointegrated";
        case BoundsVerdict::NotCointegrated: return "not_cointegrated";
        case BoundsVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

BoundsPair pss_bounds(std::size_t k, Level level) {
    // rows k = 1..6; columns {1%, 5%, 10%}
    static constexpr BoundsPair table[6][3] = {
        {{6.84, 7.84}, {4.94, 5.73}, {4.04, 4.78}}, {{5.15, 6.36}, {3.79, 4.85}, {3.17, 4.14}},
        {{4.29, 5.61}, {3.23, 4.35}, {2.72, 3.77}}, {{3.74, 5.06}, {2.86, 4.01}, {2.45, 3.52}},
        {{3.41, 4.68}, {2.62, 3.79}, {2.26, 3.35}}, {{3.15, 4.43}, {2.45, 3.61}, {2.12, 3.23}}};
    if (k < 1 || k > 6) throw Error(ErrorCode::InvalidArgument, fmt::format("no bounds for k = {}", k));
    return table[k - 1][static_cast<std::size_t>(level)];
}

BoundsDecision bounds_test(const ArdlFit& fit) {
    const EcmRegression ecm = ecm_regression(fit);
    const auto n = static_cast<std::size_t>(ecm.dy.size());
    const std::size_t K = static_cast<std::size_t>(ecm.Z.cols());
    const std::size_t r = ecm.n_level_terms;
    if (n <= K) throw Error(ErrorCode::InsufficientSample, "no residual degrees of freedom");

    Matrix Zr(ecm.Z.rows(), static_cast<Eigen::Index>(K - r));
    Zr.col(0) = ecm.Z.col(0);
    Zr.rightCols(static_cast<Eigen::Index>(K - r - 1)) = ecm.Z.rightCols(static_cast<Eigen::Index>(K - r - 1));
    const OlsFit restricted = ols_fit(ecm.dy, Zr);

    BoundsDecision d;
    d.k = fit.q.size();
    d.ssr_unrestricted = ecm.fit.ssr;
    d.ssr_restricted = restricted.ssr;
    d.df_num = r;
    d.df_den = n - K;
    d.f_statistic = ((restricted.ssr - ecm.fit.ssr) / static_cast<double>(r)) /
                    (ecm.fit.ssr / static_cast<double>(n - K));
    const BoundsPair b = pss_bounds(d.k, Level::Pct5);
    d.lower_bound_5pct = b.lower;
    d.upper_bound_5pct = b.upper;
    d.verdict = d.f_statistic > b.upper   ? BoundsVerdict::Cointegrated
                : d.f_statistic < b.lower ? BoundsVerdict::NotCointegrated
                                          : BoundsVerdict::Inconclusive;
    return d;
}

LongRunEstimate ardl_longrun(const ArdlFit& fit) {
    const Vector& b = fit.levels_fit.coefficients;
    const Matrix& V = fit.levels_fit.coef_covariance;
    const auto K = b.size();
    const auto p = static_cast<Eigen::Index>(fit.p);
    const double A = b.segment(1, p).sum();
    const double denom = 1.0 - A;
    if (std::abs(denom) <= 1e-6) {
        throw Error(ErrorCode::UnitRootDenominator,
                    fmt::format("1 - sum of own-lag coefficients = {:.3g}", denom));
    }
    const std::size_t m = fit.q.size();
    LongRunEstimate out;
    out.estimator = Estimator::ARDL;
    out.names = fit.regressors;
    out.names.push_back("C");
    out.coefficients.resize(static_cast<Eigen::Index>(m + 1));
    out.std_errors.resize(static_cast<Eigen::Index>(m + 1));

    const auto delta = [&](Eigen::Index start, Eigen::Index len, Eigen::Index slot) {
        const double theta = b.segment(start, len).sum() / denom;
        Vector g = Vector::Zero(K);
        g.segment(1, p).setConstant(theta / denom);
        g.segment(start, len).array() += 1.0 / denom;
        out.coefficients(slot) = theta;
        out.std_errors(slot) = std::sqrt(g.dot(V * g));
    };
    Eigen::Index start = 1 + p;
    for (std::size_t k = 0; k < m; ++k) {
        const auto len = static_cast<Eigen::Index>(fit.q[k] + 1);
        delta(start, len, static_cast<Eigen::Index>(k));
        start += len;
    }
    delta(0, 1, static_cast<Eigen::Index>(m));
    out.t_stats = out.coefficients.cwiseQuotient(out.std_errors);
    out.effective_T = fit.levels_fit.T;
    out.tuning = {0, fit.p, Kernel::Bartlett, 0};
    out.regression = {fit.y, fit.X, fit.variable_layout, fit.levels_fit, fit.first_year};
    return out;
}

EcmForm ecm_reparameterize(const ArdlFit& fit) {
    const EcmRegression ecm = ecm_regression(fit);
    EcmForm out;
    const Vector se = ecm.fit.std_errors();
    out.adjustment = ecm.fit.coefficients(1);
    out.adjustment_se = se(1);

    std::vector<double> vals;
    std::vector<double> ses;
    const std::size_t m = fit.q.size();
    const Eigen::Index diff_start = static_cast<Eigen::Index>(1 + ecm.n_level_terms);
    // dependent lags first
    for (std::size_t i = 1; i < fit.p; ++i) {
        const auto c = diff_start + static_cast<Eigen::Index>(i - 1);
        out.short_run_names.push_back(ecm.columns[static_cast<std::size_t>(c)]);
        vals.push_back(ecm.fit.coefficients(c));
        ses.push_back(se(c));
    }
    Eigen::Index c = diff_start + static_cast<Eigen::Index>(fit.p - 1);
    for (std::size_t k = 0; k < m; ++k) {
        if (fit.q[k] == 0) {
            // contemporaneous level coefficient doubles as the impact effect
            const auto lc = static_cast<Eigen::Index>(2 + k);
            out.short_run_names.push_back(fmt::format("D({})", fit.regressors[k]));
            vals.push_back(ecm.fit.coefficients(lc));
            ses.push_back(se(lc));
            continue;
        }
        for (std::size_t j = 0; j < fit.q[k]; ++j, ++c) {
            out.short_run_names.push_back(ecm.columns[static_cast<std::size_t>(c)]);
            vals.push_back(ecm.fit.coefficients(c));
            ses.push_back(se(c));
        }
    }
    out.short_run_names.push_back("C");
    vals.push_back(ecm.fit.coefficients(0));
    ses.push_back(se(0));
    out.short_run = to_vector(vals);
    out.short_run_se = to_vector(ses);

    out.ecm_fitted_levels = ecm.fit.fitted + ecm.Z.col(1);
    out.long_run = ardl_longrun(fit);
    if (bounds_test(fit).verdict != BoundsVerdict::Cointegrated) {
        out.warnings.push_back("bounds test does not establish a levels relationship");
    }
    return out;
}

}  // namespace tsecon
