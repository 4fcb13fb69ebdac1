#include "tsecon/longrun.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace tsecon {

std::string_view to_string(Estimator e) noexcept {
    switch (e) {
        case Estimator::DOLS: return "DOLS";
        case Estimator::FMOLS: return "FMOLS";
        case Estimator::ARDL: return "ARDL";
    }
    return "?";
}

std::size_t LongRunEstimate::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return i;
    }
    throw Error(ErrorCode::InvalidArgument, fmt::format("no coefficient named {}", name));
}

double LongRunEstimate::coefficient(std::string_view name) const {
    return coefficients(static_cast<Eigen::Index>(index_of(name)));
}
double LongRunEstimate::std_error(std::string_view name) const {
    return std_errors(static_cast<Eigen::Index>(index_of(name)));
}
double LongRunEstimate::t_stat(std::string_view name) const {
    return t_stats(static_cast<Eigen::Index>(index_of(name)));
}

namespace {

void check_inputs(const Vector& y, const Matrix& X, const std::vector<std::string>& names) {
    if (X.rows() != y.size()) throw Error(ErrorCode::DimensionMismatch, "y and X lengths differ");
    if (X.cols() < 1) throw Error(ErrorCode::InvalidArgument, "at least one regressor required");
    if (static_cast<std::size_t>(X.cols()) != names.size()) {
        throw Error(ErrorCode::DimensionMismatch, "regressor names do not match columns");
    }
}

/// Coefficients reordered from [C, X...] to [X..., C].
Vector reorder_constant_last(const Vector& b, Eigen::Index m) {
    Vector out(m + 1);
    out.head(m) = b.segment(1, m);
    out(m) = b(0);
    return out;
}

struct DolsDesign {
    Vector y;
    Matrix Z;  // [1, X, dX terms]
    std::size_t first_t = 1;
    std::vector<std::string> columns;
};

DolsDesign dols_design(const Vector& y, const Matrix& X, const std::vector<std::string>& names,
                       std::size_t leads, std::size_t lags, std::size_t first_t, std::size_t last_t) {
    const Eigen::Index m = X.cols();
    const bool augment = leads + lags > 0;
    const std::size_t n = last_t - first_t + 1;
    const std::size_t nd = augment ? (leads + lags + 1) : 0;
    DolsDesign d;
    d.first_t = first_t;
    d.y = y.segment(static_cast<Eigen::Index>(first_t - 1), static_cast<Eigen::Index>(n));
    d.Z.resize(static_cast<Eigen::Index>(n), 1 + m * static_cast<Eigen::Index>(1 + nd));
    d.Z.col(0).setOnes();
    d.Z.middleCols(1, m) = X.middleRows(static_cast<Eigen::Index>(first_t - 1), static_cast<Eigen::Index>(n));
    d.columns.push_back("C");
    for (const auto& nm : names) d.columns.push_back(nm);
    Eigen::Index c = 1 + m;
    for (long j = -static_cast<long>(lags); augment && j <= static_cast<long>(leads); ++j) {
        for (Eigen::Index k = 0; k < m; ++k) {
            for (std::size_t r = 0; r < n; ++r) {
                const long t = static_cast<long>(first_t + r) + j;  // 1-based index of dX_{t+j}
                d.Z(static_cast<Eigen::Index>(r), c) = X(t - 1, k) - X(t - 2, k);
            }
            d.columns.push_back(fmt::format("D({})({:+d})", names[static_cast<std::size_t>(k)], j));
            ++c;
        }
    }
    return d;
}

LongRunEstimate finish(Estimator est, const Vector& b, const Matrix& cov, Eigen::Index m,
                       const std::vector<std::string>& names, std::size_t n) {
    LongRunEstimate out;
    out.estimator = est;
    out.names = names;
    out.names.push_back("C");
    out.coefficients = reorder_constant_last(b.head(m + 1), m);
    Vector se_all = cov.diagonal().head(m + 1).cwiseSqrt();
    out.std_errors = reorder_constant_last(se_all, m);
    out.t_stats = out.coefficients.cwiseQuotient(out.std_errors);
    out.effective_T = n;
    return out;
}

}  // namespace

LongRunEstimate dols(const Vector& y, const Matrix& X, const std::vector<std::string>& names,
                     const DolsOptions& options) {
    check_inputs(y, X, names);
    const auto T = static_cast<std::size_t>(y.size());
    const std::size_t m = names.size();
    const bool augment = options.leads + options.lags > 0;
    const std::size_t first_t = augment ? options.lags + 2 : 1;
    if (T < options.leads + first_t) {
        throw Error(ErrorCode::InsufficientSample, "no rows left after leads and lags");
    }
    const std::size_t last_t = T - options.leads;
    const std::size_t n = last_t - first_t + 1;
    const std::size_t k = 1 + m * (1 + (augment ? options.leads + options.lags + 1 : 0));
    if (n <= k) {
        throw Error(ErrorCode::InsufficientSample,
                    fmt::format("{} rows for {} DOLS regressors", n, k));
    }
    const DolsDesign d = dols_design(y, X, names, options.leads, options.lags, first_t, last_t);
    const OlsFit fit = ols_fit(d.y, d.Z);
    const std::size_t bw = options.bandwidth.value_or(default_bandwidth(n));
    const double omega2 = long_run_variance(fit.residuals, bw);
    if (!(omega2 > 0.0)) throw Error(ErrorCode::NotPositiveDefinite, "non-positive residual long-run variance");
    // sigma2 (X'X)^-1 rescaled to omega2 (X'X)^-1
    const Matrix cov = fit.coef_covariance * (omega2 / fit.sigma2);

    LongRunEstimate out = finish(Estimator::DOLS, fit.coefficients, cov, static_cast<Eigen::Index>(m), names, n);
    out.tuning = {options.leads, options.lags, Kernel::Bartlett, bw};
    out.regression = {d.y, d.Z, d.columns, fit, static_cast<int>(first_t)};
    return out;
}

LongRunEstimate dols(const TimeSeries& y, const Dataset& X, const DolsOptions& options) {
    if (X.start_year() != y.start_year || X.size() != y.size()) {
        throw Error(ErrorCode::AlignmentMismatch, "dependent and regressors are not aligned");
    }
    LongRunEstimate out = dols(y.as_vector(), X.as_matrix(), X.names(), options);
    out.regression.first_year = y.start_year + out.regression.first_year - 1;
    return out;
}

std::size_t dols_select_bic(const TimeSeries& y, const Dataset& X, std::size_t max_j) {
    const Vector yv = y.as_vector();
    const Matrix Xm = X.as_matrix();
    const auto names = X.names();
    const auto T = static_cast<std::size_t>(yv.size());
    const std::size_t first_t = max_j + 2;
    if (T < max_j + first_t + 1) throw Error(ErrorCode::InsufficientSample, "too short for DOLS search");
    const std::size_t last_t = T - max_j;
    std::size_t best_j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j <= max_j; ++j) {
        const DolsDesign d = dols_design(yv, Xm, names, j, j, first_t, last_t);
        if (static_cast<Eigen::Index>(d.y.size()) <= d.Z.cols()) break;
        const OlsFit fit = ols_fit(d.y, d.Z);
        const double bic = information_criteria(fit.ssr, fit.T, fit.k).bic;
        if (bic < best) {
            best = bic;
            best_j = j;
        }
    }
    return best_j;
}

LongRunEstimate fmols(const Vector& y, const Matrix& X, const std::vector<std::string>& names,
                      const FmolsOptions& options) {
    check_inputs(y, X, names);
    const Eigen::Index T = y.size();
    const Eigen::Index m = X.cols();
    if (T <= m + 3) throw Error(ErrorCode::InsufficientSample, "too few observations for FMOLS");
    const Eigen::Index n = T - 1;  // rows t = 2..T

    Matrix Z(n, m + 1);
    Z.col(0).setOnes();
    Z.rightCols(m) = X.bottomRows(n);
    const Vector yt = y.tail(n);
    const OlsFit first = ols_fit(yt, Z);
    const Matrix dX = X.bottomRows(n) - X.topRows(n);

    Matrix U(n, m + 1);
    U.col(0) = first.residuals;
    U.rightCols(m) = dX;
    const std::size_t bw = options.bandwidth.value_or(default_bandwidth(static_cast<std::size_t>(n)));
    const LongRunCovariance lr = long_run_covariance(U, options.kernel, bw);
    const Matrix O22 = lr.omega.bottomRightCorner(m, m);
    const Eigen::LDLT<Matrix> o22(O22);
    if (o22.info() != Eigen::Success || !(o22.vectorD().array() > 0.0).all()) {
        throw Error(ErrorCode::NotPositiveDefinite, "long-run covariance of dX is not positive definite");
    }
    const Eigen::RowVectorXd O12 = lr.omega.block(0, 1, 1, m);
    const Eigen::RowVectorXd O12_O22inv = o22.solve(O12.transpose()).transpose();
    const Eigen::RowVectorXd L12 = lr.lambda_one_sided.block(0, 1, 1, m);
    const Matrix L22 = lr.lambda_one_sided.bottomRightCorner(m, m);
    const Eigen::RowVectorXd lambda_plus = L12 - O12_O22inv * L22;

    const Vector y_plus = yt - dX * O12_O22inv.transpose();
    Vector bias = Vector::Zero(m + 1);
    bias.tail(m) = static_cast<double>(n) * lambda_plus.transpose();

    const Matrix ZtZ = Z.transpose() * Z;
    const Eigen::LDLT<Matrix> ztz(ZtZ);
    const Vector b = ztz.solve(Z.transpose() * y_plus - bias);
    const double omega_1_2 = lr.omega(0, 0) - O12_O22inv.dot(O12);
    if (!(omega_1_2 > 0.0)) throw Error(ErrorCode::NotPositiveDefinite, "conditional long-run variance <= 0");
    const Matrix cov = omega_1_2 * ztz.solve(Matrix::Identity(m + 1, m + 1));

    LongRunEstimate out = finish(Estimator::FMOLS, b, cov, m, names, static_cast<std::size_t>(n));
    out.tuning = {0, 0, options.kernel, bw};

    // standardized-regressor condition number
    Matrix Xs = X;
    for (Eigen::Index j = 0; j < m; ++j) {
        const double mean = Xs.col(j).mean();
        const double sd = std::sqrt((Xs.col(j).array() - mean).square().sum() / static_cast<double>(T - 1));
        Xs.col(j) = (Xs.col(j).array() - mean) / (sd > 0.0 ? sd : 1.0);
    }
    const double kappa = 1.0 / std::sqrt(std::max(gram_rcond(Xs), std::numeric_limits<double>::min()));
    if (m > 1 && kappa > options.condition_warning) {
        out.warnings.push_back(
            fmt::format("regressors near-collinear (condition number {:.1f}); FMOLS corrections may be unreliable",
                        kappa));
    }

    std::vector<std::string> cols{"C"};
    for (const auto& nm : names) cols.push_back(nm);
    out.regression = {yt, Z, cols, first, 2};
    return out;
}

LongRunEstimate fmols(const TimeSeries& y, const Dataset& X, const FmolsOptions& options) {
    if (X.start_year() != y.start_year || X.size() != y.size()) {
        throw Error(ErrorCode::AlignmentMismatch, "dependent and regressors are not aligned");
    }
    LongRunEstimate out = fmols(y.as_vector(), X.as_matrix(), X.names(), options);
    out.regression.first_year = y.start_year + 1;
    return out;
}

}  // namespace tsecon
