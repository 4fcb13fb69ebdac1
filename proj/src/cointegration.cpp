#include "tsecon/cointegration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "tsecon/parallel.hpp"

namespace tsecon {

namespace {

// rows: k - r = 1..6; columns {1%, 5%, 10%}
constexpr double kTrace[6][3] = {{6.635, 3.841, 2.706},     {19.937, 15.495, 13.429},
                                 {35.458, 29.797, 27.067},  {54.682, 47.856, 44.494},
                                 {77.819, 69.819, 65.820},  {104.96, 95.754, 91.110}};
constexpr double kMaxEig[6][3] = {{6.635, 3.841, 2.706},    {18.520, 14.265, 12.297},
                                  {25.861, 21.131, 18.893}, {32.715, 27.584, 25.124},
                                  {39.370, 33.877, 31.239}, {45.869, 40.078, 37.278}};

void check_k_minus_r(std::size_t n) {
    if (n < 1 || n > 6) {
        throw Error(ErrorCode::InvalidArgument,
                    fmt::format("no embedded critical value for k-r = {}", n));
    }
}

/// Residuals of each column of Y regressed on Z.
Matrix residualize(const Matrix& Y, const Matrix& Z) {
    const Eigen::ColPivHouseholderQR<Matrix> qr(Z);
    if (qr.rank() < Z.cols()) throw Error(ErrorCode::RankDeficient, "concentration regressors are singular");
    return Y - Z * qr.solve(Y);
}

}  // namespace

double johansen_trace_critical(std::size_t k_minus_r, Level level) {
    check_k_minus_r(k_minus_r);
    return kTrace[k_minus_r - 1][static_cast<std::size_t>(level)];
}

double johansen_maxeig_critical(std::size_t k_minus_r, Level level) {
    check_k_minus_r(k_minus_r);
    return kMaxEig[k_minus_r - 1][static_cast<std::size_t>(level)];
}

std::size_t var_lag_order_bic(const Matrix& Y, std::size_t max_order) {
    const auto T = static_cast<std::size_t>(Y.rows());
    const auto k = static_cast<std::size_t>(Y.cols());
    if (max_order < 1) throw Error(ErrorCode::InvalidArgument, "max_order must be >= 1");
    if (T <= max_order + 1 + k * max_order) {
        throw Error(ErrorCode::InsufficientSample, "too few observations for VAR order search");
    }
    const std::size_t n = T - max_order;
    const Matrix Yt = Y.bottomRows(static_cast<Eigen::Index>(n));
    std::size_t best_p = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p = 1; p <= max_order; ++p) {
        Matrix Z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(1 + k * p));
        Z.col(0).setOnes();
        for (std::size_t i = 1; i <= p; ++i) {
            Z.middleCols(static_cast<Eigen::Index>(1 + k * (i - 1)), static_cast<Eigen::Index>(k)) =
                Y.middleRows(static_cast<Eigen::Index>(max_order - i), static_cast<Eigen::Index>(n));
        }
        const Matrix E = residualize(Yt, Z);
        const Matrix S = E.transpose() * E / static_cast<double>(n);
        const double logdet = S.llt().matrixLLT().diagonal().array().log().sum() * 2.0;
        const double params = static_cast<double>(k * (1 + k * p));
        const double bic = logdet + params * std::log(static_cast<double>(n)) / static_cast<double>(n);
        if (bic < best) {
            best = bic;
            best_p = p;
        }
    }
    return best_p;
}

JohansenResult johansen_test(const Matrix& levels, std::optional<std::size_t> lag_order,
                             JohansenCase det_case) {
    const auto T = static_cast<std::size_t>(levels.rows());
    const auto k = static_cast<std::size_t>(levels.cols());
    if (k < 2) throw Error(ErrorCode::InvalidArgument, "Johansen test needs at least 2 series");
    const std::size_t p = lag_order ? *lag_order : var_lag_order_bic(levels, 3);
    if (p < 1) throw Error(ErrorCode::InvalidArgument, "lag order must be >= 1");
    if (T <= p || T - p <= k * p + k + 1) {
        throw Error(ErrorCode::InsufficientSample,
                    fmt::format("T={} too short for k={} and lag order {}", T, k, p));
    }
    const std::size_t n = T - p;  // rows t = p+1..T
    const auto ni = static_cast<Eigen::Index>(n);
    const auto ki = static_cast<Eigen::Index>(k);

    const Matrix dY = levels.bottomRows(T - 1) - levels.topRows(T - 1);  // row i holds t = i+2
    Matrix Z0 = dY.bottomRows(ni);
    Matrix Z1 = levels.middleRows(static_cast<Eigen::Index>(p - 1), ni);
    Matrix Z2(ni, static_cast<Eigen::Index>(1 + k * (p - 1)));
    Z2.col(0).setOnes();
    for (std::size_t i = 1; i < p; ++i) {
        // dY_{t-i} for t = p+1..T lives at dY rows p-1-i..
        Z2.middleCols(static_cast<Eigen::Index>(1 + k * (i - 1)), ki) =
            dY.middleRows(static_cast<Eigen::Index>(p - 1 - i), ni);
    }
    const Matrix R0 = residualize(Z0, Z2);
    const Matrix R1 = residualize(Z1, Z2);
    const double Td = static_cast<double>(n);
    const Matrix S00 = R0.transpose() * R0 / Td;
    const Matrix S11 = R1.transpose() * R1 / Td;
    const Matrix S01 = R0.transpose() * R1 / Td;

    const Eigen::LDLT<Matrix> s00(S00);
    if (s00.info() != Eigen::Success || gram_rcond(R0) < kRankTolerance) {
        throw Error(ErrorCode::RankDeficient, "S00 is singular");
    }
    if (gram_rcond(R1) < kRankTolerance) throw Error(ErrorCode::RankDeficient, "S11 is singular");
    Matrix A = S01.transpose() * s00.solve(S01);
    A = 0.5 * (A + A.transpose());

    JohansenResult res;
    res.lag_order = p;
    res.effective_T = n;
    res.det_case = det_case;
    res.eigenvalues = generalized_eigen(A, S11);
    for (Eigen::Index i = 0; i < res.eigenvalues.size(); ++i) {
        res.eigenvalues(i) = std::clamp(res.eigenvalues(i), 0.0, std::nextafter(1.0, 0.0));
    }

    res.trace_stats.assign(k, 0.0);
    res.maxeig_stats.assign(k, 0.0);
    for (std::size_t r = 0; r < k; ++r) {
        res.maxeig_stats[r] = -Td * std::log1p(-res.eigenvalues(static_cast<Eigen::Index>(r)));
    }
    double acc = 0.0;
    for (std::size_t r = k; r-- > 0;) {
        acc += res.maxeig_stats[r];
        res.trace_stats[r] = acc;
    }
    for (std::size_t r = 0; r < k; ++r) {
        const std::size_t km = k - r;
        if (km <= 6) {
            res.critical_values_trace.push_back(johansen_trace_critical(km, Level::Pct5));
            res.critical_values_maxeig.push_back(johansen_maxeig_critical(km, Level::Pct5));
        } else {
            res.critical_values_trace.push_back(std::numeric_limits<double>::quiet_NaN());
            res.critical_values_maxeig.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    for (auto level : kLevels) {
        const auto li = static_cast<std::size_t>(level);
        std::size_t rank_t = k;
        std::size_t rank_m = k;
        for (std::size_t r = 0; r < k; ++r) {
            if (k - r > 6) continue;
            if (res.trace_stats[r] < johansen_trace_critical(k - r, level)) {
                rank_t = r;
                break;
            }
        }
        for (std::size_t r = 0; r < k; ++r) {
            if (k - r > 6) continue;
            if (res.maxeig_stats[r] < johansen_maxeig_critical(k - r, level)) {
                rank_m = r;
                break;
            }
        }
        res.selected_rank[li] = rank_t;
        res.selected_rank_maxeig[li] = rank_m;
    }
    return res;
}

JohansenResult johansen_test(const Dataset& d, std::optional<std::size_t> lag_order,
                             JohansenCase det_case) {
    JohansenResult res = johansen_test(d.as_matrix(), lag_order, det_case);
    res.variables = d.names();
    return res;
}

// --------------------------------------------------------------------------
// Residual-based tests with two regime shifts

CriticalValues hatemi_j_critical_values_t() { return {{-6.503, -6.015, -5.653}}; }
CriticalValues hatemi_j_critical_values_za() { return {{-90.794, -76.003, -52.232}}; }

PhillipsStats phillips_z(const Vector& e, std::size_t bandwidth) {
    const Eigen::Index T = e.size();
    if (T < 4) throw Error(ErrorCode::InsufficientSample, "residual series too short");
    const Vector lead = e.tail(T - 1);
    const Vector lag = e.head(T - 1);
    const double see = lag.squaredNorm();
    if (see <= 0.0) throw Error(ErrorCode::ZeroVariance, "zero residuals");
    const double rho = lead.dot(lag) / see;
    const Vector v = lead - rho * lag;
    const auto n = static_cast<double>(v.size());
    if (bandwidth >= static_cast<std::size_t>(v.size())) {
        throw Error(ErrorCode::BandwidthTooLarge, "bandwidth exceeds residual length");
    }
    const double gamma0 = v.squaredNorm() / n;
    double lambda = 0.0;
    for (std::size_t j = 1; j <= bandwidth; ++j) {
        const auto ji = static_cast<Eigen::Index>(j);
        const double gj = v.tail(v.size() - ji).dot(v.head(v.size() - ji)) / n;
        lambda += kernel_weight(Kernel::Bartlett, j, bandwidth) * gj;
    }
    const double sigma2 = gamma0 + 2.0 * lambda;
    const double rho_star = (lead.dot(lag) - static_cast<double>(T - 1) * lambda) / see;
    PhillipsStats out;
    out.z_alpha = static_cast<double>(T) * (rho_star - 1.0);
    out.z_t = (rho_star - 1.0) / std::sqrt(sigma2 / see);
    return out;
}

namespace {

Matrix hatemi_design(const Matrix& X, std::size_t tb1, std::size_t tb2, ShiftSpec shifts) {
    const Eigen::Index T = X.rows();
    const Eigen::Index m = X.cols();
    const bool slope = shifts == ShiftSpec::LevelAndSlopeShifts;
    Matrix Z(T, 3 + m * (slope ? 3 : 1));
    Z.col(0).setOnes();
    Vector d1 = Vector::Zero(T);
    Vector d2 = Vector::Zero(T);
    d1.tail(T - static_cast<Eigen::Index>(tb1)).setOnes();
    d2.tail(T - static_cast<Eigen::Index>(tb2)).setOnes();
    Z.col(1) = d1;
    Z.col(2) = d2;
    Z.middleCols(3, m) = X;
    if (slope) {
        Z.middleCols(3 + m, m) = d1.asDiagonal() * X;
        Z.middleCols(3 + 2 * m, m) = d2.asDiagonal() * X;
    }
    return Z;
}

HatemiJStatistic finish(double value, std::array<std::size_t, 2> breaks, int start_year,
                        const CriticalValues& cv) {
    HatemiJStatistic s;
    s.value = value;
    s.break_indices = breaks;
    s.break_years = {start_year + static_cast<int>(breaks[0]) - 1,
                     start_year + static_cast<int>(breaks[1]) - 1};
    s.critical_values = cv;
    s.reject_at = left_tail_rejections(value, cv);
    return s;
}

}  // namespace

HatemiJPoint hatemi_j_at(const Vector& y, const Matrix& X, std::size_t tb1, std::size_t tb2,
                         const HatemiJOptions& options) {
    const auto T = static_cast<std::size_t>(y.size());
    if (static_cast<std::size_t>(X.rows()) != T) {
        throw Error(ErrorCode::DimensionMismatch, "y and X lengths differ");
    }
    if (tb1 < 1 || tb2 <= tb1 || tb2 >= T) {
        throw Error(ErrorCode::BreakOutOfRange, fmt::format("pair ({}, {})", tb1, tb2));
    }
    const OlsFit fit = ols_fit(y, hatemi_design(X, tb1, tb2, options.shifts));
    const Vector& e = fit.residuals;

    AugmentedRegression reg;
    reg.dep = Vector::Zero(e.size());
    reg.level = Vector::Zero(e.size());
    for (Eigen::Index i = 1; i < e.size(); ++i) {
        reg.dep(i) = e(i) - e(i - 1);
        reg.level(i) = e(i - 1);
    }
    reg.aug = reg.dep;
    std::size_t kmax = options.adf.max_lag.value_or(default_max_lag(T));
    LagRule rule = options.adf.lag_rule;
    if (rule.kind == LagRule::Kind::Fixed) kmax = rule.fixed;
    const AugmentedFit adf = select_and_fit(reg, kmax, rule);

    const std::size_t bw = options.bandwidth.value_or(default_bandwidth(T));
    const PhillipsStats z = phillips_z(e, bw);
    return {{tb1, tb2}, adf.statistic, z.z_t, z.z_alpha, adf.lag};
}

HatemiJResult hatemi_j_test(const TimeSeries& y, const Dataset& X, const HatemiJOptions& options) {
    if (X.columns().empty()) throw Error(ErrorCode::InvalidArgument, "at least one regressor required");
    if (X.start_year() != y.start_year || X.size() != y.size()) {
        throw Error(ErrorCode::AlignmentMismatch, "dependent and regressors are not aligned");
    }
    const std::size_t T = y.size();
    const BreakRange range = break_range(T, options.trim);
    const auto pairs = break_pairs(range);
    if (pairs.empty()) throw Error(ErrorCode::InsufficientSample, "no admissible break pairs");
    const std::size_t params =
        3 + X.columns().size() * (options.shifts == ShiftSpec::LevelAndSlopeShifts ? 3 : 1);
    if (T <= params + 4) {
        throw Error(ErrorCode::InsufficientSample,
                    fmt::format("T={} too short for {} parameters", T, params));
    }

    const Vector yv = y.as_vector();
    const Matrix Xm = X.as_matrix();
    HatemiJResult res;
    res.grid.resize(pairs.size());
    parallel_for(pairs.size(), options.workers, [&](std::size_t i) {
        res.grid[i] = hatemi_j_at(yv, Xm, pairs[i][0], pairs[i][1], options);
    });

    std::size_t ia = 0, it = 0, iz = 0;
    for (std::size_t i = 1; i < res.grid.size(); ++i) {
        if (res.grid[i].adf < res.grid[ia].adf) ia = i;
        if (res.grid[i].zt < res.grid[it].zt) it = i;
        if (res.grid[i].za < res.grid[iz].za) iz = i;
    }
    const auto tcv = hatemi_j_critical_values_t();
    res.adf_star = finish(res.grid[ia].adf, res.grid[ia].breaks, y.start_year, tcv);
    res.zt_star = finish(res.grid[it].zt, res.grid[it].breaks, y.start_year, tcv);
    res.za_star = finish(res.grid[iz].za, res.grid[iz].breaks, y.start_year,
                         hatemi_j_critical_values_za());
    res.adf_lag = res.grid[ia].adf_lag;
    return res;
}

}  // namespace tsecon
