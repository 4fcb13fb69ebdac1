#include "tsecon/diagnostics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "tsecon/distributions.hpp"

namespace tsecon {

namespace {

void check_shapes(const OlsFit& fit, const Matrix& X) {
    if (static_cast<std::size_t>(X.rows()) != fit.T || fit.residuals.size() != X.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "fit and design have different lengths");
    }
}

double centered_r2(const Vector& dep, const OlsFit& aux) {
    const double tss = (dep.array() - dep.mean()).square().sum();
    if (tss <= 0.0) return 0.0;
    return std::max(0.0, 1.0 - aux.ssr / tss);
}

bool is_constant_column(const Vector& c) {
    return (c.array() - c(0)).abs().maxCoeff() == 0.0;
}

/// Appends candidate columns that keep the design full rank.
Matrix extend_full_rank(const Matrix& base, const std::vector<Vector>& extra) {
    Matrix out = base;
    for (const auto& c : extra) {
        Matrix trial(out.rows(), out.cols() + 1);
        trial << out, c;
        if (gram_rcond(trial) >= kRankTolerance) out = std::move(trial);
    }
    return out;
}

}  // namespace

TestResult breusch_godfrey(const OlsFit& fit, const Matrix& X, std::size_t lags) {
    check_shapes(fit, X);
    if (lags < 1) throw Error(ErrorCode::InvalidArgument, "lags must be >= 1");
    const Eigen::Index T = X.rows();
    const Eigen::Index k = X.cols();
    if (static_cast<std::size_t>(T) <= static_cast<std::size_t>(k) + lags) {
        throw Error(ErrorCode::InsufficientSample, "too few observations for the auxiliary regression");
    }
    const Vector& e = fit.residuals;
    TestResult r;
    r.df = static_cast<double>(lags);
    const double ee = e.squaredNorm();
    if (ee <= 0.0) return r;

    Matrix Z(T, k + static_cast<Eigen::Index>(lags));
    Z.leftCols(k) = X;
    for (std::size_t j = 1; j <= lags; ++j) {
        const auto ji = static_cast<Eigen::Index>(j);
        Vector col = Vector::Zero(T);
        col.tail(T - ji) = e.head(T - ji);
        Z.col(k + ji - 1) = col;
    }
    const OlsFit aux = ols_fit(e, Z);
    const double r2 = std::max(0.0, 1.0 - aux.ssr / ee);
    r.statistic = static_cast<double>(T) * r2;
    r.p_value = dist::chi2_sf(r.statistic, r.df);
    return r;
}

TestResult heteroskedasticity_test(const OlsFit& fit, const Matrix& X, HeteroskedasticityVariant variant) {
    check_shapes(fit, X);
    const Eigen::Index T = X.rows();
    if (T <= 2 * X.cols()) throw Error(ErrorCode::InsufficientSample, "heteroskedasticity test needs T > 2k");
    const Vector e2 = fit.residuals.array().square();

    Matrix Z = X;
    if (variant == HeteroskedasticityVariant::White) {
        std::vector<Eigen::Index> free_cols;
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            if (!is_constant_column(X.col(j))) free_cols.push_back(j);
        }
        std::vector<Vector> extra;
        for (std::size_t a = 0; a < free_cols.size(); ++a) {
            for (std::size_t b = a; b < free_cols.size(); ++b) {
                extra.emplace_back(X.col(free_cols[a]).cwiseProduct(X.col(free_cols[b])));
            }
        }
        Z = extend_full_rank(X, extra);
        if (T <= Z.cols() + 1) throw Error(ErrorCode::InsufficientSample, "too few observations for White's test");
    }
    TestResult r;
    r.df = static_cast<double>(Z.cols() - 1);
    const OlsFit aux = ols_fit(e2, Z);
    r.statistic = static_cast<double>(T) * centered_r2(e2, aux);
    r.p_value = dist::chi2_sf(r.statistic, r.df);
    return r;
}

TestResult jarque_bera(const Vector& residuals) {
    const Eigen::Index T = residuals.size();
    if (T < 3) throw Error(ErrorCode::InsufficientSample, "Jarque-Bera needs at least 3 residuals");
    const Vector d = residuals.array() - residuals.mean();
    const double n = static_cast<double>(T);
    const double m2 = d.squaredNorm() / n;
    if (m2 <= 0.0) throw Error(ErrorCode::ZeroVariance, "residuals have zero variance");
    const double m3 = d.array().cube().sum() / n;
    const double m4 = d.array().square().square().sum() / n;
    const double S = m3 / std::pow(m2, 1.5);
    const double K = m4 / (m2 * m2);
    TestResult r;
    r.df = 2.0;
    r.statistic = n * (S * S / 6.0 + (K - 3.0) * (K - 3.0) / 24.0);
    r.p_value = dist::chi2_sf(r.statistic, 2.0);
    return r;
}

ResetResult ramsey_reset(const OlsFit& fit, const Matrix& X, const Vector& y, const std::set<int>& powers) {
    check_shapes(fit, X);
    if (powers.empty()) throw Error(ErrorCode::InvalidArgument, "no RESET powers");
    for (int p : powers) {
        if (p != 2 && p != 3) throw Error(ErrorCode::InvalidArgument, "RESET powers must be 2 or 3");
    }
    const Eigen::Index T = X.rows();
    const auto q = static_cast<Eigen::Index>(powers.size());
    if (T <= X.cols() + q) throw Error(ErrorCode::InsufficientSample, "too few observations for RESET");

    ResetResult out;
    out.f.df = static_cast<double>(q);
    out.lm.df = static_cast<double>(q);
    const double scale = fit.fitted.cwiseAbs().maxCoeff();
    const Vector yh = fit.fitted / (scale > 0.0 ? scale : 1.0);
    Matrix Z(T, X.cols() + q);
    Z.leftCols(X.cols()) = X;
    Eigen::Index c = X.cols();
    for (int p : powers) Z.col(c++) = yh.array().pow(p);

    OlsFit aug;
    try {
        aug = ols_fit(y, Z);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::RankDeficient) throw;
        out.f.warning = out.lm.warning = "CollinearAugmentation";
        return out;
    }
    const double ssr_r = fit.ssr;
    const double ssr_u = aug.ssr;
    const double dfd = static_cast<double>(T - Z.cols());
    if (ssr_u <= 0.0 || ssr_r <= 0.0) {
        out.f.warning = out.lm.warning = "zero residual variance";
        return out;
    }
    out.f.statistic = std::max(0.0, (ssr_r - ssr_u) / static_cast<double>(q) / (ssr_u / dfd));
    out.f.p_value = dist::f_sf(out.f.statistic, static_cast<double>(q), dfd);
    out.lm.statistic = std::max(0.0, static_cast<double>(T) * (ssr_r - ssr_u) / ssr_r);
    out.lm.p_value = dist::chi2_sf(out.lm.statistic, static_cast<double>(q));
    return out;
}

Vector recursive_residuals(const Vector& y, const Matrix& X) {
    const Eigen::Index T = X.rows();
    const Eigen::Index k = X.cols();
    if (y.size() != T) throw Error(ErrorCode::DimensionMismatch, "y and X lengths differ");
    if (T <= k) return Vector(0);
    if (gram_rcond(X.topRows(k)) < kRankTolerance) {
        throw Error(ErrorCode::RankDeficient, "first k observations do not identify the coefficients");
    }
    Vector w(T - k);
    for (Eigen::Index t = k; t < T; ++t) {
        const Eigen::ColPivHouseholderQR<Matrix> qr(X.topRows(t));
        const Vector b = qr.solve(y.head(t));
        const Vector x = X.row(t).transpose();
        // x'(X'X)^-1 x = |R^-T P' x|^2
        const Vector px = qr.colsPermutation().transpose() * x;
        const Vector z = qr.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>().transpose().solve(px);
        w(t - k) = (y(t) - x.dot(b)) / std::sqrt(1.0 + z.squaredNorm());
    }
    return w;
}

std::string_view to_string(Stability s) noexcept {
    return s == Stability::Stable ? "stable" : "unstable";
}

double cusumsq_c0(std::size_t n) {
    const double m = std::max(0.5 * static_cast<double>(n) - 1.0, 1.0);
    return 1.3581015 / std::sqrt(m) - 0.6701218 / m - 0.8858694 / std::pow(m, 1.5);
}

CusumPair cusum_paths(const Vector& w, std::size_t k) {
    const Eigen::Index n = w.size();
    if (n < 2) throw Error(ErrorCode::InsufficientSample, "CUSUM needs at least 2 recursive residuals");
    const double mean = w.mean();
    const double sd = std::sqrt((w.array() - mean).square().sum() / static_cast<double>(n - 1));
    const double ss_total = w.squaredNorm();
    if (!(sd > 0.0) || !(ss_total > 0.0)) throw Error(ErrorCode::ZeroVariance, "recursive residuals have zero variance");

    CusumPair out;
    const double nd = static_cast<double>(n);
    const double c0 = cusumsq_c0(static_cast<std::size_t>(n));
    std::vector<double> cum_sq(static_cast<std::size_t>(n));
    double acc_sq = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) {
        acc_sq += w(r) * w(r);
        cum_sq[static_cast<std::size_t>(r)] = acc_sq;
    }
    const double total = cum_sq.back();
    double acc = 0.0;
    for (Eigen::Index r = 1; r <= n; ++r) {
        const std::size_t t = k + static_cast<std::size_t>(r);
        const double rd = static_cast<double>(r);
        acc += w(r - 1);
        const double cus = acc / sd;
        const double band = 0.948 * std::sqrt(nd) * (1.0 + 2.0 * rd / nd);
        out.cusum.t.push_back(t);
        out.cusum.value.push_back(cus);
        out.cusum.lower.push_back(-band);
        out.cusum.upper.push_back(band);
        if (std::abs(cus) > band) out.cusum.verdict = Stability::Unstable;

        const double sq = cum_sq[static_cast<std::size_t>(r - 1)] / total;
        const double centre = rd / nd;
        out.cusumsq.t.push_back(t);
        out.cusumsq.value.push_back(sq);
        out.cusumsq.lower.push_back(centre - c0);
        out.cusumsq.upper.push_back(centre + c0);
        if (sq < centre - c0 || sq > centre + c0) out.cusumsq.verdict = Stability::Unstable;
    }
    return out;
}

DiagnosticsBundle run_diagnostics(const Vector& y, const Matrix& X, const OlsFit& fit,
                                  const DiagnosticsOptions& options) {
    DiagnosticsBundle b;
    b.serial_correlation = breusch_godfrey(fit, X, options.bg_lags);
    b.heteroskedasticity = heteroskedasticity_test(fit, X, options.hetero);
    b.normality = jarque_bera(fit.residuals);
    b.functional_form = ramsey_reset(fit, X, y, options.reset_powers);
    b.stability = cusum_paths(recursive_residuals(y, X), static_cast<std::size_t>(X.cols()));
    return b;
}

}  // namespace tsecon
