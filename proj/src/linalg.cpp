#include "tsecon/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tsecon {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::BandwidthTooLarge: return "BandwidthTooLarge";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::DegenerateFit: return "DegenerateFit";
        case ErrorCode::GapInYears: return "GapInYears";
        case ErrorCode::NonNumericCell: return "NonNumericCell";
        case ErrorCode::DuplicateColumn: return "DuplicateColumn";
        case ErrorCode::EmptyFile: return "EmptyFile";
        case ErrorCode::SeriesTooShort: return "SeriesTooShort";
        case ErrorCode::BreakOutOfRange: return "BreakOutOfRange";
        case ErrorCode::AlignmentMismatch: return "AlignmentMismatch";
        case ErrorCode::DegenerateRegression: return "DegenerateRegression";
        case ErrorCode::TrimOutOfRange: return "TrimOutOfRange";
        case ErrorCode::InsufficientSample: return "InsufficientSample";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::UnitRootDenominator: return "UnitRootDenominator";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::MalformedExpectations: return "MalformedExpectations";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::NetworkUnavailable: return "NetworkUnavailable";
        case ErrorCode::HttpStatus: return "HttpStatus";
        case ErrorCode::MalformedPayload: return "MalformedPayload";
    }
    return "Unknown";
}

double OlsFit::r_squared() const {
    const Vector y = fitted + residuals;
    const double mean = y.mean();
    const double tss = (y.array() - mean).square().sum();
    if (tss <= 0.0) return 0.0;
    return 1.0 - ssr / tss;
}

OlsFit ols_fit(const Vector& y, const Matrix& X) {
    const auto T = static_cast<std::size_t>(X.rows());
    const auto k = static_cast<std::size_t>(X.cols());
    if (X.rows() != y.size() || k == 0) {
        throw Error(ErrorCode::DimensionMismatch,
                    "y has " + std::to_string(y.size()) + " rows, X has " +
                        std::to_string(X.rows()) + "x" + std::to_string(X.cols()));
    }
    if (T <= k) {
        throw Error(ErrorCode::InsufficientSample,
                    "T=" + std::to_string(T) + " must exceed k=" + std::to_string(k));
    }
    if (!X.allFinite() || !y.allFinite()) {
        throw Error(ErrorCode::InvalidArgument, "non-finite entries in regression data");
    }

    // unit-norm columns so the rank test does not depend on measurement units
    const Vector norms = X.colwise().norm().transpose();
    if (!(norms.array() > 0.0).all()) {
        throw Error(ErrorCode::RankDeficient, "design has an all-zero column");
    }
    const Vector inv_norms = norms.cwiseInverse();
    const Matrix Xs = X * inv_norms.asDiagonal();
    Eigen::ColPivHouseholderQR<Matrix> qr(Xs);
    const auto kk = static_cast<Eigen::Index>(k);
    const Matrix R = qr.matrixR().topLeftCorner(kk, kk).triangularView<Eigen::Upper>();
    const double r_max = std::abs(R(0, 0));
    const double r_min = std::abs(R(kk - 1, kk - 1));
    // Pivoted QR orders |R_ii| decreasingly; their ratio tracks 1/cond(X).
    const double rcond = r_max > 0.0 ? (r_min / r_max) * (r_min / r_max) : 0.0;
    if (!(rcond >= kRankTolerance)) {
        throw Error(ErrorCode::RankDeficient,
                    "reciprocal condition of X'X is " + std::to_string(rcond));
    }

    OlsFit fit;
    fit.T = T;
    fit.k = k;
    fit.coefficients = inv_norms.cwiseProduct(qr.solve(y));
    fit.fitted = X * fit.coefficients;
    fit.residuals = y - fit.fitted;
    fit.ssr = fit.residuals.squaredNorm();
    fit.sigma2 = fit.ssr / static_cast<double>(T - k);

    const Matrix r_inv = R.triangularView<Eigen::Upper>().solve(Matrix::Identity(kk, kk));
    const Matrix xtx_inv_perm = r_inv * r_inv.transpose();
    const auto& perm = qr.colsPermutation();
    fit.coef_covariance = fit.sigma2 * (inv_norms.asDiagonal() * (perm * xtx_inv_perm * perm.transpose()) *
                                        inv_norms.asDiagonal());
    return fit;
}

double gram_rcond(const Matrix& X) {
    const Vector norms = X.colwise().norm().transpose();
    if (X.cols() == 0 || !(norms.array() > 0.0).all()) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(X * norms.cwiseInverse().asDiagonal());
    const Vector& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0.0;
    const double ratio = s(s.size() - 1) / s(0);
    return ratio * ratio;
}

double kernel_weight(Kernel kernel, std::size_t j, std::size_t bandwidth) {
    switch (kernel) {
        case Kernel::Bartlett:
            return j > bandwidth ? 0.0
                                 : 1.0 - static_cast<double>(j) / static_cast<double>(bandwidth + 1);
    }
    return 0.0;
}

std::size_t default_bandwidth(std::size_t T) {
    return static_cast<std::size_t>(
        std::floor(4.0 * std::pow(static_cast<double>(T) / 100.0, 2.0 / 9.0)));
}

LongRunCovariance long_run_covariance(const Matrix& U, Kernel kernel, std::size_t bandwidth) {
    const auto T = static_cast<std::size_t>(U.rows());
    if (T < 2) throw Error(ErrorCode::SeriesTooShort, "long-run covariance needs T >= 2");
    if (bandwidth >= T) {
        throw Error(ErrorCode::BandwidthTooLarge, "bandwidth " + std::to_string(bandwidth) +
                                                      " must be below T=" + std::to_string(T));
    }
    const double inv_T = 1.0 / static_cast<double>(T);

    LongRunCovariance out;
    out.bandwidth = bandwidth;
    out.kernel = kernel;
    const Matrix gamma0 = inv_T * (U.transpose() * U);
    out.omega = gamma0;
    out.lambda_one_sided = gamma0;
    for (std::size_t j = 1; j <= bandwidth; ++j) {
        const auto n = static_cast<Eigen::Index>(T - j);
        // rows t = j..T-1 against rows t-j
        const Matrix gamma_j = inv_T * (U.bottomRows(n).transpose() * U.topRows(n));
        const double w = kernel_weight(kernel, j, bandwidth);
        out.omega += w * (gamma_j + gamma_j.transpose());
        out.lambda_one_sided += w * gamma_j;
    }
    // symmetrize away rounding
    out.omega = 0.5 * (out.omega + out.omega.transpose()).eval();
    return out;
}

double long_run_variance(const Vector& u, std::size_t bandwidth) {
    Matrix U(u.size(), 1);
    U.col(0) = u;
    return long_run_covariance(U, Kernel::Bartlett, bandwidth).omega(0, 0);
}

Vector generalized_eigen(const Matrix& A, const Matrix& B) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "generalized_eigen needs square, equal-size A and B");
    }
    Eigen::LLT<Matrix> llt(B);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::NotPositiveDefinite, "Cholesky factorization of B failed");
    }
    const Matrix L = llt.matrixL();
    // C = L^-1 A L^-T
    const Matrix left = L.triangularView<Eigen::Lower>().solve(A);
    Matrix C = L.triangularView<Eigen::Lower>().solve(left.transpose()).transpose();
    C = 0.5 * (C + C.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(C, Eigen::EigenvaluesOnly);
    Vector values = es.eigenvalues().reverse();
    return values;
}

InformationCriteria information_criteria(double ssr, std::size_t T, std::size_t k) {
    if (T <= k) {
        throw Error(ErrorCode::InsufficientSample, "information criteria need T > k");
    }
    InformationCriteria ic;
    if (ssr <= 0.0) {
        ic.degenerate = true;
        ic.aic = ic.bic = ic.hq = -std::numeric_limits<double>::infinity();
        return ic;
    }
    const double n = static_cast<double>(T);
    const double kd = static_cast<double>(k);
    const double base = n * std::log(ssr / n);
    ic.aic = base + 2.0 * kd;
    ic.bic = base + kd * std::log(n);
    ic.hq = base + 2.0 * kd * std::log(std::log(n));
    return ic;
}

Matrix hstack(std::span<const Vector> columns) {
    if (columns.empty()) return Matrix();
    const auto rows = columns.front().size();
    Matrix out(rows, static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != rows) {
            throw Error(ErrorCode::DimensionMismatch, "hstack: column lengths differ");
        }
        out.col(static_cast<Eigen::Index>(j)) = columns[j];
    }
    return out;
}

Vector to_vector(std::span<const double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
    return v;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace tsecon
