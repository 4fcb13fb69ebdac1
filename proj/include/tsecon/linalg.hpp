#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "tsecon/error.hpp"

namespace tsecon {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Threshold on the reciprocal condition number of X'X (columns scaled to unit
/// norm) below which a design is treated as singular.
inline constexpr double kRankTolerance = 1e-12;

struct OlsFit {
    Vector coefficients;
    Vector residuals;
    Vector fitted;
    Matrix coef_covariance;  // sigma2 * (X'X)^-1
    double ssr = 0.0;
    double sigma2 = 0.0;     // ssr / (T - k)
    std::size_t T = 0;
    std::size_t k = 0;

    [[nodiscard]] Vector std_errors() const { return coef_covariance.diagonal().cwiseSqrt(); }
    [[nodiscard]] double t_stat(Eigen::Index i) const {
        return coefficients(i) / std::sqrt(coef_covariance(i, i));
    }
    /// Centered R^2 of the fit against the observed y.
    [[nodiscard]] double r_squared() const;
};

/// Least squares through a column-pivoted Householder QR.
/// Throws RankDeficient when rcond(X'X) < 1e-12, DimensionMismatch on shape
/// errors and InsufficientSample when T <= k.
[[nodiscard]] OlsFit ols_fit(const Vector& y, const Matrix& X);

/// Reciprocal 2-norm condition number of X'X after scaling the columns of X
/// to unit norm, i.e. (s_min / s_max)^2. Zero for an all-zero column.
[[nodiscard]] double gram_rcond(const Matrix& X);

enum class Kernel { Bartlett };

struct LongRunCovariance {
    Matrix omega;             // two-sided
    Matrix lambda_one_sided;  // sum_{j=0..bw} w_j Gamma_j
    std::size_t bandwidth = 0;
    Kernel kernel = Kernel::Bartlett;
};

/// Kernel weight for lag j given bandwidth bw; Bartlett is 1 - j/(bw+1).
[[nodiscard]] double kernel_weight(Kernel kernel, std::size_t j, std::size_t bandwidth);

/// Newey-West fixed rule floor(4 (T/100)^(2/9)).
[[nodiscard]] std::size_t default_bandwidth(std::size_t T);

/// Kernel-weighted long-run covariance of the rows of U (T x m).
/// Gamma_j = (1/T) sum_{t>j} u_t u_{t-j}'.
[[nodiscard]] LongRunCovariance long_run_covariance(const Matrix& U, Kernel kernel,
                                                    std::size_t bandwidth);

/// Univariate convenience: Omega of a single series.
[[nodiscard]] double long_run_variance(const Vector& u, std::size_t bandwidth);

/// Roots of det(A - lambda B) = 0 for symmetric A and positive definite B,
/// sorted descending. Reduced through the Cholesky factor of B.
[[nodiscard]] Vector generalized_eigen(const Matrix& A, const Matrix& B);

struct InformationCriteria {
    double aic = 0.0;
    double bic = 0.0;
    double hq = 0.0;
    bool degenerate = false;  // ssr == 0, criteria set to -infinity
};

/// T ln(ssr/T) + penalty. A zero ssr yields the -infinity sentinel with the
/// degenerate flag set rather than an exception.
[[nodiscard]] InformationCriteria information_criteria(double ssr, std::size_t T, std::size_t k);

/// Column-stacks equal-length vectors into a matrix.
[[nodiscard]] Matrix hstack(std::span<const Vector> columns);

[[nodiscard]] Vector to_vector(std::span<const double> values);
[[nodiscard]] std::vector<double> to_std(const Vector& v);

}  // namespace tsecon
