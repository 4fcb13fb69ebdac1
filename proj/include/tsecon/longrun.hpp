#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tsecon/linalg.hpp"
#include "tsecon/timeseries.hpp"

namespace tsecon {

enum class Estimator { DOLS, FMOLS, ARDL };
[[nodiscard]] std::string_view to_string(Estimator e) noexcept;

struct LongRunTuning {
    std::size_t leads = 0;
    std::size_t lags = 0;
    Kernel kernel = Kernel::Bartlett;
    std::size_t bandwidth = 0;
};

/// The regression the estimate was computed from, kept for diagnostics.
struct RegressionRecord {
    Vector y;
    Matrix X;
    std::vector<std::string> columns;
    OlsFit fit;
    int first_year = 0;  // calendar year of the first row
};

/// Long-run coefficients in regressor order followed by the constant "C".
struct LongRunEstimate {
    Estimator estimator = Estimator::DOLS;
    std::vector<std::string> names;
    Vector coefficients;
    Vector std_errors;
    Vector t_stats;
    std::size_t effective_T = 0;
    LongRunTuning tuning;
    std::vector<std::string> warnings;
    RegressionRecord regression;

    [[nodiscard]] double coefficient(std::string_view name) const;
    [[nodiscard]] double std_error(std::string_view name) const;
    [[nodiscard]] double t_stat(std::string_view name) const;
    [[nodiscard]] std::size_t index_of(std::string_view name) const;
};

struct DolsOptions {
    std::size_t leads = 1;
    std::size_t lags = 1;
    /// Bartlett bandwidth for the residual long-run variance; defaults to
    /// floor(4 (n/100)^(2/9)) on the effective sample.
    std::optional<std::size_t> bandwidth;
};

/// y on [1, X, dX_{t+j}, j = -lags..leads]. With leads = lags = 0 no
/// difference terms enter and the fit is static OLS on the full sample.
[[nodiscard]] LongRunEstimate dols(const TimeSeries& y, const Dataset& X, const DolsOptions& options = {});

/// leads = lags = j chosen by BIC over j = 0..max_j on the common sample.
[[nodiscard]] std::size_t dols_select_bic(const TimeSeries& y, const Dataset& X, std::size_t max_j = 2);

struct FmolsOptions {
    Kernel kernel = Kernel::Bartlett;
    std::optional<std::size_t> bandwidth;
    /// Condition number of the standardized regressors above which a
    /// collinearity warning is attached.
    double condition_warning = 30.0;
};

[[nodiscard]] LongRunEstimate fmols(const TimeSeries& y, const Dataset& X, const FmolsOptions& options = {});

/// Matrix form used by the simulation code: X excludes the constant.
[[nodiscard]] LongRunEstimate dols(const Vector& y, const Matrix& X, const std::vector<std::string>& names,
                                   const DolsOptions& options = {});
[[nodiscard]] LongRunEstimate fmols(const Vector& y, const Matrix& X, const std::vector<std::string>& names,
                                    const FmolsOptions& options = {});

}  // namespace tsecon
