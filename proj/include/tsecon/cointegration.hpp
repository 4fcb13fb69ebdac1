#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tsecon/linalg.hpp"
#include "tsecon/timeseries.hpp"
#include "tsecon/unit_root.hpp"

namespace tsecon {

enum class JohansenCase { UnrestrictedConstant };

struct JohansenResult {
    std::vector<std::string> variables;
    Vector eigenvalues;                // descending, in [0, 1)
    std::vector<double> trace_stats;   // r = 0..k-1
    std::vector<double> maxeig_stats;  // r = 0..k-1
    std::vector<double> critical_values_trace;   // 5%
    std::vector<double> critical_values_maxeig;  // 5%
    std::array<std::size_t, 3> selected_rank{};  // by trace, {1%, 5%, 10%}
    std::array<std::size_t, 3> selected_rank_maxeig{};
    std::size_t lag_order = 1;  // VAR order in levels; the VECM carries lag_order-1 differences
    std::size_t effective_T = 0;
    JohansenCase det_case = JohansenCase::UnrestrictedConstant;
};

/// Trace and max-eigenvalue critical values for the unrestricted-constant
/// case, indexed by k - r in 1..6. Throws InvalidArgument outside that range.
[[nodiscard]] double johansen_trace_critical(std::size_t k_minus_r, Level level);
[[nodiscard]] double johansen_maxeig_critical(std::size_t k_minus_r, Level level);

/// VAR(p) order in levels (with constant) minimising BIC over 1..max_order,
/// all candidates fit on the common sample t = max_order+1..T.
[[nodiscard]] std::size_t var_lag_order_bic(const Matrix& Y, std::size_t max_order = 3);

/// Reduced-rank regression test on the columns of `levels` (T x k).
/// A missing lag_order selects it by BIC over 1..3.
[[nodiscard]] JohansenResult johansen_test(const Matrix& levels, std::optional<std::size_t> lag_order,
                                           JohansenCase det_case = JohansenCase::UnrestrictedConstant);
[[nodiscard]] JohansenResult johansen_test(const Dataset& d, std::optional<std::size_t> lag_order,
                                           JohansenCase det_case = JohansenCase::UnrestrictedConstant);

enum class ShiftSpec { LevelShifts, LevelAndSlopeShifts };

struct HatemiJOptions {
    double trim = 0.15;
    ShiftSpec shifts = ShiftSpec::LevelAndSlopeShifts;
    /// Lag rule for the residual ADF regression; max lag defaults to the
    /// module-wide floor(12 (T/100)^0.25).
    AdfSpec adf{Deterministic::None, std::nullopt, LagRule::t_sig_10pct()};
    /// Bartlett bandwidth for the Phillips corrections; defaults to floor(4 (T/100)^(2/9)).
    std::optional<std::size_t> bandwidth;
    std::size_t workers = 1;
};

/// All three residual statistics at one break pair.
struct HatemiJPoint {
    std::array<std::size_t, 2> breaks{};
    double adf = 0.0;
    double zt = 0.0;
    double za = 0.0;
    std::size_t adf_lag = 0;
};

struct HatemiJStatistic {
    double value = 0.0;
    std::array<std::size_t, 2> break_indices{};
    std::array<int, 2> break_years{};
    CriticalValues critical_values;
    std::array<bool, 3> reject_at{};
};

struct HatemiJResult {
    HatemiJStatistic adf_star;
    HatemiJStatistic zt_star;
    HatemiJStatistic za_star;
    std::size_t adf_lag = 0;  // lag at the ADF* argmin
    std::vector<HatemiJPoint> grid;
};

/// Residual-based statistics for y on X with regime shifts after tb1 and tb2.
[[nodiscard]] HatemiJPoint hatemi_j_at(const Vector& y, const Matrix& X, std::size_t tb1,
                                       std::size_t tb2, const HatemiJOptions& options = {});

[[nodiscard]] HatemiJResult hatemi_j_test(const TimeSeries& y, const Dataset& X,
                                          const HatemiJOptions& options = {});

[[nodiscard]] CriticalValues hatemi_j_critical_values_t();
[[nodiscard]] CriticalValues hatemi_j_critical_values_za();

/// Phillips Z_alpha / Z_t on a residual series with a Bartlett correction.
struct PhillipsStats {
    double z_alpha = 0.0;
    double z_t = 0.0;
};
[[nodiscard]] PhillipsStats phillips_z(const Vector& e, std::size_t bandwidth);

}  // namespace tsecon
