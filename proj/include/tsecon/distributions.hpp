#pragma once

namespace tsecon::dist {

/// Upper-tail probabilities, clamped to [0, 1]. Non-positive statistics map to 1.
[[nodiscard]] double chi2_sf(double x, double df);
[[nodiscard]] double f_sf(double x, double df1, double df2);
[[nodiscard]] double normal_cdf(double x);
[[nodiscard]] double normal_quantile(double p);

}  // namespace tsecon::dist
