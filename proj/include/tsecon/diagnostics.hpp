#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "tsecon/linalg.hpp"

namespace tsecon {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    double df = 0.0;
    std::string warning;  // empty unless the test degenerated
};

/// LM = T R^2 from e_t on [X, e_{t-1..t-lags}], pre-sample residuals set to 0.
[[nodiscard]] TestResult breusch_godfrey(const OlsFit& fit, const Matrix& X, std::size_t lags = 2);

enum class HeteroskedasticityVariant { BreuschPagan, White };

/// Koenker's studentized Breusch-Pagan (T R^2 of e^2 on X, chi2(k-1)), or
/// White's test with squares and cross products of the non-constant columns.
/// X must contain a constant column.
[[nodiscard]] TestResult heteroskedasticity_test(const OlsFit& fit, const Matrix& X,
                                                 HeteroskedasticityVariant variant =
                                                     HeteroskedasticityVariant::BreuschPagan);

[[nodiscard]] TestResult jarque_bera(const Vector& residuals);

struct ResetResult {
    TestResult f;   // F form
    TestResult lm;  // chi-square form T (SSR_r - SSR_u) / SSR_r
};

/// Adds powers of the fitted values; collinear augmentation returns p = 1
/// with a CollinearAugmentation warning.
[[nodiscard]] ResetResult ramsey_reset(const OlsFit& fit, const Matrix& X, const Vector& y,
                                       const std::set<int>& powers = {2, 3});

/// w_t = (y_t - x_t' b_{t-1}) / sqrt(1 + x_t' (X_{t-1}'X_{t-1})^-1 x_t), t = k+1..T.
[[nodiscard]] Vector recursive_residuals(const Vector& y, const Matrix& X);

enum class Stability { Stable, Unstable };
[[nodiscard]] std::string_view to_string(Stability s) noexcept;

struct StabilityPath {
    std::vector<std::size_t> t;  // observation index k+1..T
    std::vector<double> value;
    std::vector<double> lower;
    std::vector<double> upper;
    Stability verdict = Stability::Stable;
};

struct CusumPair {
    StabilityPath cusum;
    StabilityPath cusumsq;
};

/// 5% CUSUM lines +-0.948 sqrt(n)(1 + 2 r/n) and CUSUMSQ lines r/n +- c0 with
/// n = T - k. c0 comes from the Edgerton-Wells approximation.
[[nodiscard]] CusumPair cusum_paths(const Vector& w, std::size_t k);

/// Edgerton-Wells 5% CUSUMSQ half-width for n recursive residuals.
[[nodiscard]] double cusumsq_c0(std::size_t n);

struct DiagnosticsOptions {
    std::size_t bg_lags = 2;
    HeteroskedasticityVariant hetero = HeteroskedasticityVariant::BreuschPagan;
    std::set<int> reset_powers{2, 3};
};

struct DiagnosticsBundle {
    TestResult serial_correlation;
    TestResult heteroskedasticity;
    TestResult normality;
    ResetResult functional_form;
    CusumPair stability;
};

[[nodiscard]] DiagnosticsBundle run_diagnostics(const Vector& y, const Matrix& X, const OlsFit& fit,
                                                const DiagnosticsOptions& options = {});

}  // namespace tsecon
