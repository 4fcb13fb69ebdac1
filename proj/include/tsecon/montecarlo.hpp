#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tsecon/linalg.hpp"
#include "tsecon/timeseries.hpp"
#include "tsecon/unit_root.hpp"

namespace tsecon {

/// SplitMix64 step; used to derive per-replication seeds from seed_base + index.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Generator for replication `index`, independent of execution order.
[[nodiscard]] std::mt19937_64 replication_rng(std::uint64_t seed_base, std::uint64_t index);

enum class DgpKind {
    RandomWalk,          // n_series independent random walks (with optional drift)
    Ar1,                 // n_series independent AR(1) with coefficient rho
    TrendBreak,          // AR(rho) noise plus a level shift of magnitude * sd after tb
    CointegratedPair,    // x random walk, y = intercept + beta x + u, u AR(rho)
    CointegratedSystem,  // x_1..x_m random walks, y = intercept + loadings' x + u, u AR(rho)
    Ecm,                 // dY_t = drift + alpha beta' Y_{t-1} + e_t
    LinearRegression     // y = 1 + x + e, x and e iid normal (diagnostic nulls)
};

struct DgpSpec {
    DgpKind kind = DgpKind::RandomWalk;
    std::size_t T = 100;
    double innovation_sd = 1.0;
    std::uint64_t seed = 0;
    std::size_t n_series = 1;
    double rho = 0.0;
    std::size_t tb = 0;
    double magnitude = 0.0;
    double beta = 1.0;
    double intercept = 0.0;
    double drift = 0.0;
    std::vector<double> loadings;  // CointegratedSystem coefficients or ECM alpha
    std::vector<double> beta_vec;  // ECM cointegrating vector
};

/// Deterministic given spec.seed. Columns are named y1..yn (RandomWalk, Ar1,
/// Ecm), y (TrendBreak), y, x / y, x1..xm (cointegrated and regression kinds).
[[nodiscard]] Dataset simulate_dgp(const DgpSpec& spec);

/// Same draw with an explicit generator (used by the replication loops).
[[nodiscard]] Dataset simulate_dgp(const DgpSpec& spec, std::mt19937_64& rng);

enum class CvTest { DickeyFullerConstant, ZivotAndrews, LeeStrazicich2, JohansenTrace };
[[nodiscard]] std::string_view to_string(CvTest t) noexcept;

struct SimulationSummary {
    std::string test_id;
    std::string model;
    std::size_t T = 0;
    std::size_t reps = 0;
    std::uint64_t seed_base = 0;
    std::array<double, 3> quantiles{};  // {1%, 5%, 10%} (upper tail for Johansen)
    std::array<double, 3> mc_stderr{};
    double rejection_rate = 0.0;  // at the embedded 5% critical value
    std::vector<double> draws;
};

struct CvOptions {
    BreakModel model = BreakModel::A;
    std::size_t k_minus_r = 4;  // Johansen system size under the null
    double trim = 0.15;
    std::size_t workers = 1;
    std::size_t batches = 10;
};

/// Null quantiles of a test statistic from `reps` (>= 1000) replications: driftless
/// random walks for the unit-root tests, independent random walks with drift
/// for the Johansen trace statistic. Augmentation lags are fixed at 0.
[[nodiscard]] SimulationSummary simulate_critical_values(CvTest test, std::size_t T, std::size_t reps,
                                                         std::uint64_t seed, const CvOptions& options = {});

/// Empirical quantile (type 7, linear interpolation) of sorted data.
[[nodiscard]] double empirical_quantile(std::vector<double> data, double prob);

/// Quantile standard error from the spread of per-batch quantiles.
[[nodiscard]] double batched_quantile_stderr(const std::vector<double>& draws, double prob, std::size_t batches);

using Rejector = std::function<bool(const Dataset&)>;

/// Share of replications in which `reject` fires on data drawn from `spec`,
/// replication i seeded from seed_base + i.
[[nodiscard]] double rejection_rate(const DgpSpec& spec, std::size_t reps, std::uint64_t seed_base,
                                    const Rejector& reject, std::size_t workers = 1);

enum class ExperimentTest {
    Adf,               // ADF constant case, 5% response-surface value
    JohansenRankOne,   // "rejects" when the 5% trace rank equals 1
    BoundsCointegrated,
    BreuschGodfrey,
    BreuschPagan,
    JarqueBera,
    Reset
};
[[nodiscard]] std::string_view to_string(ExperimentTest t) noexcept;

[[nodiscard]] Rejector rejector_for(ExperimentTest test);

struct ExperimentResult {
    SimulationSummary null_summary;
    SimulationSummary alt_summary;
};

[[nodiscard]] ExperimentResult size_power_experiment(ExperimentTest test, const DgpSpec& null_spec,
                                                     const DgpSpec& alt_spec, std::size_t reps,
                                                     std::uint64_t seed, std::size_t workers = 1);

/// CSV with columns test_id,model,T,reps,level,quantile,mc_stderr.
[[nodiscard]] std::string summaries_to_csv(const std::vector<SimulationSummary>& summaries);

}  // namespace tsecon
