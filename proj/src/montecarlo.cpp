#include "tsecon/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tsecon/ardl.hpp"
#include "tsecon/cointegration.hpp"
#include "tsecon/diagnostics.hpp"
#include "tsecon/parallel.hpp"

namespace tsecon {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::mt19937_64 replication_rng(std::uint64_t seed_base, std::uint64_t index) {
    return std::mt19937_64(splitmix64(seed_base + index));
}

namespace {

class Normal {
public:
    Normal(std::mt19937_64& rng, double sd) : rng_(rng), sd_(sd) {}
    double operator()() { return sd_ * dist_(rng_); }

private:
    std::mt19937_64& rng_;
    double sd_;
    std::normal_distribution<double> dist_{0.0, 1.0};
};

std::vector<double> ar1_path(Normal& e, std::size_t T, double rho) {
    std::vector<double> u(T);
    const double scale = std::abs(rho) < 1.0 ? 1.0 / std::sqrt(1.0 - rho * rho) : 1.0;
    u[0] = e() * scale;
    for (std::size_t t = 1; t < T; ++t) u[t] = rho * u[t - 1] + e();
    return u;
}

std::vector<double> random_walk(Normal& e, std::size_t T, double drift) {
    std::vector<double> x(T);
    double acc = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        acc += drift + e();
        x[t] = acc;
    }
    return x;
}

void validate(const DgpSpec& s) {
    if (s.T < 10) throw Error(ErrorCode::InvalidSpec, "T must be at least 10");
    if (!(s.innovation_sd >= 0.0) || !std::isfinite(s.innovation_sd)) {
        throw Error(ErrorCode::InvalidSpec, "innovation_sd must be finite and non-negative");
    }
    switch (s.kind) {
        case DgpKind::RandomWalk:
        case DgpKind::Ar1:
            if (s.n_series < 1) throw Error(ErrorCode::InvalidSpec, "n_series must be >= 1");
            break;
        case DgpKind::TrendBreak:
            if (s.tb < 1 || s.tb >= s.T) throw Error(ErrorCode::InvalidSpec, "break index outside [1, T)");
            break;
        case DgpKind::CointegratedSystem:
            if (s.loadings.empty()) throw Error(ErrorCode::InvalidSpec, "loadings required");
            break;
        case DgpKind::Ecm:
            if (s.loadings.size() < 2 || s.loadings.size() != s.beta_vec.size()) {
                throw Error(ErrorCode::InvalidSpec, "ECM needs matching alpha and beta of length >= 2");
            }
            break;
        case DgpKind::CointegratedPair:
        case DgpKind::LinearRegression:
            break;
    }
}

}  // namespace

Dataset simulate_dgp(const DgpSpec& spec, std::mt19937_64& rng) {
    validate(spec);
    Normal e(rng, spec.innovation_sd);
    const std::size_t T = spec.T;
    std::vector<TimeSeries> cols;
    switch (spec.kind) {
        case DgpKind::RandomWalk:
            for (std::size_t i = 0; i < spec.n_series; ++i) {
                cols.push_back({fmt::format("y{}", i + 1), 1, random_walk(e, T, spec.drift)});
            }
            break;
        case DgpKind::Ar1:
            for (std::size_t i = 0; i < spec.n_series; ++i) {
                cols.push_back({fmt::format("y{}", i + 1), 1, ar1_path(e, T, spec.rho)});
            }
            break;
        case DgpKind::TrendBreak: {
            auto y = ar1_path(e, T, spec.rho);
            for (std::size_t t = spec.tb; t < T; ++t) y[t] += spec.magnitude * spec.innovation_sd;
            cols.push_back({"y", 1, std::move(y)});
            break;
        }
        case DgpKind::CointegratedPair: {
            auto x = random_walk(e, T, spec.drift);
            auto u = ar1_path(e, T, spec.rho);
            std::vector<double> y(T);
            for (std::size_t t = 0; t < T; ++t) y[t] = spec.intercept + spec.beta * x[t] + u[t];
            cols.push_back({"y", 1, std::move(y)});
            cols.push_back({"x", 1, std::move(x)});
            break;
        }
        case DgpKind::CointegratedSystem: {
            std::vector<std::vector<double>> xs;
            for (std::size_t i = 0; i < spec.loadings.size(); ++i) xs.push_back(random_walk(e, T, spec.drift));
            auto u = ar1_path(e, T, spec.rho);
            std::vector<double> y(T);
            for (std::size_t t = 0; t < T; ++t) {
                y[t] = spec.intercept + u[t];
                for (std::size_t i = 0; i < xs.size(); ++i) y[t] += spec.loadings[i] * xs[i][t];
            }
            cols.push_back({"y", 1, std::move(y)});
            for (std::size_t i = 0; i < xs.size(); ++i) cols.push_back({fmt::format("x{}", i + 1), 1, std::move(xs[i])});
            break;
        }
        case DgpKind::Ecm: {
            const std::size_t k = spec.loadings.size();
            std::vector<std::vector<double>> Y(k, std::vector<double>(T));
            std::vector<double> prev(k, 0.0);
            for (std::size_t t = 0; t < T; ++t) {
                double z = 0.0;
                for (std::size_t i = 0; i < k; ++i) z += spec.beta_vec[i] * prev[i];
                for (std::size_t i = 0; i < k; ++i) {
                    prev[i] += spec.drift + spec.loadings[i] * z + e();
                    Y[i][t] = prev[i];
                }
            }
            for (std::size_t i = 0; i < k; ++i) cols.push_back({fmt::format("y{}", i + 1), 1, std::move(Y[i])});
            break;
        }
        case DgpKind::LinearRegression: {
            std::vector<double> x(T), y(T);
            for (std::size_t t = 0; t < T; ++t) x[t] = e();
            for (std::size_t t = 0; t < T; ++t) y[t] = 1.0 + x[t] + e();
            cols.push_back({"y", 1, std::move(y)});
            cols.push_back({"x", 1, std::move(x)});
            break;
        }
    }
    return Dataset(1, std::move(cols));
}

Dataset simulate_dgp(const DgpSpec& spec) {
    std::mt19937_64 rng(splitmix64(spec.seed));
    return simulate_dgp(spec, rng);
}

std::string_view to_string(CvTest t) noexcept {
    switch (t) {
        case CvTest::DickeyFullerConstant: return "DF_constant";
        case CvTest::ZivotAndrews: return "ZA";
        case CvTest::LeeStrazicich2: return "LS_two_break";
        case CvTest::JohansenTrace: return "Johansen_trace";
    }
    return "?";
}

double empirical_quantile(std::vector<double> data, double prob) {
    if (data.empty()) throw Error(ErrorCode::InvalidArgument, "no data for quantile");
    std::sort(data.begin(), data.end());
    const double h = (static_cast<double>(data.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, data.size() - 1);
    return data[lo] + (h - static_cast<double>(lo)) * (data[hi] - data[lo]);
}

double batched_quantile_stderr(const std::vector<double>& draws, double prob, std::size_t batches) {
    if (batches < 2 || draws.size() < 2 * batches) return std::nan("");
    const std::size_t per = draws.size() / batches;
    std::vector<double> q;
    for (std::size_t b = 0; b < batches; ++b) {
        std::vector<double> chunk(draws.begin() + static_cast<long>(b * per),
                                  draws.begin() + static_cast<long>((b + 1) * per));
        q.push_back(empirical_quantile(std::move(chunk), prob));
    }
    double mean = 0.0;
    for (double v : q) mean += v;
    mean /= static_cast<double>(batches);
    double ss = 0.0;
    for (double v : q) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(batches - 1));
    return sd / std::sqrt(static_cast<double>(batches));
}

SimulationSummary simulate_critical_values(CvTest test, std::size_t T, std::size_t reps, std::uint64_t seed,
                                           const CvOptions& options) {
    // quantile tails need enough draws; below this the 1% value rests on a handful of points
    if (reps < 1000) throw Error(ErrorCode::InvalidSpec, "critical-value simulation needs at least 1000 reps");
    if (test == CvTest::LeeStrazicich2 && options.model == BreakModel::B) {
        throw Error(ErrorCode::InvalidSpec, "LS test has no model B");
    }
    DgpSpec dgp;
    dgp.kind = DgpKind::RandomWalk;
    dgp.T = T;
    if (test == CvTest::JohansenTrace) {
        if (options.k_minus_r < 1 || options.k_minus_r > 6) throw Error(ErrorCode::InvalidSpec, "k-r must be in 1..6");
        dgp.n_series = options.k_minus_r;
        dgp.drift = 1.0;
    }
    validate(dgp);

    const AdfSpec lag0{Deterministic::Constant, 0, LagRule::fixed_at(0)};
    const BreakSearchOptions search{options.trim, 1};
    SimulationSummary s;
    s.test_id = std::string(to_string(test));
    s.T = T;
    s.reps = reps;
    s.seed_base = seed;
    s.draws.assign(reps, 0.0);
    parallel_for(reps, options.workers, [&](std::size_t i) {
        auto rng = replication_rng(seed, i);
        const Dataset d = simulate_dgp(dgp, rng);
        switch (test) {
            case CvTest::DickeyFullerConstant:
                s.draws[i] = adf_test(d.columns()[0], lag0).statistic;
                break;
            case CvTest::ZivotAndrews:
                s.draws[i] = za_test(d.columns()[0], options.model, lag0, search).statistic;
                break;
            case CvTest::LeeStrazicich2:
                s.draws[i] = ls_test(d.columns()[0], options.model, 2, lag0, search).statistic;
                break;
            case CvTest::JohansenTrace:
                s.draws[i] = johansen_test(d.as_matrix(), std::size_t{1}).trace_stats[0];
                break;
        }
    });

    const bool upper = test == CvTest::JohansenTrace;
    const std::array<double, 3> probs = upper ? std::array<double, 3>{0.99, 0.95, 0.90}
                                              : std::array<double, 3>{0.01, 0.05, 0.10};
    for (std::size_t l = 0; l < 3; ++l) {
        s.quantiles[l] = empirical_quantile(s.draws, probs[l]);
        s.mc_stderr[l] = batched_quantile_stderr(s.draws, probs[l], options.batches);
    }
    double cv5 = 0.0;
    switch (test) {
        case CvTest::DickeyFullerConstant:
            s.model = "constant";
            cv5 = adf_critical_values(Deterministic::Constant, T - 1).at(Level::Pct5);
            break;
        case CvTest::ZivotAndrews:
            s.model = std::string(to_string(options.model));
            cv5 = za_critical_values(options.model).at(Level::Pct5);
            break;
        case CvTest::LeeStrazicich2:
            s.model = std::string(to_string(options.model));
            cv5 = ls_critical_values(options.model, 2).at(Level::Pct5);
            break;
        case CvTest::JohansenTrace:
            s.model = fmt::format("k-r={}", options.k_minus_r);
            cv5 = johansen_trace_critical(options.k_minus_r, Level::Pct5);
            break;
    }
    std::size_t hits = 0;
    for (double v : s.draws) hits += upper ? (v > cv5) : (v < cv5);
    s.rejection_rate = static_cast<double>(hits) / static_cast<double>(reps);
    return s;
}

double rejection_rate(const DgpSpec& spec, std::size_t reps, std::uint64_t seed_base, const Rejector& reject,
                      std::size_t workers) {
    if (reps < 1) throw Error(ErrorCode::InvalidSpec, "reps must be >= 1");
    validate(spec);
    std::vector<char> hit(reps, 0);
    parallel_for(reps, workers, [&](std::size_t i) {
        auto rng = replication_rng(seed_base, i);
        hit[i] = reject(simulate_dgp(spec, rng)) ? 1 : 0;
    });
    std::size_t n = 0;
    for (char h : hit) n += static_cast<std::size_t>(h);
    return static_cast<double>(n) / static_cast<double>(reps);
}

std::string_view to_string(ExperimentTest t) noexcept {
    switch (t) {
        case ExperimentTest::Adf: return "ADF";
        case ExperimentTest::JohansenRankOne: return "Johansen_rank1";
        case ExperimentTest::BoundsCointegrated: return "ARDL_bounds";
        case ExperimentTest::BreuschGodfrey: return "Breusch_Godfrey";
        case ExperimentTest::BreuschPagan: return "Breusch_Pagan";
        case ExperimentTest::JarqueBera: return "Jarque_Bera";
        case ExperimentTest::Reset: return "RESET";
    }
    return "?";
}

namespace {

struct SimpleRegression {
    Vector y;
    Matrix X;
    OlsFit fit;
};

SimpleRegression regress_first_on_rest(const Dataset& d) {
    const Matrix M = d.as_matrix();
    SimpleRegression r;
    r.y = M.col(0);
    r.X.resize(M.rows(), M.cols());
    r.X.col(0).setOnes();
    r.X.rightCols(M.cols() - 1) = M.rightCols(M.cols() - 1);
    r.fit = ols_fit(r.y, r.X);
    return r;
}

}  // namespace

Rejector rejector_for(ExperimentTest test) {
    switch (test) {
        case ExperimentTest::Adf:
            return [](const Dataset& d) { return adf_test(d.columns()[0]).rejects(Level::Pct5); };
        case ExperimentTest::JohansenRankOne:
            return [](const Dataset& d) {
                return johansen_test(d.as_matrix(), std::nullopt).selected_rank[static_cast<std::size_t>(Level::Pct5)] == 1;
            };
        case ExperimentTest::BoundsCointegrated:
            return [](const Dataset& d) {
                const Matrix M = d.as_matrix();
                const Matrix X = M.rightCols(M.cols() - 1);
                const ArdlFit f = ardl_fit(Vector(M.col(0)), X, 1, std::vector<std::size_t>(static_cast<std::size_t>(X.cols()), 1));
                return bounds_test(f).verdict == BoundsVerdict::Cointegrated;
            };
        case ExperimentTest::BreuschGodfrey:
            return [](const Dataset& d) {
                const auto r = regress_first_on_rest(d);
                return breusch_godfrey(r.fit, r.X, 2).p_value < 0.05;
            };
        case ExperimentTest::BreuschPagan:
            return [](const Dataset& d) {
                const auto r = regress_first_on_rest(d);
                return heteroskedasticity_test(r.fit, r.X).p_value < 0.05;
            };
        case ExperimentTest::JarqueBera:
            return [](const Dataset& d) {
                const auto r = regress_first_on_rest(d);
                return jarque_bera(r.fit.residuals).p_value < 0.05;
            };
        case ExperimentTest::Reset:
            return [](const Dataset& d) {
                const auto r = regress_first_on_rest(d);
                return ramsey_reset(r.fit, r.X, r.y).f.p_value < 0.05;
            };
    }
    throw Error(ErrorCode::InvalidSpec, "unknown experiment");
}

ExperimentResult size_power_experiment(ExperimentTest test, const DgpSpec& null_spec, const DgpSpec& alt_spec,
                                       std::size_t reps, std::uint64_t seed, std::size_t workers) {
    if (reps < 200) throw Error(ErrorCode::InvalidSpec, "size/power experiments need at least 200 reps");
    const Rejector reject = rejector_for(test);
    ExperimentResult r;
    for (auto* s : {&r.null_summary, &r.alt_summary}) {
        s->test_id = std::string(to_string(test));
        s->reps = reps;
        s->quantiles.fill(std::nan(""));
        s->mc_stderr.fill(std::nan(""));
    }
    r.null_summary.model = "null";
    r.null_summary.T = null_spec.T;
    r.null_summary.seed_base = seed;
    r.null_summary.rejection_rate = rejection_rate(null_spec, reps, seed, reject, workers);
    const std::uint64_t alt_seed = splitmix64(seed ^ 0xA17E2A7EULL);
    r.alt_summary.model = "alternative";
    r.alt_summary.T = alt_spec.T;
    r.alt_summary.seed_base = alt_seed;
    r.alt_summary.rejection_rate = rejection_rate(alt_spec, reps, alt_seed, reject, workers);
    return r;
}

std::string summaries_to_csv(const std::vector<SimulationSummary>& summaries) {
    std::string out = "test_id,model,T,reps,level,quantile,mc_stderr\n";
    static constexpr const char* levels[3] = {"1%", "5%", "10%"};
    for (const auto& s : summaries) {
        for (std::size_t l = 0; l < 3; ++l) {
            out += fmt::format("{},{},{},{},{},{:.6f},{:.6f}\n", s.test_id, s.model, s.T, s.reps, levels[l],
                               s.quantiles[l], s.mc_stderr[l]);
        }
    }
    return out;
}

}  // namespace tsecon
