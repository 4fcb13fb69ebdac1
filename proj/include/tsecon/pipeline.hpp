#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tsecon/ardl.hpp"
#include "tsecon/cointegration.hpp"
#include "tsecon/diagnostics.hpp"
#include "tsecon/error.hpp"
#include "tsecon/longrun.hpp"
#include "tsecon/montecarlo.hpp"
#include "tsecon/render.hpp"
#include "tsecon/timeseries.hpp"
#include "tsecon/unit_root.hpp"

namespace tsecon {

inline constexpr const char* kVersion = "0.1.0";

struct PipelineTuning {
    std::size_t workers = 1;

    struct UnitRoot {
        double trim = 0.15;
        LagRule lag_rule = LagRule::t_sig_10pct();
        std::optional<std::size_t> max_lag;
    } unit_root;

    struct Johansen {
        std::optional<std::size_t> lag_order;  // BIC over 1..3 when absent
    } johansen;

    struct HatemiJ {
        double trim = 0.15;
        ShiftSpec shifts = ShiftSpec::LevelAndSlopeShifts;
    } hatemi_j;

    DolsOptions dols;
    FmolsOptions fmols;

    struct Ardl {
        std::size_t p_max = 2;
        std::size_t q_max = 2;
        SelectionCriterion criterion = SelectionCriterion::Aic;
    } ardl;

    DiagnosticsOptions diagnostics;

    struct FiniteSampleCv {
        std::size_t reps = 2000;  // 0 disables the table
    } finite_sample_cv;
};

struct PipelineConfig {
    std::filesystem::path data_path;
    std::string dependent = "INF";
    std::vector<std::string> regressors{"IMP", "REN", "EXC"};
    /// Factors of the interaction column TERM; absent means no interaction.
    std::optional<std::pair<std::string, std::string>> interaction{{"REN", "IMP"}};
    std::vector<std::string> model_variants{"with_term", "without_term"};
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 20240101;
    PipelineTuning tuning;

    /// Checks role invariants that need no data.
    void validate() const;
};

/// Strict JSON: unknown keys, wrong types and out-of-range values throw
/// ConfigError. Relative data paths resolve against `base_dir`.
[[nodiscard]] PipelineConfig parse_config(const std::string& json_text,
                                          const std::filesystem::path& base_dir = {});
[[nodiscard]] PipelineConfig load_config(const std::filesystem::path& path);

/// Stage switches; later stages pull in what they depend on.
struct StageSet {
    bool describe = true;
    bool unit_root = true;
    bool cointegration = true;
    bool longrun = true;
    bool ardl = true;
    bool diagnostics = true;
    bool finite_sample_cv = true;

    static StageSet all() { return {}; }
    static StageSet only_describe() { return {true, false, false, false, false, false, false}; }
    static StageSet only_unit_root() { return {false, true, false, false, false, false, true}; }
    static StageSet only_cointegration() { return {false, false, true, false, false, false, false}; }
    static StageSet only_longrun() { return {false, false, false, true, false, false, false}; }
    static StageSet only_ardl() { return {false, false, false, false, true, false, false}; }
    static StageSet only_diagnostics() { return {false, false, false, true, true, true, false}; }
};

struct UnitRootRow {
    std::string variable;
    BreakModel model = BreakModel::A;
    BreakTestReport level;
    BreakTestReport difference;
};

struct EstimatorDiagnostics {
    Estimator estimator = Estimator::DOLS;
    DiagnosticsBundle bundle;
};

/// Everything estimated for one regressor set.
struct VariantResults {
    std::string name;
    std::vector<std::string> regressors;
    std::optional<LongRunEstimate> dols;
    std::optional<LongRunEstimate> fmols;
    std::optional<ArdlSelection> ardl;
    std::optional<BoundsDecision> bounds;
    std::optional<EcmForm> ecm;
    std::vector<EstimatorDiagnostics> diagnostics;

    [[nodiscard]] const LongRunEstimate* estimate(Estimator e) const;
    [[nodiscard]] const DiagnosticsBundle* diagnostics_for(Estimator e) const;
};

struct ReportBundle {
    Dataset data;  // dependent, regressors and TERM in config order
    std::vector<ColumnSummary> descriptives;
    std::vector<BreakTestReport> adf;  // level then difference per variable
    std::vector<UnitRootRow> za;
    std::vector<UnitRootRow> ls;
    std::vector<SimulationSummary> finite_sample_cv;
    std::optional<JohansenResult> johansen_4var;
    std::optional<JohansenResult> johansen_5var;
    std::optional<HatemiJResult> hatemi_j;
    std::vector<VariantResults> variants;
    std::vector<Table> tables;
    std::map<std::string, std::string> plots_svg;  // file stem -> SVG text
    std::map<std::string, std::string> plots_csv;  // file stem -> CSV text
    std::string failed_stage;  // empty on success
    std::string failure_message;
    std::optional<ErrorCode> failure_code;

    [[nodiscard]] const Table* table(std::string_view id) const;
    [[nodiscard]] const VariantResults* variant(std::string_view name) const;
};

/// Builds the analysis dataset: dependent, regressors, then TERM.
[[nodiscard]] Dataset assemble_dataset(const Dataset& raw, const PipelineConfig& config);

/// Runs the selected stages in order. A failing stage stops the run; the
/// partial bundle is returned with failed_stage set, never thrown.
[[nodiscard]] ReportBundle run_pipeline(const PipelineConfig& config, const Dataset& raw,
                                        const StageSet& stages = StageSet::all());

enum class OutputFormat { Markdown, Csv, Svg };

struct WriteOptions {
    std::vector<OutputFormat> formats{OutputFormat::Markdown, OutputFormat::Csv, OutputFormat::Svg};
    std::string config_text;  // hashed into the provenance record
    std::string data_text;
};

/// Writes tables.md, cells.csv, tables/<id>.csv, plots/*.svg|csv and
/// provenance.json under dir. A failed bundle also gets a FAILED marker.
/// Throws IoFailure.
void write_bundle(const ReportBundle& bundle, const PipelineConfig& config, const std::filesystem::path& dir,
                  const WriteOptions& options);

/// Holds <dir>/.lock for its lifetime; a second holder gets IoFailure.
class OutputLock {
public:
    explicit OutputLock(const std::filesystem::path& dir);
    ~OutputLock();
    OutputLock(const OutputLock&) = delete;
    OutputLock& operator=(const OutputLock&) = delete;

private:
    std::filesystem::path path_;
};

[[nodiscard]] std::string sha256_hex(std::string_view bytes);
[[nodiscard]] std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace tsecon
