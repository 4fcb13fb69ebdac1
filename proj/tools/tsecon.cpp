// Command-line front end. Exit codes: 0 ok, 1 replication mismatch,
// 2 input or validation error, 3 computation error, 4 network error.

#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "tsecon/error.hpp"
#include "tsecon/montecarlo.hpp"
#include "tsecon/pipeline.hpp"
#include "tsecon/replicate.hpp"
#include "tsecon/worldbank.hpp"

namespace {

using namespace tsecon;
namespace fs = std::filesystem;

int exit_code_for(ErrorCode c) {
    switch (c) {
        case ErrorCode::GapInYears:
        case ErrorCode::NonNumericCell:
        case ErrorCode::DuplicateColumn:
        case ErrorCode::EmptyFile:
        case ErrorCode::TrimOutOfRange:
        case ErrorCode::InvalidArgument:
        case ErrorCode::InvalidSpec:
        case ErrorCode::MalformedExpectations:
        case ErrorCode::ConfigError:
        case ErrorCode::IoFailure:
            return 2;
        case ErrorCode::NetworkUnavailable:
        case ErrorCode::HttpStatus:
        case ErrorCode::MalformedPayload:
            return 4;
        default:
            return 3;
    }
}

struct RunArgs {
    std::string config = "config/default.json";
    std::string data;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::vector<std::string> formats;
};

void add_run_flags(CLI::App* sub, RunArgs& a) {
    sub->add_option("--config", a.config, "Pipeline configuration (strict JSON)")->capture_default_str();
    sub->add_option("--data", a.data, "Override the data CSV path");
    sub->add_option("--out", a.out, "Output directory (overrides output_dir)");
    sub->add_option("--seed", a.seed, "Override the run seed");
    sub->add_option("--workers", a.workers, "Worker threads")->check(CLI::Range(1, 1024));
    sub->add_option("--format", a.formats, "Output formats: md, csv, svg (repeatable; default all)")
        ->check(CLI::IsMember({"md", "csv", "svg"}));
}

int run_stages(const RunArgs& a, const StageSet& stages, bool print_tables) {
    PipelineConfig config = load_config(a.config);
    if (!a.data.empty()) config.data_path = a.data;
    if (!a.out.empty()) config.output_dir = a.out;
    if (a.seed) config.seed = *a.seed;
    if (a.workers) config.tuning.workers = *a.workers;

    WriteOptions wo;
    if (!a.formats.empty()) {
        wo.formats.clear();
        for (const auto& f : a.formats) {
            wo.formats.push_back(f == "md" ? OutputFormat::Markdown : f == "csv" ? OutputFormat::Csv : OutputFormat::Svg);
        }
    }
    wo.config_text = read_file(a.config);
    wo.data_text = read_file(config.data_path);
    const Dataset raw = load_dataset(wo.data_text);

    OutputLock lock(config.output_dir);
    const ReportBundle bundle = run_pipeline(config, raw, stages);
    write_bundle(bundle, config, config.output_dir, wo);
    if (print_tables) std::cout << render_markdown(bundle.tables);
    if (!bundle.failed_stage.empty()) {
        std::cerr << fmt::format("stage {} failed: {}\n", bundle.failed_stage, bundle.failure_message);
        return exit_code_for(bundle.failure_code.value_or(ErrorCode::DegenerateFit));
    }
    std::cerr << fmt::format("wrote {} tables to {}\n", bundle.tables.size(), config.output_dir.string());
    return 0;
}

struct SimArgs {
    std::string test = "za";
    std::string model = "A";
    std::size_t T = 500;
    std::size_t reps = 10000;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    std::size_t k_minus_r = 4;
    double trim = 0.15;
    std::string out;
};

int simulate(const SimArgs& a) {
    static const std::map<std::string, CvTest> tests{{"df", CvTest::DickeyFullerConstant},
                                                     {"za", CvTest::ZivotAndrews},
                                                     {"ls", CvTest::LeeStrazicich2},
                                                     {"johansen", CvTest::JohansenTrace}};
    CvOptions o;
    o.model = a.model == "A" ? BreakModel::A : a.model == "B" ? BreakModel::B : BreakModel::C;
    o.k_minus_r = a.k_minus_r;
    o.trim = a.trim;
    o.workers = a.workers;
    const auto s = simulate_critical_values(tests.at(a.test), a.T, a.reps, a.seed, o);
    const std::string csv = summaries_to_csv({s});
    if (a.out.empty()) {
        std::cout << csv;
    } else {
        write_file(a.out, csv);
    }
    std::cerr << fmt::format("{} {}: 5% quantile {:.4f} (s.e. {:.4f}), rejection at tabulated 5% value {:.3f}\n",
                             s.test_id, s.model, s.quantiles[1], s.mc_stderr[1], s.rejection_rate);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-series econometrics pipeline: unit roots, cointegration, long-run estimators"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    RunArgs run_args;
    struct Sub {
        const char* name;
        const char* help;
        StageSet stages;
        bool print;
    };
    const std::vector<Sub> subs{
        {"run", "Run every stage and write the full bundle", StageSet::all(), false},
        {"describe", "Descriptive statistics", StageSet::only_describe(), true},
        {"unitroot", "ADF, Zivot-Andrews and Lee-Strazicich tests", StageSet::only_unit_root(), true},
        {"cointegrate", "Johansen and Hatemi-J tests", StageSet::only_cointegration(), true},
        {"estimate", "DOLS and FMOLS long-run estimates", StageSet::only_longrun(), true},
        {"ardl", "ARDL selection, bounds test and error-correction form", StageSet::only_ardl(), true},
        {"diagnose", "Residual diagnostics and stability plots", StageSet::only_diagnostics(), true},
    };
    std::vector<CLI::App*> run_cmds;
    for (const auto& s : subs) {
        auto* c = app.add_subcommand(s.name, s.help);
        add_run_flags(c, run_args);
        run_cmds.push_back(c);
    }

    SimArgs sim;
    auto* simc = app.add_subcommand("simulate", "Monte Carlo critical values under the unit-root null");
    simc->add_option("--test", sim.test)->check(CLI::IsMember({"df", "za", "ls", "johansen"}))->capture_default_str();
    simc->add_option("--model", sim.model)->check(CLI::IsMember({"A", "B", "C"}))->capture_default_str();
    simc->add_option("-T,--length", sim.T)->capture_default_str();
    simc->add_option("--reps", sim.reps)->capture_default_str();
    simc->add_option("--seed", sim.seed)->capture_default_str();
    simc->add_option("--workers", sim.workers)->check(CLI::Range(1, 1024))->capture_default_str();
    simc->add_option("--k-minus-r", sim.k_minus_r)->capture_default_str();
    simc->add_option("--trim", sim.trim)->capture_default_str();
    simc->add_option("--out", sim.out, "CSV file (stdout when absent)");

    WdiRequest wdi;
    wdi.country = "TUR";
    std::string fetch_out;
    auto* fetchc = app.add_subcommand("fetch", "Download a World Bank indicator as year,value CSV");
    fetchc->add_option("--indicator", wdi.indicator)->required();
    fetchc->add_option("--country", wdi.country)->capture_default_str();
    fetchc->add_option("--from", wdi.first_year)->capture_default_str();
    fetchc->add_option("--to", wdi.last_year)->capture_default_str();
    fetchc->add_option("--base-url", wdi.base_url)->capture_default_str();
    fetchc->add_option("--out", fetch_out, "CSV file (stdout when absent)");

    std::string bundle_dir;
    std::string expectations = "data/expectations_snapshot.csv";
    auto* repc = app.add_subcommand("replicate", "Compare a bundle's cells against an expectations file");
    repc->add_option("--bundle", bundle_dir, "Bundle directory holding cells.csv")->required();
    repc->add_option("--expectations", expectations)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t i = 0; i < subs.size(); ++i) {
            if (run_cmds[i]->parsed()) return run_stages(run_args, subs[i].stages, subs[i].print);
        }
        if (simc->parsed()) return simulate(sim);
        if (fetchc->parsed()) {
            const std::string csv = year_value_csv(fetch_worldbank(wdi));
            if (fetch_out.empty()) {
                std::cout << csv;
            } else {
                write_file(fetch_out, csv);
            }
            return 0;
        }
        if (repc->parsed()) {
            const auto exp = parse_expectations(read_file(expectations));
            const auto cells = parse_cells(read_file(fs::path(bundle_dir) / "cells.csv"));
            const auto report = replicate(cells, exp);
            std::cout << report.diff();
            std::cerr << fmt::format("{} of {} expectations met\n", report.checked - report.failures.size(),
                                     report.checked);
            return report.exit_code();
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
