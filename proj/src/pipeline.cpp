#include "tsecon/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace tsecon {

const LongRunEstimate* VariantResults::estimate(Estimator e) const {
    switch (e) {
        case Estimator::DOLS: return dols ? &*dols : nullptr;
        case Estimator::FMOLS: return fmols ? &*fmols : nullptr;
        case Estimator::ARDL: return ecm ? &ecm->long_run : nullptr;
    }
    return nullptr;
}

const DiagnosticsBundle* VariantResults::diagnostics_for(Estimator e) const {
    for (const auto& d : diagnostics) {
        if (d.estimator == e) return &d.bundle;
    }
    return nullptr;
}

const Table* ReportBundle::table(std::string_view id) const {
    for (const auto& t : tables) {
        if (t.id == id) return &t;
    }
    return nullptr;
}

const VariantResults* ReportBundle::variant(std::string_view name) const {
    for (const auto& v : variants) {
        if (v.name == name) return &v;
    }
    return nullptr;
}

Dataset assemble_dataset(const Dataset& raw, const PipelineConfig& config) {
    config.validate();
    auto require = [&](const std::string& name, const char* role) {
        if (!raw.contains(name)) {
            throw Error(ErrorCode::ConfigError, fmt::format("{} '{}' is not a column of the data", role, name));
        }
    };
    require(config.dependent, "dependent");
    for (const auto& r : config.regressors) require(r, "regressor");
    if (config.interaction) {
        require(config.interaction->first, "interaction factor");
        require(config.interaction->second, "interaction factor");
        if (raw.contains("TERM")) throw Error(ErrorCode::ConfigError, "data already has a TERM column");
    }
    std::vector<std::string> names{config.dependent};
    names.insert(names.end(), config.regressors.begin(), config.regressors.end());
    Dataset out = raw.select(names);
    if (config.interaction) {
        out.add(interaction(raw.column(config.interaction->first), raw.column(config.interaction->second)));
    }
    return out;
}

namespace {

std::string breaks_text(const std::vector<int>& years) {
    if (years.size() == 1) return fmt::format("{}", years[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < years.size(); ++i) s += fmt::format("{}{}", i ? ", " : "", years[i]);
    return s + ")";
}

std::string variant_suffix(const std::string& variant, const PipelineConfig& config) {
    return variant == config.model_variants.front() ? "" : "_" + variant;
}

Cell stat_cell(const BreakTestReport& r) {
    return num(r.statistic, 3, stars_left(r.statistic, r.critical_values.values));
}

std::string cv_note(std::string_view label, const CriticalValues& cv) {
    return fmt::format("{} critical values: 1% {:.3f}, 5% {:.3f}, 10% {:.3f}.", label, cv.values[0], cv.values[1],
                       cv.values[2]);
}

std::string lag_rule_text(const LagRule& r) {
    switch (r.kind) {
        case LagRule::Kind::Fixed: return fmt::format("fixed at {}", r.fixed);
        case LagRule::Kind::TSig10: return "general-to-specific at 10%";
        case LagRule::Kind::Aic: return "AIC";
    }
    return "";
}

Table make_table(std::string id, std::string title, std::string row_header, std::vector<std::string> columns) {
    Table t;
    t.id = std::move(id);
    t.title = std::move(title);
    t.row_header = std::move(row_header);
    t.columns = std::move(columns);
    return t;
}

const char* kStarNote = "***, **, * mark significance at 1%, 5%, 10%.";

Table descriptives_table(const std::vector<ColumnSummary>& rows) {
    Table t = make_table("table1_descriptives", "Descriptive statistics", "Variable", {"Obs", "Mean", "SD", "Min", "Max"});
    for (const auto& s : rows) {
        t.add_row(s.name, {num(static_cast<double>(s.n), 0), num(s.mean), num(s.sd), num(s.min), num(s.max)});
    }
    t.notes.push_back("SD uses the T-1 divisor.");
    return t;
}

Table adf_table(const std::vector<BreakTestReport>& adf) {
    Table t = make_table("table2_adf",
            "ADF unit root tests (constant)",
            "Variable",
            {"Level t-statistic", "Level lag", "Difference t-statistic", "Difference lag"});
    for (std::size_t i = 0; i + 1 < adf.size(); i += 2) {
        const auto& l = adf[i];
        const auto& d = adf[i + 1];
        t.add_row(l.series, {stat_cell(l), num(static_cast<double>(l.chosen_lag), 0), stat_cell(d),
                             num(static_cast<double>(d.chosen_lag), 0)});
    }
    t.notes.push_back("MacKinnon critical values for the effective sample of each regression.");
    t.notes.push_back(kStarNote);
    return t;
}

Table break_table(const std::vector<UnitRootRow>& rows, bool two_breaks, const PipelineTuning& tuning) {
    Table t;
    if (two_breaks) {
        t = make_table("table3_ls", "Lee-Strazicich two-break LM unit root tests", "Variable",
             {"Level breaks", "Level t-statistic", "Difference breaks", "Difference t-statistic"});
    } else {
        t = make_table("table2_za", "Zivot-Andrews unit root tests", "Variable",
             {"Level break", "Level t-statistic", "Difference break", "Difference t-statistic"});
    }
    for (const auto& r : rows) {
        auto year_cell = [&](const BreakTestReport& b) {
            if (two_breaks) return text(breaks_text(b.break_years));
            return num(static_cast<double>(b.break_years.at(0)), 0);
        };
        t.add_row(fmt::format("{} (Model {})", r.variable, to_string(r.model)),
                  {year_cell(r.level), stat_cell(r.level), year_cell(r.difference), stat_cell(r.difference)});
    }
    for (auto m : {BreakModel::A, BreakModel::C}) {
        const auto cv = two_breaks ? ls_critical_values(m, 2) : za_critical_values(m);
        t.notes.push_back(cv_note(fmt::format("Model {}", to_string(m)), cv));
    }
    t.notes.push_back(fmt::format("Trim {:.2f}; augmentation lags {}.", tuning.unit_root.trim,
                                  lag_rule_text(tuning.unit_root.lag_rule)));
    t.notes.push_back(kStarNote);
    return t;
}

Table finite_cv_table(const std::vector<SimulationSummary>& sims) {
    const std::size_t T = sims.empty() ? 0 : sims.front().T;
    Table t = make_table("table_cv_finite_sample",
            fmt::format("Simulated critical values at T = {}", T),
            "Test",
            {"1%", "5%", "10%", "5% MC s.e.", "5% tabulated"});
    for (const auto& s : sims) {
        double tab = 0.0;
        if (s.test_id == "ZA") {
            tab = za_critical_values(s.model == "A" ? BreakModel::A : BreakModel::C).at(Level::Pct5);
        } else if (s.test_id == "LS_two_break") {
            tab = ls_critical_values(s.model == "A" ? BreakModel::A : BreakModel::C, 2).at(Level::Pct5);
        } else if (s.test_id == "Johansen_trace") {
            tab = johansen_trace_critical(static_cast<std::size_t>(std::stoul(s.model.substr(4))), Level::Pct5);
        }
        t.add_row(fmt::format("{} {}", s.test_id, s.model),
                  {num(s.quantiles[0]), num(s.quantiles[1]), num(s.quantiles[2]), num(s.mc_stderr[1]), num(tab)});
    }
    if (!sims.empty()) {
        t.notes.push_back(fmt::format("{} replications per row with seeds derived from the run seed; lag 0; "
                                      "Johansen rows are upper-tail quantiles.",
                                      sims.front().reps));
    }
    return t;
}

Table hatemi_j_table(const HatemiJResult& r, const Dataset& data) {
    Table t = make_table("table5_hatemi_j", "Hatemi-J cointegration test with two regime shifts", "Test",
            {"Statistic", "Break 1", "Break 2", "1%", "5%", "10%"});
    auto row = [&](const char* name, const HatemiJStatistic& s) {
        t.add_row(name, {num(s.value, 3, stars_left(s.value, s.critical_values.values)),
                         num(static_cast<double>(s.break_years[0]), 0), num(static_cast<double>(s.break_years[1]), 0),
                         num(s.critical_values.values[0]), num(s.critical_values.values[1]),
                         num(s.critical_values.values[2])});
    };
    row("ADF*", r.adf_star);
    row("Zt*", r.zt_star);
    row("Za*", r.za_star);
    const auto names = data.names();
    std::string rhs;
    for (std::size_t i = 1; i < names.size(); ++i) rhs += (i > 1 ? ", " : "") + names[i];
    t.notes.push_back(fmt::format("{} on {}; ADF* lag {}.", names.front(), rhs, r.adf_lag));
    t.notes.push_back(kStarNote);
    return t;
}

void diagnostic_rows(Table& t, const std::vector<std::pair<std::size_t, const DiagnosticsBundle*>>& cols) {
    auto add = [&](const std::string& label, auto pick) {
        std::vector<Cell> row(t.columns.size());
        for (const auto& [c, d] : cols) row[c] = pick(*d);
        t.add_row(label, std::move(row));
    };
    add("Serial correlation (p)", [](const DiagnosticsBundle& d) { return num(d.serial_correlation.p_value); });
    add("Heteroskedasticity (p)", [](const DiagnosticsBundle& d) { return num(d.heteroskedasticity.p_value); });
    add("Normality (p)", [](const DiagnosticsBundle& d) { return num(d.normality.p_value); });
    add("Functional form (p)", [](const DiagnosticsBundle& d) { return num(d.functional_form.f.p_value); });
    add("CUSUM", [](const DiagnosticsBundle& d) {
        return text(std::string(to_string(d.stability.cusum.verdict)));
    });
    add("CUSUMSQ", [](const DiagnosticsBundle& d) {
        return text(std::string(to_string(d.stability.cusumsq.verdict)));
    });
}

std::string tuning_note(const LongRunEstimate& e) {
    if (e.estimator == Estimator::DOLS) {
        return fmt::format("DOLS: {} leads, {} lags, Bartlett bandwidth {}, {} observations.", e.tuning.leads,
                           e.tuning.lags, e.tuning.bandwidth, e.effective_T);
    }
    return fmt::format("FMOLS: Bartlett bandwidth {}, {} observations.", e.tuning.bandwidth, e.effective_T);
}

Table longrun_table(const VariantResults& v, const std::string& suffix) {
    Table t = make_table("table5_longrun" + suffix, "DOLS and FMOLS long-run estimates" + (suffix.empty() ? "" : " (" + v.name + ")"),
            "Variable", {"DOLS", "DOLS s.e.", "FMOLS", "FMOLS s.e."});
    std::vector<std::string> names = v.regressors;
    names.push_back("C");
    for (const auto& n : names) {
        std::vector<Cell> row(4);
        for (auto [col, est] : {std::pair{0, &v.dols}, std::pair{2, &v.fmols}}) {
            if (!*est) continue;
            const auto& e = **est;
            const auto i = static_cast<Eigen::Index>(e.index_of(n));
            row[col] = num(e.coefficients(i), 3, stars_t(e.t_stats(i)));
            row[col + 1] = num(e.std_errors(i));
        }
        t.add_row(n, std::move(row));
    }
    std::vector<std::pair<std::size_t, const DiagnosticsBundle*>> diag;
    if (const auto* d = v.diagnostics_for(Estimator::DOLS)) diag.emplace_back(0, d);
    if (const auto* d = v.diagnostics_for(Estimator::FMOLS)) diag.emplace_back(2, d);
    if (!diag.empty()) diagnostic_rows(t, diag);
    for (const auto* e : {v.estimate(Estimator::DOLS), v.estimate(Estimator::FMOLS)}) {
        if (!e) continue;
        t.notes.push_back(tuning_note(*e));
        for (const auto& w : e->warnings) t.notes.push_back(fmt::format("{} warning: {}", to_string(e->estimator), w));
    }
    t.notes.push_back(kStarNote);
    return t;
}

std::string ardl_order_text(const ArdlFit& f) {
    std::string s = fmt::format("ARDL({}", f.p);
    for (auto q : f.q) s += fmt::format(", {}", q);
    return s + ")";
}

Table ardl_table(const VariantResults& v, const std::string& suffix, const PipelineTuning& tuning) {
    Table t = make_table("table6_ardl" + suffix, "ARDL short-run and long-run estimates" + (suffix.empty() ? "" : " (" + v.name + ")"),
            "Variable", {"Short-run", "Short-run s.e.", "Long-run", "Long-run s.e."});
    const EcmForm& ecm = *v.ecm;
    const LongRunEstimate& lr = ecm.long_run;
    auto short_run = [&](const std::string& name, std::vector<Cell>& row) {
        const auto it = std::find(ecm.short_run_names.begin(), ecm.short_run_names.end(), name);
        if (it == ecm.short_run_names.end()) return;
        const auto i = static_cast<Eigen::Index>(it - ecm.short_run_names.begin());
        row[0] = num(ecm.short_run(i), 3, stars_t(ecm.short_run(i) / ecm.short_run_se(i)));
        row[1] = num(ecm.short_run_se(i));
    };
    std::vector<std::string> names = v.regressors;
    names.push_back("C");
    for (const auto& n : names) {
        std::vector<Cell> row(4);
        short_run(n == "C" ? "C" : fmt::format("D({})", n), row);
        const auto i = static_cast<Eigen::Index>(lr.index_of(n));
        row[2] = num(lr.coefficients(i), 3, stars_t(lr.t_stats(i)));
        row[3] = num(lr.std_errors(i));
        t.add_row(n, std::move(row));
    }
    t.add_row("ECM(-1)", {num(ecm.adjustment, 3, stars_t(ecm.adjustment / ecm.adjustment_se)), num(ecm.adjustment_se)});
    if (const auto* d = v.diagnostics_for(Estimator::ARDL)) diagnostic_rows(t, {{2, d}});
    const ArdlFit& f = v.ardl->best;
    t.notes.push_back(fmt::format("{} selected by {} over p <= {}, q <= {} ({} candidates); {} observations.",
                                  ardl_order_text(f), tuning.ardl.criterion == SelectionCriterion::Aic ? "AIC" : "BIC",
                                  tuning.ardl.p_max, tuning.ardl.q_max, v.ardl->candidates, f.effective_T()));
    if (v.bounds) {
        t.notes.push_back(fmt::format("Bounds F = {:.3f} against 5% bounds [{:.2f}, {:.2f}]: {}.",
                                      v.bounds->f_statistic, v.bounds->lower_bound_5pct, v.bounds->upper_bound_5pct,
                                      to_string(v.bounds->verdict)));
    }
    for (const auto& w : ecm.warnings) t.notes.push_back("ARDL warning: " + w);
    t.notes.push_back("Short-run rows are impact coefficients on the first differences.");
    t.notes.push_back(kStarNote);
    return t;
}

Table bounds_table(const VariantResults& v, const std::string& suffix) {
    Table t = make_table("table6_bounds" + suffix, "ARDL bounds test" + (suffix.empty() ? "" : " (" + v.name + ")"), "Test",
            {"Value", "I(0) 5%", "I(1) 5%", "k", "Verdict"});
    const auto& b = *v.bounds;
    t.add_row("F-statistic", {num(b.f_statistic), num(b.lower_bound_5pct, 2), num(b.upper_bound_5pct, 2),
                              num(static_cast<double>(b.k), 0), text(std::string(to_string(b.verdict)))});
    t.notes.push_back("Unrestricted intercept, no trend.");
    return t;
}

Table diagnostics_table(const std::vector<VariantResults>& variants, const PipelineConfig& config) {
    Table t = make_table("table_diagnostics",
            "Residual diagnostics",
            "Estimator",
            {"BG LM", "BG p", "Het. stat", "Het. p", "JB", "JB p", "RESET F", "RESET p", "CUSUM", "CUSUMSQ"});
    for (const auto& v : variants) {
        const auto suffix = variant_suffix(v.name, config);
        for (const auto& d : v.diagnostics) {
            const auto& b = d.bundle;
            t.add_row(std::string(to_string(d.estimator)) + (suffix.empty() ? "" : " (" + v.name + ")"),
                      {num(b.serial_correlation.statistic), num(b.serial_correlation.p_value),
                       num(b.heteroskedasticity.statistic), num(b.heteroskedasticity.p_value),
                       num(b.normality.statistic), num(b.normality.p_value), num(b.functional_form.f.statistic),
                       num(b.functional_form.f.p_value), text(std::string(to_string(b.stability.cusum.verdict))),
                       text(std::string(to_string(b.stability.cusumsq.verdict)))});
            for (const auto* w : {&b.serial_correlation.warning, &b.heteroskedasticity.warning, &b.normality.warning,
                                  &b.functional_form.f.warning}) {
                if (!w->empty()) t.notes.push_back(fmt::format("{}: {}", to_string(d.estimator), *w));
            }
        }
    }
    t.notes.push_back(fmt::format("Breusch-Godfrey with {} lags; {} heteroskedasticity test; RESET with squared and "
                                  "cubed fitted values; CUSUM bands at 5%.",
                                  config.tuning.diagnostics.bg_lags,
                                  config.tuning.diagnostics.hetero == HeteroskedasticityVariant::White
                                      ? "White"
                                      : "Koenker Breusch-Pagan"));
    return t;
}

Table sign_summary_table(const std::vector<VariantResults>& variants, const PipelineConfig& config) {
    Table t = make_table("table_sign_summary", "Interaction against direct renewable effect", "Quantity", {"DOLS", "FMOLS", "ARDL"});
    const std::string factor = config.interaction ? config.interaction->first : "";
    for (const auto& v : variants) {
        if (std::find(v.regressors.begin(), v.regressors.end(), "TERM") == v.regressors.end()) continue;
        const auto suffix = variant_suffix(v.name, config);
        std::vector<Cell> row(3);
        int c = 0;
        for (auto e : {Estimator::DOLS, Estimator::FMOLS, Estimator::ARDL}) {
            if (const auto* est = v.estimate(e)) {
                row[static_cast<std::size_t>(c)] =
                    num(std::abs(est->coefficient("TERM")) - std::abs(est->coefficient(factor)), 3);
            }
            ++c;
        }
        t.add_row(fmt::format("abs_TERM_minus_abs_{}{}", factor, suffix), std::move(row));
    }
    t.notes.push_back(fmt::format("Positive values mean the interaction coefficient exceeds the {} coefficient in "
                                  "absolute value.",
                                  factor));
    return t;
}

void build_tables(ReportBundle& b, const PipelineConfig& config) {
    b.tables.clear();
    if (!b.descriptives.empty()) b.tables.push_back(descriptives_table(b.descriptives));
    if (!b.adf.empty()) b.tables.push_back(adf_table(b.adf));
    if (!b.za.empty()) b.tables.push_back(break_table(b.za, false, config.tuning));
    if (!b.ls.empty()) b.tables.push_back(break_table(b.ls, true, config.tuning));
    if (!b.finite_sample_cv.empty()) b.tables.push_back(finite_cv_table(b.finite_sample_cv));
    if (b.johansen_4var) {
        b.tables.push_back(johansen_table(*b.johansen_4var, "table4_johansen_4var",
                                          "Johansen cointegration test (" + fmt::format("{}", fmt::join(b.johansen_4var->variables, ", ")) + ")"));
    }
    if (b.johansen_5var) {
        b.tables.push_back(johansen_table(*b.johansen_5var, "table4_johansen_5var",
                                          "Johansen cointegration test (" + fmt::format("{}", fmt::join(b.johansen_5var->variables, ", ")) + ")"));
    }
    if (b.hatemi_j) b.tables.push_back(hatemi_j_table(*b.hatemi_j, b.data));
    for (const auto& v : b.variants) {
        const auto suffix = variant_suffix(v.name, config);
        if (v.dols || v.fmols) b.tables.push_back(longrun_table(v, suffix));
        if (v.ecm && v.ardl) b.tables.push_back(ardl_table(v, suffix, config.tuning));
        if (v.bounds) b.tables.push_back(bounds_table(v, suffix));
    }
    const bool any_diag = std::any_of(b.variants.begin(), b.variants.end(), [](const auto& v) { return !v.diagnostics.empty(); });
    if (any_diag) b.tables.push_back(diagnostics_table(b.variants, config));
    const bool any_est = std::any_of(b.variants.begin(), b.variants.end(), [](const auto& v) { return v.dols || v.fmols || v.ecm; });
    if (config.interaction && any_est) b.tables.push_back(sign_summary_table(b.variants, config));
}

std::string estimator_slug(Estimator e) {
    std::string s(to_string(e));
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

ReportBundle run_pipeline(const PipelineConfig& config, const Dataset& raw, const StageSet& stages) {
    ReportBundle b;
    b.data = assemble_dataset(raw, config);
    const auto& tuning = config.tuning;
    const std::size_t workers = std::max<std::size_t>(tuning.workers, 1);

    std::vector<std::string> base{config.dependent};
    base.insert(base.end(), config.regressors.begin(), config.regressors.end());
    const bool has_term = config.interaction.has_value();
    std::vector<std::string> with_term = config.regressors;
    if (has_term) with_term.push_back("TERM");

    auto stage = [&](const char* name, auto&& fn) {
        if (!b.failed_stage.empty()) return;
        try {
            fn();
        } catch (const Error& e) {
            b.failed_stage = name;
            b.failure_message = e.what();
            b.failure_code = e.code();
        }
    };

    if (stages.describe) {
        stage("describe", [&] { b.descriptives = describe(b.data.select(base)); });
    }

    if (stages.unit_root) {
        stage("unit_root", [&] {
            AdfSpec spec{Deterministic::Constant, tuning.unit_root.max_lag, tuning.unit_root.lag_rule};
            const BreakSearchOptions search{tuning.unit_root.trim, workers};
            for (const auto& name : base) {
                const TimeSeries& level = b.data.column(name);
                const TimeSeries diff = transform(level, Transform::diff());
                b.adf.push_back(adf_test(level, spec));
                b.adf.push_back(adf_test(diff, spec));
                for (auto m : {BreakModel::A, BreakModel::C}) {
                    b.za.push_back({name, m, za_test(level, m, spec, search), za_test(diff, m, spec, search)});
                }
                for (auto m : {BreakModel::A, BreakModel::C}) {
                    b.ls.push_back({name, m, ls_test(level, m, 2, spec, search), ls_test(diff, m, 2, spec, search)});
                }
            }
        });
    }

    if (stages.finite_sample_cv && tuning.finite_sample_cv.reps > 0) {
        stage("finite_sample_cv", [&] {
            const std::size_t T = b.data.size();
            const std::size_t reps = tuning.finite_sample_cv.reps;
            std::uint64_t slot = 0;
            auto run = [&](CvTest test, CvOptions opts) {
                opts.workers = workers;
                opts.trim = tuning.unit_root.trim;
                b.finite_sample_cv.push_back(
                    simulate_critical_values(test, T, reps, splitmix64(config.seed ^ (0x5EED0000ULL + slot++)), opts));
            };
            for (auto m : {BreakModel::A, BreakModel::C}) run(CvTest::ZivotAndrews, {.model = m});
            for (auto m : {BreakModel::A, BreakModel::C}) run(CvTest::LeeStrazicich2, {.model = m});
            run(CvTest::JohansenTrace, {.k_minus_r = base.size()});
            if (has_term && base.size() + 1 <= 6) run(CvTest::JohansenTrace, {.k_minus_r = base.size() + 1});
        });
    }

    if (stages.cointegration) {
        stage("johansen", [&] {
            if (base.size() <= 6) b.johansen_4var = johansen_test(b.data.select(base), tuning.johansen.lag_order);
            if (has_term && base.size() + 1 <= 6) {
                auto all = base;
                all.push_back("TERM");
                b.johansen_5var = johansen_test(b.data.select(all), tuning.johansen.lag_order);
            }
        });
        stage("hatemi_j", [&] {
            HatemiJOptions o;
            o.trim = tuning.hatemi_j.trim;
            o.shifts = tuning.hatemi_j.shifts;
            o.workers = workers;
            b.hatemi_j = hatemi_j_test(b.data.column(config.dependent), b.data.select(with_term), o);
        });
    }

    const bool need_longrun = stages.longrun || stages.diagnostics;
    const bool need_ardl = stages.ardl || stages.diagnostics;
    if (need_longrun || need_ardl) {
        for (const auto& name : config.model_variants) {
            VariantResults v;
            v.name = name;
            v.regressors = name == "with_term" ? with_term : config.regressors;
            b.variants.push_back(std::move(v));
        }
    }
    const TimeSeries& y = b.data.column(config.dependent);
    if (stages.longrun) {
        stage("dols", [&] {
            for (auto& v : b.variants) v.dols = dols(y, b.data.select(v.regressors), tuning.dols);
        });
        stage("fmols", [&] {
            for (auto& v : b.variants) v.fmols = fmols(y, b.data.select(v.regressors), tuning.fmols);
        });
    }
    if (stages.ardl) {
        stage("ardl", [&] {
            for (auto& v : b.variants) {
                v.ardl = ardl_select(y, b.data.select(v.regressors), tuning.ardl.p_max, tuning.ardl.q_max,
                                     tuning.ardl.criterion, workers);
                v.bounds = bounds_test(v.ardl->best);
                v.ecm = ecm_reparameterize(v.ardl->best);
            }
        });
    }
    if (stages.diagnostics) {
        stage("diagnostics", [&] {
            for (auto& v : b.variants) {
                const auto suffix = variant_suffix(v.name, config);
                auto run = [&](Estimator e, const Vector& yy, const Matrix& X, const OlsFit& fit) {
                    auto d = run_diagnostics(yy, X, fit, tuning.diagnostics);
                    const std::string stem = estimator_slug(e) + suffix;
                    b.plots_csv["cusum_" + stem] = stability_csv(d.stability.cusum);
                    b.plots_csv["cusumsq_" + stem] = stability_csv(d.stability.cusumsq);
                    b.plots_svg["cusum_" + stem] = stability_svg(d.stability.cusum, fmt::format("CUSUM, {}", to_string(e)));
                    b.plots_svg["cusumsq_" + stem] =
                        stability_svg(d.stability.cusumsq, fmt::format("CUSUM of squares, {}", to_string(e)));
                    v.diagnostics.push_back({e, std::move(d)});
                };
                if (v.dols) run(Estimator::DOLS, v.dols->regression.y, v.dols->regression.X, v.dols->regression.fit);
                if (v.fmols) run(Estimator::FMOLS, v.fmols->regression.y, v.fmols->regression.X, v.fmols->regression.fit);
                if (v.ardl) run(Estimator::ARDL, v.ardl->best.y, v.ardl->best.X, v.ardl->best.levels_fit);
            }
        });
    }

    build_tables(b, config);
    return b;
}

}  // namespace tsecon
