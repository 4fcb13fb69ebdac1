#include <algorithm>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "tsecon/error.hpp"
#include "tsecon/pipeline.hpp"

namespace tsecon {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::ConfigError, where.empty() ? what : fmt::format("{}: {}", where, what));
}

void require_object(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(where, "expected an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items()) {
        (void)v;
        if (!keys.count(k)) fail(where, fmt::format("unknown key '{}'", k));
    }
}

std::string sub(const std::string& where, const char* key) {
    return where.empty() ? std::string(key) : where + "." + key;
}

std::string get_string(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    auto s = j.get<std::string>();
    if (s.empty()) fail(where, "must not be empty");
    return s;
}

std::size_t get_count(const json& j, const std::string& where, std::size_t lo, std::size_t hi) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
        fail(where, "expected a non-negative integer");
    }
    const auto v = j.get<std::uint64_t>();
    if (v < lo || v > hi) fail(where, fmt::format("must lie in [{}, {}]", lo, hi));
    return static_cast<std::size_t>(v);
}

std::optional<std::size_t> get_optional_count(const json& j, const std::string& where, std::size_t lo,
                                              std::size_t hi) {
    if (j.is_null()) return std::nullopt;
    return get_count(j, where, lo, hi);
}

double get_number(const json& j, const std::string& where, double lo, double hi) {
    if (!j.is_number()) fail(where, "expected a number");
    const double v = j.get<double>();
    if (!(v >= lo && v <= hi)) fail(where, fmt::format("must lie in [{}, {}]", lo, hi));
    return v;
}

template <class Fn>
void maybe(const json& j, const char* key, const std::string& where, Fn fn) {
    if (auto it = j.find(key); it != j.end()) fn(*it, sub(where, key));
}

std::vector<std::string> get_names(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of names");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_string(j[i], fmt::format("{}[{}]", where, i)));
    return out;
}

void parse_tuning(const json& j, const std::string& w, PipelineTuning& t) {
    require_object(j, w, {"workers", "unit_root", "johansen", "hatemi_j", "dols", "fmols", "ardl", "diagnostics",
                          "finite_sample_cv"});
    maybe(j, "workers", w, [&](const json& v, const std::string& p) { t.workers = get_count(v, p, 1, 1024); });
    maybe(j, "unit_root", w, [&](const json& u, const std::string& p) {
        require_object(u, p, {"trim", "lag_rule", "max_lag", "fixed_lag"});
        maybe(u, "trim", p, [&](const json& v, const std::string& q) { t.unit_root.trim = get_number(v, q, 0.05, 0.25); });
        maybe(u, "max_lag", p, [&](const json& v, const std::string& q) {
            t.unit_root.max_lag = get_optional_count(v, q, 0, 20);
        });
        std::string rule = "tsig10";
        maybe(u, "lag_rule", p, [&](const json& v, const std::string& q) { rule = get_string(v, q); });
        std::size_t fixed = 0;
        bool has_fixed = false;
        maybe(u, "fixed_lag", p, [&](const json& v, const std::string& q) {
            fixed = get_count(v, q, 0, 20);
            has_fixed = true;
        });
        if (rule == "tsig10") {
            t.unit_root.lag_rule = LagRule::t_sig_10pct();
        } else if (rule == "aic") {
            t.unit_root.lag_rule = LagRule::aic();
        } else if (rule == "fixed") {
            if (!has_fixed) fail(p, "lag_rule 'fixed' needs fixed_lag");
            t.unit_root.lag_rule = LagRule::fixed_at(fixed);
        } else {
            fail(sub(p, "lag_rule"), "expected one of tsig10, aic, fixed");
        }
        if (has_fixed && rule != "fixed") fail(sub(p, "fixed_lag"), "only valid with lag_rule 'fixed'");
    });
    maybe(j, "johansen", w, [&](const json& u, const std::string& p) {
        require_object(u, p, {"lag_order"});
        maybe(u, "lag_order", p, [&](const json& v, const std::string& q) {
            t.johansen.lag_order = get_optional_count(v, q, 1, 6);
        });
    });
    maybe(j, "hatemi_j", w, [&](const json& u, const std::string& p) {
        require_object(u, p, {"trim", "shifts"});
        maybe(u, "trim", p, [&](const json& v, const std::string& q) { t.hatemi_j.trim = get_number(v, q, 0.05, 0.25); });
        maybe(u, "shifts", p, [&](const json& v, const std::string& q) {
            const auto s = get_string(v, q);
            if (s == "level") {
                t.hatemi_j.shifts = ShiftSpec::LevelShifts;
            } else if (s == "level_and_slope") {
                t.hatemi_j.shifts = ShiftSpec::LevelAndSlopeShifts;
            } else {
                fail(q, "expected level or level_and_slope");
            }
        });
    });
    maybe(j, "dols", w, [&](const json& u, const std::string& p) {
        require_object(u, p, {"leads", "lags", "bandwidth"});
        maybe(u, "leads", p, [&](const json& v, const std::string& q) { t.dols.leads = get_count(v, q, 0, 4); });
        maybe(u, "lags", p, [&](const json& v, const std::string& q) { t.dols.lags = get_count(v, q, 0, 4); });
        maybe(u, "bandwidth", p, [&](const json& v, const std::string& q) {
            t.dols.bandwidth = get_optional_count(v, q, 0, 20);
        });
    });
    maybe(j, "fmols", w, [&](const json& u, const std::string& p) {
        require_object(u, p, {"bandwidth"});
        maybe(u, "bandwidth", p, [&](const json& v, const std::string& q) {
            t.fmols.bandwidth = get_optional_count(v, q, 0, 20);
        });
    });
    maybe(j, "ardl", w, [&](const json& u, const std::string& p) {
        require_object(u, p, {"p_max", "q_max", "criterion"});
        maybe(u, "p_max", p, [&](const json& v, const std::string& q) { t.ardl.p_max = get_count(v, q, 1, 4); });
        maybe(u, "q_max", p, [&](const json& v, const std::string& q) { t.ardl.q_max = get_count(v, q, 0, 4); });
        maybe(u, "criterion", p, [&](const json& v, const std::string& q) {
            const auto s = get_string(v, q);
            if (s == "aic") {
                t.ardl.criterion = SelectionCriterion::Aic;
            } else if (s == "bic") {
                t.ardl.criterion = SelectionCriterion::Bic;
            } else {
                fail(q, "expected aic or bic");
            }
        });
    });
    maybe(j, "diagnostics", w, [&](const json& u, const std::string& p) {
        require_object(u, p, {"bg_lags", "heteroskedasticity"});
        maybe(u, "bg_lags", p, [&](const json& v, const std::string& q) { t.diagnostics.bg_lags = get_count(v, q, 1, 8); });
        maybe(u, "heteroskedasticity", p, [&](const json& v, const std::string& q) {
            const auto s = get_string(v, q);
            if (s == "breusch_pagan") {
                t.diagnostics.hetero = HeteroskedasticityVariant::BreuschPagan;
            } else if (s == "white") {
                t.diagnostics.hetero = HeteroskedasticityVariant::White;
            } else {
                fail(q, "expected breusch_pagan or white");
            }
        });
    });
    maybe(j, "finite_sample_cv", w, [&](const json& u, const std::string& p) {
        require_object(u, p, {"reps"});
        maybe(u, "reps", p, [&](const json& v, const std::string& q) {
            const auto reps = get_count(v, q, 0, 1000000);
            if (reps != 0 && reps < 1000) fail(q, "use 0 to disable or at least 1000");
            t.finite_sample_cv.reps = reps;
        });
    });
}

}  // namespace

void PipelineConfig::validate() const {
    if (dependent.empty()) fail("variables.dependent", "must not be empty");
    if (regressors.empty()) fail("variables.regressors", "needs at least one regressor");
    std::set<std::string> seen;
    for (const auto& r : regressors) {
        if (r == dependent) fail("variables.regressors", fmt::format("dependent '{}' listed among regressors", r));
        if (r == "TERM") fail("variables.regressors", "TERM is reserved for the interaction column");
        if (!seen.insert(r).second) fail("variables.regressors", fmt::format("'{}' listed twice", r));
    }
    if (interaction && interaction->first == interaction->second) {
        fail("variables.interaction", "factors must differ");
    }
    if (model_variants.empty()) fail("model_variants", "needs at least one variant");
    std::set<std::string> vs;
    for (const auto& v : model_variants) {
        if (v != "with_term" && v != "without_term") fail("model_variants", fmt::format("unknown variant '{}'", v));
        if (!vs.insert(v).second) fail("model_variants", fmt::format("'{}' listed twice", v));
        if (v == "with_term" && !interaction) fail("model_variants", "with_term needs variables.interaction");
    }
    if (tuning.ardl.q_max > tuning.ardl.p_max + 2) {
        // not an econometric restriction; keeps the selection grid small
        fail("tuning.ardl.q_max", "must not exceed p_max + 2");
    }
}

PipelineConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail("", fmt::format("invalid JSON: {}", e.what()));
    }
    require_object(j, "", {"data_path", "variables", "model_variants", "output_dir", "seed", "tuning"});
    PipelineConfig c;
    if (!j.contains("data_path")) fail("data_path", "is required");
    std::filesystem::path data = get_string(j["data_path"], "data_path");
    c.data_path = data.is_relative() && !base_dir.empty() ? (base_dir / data).lexically_normal() : data;

    maybe(j, "variables", "", [&](const json& v, const std::string& p) {
        require_object(v, p, {"dependent", "regressors", "interaction"});
        maybe(v, "dependent", p, [&](const json& x, const std::string& q) { c.dependent = get_string(x, q); });
        maybe(v, "regressors", p, [&](const json& x, const std::string& q) { c.regressors = get_names(x, q); });
        maybe(v, "interaction", p, [&](const json& x, const std::string& q) {
            if (x.is_null()) {
                c.interaction.reset();
                return;
            }
            const auto f = get_names(x, q);
            if (f.size() != 2) fail(q, "expected exactly two factor names or null");
            c.interaction = std::make_pair(f[0], f[1]);
        });
    });
    maybe(j, "model_variants", "", [&](const json& v, const std::string& p) { c.model_variants = get_names(v, p); });
    maybe(j, "output_dir", "", [&](const json& v, const std::string& p) { c.output_dir = get_string(v, p); });
    maybe(j, "seed", "", [&](const json& v, const std::string& p) {
        if (!v.is_number_unsigned()) fail(p, "expected a non-negative integer");
        c.seed = v.get<std::uint64_t>();
    });
    maybe(j, "tuning", "", [&](const json& v, const std::string& p) { parse_tuning(v, p, c.tuning); });
    c.validate();
    return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, e.what());
    }
    return parse_config(text, path.parent_path());
}

}  // namespace tsecon
