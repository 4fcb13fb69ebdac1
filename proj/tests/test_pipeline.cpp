#include <filesystem>
#include <thread>

#include <doctest.h>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "tsecon/pipeline.hpp"
#include "tsecon/replicate.hpp"
#include "tsecon/worldbank.hpp"

// after Eigen: resolv.h defines a _res macro that collides with Eigen internals
#include <httplib.h>

using namespace tsecon;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = TSECON_SOURCE_DIR;

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no exception thrown");
    return ErrorCode::InvalidArgument;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("tsecon_test_" + name);
    fs::remove_all(p);
    return p;
}

PipelineConfig quick_config() {
    PipelineConfig c = load_config(kRoot / "config/default.json");
    c.tuning.finite_sample_cv.reps = 0;
    return c;
}

const Dataset& snapshot() {
    static const Dataset d = load_dataset(read_file(kRoot / "data/turkiye_1980_2022.csv"));
    return d;
}

}  // namespace

TEST_CASE("config parsing") {
    const auto c = load_config(kRoot / "config/default.json");
    CHECK(c.dependent == "INF");
    CHECK(c.regressors == std::vector<std::string>{"IMP", "REN", "EXC"});
    CHECK(c.data_path == (kRoot / "data/turkiye_1980_2022.csv").lexically_normal());
    CHECK(fs::exists(c.data_path));

    auto bad = [](const std::string& json) { return code_of([&] { (void)parse_config(json); }); };
    CHECK(bad(R"({"data_path": "x.csv", "colour": 1})") == ErrorCode::ConfigError);
    CHECK(bad(R"({"data_path": "x.csv", "variables": {"dependent": "INF", "regressors": ["INF", "IMP"]}})") ==
          ErrorCode::ConfigError);
    CHECK(bad(R"({"variables": {"dependent": "INF"}})") == ErrorCode::ConfigError);
    CHECK(bad(R"({"data_path": "x.csv", "seed": -3})") == ErrorCode::ConfigError);
    CHECK(bad(R"({"data_path": "x.csv", "tuning": {"unit_root": {"lag_rule": "fixed"}}})") == ErrorCode::ConfigError);
    CHECK(bad(R"({"data_path": "x.csv", "tuning": {"unit_root": {"trim": 0.4}}})") == ErrorCode::ConfigError);
    CHECK(bad(R"({"data_path": "x.csv", "tuning": {"finite_sample_cv": {"reps": 500}}})") == ErrorCode::ConfigError);
    CHECK(bad(R"({"data_path": "x.csv", "tuning": {"dols": {"leads": 1, "extra": 2}}})") == ErrorCode::ConfigError);
    CHECK(bad(R"({"data_path": "x.csv", "model_variants": ["with_term"], "variables": {"interaction": null}})") ==
          ErrorCode::ConfigError);
    CHECK(bad("{not json") == ErrorCode::ConfigError);

    const auto ok = parse_config(R"({"data_path": "d.csv", "tuning": {"unit_root": {"lag_rule": "fixed", "fixed_lag": 1},
                                     "hatemi_j": {"shifts": "level"}, "ardl": {"criterion": "bic"}}})",
                                 "/base");
    CHECK(ok.data_path == fs::path("/base/d.csv"));
    CHECK(ok.tuning.unit_root.lag_rule.kind == LagRule::Kind::Fixed);
    CHECK(ok.tuning.hatemi_j.shifts == ShiftSpec::LevelShifts);
    CHECK(ok.tuning.ardl.criterion == SelectionCriterion::Bic);
}

TEST_CASE("dataset assembly") {
    const auto c = quick_config();
    const auto d = assemble_dataset(snapshot(), c);
    CHECK(d.names() == std::vector<std::string>{"INF", "IMP", "REN", "EXC", "TERM"});
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(d.column("TERM").values[i] == d.column("REN").values[i] * d.column("IMP").values[i]);
    }
    auto missing = c;
    missing.regressors.push_back("GDP");
    CHECK(code_of([&] { (void)assemble_dataset(snapshot(), missing); }) == ErrorCode::ConfigError);
}

TEST_CASE("full run layout and determinism across worker counts") {
    auto c1 = quick_config();
    auto c3 = c1;
    c3.tuning.workers = 3;
    const auto a = run_pipeline(c1, snapshot());
    const auto b = run_pipeline(c3, snapshot());
    REQUIRE(a.failed_stage.empty());
    CHECK(render_markdown(a.tables) == render_markdown(b.tables));
    CHECK(render_cells_csv(a.tables) == render_cells_csv(b.tables));
    CHECK(a.plots_svg == b.plots_svg);
    for (const char* id : {"table1_descriptives", "table2_adf", "table2_za", "table3_ls", "table4_johansen_4var",
                           "table4_johansen_5var", "table5_hatemi_j", "table5_longrun", "table6_ardl",
                           "table6_bounds", "table5_longrun_without_term", "table6_ardl_without_term"}) {
        CHECK_MESSAGE(a.table(id) != nullptr, id);
    }
    CHECK(a.table("table_cv_finite_sample") == nullptr);
    const Table* lr = a.table("table5_longrun");
    REQUIRE(lr != nullptr);
    // report rows follow the configured regressor order
    CHECK(std::vector<std::string>(lr->rows.begin(), lr->rows.begin() + 5) ==
          std::vector<std::string>{"IMP", "REN", "EXC", "TERM", "C"});
    CHECK(a.table("table1_descriptives")->rows == std::vector<std::string>{"INF", "IMP", "REN", "EXC"});
    CHECK(a.plots_svg.size() == a.plots_csv.size());
    CHECK(a.plots_svg.count("cusumsq_dols") == 1);
}

TEST_CASE("failing stage keeps a partial bundle with a marker") {
    std::string csv = "year,INF,IMP,REN,EXC\n";
    for (int y = 2000; y < 2012; ++y) csv += fmt::format("{},{},{},{},{}\n", y, y % 7, y % 5 + 1, y % 3 * 2.5, y % 4);
    const auto raw = load_dataset(csv);
    const auto c = quick_config();
    const auto b = run_pipeline(c, raw);
    CHECK(b.failed_stage == "unit_root");
    CHECK(b.failure_code.has_value());
    CHECK(b.table("table1_descriptives") != nullptr);
    const auto dir = scratch("failed");
    write_bundle(b, c, dir, WriteOptions{});
    CHECK(fs::exists(dir / "FAILED"));
    const auto prov = nlohmann::json::parse(read_file(dir / "provenance.json"));
    CHECK(prov["status"] == "failed");
    CHECK(prov["failed_stage"] == "unit_root");
}

TEST_CASE("bundle files and provenance") {
    const auto c = quick_config();
    const auto b = run_pipeline(c, snapshot(), StageSet::only_describe());
    const auto dir = scratch("bundle");
    WriteOptions o;
    o.config_text = "{}";
    o.data_text = "abc";
    write_bundle(b, c, dir, o);
    CHECK(fs::exists(dir / "tables.md"));
    CHECK(fs::exists(dir / "cells.csv"));
    CHECK(fs::exists(dir / "tables/table1_descriptives.csv"));
    CHECK_FALSE(fs::exists(dir / "FAILED"));
    const auto prov = nlohmann::json::parse(read_file(dir / "provenance.json"));
    CHECK(prov["data_sha256"] == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(prov["seed"] == c.seed);
    CHECK(prov["status"] == "complete");
}

TEST_CASE("output directory lock") {
    const auto dir = scratch("lock");
    {
        OutputLock first(dir);
        CHECK(code_of([&] { OutputLock second(dir); }) == ErrorCode::IoFailure);
    }
    OutputLock again(dir);
    CHECK(fs::exists(dir / ".lock"));
}

TEST_CASE("replication comparison") {
    const std::string cells = "table,row,column,value\nt5,IMP,DOLS,1.5\nt5,REN,DOLS,-2.0\nt5,\"a, b\",X,3\n";
    const std::string exp =
        "table,row,column,kind,expected,tolerance\n"
        "# signs\n"
        "t5,IMP,DOLS,sign,1,\n"
        "t5,REN,DOLS,sign,-1,\n"
        "t5,REN,DOLS,abs,-2.1,0.2\n"
        "t5,\"a, b\",X,rel,2.9,0.05\n";
    const auto all = replicate(parse_cells(cells), parse_expectations(exp));
    CHECK(all.exit_code() == 0);
    CHECK(all.diff().empty());
    CHECK(all.checked == 4);

    const std::string flipped = "table,row,column,value\nt5,IMP,DOLS,1.5\nt5,REN,DOLS,2.0\nt5,\"a, b\",X,3\n";
    const auto bad = replicate(parse_cells(flipped), parse_expectations(exp));
    CHECK(bad.exit_code() == 1);
    CHECK(bad.diff().find("t5 / REN / DOLS") != std::string::npos);
    CHECK(bad.failures.size() == 2);

    const auto missing = replicate(parse_cells("table,row,column,value\n"), parse_expectations(exp));
    CHECK(missing.failures.size() == 4);
    CHECK(missing.failures.front().rfind("MISSING", 0) == 0);

    auto malformed = [](const std::string& s) { return code_of([&] { (void)parse_expectations(s); }); };
    CHECK(malformed("table,row,column,value\n") == ErrorCode::MalformedExpectations);
    CHECK(malformed("table,row,column,kind,expected,tolerance\nt,r,c,fuzzy,1,1\n") == ErrorCode::MalformedExpectations);
    CHECK(malformed("table,row,column,kind,expected,tolerance\nt,r,c,abs,1,\n") == ErrorCode::MalformedExpectations);
    CHECK(malformed("table,row,column,kind,expected,tolerance\nt,r,c,sign,0,\n") == ErrorCode::MalformedExpectations);
    CHECK(malformed("table,row,column,kind,expected,tolerance\nt,r,c\n") == ErrorCode::MalformedExpectations);

    // the shipped file parses
    CHECK(parse_expectations(read_file(kRoot / "data/expectations_snapshot.csv")).size() == 15);
}

TEST_CASE("rendering") {
    SUBCASE("johansen markdown matches the golden file") {
        JohansenResult r;
        r.eigenvalues = Vector(4);
        r.eigenvalues << 0.6123, 0.4, 0.2, 0.05;
        r.trace_stats = {60.5, 30.1, 12.0, 2.5};
        r.maxeig_stats = {30.4, 18.1, 9.5, 2.5};
        r.critical_values_trace = {47.856, 29.797, 15.495, 3.841};
        r.critical_values_maxeig = {27.584, 21.131, 14.265, 3.841};
        r.selected_rank = {1, 2, 2};
        r.lag_order = 2;
        r.effective_T = 41;
        const auto md = render_markdown(johansen_table(r, "j", "Johansen test"));
        CHECK(md == read_file(kRoot / "tests/golden/johansen_table.md"));
    }
    SUBCASE("stability svg has three polylines") {
        StabilityPath p;
        for (std::size_t t = 3; t <= 20; ++t) {
            p.t.push_back(t);
            p.value.push_back(double(t - 2) / 18.0);
            p.lower.push_back(double(t - 2) / 18.0 - 0.3);
            p.upper.push_back(double(t - 2) / 18.0 + 0.3);
        }
        const auto svg = stability_svg(p, "CUSUMSQ");
        std::size_t count = 0;
        for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++count;
        CHECK(count == 3);
        CHECK(svg.rfind("<svg", 0) == 0);
        CHECK(stability_csv(p).rfind("t,value,lower_band,upper_band\n", 0) == 0);
    }
    SUBCASE("csv round trip keeps 12 significant digits") {
        Table t;
        t.id = "x";
        t.row_header = "year";
        t.columns = {"a", "b"};
        t.add_row("2000", {num(0.123456789012345), num(-98765.4321098765)});
        t.add_row("2001", {num(3.14159265358979e-7), num(42.0)});
        const auto d = load_dataset(render_csv(t));
        const double want[2][2] = {{0.123456789012345, -98765.4321098765}, {3.14159265358979e-7, 42.0}};
        for (int r = 0; r < 2; ++r) {
            CHECK(d.column("a").values[std::size_t(r)] == doctest::Approx(want[r][0]).epsilon(1e-11));
            CHECK(d.column("b").values[std::size_t(r)] == doctest::Approx(want[r][1]).epsilon(1e-11));
        }
    }
}

TEST_CASE("world bank client") {
    CHECK(wdi_path(WdiRequest{"FP.CPI.TOTL.ZG", "TUR"}, 2) ==
          "/v2/country/TUR/indicator/FP.CPI.TOTL.ZG?format=json&per_page=1000&date=1980:2022&page=2");
    CHECK(code_of([] { (void)fetch_worldbank(WdiRequest{"", "TUR"}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { (void)fetch_worldbank(WdiRequest{"A B", "TUR"}); }) == ErrorCode::InvalidArgument);

    httplib::Server srv;
    srv.Get(R"(/v2/country/TUR/indicator/IND)", [](const httplib::Request& req, httplib::Response& res) {
        const std::string page = req.get_param_value("page");
        if (page == "1") {
            res.set_content(R"([{"page":1,"pages":2},[{"date":"2001","value":2.5},{"date":"2000","value":null},)"
                            R"({"date":"1999","value":1.25}]])",
                            "application/json");
        } else {
            res.set_content(R"([{"page":2,"pages":2},[{"date":"1998","value":-4}]])", "application/json");
        }
    });
    srv.Get(R"(/v2/country/TUR/indicator/BAD)", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"([{"message":[{"id":"120","value":"Invalid value"}]}])", "application/json");
    });
    srv.Get(R"(/v2/country/TUR/indicator/GONE)",
            [](const httplib::Request&, httplib::Response& res) { res.status = 404; });
    const int port = srv.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread th([&] { srv.listen_after_bind(); });
    srv.wait_until_ready();

    WdiRequest req{"IND", "TUR"};
    req.base_url = fmt::format("http://127.0.0.1:{}", port);
    req.timeout_seconds = 5;
    const auto rows = fetch_worldbank(req);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == YearValue{1998, -4.0});
    CHECK(rows[1] == YearValue{1999, 1.25});
    CHECK(rows[2] == YearValue{2001, 2.5});
    CHECK(year_value_csv(rows) == "year,value\n1998,-4\n1999,1.25\n2001,2.5\n");

    req.indicator = "BAD";
    CHECK(code_of([&] { (void)fetch_worldbank(req); }) == ErrorCode::MalformedPayload);
    req.indicator = "GONE";
    CHECK(code_of([&] { (void)fetch_worldbank(req); }) == ErrorCode::HttpStatus);
    srv.stop();
    th.join();

    // nothing listens on port 1
    WdiRequest off{"IND", "TUR"};
    off.base_url = "http://127.0.0.1:1";
    off.timeout_seconds = 2;
    CHECK(code_of([&] { (void)fetch_worldbank(off); }) == ErrorCode::NetworkUnavailable);
}
