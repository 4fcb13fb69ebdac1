#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "tsecon/pipeline.hpp"

namespace tsecon {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, fmt::format("cannot read {}", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view contents) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, fmt::format("cannot write {}", path.string()));
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::IoFailure, fmt::format("short write to {}", path.string()));
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::IoFailure, "SHA-256 failed");
    }
    std::string out;
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
    return out;
}

OutputLock::OutputLock(const fs::path& dir) : path_(dir / ".lock") {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoFailure, fmt::format("cannot create {}: {}", dir.string(), ec.message()));
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (!f) {
        const int err = errno;
        throw Error(ErrorCode::IoFailure, err == EEXIST
                                              ? fmt::format("{} is locked by another run", dir.string())
                                              : fmt::format("cannot lock {}: {}", dir.string(), std::strerror(err)));
    }
    std::fclose(f);
}

OutputLock::~OutputLock() {
    std::error_code ec;
    fs::remove(path_, ec);
}

namespace {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(now)));
}

std::string provenance_json(const ReportBundle& b, const PipelineConfig& c, const WriteOptions& o) {
    nlohmann::json j;
    j["tool"] = "tsecon";
    j["version"] = kVersion;
    j["generated_at"] = utc_timestamp();
    j["seed"] = c.seed;
    j["config_sha256"] = sha256_hex(o.config_text);
    j["data_sha256"] = sha256_hex(o.data_text);
    j["data_path"] = c.data_path.filename().string();
    j["libraries"] = {
        {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
        {"boost", fmt::format("{}.{}.{}", BOOST_VERSION / 100000, BOOST_VERSION / 100 % 1000, BOOST_VERSION % 100)},
        {"fmt", fmt::format("{}.{}.{}", FMT_VERSION / 10000, FMT_VERSION / 100 % 100, FMT_VERSION % 100)},
    };
    nlohmann::json tables = nlohmann::json::array();
    for (const auto& t : b.tables) tables.push_back(t.id);
    j["tables"] = tables;
    j["status"] = b.failed_stage.empty() ? "complete" : "failed";
    if (!b.failed_stage.empty()) {
        j["failed_stage"] = b.failed_stage;
        j["failure"] = b.failure_message;
    }
    return j.dump(2) + "\n";
}

}  // namespace

void write_bundle(const ReportBundle& b, const PipelineConfig& c, const fs::path& dir, const WriteOptions& o) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoFailure, fmt::format("cannot create {}: {}", dir.string(), ec.message()));
    auto wants = [&](OutputFormat f) { return std::find(o.formats.begin(), o.formats.end(), f) != o.formats.end(); };

    write_file(dir / "cells.csv", render_cells_csv(b.tables));
    if (wants(OutputFormat::Markdown)) write_file(dir / "tables.md", render_markdown(b.tables));
    if (wants(OutputFormat::Csv)) {
        for (const auto& t : b.tables) write_file(dir / "tables" / (t.id + ".csv"), render_csv(t));
    }
    if (wants(OutputFormat::Svg)) {
        for (const auto& [stem, svg] : b.plots_svg) write_file(dir / "plots" / (stem + ".svg"), svg);
        for (const auto& [stem, csv] : b.plots_csv) write_file(dir / "plots" / (stem + ".csv"), csv);
    }
    write_file(dir / "provenance.json", provenance_json(b, c, o));
    if (b.failed_stage.empty()) {
        fs::remove(dir / "FAILED", ec);
    } else {
        write_file(dir / "FAILED", fmt::format("stage {}: {}\n", b.failed_stage, b.failure_message));
    }
}

}  // namespace tsecon
