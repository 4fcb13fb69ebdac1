#include "tsecon/replicate.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "tsecon/error.hpp"

namespace tsecon {

std::vector<std::string> split_csv_record(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

namespace {

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) out.push_back(line);
        pos = nl + 1;
    }
    return out;
}

bool parse_double(const std::string& s, double& v) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    return !s.empty() && ec == std::errc() && ptr == last && std::isfinite(v);
}

}  // namespace

std::vector<Expectation> parse_expectations(std::string_view csv_text) {
    const auto lines = lines_of(csv_text);
    if (lines.empty()) throw Error(ErrorCode::MalformedExpectations, "empty expectations file");
    const auto header = split_csv_record(lines.front());
    const std::vector<std::string> want{"table", "row", "column", "kind", "expected", "tolerance"};
    if (header != want) {
        throw Error(ErrorCode::MalformedExpectations, "header must be table,row,column,kind,expected,tolerance");
    }
    std::vector<Expectation> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].front() == '#') continue;
        const auto f = split_csv_record(lines[i]);
        if (f.size() != 6) {
            throw Error(ErrorCode::MalformedExpectations, fmt::format("line {}: expected 6 fields, got {}", i + 1, f.size()));
        }
        Expectation e{f[0], f[1], f[2]};
        if (f[3] == "sign") {
            e.kind = ToleranceKind::Sign;
        } else if (f[3] == "abs") {
            e.kind = ToleranceKind::Abs;
        } else if (f[3] == "rel") {
            e.kind = ToleranceKind::Rel;
        } else {
            throw Error(ErrorCode::MalformedExpectations, fmt::format("line {}: unknown kind '{}'", i + 1, f[3]));
        }
        if (!parse_double(f[4], e.expected)) {
            throw Error(ErrorCode::MalformedExpectations, fmt::format("line {}: bad expected value '{}'", i + 1, f[4]));
        }
        if (f[5].empty() && e.kind == ToleranceKind::Sign) {
            e.tolerance = 0.0;
        } else if (!parse_double(f[5], e.tolerance) || e.tolerance < 0.0) {
            throw Error(ErrorCode::MalformedExpectations, fmt::format("line {}: bad tolerance '{}'", i + 1, f[5]));
        }
        if (e.kind == ToleranceKind::Sign && e.expected == 0.0) {
            throw Error(ErrorCode::MalformedExpectations, fmt::format("line {}: sign expectation of 0", i + 1));
        }
        out.push_back(std::move(e));
    }
    return out;
}

CellMap parse_cells(std::string_view csv_text) {
    const auto lines = lines_of(csv_text);
    if (lines.empty() || split_csv_record(lines.front()) != std::vector<std::string>{"table", "row", "column", "value"}) {
        throw Error(ErrorCode::MalformedExpectations, "cells file must start with table,row,column,value");
    }
    CellMap out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split_csv_record(lines[i]);
        double v = 0.0;
        if (f.size() != 4 || !parse_double(f[3], v)) {
            throw Error(ErrorCode::MalformedExpectations, fmt::format("cells line {} is malformed", i + 1));
        }
        out[{f[0], f[1], f[2]}] = v;
    }
    return out;
}

std::string ReplicationReport::diff() const {
    std::string out;
    for (const auto& f : failures) out += f + "\n";
    return out;
}

ReplicationReport replicate(const CellMap& cells, const std::vector<Expectation>& expectations) {
    ReplicationReport rep;
    for (const auto& e : expectations) {
        ++rep.checked;
        const auto it = cells.find({e.table, e.row, e.column});
        const std::string where = fmt::format("{} / {} / {}", e.table, e.row, e.column);
        if (it == cells.end()) {
            rep.failures.push_back(fmt::format("MISSING {}", where));
            continue;
        }
        const double a = it->second;
        switch (e.kind) {
            case ToleranceKind::Sign:
                if (!((a > 0.0 && e.expected > 0.0) || (a < 0.0 && e.expected < 0.0))) {
                    rep.failures.push_back(fmt::format("SIGN {}: expected {}, got {:.6g}", where,
                                                       e.expected > 0 ? "+" : "-", a));
                }
                break;
            case ToleranceKind::Abs:
                if (!(std::abs(a - e.expected) <= e.tolerance)) {
                    rep.failures.push_back(
                        fmt::format("ABS {}: expected {:.6g} +- {:.6g}, got {:.6g}", where, e.expected, e.tolerance, a));
                }
                break;
            case ToleranceKind::Rel:
                if (!(std::abs(a - e.expected) <= e.tolerance * std::abs(e.expected))) {
                    rep.failures.push_back(fmt::format("REL {}: expected {:.6g} within {:.1f}%, got {:.6g}", where,
                                                       e.expected, 100.0 * e.tolerance, a));
                }
                break;
        }
    }
    return rep;
}

}  // namespace tsecon
