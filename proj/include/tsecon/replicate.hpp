#pragma once

#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace tsecon {

enum class ToleranceKind { Sign, Abs, Rel };

struct Expectation {
    std::string table;
    std::string row;
    std::string column;
    ToleranceKind kind = ToleranceKind::Sign;
    double expected = 0.0;
    double tolerance = 0.0;
};

/// CSV with header table,row,column,kind,expected,tolerance.
/// Throws MalformedExpectations on any structural problem.
[[nodiscard]] std::vector<Expectation> parse_expectations(std::string_view csv_text);

using CellMap = std::map<std::tuple<std::string, std::string, std::string>, double>;

/// Reads the long table,row,column,value format written by the pipeline.
[[nodiscard]] CellMap parse_cells(std::string_view csv_text);

struct ReplicationReport {
    std::size_t checked = 0;
    std::vector<std::string> failures;  // one human-readable line per failed cell
    [[nodiscard]] bool ok() const { return failures.empty(); }
    [[nodiscard]] int exit_code() const { return ok() ? 0 : 1; }
    [[nodiscard]] std::string diff() const;
};

/// sign: sign(actual) == sign(expected); abs: |a - e| <= tol; rel: |a - e| <= tol |e|.
/// A missing cell is a failure.
[[nodiscard]] ReplicationReport replicate(const CellMap& cells, const std::vector<Expectation>& expectations);

/// Splits one CSV record honoring double quotes.
[[nodiscard]] std::vector<std::string> split_csv_record(std::string_view line);

}  // namespace tsecon
