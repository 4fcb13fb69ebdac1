#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsecon/linalg.hpp"

namespace tsecon {

/// Annual series; values[i] is the observation for start_year + i.
struct TimeSeries {
    std::string name;
    int start_year = 0;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] int end_year() const noexcept {
        return start_year + static_cast<int>(values.size()) - 1;
    }
    [[nodiscard]] Vector as_vector() const { return to_vector(values); }
};

/// Columns sharing one contiguous year range. Column order is preserved.
class Dataset {
public:
    Dataset() = default;
    Dataset(int start_year, std::vector<TimeSeries> columns);

    [[nodiscard]] int start_year() const noexcept { return start_year_; }
    [[nodiscard]] std::size_t size() const noexcept { return length_; }
    [[nodiscard]] std::vector<int> years() const;
    [[nodiscard]] const std::vector<TimeSeries>& columns() const noexcept { return columns_; }
    [[nodiscard]] std::vector<std::string> names() const;
    [[nodiscard]] bool contains(std::string_view name) const;
    [[nodiscard]] const TimeSeries& column(std::string_view name) const;

    /// Sub-dataset with the named columns, in the given order.
    [[nodiscard]] Dataset select(const std::vector<std::string>& names) const;
    /// Appends a column aligned with the existing range.
    void add(TimeSeries series);
    /// T x k matrix of all columns.
    [[nodiscard]] Matrix as_matrix() const;

private:
    int start_year_ = 0;
    std::size_t length_ = 0;
    std::vector<TimeSeries> columns_;
};

/// Parses `year,<name>...` CSV text (LF or CRLF).
/// Errors: EmptyFile, DuplicateColumn, NonNumericCell, GapInYears.
[[nodiscard]] Dataset load_dataset(std::string_view csv_text);
[[nodiscard]] Dataset load_dataset_file(const std::string& path);

/// Writes a dataset back to CSV with the given number of significant digits.
[[nodiscard]] std::string to_csv(const Dataset& data, int significant_digits = 12);

struct Transform {
    enum class Kind { Diff, Lag, Lead, Trend };
    Kind kind = Kind::Diff;
    std::size_t k = 1;

    static Transform diff() { return {Kind::Diff, 1}; }
    static Transform lag(std::size_t k) { return {Kind::Lag, k}; }
    static Transform lead(std::size_t k) { return {Kind::Lead, k}; }
    static Transform trend() { return {Kind::Trend, 0}; }
};

/// diff drops the first observation; lag(k)/lead(k) keep the k-shortened
/// usable range aligned to calendar years; trend emits 1..T.
[[nodiscard]] TimeSeries transform(const TimeSeries& s, Transform spec);

enum class BreakModel { A, B, C };

[[nodiscard]] std::string_view to_string(BreakModel model) noexcept;

/// du_t = 1{t > tb}, dt_t = (t - tb) 1{t > tb} for t = 1..T.
/// Model A fills du only, Model B dt only, Model C both.
struct BreakDummies {
    std::vector<double> du;
    std::vector<double> dt;
    std::size_t tb = 0;
};

[[nodiscard]] BreakDummies break_dummies(std::size_t T, std::size_t tb, BreakModel model);

/// Elementwise product named TERM.
[[nodiscard]] TimeSeries interaction(const TimeSeries& a, const TimeSeries& b);

struct ColumnSummary {
    std::string name;
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;  // T-1 divisor
    double min = 0.0;
    double max = 0.0;
};

[[nodiscard]] std::vector<ColumnSummary> describe(const Dataset& data);

}  // namespace tsecon
