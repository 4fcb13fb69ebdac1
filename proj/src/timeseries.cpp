#include "tsecon/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace tsecon {

Dataset::Dataset(int start_year, std::vector<TimeSeries> columns) : start_year_(start_year) {
    length_ = columns.empty() ? 0 : columns.front().size();
    for (auto& c : columns) add(std::move(c));
}

std::vector<int> Dataset::years() const {
    std::vector<int> out(length_);
    std::iota(out.begin(), out.end(), start_year_);
    return out;
}

std::vector<std::string> Dataset::names() const {
    std::vector<std::string> out;
    out.reserve(columns_.size());
    for (const auto& c : columns_) out.push_back(c.name);
    return out;
}

bool Dataset::contains(std::string_view name) const {
    return std::any_of(columns_.begin(), columns_.end(),
                       [&](const TimeSeries& c) { return c.name == name; });
}

const TimeSeries& Dataset::column(std::string_view name) const {
    for (const auto& c : columns_) {
        if (c.name == name) return c;
    }
    throw Error(ErrorCode::InvalidArgument, "no column named " + std::string(name));
}

Dataset Dataset::select(const std::vector<std::string>& names) const {
    Dataset out;
    out.start_year_ = start_year_;
    out.length_ = length_;
    for (const auto& n : names) out.add(column(n));
    return out;
}

void Dataset::add(TimeSeries series) {
    if (columns_.empty() && length_ == 0) {
        length_ = series.size();
    }
    if (series.start_year != start_year_ || series.size() != length_) {
        throw Error(ErrorCode::AlignmentMismatch,
                    fmt::format("column {} spans {}..{}, dataset spans {}..{}", series.name,
                                series.start_year, series.end_year(), start_year_,
                                start_year_ + static_cast<int>(length_) - 1));
    }
    if (contains(series.name)) {
        throw Error(ErrorCode::DuplicateColumn, "duplicate column " + series.name);
    }
    for (double v : series.values) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonNumericCell, "non-finite value in " + series.name);
        }
    }
    columns_.push_back(std::move(series));
}

Matrix Dataset::as_matrix() const {
    Matrix m(static_cast<Eigen::Index>(length_), static_cast<Eigen::Index>(columns_.size()));
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        m.col(static_cast<Eigen::Index>(j)) = columns_[j].as_vector();
    }
    return m;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? line.npos
                                                                            : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

double parse_number(std::string_view cell, std::size_t line_no, std::string_view column) {
    double value = 0.0;
    const auto* first = cell.data();
    const auto* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw Error(ErrorCode::NonNumericCell,
                    fmt::format("line {}, column {}: '{}'", line_no, column, cell));
    }
    return value;
}

}  // namespace

Dataset load_dataset(std::string_view csv_text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < csv_text.size()) {
        auto nl = csv_text.find('\n', pos);
        if (nl == std::string_view::npos) nl = csv_text.size();
        auto line = trim(csv_text.substr(pos, nl - pos));
        if (!line.empty()) lines.push_back(line);
        pos = nl + 1;
    }
    if (lines.empty()) throw Error(ErrorCode::EmptyFile, "no header row");
    if (lines.front().substr(0, 3) == "\xEF\xBB\xBF") lines.front().remove_prefix(3);

    const auto header = split_csv_line(lines.front());
    if (header.empty() || header.front() != "year") {
        throw Error(ErrorCode::NonNumericCell, "header must start with 'year'");
    }
    std::set<std::string_view> seen;
    for (std::size_t j = 1; j < header.size(); ++j) {
        if (header[j].empty()) throw Error(ErrorCode::NonNumericCell, "empty column name");
        if (!seen.insert(header[j]).second) {
            throw Error(ErrorCode::DuplicateColumn, "duplicate column " + std::string(header[j]));
        }
    }
    if (lines.size() < 2) throw Error(ErrorCode::EmptyFile, "header without data rows");

    const std::size_t ncols = header.size() - 1;
    std::vector<std::vector<double>> values(ncols);
    int first_year = 0;
    int prev_year = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_csv_line(lines[i]);
        if (cells.size() != header.size()) {
            throw Error(ErrorCode::NonNumericCell,
                        fmt::format("line {} has {} cells, expected {}", i + 1, cells.size(),
                                    header.size()));
        }
        const double y = parse_number(cells[0], i + 1, "year");
        const int year = static_cast<int>(y);
        if (static_cast<double>(year) != y) {
            throw Error(ErrorCode::NonNumericCell, fmt::format("line {}: non-integer year", i + 1));
        }
        if (i == 1) {
            first_year = year;
        } else if (year != prev_year + 1) {
            throw Error(ErrorCode::GapInYears,
                        fmt::format("year {} follows {} on line {}", year, prev_year, i + 1));
        }
        prev_year = year;
        for (std::size_t j = 0; j < ncols; ++j) {
            values[j].push_back(parse_number(cells[j + 1], i + 1, header[j + 1]));
        }
    }

    std::vector<TimeSeries> columns;
    for (std::size_t j = 0; j < ncols; ++j) {
        columns.push_back({std::string(header[j + 1]), first_year, std::move(values[j])});
    }
    Dataset ds(first_year, std::move(columns));
    return ds;
}

Dataset load_dataset_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_dataset(ss.str());
}

std::string to_csv(const Dataset& data, int significant_digits) {
    std::string out = "year";
    for (const auto& c : data.columns()) out += "," + c.name;
    out += "\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        out += std::to_string(data.start_year() + static_cast<int>(i));
        for (const auto& c : data.columns()) {
            out += fmt::format(",{:.{}g}", c.values[i], significant_digits);
        }
        out += "\n";
    }
    return out;
}

TimeSeries transform(const TimeSeries& s, Transform spec) {
    const std::size_t T = s.size();
    TimeSeries out;
    switch (spec.kind) {
        case Transform::Kind::Diff:
            if (T < 2) throw Error(ErrorCode::SeriesTooShort, "diff needs at least 2 observations");
            out.name = "D(" + s.name + ")";
            out.start_year = s.start_year + 1;
            for (std::size_t t = 1; t < T; ++t) out.values.push_back(s.values[t] - s.values[t - 1]);
            break;
        case Transform::Kind::Lag:
        case Transform::Kind::Lead: {
            if (spec.k < 1) throw Error(ErrorCode::InvalidArgument, "lag/lead order must be >= 1");
            if (T <= spec.k) {
                throw Error(ErrorCode::SeriesTooShort,
                            fmt::format("series of length {} cannot be shifted by {}", T, spec.k));
            }
            const bool lag = spec.kind == Transform::Kind::Lag;
            out.name = fmt::format("{}({})({})", lag ? "LAG" : "LEAD", s.name, spec.k);
            // lag: value at year y is x_{y-k}, defined from start+k
            out.start_year = lag ? s.start_year + static_cast<int>(spec.k) : s.start_year;
            if (lag) {
                out.values.assign(s.values.begin(), s.values.end() - static_cast<long>(spec.k));
            } else {
                out.values.assign(s.values.begin() + static_cast<long>(spec.k), s.values.end());
            }
            break;
        }
        case Transform::Kind::Trend:
            if (T < 1) throw Error(ErrorCode::SeriesTooShort, "empty series");
            out.name = "TREND";
            out.start_year = s.start_year;
            for (std::size_t t = 1; t <= T; ++t) out.values.push_back(static_cast<double>(t));
            break;
    }
    return out;
}

std::string_view to_string(BreakModel model) noexcept {
    switch (model) {
        case BreakModel::A: return "A";
        case BreakModel::B: return "B";
        case BreakModel::C: return "C";
    }
    return "?";
}

BreakDummies break_dummies(std::size_t T, std::size_t tb, BreakModel model) {
    if (tb < 1 || tb >= T) {
        throw Error(ErrorCode::BreakOutOfRange,
                    fmt::format("break index {} outside [1, {})", tb, T));
    }
    BreakDummies d;
    d.tb = tb;
    const bool level = model != BreakModel::B;
    const bool slope = model != BreakModel::A;
    if (level) d.du.assign(T, 0.0);
    if (slope) d.dt.assign(T, 0.0);
    for (std::size_t t = tb + 1; t <= T; ++t) {
        if (level) d.du[t - 1] = 1.0;
        if (slope) d.dt[t - 1] = static_cast<double>(t - tb);
    }
    return d;
}

TimeSeries interaction(const TimeSeries& a, const TimeSeries& b) {
    if (a.start_year != b.start_year || a.size() != b.size()) {
        throw Error(ErrorCode::AlignmentMismatch,
                    fmt::format("{} and {} are not aligned", a.name, b.name));
    }
    TimeSeries out{"TERM", a.start_year, {}};
    out.values.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = a.values[i] * b.values[i];
    return out;
}

std::vector<ColumnSummary> describe(const Dataset& data) {
    std::vector<ColumnSummary> out;
    for (const auto& c : data.columns()) {
        ColumnSummary s;
        s.name = c.name;
        s.n = c.size();
        if (s.n == 0) throw Error(ErrorCode::SeriesTooShort, "empty column " + c.name);
        const auto [mn, mx] = std::minmax_element(c.values.begin(), c.values.end());
        s.min = *mn;
        s.max = *mx;
        s.mean = std::accumulate(c.values.begin(), c.values.end(), 0.0) / static_cast<double>(s.n);
        double ss = 0.0;
        for (double v : c.values) ss += (v - s.mean) * (v - s.mean);
        s.sd = s.n > 1 ? std::sqrt(ss / static_cast<double>(s.n - 1)) : 0.0;
        out.push_back(s);
    }
    return out;
}

}  // namespace tsecon
