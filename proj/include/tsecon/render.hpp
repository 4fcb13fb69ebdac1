#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tsecon/cointegration.hpp"
#include "tsecon/diagnostics.hpp"

namespace tsecon {

struct Cell {
    std::string text;
    std::optional<double> value;  // numeric cells also go to cells.csv
};

struct Table {
    std::string id;
    std::string title;
    std::string row_header = "";
    std::vector<std::string> columns;
    std::vector<std::string> rows;
    std::vector<std::vector<Cell>> cells;  // rows x columns
    std::vector<std::string> notes;

    void add_row(std::string label, std::vector<Cell> row);
    [[nodiscard]] const Cell* find(std::string_view row, std::string_view column) const;
};

/// Fixed-precision numeric cell.
[[nodiscard]] Cell num(double v, int decimals = 3, std::string_view suffix = {});
[[nodiscard]] Cell text(std::string s);

/// Significance stars for a left-tail statistic ("***" beats the 1% value).
[[nodiscard]] std::string stars_left(double stat, const std::array<double, 3>& cv);
[[nodiscard]] std::string stars_right(double stat, const std::array<double, 3>& cv);
/// Stars from a two-sided normal t-ratio.
[[nodiscard]] std::string stars_t(double t);

[[nodiscard]] std::string render_markdown(const Table& t);
[[nodiscard]] std::string render_markdown(const std::vector<Table>& tables);
[[nodiscard]] std::string render_csv(const Table& t);
/// Long format: table,row,column,value for every numeric cell.
[[nodiscard]] std::string render_cells_csv(const std::vector<Table>& tables);

/// Trace / max-eigenvalue layout with one row per null hypothesis.
[[nodiscard]] Table johansen_table(const JohansenResult& r, std::string id, std::string title);

/// CSV with columns t,value,lower_band,upper_band.
[[nodiscard]] std::string stability_csv(const StabilityPath& p);
/// Line chart with three polylines: path, lower band, upper band.
[[nodiscard]] std::string stability_svg(const StabilityPath& p, std::string_view title);

}  // namespace tsecon
