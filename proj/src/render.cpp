#include "tsecon/render.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace tsecon {

void Table::add_row(std::string label, std::vector<Cell> row) {
    row.resize(columns.size());
    rows.push_back(std::move(label));
    cells.push_back(std::move(row));
}

const Cell* Table::find(std::string_view row, std::string_view column) const {
    const auto r = std::find(rows.begin(), rows.end(), row);
    const auto c = std::find(columns.begin(), columns.end(), column);
    if (r == rows.end() || c == columns.end()) return nullptr;
    return &cells[static_cast<std::size_t>(r - rows.begin())][static_cast<std::size_t>(c - columns.begin())];
}

Cell num(double v, int decimals, std::string_view suffix) {
    if (!std::isfinite(v)) return {"NA", std::nullopt};
    // avoid printing -0.000
    double shown = v;
    const double unit = std::pow(10.0, -decimals);
    if (std::abs(shown) < 0.5 * unit) shown = 0.0;
    return {fmt::format("{:.{}f}{}", shown, decimals, suffix), v};
}

Cell text(std::string s) { return {std::move(s), std::nullopt}; }

std::string stars_left(double stat, const std::array<double, 3>& cv) {
    if (stat < cv[0]) return "***";
    if (stat < cv[1]) return "**";
    if (stat < cv[2]) return "*";
    return "";
}

std::string stars_right(double stat, const std::array<double, 3>& cv) {
    if (stat > cv[0]) return "***";
    if (stat > cv[1]) return "**";
    if (stat > cv[2]) return "*";
    return "";
}

std::string stars_t(double t) {
    const double a = std::abs(t);
    if (a > 2.5758293035489004) return "***";
    if (a > 1.959963984540054) return "**";
    if (a > 1.6448536269514722) return "*";
    return "";
}

namespace {

std::string escape_md(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

std::string escape_csv(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_number(double v) { return fmt::format("{:.12g}", v); }

}  // namespace

std::string render_markdown(const Table& t) {
    std::string out = fmt::format("## {}\n\n", t.title);
    out += "| " + escape_md(t.row_header) + " |";
    for (const auto& c : t.columns) out += " " + escape_md(c) + " |";
    out += "\n|---|";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += "---|";
    out += "\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out += "| " + escape_md(t.rows[r]) + " |";
        for (const auto& c : t.cells[r]) out += " " + escape_md(c.text) + " |";
        out += "\n";
    }
    if (!t.notes.empty()) {
        out += "\n";
        for (const auto& n : t.notes) out += "- " + n + "\n";
    }
    return out;
}

std::string render_markdown(const std::vector<Table>& tables) {
    std::string out;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (i > 0) out += "\n";
        out += render_markdown(tables[i]);
    }
    return out;
}

std::string render_csv(const Table& t) {
    std::string out = escape_csv(t.row_header.empty() ? "row" : t.row_header);
    for (const auto& c : t.columns) out += "," + escape_csv(c);
    out += "\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out += escape_csv(t.rows[r]);
        for (const auto& c : t.cells[r]) out += "," + escape_csv(c.value ? csv_number(*c.value) : c.text);
        out += "\n";
    }
    return out;
}

std::string render_cells_csv(const std::vector<Table>& tables) {
    std::string out = "table,row,column,value\n";
    for (const auto& t : tables) {
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            for (std::size_t c = 0; c < t.columns.size(); ++c) {
                const Cell& cell = t.cells[r][c];
                if (!cell.value) continue;
                out += fmt::format("{},{},{},{}\n", escape_csv(t.id), escape_csv(t.rows[r]), escape_csv(t.columns[c]),
                                   csv_number(*cell.value));
            }
        }
    }
    return out;
}

Table johansen_table(const JohansenResult& r, std::string id, std::string title) {
    Table t;
    t.id = std::move(id);
    t.title = std::move(title);
    t.row_header = "H0";
    t.columns = {"Eigenvalue", "Trace statistic", "5% critical value", "Max-eigenvalue statistic",
                 "5% critical value (max)"};
    const std::size_t k = r.trace_stats.size();
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t km = k - i;
        std::string ts;
        std::string ms;
        if (km <= 6) {
            std::array<double, 3> tcv{}, mcv{};
            for (auto l : kLevels) {
                tcv[static_cast<std::size_t>(l)] = johansen_trace_critical(km, l);
                mcv[static_cast<std::size_t>(l)] = johansen_maxeig_critical(km, l);
            }
            ts = stars_right(r.trace_stats[i], tcv);
            ms = stars_right(r.maxeig_stats[i], mcv);
        }
        t.add_row(i == 0 ? "r = 0" : fmt::format("r <= {}", i),
                  {num(r.eigenvalues(static_cast<Eigen::Index>(i)), 4), num(r.trace_stats[i], 3, ts),
                   num(r.critical_values_trace[i]), num(r.maxeig_stats[i], 3, ms), num(r.critical_values_maxeig[i])});
    }
    t.notes.push_back(fmt::format("VAR lag order {} in levels, {} effective observations, unrestricted constant.",
                                  r.lag_order, r.effective_T));
    t.notes.push_back(fmt::format("Selected rank (trace) at 1/5/10%: {}/{}/{}.", r.selected_rank[0],
                                  r.selected_rank[1], r.selected_rank[2]));
    t.notes.push_back("***, **, * mark rejection at 1%, 5%, 10%.");
    return t;
}

std::string stability_csv(const StabilityPath& p) {
    std::string out = "t,value,lower_band,upper_band\n";
    for (std::size_t i = 0; i < p.t.size(); ++i) {
        out += fmt::format("{},{},{},{}\n", p.t[i], csv_number(p.value[i]), csv_number(p.lower[i]),
                           csv_number(p.upper[i]));
    }
    return out;
}

std::string stability_svg(const StabilityPath& p, std::string_view title) {
    constexpr double W = 640, H = 360, L = 50, R = 20, Tm = 30, B = 30;
    if (p.t.empty()) throw Error(ErrorCode::InvalidArgument, "empty stability path");
    double lo = p.lower[0], hi = p.upper[0];
    for (std::size_t i = 0; i < p.t.size(); ++i) {
        lo = std::min({lo, p.value[i], p.lower[i]});
        hi = std::max({hi, p.value[i], p.upper[i]});
    }
    if (hi <= lo) hi = lo + 1.0;
    const double t0 = static_cast<double>(p.t.front());
    const double t1 = std::max(static_cast<double>(p.t.back()), t0 + 1.0);
    auto px = [&](std::size_t i) { return L + (static_cast<double>(p.t[i]) - t0) / (t1 - t0) * (W - L - R); };
    auto py = [&](double v) { return Tm + (hi - v) / (hi - lo) * (H - Tm - B); };
    auto line = [&](const std::vector<double>& v, std::string_view stroke, std::string_view dash) {
        std::string pts;
        for (std::size_t i = 0; i < v.size(); ++i) pts += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", px(i), py(v[i]));
        return fmt::format("  <polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{} points=\"{}\"/>\n", stroke,
                           dash.empty() ? "" : fmt::format(" stroke-dasharray=\"{}\"", dash), pts);
    };
    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n", W, H, W, H);
    out += fmt::format("  <rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", W, H);
    out += fmt::format("  <text x=\"{}\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">{} ({})</text>\n", L, title,
                       to_string(p.verdict));
    out += fmt::format("  <line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"#999\"/>\n", L, H - B, W - R, H - B);
    out += fmt::format("  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"#999\"/>\n", L, Tm, L, H - B);
    out += fmt::format("  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n", L, H - 10, p.t.front());
    out += fmt::format("  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n", W - R - 20, H - 10,
                       p.t.back());
    out += line(p.value, "#1f4e9a", "");
    out += line(p.lower, "#c0392b", "4 3");
    out += line(p.upper, "#c0392b", "4 3");
    out += "</svg>\n";
    return out;
}

}  // namespace tsecon
