#pragma once

#include <string>
#include <utility>
#include <vector>

namespace tsecon {

struct WdiRequest {
    std::string indicator;  // e.g. FP.CPI.TOTL.ZG
    std::string country;    // ISO3
    int first_year = 1980;
    int last_year = 2022;
    // Scheme and authority only; tests point this at a local server.
    std::string base_url = "https://api.worldbank.org";
    int timeout_seconds = 20;
};

using YearValue = std::pair<int, double>;

/// Builds the request path (with query) for one page.
[[nodiscard]] std::string wdi_path(const WdiRequest& req, int page);

/// Parses one WDI JSON page. Null values are skipped. Returns the page count
/// reported by the header object through `pages`.
[[nodiscard]] std::vector<YearValue> parse_wdi_page(const std::string& body, int& pages);

/// Fetches every page and returns observations sorted by year ascending.
/// Throws InvalidArgument, NetworkUnavailable, HttpStatus or MalformedPayload.
[[nodiscard]] std::vector<YearValue> fetch_worldbank(const WdiRequest& req);

[[nodiscard]] std::string year_value_csv(const std::vector<YearValue>& rows);

}  // namespace tsecon
