#include "tsecon/worldbank.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "tsecon/error.hpp"

namespace tsecon {

namespace {

bool valid_code(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '.' || c == '_';
    });
}

}  // namespace

std::string wdi_path(const WdiRequest& req, int page) {
    return fmt::format("/v2/country/{}/indicator/{}?format=json&per_page=1000&date={}:{}&page={}", req.country,
                       req.indicator, req.first_year, req.last_year, page);
}

std::vector<YearValue> parse_wdi_page(const std::string& body, int& pages) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::MalformedPayload, fmt::format("not JSON: {}", e.what()));
    }
    if (!doc.is_array() || doc.empty() || !doc[0].is_object()) {
        throw Error(ErrorCode::MalformedPayload, "expected [header, rows] array");
    }
    const auto& head = doc[0];
    if (head.contains("message")) {
        throw Error(ErrorCode::MalformedPayload, fmt::format("API message: {}", head["message"].dump()));
    }
    if (!head.contains("pages") || !head["pages"].is_number_integer()) {
        throw Error(ErrorCode::MalformedPayload, "header lacks integer 'pages'");
    }
    pages = head["pages"].get<int>();
    std::vector<YearValue> out;
    if (doc.size() < 2 || doc[1].is_null()) return out;
    if (!doc[1].is_array()) throw Error(ErrorCode::MalformedPayload, "rows are not an array");
    for (const auto& row : doc[1]) {
        if (!row.is_object() || !row.contains("date") || !row["date"].is_string() || !row.contains("value")) {
            throw Error(ErrorCode::MalformedPayload, "row lacks date/value");
        }
        if (row["value"].is_null()) continue;
        if (!row["value"].is_number()) throw Error(ErrorCode::MalformedPayload, "non-numeric value");
        int year = 0;
        try {
            std::size_t used = 0;
            const auto& d = row["date"].get_ref<const std::string&>();
            year = std::stoi(d, &used);
            if (used != d.size()) throw std::invalid_argument(d);
        } catch (const std::exception&) {
            throw Error(ErrorCode::MalformedPayload, fmt::format("bad date {}", row["date"].dump()));
        }
        out.emplace_back(year, row["value"].get<double>());
    }
    return out;
}

std::vector<YearValue> fetch_worldbank(const WdiRequest& req) {
    if (!valid_code(req.indicator)) throw Error(ErrorCode::InvalidArgument, "indicator code must be nonempty");
    if (!valid_code(req.country)) throw Error(ErrorCode::InvalidArgument, "country code must be nonempty");
    if (req.first_year > req.last_year) throw Error(ErrorCode::InvalidArgument, "first year after last year");

    httplib::Client client(req.base_url);
    client.set_connection_timeout(req.timeout_seconds, 0);
    client.set_read_timeout(req.timeout_seconds, 0);
    client.set_follow_location(true);

    std::vector<YearValue> all;
    int pages = 1;
    for (int page = 1; page <= pages; ++page) {
        auto res = client.Get(wdi_path(req, page));
        if (!res) {
            throw Error(ErrorCode::NetworkUnavailable,
                        fmt::format("{}: {}", req.base_url, httplib::to_string(res.error())));
        }
        if (res->status != 200) throw Error(ErrorCode::HttpStatus, fmt::format("HTTP {}", res->status));
        auto rows = parse_wdi_page(res->body, pages);
        all.insert(all.end(), rows.begin(), rows.end());
    }
    std::sort(all.begin(), all.end());
    std::set<int> seen;
    for (const auto& [y, v] : all) {
        if (!seen.insert(y).second) throw Error(ErrorCode::MalformedPayload, fmt::format("duplicate year {}", y));
    }
    return all;
}

std::string year_value_csv(const std::vector<YearValue>& rows) {
    std::string out = "year,value\n";
    for (const auto& [y, v] : rows) out += fmt::format("{},{:.12g}\n", y, v);
    return out;
}

}  // namespace tsecon
