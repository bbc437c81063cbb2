#include "wismc/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>

namespace wismc {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's
// days_from_civil).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool parse_int_field(const std::string& s, std::int64_t& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto res = std::from_chars(b, e, out);
    return res.ec == std::errc{} && res.ptr == e;
}

}  // namespace

std::int64_t parse_timestamp(const std::string& raw, int line) {
    const std::string text = trimmed(raw);
    if (text.empty()) throw MalformedRow(line, "empty timestamp");
    std::int64_t epoch;
    if (parse_int_field(text, epoch)) return epoch;

    // ISO-8601: YYYY-MM-DD[T ]HH:MM:SS with optional trailing Z.
    std::string t = text;
    if (!t.empty() && (t.back() == 'Z' || t.back() == 'z')) t.pop_back();
    if (t.size() < 19 || t[4] != '-' || t[7] != '-' || (t[10] != 'T' && t[10] != ' ') ||
        t[13] != ':' || t[16] != ':')
        throw MalformedRow(line, "unparsable timestamp '" + text + "'");
    auto num = [&](std::size_t pos, std::size_t len) -> std::int64_t {
        std::int64_t v = 0;
        for (std::size_t k = pos; k < pos + len; ++k) {
            if (t[k] < '0' || t[k] > '9')
                throw MalformedRow(line, "unparsable timestamp '" + text + "'");
            v = v * 10 + (t[k] - '0');
        }
        return v;
    };
    const std::int64_t year = num(0, 4);
    const std::int64_t month = num(5, 2);
    const std::int64_t day = num(8, 2);
    const std::int64_t hh = num(11, 2);
    const std::int64_t mm = num(14, 2);
    const std::int64_t ss = num(17, 2);
    if (month < 1 || month > 12 || day < 1 || day > 31 || hh > 23 || mm > 59 || ss > 60)
        throw MalformedRow(line, "timestamp field out of range '" + text + "'");
    return days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * 86400 +
           hh * 3600 + mm * 60 + ss;
}

TickSeries parse_ticks(std::istream& source) {
    TickSeries out;
    std::string line;
    int line_no = 0;
    bool has_session = false;
    std::string current_session;

    if (!std::getline(source, line)) throw EmptyInput("tick stream");
    ++line_no;
    auto header = split_csv_line(line);
    for (auto& h : header) h = trimmed(h);
    if (header.size() < 2 || header[0] != "timestamp" || header[1] != "price")
        throw MalformedRow(1, "expected header 'timestamp,price[,session]'");
    if (header.size() == 3 && header[2] == "session")
        has_session = true;
    else if (header.size() > 2)
        throw MalformedRow(1, "unexpected extra header columns");

    while (std::getline(source, line)) {
        ++line_no;
        if (trimmed(line).empty()) continue;
        auto fields = split_csv_line(line);
        const std::size_t expected = has_session ? 3 : 2;
        if (fields.size() != expected)
            throw MalformedRow(line_no, "expected " + std::to_string(expected) + " fields");
        const std::int64_t ts = parse_timestamp(fields[0], line_no);
        const std::string price_text = trimmed(fields[1]);
        double price = 0.0;
        {
            const char* b = price_text.data();
            const char* e = price_text.data() + price_text.size();
            auto res = std::from_chars(b, e, price);
            if (res.ec != std::errc{} || res.ptr != e || !std::isfinite(price))
                throw MalformedRow(line_no, "unparsable price '" + price_text + "'");
        }
        if (price <= 0.0) throw NonPositivePrice(line_no);
        if (!out.times.empty() && ts < out.times.back()) throw NonMonotoneTime(line_no);

        if (has_session) {
            const std::string session = trimmed(fields[2]);
            if (out.times.empty() || session != current_session) {
                out.session_starts.push_back(out.times.size());
                current_session = session;
            }
        } else if (out.times.empty()) {
            out.session_starts.push_back(0);
        }
        out.times.push_back(ts);
        out.prices.push_back(price);
    }
    if (out.times.empty()) throw EmptyInput("tick stream");
    return out;
}

namespace {

PriceGrid resample_range(const TickSeries& ticks, std::size_t begin, std::size_t end,
                         std::int64_t step) {
    PriceGrid grid;
    grid.step = step;
    const std::int64_t first = ticks.times[begin];
    const std::int64_t last = ticks.times[end - 1];
    auto ceil_div = [](std::int64_t a, std::int64_t b) {
        return a >= 0 ? (a + b - 1) / b : -((-a) / b);
    };
    const std::int64_t g0 = ceil_div(first, step) * step;
    const std::int64_t g1 = ceil_div(last, step) * step;
    grid.start = g0;
    std::size_t idx = begin;
    for (std::int64_t g = g0; g <= g1; g += step) {
        while (idx + 1 < end && ticks.times[idx + 1] <= g) ++idx;
        grid.prices.push_back(ticks.prices[idx]);
    }
    return grid;
}

}  // namespace

PriceGrid resample(const TickSeries& ticks, std::int64_t step) {
    if (step < 1) throw DataError("resample step must be >= 1 second");
    if (ticks.size() == 0) throw EmptyInput("tick series");
    return resample_range(ticks, 0, ticks.size(), step);
}

std::vector<PriceGrid> resample_sessions(const TickSeries& ticks, std::int64_t step) {
    if (step < 1) throw DataError("resample step must be >= 1 second");
    if (ticks.size() == 0) throw EmptyInput("tick series");
    std::vector<std::size_t> starts = ticks.session_starts;
    if (starts.empty()) starts.push_back(0);
    std::vector<PriceGrid> grids;
    for (std::size_t k = 0; k < starts.size(); ++k) {
        const std::size_t begin = starts[k];
        const std::size_t end = k + 1 < starts.size() ? starts[k + 1] : ticks.size();
        if (begin >= end) continue;
        grids.push_back(resample_range(ticks, begin, end, step));
    }
    return grids;
}

ReturnSeries compute_returns(const PriceGrid& prices) {
    if (prices.prices.size() < 2) throw EmptyInput("price grid (need at least 2 points)");
    ReturnSeries out;
    out.start_time = prices.start;
    out.step = prices.step;
    out.values.resize(prices.prices.size() - 1);
    for (std::size_t t = 0; t + 1 < prices.prices.size(); ++t) {
        const double s0 = prices.prices[t];
        const double s1 = prices.prices[t + 1];
        if (!(s0 > 0.0)) throw DataError("non-positive price in grid");
        out.values[t] = (s1 - s0) / s0;
    }
    return out;
}

std::vector<double> ingest_returns(const TickSeries& ticks, std::int64_t step) {
    std::vector<double> all;
    for (const PriceGrid& grid : resample_sessions(ticks, step)) {
        if (grid.prices.size() < 2) continue;  // session too short for a return
        ReturnSeries r = compute_returns(grid);
        all.insert(all.end(), r.values.begin(), r.values.end());
    }
    return all;
}

}  // namespace wismc
