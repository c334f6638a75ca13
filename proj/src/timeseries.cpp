#include "volcast/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string_view>

#include "volcast/error.hpp"

namespace volcast {

namespace {

constexpr std::string_view kHeader = "date,open,high,low,close,adj_close,volume";

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

double parse_number(std::string_view field, std::size_t line, const char* name) {
    if (field.empty()) {
        throw ParseError(line, std::string("empty ") + name + " field");
    }
    if (field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
        throw ParseError(line, std::string("invalid ") + name + " '" + std::string(field) + "'");
    }
    return value;
}

struct Row {
    Date date;
    double open, high, low, close, adj_close, volume;
    std::size_t line;
};

const std::vector<double>& price_column(const PriceSeries& prices, PriceField field) {
    return field == PriceField::Close ? prices.close : prices.adj_close;
}

ReturnSeries returns_skeleton(const PriceSeries& prices, ReturnKind kind) {
    if (prices.size() < 2) {
        throw InsufficientDataError("return series needs at least 2 prices, got " +
                                    std::to_string(prices.size()));
    }
    ReturnSeries out;
    out.kind = kind;
    out.source_symbol = prices.symbol;
    out.dates.assign(prices.dates.begin() + 1, prices.dates.end());
    out.values.reserve(prices.size() - 1);
    return out;
}

}  // namespace

void PriceSeries::validate() const {
    const std::size_t n = dates.size();
    if (open.size() != n || high.size() != n || low.size() != n || close.size() != n ||
        adj_close.size() != n || volume.size() != n) {
        throw ValidationError("price columns have unequal lengths");
    }
    if (n < 2) {
        throw ValidationError("price series needs at least 2 rows, got " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && !(dates[i - 1] < dates[i])) {
            throw ValidationError("dates not strictly increasing at " + dates[i].to_string());
        }
        for (double p : {open[i], high[i], low[i], close[i], adj_close[i]}) {
            if (!(p > 0.0)) {
                throw ValidationError("non-positive price on " + dates[i].to_string());
            }
        }
        if (!(volume[i] >= 0.0)) {
            throw ValidationError("negative volume on " + dates[i].to_string());
        }
    }
}

PriceSeries parse_ohlcv_csv(std::istream& in, const std::string& symbol) {
    std::string raw;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<Row> rows;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (line_no == 1 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
        line = trim(line);
        if (line.empty()) continue;

        if (!have_header) {
            if (line != kHeader) {
                throw ParseError(line_no, "expected header '" + std::string(kHeader) + "'");
            }
            have_header = true;
            continue;
        }

        const auto fields = split_fields(line);
        if (fields.size() != 7) {
            throw ParseError(line_no, "expected 7 fields, got " + std::to_string(fields.size()));
        }
        Row row{};
        row.line = line_no;
        try {
            row.date = Date::parse(fields[0]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
        row.open = parse_number(fields[1], line_no, "open");
        row.high = parse_number(fields[2], line_no, "high");
        row.low = parse_number(fields[3], line_no, "low");
        row.close = parse_number(fields[4], line_no, "close");
        row.adj_close = parse_number(fields[5], line_no, "adj_close");
        row.volume = parse_number(fields[6], line_no, "volume");

        for (double p : {row.open, row.high, row.low, row.close, row.adj_close}) {
            if (!(p > 0.0)) {
                throw ValidationError("line " + std::to_string(line_no) + ": non-positive price");
            }
        }
        if (row.volume < 0.0) {
            throw ValidationError("line " + std::to_string(line_no) + ": negative volume");
        }
        rows.push_back(row);
    }
    if (!have_header) {
        throw ParseError(line_no, "missing header");
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].date == rows[i - 1].date) {
            throw ValidationError("line " + std::to_string(rows[i].line) + ": duplicate date " +
                                  rows[i].date.to_string());
        }
    }

    PriceSeries out;
    out.symbol = symbol;
    for (const auto& r : rows) {
        out.dates.push_back(r.date);
        out.open.push_back(r.open);
        out.high.push_back(r.high);
        out.low.push_back(r.low);
        out.close.push_back(r.close);
        out.adj_close.push_back(r.adj_close);
        out.volume.push_back(r.volume);
    }
    out.validate();
    return out;
}

PriceSeries read_ohlcv_csv(const std::filesystem::path& path, const std::string& symbol) {
    std::ifstream in(path);
    if (!in) {
        throw std::filesystem::filesystem_error("cannot open input", path,
                                                std::make_error_code(std::errc::no_such_file_or_directory));
    }
    return parse_ohlcv_csv(in, symbol);
}

void write_ohlcv_csv(std::ostream& out, const PriceSeries& prices) {
    out << kHeader << '\n';
    char buf[256];
    for (std::size_t i = 0; i < prices.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      prices.dates[i].to_string().c_str(), prices.open[i], prices.high[i],
                      prices.low[i], prices.close[i], prices.adj_close[i], prices.volume[i]);
        out << buf;
    }
}

ReturnSeries simple_returns(const PriceSeries& prices, PriceField field) {
    auto out = returns_skeleton(prices, ReturnKind::Simple);
    const auto& p = price_column(prices, field);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        out.values.push_back(100.0 * (p[i + 1] - p[i]) / p[i]);
    }
    return out;
}

ReturnSeries log_returns(const PriceSeries& prices, PriceField field) {
    auto out = returns_skeleton(prices, ReturnKind::Log);
    const auto& p = price_column(prices, field);
    for (double v : p) {
        if (!(v > 0.0)) throw DomainError("log return of a non-positive price");
    }
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        out.values.push_back(100.0 * (std::log(p[i + 1]) - std::log(p[i])));
    }
    return out;
}

std::size_t lower_bound_index(const std::vector<Date>& dates, Date date) {
    return static_cast<std::size_t>(std::lower_bound(dates.begin(), dates.end(), date) - dates.begin());
}

std::pair<ReturnSeries, ReturnSeries> split_at(const ReturnSeries& series, Date split_date) {
    if (series.empty() || split_date < series.dates.front() || series.dates.back() < split_date) {
        throw RangeError("split date " + split_date.to_string() + " outside series range");
    }
    const std::size_t cut = lower_bound_index(series.dates, split_date);
    ReturnSeries head{{series.dates.begin(), series.dates.begin() + cut},
                      {series.values.begin(), series.values.begin() + cut},
                      series.kind,
                      series.source_symbol};
    ReturnSeries tail{{series.dates.begin() + cut, series.dates.end()},
                      {series.values.begin() + cut, series.values.end()},
                      series.kind,
                      series.source_symbol};
    return {std::move(head), std::move(tail)};
}

void write_returns_csv(std::ostream& out, const ReturnSeries& series) {
    out << "date,value\n";
    char buf[64];
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.10g", series.values[i]);
        out << series.dates[i].to_string() << ',' << buf << '\n';
    }
}

}  // namespace volcast
