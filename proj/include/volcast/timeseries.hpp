#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "volcast/date.hpp"

namespace volcast {

/// Daily OHLCV observations for one instrument.
///
/// Invariants (checked by `validate`): dates strictly increasing, every price
/// strictly positive, volume non-negative, all columns of equal length >= 2.
struct PriceSeries {
    std::string symbol;
    std::vector<Date> dates;
    std::vector<double> open;
    std::vector<double> high;
    std::vector<double> low;
    std::vector<double> close;
    std::vector<double> adj_close;
    std::vector<double> volume;

    std::size_t size() const { return dates.size(); }
    void validate() const;
};

enum class ReturnKind { Simple, Log };

/// Percent returns (x100). `dates[i]` is the later of the two prices the value spans.
struct ReturnSeries {
    std::vector<Date> dates;
    std::vector<double> values;
    ReturnKind kind = ReturnKind::Log;
    std::string source_symbol;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
};

enum class PriceField { Close, AdjClose };

/// Parses `date,open,high,low,close,adj_close,volume` CSV. Rows may arrive in any
/// order; the result is sorted by date.
PriceSeries parse_ohlcv_csv(std::istream& in, const std::string& symbol);
PriceSeries read_ohlcv_csv(const std::filesystem::path& path, const std::string& symbol);

/// Writes the same schema `parse_ohlcv_csv` reads, at full double precision.
void write_ohlcv_csv(std::ostream& out, const PriceSeries& prices);

ReturnSeries simple_returns(const PriceSeries& prices, PriceField field = PriceField::Close);
ReturnSeries log_returns(const PriceSeries& prices, PriceField field = PriceField::Close);

/// Splits into (strictly before `split_date`, on or after `split_date`).
/// `split_date` must lie within [first date, last date].
std::pair<ReturnSeries, ReturnSeries> split_at(const ReturnSeries& series, Date split_date);

/// `date,value` with 10 significant digits.
void write_returns_csv(std::ostream& out, const ReturnSeries& series);

/// Index of the first element dated on or after `date`; `dates.size()` if none.
std::size_t lower_bound_index(const std::vector<Date>& dates, Date date);

}  // namespace volcast
