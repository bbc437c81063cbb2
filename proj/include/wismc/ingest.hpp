#pragma once

#include <iosfwd>
#include <vector>

#include "wismc/model.hpp"

namespace wismc {

/// Tick-level prices. session_starts partitions the records into trading
/// sessions (indices of the first record of each session; always begins
/// with 0 when non-empty). No return is ever computed across a session
/// boundary.
struct TickSeries {
    std::vector<std::int64_t> times;   // seconds since epoch, non-decreasing
    std::vector<double> prices;        // strictly positive
    std::vector<std::size_t> session_starts;

    std::size_t size() const { return times.size(); }
};

/// Prices resampled onto a regular grid: one price per grid point.
struct PriceGrid {
    std::int64_t start = 0;  // seconds since epoch of the first grid point
    std::int64_t step = 60;  // seconds
    std::vector<double> prices;
};

/// Returns at a fixed frequency.
struct ReturnSeries {
    std::int64_t start_time = 0;  // seconds since epoch
    std::int64_t step = 60;       // seconds
    std::vector<double> values;
};

/// Parses CSV with header `timestamp,price[,session]`. Timestamps are
/// epoch seconds or ISO-8601 (YYYY-MM-DD[T ]HH:MM:SS, optional trailing Z).
/// A change in the session column starts a new session.
TickSeries parse_ticks(std::istream& source);

/// Epoch seconds from an ISO-8601 timestamp or a plain integer.
/// `line` is used for error reporting only.
std::int64_t parse_timestamp(const std::string& text, int line);

/// Previous-tick resampling of one session onto the absolute grid of
/// multiples of `step`, from the first grid point at or after the first
/// tick to the first grid point at or after the last tick.
PriceGrid resample(const TickSeries& ticks, std::int64_t step);

/// Per-session resampling honoring ticks.session_starts. Sessions that
/// produce fewer than one grid point are dropped.
std::vector<PriceGrid> resample_sessions(const TickSeries& ticks, std::int64_t step);

/// One-step relative returns (S(t+1) - S(t)) / S(t); length is input - 1.
ReturnSeries compute_returns(const PriceGrid& prices);

/// Full pipeline: resample every session and concatenate the per-session
/// return values. Sessions too short to yield a return are skipped.
std::vector<double> ingest_returns(const TickSeries& ticks, std::int64_t step);

}  // namespace wismc
