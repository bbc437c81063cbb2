#pragma once

#include <stdexcept>
#include <string>

namespace wismc {

/// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad or insufficient input data. The CLI maps this to exit code 2.
struct DataError : Error {
    using Error::Error;
};

/// Inconsistent model state or an invalid numeric operation. Exit code 3.
struct ModelError : Error {
    using Error::Error;
};

// ---- data errors ----------------------------------------------------------

struct MalformedRow : DataError {
    int line;
    MalformedRow(int line_no, const std::string& detail)
        : DataError("malformed row at line " + std::to_string(line_no) + ": " + detail),
          line(line_no) {}
};

struct NonMonotoneTime : DataError {
    int line;
    explicit NonMonotoneTime(int line_no)
        : DataError("timestamp decreases at line " + std::to_string(line_no)), line(line_no) {}
};

struct NonPositivePrice : DataError {
    int line;
    explicit NonPositivePrice(int line_no)
        : DataError("non-positive price at line " + std::to_string(line_no)), line(line_no) {}
};

struct EmptyInput : DataError {
    explicit EmptyInput(const std::string& what_input) : DataError("empty input: " + what_input) {}
};

struct TooFewSamples : DataError {
    TooFewSamples(std::size_t got, std::size_t need)
        : DataError("too few samples: got " + std::to_string(got) + ", need at least " +
                    std::to_string(need)) {}
};

struct EvenStateCount : DataError {
    explicit EvenStateCount(int s)
        : DataError("state count must be odd and >= 3, got " + std::to_string(s)) {}
};

struct DegenerateDistribution : DataError {
    explicit DegenerateDistribution(const std::string& detail)
        : DataError("degenerate distribution: " + detail) {}
};

struct SeriesTooShort : DataError {
    SeriesTooShort(std::size_t length, std::size_t need)
        : DataError("series of length " + std::to_string(length) + " too short, need > " +
                    std::to_string(need)) {}
};

struct EmptyTrajectory : DataError {
    EmptyTrajectory() : DataError("empty trajectory") {}
};

// ---- model / numeric errors ------------------------------------------------

struct UnknownState : ModelError {
    explicit UnknownState(int state)
        : ModelError("unknown state " + std::to_string(state)) {}
};

struct UnknownLevel : ModelError {
    explicit UnknownLevel(int level)
        : ModelError("unknown index level " + std::to_string(level)) {}
};

struct TimeBeforeOrigin : ModelError {
    explicit TimeBeforeOrigin(long long t)
        : ModelError("time " + std::to_string(t) + " precedes the trajectory origin") {}
};

struct HorizonBeforeOrigin : ModelError {
    explicit HorizonBeforeOrigin(long long t)
        : ModelError("horizon " + std::to_string(t) + " precedes the trajectory origin") {}
};

struct MissingCell : ModelError {
    MissingCell(int state, int level)
        : ModelError("no fitted kernel cell for state " + std::to_string(state) + " at level " +
                     std::to_string(level) + " and fallback is unavailable") {}
};

struct InvalidInitialState : ModelError {
    explicit InvalidInitialState(int state)
        : ModelError("invalid initial state " + std::to_string(state)) {}
};

struct DegenerateVariance : ModelError {
    DegenerateVariance() : ModelError("series has zero variance") {}
};

struct LagGridMismatch : ModelError {
    LagGridMismatch() : ModelError("autocorrelation curves have different lag grids") {}
};

struct InvalidThreshold : ModelError {
    explicit InvalidThreshold(double rho)
        : ModelError("first-passage threshold must exceed 1, got " + std::to_string(rho)) {}
};

}  // namespace wismc
