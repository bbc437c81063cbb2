#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wismc/model.hpp"
#include "wismc/simulate.hpp"
#include "wismc/stats.hpp"

namespace wismc {

/// Ground-truth generator spec for recovery studies. The generated model is
/// a valid kernel with symmetric representative returns, sign-balanced rows
/// (expected next return is zero from every cell) and geometric-mixture
/// sojourn distributions whose hazard rises with the volatility level.
/// dependence = 0 makes all levels identical, degenerating the kernel into
/// an ordinary semi-Markov chain.
struct SynthSpec {
    int states = 5;
    int levels = 5;
    double lambda = 0.97;
    std::optional<std::int64_t> memory;
    double dependence = 1.0;      // in [0, 1]
    std::uint64_t kernel_seed = 0;

    // Shape knobs. Defaults give per-minute returns at realistic scale with
    // pronounced volatility clustering at full dependence. The quiet/busy
    // hazard gap is kept moderate so the index keeps diffusing across level
    // boundaries instead of locking into one regime.
    double base_return = 5e-4;    // representative magnitude of the first ring
    double magnitude_ratio = 3.0; // ratio between successive magnitude rings
    double quiet_hazard = 0.14;   // middle-state exit rate at the lowest level
    double busy_hazard = 0.40;    // middle-state exit rate at the highest level
};

WismcModel make_synthetic_truth(const SynthSpec& spec);

struct SweepOptions {
    std::vector<double> lambdas;                      // default 0.90..1.00 step 0.02
    std::vector<std::optional<std::int64_t>> memories; // default {10,50,100,500,unbounded}
    int states = 5;
    int levels = 5;
    int tau_max = 100;
    std::uint64_t seed = 0;
    int replicates = 1;           // simulations averaged per cell
    int threads = 1;
    std::int64_t min_transitions = 1000;
    std::optional<Minute> sim_length;  // default: same length as the data
};

struct SweepCell {
    double lambda = 0.0;
    std::optional<std::int64_t> memory;
    double mse = 0.0;
    double mse_stddev = 0.0;  // across replicates; 0 for a single replicate
    bool ok = false;
    std::string error;        // set when the cell failed
};

struct SweepResult {
    std::vector<SweepCell> cells;          // grid order: lambdas outer, memories inner
    std::optional<std::size_t> best;       // argmin mse over ok cells
};

/// For each (lambda, m) grid cell: fit on the data, simulate a series of the
/// same length, and score the mean square error between the squared-return
/// autocorrelation curves. Each cell's simulation seed derives from
/// (master seed, lambda, m), so the table is reproducible for any thread
/// count. Failed cells are recorded, not fatal.
SweepResult sweep(const std::vector<double>& returns, const SweepOptions& opt);

std::string sweep_csv(const SweepResult& result);
std::string sweep_summary_json(const SweepResult& result);

struct ReportOptions {
    int tau_max = 100;
    double rho = 1.005;
    Minute max_wait = 1000;
    std::uint64_t seed = 0;
    std::optional<Minute> sim_length;  // default: same length as the data
    int threads = 1;
};

/// Side-by-side stylized-fact comparison of a data series and a fitted model.
struct ComparisonReport {
    AcfCurve data_acf_raw, data_acf_sq;
    AcfCurve sim_acf_raw, sim_acf_sq;
    double mse_sq = 0.0;
    FptSample data_fpt, sim_fpt;
    SimStats sim_stats;
    Minute sim_length = 0;
};

ComparisonReport compare_report(const std::vector<double>& returns, const WismcModel& model,
                                const ReportOptions& opt);

/// Writes the report bundle (JSON summary plus plot-ready CSVs) into `dir`.
void write_report(const ComparisonReport& report, const std::string& dir);

std::string acf_csv(const AcfCurve& curve);
std::string fpt_csv(const FptSample& fpt);

}  // namespace wismc
