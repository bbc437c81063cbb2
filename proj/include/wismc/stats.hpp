#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "wismc/model.hpp"

namespace wismc {

struct AcfCurve {
    std::vector<int> lags;      // ascending
    std::vector<double> values; // one autocorrelation per lag
};

/// Autocorrelation of the raw series for lags 1..tau_max (0..tau_max with
/// include_lag0), using the biased divide-by-n covariance estimator with the
/// full-sample mean. Throws SeriesTooShort / DegenerateVariance.
AcfCurve acf_raw(const std::vector<double>& series, int tau_max, bool include_lag0 = false);

/// Same estimator applied to the squared series.
AcfCurve acf_squared(const std::vector<double>& series, int tau_max, bool include_lag0 = false);

/// Mean over lags of the squared difference between two curves on an
/// identical lag grid.
double mse_acf(const AcfCurve& a, const AcfCurve& b);

/// Empirical first-passage-time distribution for threshold rho.
struct FptSample {
    double rho = 0.0;
    Minute max_wait = 0;
    std::map<Minute, std::int64_t> histogram;  // crossing time -> count
    std::int64_t censored = 0;                 // starts that never crossed within max_wait
    std::int64_t starts() const;
};

/// For every start t with max_wait subsequent observations, the minimal
/// tau >= 1 with prod_{u=t}^{t+tau-1} (1 + r(u)) >= rho, censored at
/// max_wait. The relative price is accumulated left to right so results are
/// reproducible to the bit.
FptSample fpt_distribution(const std::vector<double>& returns, double rho, Minute max_wait,
                           int threads = 1);

}  // namespace wismc
