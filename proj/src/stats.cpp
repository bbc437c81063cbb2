#include "wismc/stats.hpp"

#include <algorithm>
#include <cmath>

#include "wismc/util.hpp"

namespace wismc {

namespace {

AcfCurve acf_of(const std::vector<double>& z, int tau_max, bool include_lag0) {
    if (tau_max < 1) throw ModelError("tau_max must be >= 1");
    const std::size_t n = z.size();
    if (n <= static_cast<std::size_t>(tau_max))
        throw SeriesTooShort(n, static_cast<std::size_t>(tau_max));

    const auto [mn, mx] = std::minmax_element(z.begin(), z.end());
    if (*mn == *mx) throw DegenerateVariance();

    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= static_cast<double>(n);

    std::vector<double> dev(n);
    for (std::size_t t = 0; t < n; ++t) dev[t] = z[t] - mean;

    double var = 0.0;
    for (double d : dev) var += d * d;
    var /= static_cast<double>(n);
    if (!(var > 0.0)) throw DegenerateVariance();

    AcfCurve curve;
    for (int tau = include_lag0 ? 0 : 1; tau <= tau_max; ++tau) {
        double cov = 0.0;
        for (std::size_t t = 0; t + static_cast<std::size_t>(tau) < n; ++t)
            cov += dev[t + static_cast<std::size_t>(tau)] * dev[t];
        cov /= static_cast<double>(n);
        curve.lags.push_back(tau);
        curve.values.push_back(cov / var);
    }
    return curve;
}

}  // namespace

AcfCurve acf_raw(const std::vector<double>& series, int tau_max, bool include_lag0) {
    return acf_of(series, tau_max, include_lag0);
}

AcfCurve acf_squared(const std::vector<double>& series, int tau_max, bool include_lag0) {
    std::vector<double> sq(series.size());
    std::transform(series.begin(), series.end(), sq.begin(), [](double r) { return r * r; });
    return acf_of(sq, tau_max, include_lag0);
}

double mse_acf(const AcfCurve& a, const AcfCurve& b) {
    if (a.lags != b.lags || a.values.size() != b.values.size()) throw LagGridMismatch();
    if (a.values.empty()) throw LagGridMismatch();
    double sum = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        const double d = a.values[k] - b.values[k];
        sum += d * d;
    }
    return sum / static_cast<double>(a.values.size());
}

std::int64_t FptSample::starts() const {
    std::int64_t total = censored;
    for (const auto& [tau, count] : histogram) total += count;
    return total;
}

FptSample fpt_distribution(const std::vector<double>& returns, double rho, Minute max_wait,
                           int threads) {
    if (!(rho > 1.0)) throw InvalidThreshold(rho);
    if (max_wait < 1) throw ModelError("max_wait must be >= 1");
    const std::size_t n = returns.size();
    if (n < static_cast<std::size_t>(max_wait))
        throw SeriesTooShort(n, static_cast<std::size_t>(max_wait) - 1);
    const std::size_t n_starts = n - static_cast<std::size_t>(max_wait) + 1;

    // Every start is scanned independently; the relative price is a
    // left-to-right cumulative product so the crossing time of a given start
    // never depends on chunking. Integer counts make the merge exact.
    const int workers = std::max(1, threads);
    const std::size_t n_chunks =
        std::min<std::size_t>(n_starts, static_cast<std::size_t>(workers) * 4);
    std::vector<FptSample> partial(n_chunks);
    parallel_for(n_chunks, workers, [&](std::size_t chunk) {
        const std::size_t lo = n_starts * chunk / n_chunks;
        const std::size_t hi = n_starts * (chunk + 1) / n_chunks;
        FptSample& local = partial[chunk];
        for (std::size_t t = lo; t < hi; ++t) {
            double rel = 1.0;
            Minute crossed = 0;
            for (Minute tau = 1; tau <= max_wait; ++tau) {
                rel *= 1.0 + returns[t + static_cast<std::size_t>(tau) - 1];
                if (rel >= rho) {
                    crossed = tau;
                    break;
                }
            }
            if (crossed > 0)
                ++local.histogram[crossed];
            else
                ++local.censored;
        }
    });

    FptSample out;
    out.rho = rho;
    out.max_wait = max_wait;
    for (const FptSample& local : partial) {
        out.censored += local.censored;
        for (const auto& [tau, count] : local.histogram) out.histogram[tau] += count;
    }
    return out;
}

}  // namespace wismc
