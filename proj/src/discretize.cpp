#include "wismc/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wismc {

double quantile_lower(const std::vector<double>& sorted_values, double q) {
    if (sorted_values.empty()) throw EmptyInput("quantile of empty sample");
    if (!(q > 0.0) || q > 1.0) throw DataError("quantile level must be in (0, 1]");
    const std::size_t n = sorted_values.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    return sorted_values[rank - 1];
}

namespace {

double median_sorted(const std::vector<double>& sorted_values) {
    const std::size_t n = sorted_values.size();
    if (n == 0) throw EmptyInput("median of empty sample");
    if (n % 2 == 1) return sorted_values[n / 2];
    return 0.5 * (sorted_values[n / 2 - 1] + sorted_values[n / 2]);
}

}  // namespace

ReturnBins fit_return_bins(const std::vector<double>& returns, int s) {
    if (s < 3 || s % 2 == 0) throw EvenStateCount(s);
    if (returns.size() < static_cast<std::size_t>(10 * s))
        throw TooFewSamples(returns.size(), static_cast<std::size_t>(10 * s));

    // A series with exactly s distinct values is already discretized (this is
    // what simulated output looks like): recover those states identically,
    // with midpoint edges and the atoms as representatives. The quantile
    // construction below would collapse on such atomic data.
    {
        std::vector<double> distinct = returns;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        if (distinct.size() == static_cast<std::size_t>(s)) {
            ReturnBins out;
            out.edges.reserve(s - 1);
            for (int k = 0; k + 1 < s; ++k)
                out.edges.push_back(0.5 * (distinct[static_cast<std::size_t>(k)] +
                                           distinct[static_cast<std::size_t>(k + 1)]));
            std::vector<std::string> labels(static_cast<std::size_t>(s));
            for (int k = 0; k < s; ++k) labels[static_cast<std::size_t>(k)] = std::to_string(k + 1);
            out.space = StateSpace(std::move(distinct), std::move(labels));
            return out;
        }
    }

    // Positive cut points: equally spaced quantiles of |r|, then mirrored.
    std::vector<double> abs_sorted(returns.size());
    std::transform(returns.begin(), returns.end(), abs_sorted.begin(),
                   [](double r) { return std::abs(r); });
    std::sort(abs_sorted.begin(), abs_sorted.end());

    const int half = (s - 1) / 2;
    std::vector<double> pos(half);
    for (int k = 1; k <= half; ++k)
        pos[k - 1] = quantile_lower(abs_sorted, static_cast<double>(k) / (half + 1));
    for (int k = 0; k + 1 < half; ++k)
        if (!(pos[k] < pos[k + 1]))
            throw DegenerateDistribution("coincident return-bin edges");
    if (!(pos[0] > 0.0)) throw DegenerateDistribution("zero return-bin edge");

    ReturnBins out;
    out.edges.reserve(s - 1);
    for (int k = half - 1; k >= 0; --k) out.edges.push_back(-pos[k]);
    for (int k = 0; k < half; ++k) out.edges.push_back(pos[k]);

    // Representative value of each state: in-bin median of the training
    // returns; an empty bin borrows the mirror bin's negated median.
    std::vector<std::vector<double>> per_bin(s);
    for (double r : returns)
        per_bin[discretize_value(r, out.edges) - 1].push_back(r);
    std::vector<double> reps(s, std::numeric_limits<double>::quiet_NaN());
    for (int k = 0; k < s; ++k) {
        if (per_bin[k].empty()) continue;
        std::sort(per_bin[k].begin(), per_bin[k].end());
        reps[k] = median_sorted(per_bin[k]);
    }
    for (int k = 0; k < s; ++k) {
        if (!std::isnan(reps[k])) continue;
        const int mirror = s - 1 - k;
        if (std::isnan(reps[mirror]))
            throw DegenerateDistribution("empty return bin " + std::to_string(k + 1));
        reps[k] = -reps[mirror];
    }
    for (int k = 0; k + 1 < s; ++k)
        if (!(reps[k] < reps[k + 1]))
            throw DegenerateDistribution("non-increasing representative values");

    std::vector<std::string> labels(s);
    for (int k = 0; k < s; ++k) labels[k] = std::to_string(k + 1);
    out.space = StateSpace(reps, labels);
    return out;
}

State discretize_value(double value, const std::vector<double>& edges) {
    // label k iff value in (edge_{k-1}, edge_k]; ties go to the lower bin,
    // so the bin index is the count of edges strictly below the value.
    auto it = std::lower_bound(edges.begin(), edges.end(), value);
    return static_cast<State>(it - edges.begin()) + 1;
}

std::vector<State> discretize_series(const std::vector<double>& values,
                                     const std::vector<double>& edges) {
    std::vector<State> labels(values.size());
    std::transform(values.begin(), values.end(), labels.begin(),
                   [&](double v) { return discretize_value(v, edges); });
    return labels;
}

IndexLevels fit_index_levels(const std::vector<double>& index_values, int count) {
    if (count < 2) throw DataError("index level count must be >= 2");
    if (index_values.size() < static_cast<std::size_t>(10 * count))
        throw TooFewSamples(index_values.size(), static_cast<std::size_t>(10 * count));
    std::vector<double> sorted = index_values;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> edges(count - 1);
    for (int k = 1; k < count; ++k)
        edges[k - 1] = quantile_lower(sorted, static_cast<double>(k) / count);
    for (int k = 0; k + 1 < count - 1; ++k)
        if (!(edges[k] < edges[k + 1]))
            throw DegenerateDistribution("coincident index-level edges");
    if (count == 2 && !(sorted.front() < sorted.back()))
        throw DegenerateDistribution("constant index values");
    return IndexLevels(count, edges);
}

}  // namespace wismc
