#pragma once

#include <vector>

#include "wismc/model.hpp"

namespace wismc {

/// Symmetric return-state bins plus the resulting state space.
struct ReturnBins {
    std::vector<double> edges;  // s-1 cut points, symmetric about zero
    StateSpace space;
};

/// Lower-interpolation empirical quantile: the order statistic at rank
/// ceil(q * n) of the ascending-sorted sample, for q in (0, 1].
double quantile_lower(const std::vector<double>& sorted_values, double q);

/// Builds s symmetric return states: (s-1)/2 positive cut points at
/// equally spaced quantiles of |returns|, mirrored about zero, with the
/// middle state straddling zero. Representative value of each state is the
/// in-bin median of the training returns (mirror bin's negated median when
/// a bin is empty).
ReturnBins fit_return_bins(const std::vector<double>& returns, int s);

/// Total binning function: label k iff value in (edge_{k-1}, edge_k], with
/// open ends at both extremes; ties on an edge go to the lower bin.
std::vector<State> discretize_series(const std::vector<double>& values,
                                     const std::vector<double>& edges);
State discretize_value(double value, const std::vector<double>& edges);

/// Index-level bins with edges at the k/count quantiles of the training
/// index values, k = 1..count-1.
IndexLevels fit_index_levels(const std::vector<double>& index_values, int count);

}  // namespace wismc
