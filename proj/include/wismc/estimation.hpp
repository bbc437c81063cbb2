#pragma once

#include <optional>
#include <vector>

#include "wismc/model.hpp"

namespace wismc {

/// Run-length encodes a per-minute label sequence into an embedded
/// trajectory: a transition occurs when the label changes, T_n is the start
/// minute of the n-th run. index_values is left empty.
Trajectory build_trajectory(const std::vector<State>& labels);

struct FitOptions {
    /// Refuse to fit with fewer observed transitions than this; a 5x5x5
    /// kernel has 125 cells that all need mass.
    std::int64_t min_transitions = 1000;

    /// Fixed index-level edges. When unset, levels are fitted as quantiles
    /// of the observed transition-time index values.
    std::optional<IndexLevels> levels;

    /// Overrides cfg.initial_index for U_0 when set.
    std::optional<double> initial_index;
};

/// Fits the kernel from a per-minute label sequence: builds the trajectory,
/// computes the index at each transition, bins it into levels, and counts
/// conditional transitions and sojourns per (state, level) cell. The index
/// at transition n uses information strictly before T_n, so estimation
/// never peeks at the sojourn being predicted.
WismcModel fit(const std::vector<State>& labels, const StateSpace& space,
               const IndexConfig& index_config, int level_count, const FitOptions& opt = {});

/// Default U_0: squared representative value of the median state.
double default_initial_index(const StateSpace& space);

}  // namespace wismc
