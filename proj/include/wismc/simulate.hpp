#pragma once

#include <cstdint>
#include <vector>

#include "wismc/model.hpp"
#include "wismc/rng.hpp"

namespace wismc {

struct SimConfig {
    Minute horizon = 0;            // simulate until T_{n+1} >= horizon
    std::uint64_t seed = 0;        // master seed; path p draws from stream(seed, p)
    State initial_state = 0;       // 0 = model's median state
    std::optional<double> initial_index;  // default: model's configured U_0
    int n_paths = 1;
    bool allow_fallback = true;    // nearest-level fallback for unpopulated cells
    Minute burn_in = 0;            // minutes dropped from the head of return series
};

struct SimStats {
    std::int64_t transitions = 0;
    std::int64_t fallback_draws = 0;  // transitions sampled through the level fallback
};

/// One trajectory by inverse-CDF sampling of the embedded chain and the
/// conditional sojourn distribution, with the index recomputed incrementally
/// after every transition. Identical (model, cfg, rng stream) reproduces the
/// identical trajectory bit for bit.
Trajectory simulate_path(const WismcModel& model, const SimConfig& cfg, Rng rng,
                         SimStats* stats = nullptr);

/// Path 0 of cfg.seed.
Trajectory simulate_path(const WismcModel& model, const SimConfig& cfg, SimStats* stats = nullptr);

/// Step-function expansion Z(t) = J_{N(t)} for t in [0, horizon). The last
/// state extends to the horizon; transitions beyond it are truncated.
std::vector<State> expand_to_minutes(const Trajectory& traj, Minute horizon);

/// Per-minute representative-return series of one path (path 0), with the
/// first cfg.burn_in minutes discarded.
std::vector<double> simulate_returns(const WismcModel& model, const SimConfig& cfg,
                                     SimStats* stats = nullptr);

/// cfg.n_paths independent paths on up to `threads` workers; results are
/// ordered by path id regardless of scheduling.
std::vector<std::vector<double>> simulate_returns_many(const WismcModel& model,
                                                       const SimConfig& cfg, int threads = 1);

}  // namespace wismc
