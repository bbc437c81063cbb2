#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wismc/errors.hpp"

namespace wismc {

using State = int;            // 1-based state id in {1..s}
using Level = int;            // 1-based volatility level in {1..L}
using Minute = std::int64_t;  // integer time step

/// Configuration of the exponentially weighted volatility index.
struct IndexConfig {
    double lambda = 0.97;                 // per-minute weight decay, in (0, 1]
    std::optional<std::int64_t> memory;   // window in transitions; nullopt = unbounded
    double initial_index = 0.0;           // U_0, known and non-random

    void validate() const;
};

/// Finite state space of discretized returns. States are identified by
/// 1-based ids; each carries a representative return value (the in-bin
/// median of the training data) used wherever a numeric return is needed.
class StateSpace {
public:
    StateSpace() = default;
    explicit StateSpace(std::vector<double> representative_values,
                        std::vector<std::string> labels = {});

    int size() const { return static_cast<int>(reps_.size()); }
    double rep(State i) const {
        require_state(i);
        return reps_[static_cast<std::size_t>(i - 1)];
    }
    const std::vector<double>& reps() const { return reps_; }
    const std::vector<std::string>& labels() const { return labels_; }
    State median_state() const { return (size() + 1) / 2; }

    /// Per-state squared representative return, the index functional's values.
    std::vector<double> squared_reps() const;

    void require_state(State i) const {
        if (i < 1 || i > size()) throw UnknownState(i);
    }

private:
    std::vector<double> reps_;
    std::vector<std::string> labels_;
};

/// Discretization of index values into 1..count levels by sorted cut points.
/// level_of is total: values at or below the first edge map to level 1,
/// values above the last edge to level count, ties go to the lower level.
class IndexLevels {
public:
    IndexLevels();  // single level, no edges
    IndexLevels(int count, std::vector<double> edges);

    int count() const { return count_; }
    const std::vector<double>& edges() const { return edges_; }
    Level level_of(double v) const;
    void require_level(Level v) const {
        if (v < 1 || v > count_) throw UnknownLevel(v);
    }

private:
    int count_ = 1;
    std::vector<double> edges_;
};

/// A realized path: visited states J_n, transition times T_n and the index
/// values U_n at each transition. Self-transitions never appear; runs of an
/// identical state accumulate sojourn time instead.
struct Trajectory {
    std::vector<State> states;
    std::vector<Minute> times;
    std::vector<double> index_values;

    std::size_t length() const { return states.size(); }
    void validate(int state_count) const;
};

/// Discrete CDF on positive integer sojourn times. Either backed by an
/// observation histogram (fitted models) or given directly (synthetic
/// models). The last CDF value is exactly 1.
class DiscreteCdf {
public:
    DiscreteCdf() = default;
    static DiscreteCdf from_counts(std::vector<Minute> support, std::vector<std::int64_t> counts);
    static DiscreteCdf from_cdf(std::vector<Minute> support, std::vector<double> cdf);

    bool empty() const { return support_.empty(); }
    double at(Minute t) const;          // F(t); 0 below the support
    Minute sample(double u) const;      // smallest w with F(w) >= u
    const std::vector<Minute>& support() const { return support_; }
    const std::vector<double>& cdf() const { return cdf_; }
    const std::vector<std::int64_t>& counts() const { return counts_; }
    bool count_backed() const { return !counts_.empty(); }
    std::int64_t total_count() const;

    void validate() const;

private:
    std::vector<Minute> support_;        // strictly increasing, all >= 1
    std::vector<double> cdf_;            // non-decreasing, back() == 1
    std::vector<std::int64_t> counts_;   // empty unless count-backed
};

/// One (state, level) cell of the kernel: embedded transition probabilities
/// over target states and the conditional sojourn CDF per target. A cell
/// with no observations has an empty p vector.
struct KernelCell {
    std::vector<double> p;            // size s; p[j-1], zero on the diagonal
    std::vector<double> cum_p;        // prefix sums of p, built by the model
    std::vector<DiscreteCdf> sojourn; // size s; empty entries where p == 0
    std::int64_t count = 0;           // observations behind this cell (0 if synthetic)

    bool populated() const { return !p.empty(); }
};

/// Fitted (or synthetic) weighted-indexed semi-Markov kernel, stored as the
/// factor pair (p, G) per (state, level) cell. Immutable after construction;
/// concurrent reads need no synchronization.
class WismcModel {
public:
    WismcModel(StateSpace space, IndexLevels levels, IndexConfig index_config,
               std::vector<KernelCell> cells, std::vector<double> return_edges = {});

    const StateSpace& states() const { return space_; }
    const IndexLevels& levels() const { return levels_; }
    const IndexConfig& index_config() const { return index_config_; }
    const std::vector<double>& return_edges() const { return return_edges_; }

    const KernelCell& cell(State i, Level v) const;

    /// Cell lookup with the sparse-cell fallback: if (i, v) is unpopulated,
    /// returns the populated cell for the same state at the nearest level
    /// (ties to the lower level). Null when no level is populated for i.
    /// `used` reports the level actually consulted.
    const KernelCell* resolve_cell(State i, Level v, Level* used = nullptr) const;

    double transition_prob(State i, Level v, State j) const;

    /// Conditional waiting time CDF G_ij(v; t); 1 whenever p_ij(v) == 0.
    double sojourn_cdf(State i, State j, Level v, Minute t) const;

    /// Unconditional sojourn CDF H_i(v; t) = sum_j p_ij(v) G_ij(v; t).
    double sojourn_marginal(State i, Level v, Minute t) const;

    /// Kernel entry Q_ij(v; t) = p_ij(v) G_ij(v; t).
    double kernel(State i, State j, Level v, Minute t) const;

    /// Observation counts per (state, level) cell, for occupancy reports.
    std::vector<std::vector<std::int64_t>> occupancy() const;

    /// Checks every structural invariant; throws ModelError on violation.
    void validate() const;

    std::string to_json_string() const;
    static WismcModel from_json_string(const std::string& text);
    void save(const std::string& path) const;
    static WismcModel load(const std::string& path);

private:
    std::size_t cell_index(State i, Level v) const {
        return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(levels_.count()) +
               static_cast<std::size_t>(v - 1);
    }

    StateSpace space_;
    IndexLevels levels_;
    IndexConfig index_config_;
    std::vector<KernelCell> cells_;       // (i-1)*L + (v-1)
    std::vector<double> return_edges_;    // empty unless fitted from real returns
};

/// Sum a count-backed model over index levels into an ordinary semi-Markov
/// model (single level). Throws ModelError if any populated cell lacks
/// observation counts.
WismcModel collapse_levels(const WismcModel& model);

}  // namespace wismc
