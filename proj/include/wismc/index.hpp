#pragma once

#include <deque>
#include <vector>

#include "wismc/model.hpp"

namespace wismc {

/// Incremental evaluator of the exponentially weighted volatility index.
///
/// Maintains the weighted sum of per-minute functional values (squared
/// representative returns by default) and the matching weight sum, both
/// referenced to the current transition time. Pushing a completed sojourn
/// decays both sums by lambda^sojourn and adds the new sojourn's geometric
/// mass in closed form, so a full pass over a trajectory costs O(transitions)
/// instead of the quadratic cost of the defining double sum.
///
/// With a finite memory of m transitions the same recurrence runs while the
/// window is still filling (so memory m >= n reproduces the unbounded value
/// bit for bit); once the window is full, each push replays the surviving m
/// sojourns through that recurrence instead of subtracting the evicted one,
/// because subtraction would leave cancellation residue (an all-zero window
/// must report exactly zero). That makes a full pass O(transitions * m).
///
/// value() is the convex combination numerator/denominator, so it always
/// lies within the range of pushed values; before any push it reports the
/// configured initial index.
class IndexAccumulator {
public:
    explicit IndexAccumulator(const IndexConfig& cfg);

    /// Completes a sojourn of `sojourn` minutes in a state whose per-minute
    /// functional value is `value` (for the shipped index: rep^2).
    void push(double value, Minute sojourn);

    double value() const;
    Minute time() const { return time_; }

private:
    struct Segment {
        double value;
        Minute start;
        Minute end;
    };

    double pow_lambda(Minute w);

    double lambda_;
    std::optional<std::int64_t> memory_;
    double initial_;
    double num_ = 0.0;
    double den_ = 0.0;
    Minute time_ = 0;
    std::deque<Segment> window_;     // tracked only when memory_ is set
    std::vector<double> pow_cache_;  // lambda^w for small w
};

/// Sum of the sojourn weights lambda^1 + ... + lambda^w in closed form.
double geometric_weight_sum(double lambda, Minute w);

/// Index values U_0..U_N at the transition times of a trajectory. reps maps
/// each state to its representative return; the functional value of state i
/// is reps[i-1]^2. U_0 is cfg.initial_index.
std::vector<double> index_at_transitions(const std::vector<State>& states,
                                         const std::vector<Minute>& times,
                                         const IndexConfig& cfg,
                                         const std::vector<double>& reps);

/// Index value U(t) at an arbitrary time t >= T_0. At t == T_n this equals
/// index_at_transitions(...)[n] bit for bit; between transitions the ongoing
/// sojourn contributes as a partial segment and, under finite memory, counts
/// toward the window.
double index_at_time(const std::vector<State>& states, const std::vector<Minute>& times,
                     Minute t, const IndexConfig& cfg, const std::vector<double>& reps);

}  // namespace wismc
