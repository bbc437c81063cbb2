#include "wismc/index.hpp"

#include <cmath>

namespace wismc {

double geometric_weight_sum(double lambda, Minute w) {
    if (w <= 0) return 0.0;
    if (lambda == 1.0) return static_cast<double>(w);
    // lambda^1 + ... + lambda^w
    return lambda * (1.0 - std::pow(lambda, static_cast<double>(w))) / (1.0 - lambda);
}

IndexAccumulator::IndexAccumulator(const IndexConfig& cfg)
    : lambda_(cfg.lambda), memory_(cfg.memory), initial_(cfg.initial_index) {
    cfg.validate();
}

double IndexAccumulator::pow_lambda(Minute w) {
    if (w >= 0 && w < 4096) {
        const std::size_t idx = static_cast<std::size_t>(w);
        if (idx >= pow_cache_.size()) {
            pow_cache_.reserve(idx + 1);
            for (std::size_t k = pow_cache_.size(); k <= idx; ++k)
                pow_cache_.push_back(std::pow(lambda_, static_cast<double>(k)));
        }
        return pow_cache_[idx];
    }
    return std::pow(lambda_, static_cast<double>(w));
}

void IndexAccumulator::push(double value, Minute sojourn) {
    if (sojourn < 1) throw ModelError("sojourn must be >= 1 minute");
    const Minute start = time_;
    time_ += sojourn;
    if (!memory_ || static_cast<std::int64_t>(window_.size()) < *memory_) {
        if (memory_) window_.push_back({value, start, time_});
        const double decay = pow_lambda(sojourn);
        const double mass = geometric_weight_sum(lambda_, sojourn);
        num_ = num_ * decay + value * mass;
        den_ = den_ * decay + mass;
        return;
    }
    // Saturated window: drop the oldest sojourn and rebuild both sums by
    // replaying the survivors through the growing-window recurrence.
    // Subtracting the evicted mass instead would leave cancellation residue,
    // and a window of all-zero values must report exactly zero.
    window_.push_back({value, start, time_});
    while (static_cast<std::int64_t>(window_.size()) > *memory_) window_.pop_front();
    num_ = 0.0;
    den_ = 0.0;
    for (const Segment& seg : window_) {
        const double decay = pow_lambda(seg.end - seg.start);
        const double mass = geometric_weight_sum(lambda_, seg.end - seg.start);
        num_ = num_ * decay + seg.value * mass;
        den_ = den_ * decay + mass;
    }
}

double IndexAccumulator::value() const {
    if (den_ <= 0.0) return initial_;
    const double u = num_ / den_;
    return u < 0.0 ? 0.0 : u;
}

std::vector<double> index_at_transitions(const std::vector<State>& states,
                                         const std::vector<Minute>& times,
                                         const IndexConfig& cfg,
                                         const std::vector<double>& reps) {
    if (states.empty()) throw EmptyTrajectory();
    if (states.size() != times.size()) throw ModelError("state/time lengths differ");
    std::vector<double> values(states.size());
    values[0] = cfg.initial_index;
    IndexAccumulator acc(cfg);
    for (std::size_t n = 0; n + 1 < states.size(); ++n) {
        const double rep = reps.at(static_cast<std::size_t>(states[n] - 1));
        acc.push(rep * rep, times[n + 1] - times[n]);
        values[n + 1] = acc.value();
    }
    return values;
}

double index_at_time(const std::vector<State>& states, const std::vector<Minute>& times,
                     Minute t, const IndexConfig& cfg, const std::vector<double>& reps) {
    if (states.empty()) throw EmptyTrajectory();
    if (states.size() != times.size()) throw ModelError("state/time lengths differ");
    if (t < times.front()) throw TimeBeforeOrigin(t);
    IndexAccumulator acc(cfg);
    // Completed sojourns strictly before t, then the partial ongoing one.
    // At t == T_n this replays exactly the index_at_transitions evaluation,
    // so the two agree to the bit.
    std::size_t n = 0;
    for (; n + 1 < states.size() && times[n + 1] <= t; ++n) {
        const double rep = reps.at(static_cast<std::size_t>(states[n] - 1));
        acc.push(rep * rep, times[n + 1] - times[n]);
    }
    if (t > times[n]) {
        const double rep = reps.at(static_cast<std::size_t>(states[n] - 1));
        acc.push(rep * rep, t - times[n]);
    }
    return acc.value();
}

}  // namespace wismc
