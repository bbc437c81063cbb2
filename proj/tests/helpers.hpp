#pragma once

// Small builders shared by the unit tests.

#include <cstdint>
#include <vector>

#include "wismc/model.hpp"
#include "wismc/rng.hpp"

namespace wismc::testing {

inline DiscreteCdf point_mass(Minute w) { return DiscreteCdf::from_cdf({w}, {1.0}); }

/// Two-state flip-flop model: state 1 <-> state 2 with the given sojourn,
/// identical at every level.
inline WismcModel flip_flop(std::vector<double> reps, Minute sojourn, int levels = 1,
                            std::vector<double> level_edges = {}) {
    StateSpace space(std::move(reps));
    IndexLevels lv = levels == 1 ? IndexLevels() : IndexLevels(levels, std::move(level_edges));
    std::vector<KernelCell> cells(2 * static_cast<std::size_t>(lv.count()));
    for (int v = 1; v <= lv.count(); ++v) {
        KernelCell to2;
        to2.p = {0.0, 1.0};
        to2.sojourn = {DiscreteCdf{}, point_mass(sojourn)};
        KernelCell to1;
        to1.p = {1.0, 0.0};
        to1.sojourn = {point_mass(sojourn), DiscreteCdf{}};
        cells[static_cast<std::size_t>(0 * lv.count() + v - 1)] = to2;
        cells[static_cast<std::size_t>(1 * lv.count() + v - 1)] = to1;
    }
    return WismcModel(std::move(space), std::move(lv), IndexConfig{}, std::move(cells));
}

/// Random label sequence over 1..s with no constraint on repeats.
inline std::vector<State> random_labels(std::size_t n, int s, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<State> labels(n);
    for (auto& l : labels) l = 1 + static_cast<State>(rng.next_u64() % static_cast<std::uint64_t>(s));
    return labels;
}

/// Random embedded trajectory: no self-transitions, sojourns in 1..max_sojourn.
inline void random_trajectory(std::size_t transitions, int s, Minute max_sojourn,
                              std::uint64_t seed, std::vector<State>* states,
                              std::vector<Minute>* times) {
    Rng rng(seed);
    states->clear();
    times->clear();
    State current = 1 + static_cast<State>(rng.next_u64() % static_cast<std::uint64_t>(s));
    Minute t = 0;
    states->push_back(current);
    times->push_back(t);
    for (std::size_t n = 0; n < transitions; ++n) {
        State next = 1 + static_cast<State>(rng.next_u64() % static_cast<std::uint64_t>(s - 1));
        if (next >= current) ++next;
        t += 1 + static_cast<Minute>(rng.next_u64() % static_cast<std::uint64_t>(max_sojourn));
        states->push_back(next);
        times->push_back(t);
        current = next;
    }
}

}  // namespace wismc::testing
