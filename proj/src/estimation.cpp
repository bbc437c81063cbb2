#include "wismc/estimation.hpp"

#include <algorithm>
#include <map>

#include "wismc/discretize.hpp"
#include "wismc/index.hpp"

namespace wismc {

Trajectory build_trajectory(const std::vector<State>& labels) {
    if (labels.empty()) throw EmptyInput("label sequence");
    Trajectory traj;
    traj.states.push_back(labels[0]);
    traj.times.push_back(0);
    for (std::size_t t = 1; t < labels.size(); ++t) {
        if (labels[t] != traj.states.back()) {
            traj.states.push_back(labels[t]);
            traj.times.push_back(static_cast<Minute>(t));
        }
    }
    return traj;
}

double default_initial_index(const StateSpace& space) {
    const double r = space.rep(space.median_state());
    return r * r;
}

WismcModel fit(const std::vector<State>& labels, const StateSpace& space,
               const IndexConfig& index_config, int level_count, const FitOptions& opt) {
    index_config.validate();
    if (level_count < 1) throw DataError("index level count must be >= 1");
    for (State s : labels) space.require_state(s);

    Trajectory traj = build_trajectory(labels);
    const std::size_t runs = traj.length();
    // The last run's sojourn is censored by the end of the sample, so only
    // runs-1 transitions carry usable (target, sojourn) observations.
    if (runs < 2 || static_cast<std::int64_t>(runs - 1) < opt.min_transitions)
        throw TooFewSamples(runs >= 1 ? runs - 1 : 0,
                            static_cast<std::size_t>(std::max<std::int64_t>(opt.min_transitions, 1)));
    const std::size_t n_transitions = runs - 1;

    IndexConfig cfg = index_config;
    if (opt.initial_index) cfg.initial_index = *opt.initial_index;

    traj.index_values = index_at_transitions(traj.states, traj.times, cfg, space.reps());

    IndexLevels levels;
    if (opt.levels) {
        levels = *opt.levels;
        if (levels.count() != level_count)
            throw DataError("fixed index levels disagree with the requested level count");
    } else if (level_count == 1) {
        levels = IndexLevels();  // plain semi-Markov: one unconditioned level
    } else {
        // Levels are fitted on the conditioning values only: U_n for the
        // transitions whose outcome is observed (n = 0..runs-2).
        std::vector<double> conditioning(traj.index_values.begin(),
                                         traj.index_values.begin() + n_transitions);
        levels = fit_index_levels(conditioning, level_count);
    }

    const int s = space.size();
    const int L = levels.count();
    struct CellAccum {
        std::vector<std::int64_t> target_counts;
        std::vector<std::map<Minute, std::int64_t>> sojourns;
        std::int64_t total = 0;
    };
    std::vector<CellAccum> accum(static_cast<std::size_t>(s) * L);
    for (auto& a : accum) {
        a.target_counts.assign(s, 0);
        a.sojourns.resize(s);
    }

    for (std::size_t n = 0; n < n_transitions; ++n) {
        const State i = traj.states[n];
        const State j = traj.states[n + 1];
        const Level v = levels.level_of(traj.index_values[n]);
        const Minute w = traj.times[n + 1] - traj.times[n];
        CellAccum& a = accum[static_cast<std::size_t>(i - 1) * L + (v - 1)];
        ++a.target_counts[j - 1];
        ++a.sojourns[j - 1][w];
        ++a.total;
    }

    std::vector<KernelCell> cells(accum.size());
    for (std::size_t idx = 0; idx < accum.size(); ++idx) {
        const CellAccum& a = accum[idx];
        if (a.total == 0) continue;  // unpopulated cell; simulator falls back
        KernelCell& cell = cells[idx];
        cell.count = a.total;
        cell.p.assign(s, 0.0);
        cell.sojourn.resize(s);
        for (int j = 0; j < s; ++j) {
            if (a.target_counts[j] == 0) continue;
            cell.p[j] =
                static_cast<double>(a.target_counts[j]) / static_cast<double>(a.total);
            std::vector<Minute> support;
            std::vector<std::int64_t> counts;
            support.reserve(a.sojourns[j].size());
            counts.reserve(a.sojourns[j].size());
            for (const auto& [w, c] : a.sojourns[j]) {
                support.push_back(w);
                counts.push_back(c);
            }
            cell.sojourn[j] = DiscreteCdf::from_counts(std::move(support), std::move(counts));
        }
    }

    return WismcModel(space, levels, cfg, std::move(cells));
}

}  // namespace wismc
