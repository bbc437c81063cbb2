#include "wismc/simulate.hpp"

#include <algorithm>

#include "wismc/index.hpp"
#include "wismc/util.hpp"

namespace wismc {

Trajectory simulate_path(const WismcModel& model, const SimConfig& cfg, Rng rng,
                         SimStats* stats) {
    if (cfg.horizon < 1) throw HorizonBeforeOrigin(cfg.horizon);
    const StateSpace& space = model.states();
    State j0 = cfg.initial_state == 0 ? space.median_state() : cfg.initial_state;
    if (j0 < 1 || j0 > space.size()) throw InvalidInitialState(cfg.initial_state);

    IndexConfig icfg = model.index_config();
    if (cfg.initial_index) icfg.initial_index = *cfg.initial_index;
    const std::vector<double> sq = space.squared_reps();

    Trajectory traj;
    traj.states.push_back(j0);
    traj.times.push_back(0);
    traj.index_values.push_back(icfg.initial_index);

    IndexAccumulator acc(icfg);
    State current = j0;
    while (traj.times.back() < cfg.horizon) {
        const Level v = model.levels().level_of(traj.index_values.back());
        Level used = v;
        const KernelCell* cell =
            cfg.allow_fallback ? model.resolve_cell(current, v, &used) : &model.cell(current, v);
        if (cell == nullptr || !cell->populated()) throw MissingCell(current, v);
        if (stats && used != v) ++stats->fallback_draws;

        // Step 2: next state by inverse CDF over the embedded row.
        const double u_state = rng.next_double();
        const auto& cum = cell->cum_p;
        State next = static_cast<State>(
            std::lower_bound(cum.begin(), cum.end(), u_state) - cum.begin() + 1);
        if (next > space.size()) next = space.size();

        // Step 3: conditional sojourn by inverse CDF.
        const DiscreteCdf& g = cell->sojourn[static_cast<std::size_t>(next - 1)];
        if (g.empty()) throw MissingCell(current, used);
        const Minute w = g.sample(rng.next_double());

        // Step 4: advance the index with the completed sojourn.
        acc.push(sq[static_cast<std::size_t>(current - 1)], w);

        traj.states.push_back(next);
        traj.times.push_back(traj.times.back() + w);
        traj.index_values.push_back(acc.value());
        current = next;
        if (stats) ++stats->transitions;
    }
    return traj;
}

Trajectory simulate_path(const WismcModel& model, const SimConfig& cfg, SimStats* stats) {
    return simulate_path(model, cfg, Rng::stream(cfg.seed, 0), stats);
}

std::vector<State> expand_to_minutes(const Trajectory& traj, Minute horizon) {
    if (horizon < 1) throw HorizonBeforeOrigin(horizon);
    if (traj.states.empty()) throw EmptyTrajectory();
    std::vector<State> z(static_cast<std::size_t>(horizon));
    std::size_t n = 0;
    for (Minute t = 0; t < horizon; ++t) {
        while (n + 1 < traj.times.size() && traj.times[n + 1] <= t) ++n;
        z[static_cast<std::size_t>(t)] = traj.states[n];
    }
    return z;
}

namespace {

std::vector<double> returns_of_path(const WismcModel& model, const SimConfig& cfg, Rng rng,
                                    SimStats* stats) {
    const Minute total = cfg.horizon + cfg.burn_in;
    SimConfig path_cfg = cfg;
    path_cfg.horizon = total;
    Trajectory traj = simulate_path(model, path_cfg, rng, stats);
    std::vector<State> z = expand_to_minutes(traj, total);
    std::vector<double> r(static_cast<std::size_t>(cfg.horizon));
    const std::vector<double>& reps = model.states().reps();
    for (Minute t = 0; t < cfg.horizon; ++t)
        r[static_cast<std::size_t>(t)] =
            reps[static_cast<std::size_t>(z[static_cast<std::size_t>(t + cfg.burn_in)] - 1)];
    return r;
}

}  // namespace

std::vector<double> simulate_returns(const WismcModel& model, const SimConfig& cfg,
                                     SimStats* stats) {
    return returns_of_path(model, cfg, Rng::stream(cfg.seed, 0), stats);
}

std::vector<std::vector<double>> simulate_returns_many(const WismcModel& model,
                                                       const SimConfig& cfg, int threads) {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(cfg.n_paths));
    parallel_for(static_cast<std::size_t>(cfg.n_paths), threads, [&](std::size_t p) {
        out[p] = returns_of_path(model, cfg, Rng::stream(cfg.seed, static_cast<std::uint64_t>(p)),
                                 nullptr);
    });
    return out;
}

}  // namespace wismc
