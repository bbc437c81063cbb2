#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "wismc/estimation.hpp"
#include "wismc/index.hpp"

using namespace wismc;

namespace {

FitOptions loose() {
    FitOptions opt;
    opt.min_transitions = 1;
    return opt;
}

IndexConfig index_cfg(double lambda = 0.9) {
    IndexConfig cfg;
    cfg.lambda = lambda;
    cfg.initial_index = 0.0;
    return cfg;
}

}  // namespace

TEST_SUITE("estimation") {

TEST_CASE("build_trajectory run-length encodes from minute zero") {
    Trajectory a = build_trajectory({3, 3, 3});
    CHECK(a.states == std::vector<State>{3});
    CHECK(a.times == std::vector<Minute>{0});

    Trajectory b = build_trajectory({1, 1, 2, 2, 2, 1});
    CHECK(b.states == std::vector<State>{1, 2, 1});
    CHECK(b.times == std::vector<Minute>{0, 2, 5});

    Trajectory c = build_trajectory({1, 2, 1, 2});
    CHECK(c.states == std::vector<State>{1, 2, 1, 2});
    CHECK(c.times == std::vector<Minute>{0, 1, 2, 3});

    CHECK_THROWS_AS(build_trajectory({}), EmptyInput);
}

TEST_CASE("deterministic alternation fits an exact flip-flop kernel") {
    // 1 1 2 2 1 1 2 2 ... : every sojourn is 2 minutes, every move flips.
    std::vector<State> labels;
    for (int k = 0; k < 200; ++k) labels.push_back(1 + (k / 2) % 2);
    StateSpace space({-0.001, 0.001});
    WismcModel model = fit(labels, space, index_cfg(), 1, loose());

    for (State i : {1, 2}) {
        const KernelCell& cell = model.cell(i, 1);
        REQUIRE(cell.populated());
        const State j = i == 1 ? 2 : 1;
        CHECK(cell.p[static_cast<std::size_t>(j - 1)] == 1.0);
        CHECK(cell.p[static_cast<std::size_t>(i - 1)] == 0.0);
        const DiscreteCdf& g = cell.sojourn[static_cast<std::size_t>(j - 1)];
        CHECK(g.support() == std::vector<Minute>{2});
        CHECK(g.at(1) == 0.0);
        CHECK(g.at(2) == 1.0);
    }
    model.validate();
}

TEST_CASE("fitted counts agree with the independent counting oracle") {
    const int s = 3;
    StateSpace space({-0.001, 0.0, 0.001});
    const auto labels = wismc::testing::random_labels(20000, s, 2024);
    const IndexConfig cfg = index_cfg(0.9);
    WismcModel model = fit(labels, space, cfg, 3, loose());

    // Recount everything with the naive oracle. It gets the same index values
    // the fit used (index arithmetic has its own oracle tests); fitted level
    // edges are order statistics of exactly these values, so recomputing them
    // with different arithmetic would perturb tie cases at the edges.
    Trajectory traj = build_trajectory(labels);
    const std::vector<double> index_values =
        index_at_transitions(traj.states, traj.times, cfg, space.reps());
    const auto counted =
        oracle::count_transitions(labels, index_values, model.levels().edges());

    std::int64_t grand_total = 0;
    for (State i = 1; i <= s; ++i) {
        for (Level v = 1; v <= 3; ++v) {
            const auto it = counted.find({i, v});
            const KernelCell& cell = model.cell(i, v);
            if (it == counted.end()) {
                CHECK_FALSE(cell.populated());
                continue;
            }
            REQUIRE(cell.populated());
            const oracle::CountedCell& ref = it->second;
            CHECK(cell.count == ref.total);
            grand_total += ref.total;
            for (State j = 1; j <= s; ++j) {
                const auto tc = ref.target_counts.find(j);
                const std::int64_t c = tc == ref.target_counts.end() ? 0 : tc->second;
                // Identical integer division: bit-for-bit equality.
                CHECK(cell.p[static_cast<std::size_t>(j - 1)] ==
                      static_cast<double>(c) / static_cast<double>(ref.total));
                if (c == 0) continue;
                std::vector<Minute> support;
                std::vector<std::int64_t> counts;
                for (const auto& [w, k] : ref.sojourns.at(j)) {
                    support.push_back(w);
                    counts.push_back(k);
                }
                const DiscreteCdf ref_cdf = DiscreteCdf::from_counts(support, counts);
                const DiscreteCdf& g = cell.sojourn[static_cast<std::size_t>(j - 1)];
                CHECK(g.support() == ref_cdf.support());
                CHECK(g.cdf() == ref_cdf.cdf());
                CHECK(g.counts() == ref_cdf.counts());
            }
        }
    }
    // Every observed transition lands in exactly one cell.
    CHECK(grand_total == static_cast<std::int64_t>(traj.length()) - 1);
}

TEST_CASE("collapsing a fitted model reproduces the plain semi-Markov fit") {
    const int s = 3;
    StateSpace space({-0.002, 0.0, 0.002});
    const auto labels = wismc::testing::random_labels(30000, s, 99);
    WismcModel conditioned = fit(labels, space, index_cfg(0.95), 5, loose());
    WismcModel plain = fit(labels, space, index_cfg(0.95), 1, loose());
    WismcModel collapsed = collapse_levels(conditioned);

    CHECK(collapsed.levels().count() == 1);
    for (State i = 1; i <= s; ++i) {
        const KernelCell& a = collapsed.cell(i, 1);
        const KernelCell& b = plain.cell(i, 1);
        REQUIRE(a.populated());
        REQUIRE(b.populated());
        CHECK(a.count == b.count);
        CHECK(a.p == b.p);
        for (State j = 1; j <= s; ++j) {
            const DiscreteCdf& ga = a.sojourn[static_cast<std::size_t>(j - 1)];
            const DiscreteCdf& gb = b.sojourn[static_cast<std::size_t>(j - 1)];
            CHECK(ga.support() == gb.support());
            CHECK(ga.cdf() == gb.cdf());
            CHECK(ga.counts() == gb.counts());
        }
    }
}

TEST_CASE("min_transitions guard") {
    StateSpace space({-0.001, 0.001});
    const std::vector<State> labels{1, 2, 1, 2, 1};  // 4 transitions
    FitOptions opt;
    opt.min_transitions = 5;
    CHECK_THROWS_AS(fit(labels, space, index_cfg(), 1, opt), TooFewSamples);
    opt.min_transitions = 4;
    CHECK_NOTHROW(fit(labels, space, index_cfg(), 1, opt));
    // A constant label sequence has no usable transition at all.
    opt.min_transitions = 1;
    CHECK_THROWS_AS(fit(std::vector<State>(100, 1), space, index_cfg(), 1, opt),
                    TooFewSamples);
}

TEST_CASE("options: fixed levels, initial index, validation") {
    StateSpace space({-0.001, 0.0, 0.001});
    const auto labels = wismc::testing::random_labels(5000, 3, 7);

    FitOptions opt = loose();
    opt.levels = IndexLevels(2, {0.5e-6});
    CHECK_THROWS_AS(fit(labels, space, index_cfg(), 3, opt), DataError);
    WismcModel fixed = fit(labels, space, index_cfg(), 2, opt);
    CHECK(fixed.levels().edges() == std::vector<double>{0.5e-6});

    FitOptions with_u0 = loose();
    with_u0.initial_index = 0.25e-6;
    WismcModel m = fit(labels, space, index_cfg(), 1, with_u0);
    CHECK(m.index_config().initial_index == 0.25e-6);

    CHECK_THROWS_AS(fit(labels, space, index_cfg(), 0, loose()), DataError);
    CHECK_THROWS_AS(fit({1, 2, 4, 1}, space, index_cfg(), 1, loose()), UnknownState);
    IndexConfig bad = index_cfg();
    bad.lambda = 0.0;
    CHECK_THROWS_AS(fit(labels, space, bad, 1, loose()), ModelError);
}

TEST_CASE("default initial index is the squared median-state representative") {
    StateSpace space({-0.01, 0.001, 0.02});
    CHECK(space.median_state() == 2);
    CHECK(default_initial_index(space) == 0.001 * 0.001);
    StateSpace even2({-0.01, 0.02});  // even count: lower middle
    CHECK(even2.median_state() == 1);
    CHECK(default_initial_index(even2) == 0.01 * 0.01);
}

}  // TEST_SUITE
