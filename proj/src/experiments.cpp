#include "wismc/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "wismc/discretize.hpp"
#include "wismc/estimation.hpp"
#include "wismc/util.hpp"

namespace wismc {

namespace {

DiscreteCdf point_mass(Minute w) { return DiscreteCdf::from_cdf({w}, {1.0}); }

/// Geometric sojourn with per-minute exit probability `hazard`, truncated at
/// the point where the tail mass drops below 1e-4 (the remainder is lumped
/// into the last support point).
DiscreteCdf truncated_geometric(double hazard) {
    const double keep = 1.0 - hazard;
    Minute w_max = static_cast<Minute>(std::ceil(std::log(1e-4) / std::log(keep)));
    w_max = std::clamp<Minute>(w_max, 1, 400);
    std::vector<Minute> support(static_cast<std::size_t>(w_max));
    std::vector<double> cdf(static_cast<std::size_t>(w_max));
    for (Minute w = 1; w <= w_max; ++w) {
        support[static_cast<std::size_t>(w - 1)] = w;
        cdf[static_cast<std::size_t>(w - 1)] = 1.0 - std::pow(keep, static_cast<double>(w));
    }
    cdf.back() = 1.0;
    return DiscreteCdf::from_cdf(std::move(support), std::move(cdf));
}

struct GeneratorShape {
    // Per-ring jitters, drawn once per model so that every index level shares
    // them (dependence = 0 must collapse all levels onto identical rows).
    std::vector<double> ring_weight_jitter;   // size h
    std::vector<double> beta_jitter;          // size h
    double quiet_jitter = 1.0;
    double busy_jitter = 1.0;
};

std::vector<KernelCell> build_cells(const SynthSpec& spec, const GeneratorShape& shape,
                                    int levels) {
    const int s = spec.states;
    const int h = (s - 1) / 2;
    const int m0 = h + 1;  // middle (zero-return) state, 1-based
    const double delta = std::clamp(spec.dependence, 0.0, 1.0);

    std::vector<KernelCell> cells(static_cast<std::size_t>(s) * levels);
    auto cell_at = [&](State i, Level v) -> KernelCell& {
        return cells[static_cast<std::size_t>(i - 1) * levels + (v - 1)];
    };

    for (Level v = 1; v <= levels; ++v) {
        const double x = levels == 1 ? 0.5 : static_cast<double>(v - 1) / (levels - 1);
        const double y = 0.5 + delta * (x - 0.5);

        // Middle state: jump to an excursion ring, both signs equally likely,
        // with the outer rings favored at high volatility levels.
        {
            std::vector<double> w(static_cast<std::size_t>(h));
            double total = 0.0;
            for (int k = 1; k <= h; ++k) {
                const double inner = std::pow(1.0 / 2.0, k - 1);
                const double outer = std::pow(1.0 / 2.0, h - k);
                w[static_cast<std::size_t>(k - 1)] =
                    ((1.0 - y) * inner + y * outer) *
                    shape.ring_weight_jitter[static_cast<std::size_t>(k - 1)];
                total += w[static_cast<std::size_t>(k - 1)];
            }
            const double hazard =
                std::clamp(spec.quiet_hazard * shape.quiet_jitter +
                               (spec.busy_hazard * shape.busy_jitter -
                                spec.quiet_hazard * shape.quiet_jitter) *
                                   y,
                           0.005, 0.95);
            const DiscreteCdf g = truncated_geometric(hazard);
            KernelCell& cell = cell_at(m0, v);
            cell.p.assign(s, 0.0);
            cell.sojourn.resize(s);
            for (int k = 1; k <= h; ++k) {
                const double mass = w[static_cast<std::size_t>(k - 1)] / total / 2.0;
                cell.p[static_cast<std::size_t>(m0 + k - 1)] = mass;
                cell.p[static_cast<std::size_t>(m0 - k - 1)] = mass;
                cell.sojourn[static_cast<std::size_t>(m0 + k - 1)] = g;
                cell.sojourn[static_cast<std::size_t>(m0 - k - 1)] = g;
            }
        }

        // Excursion states: drop back to the middle or continue the excursion.
        // A continuation either flips the sign within the same ring (exactly
        // repeating the magnitude, which is what correlates adjacent squared
        // returns) or hops to the nearest other ring; the cross-ring hop
        // carries a sign imbalance that cancels the flip's drift, so the
        // expected next return is exactly zero from every cell. Sojourns are
        // a single minute, keeping raw returns uncorrelated.
        for (int k = 1; k <= h; ++k) {
            const double c = h == 1
                                 ? 0.0
                                 : std::clamp((0.42 + 0.33 * y) *
                                                  shape.beta_jitter[static_cast<std::size_t>(k - 1)],
                                              0.02, 0.80);
            const int kn = k > 1 ? k - 1 : 2;  // nearest other ring
            const double ratio = h == 1 ? 1.0 : std::pow(spec.magnitude_ratio, k - kn);
            const double phi = 0.95 / (1.0 + ratio);
            const double flip = phi * c;
            const double hop = c - flip;
            const double imbalance = flip * ratio;  // keeps the row a martingale
            const double hop_same = (hop + imbalance) / 2.0;
            const double hop_opp = (hop - imbalance) / 2.0;

            for (int sign : {+1, -1}) {
                const State i = static_cast<State>(m0 + sign * k);
                KernelCell& cell = cell_at(i, v);
                cell.p.assign(static_cast<std::size_t>(s), 0.0);
                cell.p[static_cast<std::size_t>(m0 - 1)] = 1.0 - c;
                if (h > 1) {
                    cell.p[static_cast<std::size_t>(m0 - sign * k - 1)] = flip;
                    cell.p[static_cast<std::size_t>(m0 + sign * kn - 1)] = hop_same;
                    cell.p[static_cast<std::size_t>(m0 - sign * kn - 1)] = hop_opp;
                }
                cell.sojourn.resize(static_cast<std::size_t>(s));
                for (int j = 0; j < s; ++j)
                    if (cell.p[static_cast<std::size_t>(j)] > 0.0)
                        cell.sojourn[static_cast<std::size_t>(j)] = point_mass(1);
            }
        }
    }
    return cells;
}

}  // namespace

WismcModel make_synthetic_truth(const SynthSpec& spec) {
    if (spec.states < 3 || spec.states % 2 == 0) throw EvenStateCount(spec.states);
    if (spec.levels < 1) throw DataError("level count must be >= 1");
    if (!(spec.base_return > 0.0) || !(spec.magnitude_ratio > 1.0))
        throw DataError("synthetic return magnitudes must be positive and increasing");
    if (!(spec.quiet_hazard > 0.0) || !(spec.busy_hazard < 1.0) ||
        !(spec.quiet_hazard <= spec.busy_hazard))
        throw DataError("synthetic hazards must satisfy 0 < quiet <= busy < 1");

    const int s = spec.states;
    const int h = (s - 1) / 2;

    std::vector<double> reps(static_cast<std::size_t>(s));
    reps[static_cast<std::size_t>(h)] = 0.0;
    for (int k = 1; k <= h; ++k) {
        const double mag = spec.base_return * std::pow(spec.magnitude_ratio, k - 1);
        reps[static_cast<std::size_t>(h + k)] = mag;
        reps[static_cast<std::size_t>(h - k)] = -mag;
    }

    GeneratorShape shape;
    Rng jitter = Rng::stream(spec.kernel_seed, 1);
    auto draw = [&]() { return std::exp(0.15 * (2.0 * jitter.next_double() - 1.0)); };
    for (int k = 0; k < h; ++k) shape.ring_weight_jitter.push_back(draw());
    for (int k = 0; k < h; ++k) shape.beta_jitter.push_back(draw());
    shape.quiet_jitter = draw();
    shape.busy_jitter = draw();

    IndexConfig cfg;
    cfg.lambda = spec.lambda;
    cfg.memory = spec.memory;
    cfg.initial_index = spec.base_return * spec.base_return;
    cfg.validate();

    StateSpace space(reps);

    if (spec.levels == 1)
        return WismcModel(space, IndexLevels(), cfg, build_cells(spec, shape, 1));

    // Level edges are quantiles of the transition-time index the model itself
    // generates, so every level carries real occupancy. The fixed point is
    // found by damped iteration (geometric mean of old and observed edges):
    // an undamped re-cut can oscillate between a quiet and a busy regime.
    const double lo = reps[static_cast<std::size_t>(h + 1)] * reps[static_cast<std::size_t>(h + 1)];
    const double hi = reps.back() * reps.back();
    std::vector<double> edges(static_cast<std::size_t>(spec.levels - 1));
    for (int k = 1; k < spec.levels; ++k)
        edges[static_cast<std::size_t>(k - 1)] =
            0.5 * lo *
            std::pow(3.0 * hi / lo, static_cast<double>(k) / spec.levels);

    for (int round = 0; round < 4; ++round) {
        WismcModel model(space, IndexLevels(spec.levels, edges), cfg,
                         build_cells(spec, shape, spec.levels));
        SimConfig sim;
        sim.horizon = 300000;
        sim.seed = Rng::mix(spec.kernel_seed ^ (0x43414c4942ull + static_cast<std::uint64_t>(round)));
        Trajectory traj = simulate_path(model, sim);
        const std::size_t skip = 1 + std::min<std::size_t>(1000, traj.length() / 10);
        std::vector<double> u(traj.index_values.begin() + static_cast<std::ptrdiff_t>(skip),
                              traj.index_values.end());
        IndexLevels observed = fit_index_levels(u, spec.levels);
        for (std::size_t k = 0; k < edges.size(); ++k)
            edges[k] = std::sqrt(edges[k] * observed.edges()[k]);
    }
    return WismcModel(space, IndexLevels(spec.levels, edges), cfg,
                      build_cells(spec, shape, spec.levels));
}

// ---- sweep ------------------------------------------------------------------

namespace {

std::uint64_t cell_seed(std::uint64_t master, double lambda,
                        const std::optional<std::int64_t>& memory) {
    std::uint64_t h = hash_combine(0x5357454550ull, master);
    h = hash_combine(h, std::bit_cast<std::uint64_t>(lambda));
    h = hash_combine(h, memory ? static_cast<std::uint64_t>(*memory) + 1 : 0ull);
    return h;
}

std::string sanitized(std::string text) {
    for (char& c : text)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return text;
}

}  // namespace

SweepResult sweep(const std::vector<double>& returns, const SweepOptions& opt) {
    SweepOptions o = opt;
    if (o.lambdas.empty()) o.lambdas = {0.90, 0.92, 0.94, 0.96, 0.98, 1.00};
    if (o.memories.empty())
        o.memories = {std::int64_t{10}, std::int64_t{50}, std::int64_t{100}, std::int64_t{500},
                      std::nullopt};
    if (o.replicates < 1) o.replicates = 1;

    const ReturnBins bins = fit_return_bins(returns, o.states);
    const std::vector<State> labels = discretize_series(returns, bins.edges);
    const Minute sim_length =
        o.sim_length ? *o.sim_length : static_cast<Minute>(returns.size());
    const AcfCurve data_sq = acf_squared(returns, o.tau_max);

    SweepResult result;
    result.cells.resize(o.lambdas.size() * o.memories.size());
    for (std::size_t li = 0; li < o.lambdas.size(); ++li)
        for (std::size_t mi = 0; mi < o.memories.size(); ++mi) {
            SweepCell& cell = result.cells[li * o.memories.size() + mi];
            cell.lambda = o.lambdas[li];
            cell.memory = o.memories[mi];
        }

    parallel_for(result.cells.size(), o.threads, [&](std::size_t idx) {
        SweepCell& cell = result.cells[idx];
        try {
            IndexConfig cfg;
            cfg.lambda = cell.lambda;
            cfg.memory = cell.memory;
            cfg.initial_index = default_initial_index(bins.space);
            FitOptions fopt;
            fopt.min_transitions = o.min_transitions;
            WismcModel model = fit(labels, bins.space, cfg, o.levels, fopt);

            const std::uint64_t base = cell_seed(o.seed, cell.lambda, cell.memory);
            std::vector<double> mses(static_cast<std::size_t>(o.replicates));
            for (int r = 0; r < o.replicates; ++r) {
                SimConfig sim;
                sim.horizon = sim_length;
                sim.seed = hash_combine(base, static_cast<std::uint64_t>(r));
                const std::vector<double> simulated = simulate_returns(model, sim);
                mses[static_cast<std::size_t>(r)] =
                    mse_acf(data_sq, acf_squared(simulated, o.tau_max));
            }
            double mean = std::accumulate(mses.begin(), mses.end(), 0.0) /
                          static_cast<double>(mses.size());
            double var = 0.0;
            for (double m : mses) var += (m - mean) * (m - mean);
            cell.mse = mean;
            cell.mse_stddev =
                mses.size() > 1 ? std::sqrt(var / static_cast<double>(mses.size() - 1)) : 0.0;
            cell.ok = true;
        } catch (const Error& e) {
            cell.ok = false;
            cell.error = e.what();
        }
    });

    for (std::size_t idx = 0; idx < result.cells.size(); ++idx) {
        const SweepCell& cell = result.cells[idx];
        if (!cell.ok) continue;
        if (!result.best || cell.mse < result.cells[*result.best].mse) result.best = idx;
    }
    return result;
}

std::string sweep_csv(const SweepResult& result) {
    std::string out = "lambda,m,mse,mse_stddev,status\n";
    for (const SweepCell& cell : result.cells) {
        out += fmt_double(cell.lambda);
        out += ',';
        out += cell.memory ? std::to_string(*cell.memory) : "unbounded";
        out += ',';
        if (cell.ok) {
            out += fmt_double(cell.mse);
            out += ',';
            out += fmt_double(cell.mse_stddev);
            out += ",ok\n";
        } else {
            out += ",,error: " + sanitized(cell.error) + "\n";
        }
    }
    return out;
}

std::string sweep_summary_json(const SweepResult& result) {
    nlohmann::json doc;
    doc["format_version"] = 1;
    doc["kind"] = "wismc-sweep";
    nlohmann::json cells = nlohmann::json::array();
    for (const SweepCell& cell : result.cells) {
        nlohmann::json c;
        c["lambda"] = cell.lambda;
        if (cell.memory)
            c["m"] = *cell.memory;
        else
            c["m"] = nullptr;
        c["ok"] = cell.ok;
        if (cell.ok) {
            c["mse"] = cell.mse;
            c["mse_stddev"] = cell.mse_stddev;
        } else {
            c["error"] = cell.error;
        }
        cells.push_back(std::move(c));
    }
    doc["cells"] = std::move(cells);
    if (result.best) {
        const SweepCell& b = result.cells[*result.best];
        doc["best"] = {{"index", *result.best},
                       {"lambda", b.lambda},
                       {"m", b.memory ? nlohmann::json(*b.memory) : nlohmann::json(nullptr)},
                       {"mse", b.mse}};
    } else {
        doc["best"] = nullptr;
    }
    return doc.dump(2) + "\n";
}

// ---- comparison report ------------------------------------------------------

ComparisonReport compare_report(const std::vector<double>& returns, const WismcModel& model,
                                const ReportOptions& opt) {
    ComparisonReport rep;
    rep.sim_length = opt.sim_length ? *opt.sim_length : static_cast<Minute>(returns.size());

    rep.data_acf_raw = acf_raw(returns, opt.tau_max);
    rep.data_acf_sq = acf_squared(returns, opt.tau_max);

    SimConfig sim;
    sim.horizon = rep.sim_length;
    sim.seed = opt.seed;
    const std::vector<double> simulated = simulate_returns(model, sim, &rep.sim_stats);
    rep.sim_acf_raw = acf_raw(simulated, opt.tau_max);
    rep.sim_acf_sq = acf_squared(simulated, opt.tau_max);
    rep.mse_sq = mse_acf(rep.data_acf_sq, rep.sim_acf_sq);

    rep.data_fpt = fpt_distribution(returns, opt.rho, opt.max_wait, opt.threads);
    rep.sim_fpt = fpt_distribution(simulated, opt.rho, opt.max_wait, opt.threads);
    return rep;
}

std::string acf_csv(const AcfCurve& curve) {
    std::string out = "lag,acf\n";
    for (std::size_t k = 0; k < curve.lags.size(); ++k) {
        out += std::to_string(curve.lags[k]);
        out += ',';
        out += fmt_double(curve.values[k]);
        out += '\n';
    }
    return out;
}

std::string fpt_csv(const FptSample& fpt) {
    const std::int64_t starts = fpt.starts();
    std::string out = "tau,count,pdf,cdf\n";
    std::int64_t cum = 0;
    for (const auto& [tau, count] : fpt.histogram) {
        cum += count;
        out += std::to_string(tau);
        out += ',';
        out += std::to_string(count);
        out += ',';
        out += fmt_double(starts > 0 ? static_cast<double>(count) / static_cast<double>(starts)
                                     : 0.0);
        out += ',';
        out += fmt_double(starts > 0 ? static_cast<double>(cum) / static_cast<double>(starts)
                                     : 0.0);
        out += '\n';
    }
    return out;
}

namespace {

nlohmann::json fpt_summary(const FptSample& fpt) {
    nlohmann::json j;
    j["rho"] = fpt.rho;
    j["max_wait"] = fpt.max_wait;
    j["starts"] = fpt.starts();
    j["censored"] = fpt.censored;
    return j;
}

}  // namespace

void write_report(const ComparisonReport& report, const std::string& dir) {
    std::filesystem::create_directories(dir);
    auto path = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };

    write_file_atomic(path("acf_raw_data.csv"), acf_csv(report.data_acf_raw));
    write_file_atomic(path("acf_raw_sim.csv"), acf_csv(report.sim_acf_raw));
    write_file_atomic(path("acf_sq_data.csv"), acf_csv(report.data_acf_sq));
    write_file_atomic(path("acf_sq_sim.csv"), acf_csv(report.sim_acf_sq));
    write_file_atomic(path("fpt_data.csv"), fpt_csv(report.data_fpt));
    write_file_atomic(path("fpt_sim.csv"), fpt_csv(report.sim_fpt));

    nlohmann::json doc;
    doc["format_version"] = 1;
    doc["kind"] = "wismc-report";
    doc["mse_acf_squared"] = report.mse_sq;
    doc["fpt_data"] = fpt_summary(report.data_fpt);
    doc["fpt_sim"] = fpt_summary(report.sim_fpt);
    doc["sim"] = {{"length", report.sim_length},
                  {"transitions", report.sim_stats.transitions},
                  {"fallback_draws", report.sim_stats.fallback_draws}};
    write_file_atomic(path("summary.json"), doc.dump(2) + "\n");
}

}  // namespace wismc
