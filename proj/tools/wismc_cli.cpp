#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wismc/discretize.hpp"
#include "wismc/estimation.hpp"
#include "wismc/experiments.hpp"
#include "wismc/index.hpp"
#include "wismc/ingest.hpp"
#include "wismc/model.hpp"
#include "wismc/simulate.hpp"
#include "wismc/stats.hpp"
#include "wismc/util.hpp"

namespace {

using namespace wismc;

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

/// Reads the `return` column of a CSV (as written by `ingest` or `simulate`).
std::vector<double> read_returns_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open returns file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw EmptyInput(path);
    const auto header = split_fields(line);
    std::size_t col = header.size();
    for (std::size_t k = 0; k < header.size(); ++k)
        if (header[k] == "return") col = k;
    if (col == header.size())
        throw MalformedRow(1, "no 'return' column in " + path);
    std::vector<double> values;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size())
            throw MalformedRow(line_no, "expected " + std::to_string(header.size()) + " fields");
        try {
            values.push_back(std::stod(fields[col]));
        } catch (const std::exception&) {
            throw MalformedRow(line_no, "unparsable return '" + fields[col] + "'");
        }
    }
    if (values.empty()) throw EmptyInput(path);
    return values;
}

std::string returns_csv(const std::vector<double>& values) {
    std::string out = "t,return\n";
    for (std::size_t t = 0; t < values.size(); ++t) {
        out += std::to_string(t);
        out += ',';
        out += fmt_double(values[t]);
        out += '\n';
    }
    return out;
}

std::string paths_csv(const std::vector<std::vector<double>>& paths) {
    std::string out = "path,t,return\n";
    for (std::size_t p = 0; p < paths.size(); ++p)
        for (std::size_t t = 0; t < paths[p].size(); ++t) {
            out += std::to_string(p);
            out += ',';
            out += std::to_string(t);
            out += ',';
            out += fmt_double(paths[p][t]);
            out += '\n';
        }
    return out;
}

std::vector<std::optional<std::int64_t>> parse_memories(const std::vector<std::string>& tokens) {
    std::vector<std::optional<std::int64_t>> out;
    for (const std::string& tok : tokens) {
        if (tok == "unbounded" || tok == "inf") {
            out.push_back(std::nullopt);
        } else {
            try {
                out.push_back(std::stoll(tok));
            } catch (const std::exception&) {
                throw DataError("unparsable memory value '" + tok + "'");
            }
        }
    }
    return out;
}

void print_occupancy(const WismcModel& model, std::ostream& os) {
    const auto occ = model.occupancy();
    os << "cell occupancy (rows: states, columns: index levels 1.."
       << model.levels().count() << ")\n";
    for (int i = 0; i < model.states().size(); ++i) {
        os << "  state " << (i + 1) << ":";
        for (std::int64_t c : occ[static_cast<std::size_t>(i)]) os << ' ' << c;
        os << '\n';
    }
    os << "index level edges:";
    for (double e : model.levels().edges()) os << ' ' << fmt_double(e);
    os << '\n';
}

int run(int argc, char** argv) {
    CLI::App app{"Weighted-indexed semi-Markov chain models for high-frequency returns"};
    app.require_subcommand(1);
    int threads = default_thread_count();
    app.add_option("--threads", threads, "Worker threads (default: machine parallelism)")
        ->capture_default_str();

    // ---- ingest -------------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "Tick CSV -> per-minute return CSV");
    ingest->set_config("--config", "", "Key-value config file (flags win)");
    std::string ingest_ticks, ingest_out;
    std::int64_t ingest_step = 1;
    std::int64_t session_gap = 0;
    ingest->add_option("--ticks", ingest_ticks, "Input CSV: timestamp,price[,session]")
        ->required();
    ingest->add_option("--step", ingest_step, "Sampling step in minutes")->capture_default_str();
    ingest->add_option("--session-gap", session_gap,
                       "Start a new session when consecutive ticks are at least this many "
                       "minutes apart (0 = only the session column splits)")
        ->capture_default_str();
    ingest->add_option("--out", ingest_out, "Output returns CSV")->required();
    ingest->callback([&] {
        std::ifstream in(ingest_ticks);
        if (!in) throw DataError("cannot open ticks file: " + ingest_ticks);
        TickSeries ticks = parse_ticks(in);
        if (session_gap > 0) {
            std::vector<std::size_t> starts = ticks.session_starts;
            for (std::size_t k = 1; k < ticks.times.size(); ++k)
                if (ticks.times[k] - ticks.times[k - 1] >= session_gap * 60)
                    starts.push_back(k);
            std::sort(starts.begin(), starts.end());
            starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
            ticks.session_starts = std::move(starts);
        }
        const std::vector<double> values = ingest_returns(ticks, ingest_step * 60);
        if (values.empty()) throw EmptyInput("no complete sampling interval in " + ingest_ticks);
        write_file_atomic(ingest_out, returns_csv(values));
        std::cout << "wrote " << values.size() << " returns to " << ingest_out << "\n";
    });

    // ---- fit ----------------------------------------------------------------
    auto* fit_cmd = app.add_subcommand("fit", "Fit a model from a returns CSV");
    fit_cmd->set_config("--config", "", "Key-value config file (flags win)");
    std::string fit_returns, fit_out;
    int fit_states = 5, fit_levels = 5;
    double fit_lambda = 0.97;
    std::int64_t fit_memory = 0;
    double fit_initial_index = -1.0;
    std::int64_t fit_min_transitions = 1000;
    fit_cmd->add_option("--returns", fit_returns, "Input returns CSV")->required();
    fit_cmd->add_option("--states", fit_states, "Return states (odd)")->capture_default_str();
    fit_cmd->add_option("--levels", fit_levels, "Volatility index levels")->capture_default_str();
    fit_cmd->add_option("--lambda", fit_lambda, "Index weight decay in (0,1]")
        ->capture_default_str();
    fit_cmd->add_option("--memory", fit_memory, "Index memory in transitions (0 = unbounded)")
        ->capture_default_str();
    fit_cmd->add_option("--initial-index", fit_initial_index,
                        "U_0 (negative = squared representative return of the middle state)")
        ->capture_default_str();
    fit_cmd->add_option("--min-transitions", fit_min_transitions,
                        "Refuse to fit on fewer transitions")
        ->capture_default_str();
    fit_cmd->add_option("--out", fit_out, "Output model JSON")->required();
    fit_cmd->callback([&] {
        const std::vector<double> returns = read_returns_csv(fit_returns);
        const ReturnBins bins = fit_return_bins(returns, fit_states);
        const std::vector<State> labels = discretize_series(returns, bins.edges);
        IndexConfig cfg;
        cfg.lambda = fit_lambda;
        if (fit_memory > 0) cfg.memory = fit_memory;
        cfg.initial_index =
            fit_initial_index >= 0.0 ? fit_initial_index : default_initial_index(bins.space);
        FitOptions opt;
        opt.min_transitions = fit_min_transitions;
        WismcModel model = fit(labels, bins.space, cfg, fit_levels, opt);
        // carry the return-bin edges so simulate/report are self-contained
        std::vector<KernelCell> cells;
        for (int i = 1; i <= model.states().size(); ++i)
            for (int v = 1; v <= model.levels().count(); ++v)
                cells.push_back(model.cell(i, v));
        WismcModel with_edges(model.states(), model.levels(), model.index_config(),
                              std::move(cells), bins.edges);
        with_edges.save(fit_out);
        std::cout << "return-bin edges:";
        for (double e : bins.edges) std::cout << ' ' << fmt_double(e);
        std::cout << "\nrepresentative values:";
        for (double r : bins.space.reps()) std::cout << ' ' << fmt_double(r);
        std::cout << '\n';
        print_occupancy(with_edges, std::cout);
        std::cout << "wrote model to " << fit_out << "\n";
    });

    // ---- simulate -------------------------------------------------------------
    auto* sim_cmd = app.add_subcommand("simulate", "Simulate per-minute returns from a model");
    sim_cmd->set_config("--config", "", "Key-value config file (flags win)");
    std::string sim_model, sim_out;
    std::int64_t sim_horizon = 0;
    std::uint64_t sim_seed = 0;
    int sim_paths = 1;
    std::int64_t sim_burn_in = 0;
    int sim_initial_state = 0;
    sim_cmd->add_option("--model", sim_model, "Model JSON")->required();
    sim_cmd->add_option("--horizon", sim_horizon, "Minutes per path")->required();
    sim_cmd->add_option("--seed", sim_seed, "Master seed")->capture_default_str();
    sim_cmd->add_option("--paths", sim_paths, "Independent paths")->capture_default_str();
    sim_cmd->add_option("--burn-in", sim_burn_in, "Minutes discarded from each path head")
        ->capture_default_str();
    sim_cmd->add_option("--initial-state", sim_initial_state, "Start state (0 = middle)")
        ->capture_default_str();
    sim_cmd->add_option("--out", sim_out, "Output CSV: path,t,return")->required();
    sim_cmd->callback([&] {
        const WismcModel model = WismcModel::load(sim_model);
        SimConfig cfg;
        cfg.horizon = sim_horizon;
        cfg.seed = sim_seed;
        cfg.n_paths = sim_paths;
        cfg.burn_in = sim_burn_in;
        cfg.initial_state = sim_initial_state;
        const auto paths = simulate_returns_many(model, cfg, threads);
        write_file_atomic(sim_out, paths_csv(paths));
        std::cout << "wrote " << paths.size() << " path(s) of " << sim_horizon << " minutes to "
                  << sim_out << "\n";
    });

    // ---- analyze ---------------------------------------------------------------
    auto* an_cmd = app.add_subcommand("analyze", "Stylized-fact statistics of a returns CSV");
    an_cmd->set_config("--config", "", "Key-value config file (flags win)");
    std::string an_returns, an_acf_raw, an_acf_sq, an_fpt;
    int an_tau_max = 100;
    double an_rho = 1.005;
    std::int64_t an_max_wait = 1000;
    an_cmd->add_option("--returns", an_returns, "Input returns CSV")->required();
    an_cmd->add_option("--tau-max", an_tau_max, "Largest autocorrelation lag (minutes)")
        ->capture_default_str();
    an_cmd->add_option("--rho", an_rho, "First-passage threshold")->capture_default_str();
    an_cmd->add_option("--max-wait", an_max_wait, "First-passage censoring horizon (minutes)")
        ->capture_default_str();
    an_cmd->add_option("--out-acf-raw", an_acf_raw, "Output CSV lag,acf of raw returns");
    an_cmd->add_option("--out-acf-sq", an_acf_sq, "Output CSV lag,acf of squared returns");
    an_cmd->add_option("--out-fpt", an_fpt, "Output CSV tau,count,pdf,cdf");
    an_cmd->callback([&] {
        const std::vector<double> returns = read_returns_csv(an_returns);
        if (an_acf_raw.empty() && an_acf_sq.empty() && an_fpt.empty())
            throw CLI::ValidationError("nothing to do: pass at least one --out-* option");
        if (!an_acf_raw.empty())
            write_file_atomic(an_acf_raw, acf_csv(acf_raw(returns, an_tau_max)));
        if (!an_acf_sq.empty())
            write_file_atomic(an_acf_sq, acf_csv(acf_squared(returns, an_tau_max)));
        if (!an_fpt.empty()) {
            const FptSample fpt = fpt_distribution(returns, an_rho, an_max_wait, threads);
            write_file_atomic(an_fpt, fpt_csv(fpt));
            std::cout << "fpt: " << fpt.starts() << " starts, " << fpt.censored << " censored\n";
        }
    });

    // ---- sweep ----------------------------------------------------------------
    auto* sw_cmd = app.add_subcommand("sweep", "Grid-search lambda and memory by ACF MSE");
    sw_cmd->set_config("--config", "", "Key-value config file (flags win)");
    std::string sw_returns, sw_out, sw_summary;
    std::vector<double> sw_lambdas;
    std::vector<std::string> sw_memories;
    int sw_states = 5, sw_levels = 5, sw_tau_max = 100, sw_replicates = 1;
    std::uint64_t sw_seed = 0;
    std::int64_t sw_min_transitions = 1000;
    std::int64_t sw_sim_length = 0;
    sw_cmd->add_option("--returns", sw_returns, "Input returns CSV")->required();
    sw_cmd->add_option("--lambdas", sw_lambdas,
                       "Lambda grid (default 0.90 0.92 ... 1.00)")
        ->delimiter(',');
    sw_cmd->add_option("--memories", sw_memories,
                       "Memory grid; integers or 'unbounded' (default 10,50,100,500,unbounded)")
        ->delimiter(',');
    sw_cmd->add_option("--states", sw_states, "Return states (odd)")->capture_default_str();
    sw_cmd->add_option("--levels", sw_levels, "Index levels")->capture_default_str();
    sw_cmd->add_option("--tau-max", sw_tau_max, "Largest lag (minutes)")->capture_default_str();
    sw_cmd->add_option("--seed", sw_seed, "Master seed")->capture_default_str();
    sw_cmd->add_option("--replicates", sw_replicates, "Simulations averaged per cell")
        ->capture_default_str();
    sw_cmd->add_option("--min-transitions", sw_min_transitions,
                       "Refuse cells fitting on fewer transitions")
        ->capture_default_str();
    sw_cmd->add_option("--sim-length", sw_sim_length,
                       "Simulated minutes per cell (0 = same as the data)")
        ->capture_default_str();
    sw_cmd->add_option("--out", sw_out, "Output CSV lambda,m,mse,mse_stddev,status")->required();
    sw_cmd->add_option("--out-summary", sw_summary, "Output JSON summary with the argmin");
    sw_cmd->callback([&] {
        const std::vector<double> returns = read_returns_csv(sw_returns);
        SweepOptions opt;
        opt.lambdas = sw_lambdas;
        opt.memories = parse_memories(sw_memories);
        opt.states = sw_states;
        opt.levels = sw_levels;
        opt.tau_max = sw_tau_max;
        opt.seed = sw_seed;
        opt.replicates = sw_replicates;
        opt.threads = threads;
        opt.min_transitions = sw_min_transitions;
        if (sw_sim_length > 0) opt.sim_length = sw_sim_length;
        const SweepResult result = sweep(returns, opt);
        write_file_atomic(sw_out, sweep_csv(result));
        if (!sw_summary.empty()) write_file_atomic(sw_summary, sweep_summary_json(result));
        if (result.best) {
            const SweepCell& b = result.cells[*result.best];
            std::cout << "best: lambda " << fmt_double(b.lambda) << ", m "
                      << (b.memory ? std::to_string(*b.memory) : std::string("unbounded"))
                      << ", mse " << fmt_double(b.mse) << "\n";
        } else {
            std::cout << "no cell succeeded\n";
        }
    });

    // ---- report ---------------------------------------------------------------
    auto* rp_cmd = app.add_subcommand("report", "Data-vs-model stylized-fact comparison bundle");
    rp_cmd->set_config("--config", "", "Key-value config file (flags win)");
    std::string rp_returns, rp_model, rp_dir;
    int rp_tau_max = 100;
    double rp_rho = 1.005;
    std::int64_t rp_max_wait = 1000;
    std::uint64_t rp_seed = 0;
    std::int64_t rp_sim_length = 0;
    rp_cmd->add_option("--returns", rp_returns, "Input returns CSV")->required();
    rp_cmd->add_option("--model", rp_model, "Model JSON")->required();
    rp_cmd->add_option("--tau-max", rp_tau_max, "Largest lag (minutes)")->capture_default_str();
    rp_cmd->add_option("--rho", rp_rho, "First-passage threshold")->capture_default_str();
    rp_cmd->add_option("--max-wait", rp_max_wait, "First-passage censoring horizon (minutes)")
        ->capture_default_str();
    rp_cmd->add_option("--seed", rp_seed, "Simulation seed")->capture_default_str();
    rp_cmd->add_option("--sim-length", rp_sim_length,
                       "Simulated minutes (0 = same as the data)")
        ->capture_default_str();
    rp_cmd->add_option("--out-dir", rp_dir, "Output directory")->required();
    rp_cmd->callback([&] {
        const std::vector<double> returns = read_returns_csv(rp_returns);
        const WismcModel model = WismcModel::load(rp_model);
        ReportOptions opt;
        opt.tau_max = rp_tau_max;
        opt.rho = rp_rho;
        opt.max_wait = rp_max_wait;
        opt.seed = rp_seed;
        if (rp_sim_length > 0) opt.sim_length = rp_sim_length;
        opt.threads = threads;
        const ComparisonReport report = compare_report(returns, model, opt);
        write_report(report, rp_dir);
        std::cout << "mse(acf of squared returns): " << fmt_double(report.mse_sq) << "\n"
                  << "wrote report bundle to " << rp_dir << "\n";
    });

    // ---- synth ----------------------------------------------------------------
    auto* sy_cmd = app.add_subcommand("synth", "Generate a synthetic ground-truth model");
    sy_cmd->set_config("--config", "", "Key-value config file (flags win)");
    std::string sy_out;
    SynthSpec sy_spec;
    std::int64_t sy_memory = 0;
    sy_cmd->add_option("--states", sy_spec.states, "Return states (odd)")->capture_default_str();
    sy_cmd->add_option("--levels", sy_spec.levels, "Index levels")->capture_default_str();
    sy_cmd->add_option("--lambda", sy_spec.lambda, "Index weight decay in (0,1]")
        ->capture_default_str();
    sy_cmd->add_option("--memory", sy_memory, "Index memory in transitions (0 = unbounded)")
        ->capture_default_str();
    sy_cmd->add_option("--dependence", sy_spec.dependence,
                       "Level-dependence strength in [0,1]; 0 = plain semi-Markov")
        ->capture_default_str();
    sy_cmd->add_option("--kernel-seed", sy_spec.kernel_seed, "Kernel randomization seed")
        ->capture_default_str();
    sy_cmd->add_option("--base-return", sy_spec.base_return, "Innermost return magnitude")
        ->capture_default_str();
    sy_cmd->add_option("--magnitude-ratio", sy_spec.magnitude_ratio,
                       "Ratio between successive return magnitudes")
        ->capture_default_str();
    sy_cmd->add_option("--quiet-hazard", sy_spec.quiet_hazard,
                       "Middle-state exit rate at the lowest level")
        ->capture_default_str();
    sy_cmd->add_option("--busy-hazard", sy_spec.busy_hazard,
                       "Middle-state exit rate at the highest level")
        ->capture_default_str();
    sy_cmd->add_option("--out", sy_out, "Output model JSON")->required();
    sy_cmd->callback([&] {
        if (sy_memory > 0) sy_spec.memory = sy_memory;
        const WismcModel model = make_synthetic_truth(sy_spec);
        model.save(sy_out);
        print_occupancy(model, std::cout);
        std::cout << "wrote model to " << sy_out << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const wismc::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const wismc::ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
