// Command-line front end: runs the classical and quantum engines and the
// pulse-schedule strategies, writing CSV/JSON/Markdown artifacts.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "latsq/classical.hpp"
#include "latsq/numeric.hpp"
#include "latsq/quantum.hpp"
#include "latsq/strategies.hpp"
#include "latsq/trace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace latsq;

namespace {

constexpr const char* kToolVersion = "0.1.0";

struct PulseSource {
    std::string source = "kick";  // kick | file | optimize
    int k = 1;                    // accumulative kick count
    int n = 2;                    // optimized kick count
    std::string file;             // explicit sequence file
};

struct RunConfig {
    std::string command;
    std::string engine = "classical";
    double sigma = 0.0;
    double P = 1.0;
    PulseSource pulse;
    double tmax = 6.0;
    int samples = 121;
    std::vector<double> times;
    std::uint64_t mc_n = 1000000;
    std::uint64_t seed = 12345;
    long budget = 200000;
    int grid = 512;
    bool revival_shift = false;
    std::vector<double> sweep_P;
    std::string out = "latsq_out";
    std::string format = "csv";
    int threads = 0;
};

json to_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["engine"] = c.engine;
    j["sigma"] = c.sigma;
    j["P"] = c.P;
    j["pulse"] = {{"source", c.pulse.source},
                  {"k", c.pulse.k},
                  {"n", c.pulse.n},
                  {"file", c.pulse.file}};
    j["tmax"] = c.tmax;
    j["samples"] = c.samples;
    j["times"] = c.times;
    j["mc_n"] = c.mc_n;
    j["seed"] = c.seed;
    j["budget"] = c.budget;
    j["grid"] = c.grid;
    j["revival_shift"] = c.revival_shift;
    j["sweep_P"] = c.sweep_P;
    j["out"] = c.out;
    j["format"] = c.format;
    j["threads"] = c.threads;
    return j;
}

void from_json_into(const json& j, RunConfig& c) {
    if (j.contains("engine")) c.engine = j["engine"].get<std::string>();
    if (j.contains("sigma")) c.sigma = j["sigma"].get<double>();
    if (j.contains("P")) c.P = j["P"].get<double>();
    if (j.contains("pulse")) {
        const auto& p = j["pulse"];
        if (p.contains("source")) c.pulse.source = p["source"].get<std::string>();
        if (p.contains("k")) c.pulse.k = p["k"].get<int>();
        if (p.contains("n")) c.pulse.n = p["n"].get<int>();
        if (p.contains("file")) c.pulse.file = p["file"].get<std::string>();
    }
    if (j.contains("tmax")) c.tmax = j["tmax"].get<double>();
    if (j.contains("samples")) c.samples = j["samples"].get<int>();
    if (j.contains("times")) c.times = j["times"].get<std::vector<double>>();
    if (j.contains("mc_n")) c.mc_n = j["mc_n"].get<std::uint64_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("budget")) c.budget = j["budget"].get<long>();
    if (j.contains("grid")) c.grid = j["grid"].get<int>();
    if (j.contains("revival_shift")) c.revival_shift = j["revival_shift"].get<bool>();
    if (j.contains("sweep_P")) c.sweep_P = j["sweep_P"].get<std::vector<double>>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("format")) c.format = j["format"].get<std::string>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
}

// Pending output files: everything is rendered in memory first and written
// together, so a failing run leaves no partial artifacts.
class OutputSet {
public:
    void add(std::string path, std::string content) {
        files_.emplace_back(std::move(path), std::move(content));
    }
    std::vector<std::string> paths() const {
        std::vector<std::string> p;
        for (const auto& [path, content] : files_) p.push_back(path);
        return p;
    }
    void commit() const {
        for (const auto& [path, content] : files_) {
            const fs::path target(path);
            const fs::path tmp = target.string() + ".tmp";
            {
                std::ofstream f(tmp, std::ios::binary);
                if (!f) throw std::runtime_error("cannot write " + tmp.string());
                f << content;
            }
            fs::rename(tmp, target);
        }
    }

private:
    std::vector<std::pair<std::string, std::string>> files_;
};

json sidecar(const RunConfig& c) {
    json j;
    j["tool"] = "latsq";
    j["version"] = kToolVersion;
    j["command"] = c.command;
    j["engine"] = c.engine;
    j["config"] = to_json(c);
    j["outputs"] = json::array();
    return j;
}

PulseSequence load_pulse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("pulse file not found: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return PulseSequence::from_json(ss.str());
}

// Resolve the pulse source into a concrete sequence. Scheduling-derived
// sources run the corresponding strategy on the configured engine.
PulseSequence resolve_sequence(const RunConfig& c) {
    if (c.pulse.source == "file") return load_pulse_file(c.pulse.file);
    if (c.pulse.source == "kick") {
        if (c.pulse.k == 1) return single_kick(c.P);  // nothing to schedule
        const auto engine = make_engine(c.engine, c.sigma, c.P * c.pulse.k);
        AccumulativeOptions opts;
        opts.revival_shift = c.revival_shift;
        return accumulative_schedule(*engine, c.P, c.pulse.k, opts).sequence;
    }
    if (c.pulse.source == "optimize") {
        const auto engine = make_engine(c.engine, c.sigma, c.P * c.pulse.n);
        return optimize_fixed_n(*engine, c.P, c.pulse.n, c.budget, c.seed).sequence;
    }
    throw std::runtime_error("unknown pulse source: " + c.pulse.source);
}

std::vector<double> sample_grid(const RunConfig& c) {
    if (c.samples < 2) throw std::runtime_error("need at least 2 samples");
    if (c.tmax <= 0.0) throw std::runtime_error("tmax must be > 0");
    return linspace(0.0, c.tmax, static_cast<std::size_t>(c.samples));
}

json trace_to_json(const LocalizationTrace& t) {
    json samples = json::array();
    for (const auto& s : t.samples()) samples.push_back({{"tau", s.tau}, {"L", s.L}});
    return {{"samples", samples}};
}

int cmd_trace(const RunConfig& c) {
    const PulseSequence seq = resolve_sequence(c);
    const auto times = sample_grid(c);
    const LocalizationTrace trace = c.engine == "classical"
                                        ? run_classical(seq, c.sigma, c.mc_n, times, c.seed)
                                        : run_quantum(seq, c.sigma, times);

    OutputSet out;
    json meta = sidecar(c);
    meta["pulse_sequence"] = json::parse(seq.to_json());
    if (c.format == "csv")
        out.add(c.out + ".csv", trace.to_csv());
    else
        meta["data"] = trace_to_json(trace);
    meta["outputs"] = out.paths();
    out.add(c.out + ".json", meta.dump(2) + "\n");
    out.commit();
    return 0;
}

// True when the sequence is exactly one unit-strength kick at tau = 0, the
// case covered by the analytic single-kick density.
bool is_single_unit_kick(const PulseSequence& seq) {
    const PulseSequence m = seq.merged();
    return m.size() == 1 && m.kicks()[0].tau == 0.0 && m.kicks()[0].P == 1.0;
}

QuantumState propagate_quantum_to(const PulseSequence& merged, int n0, double nu0, double t) {
    QuantumState s = plane_wave(n0, nu0, required_n_max(n0, merged.total_strength()));
    double now = 0.0;
    for (const auto& k : merged.kicks()) {
        if (k.tau > t) break;
        free_evolve_in_place(s, k.tau - now);
        now = k.tau;
        for (;;) {
            try {
                kick_in_place(s, k.P);
                break;
            } catch (const BasisTooSmall& e) {
                if (e.suggested_n_max > 16384) throw;
                s = padded(s, e.suggested_n_max);
            }
        }
    }
    free_evolve_in_place(s, t - now);
    return s;
}

int cmd_density(const RunConfig& c) {
    if (c.times.empty()) throw std::runtime_error("density needs --times");
    const PulseSequence seq = resolve_sequence(c);
    const PulseSequence merged = seq.merged();
    const auto grid = periodic_grid(static_cast<std::size_t>(c.grid));

    OutputSet out;
    json meta = sidecar(c);
    meta["pulse_sequence"] = json::parse(seq.to_json());
    json data = json::array();

    for (std::size_t ti = 0; ti < c.times.size(); ++ti) {
        const double t = c.times[ti];
        DensityProfile d;
        if (c.engine == "quantum") {
            d = spatial_density_thermal(c.sigma, grid, [&](int n0, double nu0) {
                return propagate_quantum_to(merged, n0, nu0, t);
            });
        } else if (is_single_unit_kick(seq)) {
            d = spatial_density(t, c.sigma, grid);
        } else {
            const std::vector<double> snap_time{t};
            const auto snaps = classical_snapshots(seq, c.sigma, c.mc_n, snap_time, c.seed);
            d = histogram_density(snaps[0], static_cast<std::size_t>(c.grid));
        }
        if (c.format == "csv")
            out.add(c.out + "_t" + std::to_string(ti) + ".csv", d.to_csv());
        else
            data.push_back({{"tau", t}, {"x", d.grid}, {"f", d.f}});
    }
    if (c.format != "csv") meta["data"] = data;
    meta["outputs"] = out.paths();
    out.add(c.out + ".json", meta.dump(2) + "\n");
    out.commit();
    return 0;
}

int cmd_phase_space(const RunConfig& c) {
    if (c.engine != "classical") throw std::runtime_error("phase-space is classical only");
    if (c.times.empty()) throw std::runtime_error("phase-space needs --times");
    const PulseSequence seq = resolve_sequence(c);
    const auto snaps = classical_snapshots(seq, c.sigma, c.mc_n, c.times, c.seed);

    OutputSet out;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        std::string csv = "x,v\r\n";
        for (std::size_t p = 0; p < snaps[i].size(); ++p) {
            csv += format_double(snaps[i].x[p]);
            csv += ',';
            csv += format_double(snaps[i].v[p]);
            csv += "\r\n";
        }
        out.add(c.out + "_t" + std::to_string(i) + ".csv", std::move(csv));
    }
    json meta = sidecar(c);
    meta["pulse_sequence"] = json::parse(seq.to_json());
    meta["outputs"] = out.paths();
    out.add(c.out + ".json", meta.dump(2) + "\n");
    out.commit();
    return 0;
}

int cmd_accumulate(const RunConfig& c) {
    const auto engine = make_engine(c.engine, c.sigma, c.P * c.pulse.k);
    AccumulativeOptions opts;
    opts.revival_shift = c.revival_shift;
    const auto r = accumulative_schedule(*engine, c.P, c.pulse.k, opts);

    OutputSet out;
    json meta = sidecar(c);
    meta["result"] = json::parse(r.to_json());
    out.add(c.out + ".json", meta.dump(2) + "\n");
    out.commit();
    return 0;
}

int cmd_optimize(const RunConfig& c) {
    OutputSet out;
    json meta = sidecar(c);
    if (!c.sweep_P.empty()) {
        if (c.engine != "quantum")
            throw std::runtime_error("--sweep-P is the quantum two-kick sweep");
        const auto results = optimize_two_kick_quantum(c.sigma, c.sweep_P, c.budget, c.seed);
        std::string csv = "P,dtau1,L_min,t_min\r\n";
        json arr = json::array();
        for (std::size_t i = 0; i < results.size(); ++i) {
            const auto& r = results[i];
            csv += format_double(c.sweep_P[i]);
            csv += ',';
            csv += format_double(r.sequence.kicks()[1].tau);
            csv += ',';
            csv += format_double(r.L_min);
            csv += ',';
            csv += format_double(r.t_min);
            csv += "\r\n";
            arr.push_back(json::parse(r.to_json()));
        }
        out.add(c.out + ".csv", std::move(csv));
        meta["result"] = arr;
    } else {
        const auto engine = make_engine(c.engine, c.sigma, c.P * c.pulse.n);
        const auto r = optimize_fixed_n(*engine, c.P, c.pulse.n, c.budget, c.seed);
        meta["result"] = json::parse(r.to_json());
    }
    meta["outputs"] = out.paths();
    out.add(c.out + ".json", meta.dump(2) + "\n");
    out.commit();
    return 0;
}

struct BenchmarkRow {
    std::string quantity;
    double reference;
    double tolerance;
    double measured;
    bool pass;
};

int cmd_benchmark(const RunConfig& c) {
    // reference values for cold accumulative and optimal squeezing
    const std::vector<double> ref_acc_L{0.33, 0.26, 0.21, 0.18};      // 2..5 kicks
    const std::vector<double> ref_acc_delay{1.84, 0.59, 0.42, 0.29};  // wait after kick 1..4
    const std::vector<double> ref_opt_L{0.31, 0.20, 0.11, 0.07};      // 2..5 kicks
    const std::vector<std::vector<double>> ref_opt_delays{
        {1.41}, {2.73, 0.0}, {3.02, 1.35, 0.0}, {3.09, 1.47, 0.12, 0.03}};

    std::vector<BenchmarkRow> rows;
    const auto add_row = [&rows](const std::string& q, double ref, double tol, double got) {
        rows.push_back(BenchmarkRow{q, ref, tol, got, std::abs(got - ref) <= tol});
    };

    ClassicalScheduleEngine engine(0.0);
    const auto acc = accumulative_schedule(engine, 1.0, 5);
    const auto acc_delays = acc.delays();
    for (int k = 2; k <= 5; ++k)
        add_row("L_acc(" + std::to_string(k) + ")", ref_acc_L[static_cast<std::size_t>(k - 2)],
                0.01, acc.per_kick_minima[static_cast<std::size_t>(k - 1)]);
    for (int i = 0; i < 4; ++i)
        add_row("acc_delay_" + std::to_string(i + 1), ref_acc_delay[static_cast<std::size_t>(i)],
                0.02, acc_delays[static_cast<std::size_t>(i)]);

    std::vector<json> opt_results;
    for (int n = 2; n <= 5; ++n) {
        const auto r = optimize_fixed_n(engine, 1.0, n, c.budget, c.seed);
        opt_results.push_back(json::parse(r.to_json()));
        add_row("L_opt(" + std::to_string(n) + ")", ref_opt_L[static_cast<std::size_t>(n - 2)],
                0.01, r.L_min);
        const auto d = r.delays();
        const auto& ref = ref_opt_delays[static_cast<std::size_t>(n - 2)];
        for (std::size_t i = 0; i < ref.size(); ++i) {
            add_row("opt" + std::to_string(n) + "_delay_" + std::to_string(i + 1), ref[i], 0.03,
                    d[i]);
            if (ref[i] == 0.0 && d[i] != 0.0)
                rows.back().pass = false;  // zeros must land exactly on the boundary
        }
    }

    bool all_pass = true;
    std::string md = "| quantity | reference | tolerance | measured | verdict |\n";
    md += "|---|---|---|---|---|\n";
    json jrows = json::array();
    for (const auto& r : rows) {
        all_pass = all_pass && r.pass;
        char buf[160];
        std::snprintf(buf, sizeof(buf), "| %s | %.4g | %.3g | %.6g | %s |\n", r.quantity.c_str(),
                      r.reference, r.tolerance, r.measured, r.pass ? "PASS" : "FAIL");
        md += buf;
        jrows.push_back({{"quantity", r.quantity},
                         {"reference", r.reference},
                         {"tolerance", r.tolerance},
                         {"measured", r.measured},
                         {"pass", r.pass}});
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.quantity << " measured " << r.measured
                  << " reference " << r.reference << " +- " << r.tolerance << "\n";
    }

    OutputSet out;
    out.add(c.out + ".md", md);
    json meta = sidecar(c);
    meta["rows"] = jrows;
    meta["optimal_schedules"] = opt_results;
    meta["accumulative_schedule"] = json::parse(acc.to_json());
    meta["all_pass"] = all_pass;
    meta["outputs"] = out.paths();
    out.add(c.out + ".json", meta.dump(2) + "\n");
    out.commit();
    std::cout << (all_pass ? "benchmark: all rows PASS\n" : "benchmark: some rows FAIL\n");
    return all_pass ? 0 : 1;
}

void validate(const RunConfig& c) {
    if (c.engine != "classical" && c.engine != "quantum")
        throw std::runtime_error("engine must be classical or quantum");
    if (c.sigma < 0.0) throw std::runtime_error("sigma must be >= 0");
    if (c.P < 0.0) throw std::runtime_error("P must be >= 0");
    if (c.format != "csv" && c.format != "json")
        throw std::runtime_error("format must be csv or json");
    if (c.pulse.source == "file") load_pulse_file(c.pulse.file);  // must parse up front
    if (c.pulse.source == "kick" && c.pulse.k < 1) throw std::runtime_error("--kick needs k >= 1");
    if (c.pulse.source == "optimize" && c.pulse.n < 1)
        throw std::runtime_error("--optimize needs n >= 1");
    if (c.grid < 8) throw std::runtime_error("--grid too small");
    if (c.out.empty()) throw std::runtime_error("--out must not be empty");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pulsed-optical-lattice atom squeezing toolkit"};
    app.set_version_flag("--version", kToolVersion);

    RunConfig cfg;
    std::string config_path;
    bool flag_kick = false, flag_optimize = false, flag_pulse_file = false;
    int kick_k = 1, optimize_n = 2;
    std::string pulse_file;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config or sidecar to load first");
        sub->add_option("--engine", cfg.engine, "classical | quantum");
        sub->add_option("--sigma", cfg.sigma, "dimensionless thermal width");
        sub->add_option("--P", cfg.P, "kick strength");
        sub->add_option("--seed", cfg.seed, "RNG seed");
        sub->add_option("--n", cfg.mc_n, "Monte Carlo ensemble size");
        sub->add_option("--budget", cfg.budget, "optimizer evaluation budget");
        sub->add_option("--out", cfg.out, "output path stem");
        sub->add_option("--format", cfg.format, "csv | json");
        sub->add_option("--threads", cfg.threads, "max worker threads (0 = all)");
        sub->add_option("--grid", cfg.grid, "spatial grid points");
        sub->add_flag("--revival-shift", cfg.revival_shift,
                      "insert a revival period between accumulative kicks (quantum)");
        auto* k = sub->add_option("--kick", kick_k, "accumulative schedule with k kicks");
        auto* o = sub->add_option("--optimize", optimize_n, "optimized schedule with n kicks");
        auto* f = sub->add_option("--pulse-file", pulse_file, "explicit kick sequence (JSON)");
        k->each([&flag_kick](const std::string&) { flag_kick = true; });
        o->each([&flag_optimize](const std::string&) { flag_optimize = true; });
        f->each([&flag_pulse_file](const std::string&) { flag_pulse_file = true; });
    };

    auto* trace = app.add_subcommand("trace", "localization factor vs time");
    add_common(trace);
    trace->add_option("--tmax", cfg.tmax, "trace end time");
    trace->add_option("--samples", cfg.samples, "number of sample times");

    auto* density = app.add_subcommand("density", "spatial density profiles");
    add_common(density);
    density->add_option("--times", cfg.times, "evaluation times")->delimiter(',');

    auto* phase = app.add_subcommand("phase-space", "ensemble snapshots (x, v)");
    add_common(phase);
    phase->add_option("--times", cfg.times, "snapshot times")->delimiter(',');

    auto* accumulate = app.add_subcommand("accumulate", "greedy accumulative schedule");
    add_common(accumulate);

    auto* optimize = app.add_subcommand("optimize", "fixed-kick-count optimal schedule");
    add_common(optimize);
    optimize->add_option("--sweep-P", cfg.sweep_P, "two-kick sweep over kick strengths")
        ->delimiter(',');

    auto* benchmark = app.add_subcommand("benchmark", "reproduce the reference tables");
    add_common(benchmark);

    app.require_subcommand(1);
    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* sub = app.get_subcommands().front();
        cfg.command = sub->get_name();

        // config file first, explicit command-line flags stay on top
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw std::runtime_error("config not found: " + config_path);
            json j = json::parse(f);
            if (j.contains("config")) j = j["config"];  // accept a sidecar
            RunConfig merged;
            merged.command = cfg.command;
            from_json_into(j, merged);
            const RunConfig parsed = cfg;
            cfg = merged;
            for (const auto* opt : sub->get_options()) {
                if (opt->count() == 0) continue;
                const std::string name = opt->get_name();
                if (name == "--engine") cfg.engine = parsed.engine;
                else if (name == "--sigma") cfg.sigma = parsed.sigma;
                else if (name == "--P") cfg.P = parsed.P;
                else if (name == "--seed") cfg.seed = parsed.seed;
                else if (name == "--n") cfg.mc_n = parsed.mc_n;
                else if (name == "--budget") cfg.budget = parsed.budget;
                else if (name == "--out") cfg.out = parsed.out;
                else if (name == "--format") cfg.format = parsed.format;
                else if (name == "--threads") cfg.threads = parsed.threads;
                else if (name == "--grid") cfg.grid = parsed.grid;
                else if (name == "--tmax") cfg.tmax = parsed.tmax;
                else if (name == "--samples") cfg.samples = parsed.samples;
                else if (name == "--times") cfg.times = parsed.times;
                else if (name == "--sweep-P") cfg.sweep_P = parsed.sweep_P;
                else if (name == "--revival-shift") cfg.revival_shift = parsed.revival_shift;
            }
        }

        // pulse source flags override whatever the config said
        const int source_flags = int(flag_kick) + int(flag_optimize) + int(flag_pulse_file);
        if (source_flags > 1) throw std::runtime_error("specify exactly one pulse source");
        if (flag_kick) cfg.pulse = PulseSource{"kick", kick_k, 2, ""};
        if (flag_optimize) cfg.pulse = PulseSource{"optimize", 1, optimize_n, ""};
        if (flag_pulse_file) cfg.pulse = PulseSource{"file", 1, 2, pulse_file};

        if (cfg.threads == 0) {
            if (const char* env = std::getenv("LATTICE_SQUEEZE_THREADS"))
                cfg.threads = std::atoi(env);
        }
        set_max_threads(cfg.threads);

        validate(cfg);

        if (cfg.command == "trace") return cmd_trace(cfg);
        if (cfg.command == "density") return cmd_density(cfg);
        if (cfg.command == "phase-space") return cmd_phase_space(cfg);
        if (cfg.command == "accumulate") return cmd_accumulate(cfg);
        if (cfg.command == "optimize") return cmd_optimize(cfg);
        if (cfg.command == "benchmark") return cmd_benchmark(cfg);
        throw std::runtime_error("unknown command");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
