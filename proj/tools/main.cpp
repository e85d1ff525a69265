// magicfwht command-line front end.
//
// Exit codes: 0 success, 2 invalid input, 3 resource guard, 4 internal
// inconsistency. Every file-producing run writes a .manifest.json with the
// resolved parameters; `replay` re-executes a manifest and must reproduce
// the data files byte-for-byte (worker count may differ freely).

#include "magicfwht/dynamics.hpp"
#include "magicfwht/errors.hpp"
#include "magicfwht/pauli.hpp"
#include "magicfwht/reduction.hpp"
#include "magicfwht/sre.hpp"
#include "magicfwht/states.hpp"
#include "magicfwht/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace mfwht;

// --workers flag beats the MAGICFWHT_WORKERS environment variable beats the
// detected core count.
int cli_workers(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("MAGICFWHT_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw InvalidInputError("MAGICFWHT_WORKERS must be a positive integer, got '" +
                                    std::string(env) + "'");
        return static_cast<int>(v);
    }
    return resolve_workers(0);
}

// Refuse runs whose working set clearly cannot fit: the engine touches about
// three 2^N-amplitude buffers (state, per-worker scratch, partials).
void memory_guard(int n_qubits, bool force) {
    const std::uint64_t mem = detected_memory_bytes();
    if (mem == 0 || force) return;
    const std::uint64_t per_buffer = (std::uint64_t{1} << n_qubits) * 16;
    const std::uint64_t needed = 3 * per_buffer;
    if (needed > mem * 3 / 4)
        throw ResourceError("N = " + std::to_string(n_qubits) + " needs " +
                            std::to_string(per_buffer) +
                            " bytes per buffer per worker (2^N * 16); ~3 such buffers = " +
                            std::to_string(needed) + " bytes exceed 75% of the detected " +
                            std::to_string(mem) + " bytes. Pass --force to insist.");
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// "trace.csv" + ".replay" -> "trace.replay.csv" (keeps the format-selecting
// extension last).
std::filesystem::path suffixed(const std::filesystem::path& p, const std::string& suffix) {
    if (suffix.empty()) return p;
    std::filesystem::path q = p;
    const std::string ext = q.extension().string();
    q.replace_extension();
    return q.concat(suffix).concat(ext);
}

void write_manifest(const std::filesystem::path& primary_output, const std::string& command,
                    const json& parameters, const std::vector<std::string>& outputs,
                    double wall_seconds, int workers) {
    json m{{"schema", "magicfwht.manifest.v1"},
           {"version", std::string(kVersion)},
           {"command", command},
           {"parameters", parameters},
           {"outputs", outputs},
           {"wall_seconds", wall_seconds},
           {"workers", workers}};
    const auto path = primary_output.string() + ".manifest.json";
    std::ofstream out(path);
    if (!out) throw InvalidInputError("cannot open " + path + " for writing");
    out << m.dump(2) << '\n';
    if (!out) throw InvalidInputError("write to " + path + " failed");
}

// ---- state sources shared by compute/oracle ------------------------------

struct SourceFlags {
    std::string file;
    std::int64_t basis = -1;
    bool haar = false, neel = false, all_up = false, random_product = false, tstate = false;
    int n = 0;
    std::uint64_t seed = 0, stream = 0;
    bool sphere_uniform = false;
};

json source_to_json(const SourceFlags& s) {
    std::string kind;
    if (!s.file.empty()) kind = "file";
    else if (s.basis >= 0) kind = "basis";
    else if (s.haar) kind = "haar";
    else if (s.neel) kind = "neel";
    else if (s.all_up) kind = "all_up";
    else if (s.random_product) kind = "random_product";
    else if (s.tstate) kind = "tstate";
    const int given = (!s.file.empty()) + (s.basis >= 0) + s.haar + s.neel + s.all_up +
                      s.random_product + s.tstate;
    if (given != 1)
        throw InvalidInputError("need exactly one state source "
                                "(--file | --basis | --haar | --neel | --all-up | "
                                "--random-product | --tstate), got " +
                                std::to_string(given));
    if (kind != "file" && s.n < 1)
        throw InvalidInputError("generator sources require --n >= 1");
    return json{{"kind", kind},       {"path", s.file},
                {"n", s.n},           {"index", s.basis},
                {"seed", s.seed},     {"stream", s.stream},
                {"sphere_uniform", s.sphere_uniform}};
}

StateVector build_source(const json& src) {
    const std::string kind = src.at("kind").get<std::string>();
    const int n = src.at("n").get<int>();
    if (kind == "file") return load_state(src.at("path").get<std::string>());
    if (kind == "basis")
        return StateVector::basis_state(n, static_cast<std::uint64_t>(src.at("index").get<std::int64_t>()));
    if (kind == "neel") return neel_state(n);
    if (kind == "all_up") return all_up_state(n);
    if (kind == "tstate") return t_tensor_zeros(n);
    Rng rng(RngSpec{src.at("seed").get<std::uint64_t>(), src.at("stream").get<std::uint64_t>()});
    if (kind == "haar") return haar_random_state(n, rng);
    if (kind == "random_product")
        return random_product_state(n, rng, src.at("sphere_uniform").get<bool>());
    throw InvalidInputError("unknown state source kind '" + kind + "'");
}

json result_to_json(const SreResult& r) {
    // stable fields only: wall time and worker count live in the manifest so
    // that result files replay byte-for-byte
    return json{{"schema", "magicfwht.result.v1"},
                {"m2", r.m2},
                {"fourth_moment_sum", r.fourth_moment_sum},
                {"second_moment_sum", r.second_moment_sum},
                {"n_qubits", r.n_qubits},
                {"method", std::string(to_string(r.method))}};
}

// ---- compute / oracle ----------------------------------------------------

int run_compute(const json& p, const std::string& suffix, bool oracle_mode) {
    const auto t0 = std::chrono::steady_clock::now();
    const json& src = p.at("source");
    const int workers = p.at("workers").get<int>();
    const bool force = p.at("force").get<bool>();

    // guard before any 2^N allocation happens; file sources expose N cheaply
    const int n = src.at("kind").get<std::string>() == "file"
                      ? StateVector::peek_n_qubits(src.at("path").get<std::string>())
                      : src.at("n").get<int>();
    memory_guard(n, force);
    StateVector psi = build_source(src);

    SreResult res;
    if (oracle_mode) {
        BruteForceOptions opts;
        opts.allow_large = p.at("allow_large").get<bool>();
        opts.workers = workers;
        if (n > opts.guard_max_qubits && !opts.allow_large)
            throw ResourceError("brute-force enumeration is O(8^N) and refuses N = " +
                                std::to_string(n) + " > " +
                                std::to_string(opts.guard_max_qubits) +
                                "; pass --allow-large to insist");
        res = sre2_brute_force(psi, opts);
    } else {
        res = sre2_exact(psi, workers);
    }

    const json out_json = result_to_json(res);
    std::cout << out_json.dump(2) << '\n';
    std::cerr << "# wall_seconds=" << fmt17(res.wall_seconds) << " workers=" << res.workers
              << '\n';

    std::vector<std::string> outputs;
    const std::string out = p.at("out").get<std::string>();
    const std::string save = p.at("save_state").get<std::string>();
    if (!out.empty()) {
        const auto path = suffixed(out, suffix);
        std::ofstream f(path);
        if (!f) throw InvalidInputError("cannot open " + path.string() + " for writing");
        f << out_json.dump(2) << '\n';
        outputs.push_back(path.string());
    }
    if (!save.empty()) {
        const auto path = suffixed(save, suffix);
        save_state(psi, path);
        outputs.push_back(path.string());
    }
    if (!outputs.empty()) {
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_manifest(outputs.front(), oracle_mode ? "oracle" : "compute", p, outputs, wall,
                       res.workers);
    }
    return 0;
}

// ---- haar-scan -----------------------------------------------------------

int run_haar_scan(const json& p, const std::string& suffix) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n_min = p.at("n_min").get<int>();
    const int n_max = p.at("n_max").get<int>();
    const int samples = p.at("samples").get<int>();
    const std::uint64_t seed = p.at("seed").get<std::uint64_t>();
    const std::uint64_t stream0 = p.at("stream").get<std::uint64_t>();
    const int workers = p.at("workers").get<int>();
    const bool force = p.at("force").get<bool>();
    if (n_min < 1 || n_max < n_min) throw InvalidInputError("need 1 <= n-min <= n-max");
    if (samples < 1) throw InvalidInputError("samples must be >= 1");
    memory_guard(n_max, force);

    const auto csv_path = suffixed(p.at("out").get<std::string>(), suffix);
    std::ofstream csv(csv_path);
    if (!csv) throw InvalidInputError("cannot open " + csv_path.string() + " for writing");
    csv << "# schema: magicfwht.haar_scan.v1\n";
    csv << "n,mean,stderr,theory\n";

    for (int n = n_min; n <= n_max; ++n) {
        // one fresh substream per (n, sample) pair
        const std::uint64_t base = stream0 + static_cast<std::uint64_t>(n - n_min) *
                                                 static_cast<std::uint64_t>(samples);
        std::vector<StateVector> states;
        states.reserve(static_cast<std::size_t>(samples));
        for (int s = 0; s < samples; ++s)
            states.push_back(haar_random_state(n, RngSpec{seed, base + static_cast<std::uint64_t>(s)}));
        const auto results = sre2_batch(states, workers);

        std::vector<double> m2(results.size());
        for (std::size_t i = 0; i < results.size(); ++i) m2[i] = results[i].m2;
        const double mean = pairwise_sum(m2) / static_cast<double>(samples);
        double se = std::numeric_limits<double>::quiet_NaN();
        if (samples >= 2) {
            std::vector<double> dev2(m2.size());
            for (std::size_t i = 0; i < m2.size(); ++i) dev2[i] = (m2[i] - mean) * (m2[i] - mean);
            se = std::sqrt(pairwise_sum(dev2) / (samples - 1.0) / samples);
        }
        const double theory = std::log2(std::ldexp(1.0, n) + 3.0) - 2.0;
        csv << n << ',' << fmt17(mean) << ',' << fmt17(se) << ',' << fmt17(theory) << '\n';
    }
    if (!csv) throw InvalidInputError("write to " + csv_path.string() + " failed");
    csv.close();

    std::vector<std::string> outputs{csv_path.string()};
    if (p.at("gnuplot").get<bool>()) {
        const auto gp = suffixed(csv_path.string() + ".gp", "");
        std::ofstream g(gp);
        g << "set datafile separator ','\n"
          << "set xlabel 'N'\nset ylabel 'M2 (bits)'\nset key left\n"
          << "plot '" << csv_path.string() << "' using 1:2:3 with yerrorbars title 'ensemble mean', \\\n"
          << "     '" << csv_path.string() << "' using 1:4 with lines title 'log2(2^N+3)-2'\n";
        outputs.push_back(gp.string());
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(csv_path, "haar-scan", p, outputs, wall, cli_workers(workers));
    std::cout << "wrote " << csv_path.string() << '\n';
    return 0;
}

// ---- quench / circuit ----------------------------------------------------

int run_quench_cmd(const json& p, const std::string& suffix, const std::string& command) {
    const auto t0 = std::chrono::steady_clock::now();
    QuenchSpec spec = quench_spec_from_json(p);
    spec.validate();
    const int workers = p.at("workers").get<int>();
    const bool force = p.at("force").get<bool>();
    const bool per_sample = p.at("per_sample").get<bool>();
    const bool oracle_check = p.at("oracle_check").get<bool>();
    memory_guard(spec.n_qubits, force);

    RunQuenchOptions opts;
    opts.keep_per_sample = per_sample;

    SreTrace trace;
    double oracle_max_delta = 0.0;
    if (oracle_check) {
        const int w = resolve_workers(workers);
        const int sample_threads = std::min(w, std::max(1, spec.samples));
        const int engine_workers = std::max(1, w / sample_threads);
        std::mutex mu;
        SreEvaluator ev = [&](const StateVector& s) {
            const SreResult engine = sre2_exact(s, engine_workers);
            BruteForceOptions bopts;
            bopts.workers = engine_workers;
            const SreResult oracle = sre2_brute_force(s, bopts);
            const double delta = std::abs(engine.m2 - oracle.m2);
            {
                const std::scoped_lock lock(mu);
                oracle_max_delta = std::max(oracle_max_delta, delta);
            }
            return engine;
        };
        opts.workers = sample_threads;
        trace = run_quench(spec, ev, opts);
    } else {
        opts.workers = workers;
        trace = run_quench(spec, opts);
    }

    const std::string prefix = p.at("out_prefix").get<std::string>();
    const auto csv_path = suffixed(prefix + ".csv", suffix);
    const auto json_path = suffixed(prefix + ".json", suffix);
    write_trace_csv(trace, csv_path, per_sample);
    write_trace_json(trace, json_path);
    std::vector<std::string> outputs{csv_path.string(), json_path.string()};

    if (p.at("gnuplot").get<bool>()) {
        const auto gp = std::filesystem::path(csv_path.string() + ".gp");
        std::ofstream g(gp);
        g << "set datafile separator ','\n"
          << "set xlabel 't'\nset ylabel 'M2 (bits)'\nset key left\n"
          << "plot '" << csv_path.string() << "' using 1:2:3 with yerrorlines title 'ensemble mean'\n";
        outputs.push_back(gp.string());
    }

    json summary{{"outputs", outputs},
                 {"final_mean", trace.m2_mean.back()},
                 {"points", trace.times.size()}};
    if (oracle_check) summary["oracle_max_abs_delta"] = oracle_max_delta;
    std::cout << summary.dump(2) << '\n';

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(csv_path, command, p, outputs, wall, resolve_workers(workers));
    return 0;
}

// ---- bench ---------------------------------------------------------------

int run_bench(const json& p, const std::string& suffix) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto n_list = p.at("n_list").get<std::vector<int>>();
    const int repeats = p.at("repeats").get<int>();
    const std::uint64_t seed = p.at("seed").get<std::uint64_t>();
    const int workers = p.at("workers").get<int>();
    const bool force = p.at("force").get<bool>();
    if (n_list.empty()) throw InvalidInputError("bench: need at least one N");
    if (repeats < 1) throw InvalidInputError("bench: repeats must be >= 1");
    if (!std::is_sorted(n_list.begin(), n_list.end()))
        throw InvalidInputError("bench: N list must be ascending");
    memory_guard(n_list.back(), force);

    std::string table = "n,median_seconds,ratio\n";
    std::vector<double> log2_medians;
    double prev_median = 0.0;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        const int n = n_list[i];
        const StateVector psi = haar_random_state(n, RngSpec{seed, static_cast<std::uint64_t>(i)});
        sre2_exact(psi, workers); // warm-up, untimed
        std::vector<double> times(static_cast<std::size_t>(repeats));
        for (auto& t : times) t = sre2_exact(psi, workers).wall_seconds;
        std::sort(times.begin(), times.end());
        const std::size_t mid = times.size() / 2;
        const double median = times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
        log2_medians.push_back(std::log2(median));
        const double ratio = i == 0 ? std::numeric_limits<double>::quiet_NaN() : median / prev_median;
        prev_median = median;
        table += std::to_string(n) + ',' + fmt17(median) + ',' + fmt17(ratio) + '\n';
    }

    // least-squares slope of log2(median) vs N; the N 4^N model predicts a
    // little over 2
    double slope = std::numeric_limits<double>::quiet_NaN();
    if (n_list.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const auto m = static_cast<double>(n_list.size());
        for (std::size_t i = 0; i < n_list.size(); ++i) {
            sx += n_list[i];
            sy += log2_medians[i];
            sxx += static_cast<double>(n_list[i]) * n_list[i];
            sxy += n_list[i] * log2_medians[i];
        }
        slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }

    std::cout << "# schema: magicfwht.bench.v1\n" << table;
    std::cout << "# fitted log2(time) slope per qubit: " << fmt17(slope)
              << " (N*4^N model: ~2 plus a log-linear correction)\n";

    const std::string out = p.at("out").get<std::string>();
    if (!out.empty()) {
        const auto path = suffixed(out, suffix);
        std::ofstream f(path);
        if (!f) throw InvalidInputError("cannot open " + path.string() + " for writing");
        f << "# schema: magicfwht.bench.v1\n" << table;
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_manifest(path, "bench", p, {path.string()}, wall, resolve_workers(workers));
    }
    return 0;
}

// ---- replay ---------------------------------------------------------------

int run_replay(const std::string& manifest_path, const std::string& suffix, int workers_override) {
    std::ifstream in(manifest_path);
    if (!in) throw InvalidInputError("cannot open manifest " + manifest_path);
    json m;
    try {
        in >> m;
    } catch (const json::exception& e) {
        throw InvalidInputError("bad manifest json: " + std::string(e.what()));
    }
    if (m.value("schema", "") != "magicfwht.manifest.v1")
        throw InvalidInputError(manifest_path + " is not a magicfwht manifest");
    try {
        const std::string command = m.at("command").get<std::string>();
        json p = m.at("parameters");
        if (workers_override > 0) p["workers"] = workers_override;

        if (command == "compute") return run_compute(p, suffix, false);
        if (command == "oracle") return run_compute(p, suffix, true);
        if (command == "haar-scan") return run_haar_scan(p, suffix);
        if (command == "quench") return run_quench_cmd(p, suffix, "quench");
        if (command == "circuit") return run_quench_cmd(p, suffix, "circuit");
        if (command == "bench") return run_bench(p, suffix);
        throw InvalidInputError("manifest names unknown command '" + command + "'");
    } catch (const json::exception& e) {
        throw InvalidInputError("manifest parameters are incomplete: " + std::string(e.what()));
    }
}

// ---- argument wiring -------------------------------------------------------

void add_source_flags(CLI::App* cmd, SourceFlags& s) {
    cmd->add_option("--file", s.file, "read the state from a file");
    cmd->add_option("--basis", s.basis, "computational basis state index");
    cmd->add_flag("--haar", s.haar, "Haar-random state");
    cmd->add_flag("--neel", s.neel, "Neel state |up down up down ...>");
    cmd->add_flag("--all-up", s.all_up, "|0...0>");
    cmd->add_flag("--random-product", s.random_product, "random product state");
    cmd->add_flag("--tstate", s.tstate, "T state on qubit 0, |0> elsewhere");
    cmd->add_option("--n", s.n, "qubit count for generator sources");
    cmd->add_option("--seed", s.seed, "rng seed");
    cmd->add_option("--stream", s.stream, "rng substream");
    cmd->add_flag("--sphere-uniform", s.sphere_uniform,
                  "random product measure: cos(theta) uniform instead of theta uniform");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact second-order stabilizer Renyi entropy via the XOR-FWHT reduction"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    int exit_code = 0;

    // compute | oracle
    SourceFlags comp_src, orac_src;
    int comp_workers = 0, orac_workers = 0;
    bool comp_force = false, orac_force = false, orac_allow_large = false;
    std::string comp_out, comp_save, orac_out, orac_save;

    auto* compute = app.add_subcommand("compute", "M2 of one state via the XOR-FWHT engine");
    add_source_flags(compute, comp_src);
    compute->add_option("--workers", comp_workers, "worker threads (0 = auto)");
    compute->add_flag("--force", comp_force, "override the memory guard");
    compute->add_option("--out", comp_out, "write the result JSON here");
    compute->add_option("--save-state", comp_save, "also save the input state here");
    compute->callback([&] {
        json p{{"source", source_to_json(comp_src)}, {"workers", cli_workers(comp_workers)},
               {"force", comp_force},                {"out", comp_out},
               {"save_state", comp_save}};
        exit_code = run_compute(p, "", false);
    });

    auto* oracle = app.add_subcommand("oracle", "M2 by brute-force Pauli enumeration (O(8^N))");
    add_source_flags(oracle, orac_src);
    oracle->add_option("--workers", orac_workers, "worker threads (0 = auto)");
    oracle->add_flag("--force", orac_force, "override the memory guard");
    oracle->add_flag("--allow-large", orac_allow_large, "lift the N > 10 enumeration guard");
    oracle->add_option("--out", orac_out, "write the result JSON here");
    oracle->add_option("--save-state", orac_save, "also save the input state here");
    oracle->callback([&] {
        json p{{"source", source_to_json(orac_src)}, {"workers", cli_workers(orac_workers)},
               {"force", orac_force},                {"out", orac_out},
               {"save_state", orac_save},            {"allow_large", orac_allow_large}};
        exit_code = run_compute(p, "", true);
    });

    // haar-scan
    int hs_nmin = 2, hs_nmax = 10, hs_samples = 100, hs_workers = 0;
    std::uint64_t hs_seed = 0, hs_stream = 0;
    std::string hs_out = "haar_scan.csv";
    bool hs_force = false, hs_gnuplot = false;
    auto* hscan = app.add_subcommand("haar-scan", "ensemble mean M2 of Haar states per N");
    hscan->add_option("--n-min", hs_nmin, "smallest N")->capture_default_str();
    hscan->add_option("--n-max", hs_nmax, "largest N")->capture_default_str();
    hscan->add_option("--samples", hs_samples, "states per N")->capture_default_str();
    hscan->add_option("--seed", hs_seed, "rng seed");
    hscan->add_option("--stream", hs_stream, "rng substream base");
    hscan->add_option("--workers", hs_workers, "worker threads (0 = auto)");
    hscan->add_option("--out", hs_out, "CSV output path")->capture_default_str();
    hscan->add_flag("--force", hs_force, "override the memory guard");
    hscan->add_flag("--gnuplot", hs_gnuplot, "also write a gnuplot script");
    hscan->callback([&] {
        json p{{"n_min", hs_nmin},   {"n_max", hs_nmax},     {"samples", hs_samples},
               {"seed", hs_seed},    {"stream", hs_stream},  {"workers", cli_workers(hs_workers)},
               {"out", hs_out},      {"force", hs_force},    {"gnuplot", hs_gnuplot}};
        exit_code = run_haar_scan(p, "");
    });

    // quench
    std::string q_model = "xxz", q_boundary = "periodic", q_initial = "neel", q_initial_file,
                q_out = "quench";
    int q_n = 8, q_steps = 40, q_krylov = 30, q_samples = 1, q_workers = 0;
    double q_j = 1.0, q_delta = 0.5, q_hx = 1.5, q_hz = 1.5, q_dt = 0.05;
    std::uint64_t q_seed = 0, q_stream = 0;
    bool q_sphere = false, q_per_sample = false, q_oracle_check = false, q_force = false,
         q_gnuplot = false;
    auto* quench = app.add_subcommand("quench", "Hamiltonian quench: m2 trace over time");
    quench->add_option("--model", q_model, "xxz | tfim_lf")->capture_default_str();
    quench->add_option("--n", q_n, "qubit count")->capture_default_str();
    quench->add_option("--j", q_j, "coupling J")->capture_default_str();
    quench->add_option("--delta", q_delta, "XXZ anisotropy")->capture_default_str();
    quench->add_option("--hx", q_hx, "transverse field")->capture_default_str();
    quench->add_option("--hz", q_hz, "longitudinal field")->capture_default_str();
    quench->add_option("--boundary", q_boundary, "periodic | open")->capture_default_str();
    quench->add_option("--dt", q_dt, "time step")->capture_default_str();
    quench->add_option("--steps", q_steps, "number of steps")->capture_default_str();
    quench->add_option("--krylov-dim", q_krylov, "Lanczos basis size")->capture_default_str();
    quench->add_option("--samples", q_samples, "ensemble size")->capture_default_str();
    quench->add_option("--seed", q_seed, "rng seed");
    quench->add_option("--stream", q_stream, "rng substream base (one stream per sample)");
    quench->add_option("--initial", q_initial, "neel | random_product | all_up | file")
        ->capture_default_str();
    quench->add_option("--initial-file", q_initial_file, "state file when --initial file");
    quench->add_flag("--sphere-uniform", q_sphere, "random product measure on the sphere");
    quench->add_option("--workers", q_workers, "worker threads (0 = auto)");
    quench->add_flag("--per-sample", q_per_sample, "keep per-sample traces in the outputs");
    quench->add_flag("--oracle-check", q_oracle_check,
                     "also run the brute-force oracle at every point and report max |delta|");
    quench->add_flag("--force", q_force, "override the memory guard");
    quench->add_flag("--gnuplot", q_gnuplot, "also write a gnuplot script");
    quench->add_option("--out", q_out, "output prefix (writes <prefix>.csv/.json)")
        ->capture_default_str();
    quench->callback([&] {
        if (q_model != "xxz" && q_model != "tfim_lf")
            throw InvalidInputError("quench models are xxz | tfim_lf (brickwork lives under "
                                    "'circuit')");
        json p{{"model", q_model},
               {"n_qubits", q_n},
               {"j", q_j},
               {"delta", q_delta},
               {"hx", q_hx},
               {"hz", q_hz},
               {"boundary", q_boundary},
               {"dt", q_dt},
               {"n_steps", q_steps},
               {"krylov_dim", q_krylov},
               {"samples", q_samples},
               {"seed", q_seed},
               {"stream", q_stream},
               {"initial", q_initial},
               {"initial_file", q_initial_file},
               {"sphere_uniform", q_sphere},
               {"workers", cli_workers(q_workers)},
               {"per_sample", q_per_sample},
               {"oracle_check", q_oracle_check},
               {"force", q_force},
               {"gnuplot", q_gnuplot},
               {"out_prefix", q_out}};
        exit_code = run_quench_cmd(p, "", "quench");
    });

    // circuit
    int c_n = 10, c_steps = 40, c_samples = 20, c_workers = 0;
    std::uint64_t c_seed = 0, c_stream = 0;
    std::string c_initial = "all_up", c_initial_file, c_out = "circuit";
    bool c_per_sample = false, c_force = false, c_gnuplot = false, c_sphere = false;
    auto* circuit = app.add_subcommand("circuit", "brickwork Haar random circuit: m2 per layer");
    circuit->add_option("--n", c_n, "qubit count (even)")->capture_default_str();
    circuit->add_option("--steps", c_steps, "brickwork steps (even+odd layer pairs)")
        ->capture_default_str();
    circuit->add_option("--samples", c_samples, "circuit realizations")->capture_default_str();
    circuit->add_option("--seed", c_seed, "rng seed");
    circuit->add_option("--stream", c_stream, "rng substream base (one stream per realization)");
    circuit->add_option("--initial", c_initial, "all_up | neel | random_product | file")
        ->capture_default_str();
    circuit->add_option("--initial-file", c_initial_file, "state file when --initial file");
    circuit->add_flag("--sphere-uniform", c_sphere, "random product measure on the sphere");
    circuit->add_option("--workers", c_workers, "worker threads (0 = auto)");
    circuit->add_flag("--per-sample", c_per_sample, "keep per-sample traces in the outputs");
    circuit->add_flag("--force", c_force, "override the memory guard");
    circuit->add_flag("--gnuplot", c_gnuplot, "also write a gnuplot script");
    circuit->add_option("--out", c_out, "output prefix (writes <prefix>.csv/.json)")
        ->capture_default_str();
    circuit->callback([&] {
        json p{{"model", "brickwork"},
               {"n_qubits", c_n},
               {"j", 0.0},
               {"delta", 0.0},
               {"hx", 0.0},
               {"hz", 0.0},
               {"boundary", "open"},
               {"dt", 1.0},
               {"n_steps", c_steps},
               {"krylov_dim", 30},
               {"samples", c_samples},
               {"seed", c_seed},
               {"stream", c_stream},
               {"initial", c_initial},
               {"initial_file", c_initial_file},
               {"sphere_uniform", c_sphere},
               {"workers", cli_workers(c_workers)},
               {"per_sample", c_per_sample},
               {"oracle_check", false},
               {"force", c_force},
               {"gnuplot", c_gnuplot},
               {"out_prefix", c_out}};
        exit_code = run_quench_cmd(p, "", "circuit");
    });

    // bench
    std::vector<int> b_n{8, 10, 12};
    int b_repeats = 5, b_workers = 0;
    std::uint64_t b_seed = 0;
    std::string b_out;
    bool b_force = false;
    auto* bench = app.add_subcommand("bench", "engine scaling benchmark");
    bench->add_option("--n", b_n, "ascending N list")->delimiter(',')->capture_default_str();
    bench->add_option("--repeats", b_repeats, "timed runs per N (median reported)")
        ->capture_default_str();
    bench->add_option("--seed", b_seed, "rng seed for the test states");
    bench->add_option("--workers", b_workers, "worker threads (0 = auto)");
    bench->add_option("--out", b_out, "also write the CSV here");
    bench->add_flag("--force", b_force, "override the memory guard");
    bench->callback([&] {
        json p{{"n_list", b_n},   {"repeats", b_repeats}, {"seed", b_seed},
               {"workers", cli_workers(b_workers)},       {"out", b_out},
               {"force", b_force}};
        exit_code = run_bench(p, "");
    });

    // replay
    std::string r_manifest, r_suffix = ".replay";
    int r_workers = 0;
    auto* replay = app.add_subcommand("replay", "re-run a manifest; outputs must be byte-identical");
    replay->add_option("manifest", r_manifest, "path to a .manifest.json")->required();
    replay->add_option("--suffix", r_suffix, "inserted before the output extension")
        ->capture_default_str();
    replay->add_option("--workers", r_workers,
                       "override the worker count (results must not change)");
    replay->callback([&] { exit_code = run_replay(r_manifest, r_suffix, r_workers); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidInputError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "resource guard: " << e.what() << '\n';
        return 3;
    } catch (const InternalError& e) {
        std::cerr << "internal inconsistency: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    }
    return exit_code;
}
