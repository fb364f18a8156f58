#include "rdmpurify/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>
#include <thread>

#include "rdmpurify/stats.hpp"
#include "rdmpurify/version.hpp"

namespace rdmpurify {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12e", x);
    return buf;
}

using stats::ci95_halfwidth;
using stats::mean;
using stats::median;
using stats::sample_std;

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(const std::vector<std::string>& cells) {
        if (cells.size() != columns_.size())
            throw std::logic_error("CsvWriter: cell count mismatch");
        rows_.push_back(cells);
    }

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path);
        for (std::size_t i = 0; i < columns_.size(); ++i)
            out << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
        for (const auto& row : rows_)
            for (std::size_t i = 0; i < row.size(); ++i)
                out << row[i] << (i + 1 < row.size() ? "," : "\n");
    }

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

json solver_options_json(const sdp::SolverOptions& o) {
    return json{{"feas_tol", o.feas_tol},
                {"max_iter", o.max_iter},
                {"penalty", o.penalty},
                {"penalty_adapt", o.penalty_adapt},
                {"penalty_update_every", o.penalty_update_every}};
}

json result_json(const PurificationResult& r) {
    return json{{"w", r.w},
                {"mode", to_string(r.mode)},
                {"energy", r.energy},
                {"slack_trace", r.slack_trace},
                {"deviation_frobenius", r.deviation.frobenius},
                {"deviation_nuclear", r.deviation.nuclear},
                {"min_eig_D", r.eig_D.min_eigenvalue},
                {"min_eig_Q", r.eig_Q.min_eigenvalue},
                {"min_eig_G", r.eig_G.min_eigenvalue},
                {"trace", r.trace},
                {"iterations", r.iterations},
                {"primal_residual", r.primal_residual},
                {"dual_residual", r.dual_residual},
                {"status", sdp::to_string(r.status)},
                {"wall_time_s", r.wall_time_s}};
}

void write_report(const ExperimentConfig& cfg, const ExperimentOutput& out, json body,
                  double runtime_s) {
    json rep;
    rep["experiment"] = to_string(cfg.experiment);
    rep["version"] = kVersion;
    rep["config"] = json::parse(cfg.config_echo.empty() ? "{}" : cfg.config_echo);
    rep["csv"] = fs::path(out.csv_path).filename().string();
    rep["runtime_s"] = runtime_s;
    rep.update(body);
    std::ofstream f(out.report_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out.report_path);
    f << rep.dump(2) << "\n";
}

ExperimentOutput make_paths(const ExperimentConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    std::string stem = to_string(cfg.experiment);
    ExperimentOutput out;
    out.csv_path = (fs::path(cfg.output_dir) / (stem + ".csv")).string();
    out.report_path = (fs::path(cfg.output_dir) / (stem + ".report.json")).string();
    return out;
}

NoiseSpec require_noise(const ExperimentConfig& cfg) {
    if (!cfg.noise)
        throw ConfigError("config error at noise: this experiment requires a noise block");
    return *cfg.noise;
}

} // namespace

const char* to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::weight_sweep: return "weight-sweep";
        case ExperimentKind::size_sweep: return "size-sweep";
        case ExperimentKind::excited: return "excited";
        case ExperimentKind::dissociation: return "dissociation";
        case ExperimentKind::spectra: return "spectra";
        case ExperimentKind::purify_once: return "purify-once";
    }
    return "unknown";
}

ExperimentKind experiment_from_string(const std::string& s) {
    for (auto k : {ExperimentKind::weight_sweep, ExperimentKind::size_sweep,
                   ExperimentKind::excited, ExperimentKind::dissociation,
                   ExperimentKind::spectra, ExperimentKind::purify_once})
        if (s == to_string(k)) return k;
    throw ConfigError("config error at experiment: unknown experiment `" + s + "`");
}

MolecularIntegrals SystemSpec::build() const {
    if (kind == SystemKind::hubbard) return hubbard_chain(L, t, U, boundary);
    return parse_fcidump_file(path);
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RDM_PURIFY_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

OracleReference solve_reference(const SystemSpec& spec, int excited_index) {
    MolecularIntegrals ints = spec.build();
    auto basis = build_basis(ints.r, spec.N, spec.sz2);
    if (excited_index < 0 || excited_index >= basis->size())
        throw ConfigError("config error at excited_index: exceeds sector dimension " +
                          std::to_string(basis->size()));
    Eigen::MatrixXd h = build_hamiltonian_matrix(ints, *basis);
    auto pairs = eigensolve(h, basis, excited_index + 1);
    ReducedHamiltonian k = build_reduced_hamiltonian(ints, spec.N);
    OracleReference ref{std::move(ints),
                        std::move(k),
                        basis,
                        pairs.front().value,
                        rdm2_from_state(pairs.front().state),
                        pairs.back().value,
                        rdm2_from_state(pairs.back().state)};
    return ref;
}

NoiseSpec resolve_noise(const ExperimentConfig& cfg, const OracleReference& ref) {
    NoiseSpec spec = require_noise(cfg);
    if (cfg.target_energy_stderr)
        spec.alpha =
            calibrate_alpha(*cfg.target_energy_stderr, ref.k, ref.state_rdm, spec.shots);
    return spec;
}

SeedSweepOutcome run_seed_sweeps(const OracleReference& ref, const NoiseSpec& noise,
                                 const std::vector<double>& w_list, int seeds,
                                 const PurificationConfig& config, int threads) {
    SeedSweepOutcome out;
    out.results.resize(seeds);
    out.noisy_energies.resize(seeds);
    out.noisy_deviations.resize(seeds);
    out.noisy_min_eigs.resize(seeds);
    out.noisy_inputs.reserve(seeds);
    for (int s = 0; s < seeds; ++s) {
        NoiseSpec per_seed = noise;
        per_seed.seed = noise.seed + static_cast<std::uint64_t>(s);
        out.noisy_inputs.push_back(apply_noise(ref.state_rdm, per_seed));
    }

    PurificationFamily family(ref.k, ref.basis->N, config.mode, config.solver);
    auto work = [&](int s, const std::vector<sdp::SDPSolution>* pilot,
                    std::vector<sdp::SDPSolution>* keep) {
        const TwoRDM& d_e = out.noisy_inputs[s];
        out.noisy_energies[s] = energy(ref.k, d_e);
        out.noisy_deviations[s] = deviation_norms(d_e, ref.state_rdm).frobenius;
        out.noisy_min_eigs[s] = min_eigenvalues(d_e).min_eigenvalue;
        out.results[s] = family.sweep(d_e, w_list, config.warm_start, pilot, keep);
    };
    if (config.warm_start && seeds > 1) {
        // seed 0 is the pilot; the others start from its per-w iterates
        std::vector<sdp::SDPSolution> pilot;
        work(0, nullptr, &pilot);
        parallel_for(seeds - 1, threads, [&](int i) { work(i + 1, &pilot, nullptr); });
    } else {
        parallel_for(seeds, threads, [&](int s) { work(s, nullptr, nullptr); });
    }
    return out;
}

ExperimentOutput run_weight_sweep(const ExperimentConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    OracleReference ref = solve_reference(cfg.system);
    NoiseSpec noise = resolve_noise(cfg, ref);
    PurificationConfig pc;
    pc.mode = PurifyMode::correlated_purification;
    pc.solver = cfg.solver;
    pc.warm_start = cfg.warm_start;
    int threads = resolve_threads(cfg.threads);

    SeedSweepOutcome sw =
        run_seed_sweeps(ref, noise, cfg.w_list, cfg.seeds, pc, threads);

    // v2rdm baseline is noise independent
    PurificationConfig v2c = pc;
    v2c.mode = PurifyMode::v2rdm;
    PurificationResult v2 = purify(ref.k, ref.state_rdm, ref.basis->N, v2c);

    CsvWriter csv({"method", "w", "mean_abs_energy_error", "median_abs_energy_error",
                   "std_energy", "mean_frobenius_deviation", "median_frobenius_deviation",
                   "mean_slack_trace", "mean_min_eig_D", "worst_min_eig_D", "seeds"});

    json per_w = json::array();
    for (std::size_t iw = 0; iw < cfg.w_list.size(); ++iw) {
        std::vector<double> abs_err, dev, slack, min_eig, energies;
        for (int s = 0; s < cfg.seeds; ++s) {
            const auto& r = sw.results[s][iw];
            abs_err.push_back(std::abs(r.energy - ref.state_energy));
            dev.push_back(deviation_norms(r.D_p, ref.state_rdm).frobenius);
            slack.push_back(r.slack_trace);
            min_eig.push_back(r.eig_D.min_eigenvalue);
            energies.push_back(r.energy);
        }
        csv.add_row({"cp", fmt(cfg.w_list[iw]), fmt(mean(abs_err)), fmt(median(abs_err)),
                     fmt(sample_std(energies)), fmt(mean(dev)), fmt(median(dev)),
                     fmt(mean(slack)), fmt(mean(min_eig)),
                     fmt(*std::min_element(min_eig.begin(), min_eig.end())),
                     std::to_string(cfg.seeds)});
        json jw;
        jw["w"] = cfg.w_list[iw];
        jw["results"] = json::array();
        for (int s = 0; s < cfg.seeds; ++s) jw["results"].push_back(result_json(sw.results[s][iw]));
        per_w.push_back(jw);
    }
    {
        std::vector<double> abs_err, dev, min_eig;
        for (int s = 0; s < cfg.seeds; ++s) {
            abs_err.push_back(std::abs(sw.noisy_energies[s] - ref.state_energy));
            dev.push_back(sw.noisy_deviations[s]);
            min_eig.push_back(sw.noisy_min_eigs[s]);
        }
        csv.add_row({"noisy", "", fmt(mean(abs_err)), fmt(median(abs_err)),
                     fmt(sample_std(sw.noisy_energies)), fmt(mean(dev)), fmt(median(dev)),
                     "", fmt(mean(min_eig)),
                     fmt(*std::min_element(min_eig.begin(), min_eig.end())),
                     std::to_string(cfg.seeds)});
        csv.add_row({"v2rdm", "", fmt(std::abs(v2.energy - ref.state_energy)),
                     fmt(std::abs(v2.energy - ref.state_energy)), "",
                     fmt(deviation_norms(v2.D_p, ref.state_rdm).frobenius),
                     fmt(deviation_norms(v2.D_p, ref.state_rdm).frobenius), "",
                     fmt(v2.eig_D.min_eigenvalue), fmt(v2.eig_D.min_eigenvalue), "1"});
    }

    ExperimentOutput out = make_paths(cfg);
    csv.write(out.csv_path);
    json body;
    body["oracle"] = {{"ground_energy", ref.ground_energy},
                      {"state_energy", ref.state_energy}};
    body["noise"] = {{"shots", noise.shots}, {"alpha", noise.alpha},
                     {"seed", noise.seed}, {"model", noise.model}};
    body["v2rdm"] = result_json(v2);
    body["sweeps"] = per_w;
    write_report(cfg, out, body,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return out;
}

ExperimentOutput run_size_sweep(const ExperimentConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    if (cfg.system.kind != SystemKind::hubbard)
        throw ConfigError("config error at system.kind: size-sweep requires hubbard systems");
    int threads = resolve_threads(cfg.threads);
    double w = cfg.w_list.front();

    CsvWriter csv({"size", "method", "w", "mean_abs_energy_error", "ci95_energy_error",
                   "median_abs_energy_error", "mean_frobenius_deviation", "ci95_deviation",
                   "median_frobenius_deviation", "seeds"});
    json sizes_json = json::array();

    for (int L : cfg.sizes) {
        SystemSpec sys = cfg.system;
        sys.L = L;
        sys.N = L;            // half filling
        sys.sz2 = L % 2;      // Sz = 0 when possible
        OracleReference ref = solve_reference(sys);
        NoiseSpec noise = resolve_noise(cfg, ref);

        PurificationConfig pc;
        pc.mode = PurifyMode::correlated_purification;
        pc.solver = cfg.solver;
        pc.warm_start = cfg.warm_start;
        SeedSweepOutcome sw = run_seed_sweeps(ref, noise, {w}, cfg.seeds, pc, threads);

        PurificationConfig v2c = pc;
        v2c.mode = PurifyMode::v2rdm;
        PurificationResult v2 = purify(ref.k, ref.state_rdm, ref.basis->N, v2c);

        std::vector<double> cp_err, cp_dev, noisy_err, noisy_dev;
        for (int s = 0; s < cfg.seeds; ++s) {
            cp_err.push_back(std::abs(sw.results[s][0].energy - ref.state_energy));
            cp_dev.push_back(
                deviation_norms(sw.results[s][0].D_p, ref.state_rdm).frobenius);
            noisy_err.push_back(std::abs(sw.noisy_energies[s] - ref.state_energy));
            noisy_dev.push_back(sw.noisy_deviations[s]);
        }
        std::string size_s = std::to_string(L);
        csv.add_row({size_s, "noisy", "", fmt(mean(noisy_err)), fmt(ci95_halfwidth(noisy_err)),
                     fmt(median(noisy_err)), fmt(mean(noisy_dev)),
                     fmt(ci95_halfwidth(noisy_dev)), fmt(median(noisy_dev)),
                     std::to_string(cfg.seeds)});
        double v2_err = std::abs(v2.energy - ref.state_energy);
        double v2_dev = deviation_norms(v2.D_p, ref.state_rdm).frobenius;
        csv.add_row({size_s, "v2rdm", "", fmt(v2_err), "", fmt(v2_err), fmt(v2_dev), "",
                     fmt(v2_dev), "1"});
        csv.add_row({size_s, "cp", fmt(w), fmt(mean(cp_err)), fmt(ci95_halfwidth(cp_err)),
                     fmt(median(cp_err)), fmt(mean(cp_dev)), fmt(ci95_halfwidth(cp_dev)),
                     fmt(median(cp_dev)), std::to_string(cfg.seeds)});

        json js;
        js["size"] = L;
        js["oracle_energy"] = ref.state_energy;
        js["noise_alpha"] = noise.alpha;
        js["v2rdm"] = result_json(v2);
        js["cp_median_abs_error"] = median(cp_err);
        js["noisy_median_abs_error"] = median(noisy_err);
        sizes_json.push_back(js);
    }

    ExperimentOutput out = make_paths(cfg);
    csv.write(out.csv_path);
    json body;
    body["sizes"] = sizes_json;
    write_report(cfg, out, body,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return out;
}

ExperimentOutput run_excited(const ExperimentConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    OracleReference ref = solve_reference(cfg.system, cfg.excited_index);
    NoiseSpec noise = resolve_noise(cfg, ref);
    PurificationConfig pc;
    pc.mode = PurifyMode::correlated_purification;
    pc.solver = cfg.solver;
    pc.warm_start = cfg.warm_start;
    int threads = resolve_threads(cfg.threads);

    SeedSweepOutcome sw = run_seed_sweeps(ref, noise, cfg.w_list, cfg.seeds, pc, threads);

    CsvWriter csv({"w", "mean_energy", "std_energy", "mean_abs_energy_error",
                   "noisy_mean_energy", "noisy_std_energy", "oracle_state_energy",
                   "oracle_ground_energy", "seeds"});
    json per_w = json::array();
    double noisy_mean = mean(sw.noisy_energies);
    double noisy_std = sample_std(sw.noisy_energies);
    for (std::size_t iw = 0; iw < cfg.w_list.size(); ++iw) {
        std::vector<double> energies, abs_err;
        for (int s = 0; s < cfg.seeds; ++s) {
            energies.push_back(sw.results[s][iw].energy);
            abs_err.push_back(std::abs(sw.results[s][iw].energy - ref.state_energy));
        }
        csv.add_row({fmt(cfg.w_list[iw]), fmt(mean(energies)), fmt(sample_std(energies)),
                     fmt(mean(abs_err)), fmt(noisy_mean), fmt(noisy_std),
                     fmt(ref.state_energy), fmt(ref.ground_energy),
                     std::to_string(cfg.seeds)});
        json jw;
        jw["w"] = cfg.w_list[iw];
        jw["mean_energy"] = mean(energies);
        jw["std_energy"] = sample_std(energies);
        per_w.push_back(jw);
    }

    ExperimentOutput out = make_paths(cfg);
    csv.write(out.csv_path);
    json body;
    body["excited_index"] = cfg.excited_index;
    body["oracle"] = {{"ground_energy", ref.ground_energy},
                      {"state_energy", ref.state_energy}};
    body["noise"] = {{"shots", noise.shots}, {"alpha", noise.alpha},
                     {"seed", noise.seed}, {"model", noise.model}};
    body["noisy_baseline"] = {{"mean_energy", noisy_mean}, {"std_energy", noisy_std}};
    body["sweeps"] = per_w;
    write_report(cfg, out, body,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return out;
}

namespace {

// shared driver for dissociation and spectra
struct GeometryRun {
    ManifestEntry entry;
    double oracle_energy = 0.0;
    std::vector<double> noisy_energies;
    std::vector<double> noisy_min_eigs;
    std::vector<std::vector<PurificationResult>> results; // [seed][w]
};

std::vector<GeometryRun> run_manifest(const ExperimentConfig& cfg,
                                      const std::vector<double>& w_list) {
    auto entries = load_manifest(cfg.manifest_path);
    if (entries.empty())
        throw ConfigError("config error at manifest: no fixtures listed");
    int threads = resolve_threads(cfg.threads);
    std::vector<GeometryRun> runs;
    for (const auto& entry : entries) {
        SystemSpec sys = cfg.system;
        sys.kind = SystemKind::fcidump;
        sys.path = entry.path;
        OracleReference ref = solve_reference(sys);
        NoiseSpec noise = resolve_noise(cfg, ref);

        PurificationConfig pc;
        pc.mode = PurifyMode::correlated_purification;
        pc.solver = cfg.solver;
        pc.warm_start = cfg.warm_start;
        SeedSweepOutcome sw = run_seed_sweeps(ref, noise, w_list, cfg.seeds, pc, threads);

        GeometryRun run;
        run.entry = entry;
        run.oracle_energy = ref.state_energy;
        run.noisy_energies = std::move(sw.noisy_energies);
        run.noisy_min_eigs = std::move(sw.noisy_min_eigs);
        run.results = std::move(sw.results);
        runs.push_back(std::move(run));
    }
    return runs;
}

constexpr double kChemicalAccuracy = 1.6e-3; // hartree

} // namespace

ExperimentOutput run_dissociation(const ExperimentConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    auto runs = run_manifest(cfg, cfg.w_list);

    std::vector<std::string> cols{"label", "geometry", "fci_energy",
                                  "noisy_median_energy", "noisy_median_abs_error",
                                  "noisy_chem_acc"};
    for (double w : cfg.w_list) {
        cols.push_back("cp_median_energy_w" + fmt(w));
        cols.push_back("cp_median_abs_error_w" + fmt(w));
        cols.push_back("cp_chem_acc_w" + fmt(w));
    }
    CsvWriter csv(cols);
    json geoms = json::array();

    for (const auto& run : runs) {
        std::vector<double> noisy_err;
        for (double e : run.noisy_energies) noisy_err.push_back(std::abs(e - run.oracle_energy));
        double nme = median(run.noisy_energies);
        double nerr = median(noisy_err);
        std::vector<std::string> row{run.entry.label, run.entry.geometry,
                                     fmt(run.oracle_energy), fmt(nme), fmt(nerr),
                                     nerr <= kChemicalAccuracy ? "1" : "0"};
        json jg{{"label", run.entry.label},
                {"geometry", run.entry.geometry},
                {"fci_energy", run.oracle_energy},
                {"noisy_median_abs_error", nerr}};
        for (std::size_t iw = 0; iw < cfg.w_list.size(); ++iw) {
            std::vector<double> e, err;
            for (const auto& seed_results : run.results) {
                e.push_back(seed_results[iw].energy);
                err.push_back(std::abs(seed_results[iw].energy - run.oracle_energy));
            }
            double me = median(e), merr = median(err);
            row.push_back(fmt(me));
            row.push_back(fmt(merr));
            row.push_back(merr <= kChemicalAccuracy ? "1" : "0");
            jg["cp"].push_back({{"w", cfg.w_list[iw]},
                                {"median_energy", me},
                                {"median_abs_error", merr},
                                {"chem_acc", merr <= kChemicalAccuracy}});
        }
        csv.add_row(row);
        geoms.push_back(jg);
    }

    ExperimentOutput out = make_paths(cfg);
    csv.write(out.csv_path);
    json body;
    body["chemical_accuracy_hartree"] = kChemicalAccuracy;
    body["geometries"] = geoms;
    write_report(cfg, out, body,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return out;
}

ExperimentOutput run_spectra(const ExperimentConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    auto runs = run_manifest(cfg, {cfg.w_list.front()});

    CsvWriter csv({"label", "geometry", "median_min_eig_noisy", "worst_min_eig_noisy",
                   "median_min_eig_purified", "worst_min_eig_purified", "seeds"});
    json geoms = json::array();
    for (const auto& run : runs) {
        std::vector<double> purified;
        for (const auto& seed_results : run.results)
            purified.push_back(seed_results[0].eig_D.min_eigenvalue);
        std::vector<double> noisy = run.noisy_min_eigs;
        csv.add_row({run.entry.label, run.entry.geometry, fmt(median(noisy)),
                     fmt(*std::min_element(noisy.begin(), noisy.end())),
                     fmt(median(purified)),
                     fmt(*std::min_element(purified.begin(), purified.end())),
                     std::to_string(cfg.seeds)});
        geoms.push_back({{"label", run.entry.label},
                         {"median_min_eig_noisy", median(noisy)},
                         {"median_min_eig_purified", median(purified)}});
    }

    ExperimentOutput out = make_paths(cfg);
    csv.write(out.csv_path);
    json body;
    body["geometries"] = geoms;
    write_report(cfg, out, body,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return out;
}

ExperimentOutput run_purify_once(const ExperimentConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    OracleReference ref = solve_reference(cfg.system, cfg.excited_index);

    TwoRDM d_e = ref.state_rdm;
    if (!cfg.input_rdm.empty()) {
        d_e = load_rdm_json_file(cfg.input_rdm);
    } else if (cfg.noise) {
        d_e = apply_noise(ref.state_rdm, resolve_noise(cfg, ref));
    }

    PurificationConfig pc;
    pc.mode = cfg.mode;
    pc.w = cfg.w_list.front();
    pc.solver = cfg.solver;
    PurificationResult res = purify(ref.k, d_e, ref.basis->N, pc);

    CsvWriter csv({"mode", "w", "energy", "abs_energy_error", "slack_trace",
                   "frobenius_vs_oracle", "frobenius_vs_input", "min_eig_D", "min_eig_Q",
                   "min_eig_G", "trace", "iterations", "status"});
    csv.add_row({to_string(res.mode), fmt(res.w), fmt(res.energy),
                 fmt(std::abs(res.energy - ref.state_energy)), fmt(res.slack_trace),
                 fmt(deviation_norms(res.D_p, ref.state_rdm).frobenius),
                 fmt(res.deviation.frobenius), fmt(res.eig_D.min_eigenvalue),
                 fmt(res.eig_Q.min_eigenvalue), fmt(res.eig_G.min_eigenvalue),
                 fmt(res.trace), std::to_string(res.iterations),
                 sdp::to_string(res.status)});

    ExperimentOutput out = make_paths(cfg);
    csv.write(out.csv_path);
    save_rdm_json_file(res.D_p,
                       (fs::path(cfg.output_dir) / "purified_rdm.json").string());
    json body;
    body["oracle"] = {{"ground_energy", ref.ground_energy},
                      {"state_energy", ref.state_energy}};
    body["input"] = {{"energy", energy(ref.k, d_e)},
                     {"min_eig_D", min_eigenvalues(d_e).min_eigenvalue},
                     {"trace", d_e.trace()}};
    body["result"] = result_json(res);
    write_report(cfg, out, body,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.experiment) {
        case ExperimentKind::weight_sweep: return run_weight_sweep(cfg);
        case ExperimentKind::size_sweep: return run_size_sweep(cfg);
        case ExperimentKind::excited: return run_excited(cfg);
        case ExperimentKind::dissociation: return run_dissociation(cfg);
        case ExperimentKind::spectra: return run_spectra(cfg);
        case ExperimentKind::purify_once: return run_purify_once(cfg);
    }
    throw ConfigError("config error: unknown experiment");
}

} // namespace rdmpurify
