#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdmpurify/fock.hpp"
#include "rdmpurify/integrals.hpp"
#include "rdmpurify/noise.hpp"
#include "rdmpurify/purify.hpp"

namespace rdmpurify {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SystemKind { hubbard, fcidump };

struct SystemSpec {
    SystemKind kind = SystemKind::hubbard;
    // hubbard
    int L = 4;
    double t = 1.0;
    double U = 4.0;
    Boundary boundary = Boundary::open;
    // fcidump
    std::string path;
    // sector
    int N = 4;
    int sz2 = 0;

    MolecularIntegrals build() const;
};

enum class ExperimentKind {
    weight_sweep,
    size_sweep,
    excited,
    dissociation,
    spectra,
    purify_once,
};

const char* to_string(ExperimentKind k);
ExperimentKind experiment_from_string(const std::string& s);

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::weight_sweep;
    SystemSpec system;
    std::optional<NoiseSpec> noise; // absent: purify the exact 2-RDM
    // when set, alpha is recalibrated against this target at load time
    std::optional<double> target_energy_stderr;
    std::vector<double> w_list{0.1};
    int seeds = 20;
    int threads = 0; // 0: RDM_PURIFY_THREADS or 1
    bool warm_start = true;
    sdp::SolverOptions solver;
    std::string output_dir = "out";
    // excited
    int excited_index = 0;
    // size sweep
    std::vector<int> sizes{2, 3, 4, 5, 6};
    // dissociation / spectra
    std::string manifest_path;
    // purify-once
    std::string input_rdm;                                     // optional 2-RDM JSON
    PurifyMode mode = PurifyMode::correlated_purification;     // purify-once only
    std::string config_echo; // resolved config, embedded in reports
};

/// Parse and validate a config file.  Unknown keys, missing referenced
/// paths and ill-typed fields raise ConfigError with the JSON field path.
ExperimentConfig load_experiment_config(const std::string& path);

/// Fixture manifest: label -> FCIDUMP path with recorded reference energy.
struct ManifestEntry {
    std::string label;
    std::string path;
    std::string geometry;
    double fci_energy = 0.0;
    std::string provenance;
};

std::vector<ManifestEntry> load_manifest(const std::string& path);

struct ExperimentOutput {
    std::string csv_path;
    std::string report_path;
};

ExperimentOutput run_weight_sweep(const ExperimentConfig& cfg);
ExperimentOutput run_size_sweep(const ExperimentConfig& cfg);
ExperimentOutput run_excited(const ExperimentConfig& cfg);
ExperimentOutput run_dissociation(const ExperimentConfig& cfg);
ExperimentOutput run_spectra(const ExperimentConfig& cfg);
ExperimentOutput run_purify_once(const ExperimentConfig& cfg);

ExperimentOutput run_experiment(const ExperimentConfig& cfg);

// -- building blocks shared by the experiment drivers and the tests --

struct OracleReference {
    MolecularIntegrals ints;
    ReducedHamiltonian k;
    std::shared_ptr<const FockBasis> basis;
    double ground_energy = 0.0;
    TwoRDM ground_rdm;
    double state_energy = 0.0; // selected eigenstate (ground unless excited_index > 0)
    TwoRDM state_rdm;
};

/// Diagonalize the configured system and keep the reference state's 2-RDM.
OracleReference solve_reference(const SystemSpec& spec, int excited_index = 0);

/// Per-seed purification sweep against one reference, seed-parallel.
/// Entry [seed][iw] is the result for w_list[iw] with noise seed
/// base_seed + seed.  Deterministic: results are ordered by seed index.
struct SeedSweepOutcome {
    std::vector<std::vector<PurificationResult>> results; // [seed][w]
    std::vector<TwoRDM> noisy_inputs;                     // [seed]
    std::vector<double> noisy_energies;                   // [seed]
    std::vector<double> noisy_deviations;                 // [seed] Frobenius vs exact
    std::vector<double> noisy_min_eigs;                   // [seed]
};

SeedSweepOutcome run_seed_sweeps(const OracleReference& ref, const NoiseSpec& noise,
                                 const std::vector<double>& w_list, int seeds,
                                 const PurificationConfig& config, int threads);

/// Resolved noise spec for a config: calibrates alpha against
/// target_energy_stderr when that is set.
NoiseSpec resolve_noise(const ExperimentConfig& cfg, const OracleReference& ref);

/// Effective thread count: explicit value, else RDM_PURIFY_THREADS, else 1.
int resolve_threads(int requested);

} // namespace rdmpurify
