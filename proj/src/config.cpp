#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>

#include "rdmpurify/experiments.hpp"

namespace rdmpurify {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config error at " + path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) fail(path + "." + key, "unknown key");
}

template <typename T>
T get(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) fail(path + "." + key, "missing required key");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        fail(path + "." + key, "wrong type");
    }
}

template <typename T>
T get_or(const json& obj, const std::string& path, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        fail(path + "." + key, "wrong type");
    }
}

void require_file(const std::string& path, const std::string& field) {
    if (!fs::exists(path)) fail(field, "referenced path does not exist: " + path);
}

SystemSpec parse_system(const json& j, const std::string& path, const fs::path& base) {
    check_keys(j, path,
               {"kind", "L", "t", "U", "boundary", "path", "N", "sz2"});
    SystemSpec spec;
    std::string kind = get<std::string>(j, path, "kind");
    if (kind == "hubbard") {
        spec.kind = SystemKind::hubbard;
        spec.L = get<int>(j, path, "L");
        spec.t = get_or<double>(j, path, "t", 1.0);
        spec.U = get_or<double>(j, path, "U", 4.0);
        std::string b = get_or<std::string>(j, path, "boundary", "open");
        if (b == "open")
            spec.boundary = Boundary::open;
        else if (b == "periodic")
            spec.boundary = Boundary::periodic;
        else
            fail(path + ".boundary", "expected `open` or `periodic`");
    } else if (kind == "fcidump") {
        spec.kind = SystemKind::fcidump;
        spec.path = (base / get<std::string>(j, path, "path")).string();
        require_file(spec.path, path + ".path");
    } else {
        fail(path + ".kind", "expected `hubbard` or `fcidump`");
    }
    spec.N = get<int>(j, path, "N");
    spec.sz2 = get_or<int>(j, path, "sz2", 0);
    if (spec.N < 2) fail(path + ".N", "N >= 2 required");
    return spec;
}

NoiseSpec parse_noise(const json& j, const std::string& path,
                      std::optional<double>& target) {
    check_keys(j, path, {"shots", "alpha", "target_energy_stderr", "seed", "model"});
    NoiseSpec spec;
    spec.shots = get<long long>(j, path, "shots");
    if (spec.shots < 1) fail(path + ".shots", "shots >= 1 required");
    if (j.contains("target_energy_stderr")) {
        target = get<double>(j, path, "target_energy_stderr");
        if (*target <= 0) fail(path + ".target_energy_stderr", "must be positive");
        spec.alpha = 1.0; // replaced after calibration
        if (j.contains("alpha"))
            fail(path, "give either alpha or target_energy_stderr, not both");
    } else {
        spec.alpha = get<double>(j, path, "alpha");
        if (spec.alpha <= 0) fail(path + ".alpha", "alpha > 0 required");
    }
    spec.seed = get_or<std::uint64_t>(j, path, "seed", 0);
    spec.model = get_or<std::string>(j, path, "model", "gaussian-element");
    if (spec.model != "gaussian-element") fail(path + ".model", "unknown noise model");
    return spec;
}

sdp::SolverOptions parse_solver(const json& j, const std::string& path) {
    check_keys(j, path,
               {"feas_tol", "max_iter", "penalty", "penalty_adapt", "penalty_update_every"});
    sdp::SolverOptions o;
    o.feas_tol = get_or<double>(j, path, "feas_tol", o.feas_tol);
    o.max_iter = get_or<int>(j, path, "max_iter", o.max_iter);
    o.penalty = get_or<double>(j, path, "penalty", o.penalty);
    o.penalty_adapt = get_or<bool>(j, path, "penalty_adapt", o.penalty_adapt);
    o.penalty_update_every =
        get_or<int>(j, path, "penalty_update_every", o.penalty_update_every);
    if (o.feas_tol <= 0) fail(path + ".feas_tol", "must be positive");
    if (o.max_iter < 1) fail(path + ".max_iter", "must be positive");
    if (o.penalty <= 0) fail(path + ".penalty", "must be positive");
    return o;
}

} // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config error: cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config error: " + std::string(e.what()));
    }
    fs::path base = fs::path(path).parent_path();

    check_keys(j, "$",
               {"experiment", "system", "noise", "w", "w_list", "seeds", "threads",
                "warm_start", "solver", "output_dir", "excited_index", "sizes",
                "manifest", "input_rdm", "mode"});

    ExperimentConfig cfg;
    cfg.experiment = experiment_from_string(get<std::string>(j, "$", "experiment"));
    if (!j.contains("system")) fail("$.system", "missing required key");
    cfg.system = parse_system(j.at("system"), "$.system", base);

    if (j.contains("noise") && !j.at("noise").is_null())
        cfg.noise = parse_noise(j.at("noise"), "$.noise", cfg.target_energy_stderr);

    if (j.contains("w") == j.contains("w_list"))
        fail("$", "give exactly one of `w` or `w_list`");
    if (j.contains("w")) {
        cfg.w_list = {get<double>(j, "$", "w")};
    } else {
        cfg.w_list = get<std::vector<double>>(j, "$", "w_list");
        if (cfg.w_list.empty()) fail("$.w_list", "must not be empty");
    }
    for (std::size_t i = 0; i < cfg.w_list.size(); ++i) {
        if (cfg.w_list[i] <= 0) fail("$.w_list", "weights must be positive");
        if (i > 0 && cfg.w_list[i] <= cfg.w_list[i - 1])
            fail("$.w_list", "weights must be strictly ascending");
    }

    cfg.seeds = get_or<int>(j, "$", "seeds", 20);
    if (cfg.seeds < 1) fail("$.seeds", "seeds >= 1 required");
    cfg.threads = get_or<int>(j, "$", "threads", 0);
    cfg.warm_start = get_or<bool>(j, "$", "warm_start", true);
    if (j.contains("solver")) cfg.solver = parse_solver(j.at("solver"), "$.solver");
    cfg.output_dir = get_or<std::string>(j, "$", "output_dir", "out");
    cfg.excited_index = get_or<int>(j, "$", "excited_index", 0);
    if (cfg.excited_index < 0) fail("$.excited_index", "must be nonnegative");
    if (j.contains("sizes")) {
        cfg.sizes = get<std::vector<int>>(j, "$", "sizes");
        for (int L : cfg.sizes)
            if (L < 2) fail("$.sizes", "sizes must be >= 2");
    }
    if (j.contains("manifest")) {
        cfg.manifest_path = (base / get<std::string>(j, "$", "manifest")).string();
        require_file(cfg.manifest_path, "$.manifest");
    }
    if (j.contains("input_rdm")) {
        cfg.input_rdm = (base / get<std::string>(j, "$", "input_rdm")).string();
        require_file(cfg.input_rdm, "$.input_rdm");
    }
    if (j.contains("mode")) {
        std::string m = get<std::string>(j, "$", "mode");
        if (m == "correlated-purification")
            cfg.mode = PurifyMode::correlated_purification;
        else if (m == "v2rdm")
            cfg.mode = PurifyMode::v2rdm;
        else if (m == "projection")
            cfg.mode = PurifyMode::projection;
        else
            fail("$.mode", "unknown mode `" + m + "`");
    }

    if ((cfg.experiment == ExperimentKind::dissociation ||
         cfg.experiment == ExperimentKind::spectra) &&
        cfg.manifest_path.empty())
        fail("$.manifest", "missing required key");

    if (cfg.experiment != ExperimentKind::purify_once && !cfg.noise)
        fail("$.noise", "this experiment requires a noise block");

    // resolved-config echo for reports
    json echo = j;
    echo["w_list"] = cfg.w_list;
    echo.erase("w");
    echo["seeds"] = cfg.seeds;
    echo["warm_start"] = cfg.warm_start;
    cfg.config_echo = echo.dump();
    return cfg;
}

std::vector<ManifestEntry> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config error: cannot open manifest " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config error in manifest: " + std::string(e.what()));
    }
    fs::path base = fs::path(path).parent_path();
    std::vector<ManifestEntry> out;
    if (!j.contains("fixtures") || !j.at("fixtures").is_array())
        throw ConfigError("config error in manifest: missing `fixtures` array");
    for (std::size_t i = 0; i < j.at("fixtures").size(); ++i) {
        const auto& jf = j.at("fixtures").at(i);
        std::string where = "fixtures[" + std::to_string(i) + "]";
        check_keys(jf, where, {"label", "path", "geometry", "fci_energy", "provenance"});
        ManifestEntry e;
        e.label = get<std::string>(jf, where, "label");
        e.path = (base / get<std::string>(jf, where, "path")).string();
        e.geometry = get_or<std::string>(jf, where, "geometry", "");
        e.fci_energy = get<double>(jf, where, "fci_energy");
        e.provenance = get_or<std::string>(jf, where, "provenance", "");
        if (!fs::exists(e.path))
            throw ConfigError("config error in manifest entry `" + e.label +
                              "`: missing file " + e.path);
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace rdmpurify
