#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rdmpurify/experiments.hpp"
#include "rdmpurify/fock.hpp"
#include "rdmpurify/integrals.hpp"
#include "rdmpurify/noise.hpp"
#include "rdmpurify/purify.hpp"
#include "rdmpurify/rdm.hpp"
#include "rdmpurify/reduced_hamiltonian.hpp"
#include "rdmpurify/version.hpp"

namespace py = pybind11;
using namespace rdmpurify;

namespace {

PurifyMode mode_from_string(const std::string& s) {
    if (s == "correlated-purification") return PurifyMode::correlated_purification;
    if (s == "v2rdm") return PurifyMode::v2rdm;
    if (s == "projection") return PurifyMode::projection;
    throw std::invalid_argument("unknown mode: " + s);
}

py::dict result_dict(const PurificationResult& r) {
    py::dict d;
    d["energy"] = r.energy;
    d["slack_trace"] = r.slack_trace;
    d["deviation_frobenius"] = r.deviation.frobenius;
    d["deviation_nuclear"] = r.deviation.nuclear;
    d["min_eig_D"] = r.eig_D.min_eigenvalue;
    d["min_eig_Q"] = r.eig_Q.min_eigenvalue;
    d["min_eig_G"] = r.eig_G.min_eigenvalue;
    d["trace"] = r.trace;
    d["w"] = r.w;
    d["mode"] = to_string(r.mode);
    d["iterations"] = r.iterations;
    d["primal_residual"] = r.primal_residual;
    d["dual_residual"] = r.dual_residual;
    d["status"] = sdp::to_string(r.status);
    return d;
}

sdp::SolverOptions solver_options(double feas_tol, int max_iter, double penalty) {
    sdp::SolverOptions o;
    o.feas_tol = feas_tol;
    o.max_iter = max_iter;
    o.penalty = penalty;
    return o;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Correlated purification of noisy two-electron reduced density matrices";
    m.attr("__version__") = kVersion;

    py::class_<MolecularIntegrals>(m, "MolecularIntegrals")
        .def_readonly("r", &MolecularIntegrals::r)
        .def_readonly("e_core", &MolecularIntegrals::e_core)
        .def_readonly("label", &MolecularIntegrals::label)
        .def_property_readonly("h", [](const MolecularIntegrals& x) { return x.h; })
        .def("v", [](const MolecularIntegrals& x, int i, int j, int k, int l) {
            return x.v(i, j, k, l);
        });

    py::class_<TwoRDM>(m, "TwoRDM")
        .def(py::init<int, int>(), py::arg("r"), py::arg("n"))
        .def(py::init([](int r, int n, const Eigen::MatrixXd& packed) {
                 return TwoRDM::from_packed(r, n, packed);
             }),
             py::arg("r"), py::arg("n"), py::arg("packed"))
        .def_property_readonly("r", &TwoRDM::r)
        .def_property_readonly("n", &TwoRDM::particles)
        .def_property_readonly("packed",
                               [](const TwoRDM& d) -> Eigen::MatrixXd { return d.packed(); })
        .def("element", &TwoRDM::element)
        .def("trace", &TwoRDM::trace)
        .def("frobenius_norm", &TwoRDM::frobenius_norm)
        .def("__repr__", [](const TwoRDM& d) {
            std::ostringstream s;
            s << "TwoRDM(r=" << d.r() << ", n=" << d.particles() << ")";
            return s.str();
        });

    py::class_<ReducedHamiltonian>(m, "ReducedHamiltonian")
        .def_readonly("r", &ReducedHamiltonian::r)
        .def_readonly("n", &ReducedHamiltonian::N)
        .def_readonly("e_core", &ReducedHamiltonian::e_core)
        .def_readonly("packed", &ReducedHamiltonian::packed);

    py::class_<FockBasis, std::shared_ptr<FockBasis>>(m, "FockBasis")
        .def_readonly("r", &FockBasis::r)
        .def_readonly("n", &FockBasis::N)
        .def_readonly("sz2", &FockBasis::sz2)
        .def_property_readonly("dets", [](const FockBasis& b) { return b.dets; })
        .def("size", &FockBasis::size);

    m.def("parse_fcidump_file", &parse_fcidump_file, py::arg("path"));
    m.def(
        "parse_fcidump",
        [](const std::string& text) {
            std::istringstream in(text);
            return parse_fcidump(in);
        },
        py::arg("text"));
    m.def(
        "hubbard_chain",
        [](int L, double t, double u, const std::string& boundary) {
            return hubbard_chain(L, t, u,
                                 boundary == "periodic" ? Boundary::periodic
                                                        : Boundary::open);
        },
        py::arg("L"), py::arg("t") = 1.0, py::arg("U") = 4.0,
        py::arg("boundary") = "open");
    m.def("build_reduced_hamiltonian", &build_reduced_hamiltonian, py::arg("ints"),
          py::arg("n"));
    m.def("energy", &energy, py::arg("k"), py::arg("d"));

    m.def(
        "build_basis",
        [](int r, int n, int sz2) {
            return std::const_pointer_cast<FockBasis>(build_basis(r, n, sz2));
        },
        py::arg("r"), py::arg("n"), py::arg("sz2"));
    m.def(
        "build_hamiltonian_matrix",
        [](const MolecularIntegrals& ints, const FockBasis& basis) {
            return build_hamiltonian_matrix(ints, basis);
        },
        py::arg("ints"), py::arg("basis"));
    m.def(
        "eigensolve",
        [](const Eigen::MatrixXd& h, std::shared_ptr<FockBasis> basis, int k) {
            auto pairs = eigensolve(h, basis, k);
            py::list out;
            for (auto& [value, state] : pairs)
                out.append(py::make_tuple(value, state.amplitudes));
            return out;
        },
        py::arg("h"), py::arg("basis"), py::arg("k"));
    m.def(
        "rdm2_from_state",
        [](std::shared_ptr<FockBasis> basis, const Eigen::VectorXd& amplitudes) {
            return rdm2_from_state({std::move(basis), amplitudes});
        },
        py::arg("basis"), py::arg("amplitudes"));
    m.def(
        "rdmQ_from_state",
        [](std::shared_ptr<FockBasis> basis, const Eigen::VectorXd& amplitudes) {
            return rdmQ_from_state({std::move(basis), amplitudes});
        },
        py::arg("basis"), py::arg("amplitudes"));
    m.def(
        "rdmG_from_state",
        [](std::shared_ptr<FockBasis> basis, const Eigen::VectorXd& amplitudes) {
            return rdmG_from_state({std::move(basis), amplitudes}).data;
        },
        py::arg("basis"), py::arg("amplitudes"));

    m.def("contract_to_1rdm",
          [](const TwoRDM& d) { return contract_to_1rdm(d).data; });
    m.def("map_Q", &map_Q);
    m.def("map_G", [](const TwoRDM& d) { return map_G(d).data; });
    m.def(
        "min_eigenvalue",
        [](const TwoRDM& d) { return min_eigenvalues(d).min_eigenvalue; },
        "Smallest eigenvalue of the packed pair matrix");
    m.def("deviation_norms", [](const TwoRDM& a, const TwoRDM& b) {
        auto n = deviation_norms(a, b);
        return py::make_tuple(n.frobenius, n.nuclear);
    });
    m.def("save_rdm_json", &save_rdm_json_file, py::arg("d"), py::arg("path"));
    m.def("load_rdm_json", &load_rdm_json_file, py::arg("path"));

    m.def(
        "apply_noise",
        [](const TwoRDM& d, long long shots, double alpha, std::uint64_t seed) {
            return apply_noise(d, NoiseSpec{shots, alpha, seed});
        },
        py::arg("d"), py::arg("shots"), py::arg("alpha"), py::arg("seed"));
    m.def("calibrate_alpha", &calibrate_alpha, py::arg("target_energy_stderr"),
          py::arg("k"), py::arg("d"), py::arg("shots"));

    m.def("psd_project", &sdp::psd_project, py::arg("m"));

    m.def(
        "purify",
        [](const ReducedHamiltonian& k, const TwoRDM& d_e, int n, double w,
           const std::string& mode, double feas_tol, int max_iter, double penalty) {
            PurificationConfig cfg;
            cfg.w = w;
            cfg.mode = mode_from_string(mode);
            cfg.solver = solver_options(feas_tol, max_iter, penalty);
            PurificationResult res = purify(k, d_e, n, cfg);
            py::dict out = result_dict(res);
            out["D_p"] = res.D_p;
            return out;
        },
        py::arg("k"), py::arg("d_e"), py::arg("n"), py::arg("w") = 0.1,
        py::arg("mode") = "correlated-purification", py::arg("feas_tol") = 1e-6,
        py::arg("max_iter") = 50000, py::arg("penalty") = 1.0);

    m.def(
        "weight_sweep",
        [](const ReducedHamiltonian& k, const TwoRDM& d_e, int n,
           const std::vector<double>& w_list, double feas_tol, int max_iter,
           bool warm_start) {
            PurificationConfig cfg;
            cfg.solver = solver_options(feas_tol, max_iter, 1.0);
            cfg.warm_start = warm_start;
            auto results = weight_sweep(k, d_e, n, w_list, cfg);
            py::list out;
            for (auto& r : results) {
                py::dict d = result_dict(r);
                d["D_p"] = r.D_p;
                out.append(d);
            }
            return out;
        },
        py::arg("k"), py::arg("d_e"), py::arg("n"), py::arg("w_list"),
        py::arg("feas_tol") = 1e-6, py::arg("max_iter") = 50000,
        py::arg("warm_start") = true);

    m.def(
        "run_experiment",
        [](const std::string& config_path) {
            ExperimentOutput out = run_experiment(load_experiment_config(config_path));
            return py::make_tuple(out.csv_path, out.report_path);
        },
        py::arg("config_path"));
}
