#pragma once

#include <array>
#include <memory>
#include <tuple>
#include <vector>

#include "rdmpurify/rdm.hpp"
#include "rdmpurify/reduced_hamiltonian.hpp"
#include "rdmpurify/sdp.hpp"

namespace rdmpurify {

enum class PurifyMode { correlated_purification, v2rdm, projection };

const char* to_string(PurifyMode m);

struct PurificationConfig {
    double w = 0.1;
    PurifyMode mode = PurifyMode::correlated_purification;
    sdp::SolverOptions solver;
    bool warm_start = true; // reuse (X, y, z) along weight sweeps
};

struct PurificationResult {
    TwoRDM D_p;
    double energy = 0.0;      // trace(K D_p) + e_core
    double slack_trace = 0.0; // trace(E+) + trace(E-), full-index convention
    DeviationNorms deviation; // D_p vs the measured input
    SpectrumSummary eig_D;
    SpectrumSummary eig_Q; // of f_Q(D_p)
    SpectrumSummary eig_G; // of f_G(D_p)
    double trace = 0.0;    // full-index trace of D_p
    double w = 0.0;
    PurifyMode mode = PurifyMode::correlated_purification;
    // solver diagnostics
    int iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double sdp_objective = 0.0;
    double wall_time_s = 0.0;
    sdp::SolveStatus status = sdp::SolveStatus::converged;
};

/// The correlated-purification program over five PSD blocks
/// D, Q, G, E+, E- with equality constraints
///   trace(D) = N(N-1)            (full-index convention)
///   Q = f_Q(D), G = f_G(D)       (elementwise)
///   D - E+ + E- = D_e            (elementwise)
/// and objective trace(K D) + w (trace(E+) + trace(E-)).
sdp::BlockSDPProblem assemble_cp_problem(const ReducedHamiltonian& k,
                                         const TwoRDM& d_e, int n_electrons,
                                         double w);

/// D, Q, G blocks only; objective trace(K D).  The w -> 0 limit.
sdp::BlockSDPProblem assemble_v2rdm_problem(const ReducedHamiltonian& k,
                                            int n_electrons);

/// Slack blocks with objective trace(E+) + trace(E-) and no energy term:
/// the nuclear-norm projection onto the 2-positive set (w -> infinity).
sdp::BlockSDPProblem assemble_projection_problem(const TwoRDM& d_e,
                                                 int n_electrons);

/// Solve one purification.  Throws std::runtime_error carrying solver
/// diagnostics when the solve diverges.
PurificationResult purify(const ReducedHamiltonian& k, const TwoRDM& d_e,
                          int n_electrons, const PurificationConfig& config);

/// Solve along an ascending list of weights, warm-starting each solve from
/// the previous one when config.warm_start is set.
std::vector<PurificationResult> weight_sweep(const ReducedHamiltonian& k,
                                             const TwoRDM& d_e, int n_electrons,
                                             const std::vector<double>& w_list,
                                             const PurificationConfig& config);

/// Reusable solver for families of purifications that share a constraint
/// structure (same r, N, mode): seeds and weights change only the rhs and
/// the objective, so the normal-equations factorization is built once.
class PurificationFamily {
  public:
    PurificationFamily(const ReducedHamiltonian& k, int n_electrons,
                       PurifyMode mode, const sdp::SolverOptions& opts);

    /// Purify one measured matrix; in v2rdm mode d_e only sets the
    /// deviation reference.
    PurificationResult run(const TwoRDM& d_e, double w,
                           const sdp::SDPSolution* warm = nullptr,
                           sdp::SDPSolution* keep = nullptr) const;

    /// Sweep the weight list.  With warm_start each entry reuses the
    /// previous entry's iterate; a pilot (per-w solutions from a nearby
    /// input, e.g. another noise seed) takes precedence over chaining.
    std::vector<PurificationResult> sweep(
        const TwoRDM& d_e, const std::vector<double>& w_list, bool warm_start,
        const std::vector<sdp::SDPSolution>* pilot = nullptr,
        std::vector<sdp::SDPSolution>* keep = nullptr) const;

  private:
    ReducedHamiltonian k_;
    int n_;
    PurifyMode mode_;
    sdp::BlockSDPProblem problem_;
    std::vector<std::tuple<int, int, int>> data_rows_; // (constraint, I, J)
    std::array<int, 5> blocks_{-1, -1, -1, -1, -1};    // D, Q, G, E+, E-
    std::unique_ptr<sdp::BoundaryPointSolver> solver_;
};

} // namespace rdmpurify
