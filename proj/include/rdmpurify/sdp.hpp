#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace rdmpurify::sdp {

/// min sum_b trace(C_b X_b)  s.t.  sum_b trace(A_{m,b} X_b) = rhs_m,
/// X_b PSD.  Constraint rows are assembled from sparse coefficient
/// triplets; finalize() symmetrizes each row, merges duplicate entries and
/// rejects duplicate rows (hash of the canonical sparse form).
class BlockSDPProblem {
  public:
    struct Entry {
        int block;
        int row;
        int col;
        double coeff;
    };
    struct Constraint {
        double rhs;
        std::vector<Entry> entries;
    };

    int add_block(const std::string& name, int dim);
    int n_blocks() const { return static_cast<int>(dims_.size()); }
    int block_dim(int b) const { return dims_[b]; }
    const std::string& block_name(int b) const { return names_[b]; }

    /// Objective matrix for one block; must be symmetric to 1e-10.
    void set_objective(int block, const Eigen::MatrixXd& c);
    const Eigen::MatrixXd& objective(int block) const { return objectives_[block]; }

    int add_constraint(double rhs);
    void add_entry(int constraint, int block, int row, int col, double coeff);
    int n_constraints() const { return static_cast<int>(constraints_.size()); }
    const Constraint& constraint(int m) const { return constraints_[m]; }

    void finalize();
    bool finalized() const { return finalized_; }

    /// Total length of the concatenated per-block matrices.
    long primal_size() const;
    long block_offset(int b) const { return offsets_[b]; }

    void dump_json(std::ostream& out) const;
    static BlockSDPProblem from_json(std::istream& in);

  private:
    std::vector<std::string> names_;
    std::vector<int> dims_;
    std::vector<long> offsets_;
    std::vector<Eigen::MatrixXd> objectives_;
    std::vector<Constraint> constraints_;
    bool finalized_ = false;
};

enum class PenaltyRule {
    ratio,    // mu *= primal/dual every update step (residual balancing)
    deadband, // x1.1 / /1.1 only when one residual lags the other by >10x
};

struct SolverOptions {
    double feas_tol = 1e-6;
    int max_iter = 50000;
    double penalty = 1.0;      // initial augmented-Lagrangian penalty
    bool penalty_adapt = true;
    PenaltyRule penalty_rule = PenaltyRule::ratio;
    int penalty_update_every = 50;
    int divergence_patience = 5000; // iterations without a new best residual
    double divergence_factor = 100.0;
};

enum class SolveStatus { converged, max_iter, diverging };

const char* to_string(SolveStatus s);

struct SDPSolution {
    std::vector<Eigen::MatrixXd> X; // per-block primal, PSD by construction
    Eigen::VectorXd y;              // dual vector
    Eigen::VectorXd z;              // dual slack (flat block storage)
    double objective = 0.0;
    double dual_objective = 0.0;
    double primal_residual = 0.0; // ||A(X) - rhs||_2
    double dual_residual = 0.0;   // ||A^T y + z - c||_2
    int iterations = 0;
    double wall_time_s = 0.0;
    SolveStatus status = SolveStatus::max_iter;
    double objective_scale = 1.0; // internal normalization of c, reported back
    double final_penalty = 0.0;
};

/// Frobenius-nearest PSD matrix: eigendecompose, clip negative eigenvalues,
/// reconstruct.  Throws std::invalid_argument when the input is asymmetric
/// beyond 1e-10.
Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m);

/// Per-solve overrides for problems sharing one constraint structure.
/// Fields left null keep the values the solver was constructed with.
struct SolveRequest {
    const Eigen::VectorXd* rhs = nullptr;
    const std::vector<std::pair<int, Eigen::MatrixXd>>* objectives = nullptr;
    const SDPSolution* warm_start = nullptr;
};

/// Boundary-point (augmented-Lagrangian) solver.  Each iteration solves
/// the normal equations A A^T y = A(c - z) + mu (rhs - A x) with a cached
/// sparse Cholesky factorization, then splits mu x + A^T y - c into its
/// positive and negative spectral parts to update x and z.  The iterate
/// sequence is deterministic; the factorization is built once per problem
/// structure and shared across rhs/objective overrides, warm starts and
/// concurrent solve() calls.
class BoundaryPointSolver {
  public:
    BoundaryPointSolver(const BlockSDPProblem& p, SolverOptions opts = {});
    ~BoundaryPointSolver();

    BoundaryPointSolver(const BoundaryPointSolver&) = delete;
    BoundaryPointSolver& operator=(const BoundaryPointSolver&) = delete;

    SDPSolution solve() const;
    SDPSolution solve(const SolveRequest& req) const;

    const SolverOptions& options() const { return opts_; }

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    SolverOptions opts_;
};

SDPSolution solve(const BlockSDPProblem& p, const SolverOptions& opts = {});

struct KKTBlockReport {
    std::string name;
    double min_eig_X = 0.0;
    double min_eig_Z = 0.0;      // Z_b = C_b - sum_m y_m A_{m,b}
    double complementarity = 0.0; // trace(X_b Z_b)
    bool ok = true;
};

struct KKTReport {
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double objective = 0.0;
    double dual_objective = 0.0;
    double tol = 0.0;
    double dual_tol = 0.0; // tol x max(1, |c|_inf)
    double comp_tol = 0.0; // tol x scale with scale = max(1,|c|_inf)(1+|objective|)
    std::vector<KKTBlockReport> blocks;
    bool ok = true;
};

/// Recompute primal feasibility, dual feasibility and complementarity of a
/// solution against the problem data, independently of the solver state.
KKTReport check_kkt(const BlockSDPProblem& p, const SDPSolution& sol, double tol);

} // namespace rdmpurify::sdp
