#include "rdmpurify/purify.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rdmpurify {

const char* to_string(PurifyMode m) {
    switch (m) {
        case PurifyMode::correlated_purification: return "correlated-purification";
        case PurifyMode::v2rdm: return "v2rdm";
        case PurifyMode::projection: return "projection";
    }
    return "unknown";
}

namespace {

inline double pair_sign(int a, int b) { return a < b ? 1.0 : -1.0; }

struct Assembly {
    sdp::BlockSDPProblem problem;
    std::vector<std::tuple<int, int, int>> data_rows; // (constraint, I, J) packed
    int block_D = -1, block_Q = -1, block_G = -1, block_Ep = -1, block_Em = -1;
};

// Adds the 1/(N-1) contraction sum_m D^{am}_{bm} with the given prefactor
// to a constraint row.
void add_one_rdm_terms(sdp::BlockSDPProblem& p, int con, int block_d, int r, int n,
                       int a, int b, double prefactor) {
    double w = prefactor / (n - 1);
    for (int m = 0; m < r; ++m) {
        if (m == a || m == b) continue;
        double s = pair_sign(a, m) * pair_sign(b, m);
        int row = pair_index(r, std::min(a, m), std::max(a, m));
        int col = pair_index(r, std::min(b, m), std::max(b, m));
        p.add_entry(con, block_d, row, col, w * s);
    }
}

Assembly assemble(const ReducedHamiltonian& k, const TwoRDM* d_e, int n, double w,
                  PurifyMode mode) {
    const int r = k.r;
    const int p = pair_count(r);
    const bool slack = mode != PurifyMode::v2rdm;
    if (n < 2 || n > r)
        throw std::invalid_argument("assemble: electron count out of range");
    if (mode == PurifyMode::correlated_purification && w <= 0.0)
        throw std::invalid_argument("assemble: w > 0 required");
    if (d_e && d_e->r() != r)
        throw std::invalid_argument("assemble: K and D_e dimensions differ");

    Assembly a;
    auto& prob = a.problem;
    a.block_D = prob.add_block("D", p);
    a.block_Q = prob.add_block("Q", p);
    a.block_G = prob.add_block("G", r * r);
    if (slack) {
        a.block_Ep = prob.add_block("E+", p);
        a.block_Em = prob.add_block("E-", p);
    }

    if (mode != PurifyMode::projection)
        prob.set_objective(a.block_D, (4.0 * k.packed).eval());
    if (slack) {
        double coeff = mode == PurifyMode::projection ? 2.0 : 2.0 * w;
        Eigen::MatrixXd ce = coeff * Eigen::MatrixXd::Identity(p, p);
        prob.set_objective(a.block_Ep, ce);
        prob.set_objective(a.block_Em, ce);
    }

    // trace(D) = N(N-1) in the full-index convention
    {
        int con = prob.add_constraint(static_cast<double>(n) * (n - 1));
        for (int i = 0; i < p; ++i) prob.add_entry(con, a.block_D, i, i, 2.0);
    }

    // Q = f_Q(D) elementwise over the packed upper triangle
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
            int row = pair_index(r, i, j);
            for (int kk = 0; kk < r; ++kk)
                for (int l = kk + 1; l < r; ++l) {
                    int col = pair_index(r, kk, l);
                    if (col < row) continue;
                    double rhs = 0.0;
                    if (i == kk && j == l) rhs += 1.0;
                    if (i == l && j == kk) rhs -= 1.0;
                    int con = prob.add_constraint(rhs);
                    prob.add_entry(con, a.block_Q, row, col, 1.0);
                    prob.add_entry(con, a.block_D, row, col, -1.0);
                    if (i == kk) add_one_rdm_terms(prob, con, a.block_D, r, n, j, l, 1.0);
                    if (j == l) add_one_rdm_terms(prob, con, a.block_D, r, n, i, kk, 1.0);
                    if (i == l) add_one_rdm_terms(prob, con, a.block_D, r, n, j, kk, -1.0);
                    if (j == kk) add_one_rdm_terms(prob, con, a.block_D, r, n, i, l, -1.0);
                }
        }

    // G = f_G(D): G^{ij}_{kl} = d_jl 1D^i_k - D^{il}_{kj}
    for (int gi = 0; gi < r * r; ++gi) {
        int i = gi / r, j = gi % r;
        for (int gj = gi; gj < r * r; ++gj) {
            int kk = gj / r, l = gj % r;
            int con = prob.add_constraint(0.0);
            prob.add_entry(con, a.block_G, gi, gj, 1.0);
            if (j == l) add_one_rdm_terms(prob, con, a.block_D, r, n, i, kk, -1.0);
            if (i != l && kk != j) {
                double s = pair_sign(i, l) * pair_sign(kk, j);
                int row = pair_index(r, std::min(i, l), std::max(i, l));
                int col = pair_index(r, std::min(kk, j), std::max(kk, j));
                prob.add_entry(con, a.block_D, row, col, s);
            }
        }
    }

    // D - E+ + E- = D_e elementwise
    if (slack) {
        for (int row = 0; row < p; ++row)
            for (int col = row; col < p; ++col) {
                double rhs = d_e ? d_e->packed()(row, col) : 0.0;
                int con = prob.add_constraint(rhs);
                prob.add_entry(con, a.block_D, row, col, 1.0);
                prob.add_entry(con, a.block_Ep, row, col, -1.0);
                prob.add_entry(con, a.block_Em, row, col, 1.0);
                a.data_rows.emplace_back(con, row, col);
            }
    }

    prob.finalize();
    return a;
}

PurificationResult make_result(const ReducedHamiltonian& k, const TwoRDM& d_e,
                               const Assembly& a, const sdp::SDPSolution& sol, double w,
                               PurifyMode mode) {
    TwoRDM d_p(k.r, d_e.particles(), sol.X[a.block_D]);
    PurificationResult res{std::move(d_p)};
    res.energy = energy(k, res.D_p);
    if (a.block_Ep >= 0)
        res.slack_trace = 2.0 * (sol.X[a.block_Ep].trace() + sol.X[a.block_Em].trace());
    res.deviation = deviation_norms(res.D_p, d_e);
    res.eig_D = min_eigenvalues(res.D_p);
    res.eig_Q = min_eigenvalues(map_Q(res.D_p));
    res.eig_G = min_eigenvalues(map_G(res.D_p));
    res.trace = res.D_p.trace();
    res.w = w;
    res.mode = mode;
    res.iterations = sol.iterations;
    res.primal_residual = sol.primal_residual;
    res.dual_residual = sol.dual_residual;
    res.sdp_objective = sol.objective;
    res.wall_time_s = sol.wall_time_s;
    res.status = sol.status;
    return res;
}

void throw_on_divergence(const sdp::SDPSolution& sol, double w) {
    if (sol.status != sdp::SolveStatus::diverging) return;
    std::ostringstream msg;
    msg << "sdp solve diverged at w=" << w << ": primal residual " << sol.primal_residual
        << ", dual residual " << sol.dual_residual << " after " << sol.iterations
        << " iterations";
    throw std::runtime_error(msg.str());
}

} // namespace

sdp::BlockSDPProblem assemble_cp_problem(const ReducedHamiltonian& k, const TwoRDM& d_e,
                                         int n_electrons, double w) {
    return assemble(k, &d_e, n_electrons, w, PurifyMode::correlated_purification)
        .problem;
}

sdp::BlockSDPProblem assemble_v2rdm_problem(const ReducedHamiltonian& k, int n_electrons) {
    return assemble(k, nullptr, n_electrons, 1.0, PurifyMode::v2rdm).problem;
}

sdp::BlockSDPProblem assemble_projection_problem(const TwoRDM& d_e, int n_electrons) {
    ReducedHamiltonian k;
    k.r = d_e.r();
    k.N = n_electrons;
    k.packed = Eigen::MatrixXd::Zero(pair_count(k.r), pair_count(k.r));
    return assemble(k, &d_e, n_electrons, 1.0, PurifyMode::projection).problem;
}

PurificationResult purify(const ReducedHamiltonian& k, const TwoRDM& d_e, int n_electrons,
                          const PurificationConfig& config) {
    PurificationFamily family(k, n_electrons, config.mode, config.solver);
    return family.run(d_e, config.w);
}

std::vector<PurificationResult> weight_sweep(const ReducedHamiltonian& k, const TwoRDM& d_e,
                                             int n_electrons,
                                             const std::vector<double>& w_list,
                                             const PurificationConfig& config) {
    if (w_list.empty()) throw std::invalid_argument("weight_sweep: empty weight list");
    for (std::size_t i = 0; i < w_list.size(); ++i) {
        if (w_list[i] <= 0.0)
            throw std::invalid_argument("weight_sweep: weights must be positive");
        if (i > 0 && w_list[i] <= w_list[i - 1])
            throw std::invalid_argument("weight_sweep: weights must be ascending");
    }
    PurificationFamily family(k, n_electrons, config.mode, config.solver);
    return family.sweep(d_e, w_list, config.warm_start);
}

PurificationFamily::PurificationFamily(const ReducedHamiltonian& k, int n_electrons,
                                       PurifyMode mode, const sdp::SolverOptions& opts)
    : k_(k), n_(n_electrons), mode_(mode) {
    Assembly a = assemble(k, nullptr, n_electrons, 1.0, mode);
    problem_ = std::move(a.problem);
    // keep the data-row bookkeeping; problem_ owns the structure
    data_rows_ = std::move(a.data_rows);
    blocks_[0] = a.block_D;
    blocks_[1] = a.block_Q;
    blocks_[2] = a.block_G;
    blocks_[3] = a.block_Ep;
    blocks_[4] = a.block_Em;
    solver_ = std::make_unique<sdp::BoundaryPointSolver>(problem_, opts);
}

PurificationResult PurificationFamily::run(const TwoRDM& d_e, double w,
                                           const sdp::SDPSolution* warm,
                                           sdp::SDPSolution* keep) const {
    if (d_e.r() != k_.r)
        throw std::invalid_argument("PurificationFamily: dimension mismatch");
    if (mode_ == PurifyMode::correlated_purification && w <= 0.0)
        throw std::invalid_argument("PurificationFamily: w > 0 required");

    sdp::SolveRequest req;
    Eigen::VectorXd rhs;
    std::vector<std::pair<int, Eigen::MatrixXd>> objectives;
    if (!data_rows_.empty()) {
        rhs.resize(problem_.n_constraints());
        for (int m = 0; m < problem_.n_constraints(); ++m)
            rhs[m] = problem_.constraint(m).rhs;
        for (const auto& [con, row, col] : data_rows_) rhs[con] = d_e.packed()(row, col);
        req.rhs = &rhs;
    }
    if (mode_ == PurifyMode::correlated_purification) {
        int p = pair_count(k_.r);
        Eigen::MatrixXd ce = 2.0 * w * Eigen::MatrixXd::Identity(p, p);
        objectives.emplace_back(blocks_[3], ce);
        objectives.emplace_back(blocks_[4], std::move(ce));
        req.objectives = &objectives;
    }
    req.warm_start = warm;

    sdp::SDPSolution sol = solver_->solve(req);
    throw_on_divergence(sol, w);

    Assembly view; // lightweight view for result extraction
    view.block_D = blocks_[0];
    view.block_Ep = blocks_[3];
    view.block_Em = blocks_[4];
    PurificationResult res = make_result(k_, d_e, view, sol, w, mode_);
    if (keep) *keep = std::move(sol);
    return res;
}

std::vector<PurificationResult> PurificationFamily::sweep(
    const TwoRDM& d_e, const std::vector<double>& w_list, bool warm_start,
    const std::vector<sdp::SDPSolution>* pilot,
    std::vector<sdp::SDPSolution>* keep) const {
    if (pilot && pilot->size() != w_list.size())
        throw std::invalid_argument("sweep: pilot/weight list length mismatch");
    std::vector<PurificationResult> out;
    out.reserve(w_list.size());
    if (keep) keep->resize(w_list.size());
    sdp::SDPSolution carry;
    bool have_carry = false;
    for (std::size_t i = 0; i < w_list.size(); ++i) {
        double w = w_list[i];
        try {
            sdp::SDPSolution sol;
            const sdp::SDPSolution* warm = nullptr;
            if (warm_start) {
                if (pilot)
                    warm = &(*pilot)[i];
                else if (have_carry)
                    warm = &carry;
            }
            out.push_back(run(d_e, w, warm, &sol));
            if (keep) (*keep)[i] = sol;
            carry = std::move(sol);
            have_carry = warm_start;
        } catch (const std::exception& e) {
            throw std::runtime_error("weight sweep failed at w=" + std::to_string(w) +
                                     ": " + e.what());
        }
    }
    return out;
}

} // namespace rdmpurify
