#include "rdmpurify/sdp.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <unordered_set>

namespace rdmpurify::sdp {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::max_iter: return "max_iter";
        case SolveStatus::diverging: return "diverging";
    }
    return "unknown";
}

int BlockSDPProblem::add_block(const std::string& name, int dim) {
    if (finalized_) throw std::logic_error("BlockSDPProblem: already finalized");
    if (dim <= 0) throw std::invalid_argument("BlockSDPProblem: block dim must be positive");
    names_.push_back(name);
    dims_.push_back(dim);
    objectives_.push_back(Eigen::MatrixXd::Zero(dim, dim));
    return static_cast<int>(dims_.size()) - 1;
}

void BlockSDPProblem::set_objective(int block, const Eigen::MatrixXd& c) {
    if (c.rows() != dims_[block] || c.cols() != dims_[block])
        throw std::invalid_argument("set_objective: dimension mismatch");
    if ((c - c.transpose()).norm() > 1e-10)
        throw std::invalid_argument("set_objective: objective matrix must be symmetric");
    objectives_[block] = c;
}

int BlockSDPProblem::add_constraint(double rhs) {
    if (finalized_) throw std::logic_error("BlockSDPProblem: already finalized");
    constraints_.push_back({rhs, {}});
    return static_cast<int>(constraints_.size()) - 1;
}

void BlockSDPProblem::add_entry(int constraint, int block, int row, int col, double coeff) {
    if (finalized_) throw std::logic_error("BlockSDPProblem: already finalized");
    if (block < 0 || block >= n_blocks())
        throw std::invalid_argument("add_entry: bad block index");
    if (row < 0 || row >= dims_[block] || col < 0 || col >= dims_[block])
        throw std::invalid_argument("add_entry: entry out of block range");
    if (coeff == 0.0) return;
    constraints_[constraint].entries.push_back({block, row, col, coeff});
}

void BlockSDPProblem::finalize() {
    if (finalized_) return;

    offsets_.assign(dims_.size() + 1, 0);
    for (std::size_t b = 0; b < dims_.size(); ++b)
        offsets_[b + 1] = offsets_[b] + static_cast<long>(dims_[b]) * dims_[b];

    std::unordered_set<std::size_t> row_hashes;
    for (auto& con : constraints_) {
        // symmetrize: each entry contributes half to (r,c) and half to (c,r)
        std::vector<Entry> sym;
        sym.reserve(con.entries.size() * 2);
        for (const auto& e : con.entries) {
            if (e.row == e.col) {
                sym.push_back(e);
            } else {
                sym.push_back({e.block, e.row, e.col, e.coeff / 2.0});
                sym.push_back({e.block, e.col, e.row, e.coeff / 2.0});
            }
        }
        std::sort(sym.begin(), sym.end(), [](const Entry& a, const Entry& b) {
            return std::tie(a.block, a.row, a.col) < std::tie(b.block, b.row, b.col);
        });
        std::vector<Entry> merged;
        for (const auto& e : sym) {
            if (!merged.empty() && merged.back().block == e.block &&
                merged.back().row == e.row && merged.back().col == e.col)
                merged.back().coeff += e.coeff;
            else
                merged.push_back(e);
        }
        merged.erase(std::remove_if(merged.begin(), merged.end(),
                                    [](const Entry& e) { return e.coeff == 0.0; }),
                     merged.end());
        if (merged.empty())
            throw std::invalid_argument("BlockSDPProblem: empty constraint row");
        con.entries = std::move(merged);

        std::size_t hash = 0xcbf29ce484222325ull;
        auto mix = [&hash](std::uint64_t v) {
            hash ^= v;
            hash *= 0x100000001b3ull;
        };
        for (const auto& e : con.entries) {
            mix(static_cast<std::uint64_t>(e.block) << 40 ^
                static_cast<std::uint64_t>(e.row) << 20 ^
                static_cast<std::uint64_t>(e.col));
            std::uint64_t bits;
            static_assert(sizeof(bits) == sizeof(e.coeff));
            std::memcpy(&bits, &e.coeff, sizeof(bits));
            mix(bits);
        }
        if (!row_hashes.insert(hash).second)
            throw std::invalid_argument(
                "BlockSDPProblem: duplicate constraint row detected");
    }
    finalized_ = true;
}

long BlockSDPProblem::primal_size() const {
    long n = 0;
    for (int d : dims_) n += static_cast<long>(d) * d;
    return n;
}

void BlockSDPProblem::dump_json(std::ostream& out) const {
    nlohmann::json j;
    j["blocks"] = nlohmann::json::array();
    for (int b = 0; b < n_blocks(); ++b)
        j["blocks"].push_back({{"name", names_[b]}, {"dim", dims_[b]}});
    j["objective"] = nlohmann::json::array();
    for (int b = 0; b < n_blocks(); ++b) {
        nlohmann::json triplets = nlohmann::json::array();
        for (int row = 0; row < dims_[b]; ++row)
            for (int col = 0; col < dims_[b]; ++col)
                if (objectives_[b](row, col) != 0.0)
                    triplets.push_back({row, col, objectives_[b](row, col)});
        j["objective"].push_back(triplets);
    }
    j["constraints"] = nlohmann::json::array();
    for (const auto& con : constraints_) {
        nlohmann::json jc;
        jc["rhs"] = con.rhs;
        jc["entries"] = nlohmann::json::array();
        for (const auto& e : con.entries)
            jc["entries"].push_back({e.block, e.row, e.col, e.coeff});
        j["constraints"].push_back(jc);
    }
    out << j.dump() << "\n";
}

BlockSDPProblem BlockSDPProblem::from_json(std::istream& in) {
    nlohmann::json j = nlohmann::json::parse(in);
    BlockSDPProblem p;
    for (const auto& jb : j.at("blocks"))
        p.add_block(jb.at("name").get<std::string>(), jb.at("dim").get<int>());
    for (int b = 0; b < p.n_blocks(); ++b) {
        Eigen::MatrixXd c = Eigen::MatrixXd::Zero(p.block_dim(b), p.block_dim(b));
        for (const auto& t : j.at("objective").at(b))
            c(t.at(0).get<int>(), t.at(1).get<int>()) = t.at(2).get<double>();
        p.set_objective(b, c);
    }
    for (const auto& jc : j.at("constraints")) {
        int m = p.add_constraint(jc.at("rhs").get<double>());
        for (const auto& t : jc.at("entries"))
            p.add_entry(m, t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>(),
                        t.at(3).get<double>());
    }
    p.finalize();
    return p;
}

Eigen::MatrixXd psd_project(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("psd_project: square input required");
    if ((m - m.transpose()).norm() > 1e-10)
        throw std::invalid_argument("psd_project: input not symmetric");
    Eigen::MatrixXd sym = (m + m.transpose()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

// ---------------------------------------------------------------------------

struct BoundaryPointSolver::Impl {
    // problem data
    std::vector<int> dims;
    std::vector<long> offsets;
    long n_primal = 0;
    int n_dual = 0;
    Eigen::VectorXd c;   // flat objective
    Eigen::VectorXd rhs; // constraint right-hand sides
    std::vector<std::string> names;

    Eigen::SparseMatrix<double> A;  // n_dual x n_primal
    Eigen::SparseMatrix<double> At; // cached transpose
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> normal; // A A^T

    Eigen::VectorXd flatten_objective(
        const BlockSDPProblem& p,
        const std::vector<std::pair<int, Eigen::MatrixXd>>* overrides) const;
};

namespace {

Eigen::VectorXd flatten_blocks(const std::vector<Eigen::MatrixXd>& mats,
                               const std::vector<long>& offsets, long n_primal) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_primal);
    for (std::size_t b = 0; b < mats.size(); ++b) {
        const auto& m = mats[b];
        Eigen::Map<Eigen::VectorXd>(out.data() + offsets[b], m.size()) =
            Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
    }
    return out;
}

} // namespace

Eigen::VectorXd BoundaryPointSolver::Impl::flatten_objective(
    const BlockSDPProblem& p,
    const std::vector<std::pair<int, Eigen::MatrixXd>>* overrides) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_primal);
    for (int b = 0; b < static_cast<int>(dims.size()); ++b) {
        const Eigen::MatrixXd* src = &p.objective(b);
        if (overrides)
            for (const auto& [ob, om] : *overrides)
                if (ob == b) src = &om;
        Eigen::Map<Eigen::VectorXd>(out.data() + offsets[b], src->size()) =
            Eigen::Map<const Eigen::VectorXd>(src->data(), src->size());
    }
    return out;
}

BoundaryPointSolver::BoundaryPointSolver(const BlockSDPProblem& p, SolverOptions opts)
    : impl_(std::make_unique<Impl>()), opts_(opts) {
    if (!p.finalized())
        throw std::invalid_argument("BoundaryPointSolver: problem not finalized");
    auto& im = *impl_;
    im.dims.resize(p.n_blocks());
    im.names.resize(p.n_blocks());
    im.offsets.assign(p.n_blocks() + 1, 0);
    for (int b = 0; b < p.n_blocks(); ++b) {
        im.dims[b] = p.block_dim(b);
        im.names[b] = p.block_name(b);
        im.offsets[b + 1] = im.offsets[b] + static_cast<long>(im.dims[b]) * im.dims[b];
    }
    im.n_primal = im.offsets.back();
    im.n_dual = p.n_constraints();
    im.c = im.flatten_objective(p, nullptr);
    im.rhs.resize(im.n_dual);

    std::vector<Eigen::Triplet<double>> trips;
    for (int m = 0; m < im.n_dual; ++m) {
        const auto& con = p.constraint(m);
        im.rhs[m] = con.rhs;
        for (const auto& e : con.entries) {
            long flat = im.offsets[e.block] + static_cast<long>(e.col) * im.dims[e.block] + e.row;
            trips.emplace_back(m, static_cast<int>(flat), e.coeff);
        }
    }
    im.A.resize(im.n_dual, static_cast<int>(im.n_primal));
    im.A.setFromTriplets(trips.begin(), trips.end());
    im.A.makeCompressed();
    im.At = im.A.transpose();

    Eigen::SparseMatrix<double> aat = im.A * im.At;
    im.normal.compute(aat);
    if (im.normal.info() != Eigen::Success)
        throw std::runtime_error("BoundaryPointSolver: normal equations are singular "
                                 "(linearly dependent constraint rows?)");
}

BoundaryPointSolver::~BoundaryPointSolver() = default;

SDPSolution BoundaryPointSolver::solve() const { return solve(SolveRequest{}); }

SDPSolution BoundaryPointSolver::solve(const SolveRequest& req) const {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& im = *impl_;
    const int nb = static_cast<int>(im.dims.size());

    Eigen::VectorXd rhs = req.rhs ? *req.rhs : im.rhs;
    if (rhs.size() != im.n_dual)
        throw std::invalid_argument("solve: rhs length mismatch");

    Eigen::VectorXd c_raw = im.c;
    if (req.objectives) {
        for (const auto& [b, m] : *req.objectives) {
            if (b < 0 || b >= nb || m.rows() != im.dims[b] || m.cols() != im.dims[b])
                throw std::invalid_argument("solve: objective override mismatch");
            Eigen::Map<Eigen::VectorXd>(c_raw.data() + im.offsets[b], m.size()) =
                Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
        }
    }

    // normalize the objective scale; convergence is tested against the
    // scaled c and the duals are scaled back on exit
    const double scale = std::max(1.0, c_raw.lpNorm<Eigen::Infinity>());
    Eigen::VectorXd c = c_raw / scale;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(im.n_primal);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(im.n_primal);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(im.n_dual);
    if (req.warm_start) {
        const auto& ws = *req.warm_start;
        if (ws.y.size() == im.n_dual && ws.z.size() == im.n_primal &&
            static_cast<int>(ws.X.size()) == nb) {
            x = flatten_blocks(ws.X, im.offsets, im.n_primal);
            y = ws.y / scale;
            z = ws.z / scale;
        }
    }

    double mu = opts_.penalty;
    double primal_err = 0.0, dual_err = 0.0;
    double best = std::numeric_limits<double>::infinity();
    int best_iter = 0;
    SolveStatus status = SolveStatus::max_iter;
    int iter = 0;

    std::vector<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>> eigs(nb);
    Eigen::VectorXd m_vec(im.n_primal);

    for (iter = 1; iter <= opts_.max_iter; ++iter) {
        // dual update: A A^T y = A(c - z) + mu (rhs - A x)
        Eigen::VectorXd cg_rhs = im.A * (c - z) + mu * (rhs - im.A * x);
        y = im.normal.solve(cg_rhs);

        // primal/slack update from the spectral split of mu x + A^T y - c
        m_vec = mu * x + im.At * y - c;
        for (int b = 0; b < nb; ++b) {
            int d = im.dims[b];
            Eigen::Map<Eigen::MatrixXd> mb(m_vec.data() + im.offsets[b], d, d);
            Eigen::MatrixXd sym = (mb + mb.transpose()) / 2.0;
            eigs[b].compute(sym);
            const auto& ev = eigs[b].eigenvalues();
            const auto& vecs = eigs[b].eigenvectors();
            Eigen::VectorXd pos = ev.cwiseMax(0.0);
            Eigen::VectorXd neg = (-ev).cwiseMax(0.0);
            Eigen::Map<Eigen::MatrixXd>(x.data() + im.offsets[b], d, d) =
                vecs * (pos / mu).asDiagonal() * vecs.transpose();
            Eigen::Map<Eigen::MatrixXd>(z.data() + im.offsets[b], d, d) =
                vecs * neg.asDiagonal() * vecs.transpose();
        }

        primal_err = (im.A * x - rhs).norm();
        dual_err = (im.At * y + z - c).norm();
        double err = std::max(primal_err, dual_err);
        if (err < best) {
            best = err;
            best_iter = iter;
        }
        if (primal_err <= opts_.feas_tol && dual_err <= opts_.feas_tol) {
            status = SolveStatus::converged;
            break;
        }
        if (iter - best_iter > opts_.divergence_patience &&
            err > opts_.divergence_factor * best) {
            status = SolveStatus::diverging;
            break;
        }
        if (opts_.penalty_adapt && iter % opts_.penalty_update_every == 0) {
            if (opts_.penalty_rule == PenaltyRule::ratio) {
                // residual balancing with a bounded step; an unbounded
                // ratio can crash mu and cycle when one residual stalls
                double ratio = dual_err > 0.0 ? primal_err / dual_err : 1.0;
                mu = std::clamp(mu * std::clamp(ratio, 1.0 / 1.5, 1.5), 1e-8, 1e8);
            } else {
                if (primal_err > 10.0 * dual_err)
                    mu = std::min(mu * 1.1, 1e8);
                else if (dual_err > 10.0 * primal_err)
                    mu = std::max(mu / 1.1, 1e-8);
            }
        }
    }
    if (iter > opts_.max_iter) iter = opts_.max_iter;

    SDPSolution sol;
    sol.X.resize(nb);
    for (int b = 0; b < nb; ++b)
        sol.X[b] = Eigen::Map<const Eigen::MatrixXd>(x.data() + im.offsets[b], im.dims[b],
                                                     im.dims[b]);
    sol.y = y * scale;
    sol.z = z * scale;
    sol.objective = c_raw.dot(x);
    sol.dual_objective = rhs.dot(sol.y);
    sol.primal_residual = primal_err;
    sol.dual_residual = dual_err; // in units of the scaled objective
    sol.iterations = iter;
    sol.status = status;
    sol.objective_scale = scale;
    sol.final_penalty = mu;
    sol.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

SDPSolution solve(const BlockSDPProblem& p, const SolverOptions& opts) {
    return BoundaryPointSolver(p, opts).solve();
}

KKTReport check_kkt(const BlockSDPProblem& p, const SDPSolution& sol, double tol) {
    if (!p.finalized()) throw std::invalid_argument("check_kkt: problem not finalized");
    KKTReport rep;
    rep.tol = tol;
    int nb = p.n_blocks();
    if (static_cast<int>(sol.X.size()) != nb)
        throw std::invalid_argument("check_kkt: block count mismatch");

    double cinf = 0.0;
    for (int b = 0; b < nb; ++b)
        cinf = std::max(cinf, p.objective(b).lpNorm<Eigen::Infinity>());
    rep.dual_tol = tol * std::max(1.0, cinf);

    // primal residual
    double prim2 = 0.0;
    for (int m = 0; m < p.n_constraints(); ++m) {
        const auto& con = p.constraint(m);
        double ax = 0.0;
        for (const auto& e : con.entries) ax += e.coeff * sol.X[e.block](e.row, e.col);
        prim2 += (ax - con.rhs) * (ax - con.rhs);
    }
    rep.primal_residual = std::sqrt(prim2);

    // dual slack Z_b = C_b - sum_m y_m A_{m,b}
    std::vector<Eigen::MatrixXd> zb(nb);
    for (int b = 0; b < nb; ++b) zb[b] = p.objective(b);
    for (int m = 0; m < p.n_constraints(); ++m)
        for (const auto& e : p.constraint(m).entries)
            zb[e.block](e.row, e.col) -= sol.y[m] * e.coeff;

    rep.objective = 0.0;
    for (int b = 0; b < nb; ++b)
        rep.objective += p.objective(b).cwiseProduct(sol.X[b]).sum();
    rep.dual_objective = 0.0;
    for (int m = 0; m < p.n_constraints(); ++m)
        rep.dual_objective += sol.y[m] * p.constraint(m).rhs;
    rep.comp_tol = tol * std::max(1.0, cinf) * (1.0 + std::abs(rep.objective));

    rep.ok = rep.primal_residual <= tol;
    for (int b = 0; b < nb; ++b) {
        KKTBlockReport br;
        br.name = p.block_name(b);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esx(sol.X[b], Eigen::EigenvaluesOnly);
        br.min_eig_X = esx.eigenvalues().minCoeff();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esz(zb[b], Eigen::EigenvaluesOnly);
        br.min_eig_Z = esz.eigenvalues().minCoeff();
        br.complementarity = zb[b].cwiseProduct(sol.X[b]).sum();
        br.ok = br.min_eig_X >= -tol && br.min_eig_Z >= -rep.dual_tol &&
                std::abs(br.complementarity) <= rep.comp_tol;
        rep.ok = rep.ok && br.ok;
        rep.blocks.push_back(std::move(br));
    }

    // dual residual ||A^T y + z - c|| using the solution's slack vector
    if (sol.z.size() == p.primal_size()) {
        double acc = 0.0;
        Eigen::VectorXd atyc = Eigen::VectorXd::Zero(p.primal_size());
        for (int m = 0; m < p.n_constraints(); ++m)
            for (const auto& e : p.constraint(m).entries) {
                long flat = p.block_offset(e.block) +
                            static_cast<long>(e.col) * p.block_dim(e.block) + e.row;
                atyc[flat] += sol.y[m] * e.coeff;
            }
        for (int b = 0; b < nb; ++b) {
            const auto& cb = p.objective(b);
            long off = p.block_offset(b);
            for (int col = 0; col < p.block_dim(b); ++col)
                for (int row = 0; row < p.block_dim(b); ++row) {
                    long flat = off + static_cast<long>(col) * p.block_dim(b) + row;
                    double v = atyc[flat] + sol.z[flat] - cb(row, col);
                    acc += v * v;
                }
        }
        rep.dual_residual = std::sqrt(acc);
        rep.ok = rep.ok && rep.dual_residual <= rep.dual_tol;
    }
    return rep;
}

} // namespace rdmpurify::sdp
