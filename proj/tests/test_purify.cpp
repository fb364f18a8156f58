#include <doctest.h>

#include <cmath>

#include "oracle_helpers.hpp"
#include "rdmpurify/fock.hpp"
#include "rdmpurify/integrals.hpp"
#include "rdmpurify/noise.hpp"
#include "rdmpurify/purify.hpp"
#include "rdmpurify/reduced_hamiltonian.hpp"

using namespace rdmpurify;

namespace {

struct Reference {
    MolecularIntegrals ints;
    ReducedHamiltonian k;
    double fci;
    TwoRDM d_exact;
};

Reference make_reference(int L, double t, double u, int n, int sz2) {
    MolecularIntegrals ints = hubbard_chain(L, t, u);
    auto basis = build_basis(ints.r, n, sz2);
    Eigen::MatrixXd h = build_hamiltonian_matrix(ints, *basis);
    auto pair = eigensolve(h, basis, 1).front();
    ReducedHamiltonian k = build_reduced_hamiltonian(ints, n);
    return {std::move(ints), std::move(k), pair.value, rdm2_from_state(pair.state)};
}

} // namespace

TEST_CASE("assembled problem shapes for r=4") {
    Reference ref = make_reference(2, 1.0, 4.0, 2, 0);
    sdp::BlockSDPProblem p = assemble_cp_problem(ref.k, ref.d_exact, 2, 0.5);
    REQUIRE(p.n_blocks() == 5);
    CHECK(p.block_dim(0) == 6);  // D
    CHECK(p.block_dim(1) == 6);  // Q
    CHECK(p.block_dim(2) == 16); // G
    CHECK(p.block_dim(3) == 6);  // E+
    CHECK(p.block_dim(4) == 6);  // E-
    CHECK(p.n_constraints() == 1 + 21 + 136 + 21);
}

TEST_CASE("weights only touch the slack objective") {
    Reference ref = make_reference(2, 1.0, 4.0, 2, 0);
    sdp::BlockSDPProblem p1 = assemble_cp_problem(ref.k, ref.d_exact, 2, 0.1);
    sdp::BlockSDPProblem p2 = assemble_cp_problem(ref.k, ref.d_exact, 2, 1.0);
    CHECK((p1.objective(0) - p2.objective(0)).norm() == 0.0);
    CHECK((p1.objective(2) - p2.objective(2)).norm() == 0.0);
    CHECK((p1.objective(3) - 0.1 * p2.objective(3) / 1.0).norm() <= 1e-15);
    CHECK(p1.n_constraints() == p2.n_constraints());
    for (int m = 0; m < p1.n_constraints(); ++m)
        CHECK(p1.constraint(m).rhs == p2.constraint(m).rhs);
}

TEST_CASE("bad arguments are rejected") {
    Reference ref = make_reference(2, 1.0, 4.0, 2, 0);
    CHECK_THROWS_AS(assemble_cp_problem(ref.k, ref.d_exact, 2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(assemble_cp_problem(ref.k, ref.d_exact, 2, -1.0),
                    std::invalid_argument);
    TwoRDM wrong(6, 2);
    CHECK_THROWS_AS(assemble_cp_problem(ref.k, wrong, 2, 0.5), std::invalid_argument);
}

TEST_CASE("exact state with slack split is a feasible point") {
    // build (D_exact, f_Q, f_G, E+/-) from the PSD split of D_exact - D_e
    // and push it through every constraint row
    Reference ref = make_reference(2, 1.0, 4.0, 2, 0);
    TwoRDM d_e = apply_noise(ref.d_exact, {10000, 0.5, 3});
    sdp::BlockSDPProblem p = assemble_cp_problem(ref.k, d_e, 2, 0.7);

    Eigen::MatrixXd diff = ref.d_exact.packed() - d_e.packed();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff);
    Eigen::MatrixXd eplus = es.eigenvectors() *
                            es.eigenvalues().cwiseMax(0.0).asDiagonal() *
                            es.eigenvectors().transpose();
    Eigen::MatrixXd eminus = es.eigenvectors() *
                             (-es.eigenvalues()).cwiseMax(0.0).asDiagonal() *
                             es.eigenvectors().transpose();

    std::vector<Eigen::MatrixXd> x{ref.d_exact.packed(), map_Q(ref.d_exact).packed(),
                                   map_G(ref.d_exact).data, eplus, eminus};
    for (int m = 0; m < p.n_constraints(); ++m) {
        double ax = 0.0;
        for (const auto& e : p.constraint(m).entries)
            ax += e.coeff * x[e.block](e.row, e.col);
        CHECK(ax == doctest::Approx(p.constraint(m).rhs).epsilon(1e-10));
    }
}

TEST_CASE("projection mode keeps a representable input") {
    Reference ref = make_reference(2, 1.0, 4.0, 2, 0);
    PurificationConfig cfg;
    cfg.mode = PurifyMode::projection;
    cfg.solver.feas_tol = 1e-8;
    PurificationResult res = purify(ref.k, ref.d_exact, 2, cfg);
    CHECK(res.slack_trace <= 1e-6);
    CHECK((res.D_p.packed() - ref.d_exact.packed()).lpNorm<Eigen::Infinity>() <= 1e-5);
}

TEST_CASE("v2rdm mode is exact for two electrons") {
    for (double u : {0.0, 1.0, 4.0, 8.0}) {
        Reference ref = make_reference(2, 1.0, u, 2, 0);
        PurificationConfig cfg;
        cfg.mode = PurifyMode::v2rdm;
        cfg.solver.feas_tol = 1e-9;
        PurificationResult res = purify(ref.k, ref.d_exact, 2, cfg);
        CHECK(res.energy == doctest::Approx(ref.fci).epsilon(1e-6));
        CHECK(res.trace == doctest::Approx(2.0).epsilon(1e-7));
    }
}

TEST_CASE("v2rdm lower bound holds on small chains") {
    for (auto [L, n, sz2] : std::vector<std::tuple<int, int, int>>{
             {2, 2, 0}, {3, 3, 1}, {4, 4, 0}}) {
        Reference ref = make_reference(L, 1.0, 4.0, n, sz2);
        PurificationConfig cfg;
        cfg.mode = PurifyMode::v2rdm;
        cfg.solver.feas_tol = 1e-7;
        PurificationResult res = purify(ref.k, ref.d_exact, n, cfg);
        CHECK(res.energy <= ref.fci + 1e-5);
    }
}

TEST_CASE("purified output is positive and trace-consistent") {
    Reference ref = make_reference(4, 1.0, 4.0, 4, 0);
    double alpha = calibrate_alpha(0.05, ref.k, ref.d_exact, 100000);
    TwoRDM d_e = apply_noise(ref.d_exact, {100000, alpha, 17});
    REQUIRE(min_eigenvalues(d_e).min_eigenvalue < 0.0);
    PurificationConfig cfg;
    cfg.w = 0.1;
    cfg.solver.feas_tol = 2e-7;
    PurificationResult res = purify(ref.k, d_e, 4, cfg);
    CHECK(res.status == sdp::SolveStatus::converged);
    CHECK(res.eig_D.min_eigenvalue >= -1e-6);
    CHECK(res.eig_Q.min_eigenvalue >= -1e-6);
    CHECK(res.eig_G.min_eigenvalue >= -1e-6);
    CHECK(res.trace == doctest::Approx(12.0).epsilon(1e-6));
}

TEST_CASE("weight sweep monotonicity and limits") {
    Reference ref = make_reference(2, 1.0, 4.0, 2, 0);
    TwoRDM d_e = apply_noise(ref.d_exact, {10000, 0.5, 23});
    std::vector<double> w_list{1e-4, 1e-2, 1.0, 100.0, 1000.0};
    PurificationConfig cfg;
    cfg.solver.feas_tol = 1e-8;
    auto results = weight_sweep(ref.k, d_e, 2, w_list, cfg);
    REQUIRE(results.size() == w_list.size());
    for (std::size_t i = 1; i < results.size(); ++i) {
        CHECK(results[i].slack_trace <= results[i - 1].slack_trace + 1e-6);
        CHECK(results[i].energy >= results[i - 1].energy - 1e-6);
    }
}

TEST_CASE("single-entry sweep matches a direct purify call") {
    Reference ref = make_reference(2, 1.0, 4.0, 2, 0);
    TwoRDM d_e = apply_noise(ref.d_exact, {10000, 0.5, 29});
    PurificationConfig cfg;
    cfg.w = 0.3;
    auto sweep = weight_sweep(ref.k, d_e, 2, {0.3}, cfg);
    PurificationResult once = purify(ref.k, d_e, 2, cfg);
    CHECK(sweep.front().energy == doctest::Approx(once.energy).epsilon(1e-12));
    CHECK((sweep.front().D_p.packed() - once.D_p.packed()).lpNorm<Eigen::Infinity>() ==
          0.0);
}

TEST_CASE("sweep validates its weight list") {
    Reference ref = make_reference(2, 1.0, 4.0, 2, 0);
    PurificationConfig cfg;
    CHECK_THROWS_AS(weight_sweep(ref.k, ref.d_exact, 2, {}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(weight_sweep(ref.k, ref.d_exact, 2, {0.5, 0.1}, cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(weight_sweep(ref.k, ref.d_exact, 2, {-1.0, 0.1}, cfg),
                    std::invalid_argument);
}

TEST_CASE("large w stays close to a representable input") {
    Reference ref = make_reference(3, 1.0, 4.0, 3, 1);
    PurificationConfig cfg;
    cfg.w = 1000.0;
    cfg.solver.feas_tol = 1e-7;
    PurificationResult res = purify(ref.k, ref.d_exact, 3, cfg);
    CHECK(deviation_norms(res.D_p, ref.d_exact).frobenius <= 1e-3);
}

TEST_CASE("small w approaches the v2rdm energy") {
    Reference ref = make_reference(3, 1.0, 4.0, 3, 1);
    TwoRDM d_e = apply_noise(ref.d_exact, {10000, 0.5, 31});
    PurificationConfig v2;
    v2.mode = PurifyMode::v2rdm;
    v2.solver.feas_tol = 1e-8;
    double e_v2 = purify(ref.k, ref.d_exact, 3, v2).energy;
    PurificationConfig cp;
    cp.w = 1e-4;
    cp.solver.feas_tol = 1e-8;
    double e_cp = purify(ref.k, d_e, 3, cp).energy;
    CHECK(std::abs(e_cp - e_v2) <= 1e-4 * (1.0 + std::abs(e_v2)));
}
