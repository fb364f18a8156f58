#include <doctest.h>

#include <cmath>

#include "oracle_helpers.hpp"
#include "rdmpurify/fock.hpp"
#include "rdmpurify/integrals.hpp"
#include "rdmpurify/noise.hpp"
#include "rdmpurify/reduced_hamiltonian.hpp"

using namespace rdmpurify;

namespace {

TwoRDM ground_rdm(const MolecularIntegrals& ints, int n, int sz2) {
    auto basis = build_basis(ints.r, n, sz2);
    Eigen::MatrixXd h = build_hamiltonian_matrix(ints, *basis);
    return rdm2_from_state(eigensolve(h, basis, 1).front().state);
}

} // namespace

TEST_CASE("infinite shot budget leaves the input unchanged") {
    MolecularIntegrals ints = hubbard_chain(2, 1.0, 4.0);
    TwoRDM d = ground_rdm(ints, 2, 0);
    NoiseSpec spec{1000000000000000000LL, 1.0, 4};
    TwoRDM noisy = apply_noise(d, spec);
    CHECK((noisy.packed() - d.packed()).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("identical seeds give bit-identical noise") {
    MolecularIntegrals ints = hubbard_chain(4, 1.0, 4.0);
    TwoRDM d = ground_rdm(ints, 4, 0);
    NoiseSpec spec{10000, 1.0, 777};
    TwoRDM a = apply_noise(d, spec);
    TwoRDM b = apply_noise(d, spec);
    CHECK((a.packed() - b.packed()).lpNorm<Eigen::Infinity>() == 0.0);
    spec.seed = 778;
    TwoRDM c = apply_noise(d, spec);
    CHECK((a.packed() - c.packed()).lpNorm<Eigen::Infinity>() > 0.0);
}

TEST_CASE("output stays hermitian") {
    MolecularIntegrals ints = hubbard_chain(3, 1.0, 2.0);
    TwoRDM d = ground_rdm(ints, 3, 1);
    TwoRDM noisy = apply_noise(d, {1000, 0.8, 5});
    CHECK((noisy.packed() - noisy.packed().transpose()).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("quadrupling the shot count halves the deviation") {
    MolecularIntegrals ints = hubbard_chain(2, 1.0, 4.0);
    TwoRDM d = ground_rdm(ints, 2, 0);
    double acc1 = 0.0, acc4 = 0.0;
    const int trials = 100;
    for (int s = 0; s < trials; ++s) {
        acc1 += deviation_norms(apply_noise(d, {10000, 1.0, 9000u + s}), d).frobenius;
        acc4 += deviation_norms(apply_noise(d, {40000, 1.0, 9000u + s}), d).frobenius;
    }
    double ratio = acc1 / acc4;
    CHECK(ratio >= 1.9);
    CHECK(ratio <= 2.1);
}

TEST_CASE("element means converge to the exact values") {
    MolecularIntegrals ints = hubbard_chain(2, 1.0, 4.0);
    TwoRDM d = ground_rdm(ints, 2, 0);
    const int trials = 1000;
    const long long shots = 1000;
    const double alpha = 1.0;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d.packed_dim(), d.packed_dim());
    for (int s = 0; s < trials; ++s)
        acc += apply_noise(d, {shots, alpha, 100000u + s}).packed();
    acc /= trials;
    double sigma = alpha / std::sqrt(double(shots));
    double stderr3 = 3.0 * sigma / std::sqrt(double(trials));
    CHECK((acc - d.packed()).lpNorm<Eigen::Infinity>() <= stderr3);
}

TEST_CASE("calibration fails on an insensitive K") {
    ReducedHamiltonian k;
    k.r = 4;
    k.N = 2;
    k.packed = Eigen::MatrixXd::Zero(6, 6);
    TwoRDM d(4, 2);
    CHECK_THROWS_AS(calibrate_alpha(0.01, k, d, 1000), std::domain_error);
}

TEST_CASE("calibration is linear in the target") {
    MolecularIntegrals ints = hubbard_chain(4, 1.0, 4.0);
    ReducedHamiltonian k = build_reduced_hamiltonian(ints, 4);
    TwoRDM d = ground_rdm(ints, 4, 0);
    double a1 = calibrate_alpha(0.01, k, d, 100000);
    double a2 = calibrate_alpha(0.02, k, d, 100000);
    CHECK(a2 == doctest::Approx(2.0 * a1).epsilon(1e-12));
}

TEST_CASE("calibrated noise reproduces the target energy spread") {
    MolecularIntegrals ints = hubbard_chain(4, 1.0, 4.0);
    ReducedHamiltonian k = build_reduced_hamiltonian(ints, 4);
    TwoRDM d = ground_rdm(ints, 4, 0);
    const double target = 0.05;
    const long long shots = 100000;
    double alpha = calibrate_alpha(target, k, d, shots);
    const int trials = 200;
    std::vector<double> energies;
    for (int s = 0; s < trials; ++s)
        energies.push_back(energy(k, apply_noise(d, {shots, alpha, 200000u + s})));
    double mean = 0.0;
    for (double e : energies) mean += e;
    mean /= trials;
    double var = 0.0;
    for (double e : energies) var += (e - mean) * (e - mean);
    double stderr_measured = std::sqrt(var / (trials - 1));
    CHECK(stderr_measured >= 0.8 * target);
    CHECK(stderr_measured <= 1.2 * target);
}

TEST_CASE("benchmark noise produces negative eigenvalues") {
    MolecularIntegrals ints = hubbard_chain(4, 1.0, 1.0);
    ReducedHamiltonian k = build_reduced_hamiltonian(ints, 4);
    TwoRDM d = ground_rdm(ints, 4, 0);
    double alpha = calibrate_alpha(0.05, k, d, 100000);
    int negative = 0;
    const int trials = 20;
    for (int s = 0; s < trials; ++s) {
        TwoRDM noisy = apply_noise(d, {100000, alpha, 300u + s});
        if (min_eigenvalues(noisy).min_eigenvalue < 0.0) ++negative;
    }
    CHECK(negative >= 18); // >= 90% of seeds
}
