#pragma once

#include <cstdint>
#include <string>

#include "rdmpurify/rdm.hpp"
#include "rdmpurify/reduced_hamiltonian.hpp"

namespace rdmpurify {

/// Finite-shot measurement noise emulation: independent zero-mean Gaussian
/// perturbations of width sigma = alpha / sqrt(shots) on each independent
/// packed element.  Stands in for shadow-tomography statistical error;
/// antisymmetry is preserved structurally, positivity and trace are not.
struct NoiseSpec {
    long long shots = 100000;
    double alpha = 1.0;
    std::uint64_t seed = 0;
    std::string model = "gaussian-element";
};

/// Perturb the diagonal and upper triangle of the packed matrix, then
/// re-Hermitize.  Deterministic given the seed (mt19937_64 + Box-Muller);
/// the trace is not renormalized.
TwoRDM apply_noise(const TwoRDM& d, const NoiseSpec& spec);

/// alpha such that the linearly propagated standard error of
/// trace(K D_noisy) at `shots` shots equals target_energy_stderr.
/// Throws std::domain_error when K has no energy sensitivity (all zeros).
double calibrate_alpha(double target_energy_stderr, const ReducedHamiltonian& k,
                       const TwoRDM& d, long long shots);

} // namespace rdmpurify
