#pragma once

#include <Eigen/Dense>

#include "rdmpurify/integrals.hpp"
#include "rdmpurify/rdm.hpp"

namespace rdmpurify {

/// Two-body coefficient matrix K with the one-body integrals folded in so
/// that the electronic energy is a single trace functional of the 2-RDM:
///
///   E = trace(K D) + e_core   (full ordered-index convention)
///
/// Stored packed over antisymmetric pairs like TwoRDM.  The full-index
/// object is Hermitian and antisymmetric under exchange within either
/// index pair.
struct ReducedHamiltonian {
    int r = 0;
    int N = 0;              // electron count used in the 1/(N-1) fold
    Eigen::MatrixXd packed; // P x P symmetric
    double e_core = 0.0;
};

/// Fold one-body integrals into the two-body tensor:
///   K^{ij}_{kl} = (h_ik d_jl - h_jk d_il - h_il d_jk + h_jl d_ik) / (4(N-1))
///               + (<ij|kl> - <ij|lk>) / 4
/// Requires 2 <= N <= r.
ReducedHamiltonian build_reduced_hamiltonian(const MolecularIntegrals& ints, int N);

/// E = trace(K D) + e_core over full ordered indices
///   = 4 * sum_{IJ} packed(K)_{IJ} packed(D)_{IJ} + e_core.
double energy(const ReducedHamiltonian& k, const TwoRDM& d);

} // namespace rdmpurify
