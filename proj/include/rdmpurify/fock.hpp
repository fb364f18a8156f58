#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "rdmpurify/integrals.hpp"
#include "rdmpurify/rdm.hpp"

namespace rdmpurify {

/// Determinant basis for a fixed (N, Sz) sector.
///
/// Occupation bitmask bit p = spin orbital p under the interleaved
/// ordering; sz2 is twice the Sz eigenvalue (n_up - n_down).  A
/// determinant with occupied orbitals i1 < i2 < ... < iN is the state
/// a+_{i1} a+_{i2} ... a+_{iN} |vac>, so annihilating orbital p picks up
/// the sign (-1)^(number of occupied orbitals below p).
struct FockBasis {
    int r = 0;
    int N = 0;
    int sz2 = 0;
    std::vector<std::uint64_t> dets; // strictly increasing

    int size() const { return static_cast<int>(dets.size()); }
    int index_of(std::uint64_t det) const; // -1 if absent
};

/// Enumerate the sector.  Throws std::domain_error when the (N, sz2)
/// combination is unreachable (empty sector).
std::shared_ptr<const FockBasis> build_basis(int r, int N, int sz2);

/// CI vector over a determinant basis; real amplitudes, unit norm.
struct FockState {
    std::shared_ptr<const FockBasis> basis;
    Eigen::VectorXd amplitudes;
};

/// Hamiltonian matrix in the determinant basis via the Slater-Condon
/// rules (fermionic phases from the bitmask convention above).
Eigen::MatrixXd build_hamiltonian_matrix(const MolecularIntegrals& ints,
                                         const FockBasis& basis);

struct EigenPair {
    double value;
    FockState state;
};

/// k lowest eigenpairs, ascending.  Dense symmetric diagonalization;
/// degenerate subspaces are returned in a deterministic order (tie-break
/// by lexicographic comparison of amplitude vectors) and each vector's
/// sign is fixed so its first significant amplitude is positive.
std::vector<EigenPair> eigensolve(const Eigen::MatrixXd& h,
                                  std::shared_ptr<const FockBasis> basis, int k);

/// 2-RDM from the operator definition D^{ij}_{kl} = <psi|a+_i a+_j a_l a_k|psi>,
/// evaluated as the Gram matrix of the pair-annihilated vectors.  N >= 2.
TwoRDM rdm2_from_state(const FockState& psi);

/// Q^{ij}_{kl} = <psi|a_i a_j a+_l a+_k|psi>, directly from the operators.
TwoRDM rdmQ_from_state(const FockState& psi);

/// G^{ij}_{kl} = <psi|a+_i a_j a+_l a_k|psi>, directly from the operators.
GMatrix rdmG_from_state(const FockState& psi);

/// 1-RDM <psi|a+_i a_k|psi>, directly from the operators.
OneRDM rdm1_from_state(const FockState& psi);

} // namespace rdmpurify
