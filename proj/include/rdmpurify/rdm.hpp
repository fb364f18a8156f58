#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "rdmpurify/pair_index.hpp"

namespace rdmpurify {

/// Two-particle reduced density matrix in packed antisymmetric storage.
///
/// The packed matrix is Hermitian (real symmetric) of dimension r(r-1)/2
/// over pairs i<j.  Full-index elements carry the antisymmetry signs:
/// D^{ij}_{kl} = sgn(ij) sgn(kl) packed(idx(ij), idx(kl)), zero when i==j
/// or k==l.  All reported traces and norms use the full-index convention,
/// so trace(D) = N(N-1) for an N-electron state.
class TwoRDM {
  public:
    TwoRDM(int r, int N);
    TwoRDM(int r, int N, Eigen::MatrixXd packed);

    /// Build from a possibly asymmetric packed matrix: symmetrizes
    /// (M + M^T)/2 and records the discarded asymmetry norm.
    static TwoRDM from_packed(int r, int N, const Eigen::MatrixXd& m);

    int r() const { return r_; }
    int particles() const { return n_; }
    int packed_dim() const { return static_cast<int>(data_.rows()); }

    Eigen::MatrixXd& packed() { return data_; }
    const Eigen::MatrixXd& packed() const { return data_; }

    /// Full-index element with antisymmetry signs.
    double element(int i, int j, int k, int l) const;

    /// Full-index trace (2 x packed trace).
    double trace() const { return 2.0 * data_.trace(); }

    /// Full-index Frobenius norm (2 x packed norm).
    double frobenius_norm() const { return 2.0 * data_.norm(); }

    /// Frobenius norm of the skew part discarded by from_packed; zero for
    /// matrices built symmetric.
    double ingest_asymmetry() const { return asymmetry_; }

  private:
    int r_;
    int n_;
    Eigen::MatrixXd data_;
    double asymmetry_ = 0.0;
};

/// Particle-hole matrix over full ordered pairs (i,j), dimension r^2.
struct GMatrix {
    int r = 0;
    Eigen::MatrixXd data; // Hermitian, r^2 x r^2

    GMatrix() = default;
    GMatrix(int r_, Eigen::MatrixXd m) : r(r_), data(std::move(m)) {}
    double element(int i, int j, int k, int l) const {
        return data(ordered_index(r, i, j), ordered_index(r, k, l));
    }
};

struct OneRDM {
    int r = 0;
    Eigen::MatrixXd data; // Hermitian, r x r
};

/// 1D^i_k = 1/(N-1) sum_j D^{ij}_{kj}.  Requires N >= 2.
OneRDM contract_to_1rdm(const TwoRDM& d);

/// Hole-hole matrix from the particle-particle matrix:
/// Q^{ij}_{kl} = D^{ij}_{kl} - d^i_k 1D^j_l - d^j_l 1D^i_k
///             + d^i_l 1D^j_k + d^j_k 1D^i_l + d^i_k d^j_l - d^i_l d^j_k.
TwoRDM map_Q(const TwoRDM& d);

/// Particle-hole matrix: G^{ij}_{kl} = d^j_l 1D^i_k - D^{il}_{kj}.
GMatrix map_G(const TwoRDM& d);

struct SpectrumSummary {
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    int negative_count = 0; // eigenvalues below -tol
    int dim = 0;
};

/// Exact dense spectrum summary.  For a TwoRDM the packed pair matrix is
/// diagonalized (the nonzero full-index eigenvalues are twice the packed
/// ones; signs and counts agree).
SpectrumSummary min_eigenvalues(const TwoRDM& d, double tol = 1e-10);
SpectrumSummary min_eigenvalues(const GMatrix& g, double tol = 1e-10);
SpectrumSummary min_eigenvalues(const Eigen::MatrixXd& m, double tol = 1e-10);

struct DeviationNorms {
    double frobenius = 0.0; // full-index convention
    double nuclear = 0.0;   // full-index convention
};

/// Norms of A - B in the full-index convention (both are 2x the packed
/// values under the plain sub-block packing).
DeviationNorms deviation_norms(const TwoRDM& a, const TwoRDM& b);

/// 2-RDM JSON container: {"r", "N", "convention", "packed_lower_triangle"}.
/// The array holds the row-major lower triangle of the packed pair matrix.
void save_rdm_json(const TwoRDM& d, std::ostream& out);
void save_rdm_json_file(const TwoRDM& d, const std::string& path);
TwoRDM load_rdm_json(std::istream& in);
TwoRDM load_rdm_json_file(const std::string& path);

} // namespace rdmpurify
