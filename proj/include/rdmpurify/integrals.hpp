#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace rdmpurify {

enum class Boundary { open, periodic };

/// One- and two-electron integrals in the spin-orbital basis.
///
/// Spin orbitals are interleaved: p = 2*spatial + spin with spin 0 = up.
/// V holds physicist-notation integrals <ij|kl> indexed ((i*r+j)*r+k)*r+l.
struct MolecularIntegrals {
    int r = 0;             // spin-orbital count (even)
    Eigen::MatrixXd h;     // r x r, hartree
    std::vector<double> V; // r^4, hartree
    double e_core = 0.0;
    std::string label;
    std::string geometry;

    double v(int i, int j, int k, int l) const {
        return V[((static_cast<std::size_t>(i) * r + j) * r + k) * r + l];
    }
    double& v(int i, int j, int k, int l) {
        return V[((static_cast<std::size_t>(i) * r + j) * r + k) * r + l];
    }
};

/// Parse a Molpro-convention FCIDUMP: namelist header with NORB, NELEC,
/// MS2, ORBSYM, ISYM, then `value i j k l` lines with 1-based spatial
/// orbital indices and chemist-notation (ij|kl) values.  The i=j=k=l=0
/// line carries the core energy; `value i 0 0 0` orbital-energy lines are
/// accepted and ignored.  Spatial integrals are expanded to spin orbitals
/// and reindexed to physicist notation <ik|jl> = (ij|kl).
MolecularIntegrals parse_fcidump(std::istream& in, const std::string& label = "");
MolecularIntegrals parse_fcidump_file(const std::string& path);

/// Fermi-Hubbard chain: L sites, hopping -t between nearest neighbours,
/// on-site repulsion U.  Periodic boundaries add the wrap bond; at L=2 the
/// wrap bond coincides with the existing one and is not double counted.
MolecularIntegrals hubbard_chain(int L, double t, double U,
                                 Boundary boundary = Boundary::open);

} // namespace rdmpurify
