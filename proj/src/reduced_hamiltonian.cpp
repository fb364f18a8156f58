#include "rdmpurify/reduced_hamiltonian.hpp"

#include <stdexcept>

namespace rdmpurify {

ReducedHamiltonian build_reduced_hamiltonian(const MolecularIntegrals& ints, int N) {
    if (N < 2)
        throw std::invalid_argument("build_reduced_hamiltonian: N >= 2 required "
                                    "(the 1/(N-1) fold is undefined below that)");
    if (N > ints.r)
        throw std::invalid_argument("build_reduced_hamiltonian: N exceeds orbital count");
    int r = ints.r;
    int p = pair_count(r);
    ReducedHamiltonian k;
    k.r = r;
    k.N = N;
    k.e_core = ints.e_core;
    k.packed = Eigen::MatrixXd::Zero(p, p);

    const double fold = 1.0 / (4.0 * (N - 1));
    const auto& h = ints.h;
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
            int row = pair_index(r, i, j);
            for (int kk = 0; kk < r; ++kk)
                for (int l = kk + 1; l < r; ++l) {
                    int col = pair_index(r, kk, l);
                    if (col < row) continue;
                    double one_body = 0.0;
                    if (j == l) one_body += h(i, kk);
                    if (i == l) one_body -= h(j, kk);
                    if (j == kk) one_body -= h(i, l);
                    if (i == kk) one_body += h(j, l);
                    double v = fold * one_body +
                               0.25 * (ints.v(i, j, kk, l) - ints.v(i, j, l, kk));
                    k.packed(row, col) = v;
                    k.packed(col, row) = v;
                }
        }
    return k;
}

double energy(const ReducedHamiltonian& k, const TwoRDM& d) {
    if (k.r != d.r())
        throw std::invalid_argument("energy: dimension mismatch between K and D");
    return 4.0 * k.packed.cwiseProduct(d.packed()).sum() + k.e_core;
}

} // namespace rdmpurify
