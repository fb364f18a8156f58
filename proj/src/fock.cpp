#include "rdmpurify/fock.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace rdmpurify {

namespace {

inline int popcount(std::uint64_t m) { return std::popcount(m); }

// (-1)^(occupied below p)
inline double jw_sign(std::uint64_t det, int p) {
    return (popcount(det & ((std::uint64_t{1} << p) - 1)) & 1) ? -1.0 : 1.0;
}

inline int sz2_of(std::uint64_t det, int r) {
    int up = 0, dn = 0;
    for (int p = 0; p < r; ++p)
        if (det >> p & 1) ((p & 1) == 0 ? up : dn)++;
    return up - dn;
}

// Dense vector over the full Fock space (2^r amplitudes); the workhorse
// for evaluating RDMs directly from the operator definitions.
class FockVector {
  public:
    explicit FockVector(int r) : r_(r), amp_(std::size_t{1} << r, 0.0) {}

    int r() const { return r_; }
    double& operator[](std::uint64_t m) { return amp_[m]; }
    double operator[](std::uint64_t m) const { return amp_[m]; }

    FockVector annihilate(int p) const {
        FockVector out(r_);
        std::uint64_t bit = std::uint64_t{1} << p;
        for (std::uint64_t m = 0; m < amp_.size(); ++m) {
            if (amp_[m] == 0.0 || !(m & bit)) continue;
            out[m ^ bit] += jw_sign(m, p) * amp_[m];
        }
        return out;
    }

    FockVector create(int p) const {
        FockVector out(r_);
        std::uint64_t bit = std::uint64_t{1} << p;
        for (std::uint64_t m = 0; m < amp_.size(); ++m) {
            if (amp_[m] == 0.0 || (m & bit)) continue;
            out[m ^ bit] += jw_sign(m, p) * amp_[m];
        }
        return out;
    }

    double dot(const FockVector& other) const {
        double s = 0.0;
        for (std::uint64_t m = 0; m < amp_.size(); ++m) s += amp_[m] * other.amp_[m];
        return s;
    }

  private:
    int r_;
    std::vector<double> amp_;
};

FockVector to_fock_vector(const FockState& psi) {
    FockVector v(psi.basis->r);
    for (int i = 0; i < psi.basis->size(); ++i)
        v[psi.basis->dets[i]] = psi.amplitudes[i];
    return v;
}

void check_state(const FockState& psi) {
    if (!psi.basis) throw std::invalid_argument("FockState: missing basis");
    if (psi.amplitudes.size() != psi.basis->size())
        throw std::invalid_argument("FockState: amplitude length mismatch");
}

} // namespace

int FockBasis::index_of(std::uint64_t det) const {
    auto it = std::lower_bound(dets.begin(), dets.end(), det);
    if (it == dets.end() || *it != det) return -1;
    return static_cast<int>(it - dets.begin());
}

std::shared_ptr<const FockBasis> build_basis(int r, int N, int sz2) {
    if (r < 0 || r > 20) throw std::invalid_argument("build_basis: r out of range");
    if (N < 0 || N > r) throw std::invalid_argument("build_basis: N out of range");
    auto basis = std::make_shared<FockBasis>();
    basis->r = r;
    basis->N = N;
    basis->sz2 = sz2;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << r); ++m)
        if (popcount(m) == N && sz2_of(m, r) == sz2) basis->dets.push_back(m);
    if (basis->dets.empty())
        throw std::domain_error("build_basis: empty sector (unreachable sz2)");
    return basis;
}

Eigen::MatrixXd build_hamiltonian_matrix(const MolecularIntegrals& ints,
                                         const FockBasis& basis) {
    if (ints.r != basis.r)
        throw std::invalid_argument("build_hamiltonian_matrix: dimension mismatch");
    int r = ints.r;
    int dim = basis.size();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);

    std::vector<int> occ, vir;
    for (int a = 0; a < dim; ++a) {
        std::uint64_t ma = basis.dets[a];
        occ.clear();
        for (int p = 0; p < r; ++p)
            if (ma >> p & 1) occ.push_back(p);

        // diagonal
        double diag = ints.e_core;
        for (int p : occ) diag += ints.h(p, p);
        for (int p : occ)
            for (int q : occ) diag += 0.5 * (ints.v(p, q, p, q) - ints.v(p, q, q, p));
        h(a, a) = diag;

        // single excitations p -> q, q > p scan over the full column via
        // the dets list: enumerate target determinants instead
        for (int p : occ)
            for (int q = 0; q < r; ++q) {
                if (ma >> q & 1) continue;
                std::uint64_t mb = (ma ^ (std::uint64_t{1} << p)) | (std::uint64_t{1} << q);
                int b = basis.index_of(mb);
                if (b < 0 || b <= a) continue;
                // phase: annihilate p then create q
                double sign = jw_sign(ma, p) * jw_sign(ma ^ (std::uint64_t{1} << p), q);
                double val = ints.h(q, p);
                for (int t : occ) {
                    if (t == p) continue;
                    val += ints.v(q, t, p, t) - ints.v(q, t, t, p);
                }
                h(a, b) = h(b, a) = sign * val;
            }

        // double excitations (p<q) -> (s<t)
        for (std::size_t ip = 0; ip < occ.size(); ++ip)
            for (std::size_t iq = ip + 1; iq < occ.size(); ++iq) {
                int p = occ[ip], q = occ[iq];
                for (int s = 0; s < r; ++s) {
                    if (ma >> s & 1) continue;
                    for (int t = s + 1; t < r; ++t) {
                        if (ma >> t & 1) continue;
                        std::uint64_t mb = ma;
                        mb ^= std::uint64_t{1} << p;
                        mb ^= std::uint64_t{1} << q;
                        mb |= std::uint64_t{1} << s;
                        mb |= std::uint64_t{1} << t;
                        int b = basis.index_of(mb);
                        if (b < 0 || b <= a) continue;
                        // phase of a+_t a+_s a_q a_p applied left to right
                        std::uint64_t work = ma;
                        double sign = jw_sign(work, p);
                        work ^= std::uint64_t{1} << p;
                        sign *= jw_sign(work, q);
                        work ^= std::uint64_t{1} << q;
                        sign *= jw_sign(work, s);
                        work |= std::uint64_t{1} << s;
                        sign *= jw_sign(work, t);
                        double val = ints.v(t, s, p, q) - ints.v(t, s, q, p);
                        h(a, b) = h(b, a) = sign * val;
                    }
                }
            }
    }
    return h;
}

std::vector<EigenPair> eigensolve(const Eigen::MatrixXd& h,
                                  std::shared_ptr<const FockBasis> basis, int k) {
    if (h.rows() != h.cols()) throw std::invalid_argument("eigensolve: square matrix required");
    if (basis && basis->size() != h.rows())
        throw std::invalid_argument("eigensolve: basis/matrix dimension mismatch");
    if (k < 1 || k > h.rows())
        throw std::invalid_argument("eigensolve: k out of range");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigensolve: diagonalization failed");

    int dim = static_cast<int>(h.rows());
    std::vector<Eigen::VectorXd> vectors(dim);
    for (int i = 0; i < dim; ++i) {
        Eigen::VectorXd v = es.eigenvectors().col(i);
        for (int a = 0; a < dim; ++a) {
            if (std::abs(v[a]) > 1e-9) {
                if (v[a] < 0) v = -v;
                break;
            }
        }
        vectors[i] = v;
    }

    // stable ascending order with a lexicographic tie-break inside
    // degenerate clusters
    std::vector<int> order(dim);
    for (int i = 0; i < dim; ++i) order[i] = i;
    const auto& ev = es.eigenvalues();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (std::abs(ev[a] - ev[b]) > 1e-11) return ev[a] < ev[b];
        for (int i = 0; i < dim; ++i) {
            double da = vectors[a][i], db = vectors[b][i];
            if (std::abs(da - db) > 1e-11) return da < db;
        }
        return false;
    });

    std::vector<EigenPair> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) {
        int idx = order[i];
        out.push_back({ev[idx], FockState{basis, vectors[idx]}});
    }
    return out;
}

TwoRDM rdm2_from_state(const FockState& psi) {
    check_state(psi);
    int r = psi.basis->r;
    if (psi.basis->N < 2) throw std::invalid_argument("rdm2_from_state: N >= 2 required");
    FockVector v = to_fock_vector(psi);

    // D^{ij}_{kl} = <psi_ij | psi_kl> with psi_ij = a_j a_i |psi>
    std::vector<FockVector> pair_vecs;
    pair_vecs.reserve(pair_count(r));
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) pair_vecs.push_back(v.annihilate(i).annihilate(j));
    int p = pair_count(r);
    TwoRDM d(r, psi.basis->N);
    for (int row = 0; row < p; ++row)
        for (int col = row; col < p; ++col) {
            double val = pair_vecs[row].dot(pair_vecs[col]);
            d.packed()(row, col) = val;
            d.packed()(col, row) = val;
        }
    return d;
}

TwoRDM rdmQ_from_state(const FockState& psi) {
    check_state(psi);
    int r = psi.basis->r;
    FockVector v = to_fock_vector(psi);

    // Q^{ij}_{kl} = <chi_ij | chi_kl> with chi_ij = a+_j a+_i |psi>
    std::vector<FockVector> pair_vecs;
    pair_vecs.reserve(pair_count(r));
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) pair_vecs.push_back(v.create(i).create(j));
    int p = pair_count(r);
    TwoRDM q(r, psi.basis->N);
    for (int row = 0; row < p; ++row)
        for (int col = row; col < p; ++col) {
            double val = pair_vecs[row].dot(pair_vecs[col]);
            q.packed()(row, col) = val;
            q.packed()(col, row) = val;
        }
    return q;
}

GMatrix rdmG_from_state(const FockState& psi) {
    check_state(psi);
    int r = psi.basis->r;
    FockVector v = to_fock_vector(psi);

    // G^{ij}_{kl} = <gamma_ij | gamma_kl> with gamma_ij = a+_j a_i |psi>
    std::vector<FockVector> vecs;
    vecs.reserve(static_cast<std::size_t>(r) * r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) vecs.push_back(v.annihilate(i).create(j));
    GMatrix g(r, Eigen::MatrixXd::Zero(r * r, r * r));
    for (int row = 0; row < r * r; ++row)
        for (int col = row; col < r * r; ++col) {
            double val = vecs[row].dot(vecs[col]);
            g.data(row, col) = val;
            g.data(col, row) = val;
        }
    return g;
}

OneRDM rdm1_from_state(const FockState& psi) {
    check_state(psi);
    int r = psi.basis->r;
    FockVector v = to_fock_vector(psi);
    std::vector<FockVector> vecs;
    vecs.reserve(r);
    for (int i = 0; i < r; ++i) vecs.push_back(v.annihilate(i));
    OneRDM one{r, Eigen::MatrixXd::Zero(r, r)};
    for (int i = 0; i < r; ++i)
        for (int k = i; k < r; ++k) {
            double val = vecs[i].dot(vecs[k]);
            one.data(i, k) = val;
            one.data(k, i) = val;
        }
    return one;
}

} // namespace rdmpurify
