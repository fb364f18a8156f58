#pragma once

// Test-only reference implementations, kept deliberately independent of the
// library code paths they check.  Everything here works termwise on
// explicit occupation bitmasks with its own sign bookkeeping: slow, but
// close to the operator definitions.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "rdmpurify/fock.hpp"
#include "rdmpurify/integrals.hpp"

namespace oracle {

struct Ket {
    std::uint64_t mask = 0;
    double phase = 1.0;
};

// a_p |ket>; nullopt when annihilated.
inline std::optional<Ket> annihilate(Ket k, int p) {
    std::uint64_t bit = std::uint64_t{1} << p;
    if (!(k.mask & bit)) return std::nullopt;
    int below = 0;
    for (int q = 0; q < p; ++q)
        if (k.mask >> q & 1) ++below;
    k.phase *= (below % 2) ? -1.0 : 1.0;
    k.mask ^= bit;
    return k;
}

// a+_p |ket>; nullopt when the orbital is occupied.
inline std::optional<Ket> create(Ket k, int p) {
    std::uint64_t bit = std::uint64_t{1} << p;
    if (k.mask & bit) return std::nullopt;
    int below = 0;
    for (int q = 0; q < p; ++q)
        if (k.mask >> q & 1) ++below;
    k.phase *= (below % 2) ? -1.0 : 1.0;
    k.mask ^= bit;
    return k;
}

// <bra| op_string |ket> for a string of (create?, orbital) ops applied
// right to left.
inline double matrix_element(std::uint64_t bra, std::uint64_t ket,
                             const std::vector<std::pair<bool, int>>& ops) {
    Ket cur{ket, 1.0};
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        auto next = it->first ? create(cur, it->second) : annihilate(cur, it->second);
        if (!next) return 0.0;
        cur = *next;
    }
    return cur.mask == bra ? cur.phase : 0.0;
}

// Hamiltonian matrix assembled termwise from the second-quantized form:
// H = e_core + sum h_pq a+_p a_q + 1/2 sum <pq|rs> a+_p a+_q a_s a_r.
inline Eigen::MatrixXd hamiltonian_by_operators(const rdmpurify::MolecularIntegrals& ints,
                                                const rdmpurify::FockBasis& basis) {
    int dim = basis.size();
    int r = ints.r;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int b = 0; b < dim; ++b) {
        std::uint64_t ket = basis.dets[b];
        for (int a = 0; a < dim; ++a) {
            std::uint64_t bra = basis.dets[a];
            double val = (a == b) ? ints.e_core : 0.0;
            for (int p = 0; p < r; ++p)
                for (int q = 0; q < r; ++q) {
                    if (ints.h(p, q) == 0.0) continue;
                    val += ints.h(p, q) * matrix_element(bra, ket, {{true, p}, {false, q}});
                }
            for (int p = 0; p < r; ++p)
                for (int q = 0; q < r; ++q)
                    for (int s = 0; s < r; ++s)
                        for (int t = 0; t < r; ++t) {
                            double v = ints.v(p, q, s, t);
                            if (v == 0.0) continue;
                            val += 0.5 * v *
                                   matrix_element(
                                       bra, ket,
                                       {{true, p}, {true, q}, {false, t}, {false, s}});
                        }
            h(a, b) = val;
        }
    }
    return h;
}

// Elementwise <psi| a+_i a+_j a_l a_k |psi>.
inline double rdm2_element(const rdmpurify::FockState& psi, int i, int j, int k, int l) {
    double acc = 0.0;
    const auto& dets = psi.basis->dets;
    for (int b = 0; b < psi.basis->size(); ++b) {
        if (psi.amplitudes[b] == 0.0) continue;
        for (int a = 0; a < psi.basis->size(); ++a) {
            double el = matrix_element(dets[a], dets[b],
                                       {{true, i}, {true, j}, {false, l}, {false, k}});
            if (el != 0.0) acc += psi.amplitudes[a] * el * psi.amplitudes[b];
        }
    }
    return acc;
}

inline double rdmQ_element(const rdmpurify::FockState& psi, int i, int j, int k, int l) {
    double acc = 0.0;
    const auto& dets = psi.basis->dets;
    for (int b = 0; b < psi.basis->size(); ++b) {
        if (psi.amplitudes[b] == 0.0) continue;
        for (int a = 0; a < psi.basis->size(); ++a) {
            double el = matrix_element(dets[a], dets[b],
                                       {{false, i}, {false, j}, {true, l}, {true, k}});
            if (el != 0.0) acc += psi.amplitudes[a] * el * psi.amplitudes[b];
        }
    }
    return acc;
}

inline double rdmG_element(const rdmpurify::FockState& psi, int i, int j, int k, int l) {
    double acc = 0.0;
    const auto& dets = psi.basis->dets;
    for (int b = 0; b < psi.basis->size(); ++b) {
        if (psi.amplitudes[b] == 0.0) continue;
        for (int a = 0; a < psi.basis->size(); ++a) {
            double el = matrix_element(dets[a], dets[b],
                                       {{true, i}, {false, j}, {true, l}, {false, k}});
            if (el != 0.0) acc += psi.amplitudes[a] * el * psi.amplitudes[b];
        }
    }
    return acc;
}

inline double rdm1_element(const rdmpurify::FockState& psi, int i, int k) {
    double acc = 0.0;
    const auto& dets = psi.basis->dets;
    for (int b = 0; b < psi.basis->size(); ++b) {
        if (psi.amplitudes[b] == 0.0) continue;
        for (int a = 0; a < psi.basis->size(); ++a) {
            double el = matrix_element(dets[a], dets[b], {{true, i}, {false, k}});
            if (el != 0.0) acc += psi.amplitudes[a] * el * psi.amplitudes[b];
        }
    }
    return acc;
}

// Random normalized CI vector with a deterministic stream.
inline rdmpurify::FockState random_state(std::shared_ptr<const rdmpurify::FockBasis> basis,
                                         std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::VectorXd amps(basis->size());
    for (int i = 0; i < basis->size(); ++i)
        amps[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    amps.normalize();
    return {std::move(basis), std::move(amps)};
}

// Random symmetric matrix with entries in [-1, 1].
inline Eigen::MatrixXd random_symmetric(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

} // namespace oracle
