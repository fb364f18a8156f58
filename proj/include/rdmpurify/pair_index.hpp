#pragma once

#include <stdexcept>
#include <utility>

namespace rdmpurify {

// Antisymmetric pair basis over r spin orbitals: ordered pairs (i,j) with
// i < j, enumerated lexicographically: (0,1), (0,2), ..., (0,r-1), (1,2), ...
// Packed matrices over this basis are the plain (i<j, k<l) sub-block of the
// full four-index object; no scale factor is applied.  Under this packing,
// for an object antisymmetric in both index pairs:
//   full-index trace     = 2 x packed trace
//   full-index Frobenius = 2 x packed Frobenius
//   full-index spectrum  = { 2 x packed eigenvalues } + zeros
inline int pair_count(int r) { return r * (r - 1) / 2; }

inline int pair_index(int r, int i, int j) {
    return i * r - i * (i + 1) / 2 + (j - i - 1);
}

inline std::pair<int, int> pair_unpack(int r, int idx) {
    for (int i = 0; i < r - 1; ++i) {
        int row_len = r - i - 1;
        if (idx < row_len) return {i, i + 1 + idx};
        idx -= row_len;
    }
    throw std::out_of_range("pair_unpack: index out of range");
}

// Full ordered-pair index for G-type objects: (i,j) -> i*r + j.
inline int ordered_index(int r, int i, int j) { return i * r + j; }

} // namespace rdmpurify
