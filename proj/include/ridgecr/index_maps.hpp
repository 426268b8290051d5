#pragma once

#include <utility>
#include <vector>

#include "ridgecr/types.hpp"

namespace ridgecr {

// Half-vectorization machinery for symmetric d x d matrices:
//   vec(A)   = dup * vech(A)            (duplication matrix)
//   dvech(A) = reorder * vech(A)        (diagonal entries first, then strict lower)
//   commutation * (p (x) q) = q (x) p
struct IndexMaps {
    int dim = 0;
    Matrix dup;          // d^2 x m, m = d(d+1)/2
    Matrix dup_pinv;     // m x d^2
    Matrix commutation;  // d^2 x d^2
    Matrix reorder;      // m x m permutation

    // k-th dvech slot (0-based) -> (row, col) with row >= col; diagonal slots first.
    std::vector<std::pair<int, int>> dvech_pairs;

    int vech_size() const { return dim * (dim + 1) / 2; }
    int vech_index(int a, int b) const;   // column-major lower triangle
    int dvech_index(int a, int b) const;  // diagonal-first layout

    Vector vech(const Matrix& A) const;
    Matrix unvech(const Vector& v) const;
    Vector to_dvech(const Vector& vech_coords) const { return reorder * vech_coords; }
};

IndexMaps build_index_maps(int dim);

}  // namespace ridgecr
