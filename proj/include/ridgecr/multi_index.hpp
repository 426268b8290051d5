#pragma once

#include <array>
#include <vector>

namespace ridgecr {

// Partial-derivative multi-index (gamma_1,...,gamma_d), |gamma| = sum of entries.
using MultiIndex = std::vector<int>;

inline int multi_order(const MultiIndex& g) {
    int s = 0;
    for (int v : g) s += v;
    return s;
}

// Canonical enumeration of the distinct order-k partial derivatives in dimension d:
// non-decreasing axis tuples (i1 <= ... <= ik) in lexicographic order. For k = 2 this
// coincides with the column-major lower-triangle vech layout used throughout.
class DerivTupleTable {
public:
    DerivTupleTable() = default;
    DerivTupleTable(int dim, int order);

    int dim() const { return dim_; }
    int order() const { return order_; }
    int size() const { return static_cast<int>(tuples_.size()); }

    const std::array<int, 4>& tuple(int idx) const { return tuples_[idx]; }

    // Axis tuple (any order) -> canonical index.
    int index_of(std::array<int, 4> axes) const;

    MultiIndex multi_index(int idx) const;

private:
    int dim_ = 0;
    int order_ = 0;
    std::vector<std::array<int, 4>> tuples_;
    std::vector<int> lookup_;  // dense table keyed by sorted tuple
    int key(const std::array<int, 4>& sorted) const;
};

// Shared tables for dimensions/orders used by derivative packs; cheap value type.
class DerivLayout {
public:
    DerivLayout() = default;
    explicit DerivLayout(int dim);

    int dim() const { return dim_; }
    const DerivTupleTable& table(int order) const { return tables_[order]; }

    int vech_size() const { return tables_[2].size(); }
    int vech_index(int a, int b) const;  // (row, col) of a symmetric matrix

private:
    int dim_ = 0;
    std::array<DerivTupleTable, 5> tables_;
};

}  // namespace ridgecr
