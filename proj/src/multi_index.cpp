#include "ridgecr/multi_index.hpp"

#include <algorithm>

#include "ridgecr/errors.hpp"

namespace ridgecr {

namespace {

void gen_tuples(int dim, int order, int pos, int min_axis, std::array<int, 4>& cur,
                std::vector<std::array<int, 4>>& out) {
    if (pos == order) {
        out.push_back(cur);
        return;
    }
    for (int a = min_axis; a < dim; ++a) {
        cur[pos] = a;
        gen_tuples(dim, order, pos + 1, a, cur, out);
    }
}

}  // namespace

DerivTupleTable::DerivTupleTable(int dim, int order) : dim_(dim), order_(order) {
    if (dim < 1 || order < 0 || order > 4)
        throw PreconditionError("DerivTupleTable: dim >= 1 and 0 <= order <= 4 required");
    std::array<int, 4> cur{0, 0, 0, 0};
    if (order == 0) {
        tuples_.push_back(cur);
    } else {
        gen_tuples(dim, order, 0, 0, cur, tuples_);
    }
    int span = 1;
    for (int k = 0; k < order; ++k) span *= dim;
    lookup_.assign(std::max(span, 1), -1);
    for (int i = 0; i < static_cast<int>(tuples_.size()); ++i) lookup_[key(tuples_[i])] = i;
}

int DerivTupleTable::key(const std::array<int, 4>& sorted) const {
    int k = 0;
    for (int p = 0; p < order_; ++p) k = k * dim_ + sorted[p];
    return k;
}

int DerivTupleTable::index_of(std::array<int, 4> axes) const {
    std::sort(axes.begin(), axes.begin() + order_);
    int idx = lookup_[key(axes)];
    return idx;
}

MultiIndex DerivTupleTable::multi_index(int idx) const {
    MultiIndex g(dim_, 0);
    for (int p = 0; p < order_; ++p) g[tuples_[idx][p]]++;
    return g;
}

DerivLayout::DerivLayout(int dim) : dim_(dim) {
    for (int k = 0; k <= 4; ++k) tables_[k] = DerivTupleTable(dim, k);
}

int DerivLayout::vech_index(int a, int b) const {
    if (a < b) std::swap(a, b);
    // column-major lower triangle: offset of column b plus row displacement
    return b * dim_ - b * (b - 1) / 2 + (a - b);
}

}  // namespace ridgecr
