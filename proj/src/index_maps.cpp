#include "ridgecr/index_maps.hpp"

#include "ridgecr/errors.hpp"

namespace ridgecr {

int IndexMaps::vech_index(int a, int b) const {
    if (a < b) std::swap(a, b);
    return b * dim - b * (b - 1) / 2 + (a - b);
}

int IndexMaps::dvech_index(int a, int b) const {
    if (a < b) std::swap(a, b);
    if (a == b) return a;
    // strict lower triangle, column-major, after the d diagonal slots
    int off = dim;
    for (int c = 0; c < b; ++c) off += dim - 1 - c;
    return off + (a - b - 1);
}

Vector IndexMaps::vech(const Matrix& A) const {
    Vector v(vech_size());
    for (int b = 0; b < dim; ++b)
        for (int a = b; a < dim; ++a) v(vech_index(a, b)) = A(a, b);
    return v;
}

Matrix IndexMaps::unvech(const Vector& v) const {
    Matrix A(dim, dim);
    for (int b = 0; b < dim; ++b)
        for (int a = b; a < dim; ++a) A(a, b) = A(b, a) = v(vech_index(a, b));
    return A;
}

IndexMaps build_index_maps(int dim) {
    if (dim < 2) throw PreconditionError("build_index_maps: dim >= 2 required");
    IndexMaps m;
    m.dim = dim;
    const int d2 = dim * dim;
    const int mm = dim * (dim + 1) / 2;

    m.dup = Matrix::Zero(d2, mm);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) m.dup(i + j * dim, m.vech_index(i, j)) = 1.0;

    // D has full column rank, so D+ = (D^T D)^(-1) D^T
    m.dup_pinv = (m.dup.transpose() * m.dup).ldlt().solve(m.dup.transpose());

    m.commutation = Matrix::Zero(d2, d2);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) m.commutation(j + i * dim, i + j * dim) = 1.0;

    m.dvech_pairs.clear();
    for (int i = 0; i < dim; ++i) m.dvech_pairs.emplace_back(i, i);
    for (int b = 0; b < dim; ++b)
        for (int a = b + 1; a < dim; ++a) m.dvech_pairs.emplace_back(a, b);

    m.reorder = Matrix::Zero(mm, mm);
    for (int k = 0; k < mm; ++k) {
        auto [a, b] = m.dvech_pairs[k];
        m.reorder(k, m.vech_index(a, b)) = 1.0;
    }
    return m;
}

}  // namespace ridgecr
