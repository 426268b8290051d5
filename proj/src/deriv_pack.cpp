#include "ridgecr/deriv_pack.hpp"

#include "ridgecr/errors.hpp"

namespace ridgecr {

DerivPack::DerivPack(int d, int order, const DerivLayout& layout) : dim(d), max_order(order) {
    grad = Eigen::VectorXd::Zero(order >= 1 ? d : 0);
    hess = Eigen::VectorXd::Zero(order >= 2 ? layout.table(2).size() : 0);
    third = Eigen::VectorXd::Zero(order >= 3 ? layout.table(3).size() : 0);
    fourth = Eigen::VectorXd::Zero(order >= 4 ? layout.table(4).size() : 0);
}

void DerivPack::set_zero() {
    value = 0.0;
    grad.setZero();
    hess.setZero();
    third.setZero();
    fourth.setZero();
}

Eigen::MatrixXd DerivPack::hess_matrix() const {
    Eigen::MatrixXd H(dim, dim);
    int k = 0;
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) {
            H(i, j) = H(j, i) = hess(k);
            ++k;
        }
    return H;
}

double DerivPack::third_at(int i, int j, int k, const DerivLayout& layout) const {
    return third(layout.table(3).index_of({i, j, k, 0}));
}

double DerivPack::fourth_at(int i, int j, int k, int l, const DerivLayout& layout) const {
    return fourth(layout.table(4).index_of({i, j, k, l}));
}

double DerivPack::deriv(const MultiIndex& gamma, const DerivLayout& layout) const {
    const int order = multi_order(gamma);
    if (order > max_order) throw PreconditionError("DerivPack: order not stored");
    std::array<int, 4> axes{0, 0, 0, 0};
    int pos = 0;
    for (int i = 0; i < dim; ++i)
        for (int c = 0; c < gamma[i]; ++c) axes[pos++] = i;
    switch (order) {
        case 0: return value;
        case 1: return grad(axes[0]);
        case 2: return hess(layout.table(2).index_of(axes));
        case 3: return third(layout.table(3).index_of(axes));
        default: return fourth(layout.table(4).index_of(axes));
    }
}

Eigen::VectorXd DerivPack::laplacian_hess_vech(const DerivLayout& layout) const {
    if (max_order < 4) throw PreconditionError("laplacian_hess_vech: order-4 pack required");
    const auto& t2 = layout.table(2);
    Eigen::VectorXd out(t2.size());
    for (int m = 0; m < t2.size(); ++m) {
        const auto& pr = t2.tuple(m);
        double s = 0.0;
        for (int k = 0; k < dim; ++k) s += fourth_at(pr[0], pr[1], k, k, layout);
        out(m) = s;
    }
    return out;
}

Eigen::VectorXd DerivPack::laplacian_grad(const DerivLayout& layout) const {
    if (max_order < 3) throw PreconditionError("laplacian_grad: order-3 pack required");
    Eigen::VectorXd out(dim);
    for (int i = 0; i < dim; ++i) {
        double s = 0.0;
        for (int k = 0; k < dim; ++k) s += third_at(i, k, k, layout);
        out(i) = s;
    }
    return out;
}

}  // namespace ridgecr
