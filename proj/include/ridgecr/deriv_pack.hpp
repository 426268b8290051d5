#pragma once

#include <Eigen/Dense>

#include "ridgecr/multi_index.hpp"

namespace ridgecr {

// Value and partial derivatives of a scalar field at one point, up to order 4.
// Orders 2-4 store the distinct entries in the canonical tuple layout of
// DerivLayout (order 2 = column-major lower-triangle vech).
struct DerivPack {
    int dim = 0;
    int max_order = 0;
    double value = 0.0;
    Eigen::VectorXd grad;
    Eigen::VectorXd hess;    // vech
    Eigen::VectorXd third;
    Eigen::VectorXd fourth;

    DerivPack() = default;
    DerivPack(int d, int order, const DerivLayout& layout);

    Eigen::MatrixXd hess_matrix() const;

    double third_at(int i, int j, int k, const DerivLayout& layout) const;
    double fourth_at(int i, int j, int k, int l, const DerivLayout& layout) const;

    // Entry for an arbitrary multi-index with |gamma| <= max_order.
    double deriv(const MultiIndex& gamma, const DerivLayout& layout) const;

    // Componentwise Laplacian of vech(hessian); needs order 4.
    Eigen::VectorXd laplacian_hess_vech(const DerivLayout& layout) const;
    // Componentwise Laplacian of the gradient; needs order 3.
    Eigen::VectorXd laplacian_grad(const DerivLayout& layout) const;

    void set_zero();
};

}  // namespace ridgecr
