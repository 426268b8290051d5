#pragma once

#include <map>
#include <vector>

#include "ridgecr/multi_index.hpp"

namespace ridgecr {

// Flat buffer for all kernel partials up to order 4 at one point. Layout matches
// DerivLayout: [value | grad (d) | vech hess | order-3 tuples | order-4 tuples].
struct KernelDerivs {
    int dim = 0;
    int max_order = 0;
    std::vector<double> data;
};

// Compactly supported polynomial kernel K(x) = c_d (1 - |x|^2)^p on the unit ball.
// Spherically symmetric, integrates to one, p - 1 continuous derivatives across the
// support boundary (p >= 5 covers the order-4 requirement).
class KernelSpec {
public:
    KernelSpec(int dim, int exponent = 5);

    int dim() const { return dim_; }
    int exponent() const { return exponent_; }
    double norm_const() const { return norm_const_; }
    const DerivLayout& layout() const { return layout_; }

    // Exact partial derivative K^(gamma)(x); zero outside the closed unit ball.
    // Computed from the monomial expansion of the kernel polynomial.
    double eval(const double* x, const MultiIndex& gamma) const;
    double eval(const std::vector<double>& x, const MultiIndex& gamma) const {
        return eval(x.data(), gamma);
    }

    // All partials with |gamma| <= max_order at u, via the radial factorization
    // d^m/ds^m (1-s)^p with s = |u|^2. Fast path for KDE accumulation.
    void pack(const double* u, int max_order, KernelDerivs& out) const;

    // Adds w * (all partials at u) into acc (same layout as pack). Returns false
    // when u is outside the support (nothing added).
    bool accumulate(const double* u, double w, int max_order, double* acc) const;

    static int pack_size(const DerivLayout& layout, int max_order);

private:
    struct Monomial {
        std::vector<int> e;
        double c;
    };
    using Poly = std::vector<Monomial>;

    int dim_;
    int exponent_;
    double norm_const_;
    DerivLayout layout_;
    double radial_[5];                   // c_d * d^m/ds^m prefactors sign/fall. factors
    std::map<MultiIndex, Poly> derivs_;  // monomial form of every K^(gamma), |gamma| <= 4

    static Poly differentiate(const Poly& p, int axis);
    static double eval_poly(const Poly& p, const double* x, int dim);
};

}  // namespace ridgecr
