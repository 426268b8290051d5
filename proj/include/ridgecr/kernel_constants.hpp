#pragma once

#include <Eigen/Dense>

#include "ridgecr/kernel.hpp"
#include "ridgecr/quadrature.hpp"

namespace ridgecr {

struct QuadSettings {
    enum class Scheme { polar, cube };
    Scheme scheme = Scheme::polar;
    int level = 2;
    bool adaptive = true;      // double the level until a_K moves < tol
    int max_doublings = 3;
    double tol = 1e-8;
};

// Kernel-derived scalars and the second-derivative Gram matrix R = R(d2K).
struct KernelConstants {
    int dim = 0;
    double a_K = 0.0;
    double b_K = 0.0;  // defined only when dim >= 3
    double mu_K = 0.0;
    double rho2_sq = 0.0;        // integral of [K^(2,1,0,...)]^2
    Eigen::MatrixXd R;           // vech-ordered, m x m
    bool k3_satisfied = false;
    double k3_margin = 0.0;      // a_K - 1 (d=2) or a_K*b_K - 1 (d>=3)
    int quad_level_used = 0;
};

KernelConstants kernel_constants(const KernelSpec& spec, const QuadSettings& quad = {});

// Integral of K^(gamma_a) * K^(gamma_b) over the unit ball with the given rule.
double ball_product_integral(const KernelSpec& spec, const PointRule& rule,
                             const MultiIndex& ga, const MultiIndex& gb);

}  // namespace ridgecr
