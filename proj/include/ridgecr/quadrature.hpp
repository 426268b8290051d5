#pragma once

#include <Eigen/Dense>
#include <functional>

namespace ridgecr {

// Gauss-Legendre nodes/weights on [a, b].
void gauss_legendre(int n, double a, double b, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

// Node set with weights for integration over a region of R^d. Nodes are stored
// row-major so that nodes.row(q).data() is a contiguous point.
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct PointRule {
    RowMajorMatrix nodes;  // N x d
    Eigen::VectorXd weights;
    long size() const { return nodes.rows(); }
};

// Unit-ball rule in polar form: radial Gauss-Legendre times an exact sphere rule.
// Exact for polynomial integrands of total degree <= 2*level - 3 or so; `level`
// scales all node counts.
PointRule ball_rule_polar(int dim, int level);

// Tensor-product Gauss-Legendre on the bounding cube [-1,1]^d (integrand must
// vanish outside the ball). Independent cross-check scheme for the polar rule.
PointRule ball_rule_cube(int dim, int nodes_per_axis);

// Uniform rule on the sphere S^m embedded in R^(m+1); weights sum to |S^m|.
// m = 0: counting measure on {-1, +1}. m = 1: uniform angles. m = 2: Gauss in
// cos(theta) x uniform azimuth. m >= 3: Fibonacci-style spiral (equal weights).
PointRule sphere_rule(int m, int n_nodes);

double sphere_surface_area(int m);

}  // namespace ridgecr
