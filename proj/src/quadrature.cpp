#include "ridgecr/quadrature.hpp"

#include <cmath>

#include "ridgecr/errors.hpp"

namespace ridgecr {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

void gauss_legendre(int n, double a, double b, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    if (n < 1) throw PreconditionError("gauss_legendre: n >= 1 required");
    nodes.resize(n);
    weights.resize(n);
    // Newton iteration from Chebyshev initial guesses on [-1, 1]
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes(i) = -x;
        nodes(n - 1 - i) = x;
        weights(i) = w;
        weights(n - 1 - i) = w;
    }
    const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        nodes(i) = mid + hw * nodes(i);
        weights(i) *= hw;
    }
}

double sphere_surface_area(int m) {
    // |S^m| = 2 pi^((m+1)/2) / Gamma((m+1)/2)
    return 2.0 * std::pow(kPi, 0.5 * (m + 1)) / std::tgamma(0.5 * (m + 1));
}

PointRule sphere_rule(int m, int n_nodes) {
    PointRule r;
    if (m == 0) {
        r.nodes.resize(2, 1);
        r.nodes << -1.0, 1.0;
        r.weights = Eigen::VectorXd::Ones(2);
        return r;
    }
    if (m == 1) {
        int n = std::max(n_nodes, 4);
        r.nodes.resize(n, 2);
        r.weights = Eigen::VectorXd::Constant(n, 2.0 * kPi / n);
        for (int i = 0; i < n; ++i) {
            double a = 2.0 * kPi * (i + 0.5) / n;
            r.nodes(i, 0) = std::cos(a);
            r.nodes(i, 1) = std::sin(a);
        }
        return r;
    }
    if (m == 2) {
        int nt = std::max(4, static_cast<int>(std::sqrt(static_cast<double>(n_nodes))));
        int np = 2 * nt;
        Eigen::VectorXd ct, wt;
        gauss_legendre(nt, -1.0, 1.0, ct, wt);
        r.nodes.resize(nt * np, 3);
        r.weights.resize(nt * np);
        int k = 0;
        for (int i = 0; i < nt; ++i) {
            double st = std::sqrt(std::max(0.0, 1.0 - ct(i) * ct(i)));
            for (int j = 0; j < np; ++j) {
                double a = 2.0 * kPi * (j + 0.5) / np;
                r.nodes(k, 0) = st * std::cos(a);
                r.nodes(k, 1) = st * std::sin(a);
                r.nodes(k, 2) = ct(i);
                r.weights(k) = wt(i) * (2.0 * kPi / np);
                ++k;
            }
        }
        return r;
    }
    // spiral node set with equal weights
    int n = std::max(n_nodes, 2 * (m + 1));
    const int dim = m + 1;
    r.nodes.resize(n, dim);
    r.weights = Eigen::VectorXd::Constant(n, sphere_surface_area(m) / n);
    // low-discrepancy lattice on the cube mapped through normalized Gaussians
    double state = 0.5;
    auto next01 = [&state]() {
        state = std::fmod(state + 0.6180339887498949, 1.0);
        return state;
    };
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd v(dim);
        for (int j = 0; j < dim; ++j) {
            // inverse-normal via Beasley-Springer/Moro-free approximation: use erfinv-like
            double u = (i + (j + 1) * next01()) / n;
            u = u - std::floor(u);
            u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
            // rational approximation of probit
            double t = std::sqrt(-2.0 * std::log(u < 0.5 ? u : 1.0 - u));
            double z = t - (2.515517 + 0.802853 * t + 0.010328 * t * t) /
                               (1.0 + 1.432788 * t + 0.189269 * t * t + 0.001308 * t * t * t);
            v(j) = (u < 0.5) ? -z : z;
        }
        double nv = v.norm();
        if (nv <= 0.0) {
            v = Eigen::VectorXd::Unit(dim, 0);
            nv = 1.0;
        }
        r.nodes.row(i) = (v / nv).transpose();
    }
    return r;
}

PointRule ball_rule_polar(int dim, int level) {
    if (level < 1) throw PreconditionError("ball_rule_polar: level >= 1 required");
    const int nr = 8 * level;
    Eigen::VectorXd rn, rw;
    gauss_legendre(nr, 0.0, 1.0, rn, rw);

    PointRule sph;
    if (dim == 2) {
        sph = sphere_rule(1, 16 * level);
    } else if (dim == 3) {
        sph = sphere_rule(2, 16 * level * 16 * level / 2);
    } else {
        sph = sphere_rule(dim - 1, 64 * level * dim);
    }

    PointRule r;
    const long ns = sph.size();
    r.nodes.resize(nr * ns, dim);
    r.weights.resize(nr * ns);
    long k = 0;
    for (int i = 0; i < nr; ++i) {
        const double rad = rn(i);
        const double wr = rw(i) * std::pow(rad, dim - 1);
        for (long j = 0; j < ns; ++j) {
            r.nodes.row(k) = rad * sph.nodes.row(j);
            r.weights(k) = wr * sph.weights(j);
            ++k;
        }
    }
    return r;
}

PointRule ball_rule_cube(int dim, int nodes_per_axis) {
    Eigen::VectorXd xn, xw;
    gauss_legendre(nodes_per_axis, -1.0, 1.0, xn, xw);
    long total = 1;
    for (int i = 0; i < dim; ++i) total *= nodes_per_axis;
    PointRule r;
    r.nodes.resize(total, dim);
    r.weights.resize(total);
    std::vector<int> idx(dim, 0);
    for (long k = 0; k < total; ++k) {
        double w = 1.0;
        for (int i = 0; i < dim; ++i) {
            r.nodes(k, i) = xn(idx[i]);
            w *= xw(idx[i]);
        }
        r.weights(k) = w;
        for (int i = dim - 1; i >= 0; --i) {
            if (++idx[i] < nodes_per_axis) break;
            idx[i] = 0;
        }
    }
    return r;
}

}  // namespace ridgecr
