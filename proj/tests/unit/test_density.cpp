#include <doctest.h>

#include <cmath>
#include <random>

#include "ridgecr/density_model.hpp"
#include "ridgecr/errors.hpp"
#include "ridgecr/kernel_constants.hpp"

using namespace ridgecr;

namespace {

Box unit_box(int d, double lo, double hi) {
    Box b;
    b.lo = Vector::Constant(d, lo);
    b.hi = Vector::Constant(d, hi);
    return b;
}

DensityModel standard_gaussian(int d) {
    DensityModel::Component c;
    c.weight = 1.0;
    c.mean = Vector::Zero(d);
    c.cov = Matrix::Identity(d, d);
    return DensityModel({c}, unit_box(d, -4.0, 4.0));
}

DensityModel random_mixture(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.4, 1.4);
    std::vector<DensityModel::Component> comps;
    double wsum = 0.0;
    for (int c = 0; c < 2; ++c) {
        DensityModel::Component comp;
        comp.weight = u(rng);
        wsum += comp.weight;
        comp.mean = Vector::NullaryExpr(d, [&](Eigen::Index) { return g(rng); });
        Matrix A = Matrix::NullaryExpr(d, d, [&](Eigen::Index, Eigen::Index) { return g(rng); });
        comp.cov = A * A.transpose() + 0.5 * Matrix::Identity(d, d);
        comps.push_back(comp);
    }
    for (auto& c : comps) c.weight /= wsum;
    // renormalize exactly
    double total = 0.0;
    for (auto& c : comps) total += c.weight;
    comps.back().weight += 1.0 - total;
    return DensityModel(comps, unit_box(d, -5.0, 5.0));
}

}  // namespace

TEST_SUITE("density") {

TEST_CASE("weights must sum to one and covariances must be SPD") {
    DensityModel::Component c;
    c.weight = 0.5;
    c.mean = Vector::Zero(2);
    c.cov = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(DensityModel({c}, unit_box(2, -1, 1)), PreconditionError);
    c.weight = 1.0;
    c.cov << 1.0, 2.0, 2.0, 1.0;  // indefinite
    CHECK_THROWS_AS(DensityModel({c}, unit_box(2, -1, 1)), PreconditionError);
}

TEST_CASE("gradient vanishes at the mode") {
    DensityModel m = standard_gaussian(2);
    DerivPack p = model_derivs(m, Vector::Zero(2), 2);
    CHECK(p.grad.norm() == 0.0);
    CHECK(p.value == doctest::Approx(1.0 / (2 * 3.141592653589793)).epsilon(1e-14));
}

TEST_CASE("symmetric two-component mixture has zero gradient at the midpoint") {
    DensityModel::Component a, b;
    a.weight = b.weight = 0.5;
    a.mean = Vector::Constant(2, 1.3);
    b.mean = -a.mean;
    a.cov = b.cov = 0.7 * Matrix::Identity(2, 2);
    DensityModel m({a, b}, unit_box(2, -4, 4));
    DerivPack p = model_derivs(m, Vector::Zero(2), 1);
    CHECK(p.grad.norm() < 1e-16);
}

TEST_CASE("derivatives match central finite differences of the next-lower order") {
    std::mt19937_64 rng(101);
    std::normal_distribution<double> g;
    for (int d : {2, 3}) {
        const DerivLayout layout(d);
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            DensityModel m = random_mixture(d, rng);
            Vector x = Vector::NullaryExpr(d, [&](Eigen::Index) { return 1.5 * g(rng); });
            DerivPack p = m.derivs(x, 4);
            const double step = 3e-5;
            for (int order = 1; order <= 4; ++order) {
                const auto& tab = layout.table(order);
                double scale = 1e-8;
                for (int t = 0; t < tab.size(); ++t)
                    scale = std::max(scale, std::abs(p.deriv(tab.multi_index(t), layout)));
                for (int t = 0; t < tab.size(); ++t) {
                    MultiIndex gm = tab.multi_index(t);
                    int axis = 0;
                    for (int i = 0; i < d; ++i)
                        if (gm[i] > 0) axis = i;
                    MultiIndex lower = gm;
                    lower[axis]--;
                    Vector xp = x, xm = x;
                    xp(axis) += step;
                    xm(axis) -= step;
                    const double fd = (m.derivs(xp, order - 1).deriv(lower, layout) -
                                       m.derivs(xm, order - 1).deriv(lower, layout)) /
                                      (2 * step);
                    worst = std::max(worst, std::abs(fd - p.deriv(gm, layout)) / scale);
                }
            }
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("sampler preconditions and determinism") {
    DensityModel m = standard_gaussian(2);
    CHECK_THROWS_AS((void)sample(m, 0, 1), PreconditionError);
    SampleSet a = sample(m, 500, 42);
    SampleSet b = sample(m, 500, 42);
    CHECK((a.points - b.points).cwiseAbs().maxCoeff() == 0.0);
    SampleSet c = sample(m, 500, 43);
    CHECK((a.points - c.points).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("sample mean is within the CLT band") {
    DensityModel m = standard_gaussian(2);
    const long n = 100000;
    SampleSet s = sample(m, n, 7);
    const double bound = 4.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < 2; ++i) CHECK(std::abs(s.points.col(i).mean()) < bound);
}

TEST_CASE("smoothing vanishes as h -> 0") {
    DensityModel m = standard_gaussian(2);
    KernelSpec spec(2, 5);
    Vector x(2);
    x << 0.4, -0.3;
    DerivPack exact = m.derivs(x, 0);
    DerivPack sm = smoothed_derivs(m, spec, 1e-3, x, 0);
    CHECK(std::abs(sm.value - exact.value) < 1e-5);
}

TEST_CASE("leading smoothing bias is (h^2/2) mu_K Laplacian") {
    DensityModel m = standard_gaussian(2);
    KernelSpec spec(2, 5);
    KernelConstants consts = kernel_constants(spec);
    const DerivLayout layout(2);
    Vector x(2);
    x << 0.7, 0.2;
    DerivPack exact = m.derivs(x, 2);
    const double lap = exact.hess(0) + exact.hess(2);
    for (double h : {0.05, 0.025}) {
        DerivPack sm = smoothed_derivs(m, spec, h, x, 0, 4);
        const double coeff = (sm.value - exact.value) / (0.5 * h * h * consts.mu_K);
        CHECK(coeff == doctest::Approx(lap).epsilon(5e-3));
    }
}

TEST_CASE("differentiating under the integral matches integration by parts") {
    // route a: integrate K against the model derivative (smoothed_derivs)
    // route b: differentiate the convolution through the kernel
    DensityModel m = standard_gaussian(2);
    KernelSpec spec(2, 5);
    const double h = 0.4;
    Vector x(2);
    x << 0.3, -0.5;
    DerivPack sm = smoothed_derivs(m, spec, h, x, 2, 5);

    PointRule rule = ball_rule_polar(2, 5);
    const DerivLayout layout(2);
    for (const MultiIndex& gm : {MultiIndex{1, 0}, MultiIndex{0, 2}, MultiIndex{1, 1}}) {
        double acc = 0.0;
        for (long q = 0; q < rule.size(); ++q) {
            Vector u = rule.nodes.row(q).transpose();
            acc += rule.weights(q) * spec.eval(u.data(), gm) *
                   m.derivs(x - h * u, 0).value;
        }
        acc /= std::pow(h, multi_order(gm));
        CHECK(acc == doctest::Approx(sm.deriv(gm, layout)).epsilon(1e-8));
    }
}

}  // TEST_SUITE
