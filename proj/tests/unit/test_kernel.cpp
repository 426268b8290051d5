#include <doctest.h>

#include <cmath>
#include <random>

#include "ridgecr/errors.hpp"
#include "ridgecr/kernel.hpp"
#include "ridgecr/quadrature.hpp"

using namespace ridgecr;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_SUITE("kernel") {

TEST_CASE("normalizing constant and value at the origin") {
    KernelSpec k2(2, 5);
    std::vector<double> origin{0.0, 0.0};
    MultiIndex zero{0, 0};
    // radial integral 1/12 gives c_2 = 6/pi
    CHECK(k2.eval(origin, zero) == doctest::Approx(6.0 / kPi).epsilon(1e-12));
    CHECK(k2.norm_const() == doctest::Approx(6.0 / kPi).epsilon(1e-12));
}

TEST_CASE("zero outside the support") {
    for (int d : {2, 3}) {
        KernelSpec k(d, 5);
        std::vector<double> x(d, 0.0);
        x[0] = 1.5;
        MultiIndex g(d, 0);
        CHECK(k.eval(x, g) == 0.0);
        g[0] = 2;
        g[d - 1] += 1;
        CHECK(k.eval(x, g) == 0.0);
    }
}

TEST_CASE("odd derivatives vanish at the origin") {
    KernelSpec k(2, 5);
    std::vector<double> origin{0.0, 0.0};
    CHECK(k.eval(origin, {1, 0}) == 0.0);
    CHECK(k.eval(origin, {0, 1}) == 0.0);
    CHECK(k.eval(origin, {3, 0}) == 0.0);
    CHECK(k.eval(origin, {1, 2}) == 0.0);
}

TEST_CASE("integrates to one") {
    for (int d : {2, 3}) {
        KernelSpec k(d, 5);
        PointRule rule = ball_rule_polar(d, 2);
        MultiIndex zero(d, 0);
        double mass = 0.0;
        for (long q = 0; q < rule.size(); ++q)
            mass += rule.weights(q) * k.eval(rule.nodes.row(q).data(), zero);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("order above 4 is rejected") {
    KernelSpec k(2, 5);
    std::vector<double> x{0.1, 0.2};
    CHECK_THROWS_AS((void)k.eval(x, {3, 2}), PreconditionError);
}

TEST_CASE("radial pack agrees with the monomial derivative path") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unif(-0.8, 0.8);
    for (int d : {2, 3, 4}) {
        KernelSpec k(d, 5);
        const auto& layout = k.layout();
        KernelDerivs kd;
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<double> x(d);
            for (auto& v : x) v = unif(rng) / std::sqrt(static_cast<double>(d));
            k.pack(x.data(), 4, kd);
            int pos = 0;
            for (int order = 0; order <= 4; ++order) {
                const auto& tab = layout.table(order);
                for (int t = 0; t < tab.size(); ++t) {
                    const double direct = k.eval(x, tab.multi_index(t));
                    CHECK(kd.data[pos] == doctest::Approx(direct).epsilon(1e-11));
                    ++pos;
                }
            }
        }
    }
}

TEST_CASE("derivatives are continuous across the support boundary for p = 5") {
    // order-4 derivatives vanish linearly in (1 - |x|^2); lower orders faster
    KernelSpec k(2, 5);
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        for (const MultiIndex& g : {MultiIndex{0, 0}, MultiIndex{2, 0}, MultiIndex{2, 2}}) {
            std::vector<double> inside{(1.0 - eps) / std::sqrt(2.0),
                                       (1.0 - eps) / std::sqrt(2.0)};
            CHECK(std::abs(k.eval(inside, g)) < 2500.0 * eps);
        }
    }
}

TEST_CASE("pack matches central finite differences of lower orders") {
    KernelSpec k(2, 5);
    std::vector<double> x{0.31, -0.22};
    const double step = 1e-6;
    // d/dx1 of K via FD vs analytic
    std::vector<double> xp{x[0] + step, x[1]}, xm{x[0] - step, x[1]};
    MultiIndex zero{0, 0}, dx{1, 0};
    const double fd = (k.eval(xp, zero) - k.eval(xm, zero)) / (2 * step);
    CHECK(fd == doctest::Approx(k.eval(x, dx)).epsilon(1e-6));
}

}  // TEST_SUITE
