#include <doctest.h>

#include <cmath>

#include "ridgecr/errors.hpp"
#include "ridgecr/ridge_finder.hpp"

using namespace ridgecr;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

Box box2(double lo, double hi) {
    Box b;
    b.lo = Vector::Constant(2, lo);
    b.hi = Vector::Constant(2, hi);
    return b;
}

DensityModel axis_gaussian() {
    DensityModel::Component c;
    c.weight = 1.0;
    c.mean = Vector::Zero(2);
    c.cov = Matrix::Zero(2, 2);
    c.cov(0, 0) = 4.0;
    c.cov(1, 1) = 1.0;
    return DensityModel({c}, box2(-3.0, 3.0));
}

DensityModel collinear_mixture() {
    std::vector<DensityModel::Component> comps(3);
    const double means[3] = {-1.6, 0.0, 1.6};
    for (int i = 0; i < 3; ++i) {
        comps[i].weight = 1.0 / 3.0;
        comps[i].mean = Vector::Zero(2);
        comps[i].mean(0) = means[i];
        comps[i].cov = 0.8 * Matrix::Identity(2, 2);
    }
    return DensityModel(comps, box2(-3.0, 3.0));
}

}  // namespace

TEST_SUITE("finder") {

TEST_CASE("true ridge of the anisotropic Gaussian") {
    // The two defining conditions admit the major axis plus a short branch of the
    // minor axis where lambda_2 = -f/4 exceeds f(x2^2 - 1): every returned point
    // must land on one of the two analytic solution sets.
    DensityModel m = axis_gaussian();
    KernelConstants consts = kernel_constants(KernelSpec(2, 5));
    IndexMaps maps = build_index_maps(2);
    RidgeSet rs = true_ridge(m, 1, {25, 25}, consts, maps, 1e-11);
    REQUIRE(rs.size() > 10);
    const double cross = std::sqrt(3.0) / 2.0;
    long on_major = 0;
    for (long i = 0; i < rs.size(); ++i) {
        CHECK(rs.diag[i].lambda_rp1 < 0.0);
        CHECK(rs.diag[i].proj_grad.norm() <= 1e-11);
        const bool major = std::abs(rs.points(i, 1)) < 1e-8;
        const bool minor = std::abs(rs.points(i, 0)) < 1e-8 &&
                           std::abs(rs.points(i, 1)) >= cross - 1e-6;
        CHECK((major || minor));
        if (major) ++on_major;
    }
    CHECK(on_major > 10);
    // the major axis segment is fully recovered
    CHECK(rs.points.col(0).minCoeff() < -2.5);
    CHECK(rs.points.col(0).maxCoeff() > 2.5);
}

TEST_CASE("three collinear components recover the line through the means") {
    DensityModel m = collinear_mixture();
    KernelConstants consts = kernel_constants(KernelSpec(2, 5));
    IndexMaps maps = build_index_maps(2);
    RidgeSet rs = true_ridge(m, 1, {31, 31}, consts, maps, 1e-11);
    REQUIRE(rs.size() > 10);
    // the line through the means is covered near the means (account for the
    // discretization spacing of the returned point set)
    Matrix probe = densify_polylines(rs, 0.02);
    for (double t : {-1.6, -0.8, 0.0, 0.8, 1.6}) {
        double dmin = 1e18;
        for (long i = 0; i < probe.rows(); ++i)
            dmin = std::min(dmin, std::hypot(probe(i, 0) - t, probe(i, 1)));
        CHECK(dmin < 0.05);
    }
    // and every output satisfies the defining conditions
    for (long i = 0; i < rs.size(); ++i) {
        CHECK(rs.diag[i].lambda_rp1 < 0.0);
        CHECK(rs.diag[i].proj_grad.norm() <= 1e-11);
    }
}

TEST_CASE("r must satisfy 1 <= r < d") {
    DensityModel m = axis_gaussian();
    KernelConstants consts = kernel_constants(KernelSpec(2, 5));
    IndexMaps maps = build_index_maps(2);
    CHECK_THROWS_AS((void)true_ridge(m, 2, {9, 9}, consts, maps), PreconditionError);
    CHECK_THROWS_AS((void)true_ridge(m, 0, {9, 9}, consts, maps), PreconditionError);
}

TEST_CASE("estimated ridge recovers a steep crest tightly") {
    // sharp transverse curvature: the crest position noise is ~0.03 here, so the
    // axis must be recovered within 0.1
    DensityModel::Component c;
    c.weight = 1.0;
    c.mean = Vector::Zero(2);
    c.cov = Matrix::Zero(2, 2);
    c.cov(0, 0) = 1.0;
    c.cov(1, 1) = 0.09;
    Box b;
    b.lo = Vector(2);
    b.hi = Vector(2);
    b.lo << -1.2, -0.28;
    b.hi << 1.2, 0.28;
    DensityModel m({c}, b);
    auto sample = std::make_shared<SampleSet>(m.draw(5000, 99));
    auto spec = std::make_shared<KernelSpec>(2, 5);
    KernelConstants consts = kernel_constants(*spec);
    IndexMaps maps = build_index_maps(2);
    EvalGrid seeds = EvalGrid::cover(b, {25, 13});
    RidgeSet rs = find_ridge(sample, spec, 0.5, 1, seeds, b, consts, maps);
    REQUIRE(rs.size() > 10);
    for (double t = -1.1; t <= 1.1; t += 0.05) {
        double dmin = 1e18;
        for (long i = 0; i < rs.size(); ++i)
            dmin = std::min(dmin, std::hypot(rs.points(i, 0) - t, rs.points(i, 1)));
        CHECK(dmin < 0.1);
    }
}

TEST_CASE("estimated ridge from a large sample recovers the axis") {
    // flat transverse curvature (sigma_perp = 1): the crest of fhat wanders at the
    // gamma^(1)-scale ~0.13, so recovery is asserted at that statistical scale
    DensityModel m = axis_gaussian();
    auto sample = std::make_shared<SampleSet>(m.draw(5000, 99));
    auto spec = std::make_shared<KernelSpec>(2, 5);
    KernelConstants consts = kernel_constants(*spec);
    IndexMaps maps = build_index_maps(2);
    const double h = 1.0;
    EvalGrid seeds = EvalGrid::cover(m.domain(), {61, 61});
    RidgeSet rs = find_ridge(sample, spec, h, 1, seeds, m.domain(), consts, maps);
    REQUIRE(rs.size() > 10);
    // every point of the central axis segment has an estimated point nearby (the
    // full estimate also carries the minor branch and low-density crest fragments,
    // which belong to the plug-in set by definition)
    for (double t = -2.0; t <= 2.0; t += 0.1) {
        double dmin = 1e18;
        for (long i = 0; i < rs.size(); ++i)
            dmin = std::min(dmin, std::hypot(rs.points(i, 0) - t, rs.points(i, 1)));
        CHECK(dmin < 0.45);
    }

    SUBCASE("determinism") {
        RidgeSet rs2 = find_ridge(sample, spec, h, 1, seeds, m.domain(), consts, maps);
        REQUIRE(rs2.size() == rs.size());
        CHECK((rs.points - rs2.points).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("returned points re-verify the ridge conditions independently") {
        for (long i = 0; i < std::min<long>(rs.size(), 20); ++i) {
            DerivPack p = kde_pack(*sample, *spec, h, rs.points.row(i).transpose(), 2);
            EigenFrame f = ordered_eigen(p.hess_matrix());
            CHECK((f.V(1).transpose() * p.grad).norm() <= 1e-9);
            CHECK(f.values(1) < 0.0);
        }
    }

    SUBCASE("tangents are orthogonal to the normal frame") {
        for (long i = 0; i < rs.size(); ++i) {
            DerivPack p = kde_pack(*sample, *spec, h, rs.points.row(i).transpose(), 2);
            EigenFrame f = ordered_eigen(p.hess_matrix());
            CHECK((rs.tangents[i].transpose() * f.V(1)).cwiseAbs().maxCoeff() < 1e-6);
        }
    }
}

TEST_CASE("seeds far from the data give an empty ridge") {
    DensityModel m = axis_gaussian();
    auto sample = std::make_shared<SampleSet>(m.draw(200, 5));
    auto spec = std::make_shared<KernelSpec>(2, 5);
    KernelConstants consts = kernel_constants(*spec);
    IndexMaps maps = build_index_maps(2);
    Box far;
    far.lo = Vector::Constant(2, 40.0);
    far.hi = Vector::Constant(2, 44.0);
    EvalGrid seeds = EvalGrid::cover(far, {5, 5});
    RidgeSet rs = find_ridge(sample, spec, 0.45, 1, seeds, far, consts, maps);
    CHECK(rs.size() == 0);
}

TEST_CASE("polyline chaining") {
    SUBCASE("circle closes with the right length") {
        const int n = 126;
        RidgeSet rs;
        rs.dim = 2;
        rs.r = 1;
        rs.resolution = 0.05;
        rs.points.resize(n, 2);
        for (int i = 0; i < n; ++i) {
            const double a = 2.0 * kPi * i / n;
            rs.points(i, 0) = std::cos(a);
            rs.points(i, 1) = std::sin(a);
        }
        link_polyline(rs);
        REQUIRE(rs.polylines.size() == 1);
        CHECK(rs.closed[0]);
        CHECK(rs.total_length == doctest::Approx(2.0 * kPi).epsilon(0.01));
    }

    SUBCASE("distant clusters give separate chains") {
        RidgeSet rs;
        rs.dim = 2;
        rs.r = 1;
        rs.resolution = 0.05;
        rs.points.resize(10, 2);
        for (int i = 0; i < 5; ++i) {
            rs.points(i, 0) = 0.05 * i;
            rs.points(i, 1) = 0.0;
            rs.points(5 + i, 0) = 10.0 + 0.05 * i;
            rs.points(5 + i, 1) = 0.0;
        }
        link_polyline(rs);
        CHECK(rs.polylines.size() == 2);
        CHECK(!rs.closed[0]);
        CHECK(!rs.closed[1]);
    }

    SUBCASE("single point is a zero-length chain") {
        RidgeSet rs;
        rs.dim = 2;
        rs.r = 1;
        rs.resolution = 0.05;
        rs.points = Matrix::Zero(1, 2);
        link_polyline(rs);
        REQUIRE(rs.polylines.size() == 1);
        CHECK(rs.total_length == 0.0);
    }

    SUBCASE("r >= 2 is rejected") {
        RidgeSet rs;
        rs.dim = 3;
        rs.r = 2;
        rs.points = Matrix::Zero(3, 3);
        CHECK_THROWS_AS(link_polyline(rs), PreconditionError);
    }
}

TEST_CASE("densified polylines lie on the oracle ridge") {
    DensityModel m = axis_gaussian();
    KernelConstants consts = kernel_constants(KernelSpec(2, 5));
    IndexMaps maps = build_index_maps(2);
    RidgeSet rs = true_ridge(m, 1, {25, 25}, consts, maps, 1e-11);
    ModelField field(std::make_shared<DensityModel>(m));
    Matrix probe = densify_polylines(rs, 0.05, &field, 1);
    CHECK(probe.rows() > 100);
    for (long i = 0; i < probe.rows(); ++i) {
        const bool major = std::abs(probe(i, 1)) < 1e-6;
        const bool minor = std::abs(probe(i, 0)) < 1e-6;
        CHECK((major || minor));
    }
    // spacing is roughly uniform along the axis
    CHECK(probe.rows() >= static_cast<long>(5.0 / 0.06));
}

}  // TEST_SUITE
