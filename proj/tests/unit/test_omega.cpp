#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "ridgecr/omega.hpp"

using namespace ridgecr;

TEST_SUITE("omega") {

TEST_CASE("zero input gives the zero matrix") {
    KernelSpec spec(2, 5);
    IndexMaps maps = build_index_maps(2);
    KernelConstants consts = kernel_constants(spec);
    Vector A = Vector::Zero(3);
    CHECK(omega_quadrature(spec, maps, A).cwiseAbs().maxCoeff() == 0.0);
    CHECK(omega_closed_form(consts, maps, A).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bilinearity: scaling A scales Omega quadratically") {
    KernelSpec spec(2, 5);
    IndexMaps maps = build_index_maps(2);
    Vector A(3);
    A << 0.4, -1.1, 0.7;
    Matrix o1 = omega_quadrature(spec, maps, A);
    Matrix o2 = omega_quadrature(spec, maps, (3.0 * A).eval());
    CHECK((o2 - 9.0 * o1).cwiseAbs().maxCoeff() < 1e-9 * o2.cwiseAbs().maxCoeff());
}

TEST_CASE("closed form P at t = (1,0,0) is diag(a_K, 1)") {
    KernelSpec spec(2, 5);
    IndexMaps maps = build_index_maps(2);
    KernelConstants consts = kernel_constants(spec);
    Vector t(3);
    t << 1.0, 0.0, 0.0;
    Matrix P = closed_form_P(consts, maps, t);
    CHECK(P(0, 0) == doctest::Approx(consts.a_K).epsilon(1e-12));
    CHECK(P(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(P(0, 1) == 0.0);
}

TEST_CASE("t = 0 gives P = 0") {
    KernelSpec spec(3, 5);
    IndexMaps maps = build_index_maps(3);
    KernelConstants consts = kernel_constants(spec);
    CHECK(closed_form_P(consts, maps, Vector::Zero(6)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("d = 2 four-term form matches the general expression") {
    KernelSpec spec(2, 5);
    IndexMaps maps = build_index_maps(2);
    KernelConstants consts = kernel_constants(spec);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        Vector t(3);
        for (int i = 0; i < 3; ++i) t(i) = g(rng);
        Matrix P1 = closed_form_P(consts, maps, t);
        Matrix P2 = closed_form_P_2d(consts, t);
        CHECK((P1 - P2).cwiseAbs().maxCoeff() < 1e-12 * P1.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("closed form equals direct quadrature to 1e-4 relative") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int d : {2, 3}) {
        KernelSpec spec(d, 5);
        IndexMaps maps = build_index_maps(d);
        KernelConstants consts = kernel_constants(spec);
        const int m = d * (d + 1) / 2;
        for (int trial = 0; trial < 100; ++trial) {
            Vector A(m);
            for (int i = 0; i < m; ++i) A(i) = g(rng);
            Matrix direct = omega_quadrature(spec, maps, A);
            Matrix closed = omega_closed_form(consts, maps, A);
            const double scale = direct.cwiseAbs().maxCoeff();
            CHECK((direct - closed).cwiseAbs().maxCoeff() < 1e-4 * scale);
        }
    }
}

TEST_CASE("d = 3 decomposition P = L L^T + S") {
    KernelSpec spec(3, 5);
    IndexMaps maps = build_index_maps(3);
    KernelConstants consts = kernel_constants(spec);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 100; ++trial) {
        Vector t(6);
        for (int i = 0; i < 6; ++i) t(i) = g(rng);
        Matrix P = closed_form_P(consts, maps, t);
        PDecomposition dec = p_decomposition_3d(consts, t);
        Matrix rebuilt = dec.L * dec.L.transpose() + dec.S;
        CHECK((P - rebuilt).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, P.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("P is positive definite for nonzero t when K3 holds") {
    KernelSpec spec(3, 5);
    IndexMaps maps = build_index_maps(3);
    KernelConstants consts = kernel_constants(spec);
    REQUIRE(consts.a_K * consts.b_K > 1.0);
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 100; ++trial) {
        Vector t(6);
        for (int i = 0; i < 6; ++i) t(i) = g(rng);
        Matrix P = closed_form_P(consts, maps, t);
        Eigen::SelfAdjointEigenSolver<Matrix> es(P);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
}

}  // TEST_SUITE
