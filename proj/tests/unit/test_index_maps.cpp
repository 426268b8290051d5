#include <doctest.h>

#include <random>

#include "ridgecr/index_maps.hpp"

using namespace ridgecr;

TEST_SUITE("index_maps") {

TEST_CASE("d = 2 duplication matrix matches the 4x3 layout") {
    IndexMaps m = build_index_maps(2);
    Matrix expected(4, 3);
    // rows correspond to vec entries a11, a21, a12, a22
    expected << 1, 0, 0,
                0, 1, 0,
                0, 1, 0,
                0, 0, 1;
    CHECK((m.dup - expected).cwiseAbs().maxCoeff() == 0.0);

    Matrix I = Matrix::Identity(2, 2);
    Vector vec = m.dup * m.vech(I);
    CHECK(vec(0) == 1.0);
    CHECK(vec(1) == 0.0);
    CHECK(vec(2) == 0.0);
    CHECK(vec(3) == 1.0);
}

TEST_CASE("D vech(A) = vec(A) exactly for random symmetric A") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int d : {2, 3}) {
        IndexMaps m = build_index_maps(d);
        for (int trial = 0; trial < 1000; ++trial) {
            Matrix A(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = i; j < d; ++j) A(i, j) = A(j, i) = g(rng);
            Vector vec_direct(d * d);
            for (int j = 0; j < d; ++j)
                for (int i = 0; i < d; ++i) vec_direct(i + j * d) = A(i, j);
            CHECK((m.dup * m.vech(A) - vec_direct).cwiseAbs().maxCoeff() == 0.0);

            // reorder is a permutation of vech
            Vector dv = m.to_dvech(m.vech(A));
            for (int k = 0; k < m.vech_size(); ++k) {
                auto [a, b] = m.dvech_pairs[k];
                CHECK(dv(k) == A(a, b));
            }
        }
    }
}

TEST_CASE("pseudoinverse identity (D+)^T D^T = (I + K)/2") {
    for (int d : {2, 3, 4}) {
        IndexMaps m = build_index_maps(d);
        Matrix lhs = m.dup_pinv.transpose() * m.dup.transpose();
        Matrix rhs = 0.5 * (Matrix::Identity(d * d, d * d) + m.commutation);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("commutation swaps Kronecker factors") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int d : {2, 3}) {
        IndexMaps m = build_index_maps(d);
        Vector p(d), q(d);
        for (int i = 0; i < d; ++i) {
            p(i) = g(rng);
            q(i) = g(rng);
        }
        Vector pq(d * d), qp(d * d);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                pq(a * d + b) = p(a) * q(b);
                qp(a * d + b) = q(a) * p(b);
            }
        CHECK((m.commutation * pq - qp).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("dvech index bookkeeping") {
    IndexMaps m = build_index_maps(3);
    CHECK(m.dvech_index(0, 0) == 0);
    CHECK(m.dvech_index(2, 2) == 2);
    CHECK(m.dvech_index(1, 0) == 3);
    CHECK(m.dvech_index(2, 0) == 4);
    CHECK(m.dvech_index(2, 1) == 5);
    CHECK(m.reorder.rows() == 6);
    // permutation matrix: one 1 per row/column
    CHECK(m.reorder.sum() == 6.0);
    CHECK((m.reorder * m.reorder.transpose() - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
}

}  // TEST_SUITE
