#include "ridgecr/omega.hpp"

#include <cmath>

#include "ridgecr/errors.hpp"

namespace ridgecr {

Matrix omega_quadrature(const KernelSpec& spec, const IndexMaps& maps, const Vector& A,
                        int quad_level) {
    const int d = spec.dim();
    const int m2 = maps.vech_size();
    if (A.size() != m2) throw PreconditionError("omega_quadrature: A must have d(d+1)/2 entries");
    if (!A.allFinite()) throw PreconditionError("omega_quadrature: A must be finite");

    PointRule rule = ball_rule_polar(d, quad_level);
    const auto& layout = spec.layout();
    const auto& t2 = layout.table(2);
    const auto& t3 = layout.table(3);
    const int off3 = 1 + d + m2;

    Matrix omega = Matrix::Zero(d, d);
    KernelDerivs kd;
    Vector jta(d);
    for (long q = 0; q < rule.size(); ++q) {
        spec.pack(rule.nodes.row(q).data(), 3, kd);
        const double* p = kd.data.data();
        // (J^T A)_i with J_{k,i} = d/du_i of vech(hess K)_k
        for (int i = 0; i < d; ++i) {
            double acc = 0.0;
            for (int k = 0; k < m2; ++k) {
                const auto& pr = t2.tuple(k);
                acc += A(k) * p[off3 + t3.index_of({pr[0], pr[1], i, 0})];
            }
            jta(i) = acc;
        }
        omega.noalias() += rule.weights(q) * (jta * jta.transpose());
    }
    return omega;
}

Matrix closed_form_P(const KernelConstants& consts, const IndexMaps& maps, const Vector& t) {
    const int d = maps.dim;
    const int m2 = maps.vech_size();
    const double aK = consts.a_K, bK = consts.b_K;
    Matrix P = Matrix::Zero(d, d);
    const auto& pairs = maps.dvech_pairs;

    for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (int k1 = 0; k1 < d; ++k1) {
            for (int k2 = 0; k2 < d; ++k2) {
                double coef = 1.0;
                if (k1 == i && k2 == i) coef = aK;
                else if (k1 != i && k2 != i && k1 != k2) coef = bK;
                s += coef * t(k1) * t(k2);
            }
        }
        for (int k = d; k < m2; ++k) {
            const bool touches = pairs[k].first == i || pairs[k].second == i;
            s += (touches ? 1.0 : bK) * t(k) * t(k);
        }
        P(i, i) = s;
        for (int j = i + 1; j < d; ++j) {
            const int kij = maps.dvech_index(i, j);
            double v = 0.0;
            for (int k = 0; k < d; ++k) v += 2.0 * ((k == i || k == j) ? 1.0 : bK) * t(k) * t(kij);
            for (int k1 = d; k1 < m2; ++k1) {
                for (int k2 = d; k2 < m2; ++k2) {
                    // symmetric difference of the index pairs must equal {i, j}
                    const auto& a = pairs[k1];
                    const auto& b = pairs[k2];
                    int sd[4];
                    int n = 0;
                    for (int v1 : {a.first, a.second}) {
                        if (v1 != b.first && v1 != b.second) sd[n++] = v1;
                    }
                    for (int v1 : {b.first, b.second}) {
                        if (v1 != a.first && v1 != a.second) sd[n++] = v1;
                    }
                    if (n == 2 && ((sd[0] == i && sd[1] == j) || (sd[0] == j && sd[1] == i)))
                        v += bK * t(k1) * t(k2);
                }
            }
            P(i, j) = P(j, i) = v;
        }
    }
    return P;
}

Matrix closed_form_P_2d(const KernelConstants& consts, const Vector& t) {
    // dvech coordinates: t(0), t(1) diagonal, t(2) the off-diagonal slot
    const double aK = consts.a_K;
    Matrix P(2, 2);
    P(0, 0) = aK * t(0) * t(0) + t(1) * t(1) + t(2) * t(2) + 2.0 * t(0) * t(1);
    P(1, 1) = aK * t(1) * t(1) + t(0) * t(0) + t(2) * t(2) + 2.0 * t(0) * t(1);
    P(0, 1) = P(1, 0) = 2.0 * t(0) * t(2) + 2.0 * t(1) * t(2);
    return P;
}

PDecomposition p_decomposition_3d(const KernelConstants& consts, const Vector& t) {
    if (t.size() != 6) throw PreconditionError("p_decomposition_3d: needs 6 dvech coordinates");
    const double aK = consts.a_K, bK = consts.b_K;
    const double sb = std::sqrt(bK), s1b = std::sqrt(1.0 - bK);
    const double t1 = t(0), t2 = t(1), t3 = t(2), t4 = t(3), t5 = t(4), t6 = t(5);

    Matrix L(3, 10);
    L.setZero();
    L.block<3, 3>(0, 0) << t1 / bK + t2 + t3, t4, t5,
                           t4, t2 / bK + t1 + t3, t6,
                           t5, t6, t3 / bK + t1 + t2;
    L.block<3, 3>(0, 0) *= sb;
    L.col(3) << sb * t6, sb * t5, sb * t4;
    L.block<3, 6>(0, 4) << t4, t2, t5, t3, 0, 0,
                           t1, t4, 0, 0, t6, t3,
                           0, 0, t1, t5, t2, t6;
    L.block<3, 6>(0, 4) *= s1b;

    Matrix S = Matrix::Zero(3, 3);
    S(0, 0) = (aK - 1.0 / bK) * t1 * t1;
    S(1, 1) = (aK - 1.0 / bK) * t2 * t2;
    S(2, 2) = (aK - 1.0 / bK) * t3 * t3;
    return {L, S};
}

Matrix omega_closed_form(const KernelConstants& consts, const IndexMaps& maps, const Vector& A) {
    if (A.size() != maps.vech_size())
        throw PreconditionError("omega_closed_form: A must have d(d+1)/2 entries");
    Vector t = maps.to_dvech(A);
    return consts.rho2_sq * closed_form_P(consts, maps, t);
}

}  // namespace ridgecr
