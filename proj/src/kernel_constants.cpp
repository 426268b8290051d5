#include "ridgecr/kernel_constants.hpp"

#include <cmath>

#include "ridgecr/errors.hpp"

namespace ridgecr {

namespace {

PointRule make_rule(int dim, const QuadSettings& q, int level) {
    if (q.scheme == QuadSettings::Scheme::polar) return ball_rule_polar(dim, level);
    return ball_rule_cube(dim, 32 * level);
}

struct RawIntegrals {
    double rho1_sq = 0.0, rho2_sq = 0.0, rho3_sq = 0.0, mu = 0.0;
    Eigen::MatrixXd R;
};

RawIntegrals compute(const KernelSpec& spec, const PointRule& rule) {
    const int d = spec.dim();
    const auto& layout = spec.layout();
    const auto& t2 = layout.table(2);
    const auto& t3 = layout.table(3);
    const int m2 = t2.size();

    // parity rule: entries whose summed multi-index has an odd component are exactly 0
    Eigen::MatrixXd parity = Eigen::MatrixXd::Zero(m2, m2);
    for (int a = 0; a < m2; ++a) {
        MultiIndex ga = t2.multi_index(a);
        for (int b = a; b < m2; ++b) {
            MultiIndex gb = t2.multi_index(b);
            bool odd = false;
            for (int i = 0; i < d; ++i)
                if ((ga[i] + gb[i]) % 2 != 0) odd = true;
            parity(a, b) = parity(b, a) = odd ? 0.0 : 1.0;
        }
    }

    const int i_rho1 = t3.index_of({0, 0, 0, 0});
    const int i_rho2 = t3.index_of({0, 0, 1, 0});
    const int i_rho3 = (d >= 3) ? t3.index_of({0, 1, 2, 0}) : -1;
    const int off2 = 1 + d;          // start of vech-hess block in the pack
    const int off3 = off2 + m2;      // start of order-3 block

    RawIntegrals out;
    out.R = Eigen::MatrixXd::Zero(m2, m2);
    KernelDerivs kd;
    for (long q = 0; q < rule.size(); ++q) {
        const double w = rule.weights(q);
        const double* u = rule.nodes.row(q).data();
        spec.pack(u, 3, kd);
        const double* p = kd.data.data();
        const double v1 = p[off3 + i_rho1];
        const double v2 = p[off3 + i_rho2];
        out.rho1_sq += w * v1 * v1;
        out.rho2_sq += w * v2 * v2;
        if (i_rho3 >= 0) {
            const double v3 = p[off3 + i_rho3];
            out.rho3_sq += w * v3 * v3;
        }
        out.mu += w * u[0] * u[0] * p[0];
        for (int a = 0; a < m2; ++a)
            for (int b = a; b < m2; ++b)
                if (parity(a, b) != 0.0) out.R(a, b) += w * p[off2 + a] * p[off2 + b];
    }
    for (int a = 0; a < m2; ++a)
        for (int b = 0; b < a; ++b) out.R(b, a) = out.R(a, b);
    out.R = (out.R + out.R.transpose()).eval() / 2.0;
    return out;
}

}  // namespace

double ball_product_integral(const KernelSpec& spec, const PointRule& rule,
                             const MultiIndex& ga, const MultiIndex& gb) {
    double acc = 0.0;
    for (long q = 0; q < rule.size(); ++q) {
        const double* u = rule.nodes.row(q).data();
        acc += rule.weights(q) * spec.eval(u, ga) * spec.eval(u, gb);
    }
    return acc;
}

KernelConstants kernel_constants(const KernelSpec& spec, const QuadSettings& quad) {
    if (quad.level < 1) throw PreconditionError("kernel_constants: quadrature level >= 1 required");
    const int d = spec.dim();

    int level = quad.level;
    RawIntegrals raw = compute(spec, make_rule(d, quad, level));
    if (quad.adaptive) {
        for (int k = 0; k < quad.max_doublings; ++k) {
            RawIntegrals next = compute(spec, make_rule(d, quad, 2 * level));
            const double a0 = raw.rho1_sq / raw.rho2_sq;
            const double a1 = next.rho1_sq / next.rho2_sq;
            level *= 2;
            raw = next;
            if (std::abs(a1 - a0) < quad.tol * std::max(1.0, std::abs(a1))) break;
        }
    }

    KernelConstants c;
    c.dim = d;
    c.quad_level_used = level;
    c.a_K = raw.rho1_sq / raw.rho2_sq;
    c.b_K = (d >= 3) ? raw.rho3_sq / raw.rho2_sq : 0.0;
    c.mu_K = raw.mu;
    c.rho2_sq = raw.rho2_sq;
    c.R = raw.R;
    if (d == 2) {
        c.k3_margin = c.a_K - 1.0;
    } else {
        c.k3_margin = c.a_K * c.b_K - 1.0;
    }
    c.k3_satisfied = c.k3_margin > 0.0;
    return c;
}

}  // namespace ridgecr
