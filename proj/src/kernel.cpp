#include "ridgecr/kernel.hpp"

#include <cmath>
#include <map>

#include "ridgecr/errors.hpp"

namespace ridgecr {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// sparse multiply-accumulate: out += a * b
void poly_mul(const std::map<std::vector<int>, double>& a,
              const std::map<std::vector<int>, double>& b,
              std::map<std::vector<int>, double>& out) {
    for (const auto& [ea, ca] : a) {
        for (const auto& [eb, cb] : b) {
            std::vector<int> e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            out[e] += ca * cb;
        }
    }
}

}  // namespace

KernelSpec::KernelSpec(int dim, int exponent) : dim_(dim), exponent_(exponent) {
    if (dim < 2) throw PreconditionError("KernelSpec: dim >= 2 required");
    if (exponent < 4) throw PreconditionError("KernelSpec: exponent >= 4 required (K1)");
    layout_ = DerivLayout(dim);

    norm_const_ = std::tgamma(0.5 * dim + exponent + 1.0) /
                  (std::pow(kPi, 0.5 * dim) * std::tgamma(exponent + 1.0));

    double fall = 1.0;
    for (int m = 0; m <= 4; ++m) {
        radial_[m] = norm_const_ * fall;
        fall *= -(exponent - m);
    }

    // monomial expansion of c_d (1 - sum x_i^2)^p, then all derivatives to order 4
    std::map<std::vector<int>, double> base;
    base[std::vector<int>(dim, 0)] = 1.0;
    for (int i = 0; i < dim; ++i) {
        std::vector<int> e(dim, 0);
        e[i] = 2;
        base[e] = -1.0;
    }
    std::map<std::vector<int>, double> cur;
    cur[std::vector<int>(dim, 0)] = norm_const_;
    for (int k = 0; k < exponent; ++k) {
        std::map<std::vector<int>, double> next;
        poly_mul(cur, base, next);
        cur = std::move(next);
    }
    auto to_poly = [](const std::map<std::vector<int>, double>& m) {
        Poly p;
        for (const auto& [e, c] : m)
            if (c != 0.0) p.push_back({e, c});
        return p;
    };
    MultiIndex zero(dim, 0);
    derivs_[zero] = to_poly(cur);
    for (int order = 1; order <= 4; ++order) {
        const auto& table = layout_.table(order);
        for (int t = 0; t < table.size(); ++t) {
            MultiIndex g = table.multi_index(t);
            MultiIndex parent = g;
            int axis = 0;
            for (int i = 0; i < dim; ++i)
                if (g[i] > 0) {
                    axis = i;
                    break;
                }
            parent[axis]--;
            derivs_[g] = differentiate(derivs_.at(parent), axis);
        }
    }
}

KernelSpec::Poly KernelSpec::differentiate(const Poly& p, int axis) {
    Poly out;
    for (const auto& m : p) {
        if (m.e[axis] == 0) continue;
        Monomial d = m;
        d.c *= d.e[axis];
        d.e[axis]--;
        out.push_back(std::move(d));
    }
    return out;
}

double KernelSpec::eval_poly(const Poly& p, const double* x, int dim) {
    double total = 0.0;
    for (const auto& m : p) {
        double term = m.c;
        for (int i = 0; i < dim; ++i)
            for (int k = 0; k < m.e[i]; ++k) term *= x[i];
        total += term;
    }
    return total;
}

double KernelSpec::eval(const double* x, const MultiIndex& gamma) const {
    if (static_cast<int>(gamma.size()) != dim_)
        throw PreconditionError("kernel_eval: multi-index dimension mismatch");
    if (multi_order(gamma) > 4)
        throw PreconditionError("kernel_eval: derivative orders above 4 are unsupported");
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += x[i] * x[i];
    if (s >= 1.0) return 0.0;
    return eval_poly(derivs_.at(gamma), x, dim_);
}

int KernelSpec::pack_size(const DerivLayout& layout, int max_order) {
    int n = 0;
    for (int k = 0; k <= max_order; ++k) n += layout.table(k).size();
    return n;
}

void KernelSpec::pack(const double* u, int max_order, KernelDerivs& out) const {
    out.dim = dim_;
    out.max_order = max_order;
    out.data.assign(pack_size(layout_, max_order), 0.0);
    accumulate(u, 1.0, max_order, out.data.data());
}

bool KernelSpec::accumulate(const double* u, double w, int max_order, double* acc) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += u[i] * u[i];
    if (s >= 1.0) return false;

    const double q = 1.0 - s;
    double w0 = radial_[0], w1 = radial_[1], w2 = radial_[2], w3 = radial_[3], w4 = radial_[4];
    // scale by (1-s)^(p-m): build powers from (1-s)^(p-4) upward
    double qp = 1.0;
    for (int k = 0; k < exponent_ - 4; ++k) qp *= q;
    w4 *= qp;
    qp *= q;
    w3 *= qp;
    qp *= q;
    w2 *= qp;
    qp *= q;
    w1 *= qp;
    qp *= q;
    w0 *= qp;

    int pos = 0;
    acc[pos++] += w * w0;
    if (max_order < 1) return true;
    for (int i = 0; i < dim_; ++i) acc[pos++] += w * 2.0 * w1 * u[i];
    if (max_order < 2) return true;
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
            acc[pos++] += w * (4.0 * w2 * u[i] * u[j] + (i == j ? 2.0 * w1 : 0.0));
    if (max_order < 3) return true;
    const auto& t3 = layout_.table(3);
    for (int t = 0; t < t3.size(); ++t) {
        const auto& a = t3.tuple(t);
        const int i = a[0], j = a[1], k = a[2];
        double v = 8.0 * w3 * u[i] * u[j] * u[k];
        if (i == j) v += 4.0 * w2 * u[k];
        if (i == k) v += 4.0 * w2 * u[j];
        if (j == k) v += 4.0 * w2 * u[i];
        acc[pos++] += w * v;
    }
    if (max_order < 4) return true;
    const auto& t4 = layout_.table(4);
    for (int t = 0; t < t4.size(); ++t) {
        const auto& a = t4.tuple(t);
        const int i = a[0], j = a[1], k = a[2], l = a[3];
        double v = 16.0 * w4 * u[i] * u[j] * u[k] * u[l];
        if (i == j) v += 8.0 * w3 * u[k] * u[l];
        if (i == k) v += 8.0 * w3 * u[j] * u[l];
        if (i == l) v += 8.0 * w3 * u[j] * u[k];
        if (j == k) v += 8.0 * w3 * u[i] * u[l];
        if (j == l) v += 8.0 * w3 * u[i] * u[k];
        if (k == l) v += 8.0 * w3 * u[i] * u[j];
        if (i == j && k == l) v += 4.0 * w2;
        if (i == k && j == l) v += 4.0 * w2;
        if (i == l && j == k) v += 4.0 * w2;
        acc[pos++] += w * v;
    }
    return true;
}

}  // namespace ridgecr
