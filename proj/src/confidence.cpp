#include "ridgecr/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ridgecr/errors.hpp"
#include "ridgecr/omega.hpp"

namespace ridgecr {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

double z_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("z_alpha: alpha in (0,1) required");
    return -std::log(-std::log1p(-alpha));
}

double b_h_threshold(double z, double c, double h, int r, int d) {
    if (!(h > 0.0 && h < 1.0)) throw PreconditionError("b_h_threshold: 0 < h < 1 required");
    if (r < 1 || d < 2 || r >= d) throw PreconditionError("b_h_threshold: 1 <= r < d required");
    const double L = std::sqrt(2.0 * r * std::log(1.0 / h));
    return z / L + L + (0.5 * (d - 2) * std::log(std::log(1.0 / h)) + c) / L;
}

double gamma_nh(long n, double h, int d, int k) {
    if (n < 2 || h <= 0.0) throw PreconditionError("gamma_nh: n >= 2 and h > 0 required");
    return std::sqrt(std::log(static_cast<double>(n)) /
                     (static_cast<double>(n) * std::pow(h, d + 2 * k)));
}

void RegionParams::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("RegionParams: alpha in (0,1)");
    if (r < 1 || r >= d) throw PreconditionError("RegionParams: 1 <= r < d");
    if (!(eta > 0.0 && eta < 1.0)) throw PreconditionError("RegionParams: eta in (0,1)");
    if (h <= 0.0 || l <= 0.0) throw PreconditionError("RegionParams: h > 0 and l > 0");
    if (n < 2) throw PreconditionError("RegionParams: n >= 2");
    if (mu_exponent <= 0.0 || nu_exponent <= 0.0)
        throw PreconditionError("RegionParams: mu/nu exponents > 0");
}

double RegionParams::mu_n() const { return std::pow(h, -mu_exponent); }
double RegionParams::nu_n() const { return std::pow(h, -nu_exponent); }
double RegionParams::stat_scale() const {
    return std::sqrt(static_cast<double>(n) * std::pow(h, d + 4));
}

double c_hat_surface_integral(const RidgeSet& rs, const KernelConstants& consts,
                              const IndexMaps& maps, const std::vector<bool>* keep,
                              int sphere_nodes) {
    const int d = rs.dim, r = rs.r;
    if (rs.size() == 0) throw NumericError("c_hat: empty ridge set");
    if (keep && static_cast<long>(keep->size()) != rs.size())
        throw PreconditionError("c_hat: keep mask size mismatch");
    if (rs.tangents.empty()) throw PreconditionError("c_hat: ridge set has no tangent frames");

    Vector w = integration_weights(rs);

    PointRule sph = sphere_rule(d - r - 1, sphere_nodes);

    double integral = 0.0;
    long used = 0;
    for (long i = 0; i < rs.size(); ++i) {
        if (keep && !(*keep)[i]) continue;
        if (w(i) <= 0.0) {
            ++used;
            continue;
        }
        const auto& dg = rs.diag[i];
        const Matrix& tang = rs.tangents[i];
        double sphere_acc = 0.0;
        for (long q = 0; q < sph.size(); ++q) {
            const Vector z = sph.nodes.row(q).transpose();
            const Vector A = dg.M * (dg.Qn * z);
            const Matrix omega = omega_closed_form(consts, maps, A);
            // ||Omega^(1/2) Lambda||_r via Cauchy-Binet: sqrt(det(Lambda^T Omega Lambda))
            const Matrix G = tang.transpose() * omega * tang;
            const double det = (r == 1) ? G(0, 0) : G.determinant();
            sphere_acc += sph.weights(q) * std::sqrt(std::max(det, 0.0));
        }
        integral += w(i) * sphere_acc;
        ++used;
    }
    if (used == 0) throw NumericError("c_hat: restriction removed every ridge point");
    if (!(integral > 0.0)) throw NumericError("c_hat: vanishing surface integral");

    const double front = std::pow(static_cast<double>(r), 0.5 * (d - 2)) / (2.0 * std::pow(kPi, 0.5 * d));
    return std::log(front * integral);
}

Vector beta_hat(const DerivPack& pack, const EigenFrame& frame, int r, const IndexMaps& maps) {
    if (pack.max_order < 4) throw PreconditionError("beta_hat: order-4 pack required");
    const DerivLayout layout(pack.dim);
    Matrix M = m_vectors(pack, frame, r, maps);
    Vector lap_d2 = pack.laplacian_hess_vech(layout);
    Vector lap_grad = pack.laplacian_grad(layout);
    return M.transpose() * lap_d2 + frame.V(r).transpose() * lap_grad;
}

ZetaThresholds zeta_thresholds(const RidgeSet& ridge_hat, const RegionParams& params) {
    if (ridge_hat.size() == 0) throw NumericError("zeta_thresholds: empty ridge set");
    const double sup = ridge_hat.sup_lambda_rp1();
    const double g2 = gamma_nh(params.n, params.h, params.d, 2);
    ZetaThresholds z;
    z.zeta0 = std::min(sup + params.nu_n() * g2, 0.0);
    z.zeta = std::min(sup + params.nu_n() * (g2 + params.h * params.h), 0.0);
    return z;
}

namespace {

ConfidenceRegion::PointStats point_stats(const RegionParams& p, const KdeEvaluator& eval_h,
                                         const KdeEvaluator* eval_l, const KernelConstants& consts,
                                         const IndexMaps& maps, double mu_K, const Vector& x) {
    ConfidenceRegion::PointStats out;
    DerivPack pack(p.d, 2, eval_h.layout());
    eval_h.pack_into(x, 2, pack);
    out.gradnorm = pack.grad.norm();

    EigenFrame frame;
    try {
        frame = ordered_eigen(pack.hess_matrix());
    } catch (const std::exception&) {
        out.stat = kInf;
        out.lambda = kInf;
        out.flagged = true;
        return out;
    }
    out.lambda = frame.values(p.r);

    try {
        RidgeDiagnostics dg = ridge_stats(pack, p.r, consts, maps);
        if (dg.near_critical) {
            out.stat = kInf;
            out.flagged = true;
        } else if (p.target == RegionParams::Target::m_biascorr) {
            DerivPack pack_l(p.d, 4, eval_l->layout());
            eval_l->pack_into(x, 4, pack_l);
            EigenFrame frame_l = ordered_eigen(pack_l.hess_matrix());
            Vector beta = beta_hat(pack_l, frame_l, p.r, maps);
            Vector corrected = dg.proj_grad - 0.5 * p.h * p.h * mu_K * beta;
            out.stat = p.stat_scale() * (dg.Qn * corrected).norm();
        } else {
            out.stat = p.stat_scale() * dg.Bn;
        }
    } catch (const NumericError&) {
        out.stat = kInf;
        out.flagged = true;
    }
    return out;
}

}  // namespace

ConfidenceRegion::PointStats ConfidenceRegion::evaluate_point(const Vector& x) const {
    PointStats s = point_stats(params, *eval_h, eval_l.get(), *consts, *maps,
                               consts->mu_K, x);
    const bool in_C = s.stat <= a_n && s.lambda < b_n;
    s.in_G = params.combined && s.gradnorm <= e_threshold && s.lambda < zeta_for_G;
    s.inside = in_C || s.in_G;
    return s;
}

ConfidenceRegion build_region(std::shared_ptr<const SampleSet> sample,
                              std::shared_ptr<const KernelSpec> spec, const RegionParams& params,
                              const EvalGrid& grid, const Box& domain, const RidgeSet& ridge_for_c,
                              const RidgeSet* ridge_for_zeta,
                              std::shared_ptr<const KernelConstants> consts,
                              std::shared_ptr<const IndexMaps> maps,
                              std::optional<double> c_override, int threads) {
    params.validate();
    ConfidenceRegion reg;
    reg.params = params;
    reg.grid = grid;
    reg.domain = domain;
    reg.consts = consts;
    reg.maps = maps;
    reg.eval_h = std::make_shared<KdeEvaluator>(sample, spec, params.h);
    if (params.target == RegionParams::Target::m_biascorr)
        reg.eval_l = std::make_shared<KdeEvaluator>(sample, spec, params.l);

    reg.z_alpha_value = z_alpha(params.alpha);
    reg.e_threshold = params.mu_n() * gamma_nh(params.n, params.h, params.d, 1) +
                      std::pow(params.h, params.eta);

    const bool need_zeta =
        params.bn_mode != RegionParams::BnMode::zero || params.combined;
    ZetaThresholds zt{};
    if (need_zeta) {
        if (!ridge_for_zeta)
            throw PreconditionError("build_region: zeta modes need the bandwidth-h ridge");
        zt = zeta_thresholds(*ridge_for_zeta, params);
        reg.zeta0 = zt.zeta0;
        reg.zeta = zt.zeta;
    }

    switch (params.bn_mode) {
        case RegionParams::BnMode::zero: reg.b_n = 0.0; break;
        case RegionParams::BnMode::zeta0: reg.b_n = zt.zeta0; break;
        case RegionParams::BnMode::zeta: reg.b_n = zt.zeta; break;
    }
    reg.zeta_for_G = reg.b_n;

    if (c_override) {
        reg.c_hat = *c_override;
    } else if (params.combined) {
        // integrate c-hat over the ridge outside the small-gradient set E
        std::vector<bool> keep(ridge_for_c.size(), true);
        DerivPack pack(params.d, 1, reg.eval_h->layout());
        for (long i = 0; i < ridge_for_c.size(); ++i) {
            reg.eval_h->pack_into(ridge_for_c.points.row(i).transpose(), 1, pack);
            keep[i] = pack.grad.norm() > reg.e_threshold;
        }
        reg.c_hat = c_hat_surface_integral(ridge_for_c, *consts, *maps, &keep);
    } else {
        reg.c_hat = c_hat_surface_integral(ridge_for_c, *consts, *maps);
    }
    reg.a_n = b_h_threshold(reg.z_alpha_value, reg.c_hat, params.h, params.r, params.d);

    const long cells = grid.size();
    reg.stat_field.resize(cells);
    reg.lambda_field.resize(cells);
    reg.gradnorm_field.resize(cells);
    reg.mask.assign(cells, 0);

    threads = std::max(1, threads);
    std::vector<long> flagged_per_thread(threads, 0);
    auto work = [&](int tid, long b, long e) {
        for (long k = b; k < e; ++k) {
            ConfidenceRegion::PointStats s = reg.evaluate_point(grid.point(k));
            reg.stat_field(k) = s.stat;
            reg.lambda_field(k) = s.lambda;
            reg.gradnorm_field(k) = s.gradnorm;
            reg.mask[k] = s.inside ? 1 : 0;
            if (s.flagged) flagged_per_thread[tid]++;
        }
    };
    if (threads == 1) {
        work(0, 0, cells);
    } else {
        std::vector<std::thread> pool;
        const long per = (cells + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const long b = t * per, e = std::min(cells, b + per);
            if (b < e) pool.emplace_back(work, t, b, e);
        }
        for (auto& th : pool) th.join();
    }
    for (long f : flagged_per_thread) reg.flagged_cells += f;
    return reg;
}

ContainsReport contains_set(const ConfidenceRegion& region, const Matrix& probe) {
    ContainsReport rep;
    const long m = probe.rows();
    rep.status.resize(m);
    rep.stat.resize(m);
    rep.lambda.resize(m);
    rep.in_G.resize(m);
    for (long i = 0; i < m; ++i) {
        const Vector x = probe.row(i).transpose();
        if (!region.domain.contains(x)) {
            rep.status[i] = -1;
            rep.stat[i] = std::numeric_limits<double>::quiet_NaN();
            rep.lambda[i] = std::numeric_limits<double>::quiet_NaN();
            rep.in_G[i] = 0;
            rep.n_excluded++;
            continue;
        }
        ConfidenceRegion::PointStats s = region.evaluate_point(x);
        rep.stat[i] = s.stat;
        rep.lambda[i] = s.lambda;
        rep.in_G[i] = s.in_G ? 1 : 0;
        rep.status[i] = s.inside ? 1 : 0;
        if (s.inside) rep.n_inside++;
        if (!s.inside) rep.all_inside = false;
        rep.sup_stat = std::max(rep.sup_stat, s.stat);
        rep.sup_lambda = std::max(rep.sup_lambda, s.lambda);
    }
    return rep;
}

double d_statistic(const DerivPack& pack_hat, const DerivPack& pack_h, const EigenFrame& frame_h,
                   int r, const KernelConstants& consts, const IndexMaps& maps) {
    if (pack_hat.dim != pack_h.dim) throw PreconditionError("d_statistic: dimension mismatch");
    Matrix M = m_vectors(pack_h, frame_h, r, maps);
    Matrix Sigma = M.transpose() * consts.R * M;
    Sigma = ((Sigma + Sigma.transpose()) / 2.0).eval();
    if (!(pack_h.value > 0.0)) throw NumericError("d_statistic: nonpositive smoothed density");
    Matrix Q = inv_sqrt_spd(pack_h.value * Sigma, 1e-13);
    return (Q * (M.transpose() * (pack_hat.hess - pack_h.hess))).norm();
}

}  // namespace ridgecr
