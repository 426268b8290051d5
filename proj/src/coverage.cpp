#include "ridgecr/coverage.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ridgecr/errors.hpp"
#include "ridgecr/rng.hpp"

namespace ridgecr {

std::pair<double, double> wilson_interval(long covered, long total, double z) {
    if (total < 1) throw PreconditionError("wilson_interval: total >= 1 required");
    const double n = static_cast<double>(total);
    const double p = covered / n;
    const double z2 = z * z;
    const double den = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / den;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / den;
    // roundoff guard: the score interval always contains the point estimate
    return {std::min(center - half, p), std::max(center + half, p)};
}

double ks_distance_gumbel(std::vector<double> sample) {
    if (sample.empty()) throw PreconditionError("ks_distance_gumbel: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double ks = 0.0;
    for (size_t i = 0; i < sample.size(); ++i) {
        const double F = std::exp(-std::exp(-sample[i]));
        ks = std::max(ks, std::abs((i + 1) / n - F));
        ks = std::max(ks, std::abs(F - i / n));
    }
    return ks;
}

long CoverageReport::covered_at_alpha(double alpha, const RegionParams& params) const {
    const double z = z_alpha(alpha);
    long cov = 0;
    for (int b = 0; b < B; ++b) {
        if (!lambda_ok[b]) continue;
        const double an = b_h_threshold(z, c_hat[b], params.h, params.r, params.d);
        if (sup_stat[b] <= an) ++cov;
    }
    return cov;
}

namespace {

struct OracleProbes {
    RidgeSet oracle;
    Matrix probe;
    double spacing;
};

OracleProbes make_oracle_probes(const ExperimentPlan& plan, const KernelConstants& consts,
                                const IndexMaps& maps) {
    const auto& p = plan.params;
    OracleProbes out;
    std::shared_ptr<const DerivField> field;
    if (p.target == RegionParams::Target::mh) {
        field = std::make_shared<SmoothedField>(plan.model, plan.spec, p.h,
                                                plan.smoothing_quad_level);
    } else {
        field = std::make_shared<ModelField>(plan.model);
    }
    EvalGrid seeds = EvalGrid::cover(plan.model->domain(), plan.oracle_seed_shape);
    FindOptions fo = plan.finder;
    fo.conv_tol = std::min(fo.conv_tol, 1e-10);
    out.oracle = find_ridge_field(*field, p.r, seeds, plan.model->domain(), consts, maps, fo);
    if (out.oracle.size() == 0) throw NumericError("run_coverage: oracle ridge is empty");
    if (p.r == 1) link_polyline(out.oracle);

    out.spacing = plan.probe_resolution > 0.0 ? plan.probe_resolution
                                              : 0.5 * out.oracle.resolution;
    out.probe = densify_polylines(out.oracle, out.spacing, field.get(), p.r);
    return out;
}

}  // namespace

CoverageReport run_coverage(const ExperimentPlan& plan) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& p = plan.params;
    p.validate();
    if (plan.replicates < 1) throw PreconditionError("run_coverage: replicates >= 1");

    auto consts = std::make_shared<KernelConstants>(kernel_constants(*plan.spec));
    auto maps = std::make_shared<IndexMaps>(build_index_maps(p.d));

    OracleProbes op = make_oracle_probes(plan, *consts, *maps);

    CoverageReport rep;
    rep.B = plan.replicates;
    rep.probe_spacing = op.spacing;
    rep.probe_count = op.probe.rows();
    rep.covered_flags.resize(rep.B);
    rep.sup_stat.assign(rep.B, 0.0);
    rep.lambda_ok.assign(rep.B, 1);
    rep.sup_lambda.assign(rep.B, 0.0);
    rep.c_hat.assign(rep.B, 0.0);
    rep.a_n.assign(rep.B, 0.0);

    EvalGrid grid = EvalGrid::cover(plan.model->domain(), plan.grid_shape);
    EvalGrid finder_seeds = EvalGrid::cover(plan.model->domain(), plan.finder_seed_shape);
    const bool need_zeta = p.bn_mode != RegionParams::BnMode::zero || p.combined;

    for (int b = 0; b < rep.B; ++b) {
        auto s = std::make_shared<SampleSet>(plan.model->draw(p.n, derive_seed(plan.seed, b)));

        RidgeSet ridge_l = find_ridge(s, plan.spec, p.l, p.r, finder_seeds,
                                      plan.model->domain(), *consts, *maps, plan.finder);
        if (p.r == 1 && ridge_l.size() > 0) link_polyline(ridge_l);
        RidgeSet ridge_h;
        if (need_zeta)
            ridge_h = find_ridge(s, plan.spec, p.h, p.r, finder_seeds, plan.model->domain(),
                                 *consts, *maps, plan.finder);

        ConfidenceRegion region =
            build_region(s, plan.spec, p, grid, plan.model->domain(), ridge_l,
                         need_zeta ? &ridge_h : nullptr, consts, maps, plan.c_override,
                         plan.threads);
        if (plan.a_n_override) region.a_n = *plan.a_n_override;

        ContainsReport cr = contains_set(region, op.probe);

        double sup_needed = 0.0;
        bool lam_ok = true;
        for (size_t i = 0; i < cr.status.size(); ++i) {
            if (cr.status[i] == -1 || cr.in_G[i]) continue;
            if (!(cr.lambda[i] < region.b_n)) lam_ok = false;
            sup_needed = std::max(sup_needed, cr.stat[i]);
        }
        rep.covered_flags[b] = cr.all_inside ? 1 : 0;
        rep.sup_stat[b] = sup_needed;
        rep.lambda_ok[b] = lam_ok ? 1 : 0;
        rep.sup_lambda[b] = cr.sup_lambda;
        rep.c_hat[b] = region.c_hat;
        rep.a_n[b] = region.a_n;
        if (cr.all_inside) rep.covered++;
    }
    rep.empirical = static_cast<double>(rep.covered) / rep.B;
    rep.wilson = wilson_interval(rep.covered, rep.B);
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

GumbelReport run_gumbel_check(const ExperimentPlan& plan) {
    const auto& p = plan.params;
    p.validate();
    if (plan.replicates < 1) throw PreconditionError("run_gumbel_check: replicates >= 1");

    auto consts = std::make_shared<KernelConstants>(kernel_constants(*plan.spec));
    auto maps = std::make_shared<IndexMaps>(build_index_maps(p.d));

    // oracle surrogate-ridge probes with smoothed-density frames at each probe
    SmoothedField field(plan.model, plan.spec, p.h, plan.smoothing_quad_level);
    EvalGrid seeds = EvalGrid::cover(plan.model->domain(), plan.oracle_seed_shape);
    FindOptions fo = plan.finder;
    fo.conv_tol = std::min(fo.conv_tol, 1e-10);
    RidgeSet oracle = find_ridge_field(field, p.r, seeds, plan.model->domain(), *consts, *maps, fo);
    if (oracle.size() == 0) throw NumericError("run_gumbel_check: oracle ridge is empty");
    if (p.r == 1) link_polyline(oracle);

    const double spacing =
        plan.probe_resolution > 0.0 ? plan.probe_resolution : 0.5 * oracle.resolution;
    Matrix probe = densify_polylines(oracle, spacing, &field, p.r);

    const double c_used = plan.c_override
                              ? *plan.c_override
                              : c_hat_surface_integral(oracle, *consts, *maps);

    struct ProbeCtx {
        DerivPack pack_h;
        Matrix QMt;  // Q(x) M(x)^T, maps vech-hess difference to the standardized stat
    };
    std::vector<ProbeCtx> ctx;
    ctx.reserve(probe.rows());
    for (long i = 0; i < probe.rows(); ++i) {
        DerivPack ph = field.pack(probe.row(i).transpose(), 2);
        EigenFrame frame = ordered_eigen(ph.hess_matrix());
        Matrix M = m_vectors(ph, frame, p.r, *maps);
        Matrix Sigma = M.transpose() * consts->R * M;
        Sigma = ((Sigma + Sigma.transpose()) / 2.0).eval();
        Matrix Q = inv_sqrt_spd(ph.value * Sigma, 1e-13);
        ctx.push_back({std::move(ph), Q * M.transpose()});
    }

    GumbelReport rep;
    rep.B = plan.replicates;
    rep.c_used = c_used;
    rep.probe_count = probe.rows();
    rep.z_values.resize(rep.B);
    const double scale = p.stat_scale();
    const double L = std::sqrt(2.0 * p.r * std::log(1.0 / p.h));
    const double b0 = b_h_threshold(0.0, c_used, p.h, p.r, p.d);

    DerivPack pack(p.d, 2, plan.spec->layout());
    for (int b = 0; b < rep.B; ++b) {
        auto s = std::make_shared<SampleSet>(plan.model->draw(p.n, derive_seed(plan.seed, b)));
        KdeEvaluator eval(s, plan.spec, p.h);
        double sup = 0.0;
        for (long i = 0; i < probe.rows(); ++i) {
            eval.pack_into(probe.row(i).transpose(), 2, pack);
            const double dn = (ctx[i].QMt * (pack.hess - ctx[i].pack_h.hess)).norm();
            sup = std::max(sup, dn);
        }
        rep.z_values[b] = L * (scale * sup - b0);
    }
    rep.ks_distance = ks_distance_gumbel(rep.z_values);
    return rep;
}

}  // namespace ridgecr
