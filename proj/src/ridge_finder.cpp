#include "ridgecr/ridge_finder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ridgecr/errors.hpp"

namespace ridgecr {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

struct Converged {
    Vector x;
    long seed_rank;
};

}  // namespace

double RidgeSet::sup_lambda_rp1() const {
    double s = -std::numeric_limits<double>::infinity();
    for (const auto& d : diag) s = std::max(s, d.lambda_rp1);
    return s;
}

RidgeSet find_ridge_field(const DerivField& field, int r, const EvalGrid& seeds, const Box& domain,
                          const KernelConstants& consts, const IndexMaps& maps,
                          const FindOptions& opts) {
    const int d = field.dim();
    if (r < 1 || r >= d) throw PreconditionError("find_ridge: 1 <= r < d required");

    FindOptions o = opts;
    if (o.resolution <= 0.0) o.resolution = seeds.spacing.maxCoeff();
    if (o.step_cap <= 0.0) o.step_cap = o.resolution;

    RidgeSet rs;
    rs.dim = d;
    rs.r = r;
    rs.resolution = o.resolution;
    rs.stats.seeds = seeds.size();

    std::vector<Converged> hits;
    DerivPack pack(d, 2, field.layout());
    for (long s = 0; s < seeds.size(); ++s) {
        Vector x = seeds.point(s);
        std::optional<Matrix> prev;
        bool done = false;
        for (int it = 0; it < o.max_iter && !done; ++it) {
            field.pack_into(x, 2, pack);
            if (!(pack.value > o.density_floor)) break;
            EigenFrame frame = ordered_eigen(pack.hess_matrix(), prev);
            prev = frame.vectors;
            Vector pg = frame.V(r).transpose() * pack.grad;
            if (pg.norm() <= o.conv_tol) {
                if (frame.values(r) >= 0.0) {
                    rs.stats.dropped_condition2++;
                } else if (!domain.contains(x)) {
                    rs.stats.dropped_outside++;
                } else {
                    hits.push_back({x, s});
                    rs.stats.converged++;
                }
                done = true;
                break;
            }
            const double lam_floor = 1e-8 * std::abs(frame.values.cwiseAbs().maxCoeff()) + 1e-300;
            Vector dx = Vector::Zero(d);
            for (int i = r; i < d; ++i) {
                const double denom = std::max(std::abs(frame.values(i)), lam_floor);
                dx += (frame.vectors.col(i).dot(pack.grad) / denom) * frame.vectors.col(i);
            }
            const double len = dx.norm();
            if (len > o.step_cap) dx *= o.step_cap / len;
            x += dx;
            if (!domain.contains(x, o.domain_margin)) {
                rs.stats.dropped_outside++;
                done = true;
            }
        }
        if (!done) rs.stats.dropped_nonconverged++;
    }

    // deterministic dedup: first seed wins within resolution / 2
    std::vector<Vector> kept;
    const double dedup2 = 0.25 * o.resolution * o.resolution;
    for (const auto& c : hits) {
        bool dup = false;
        for (const auto& k : kept)
            if ((c.x - k).squaredNorm() < dedup2) {
                dup = true;
                break;
            }
        if (dup) {
            rs.stats.deduplicated++;
        } else {
            kept.push_back(c.x);
        }
    }

    std::vector<Vector> final_pts;
    for (const auto& x : kept) {
        field.pack_into(x, 2, pack);
        RidgeDiagnostics dg;
        try {
            dg = ridge_stats(pack, r, consts, maps);
        } catch (const NumericError&) {
            rs.stats.dropped_degenerate++;
            continue;
        }
        EigenFrame frame = ordered_eigen(pack.hess_matrix());
        rs.tangents.push_back(frame.vectors.leftCols(r));
        rs.diag.push_back(std::move(dg));
        final_pts.push_back(x);
    }
    rs.points.resize(final_pts.size(), d);
    for (size_t i = 0; i < final_pts.size(); ++i) rs.points.row(i) = final_pts[i].transpose();
    return rs;
}

RidgeSet find_ridge(std::shared_ptr<const SampleSet> sample, std::shared_ptr<const KernelSpec> spec,
                    double h, int r, const EvalGrid& seeds, const Box& domain,
                    const KernelConstants& consts, const IndexMaps& maps, const FindOptions& opts) {
    KdeEvaluator ev(std::move(sample), std::move(spec), h);
    return find_ridge_field(ev, r, seeds, domain, consts, maps, opts);
}

RidgeSet true_ridge(const DensityModel& model, int r, const std::vector<int>& seed_shape,
                    const KernelConstants& consts, const IndexMaps& maps, double tol) {
    ModelField f(std::make_shared<DensityModel>(model));
    EvalGrid seeds = EvalGrid::cover(model.domain(), seed_shape);
    FindOptions o;
    o.conv_tol = tol;
    RidgeSet rs = find_ridge_field(f, r, seeds, model.domain(), consts, maps, o);
    if (r == 1) link_polyline(rs);
    return rs;
}

RidgeSet true_ridge_smoothed(const DensityModel& model, const KernelSpec& spec, double h, int r,
                             const std::vector<int>& seed_shape, const KernelConstants& consts,
                             const IndexMaps& maps, double tol, int quad_level) {
    SmoothedField f(std::make_shared<DensityModel>(model), std::make_shared<KernelSpec>(spec), h,
                    quad_level);
    EvalGrid seeds = EvalGrid::cover(model.domain(), seed_shape);
    FindOptions o;
    o.conv_tol = tol;
    RidgeSet rs = find_ridge_field(f, r, seeds, model.domain(), consts, maps, o);
    if (r == 1) link_polyline(rs);
    return rs;
}

void link_polyline(RidgeSet& rs, double link_radius, double max_turn_deg) {
    if (rs.r != 1)
        throw PreconditionError("link_polyline: only r = 1 curves are chained");
    rs.polylines.clear();
    rs.closed.clear();
    rs.total_length = 0.0;
    rs.has_connectivity = true;
    const long m = rs.size();
    if (m == 0) return;
    if (link_radius <= 0.0) link_radius = 3.0 * rs.resolution;
    const double cos_guard = std::cos(max_turn_deg * kPi / 180.0);
    const double r2 = link_radius * link_radius;

    std::vector<std::vector<int>> nbrs(m);
    for (long i = 0; i < m; ++i)
        for (long j = i + 1; j < m; ++j)
            if ((rs.points.row(i) - rs.points.row(j)).squaredNorm() <= r2) {
                nbrs[i].push_back(static_cast<int>(j));
                nbrs[j].push_back(static_cast<int>(i));
            }

    std::vector<bool> used(m, false);
    auto extend = [&](std::vector<int>& chain) {
        while (true) {
            const int cur = chain.back();
            const int prev = chain.size() >= 2 ? chain[chain.size() - 2] : -1;
            int best = -1;
            double best_d2 = std::numeric_limits<double>::infinity();
            for (int cand : nbrs[cur]) {
                if (used[cand]) continue;
                const double d2 = (rs.points.row(cand) - rs.points.row(cur)).squaredNorm();
                if (prev >= 0) {
                    Vector a = (rs.points.row(cur) - rs.points.row(prev)).transpose();
                    Vector b = (rs.points.row(cand) - rs.points.row(cur)).transpose();
                    const double den = a.norm() * b.norm();
                    if (den <= 0.0 || a.dot(b) / den < cos_guard) continue;
                }
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = cand;
                }
            }
            if (best < 0) break;
            used[best] = true;
            chain.push_back(best);
        }
    };

    // start from likely endpoints (fewest neighbours) for stable chains
    std::vector<int> order(m);
    for (long i = 0; i < m; ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return nbrs[a].size() < nbrs[b].size(); });

    for (int start : order) {
        if (used[start]) continue;
        used[start] = true;
        std::vector<int> chain{start};
        extend(chain);
        std::reverse(chain.begin(), chain.end());
        extend(chain);

        bool closed = false;
        if (chain.size() >= 3) {
            const int a = chain.front(), b = chain.back();
            if ((rs.points.row(a) - rs.points.row(b)).squaredNorm() <= r2) closed = true;
        }
        double len = 0.0;
        for (size_t k = 1; k < chain.size(); ++k)
            len += (rs.points.row(chain[k]) - rs.points.row(chain[k - 1])).norm();
        if (closed) len += (rs.points.row(chain.front()) - rs.points.row(chain.back())).norm();
        rs.total_length += len;
        rs.polylines.push_back(std::move(chain));
        rs.closed.push_back(closed);
    }
}

Vector integration_weights(const RidgeSet& rs) {
    const long m = rs.size();
    Vector w = Vector::Zero(m);
    if (rs.r == 1) {
        if (!rs.has_connectivity)
            throw PreconditionError("integration_weights: polyline connectivity required for r = 1");
        for (size_t c = 0; c < rs.polylines.size(); ++c) {
            const auto& chain = rs.polylines[c];
            const size_t n = chain.size();
            if (n < 2) continue;
            for (size_t k = 0; k + 1 < n; ++k) {
                const double seg =
                    (rs.points.row(chain[k + 1]) - rs.points.row(chain[k])).norm();
                w(chain[k]) += 0.5 * seg;
                w(chain[k + 1]) += 0.5 * seg;
            }
            if (rs.closed[c]) {
                const double seg = (rs.points.row(chain.front()) - rs.points.row(chain.back())).norm();
                w(chain.front()) += 0.5 * seg;
                w(chain.back()) += 0.5 * seg;
            }
        }
        return w;
    }
    // r >= 2: local-patch estimate from nearest-neighbour spacing (no meshing)
    const int k_nbrs = std::min<long>(2 * rs.r, m - 1);
    if (k_nbrs < 1) return w;
    std::vector<double> d2(m);
    for (long i = 0; i < m; ++i) {
        std::vector<double> dist;
        dist.reserve(m - 1);
        for (long j = 0; j < m; ++j)
            if (j != i) dist.push_back((rs.points.row(i) - rs.points.row(j)).norm());
        std::nth_element(dist.begin(), dist.begin() + (k_nbrs - 1), dist.end());
        double s = 0.0;
        std::sort(dist.begin(), dist.begin() + k_nbrs);
        for (int q = 0; q < k_nbrs; ++q) s += dist[q];
        w(i) = std::pow(s / k_nbrs, rs.r);
    }
    return w;
}

Matrix densify_polylines(const RidgeSet& rs, double spacing, const DerivField* refine_field,
                         int refine_r, int refine_iters) {
    if (rs.r != 1) throw PreconditionError("densify_polylines: r = 1 required");
    if (spacing <= 0.0) throw PreconditionError("densify_polylines: spacing > 0 required");
    std::vector<Vector> out;
    for (size_t c = 0; c < rs.polylines.size(); ++c) {
        const auto& chain = rs.polylines[c];
        if (chain.empty()) continue;
        std::vector<int> seq(chain.begin(), chain.end());
        if (rs.closed[c]) seq.push_back(chain.front());
        if (seq.size() == 1) {
            out.push_back(rs.points.row(seq[0]).transpose());
            continue;
        }
        double carry = 0.0;
        out.push_back(rs.points.row(seq[0]).transpose());
        for (size_t k = 0; k + 1 < seq.size(); ++k) {
            Vector a = rs.points.row(seq[k]).transpose();
            Vector b = rs.points.row(seq[k + 1]).transpose();
            const double seg = (b - a).norm();
            if (seg <= 0.0) continue;
            double pos = spacing - carry;
            while (pos < seg) {
                out.push_back(a + (pos / seg) * (b - a));
                pos += spacing;
            }
            carry = seg - (pos - spacing);
        }
        if (!rs.closed[c]) out.push_back(rs.points.row(seq.back()).transpose());
    }

    Matrix probes(out.size(), rs.dim);
    for (size_t i = 0; i < out.size(); ++i) probes.row(i) = out[i].transpose();

    if (refine_field) {
        DerivPack pack(rs.dim, 2, refine_field->layout());
        for (long i = 0; i < probes.rows(); ++i) {
            Vector x = probes.row(i).transpose();
            for (int it = 0; it < refine_iters; ++it) {
                refine_field->pack_into(x, 2, pack);
                if (!(pack.value > 0.0)) break;
                EigenFrame frame = ordered_eigen(pack.hess_matrix());
                Vector dx = Vector::Zero(rs.dim);
                const double lam_floor =
                    1e-8 * std::abs(frame.values.cwiseAbs().maxCoeff()) + 1e-300;
                for (int q = refine_r; q < rs.dim; ++q) {
                    const double denom = std::max(std::abs(frame.values(q)), lam_floor);
                    dx += (frame.vectors.col(q).dot(pack.grad) / denom) * frame.vectors.col(q);
                }
                const double cap = 0.5 * spacing;
                if (dx.norm() > cap) dx *= cap / dx.norm();
                x += dx;
                if (dx.norm() < 1e-13) break;
            }
            probes.row(i) = x.transpose();
        }
    }
    return probes;
}

}  // namespace ridgecr
