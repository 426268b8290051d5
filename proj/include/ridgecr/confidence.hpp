#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>

#include "ridgecr/ridge_finder.hpp"

namespace ridgecr {

// Gumbel quantile: exp(-exp(-z_alpha)) = 1 - alpha.
double z_alpha(double alpha);

// Threshold sequence b_h(z, c); strictly increasing in z and c, defined for 0 < h < 1.
double b_h_threshold(double z, double c, double h, int r, int d);

// gamma_{n,h}^(k) = sqrt(log n / (n h^(d + 2k)))
double gamma_nh(long n, double h, int d, int k);

// Plug-in surface-integral constant c-hat over a discretized ridge. `keep` (when
// given) restricts integration to the flagged points. For d - r = 1 the sphere
// factor is the two-point counting measure; otherwise an equal-weight node set of
// sphere_nodes points is used.
double c_hat_surface_integral(const RidgeSet& rs, const KernelConstants& consts,
                              const IndexMaps& maps, const std::vector<bool>* keep = nullptr,
                              int sphere_nodes = 64);

// Leading bias direction beta(x): M^T Laplacian(d2 f) + V^T Laplacian(grad f),
// all quantities from one derivative pack (orders 1-4).
Vector beta_hat(const DerivPack& pack, const EigenFrame& frame, int r, const IndexMaps& maps);

struct RegionParams {
    double alpha = 0.1;
    long n = 0;
    int d = 0;
    int r = 1;
    double h = 0.0;
    double l = 0.0;
    enum class BnMode { zero, zeta0, zeta };
    BnMode bn_mode = BnMode::zero;
    bool combined = false;
    double eta = 0.5;
    double mu_exponent = 0.5;  // mu_n = h^(-mu)
    double nu_exponent = 0.5;  // nu_n = h^(-nu)
    enum class Target { mh, m_undersmooth, m_biascorr };
    Target target = Target::mh;

    void validate() const;
    double mu_n() const;
    double nu_n() const;
    double stat_scale() const;  // sqrt(n h^(d+4))
};

struct ZetaThresholds {
    double zeta0 = 0.0;
    double zeta = 0.0;
};

// Data-driven nonpositive caps on lambda_(r+1) from the estimated ridge.
ZetaThresholds zeta_thresholds(const RidgeSet& ridge_hat, const RegionParams& params);

struct ConfidenceRegion {
    EvalGrid grid;
    Vector stat_field;
    Vector lambda_field;
    Vector gradnorm_field;
    std::vector<std::uint8_t> mask;

    double a_n = 0.0;
    double b_n = 0.0;
    double c_hat = 0.0;
    double z_alpha_value = 0.0;
    double zeta0 = std::numeric_limits<double>::quiet_NaN();
    double zeta = std::numeric_limits<double>::quiet_NaN();
    double e_threshold = 0.0;   // mu_n gamma^(1) + h^eta
    double zeta_for_G = 0.0;    // lambda cap inside the G set
    long flagged_cells = 0;     // near-critical / degenerate statistic cells

    RegionParams params;
    Box domain;

    std::shared_ptr<const KdeEvaluator> eval_h;
    std::shared_ptr<const KdeEvaluator> eval_l;  // bias-corrected target only
    std::shared_ptr<const KernelConstants> consts;
    std::shared_ptr<const IndexMaps> maps;

    // Region inequalities evaluated exactly at x (no grid interpolation).
    struct PointStats {
        double stat = 0.0;
        double lambda = 0.0;
        double gradnorm = 0.0;
        bool in_G = false;
        bool inside = false;
        bool flagged = false;
    };
    PointStats evaluate_point(const Vector& x) const;
};

// Assembles the confidence region. ridge_for_c supplies the plug-in c-hat (its
// bandwidth is params.l); ridge_for_zeta (bandwidth params.h) is needed for the
// zeta modes and the combined construction. c_override replaces the plug-in c-hat
// (oracle/simulation mode).
ConfidenceRegion build_region(std::shared_ptr<const SampleSet> sample,
                              std::shared_ptr<const KernelSpec> spec, const RegionParams& params,
                              const EvalGrid& grid, const Box& domain, const RidgeSet& ridge_for_c,
                              const RidgeSet* ridge_for_zeta,
                              std::shared_ptr<const KernelConstants> consts,
                              std::shared_ptr<const IndexMaps> maps,
                              std::optional<double> c_override = {}, int threads = 1);

struct ContainsReport {
    bool all_inside = true;
    long n_inside = 0;
    long n_excluded = 0;
    std::vector<std::int8_t> status;  // 1 inside, 0 outside region, -1 excluded (outside domain)
    std::vector<double> stat;
    std::vector<double> lambda;
    std::vector<std::uint8_t> in_G;
    double sup_stat = 0.0;
    double sup_lambda = -std::numeric_limits<double>::infinity();
};

// Pointwise membership of a probe set (exact KDE evaluation at each point).
ContainsReport contains_set(const ConfidenceRegion& region, const Matrix& probe);

// D_n(x) = || Q M^T (d2 fhat - d2 f_h) || with Q, M from the smoothed-density pack.
double d_statistic(const DerivPack& pack_hat, const DerivPack& pack_h, const EigenFrame& frame_h,
                   int r, const KernelConstants& consts, const IndexMaps& maps);

}  // namespace ridgecr
