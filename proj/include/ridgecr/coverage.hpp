#pragma once

#include <optional>

#include "ridgecr/confidence.hpp"

namespace ridgecr {

// Monte Carlo experiment: empirical coverage of the surrogate or true ridge, and
// the Gumbel calibration of the standardized sup statistic.
struct ExperimentPlan {
    std::shared_ptr<const DensityModel> model;
    std::shared_ptr<const KernelSpec> spec;
    RegionParams params;
    int replicates = 100;
    double probe_resolution = 0.0;  // densified oracle-ridge spacing
    std::uint64_t seed = 1;

    std::vector<int> finder_seed_shape;   // seeds for the per-replicate ridge search
    std::vector<int> oracle_seed_shape;   // seeds for the oracle ridge
    std::vector<int> grid_shape;          // region reporting grid
    FindOptions finder;
    int smoothing_quad_level = 3;

    std::optional<double> c_override;     // oracle c for simulation studies
    std::optional<double> a_n_override;   // forced threshold (diagnostics)
    int threads = 1;
};

struct CoverageReport {
    int B = 0;
    long covered = 0;
    double empirical = 0.0;
    std::pair<double, double> wilson;  // 95% interval
    double probe_spacing = 0.0;
    long probe_count = 0;
    // per replicate
    std::vector<std::uint8_t> covered_flags;
    std::vector<double> sup_stat;       // over probe points whose membership needs the statistic
    std::vector<std::uint8_t> lambda_ok;  // no probe point fails the eigenvalue cut outright
    std::vector<double> sup_lambda;
    std::vector<double> c_hat;
    std::vector<double> a_n;
    double elapsed_seconds = 0.0;

    // Re-evaluate coverage of the stored replicates at another alpha (the stored
    // sup statistics make this exact, replicate by replicate).
    long covered_at_alpha(double alpha, const RegionParams& params) const;
};

CoverageReport run_coverage(const ExperimentPlan& plan);

struct GumbelReport {
    int B = 0;
    double ks_distance = 0.0;
    double c_used = 0.0;
    std::vector<double> z_values;
    long probe_count = 0;
};

GumbelReport run_gumbel_check(const ExperimentPlan& plan);

std::pair<double, double> wilson_interval(long covered, long total, double z = 1.959963984540054);

// Kolmogorov-Smirnov distance of a sample against the standard Gumbel CDF.
double ks_distance_gumbel(std::vector<double> sample);

}  // namespace ridgecr
