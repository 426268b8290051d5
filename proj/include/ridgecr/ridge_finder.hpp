#pragma once

#include <memory>
#include <vector>

#include "ridgecr/kde.hpp"
#include "ridgecr/ridge_geometry.hpp"

namespace ridgecr {

struct FindOptions {
    double conv_tol = 1e-10;   // on ||V^T grad|| at the returned points
    int max_iter = 100;
    double resolution = 0.0;   // dedup radius = resolution / 2; 0 = seed spacing
    double step_cap = 0.0;     // max step length; 0 = resolution
    double domain_margin = 0.25;  // iterates may wander this far outside before being dropped
    double density_floor = 0.0;   // abandon iterates where the field value is <= this
};

struct SolveStats {
    long seeds = 0;
    long converged = 0;
    long dropped_nonconverged = 0;
    long dropped_condition2 = 0;   // lambda_(r+1) >= 0 at convergence
    long dropped_outside = 0;
    long dropped_degenerate = 0;
    long deduplicated = 0;
};

// Discretized ridge estimate: points with tangent frames and per-point diagnostics,
// optionally chained into polylines (r = 1).
struct RidgeSet {
    int dim = 0;
    int r = 0;
    Matrix points;  // m x d
    std::vector<Matrix> tangents;
    std::vector<RidgeDiagnostics> diag;
    std::vector<std::vector<int>> polylines;
    std::vector<bool> closed;
    bool has_connectivity = false;
    double resolution = 0.0;
    double total_length = 0.0;
    SolveStats stats;

    long size() const { return points.rows(); }
    double sup_lambda_rp1() const;
};

// Subspace-constrained Newton from every seed: x += sum_{i>r} (v_i . grad)/|lambda_i| v_i,
// which is the Newton step for V^T grad = 0 whenever the trailing eigenvalues are
// negative and an ascent step otherwise (|.| floored).
RidgeSet find_ridge_field(const DerivField& field, int r, const EvalGrid& seeds, const Box& domain,
                          const KernelConstants& consts, const IndexMaps& maps,
                          const FindOptions& opts = {});

RidgeSet find_ridge(std::shared_ptr<const SampleSet> sample, std::shared_ptr<const KernelSpec> spec,
                    double h, int r, const EvalGrid& seeds, const Box& domain,
                    const KernelConstants& consts, const IndexMaps& maps,
                    const FindOptions& opts = {});

// Oracle ridges from exact (or kernel-smoothed) mixture derivatives.
RidgeSet true_ridge(const DensityModel& model, int r, const std::vector<int>& seed_shape,
                    const KernelConstants& consts, const IndexMaps& maps, double tol = 1e-10);
RidgeSet true_ridge_smoothed(const DensityModel& model, const KernelSpec& spec, double h, int r,
                             const std::vector<int>& seed_shape, const KernelConstants& consts,
                             const IndexMaps& maps, double tol = 1e-10, int quad_level = 3);

// Nearest-neighbour chaining with an angle guard (r = 1 only).
void link_polyline(RidgeSet& rs, double link_radius = 0.0, double max_turn_deg = 80.0);

// Arc-length (r = 1, from connectivity) or local-patch (r >= 2) integration weights.
Vector integration_weights(const RidgeSet& rs);

// Equally spaced points along the polylines; optionally re-converged on a field.
Matrix densify_polylines(const RidgeSet& rs, double spacing, const DerivField* refine_field = nullptr,
                         int refine_r = 1, int refine_iters = 8);

}  // namespace ridgecr
