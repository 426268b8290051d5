#pragma once

#include <memory>
#include <vector>

#include "ridgecr/density_model.hpp"
#include "ridgecr/kernel.hpp"

namespace ridgecr {

struct Bandwidths {
    double h = 0.0;
    double l = 0.0;
    Bandwidths() = default;
    Bandwidths(double h_, double l_);
    // Explicit bias correction / c-hat estimation want h/l -> 0.
    bool ratio_warning() const { return h >= l; }
};

// Regular evaluation lattice: point(i) = origin + i * spacing, row-major flattening
// with the last axis fastest.
struct EvalGrid {
    Eigen::VectorXd origin;
    Eigen::VectorXd spacing;
    std::vector<int> shape;

    int dim() const { return static_cast<int>(shape.size()); }
    long size() const;
    Eigen::VectorXd point(long flat) const;
    static EvalGrid cover(const Box& box, const std::vector<int>& shape);
};

// KDE fhat and its partials to order 4. Compact kernel support is exploited with a
// uniform bucket grid of cell size h, so only neighbouring buckets are scanned.
class KdeEvaluator : public DerivField {
public:
    KdeEvaluator(std::shared_ptr<const SampleSet> sample, std::shared_ptr<const KernelSpec> spec,
                 double h);

    int dim() const override { return dim_; }
    const DerivLayout& layout() const override { return spec_->layout(); }
    double bandwidth() const { return h_; }
    long sample_size() const { return n_; }
    const SampleSet& sample() const { return *sample_; }
    const KernelSpec& kernel() const { return *spec_; }

    // Single derivative fhat^(gamma)(x); independent code path from pack_into.
    double eval(const Eigen::VectorXd& x, const MultiIndex& gamma) const;

    // All derivatives to max_order in one sweep over the contributing points,
    // accumulated in sample-index order with compensated summation.
    void pack_into(const Eigen::VectorXd& x, int max_order, DerivPack& out) const override;

private:
    std::shared_ptr<const SampleSet> sample_;
    std::shared_ptr<const KernelSpec> spec_;
    double h_;
    int dim_;
    long n_;

    // bucket grid
    Eigen::VectorXd lo_;
    std::vector<int> cells_;
    std::vector<long> offsets_;          // CSR offsets into ids_
    std::vector<int> ids_;               // sample indices, ascending within a bucket
    long cell_of(const Eigen::VectorXd& x) const;
    void gather(const Eigen::VectorXd& x, std::vector<int>& out) const;
};

double kde_eval(const SampleSet& sample, const KernelSpec& spec, double h,
                const Eigen::VectorXd& x, const MultiIndex& gamma);
DerivPack kde_pack(const SampleSet& sample, const KernelSpec& spec, double h,
                   const Eigen::VectorXd& x, int max_order);

// Derivative packs over a grid; deterministic per-cell results for any worker count.
struct PackGrid {
    EvalGrid grid;
    int max_order = 0;
    std::vector<DerivPack> packs;
};
PackGrid kde_grid(const KdeEvaluator& eval, const EvalGrid& grid, int max_order, int threads = 1,
                  long chunk_cells = 1 << 16);

}  // namespace ridgecr
