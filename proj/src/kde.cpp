#include "ridgecr/kde.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ridgecr/errors.hpp"

namespace ridgecr {

namespace {

// Neumaier compensated accumulator
struct Comp {
    double s = 0.0, c = 0.0;
    void add(double v) {
        const double t = s + v;
        if (std::abs(s) >= std::abs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }
    double total() const { return s + c; }
};

}  // namespace

Bandwidths::Bandwidths(double h_, double l_) : h(h_), l(l_) {
    if (h <= 0.0 || l <= 0.0) throw PreconditionError("Bandwidths: h > 0 and l > 0 required");
}

long EvalGrid::size() const {
    long s = 1;
    for (int v : shape) s *= v;
    return s;
}

Eigen::VectorXd EvalGrid::point(long flat) const {
    const int d = dim();
    Eigen::VectorXd x(d);
    for (int i = d - 1; i >= 0; --i) {
        const long q = flat / shape[i];
        const long r = flat - q * shape[i];
        x(i) = origin(i) + r * spacing(i);
        flat = q;
    }
    return x;
}

EvalGrid EvalGrid::cover(const Box& box, const std::vector<int>& shape) {
    EvalGrid g;
    g.shape = shape;
    const int d = static_cast<int>(shape.size());
    g.origin = box.lo;
    g.spacing.resize(d);
    for (int i = 0; i < d; ++i) {
        if (shape[i] < 2) throw PreconditionError("EvalGrid: at least 2 nodes per axis");
        g.spacing(i) = (box.hi(i) - box.lo(i)) / (shape[i] - 1);
    }
    return g;
}

KdeEvaluator::KdeEvaluator(std::shared_ptr<const SampleSet> sample,
                           std::shared_ptr<const KernelSpec> spec, double h)
    : sample_(std::move(sample)), spec_(std::move(spec)), h_(h) {
    if (h_ <= 0.0) throw PreconditionError("KdeEvaluator: h > 0 required");
    n_ = sample_->size();
    dim_ = sample_->dim();
    if (dim_ != spec_->dim()) throw PreconditionError("KdeEvaluator: kernel dimension mismatch");
    if (n_ < 1) throw PreconditionError("KdeEvaluator: empty sample");
    if (!sample_->points.allFinite()) throw PreconditionError("KdeEvaluator: non-finite sample");

    lo_ = sample_->points.colwise().minCoeff();
    cells_.resize(dim_);
    long ncells = 1;
    for (int i = 0; i < dim_; ++i) {
        const double span = sample_->points.col(i).maxCoeff() - lo_(i);
        cells_[i] = std::max(1, static_cast<int>(std::floor(span / h_)) + 1);
        ncells *= cells_[i];
    }
    std::vector<long> count(ncells + 1, 0);
    std::vector<long> cell_id(n_);
    for (long k = 0; k < n_; ++k) {
        cell_id[k] = cell_of(sample_->points.row(k).transpose());
        count[cell_id[k] + 1]++;
    }
    offsets_.assign(ncells + 1, 0);
    for (long c = 0; c < ncells; ++c) offsets_[c + 1] = offsets_[c] + count[c + 1];
    ids_.resize(n_);
    std::vector<long> cursor(offsets_.begin(), offsets_.end() - 1);
    for (long k = 0; k < n_; ++k) ids_[cursor[cell_id[k]]++] = static_cast<int>(k);
}

long KdeEvaluator::cell_of(const Eigen::VectorXd& x) const {
    long flat = 0;
    for (int i = 0; i < dim_; ++i) {
        int c = static_cast<int>(std::floor((x(i) - lo_(i)) / h_));
        c = std::clamp(c, 0, cells_[i] - 1);
        flat = flat * cells_[i] + c;
    }
    return flat;
}

void KdeEvaluator::gather(const Eigen::VectorXd& x, std::vector<int>& out) const {
    out.clear();
    std::array<int, 8> base{};
    bool in_range = true;
    for (int i = 0; i < dim_; ++i) {
        const double c = std::floor((x(i) - lo_(i)) / h_);
        if (c < -1 || c > cells_[i]) in_range = false;
        base[i] = static_cast<int>(c);
    }
    if (!in_range) return;
    std::array<int, 8> idx{};
    for (int i = 0; i < dim_; ++i) idx[i] = -1;
    while (true) {
        long flat = 0;
        bool valid = true;
        for (int i = 0; i < dim_; ++i) {
            const int c = base[i] + idx[i];
            if (c < 0 || c >= cells_[i]) {
                valid = false;
                break;
            }
            flat = flat * cells_[i] + c;
        }
        if (valid)
            for (long p = offsets_[flat]; p < offsets_[flat + 1]; ++p) out.push_back(ids_[p]);
        int i = dim_ - 1;
        for (; i >= 0; --i) {
            if (++idx[i] <= 1) break;
            idx[i] = -1;
        }
        if (i < 0) break;
    }
    std::sort(out.begin(), out.end());
}

double KdeEvaluator::eval(const Eigen::VectorXd& x, const MultiIndex& gamma) const {
    const int order = multi_order(gamma);
    if (order > 4) throw PreconditionError("kde_eval: derivative orders above 4 are unsupported");
    static thread_local std::vector<int> hits;
    gather(x, hits);
    Comp acc;
    Eigen::VectorXd u(dim_);
    for (int id : hits) {
        u = (x - sample_->points.row(id).transpose()) / h_;
        if (u.squaredNorm() >= 1.0) continue;
        acc.add(spec_->eval(u.data(), gamma));
    }
    return acc.total() / (static_cast<double>(n_) * std::pow(h_, dim_ + order));
}

void KdeEvaluator::pack_into(const Eigen::VectorXd& x, int max_order, DerivPack& out) const {
    if (max_order > 4) throw PreconditionError("kde_pack: max_order <= 4 required");
    if (out.dim != dim_ || out.max_order != max_order)
        out = DerivPack(dim_, max_order, spec_->layout());

    static thread_local std::vector<int> hits;
    static thread_local std::vector<Comp> acc;
    static thread_local std::vector<double> buf;
    const int total = KernelSpec::pack_size(spec_->layout(), max_order);
    acc.assign(total, Comp{});
    buf.resize(total);

    gather(x, hits);
    Eigen::VectorXd u(dim_);
    for (int id : hits) {
        u = (x - sample_->points.row(id).transpose()) / h_;
        std::fill(buf.begin(), buf.end(), 0.0);
        if (!spec_->accumulate(u.data(), 1.0, max_order, buf.data())) continue;
        for (int e = 0; e < total; ++e) acc[e].add(buf[e]);
    }

    const double base = static_cast<double>(n_) * std::pow(h_, dim_);
    int pos = 0;
    double scale = 1.0 / base;
    out.value = acc[pos++].total() * scale;
    if (max_order >= 1) {
        scale /= h_;
        for (int i = 0; i < dim_; ++i) out.grad(i) = acc[pos++].total() * scale;
    }
    if (max_order >= 2) {
        scale /= h_;
        for (int i = 0; i < out.hess.size(); ++i) out.hess(i) = acc[pos++].total() * scale;
    }
    if (max_order >= 3) {
        scale /= h_;
        for (int i = 0; i < out.third.size(); ++i) out.third(i) = acc[pos++].total() * scale;
    }
    if (max_order >= 4) {
        scale /= h_;
        for (int i = 0; i < out.fourth.size(); ++i) out.fourth(i) = acc[pos++].total() * scale;
    }
}

double kde_eval(const SampleSet& sample, const KernelSpec& spec, double h,
                const Eigen::VectorXd& x, const MultiIndex& gamma) {
    KdeEvaluator ev(std::make_shared<SampleSet>(sample), std::make_shared<KernelSpec>(spec), h);
    return ev.eval(x, gamma);
}

DerivPack kde_pack(const SampleSet& sample, const KernelSpec& spec, double h,
                   const Eigen::VectorXd& x, int max_order) {
    KdeEvaluator ev(std::make_shared<SampleSet>(sample), std::make_shared<KernelSpec>(spec), h);
    return ev.pack(x, max_order);
}

PackGrid kde_grid(const KdeEvaluator& eval, const EvalGrid& grid, int max_order, int threads,
                  long chunk_cells) {
    for (double s : std::vector<double>(grid.spacing.data(), grid.spacing.data() + grid.dim()))
        if (s <= 0.0) throw PreconditionError("kde_grid: spacing > 0 required");
    PackGrid out;
    out.grid = grid;
    out.max_order = max_order;
    const long total = grid.size();
    out.packs.resize(total);

    auto run_range = [&](long b, long e) {
        for (long k = b; k < e; ++k) eval.pack_into(grid.point(k), max_order, out.packs[k]);
    };
    threads = std::max(1, threads);
    // chunked sweep keeps transient buffers bounded for any grid size
    for (long start = 0; start < total; start += chunk_cells) {
        const long stop = std::min(total, start + chunk_cells);
        if (threads == 1) {
            run_range(start, stop);
        } else {
            std::vector<std::thread> pool;
            const long per = (stop - start + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                const long b = start + t * per;
                const long e = std::min(stop, b + per);
                if (b < e) pool.emplace_back(run_range, b, e);
            }
            for (auto& th : pool) th.join();
        }
    }
    return out;
}

}  // namespace ridgecr
