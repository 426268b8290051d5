#include "ridgecr/density_model.hpp"

#include <cmath>

#include "ridgecr/errors.hpp"
#include "ridgecr/rng.hpp"

namespace ridgecr {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

DerivPack DerivField::pack(const Eigen::VectorXd& x, int max_order) const {
    DerivPack out(dim(), max_order, layout());
    pack_into(x, max_order, out);
    return out;
}

DensityModel::DensityModel(std::vector<Component> components, Box domain_box)
    : comps_(std::move(components)), domain_(std::move(domain_box)) {
    if (comps_.empty()) throw PreconditionError("DensityModel: at least one component required");
    dim_ = static_cast<int>(comps_[0].mean.size());
    if (domain_.dim() != dim_) throw PreconditionError("DensityModel: domain_box dimension mismatch");
    layout_ = DerivLayout(dim_);

    double wsum = 0.0;
    for (const auto& c : comps_) {
        if (c.weight <= 0.0) throw PreconditionError("DensityModel: weights must be positive");
        if (c.mean.size() != dim_ || c.cov.rows() != dim_ || c.cov.cols() != dim_)
            throw PreconditionError("DensityModel: component shape mismatch");
        wsum += c.weight;
    }
    if (std::abs(wsum - 1.0) > 1e-12)
        throw PreconditionError("DensityModel: weights must sum to 1 within 1e-12");

    double cum = 0.0;
    for (const auto& c : comps_) {
        Eigen::LLT<Eigen::MatrixXd> llt(c.cov);
        if (llt.info() != Eigen::Success)
            throw PreconditionError("DensityModel: covariance not positive definite");
        Prepared p;
        p.weight = c.weight;
        p.mean = c.mean;
        p.chol = llt.matrixL();
        p.prec = llt.solve(Eigen::MatrixXd::Identity(dim_, dim_));
        double det = 1.0;
        for (int i = 0; i < dim_; ++i) det *= p.chol(i, i);
        p.norm = c.weight / (std::pow(kTwoPi, 0.5 * dim_) * det);
        prep_.push_back(std::move(p));
        cum += c.weight;
        cum_weights_.push_back(cum);
    }
    cum_weights_.back() = 1.0;
}

void DensityModel::derivs_into(const Eigen::VectorXd& x, int max_order, DerivPack& out) const {
    if (max_order > 4) throw PreconditionError("model_derivs: max_order <= 4 required");
    if (out.dim != dim_ || out.max_order != max_order) out = DerivPack(dim_, max_order, layout_);
    out.set_zero();
    Eigen::VectorXd t(dim_);
    for (const auto& c : prep_) {
        const Eigen::VectorXd y = x - c.mean;
        t.noalias() = c.prec * y;
        const double g = c.norm * std::exp(-0.5 * y.dot(t));
        out.value += g;
        if (max_order < 1) continue;
        for (int i = 0; i < dim_; ++i) out.grad(i) -= t(i) * g;
        if (max_order < 2) continue;
        {
            int k = 0;
            for (int i = 0; i < dim_; ++i)
                for (int j = i; j < dim_; ++j) out.hess(k++) += (t(i) * t(j) - c.prec(i, j)) * g;
        }
        if (max_order < 3) continue;
        const auto& t3 = layout_.table(3);
        for (int m = 0; m < t3.size(); ++m) {
            const auto& a = t3.tuple(m);
            const int i = a[0], j = a[1], k = a[2];
            out.third(m) += (c.prec(i, j) * t(k) + c.prec(i, k) * t(j) + c.prec(j, k) * t(i) -
                             t(i) * t(j) * t(k)) *
                            g;
        }
        if (max_order < 4) continue;
        const auto& t4 = layout_.table(4);
        for (int m = 0; m < t4.size(); ++m) {
            const auto& a = t4.tuple(m);
            const int i = a[0], j = a[1], k = a[2], l = a[3];
            const double pair2 = c.prec(i, j) * c.prec(k, l) + c.prec(i, k) * c.prec(j, l) +
                                 c.prec(i, l) * c.prec(j, k);
            const double ptt = c.prec(i, j) * t(k) * t(l) + c.prec(i, k) * t(j) * t(l) +
                               c.prec(i, l) * t(j) * t(k) + c.prec(j, k) * t(i) * t(l) +
                               c.prec(j, l) * t(i) * t(k) + c.prec(k, l) * t(i) * t(j);
            out.fourth(m) += (t(i) * t(j) * t(k) * t(l) - ptt + pair2) * g;
        }
    }
}

DerivPack DensityModel::derivs(const Eigen::VectorXd& x, int max_order) const {
    DerivPack out(dim_, max_order, layout_);
    derivs_into(x, max_order, out);
    return out;
}

SampleSet DensityModel::draw(long n, std::uint64_t seed) const {
    if (n < 1) throw PreconditionError("sample: n >= 1 required");
    Rng rng(seed);
    SampleSet s;
    s.seed = seed;
    s.points.resize(n, dim_);
    Eigen::VectorXd z(dim_);
    for (long i = 0; i < n; ++i) {
        const double u = rng.uniform();
        size_t c = 0;
        while (c + 1 < cum_weights_.size() && u > cum_weights_[c]) ++c;
        for (int j = 0; j < dim_; ++j) z(j) = rng.normal();
        s.points.row(i) = (prep_[c].mean + prep_[c].chol * z).transpose();
    }
    return s;
}

DerivPack model_derivs(const DensityModel& model, const Eigen::VectorXd& x, int max_order) {
    return model.derivs(x, max_order);
}

SampleSet sample(const DensityModel& model, long n, std::uint64_t seed) {
    return model.draw(n, seed);
}

SmoothedField::SmoothedField(std::shared_ptr<const DensityModel> m,
                             std::shared_ptr<const KernelSpec> spec, double h, int quad_level)
    : model_(std::move(m)), spec_(std::move(spec)), h_(h) {
    if (h_ <= 0.0) throw PreconditionError("SmoothedField: h > 0 required");
    rule_ = ball_rule_polar(model_->dim(), quad_level);
    kernel_at_nodes_.resize(rule_.size());
    MultiIndex zero(model_->dim(), 0);
    for (long q = 0; q < rule_.size(); ++q)
        kernel_at_nodes_(q) = spec_->eval(rule_.nodes.row(q).data(), zero);
}

void SmoothedField::pack_into(const Eigen::VectorXd& x, int max_order, DerivPack& out) const {
    const int d = model_->dim();
    if (out.dim != d || out.max_order != max_order) out = DerivPack(d, max_order, model_->layout());
    out.set_zero();
    DerivPack tmp(d, max_order, model_->layout());
    Eigen::VectorXd y(d);
    for (long q = 0; q < rule_.size(); ++q) {
        const double w = rule_.weights(q) * kernel_at_nodes_(q);
        y = x - h_ * rule_.nodes.row(q).transpose();
        model_->derivs_into(y, max_order, tmp);
        out.value += w * tmp.value;
        if (max_order >= 1) out.grad += w * tmp.grad;
        if (max_order >= 2) out.hess += w * tmp.hess;
        if (max_order >= 3) out.third += w * tmp.third;
        if (max_order >= 4) out.fourth += w * tmp.fourth;
    }
}

DerivPack smoothed_derivs(const DensityModel& model, const KernelSpec& spec, double h,
                          const Eigen::VectorXd& x, int max_order, int quad_level) {
    auto mp = std::make_shared<const DensityModel>(model);
    auto sp = std::make_shared<const KernelSpec>(spec);
    SmoothedField f(mp, sp, h, quad_level);
    return f.pack(x, max_order);
}

}  // namespace ridgecr
