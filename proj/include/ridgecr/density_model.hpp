#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "ridgecr/deriv_pack.hpp"
#include "ridgecr/types.hpp"
#include "ridgecr/kernel.hpp"
#include "ridgecr/quadrature.hpp"

namespace ridgecr {

struct Box {
    Eigen::VectorXd lo, hi;
    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const Eigen::VectorXd& x, double margin = 0.0) const {
        for (int i = 0; i < dim(); ++i)
            if (x(i) < lo(i) - margin || x(i) > hi(i) + margin) return false;
        return true;
    }
};

// Evaluates a derivative pack of some scalar field at a point. Implementations:
// analytic mixture, kernel-smoothed mixture, KDE.
class DerivField {
public:
    virtual ~DerivField() = default;
    virtual int dim() const = 0;
    virtual void pack_into(const Eigen::VectorXd& x, int max_order, DerivPack& out) const = 0;
    DerivPack pack(const Eigen::VectorXd& x, int max_order) const;
    virtual const DerivLayout& layout() const = 0;
};

struct SampleSet {
    Eigen::MatrixXd points;  // n x d
    std::uint64_t seed = 0;
    std::string model_id;
    long size() const { return points.rows(); }
    int dim() const { return static_cast<int>(points.cols()); }
};

// Gaussian mixture with exact derivatives to order 4 (ground truth for oracles).
class DensityModel {
public:
    struct Component {
        double weight;
        Eigen::VectorXd mean;
        Eigen::MatrixXd cov;
    };

    DensityModel(std::vector<Component> components, Box domain_box);

    int dim() const { return dim_; }
    const Box& domain() const { return domain_; }
    const std::vector<Component>& components() const { return comps_; }
    const DerivLayout& layout() const { return layout_; }

    void derivs_into(const Eigen::VectorXd& x, int max_order, DerivPack& out) const;
    DerivPack derivs(const Eigen::VectorXd& x, int max_order) const;

    SampleSet draw(long n, std::uint64_t seed) const;

private:
    struct Prepared {
        double weight;
        Eigen::VectorXd mean;
        Eigen::MatrixXd prec;
        Eigen::MatrixXd chol;  // lower factor of cov
        double norm;           // weight / ((2 pi)^(d/2) sqrt(det cov))
    };
    int dim_;
    std::vector<Component> comps_;
    std::vector<Prepared> prep_;
    Box domain_;
    DerivLayout layout_;
    std::vector<double> cum_weights_;
};

DerivPack model_derivs(const DensityModel& model, const Eigen::VectorXd& x, int max_order);
SampleSet sample(const DensityModel& model, long n, std::uint64_t seed);

// f_h = E fhat: convolution of the model with the rescaled kernel, differentiated
// under the integral. Quadrature over the kernel support.
DerivPack smoothed_derivs(const DensityModel& model, const KernelSpec& spec, double h,
                          const Eigen::VectorXd& x, int max_order, int quad_level = 3);

class ModelField : public DerivField {
public:
    explicit ModelField(std::shared_ptr<const DensityModel> m) : model_(std::move(m)) {}
    int dim() const override { return model_->dim(); }
    const DerivLayout& layout() const override { return model_->layout(); }
    void pack_into(const Eigen::VectorXd& x, int max_order, DerivPack& out) const override {
        model_->derivs_into(x, max_order, out);
    }

private:
    std::shared_ptr<const DensityModel> model_;
};

class SmoothedField : public DerivField {
public:
    SmoothedField(std::shared_ptr<const DensityModel> m, std::shared_ptr<const KernelSpec> spec,
                  double h, int quad_level = 3);
    int dim() const override { return model_->dim(); }
    const DerivLayout& layout() const override { return model_->layout(); }
    void pack_into(const Eigen::VectorXd& x, int max_order, DerivPack& out) const override;
    double bandwidth() const { return h_; }

private:
    std::shared_ptr<const DensityModel> model_;
    std::shared_ptr<const KernelSpec> spec_;
    double h_;
    PointRule rule_;
    Eigen::VectorXd kernel_at_nodes_;
};

}  // namespace ridgecr
