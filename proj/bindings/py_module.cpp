#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ridgecr/confidence.hpp"
#include "ridgecr/coverage.hpp"
#include "ridgecr/errors.hpp"
#include "ridgecr/io.hpp"
#include "ridgecr/omega.hpp"

namespace py = pybind11;
using namespace ridgecr;

namespace {

DensityModel model_from_parts(const std::vector<double>& weights,
                              const std::vector<Vector>& means,
                              const std::vector<Matrix>& covs, const Vector& lo,
                              const Vector& hi) {
    std::vector<DensityModel::Component> comps;
    for (size_t i = 0; i < weights.size(); ++i) comps.push_back({weights[i], means[i], covs[i]});
    Box box;
    box.lo = lo;
    box.hi = hi;
    return DensityModel(std::move(comps), std::move(box));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "density ridge estimation and confidence regions";

    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

    py::class_<KernelSpec>(m, "KernelSpec")
        .def(py::init<int, int>(), py::arg("dim"), py::arg("exponent") = 5)
        .def_property_readonly("dim", &KernelSpec::dim)
        .def_property_readonly("exponent", &KernelSpec::exponent)
        .def_property_readonly("norm_const", &KernelSpec::norm_const)
        .def("eval", [](const KernelSpec& k, const std::vector<double>& x,
                        const MultiIndex& gamma) { return k.eval(x, gamma); });

    py::class_<KernelConstants>(m, "KernelConstants")
        .def_readonly("a_K", &KernelConstants::a_K)
        .def_readonly("b_K", &KernelConstants::b_K)
        .def_readonly("mu_K", &KernelConstants::mu_K)
        .def_readonly("rho2_sq", &KernelConstants::rho2_sq)
        .def_readonly("R", &KernelConstants::R)
        .def_readonly("k3_satisfied", &KernelConstants::k3_satisfied)
        .def_readonly("k3_margin", &KernelConstants::k3_margin);

    m.def(
        "kernel_constants",
        [](const KernelSpec& spec, int level, const std::string& scheme) {
            QuadSettings q;
            q.level = level;
            q.scheme = scheme == "cube" ? QuadSettings::Scheme::cube : QuadSettings::Scheme::polar;
            return kernel_constants(spec, q);
        },
        py::arg("spec"), py::arg("level") = 2, py::arg("scheme") = "polar");

    m.def("z_alpha", &z_alpha, py::arg("alpha"));
    m.def("b_h_threshold", &b_h_threshold, py::arg("z"), py::arg("c"), py::arg("h"), py::arg("r"),
          py::arg("d"));

    py::class_<DensityModel>(m, "DensityModel")
        .def(py::init(&model_from_parts), py::arg("weights"), py::arg("means"), py::arg("covs"),
             py::arg("lo"), py::arg("hi"))
        .def_property_readonly("dim", &DensityModel::dim)
        .def("derivs",
             [](const DensityModel& mdl, const Vector& x, int order) {
                 DerivPack p = mdl.derivs(x, order);
                 py::dict out;
                 out["value"] = p.value;
                 if (order >= 1) out["grad"] = p.grad;
                 if (order >= 2) out["hess_vech"] = p.hess;
                 return out;
             },
             py::arg("x"), py::arg("max_order") = 2)
        .def("sample",
             [](const DensityModel& mdl, long n, std::uint64_t seed) {
                 return mdl.draw(n, seed).points;
             },
             py::arg("n"), py::arg("seed"));

    m.def(
        "kde_pack",
        [](const Matrix& points, double h, const Vector& x, int max_order, int exponent) {
            auto s = std::make_shared<SampleSet>();
            s->points = points;
            auto spec = std::make_shared<KernelSpec>(static_cast<int>(points.cols()), exponent);
            KdeEvaluator ev(s, spec, h);
            DerivPack p = ev.pack(x, max_order);
            py::dict out;
            out["value"] = p.value;
            if (max_order >= 1) out["grad"] = p.grad;
            if (max_order >= 2) out["hess_vech"] = p.hess;
            return out;
        },
        py::arg("points"), py::arg("h"), py::arg("x"), py::arg("max_order") = 2,
        py::arg("exponent") = 5);

    m.def(
        "find_ridge",
        [](const Matrix& points, double h, int r, const Vector& lo, const Vector& hi,
           const std::vector<int>& seed_shape, double tol, int exponent) {
            const int d = static_cast<int>(points.cols());
            auto s = std::make_shared<SampleSet>();
            s->points = points;
            auto spec = std::make_shared<KernelSpec>(d, exponent);
            KernelConstants consts = kernel_constants(*spec);
            IndexMaps maps = build_index_maps(d);
            Box box;
            box.lo = lo;
            box.hi = hi;
            EvalGrid seeds = EvalGrid::cover(box, seed_shape);
            FindOptions fo;
            fo.conv_tol = tol;
            RidgeSet rs = find_ridge(s, spec, h, r, seeds, box, consts, maps, fo);
            py::dict out;
            out["points"] = rs.points;
            std::vector<double> lam(rs.size()), resid(rs.size());
            for (long i = 0; i < rs.size(); ++i) {
                lam[i] = rs.diag[i].lambda_rp1;
                resid[i] = rs.diag[i].proj_grad.norm();
            }
            out["lambda_rp1"] = lam;
            out["residual"] = resid;
            return out;
        },
        py::arg("points"), py::arg("h"), py::arg("r"), py::arg("lo"), py::arg("hi"),
        py::arg("seed_shape"), py::arg("tol") = 1e-10, py::arg("exponent") = 5);

    m.def(
        "omega_closed_form",
        [](const KernelConstants& consts, const Vector& A) {
            IndexMaps maps = build_index_maps(consts.dim);
            return omega_closed_form(consts, maps, A);
        },
        py::arg("consts"), py::arg("A"));
}
