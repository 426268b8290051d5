#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

#include "ridgecr/errors.hpp"
#include "ridgecr/io.hpp"
#include "ridgecr/omega.hpp"

using nlohmann::json;
using namespace ridgecr;

namespace {

// exit codes: 0 ok, 2 usage, 3 file format, 4 precondition, 5 numeric failure
constexpr int kExitUsage = 2;
constexpr int kExitFile = 3;
constexpr int kExitPrecondition = 4;
constexpr int kExitNumeric = 5;

void error_json(const char* cls, const std::string& msg) {
    json j = {{"error", cls}, {"message", msg}};
    std::cerr << j.dump() << std::endl;
}

std::vector<int> parse_shape(const std::string& s, int dim) {
    std::vector<int> shape;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) shape.push_back(std::stoi(tok));
    if (shape.size() == 1) shape.assign(dim, shape[0]);
    if (static_cast<int>(shape.size()) != dim)
        throw PreconditionError("grid shape must have 1 or d entries");
    return shape;
}

Box box_from_flag(const std::string& s, int dim) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
    if (static_cast<int>(v.size()) != 2 * dim)
        throw PreconditionError("--box needs lo1,hi1,lo2,hi2,... (2d values)");
    Box b;
    b.lo.resize(dim);
    b.hi.resize(dim);
    for (int i = 0; i < dim; ++i) {
        b.lo(i) = v[2 * i];
        b.hi(i) = v[2 * i + 1];
    }
    return b;
}

Box sample_hull(const SampleSet& s, double pad) {
    Box b;
    b.lo = s.points.colwise().minCoeff().transpose().array() - pad;
    b.hi = s.points.colwise().maxCoeff().transpose().array() + pad;
    return b;
}

RegionParams::Target parse_target(const std::string& t) {
    if (t == "mh") return RegionParams::Target::mh;
    if (t == "m-undersmooth") return RegionParams::Target::m_undersmooth;
    if (t == "m-biascorr") return RegionParams::Target::m_biascorr;
    throw PreconditionError("unknown target '" + t + "'");
}

RegionParams::BnMode parse_bn_mode(const std::string& t) {
    if (t == "zero") return RegionParams::BnMode::zero;
    if (t == "zeta0") return RegionParams::BnMode::zeta0;
    if (t == "zeta") return RegionParams::BnMode::zeta;
    throw PreconditionError("unknown bn-mode '" + t + "'");
}

int cmd_constants(int dim, int exponent, int quad_level, const std::string& scheme,
                  const std::string& out_path) {
    KernelSpec spec(dim, exponent);
    QuadSettings qs;
    qs.level = quad_level;
    qs.scheme = scheme == "cube" ? QuadSettings::Scheme::cube : QuadSettings::Scheme::polar;
    KernelConstants c = kernel_constants(spec, qs);
    json j;
    j["dim"] = dim;
    j["exponent"] = exponent;
    j["a_K"] = c.a_K;
    if (dim >= 3) j["b_K"] = c.b_K;
    j["mu_K"] = c.mu_K;
    j["rho2_sq"] = c.rho2_sq;
    j["k3_satisfied"] = c.k3_satisfied;
    j["k3_margin"] = c.k3_margin;
    j["quad_level_used"] = c.quad_level_used;
    std::vector<double> R;
    for (int a = 0; a < c.R.rows(); ++a)
        for (int b = 0; b < c.R.cols(); ++b) R.push_back(c.R(a, b));
    j["R"] = R;
    if (out_path.empty()) {
        std::cout << j.dump(2) << std::endl;
    } else {
        std::ofstream out(out_path);
        out << j.dump(2) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"density ridge estimation and confidence regions"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "worker thread cap");

    // constants
    auto* c_cmd = app.add_subcommand("constants", "kernel constants a_K, b_K, mu_K, R");
    int c_dim = 2, c_exp = 5, c_level = 2;
    std::string c_scheme = "polar", c_out;
    c_cmd->add_option("--dim", c_dim, "dimension d >= 2")->required();
    c_cmd->add_option("--exponent", c_exp, "kernel polynomial power (>= 4)");
    c_cmd->add_option("--quad-level", c_level, "quadrature level");
    c_cmd->add_option("--scheme", c_scheme, "polar | cube");
    c_cmd->add_option("--out", c_out, "output JSON path (default stdout)");

    // estimate
    auto* e_cmd = app.add_subcommand("estimate", "estimate the ridge from a sample");
    std::string e_input, e_grid = "40", e_box, e_out = "ridge";
    double e_h = 0.0, e_tol = 1e-10;
    int e_r = 1, e_exp = 5, e_max_iter = 100;
    e_cmd->add_option("--input", e_input, "sample CSV")->required();
    e_cmd->add_option("--h", e_h, "bandwidth")->required();
    e_cmd->add_option("--r", e_r, "ridge dimension");
    e_cmd->add_option("--grid", e_grid, "seed grid shape (N or N1,N2,...)");
    e_cmd->add_option("--tol", e_tol, "convergence tolerance on ||V^T grad||");
    e_cmd->add_option("--max-iter", e_max_iter, "maximum solver iterations");
    e_cmd->add_option("--box", e_box, "domain box lo1,hi1,... (default: sample hull)");
    e_cmd->add_option("--exponent", e_exp, "kernel polynomial power");
    e_cmd->add_option("--out-prefix", e_out, "output prefix (csv + json)");

    // region
    auto* r_cmd = app.add_subcommand("region", "confidence region for the ridge");
    std::string r_input, r_grid = "80", r_box, r_out = "region", r_target = "mh",
                r_bn = "zero", r_format = "binary", r_finder_grid = "40";
    double r_alpha = 0.1, r_h = 0.0, r_l = 0.0, r_eta = 0.5, r_mu = 0.5, r_nu = 0.5,
           r_tol = 1e-10;
    int r_r = 1, r_exp = 5;
    bool r_combined = false;
    r_cmd->add_option("--input", r_input, "sample CSV")->required();
    r_cmd->add_option("--alpha", r_alpha, "significance level")->required();
    r_cmd->add_option("--h", r_h, "main bandwidth")->required();
    r_cmd->add_option("--l", r_l, "auxiliary bandwidth (c-hat / bias correction)")->required();
    r_cmd->add_option("--r", r_r, "ridge dimension");
    r_cmd->add_option("--target", r_target, "mh | m-undersmooth | m-biascorr");
    r_cmd->add_option("--bn-mode", r_bn, "zero | zeta0 | zeta");
    r_cmd->add_flag("--combined", r_combined, "union with the small-gradient set G");
    r_cmd->add_option("--eta", r_eta, "E-set exponent eta in (0,1)");
    r_cmd->add_option("--mu-exp", r_mu, "mu_n = h^-mu");
    r_cmd->add_option("--nu-exp", r_nu, "nu_n = h^-nu");
    r_cmd->add_option("--grid", r_grid, "evaluation grid shape");
    r_cmd->add_option("--finder-grid", r_finder_grid, "ridge search seed shape");
    r_cmd->add_option("--box", r_box, "domain box (default: sample hull)");
    r_cmd->add_option("--tol", r_tol, "ridge solver tolerance");
    r_cmd->add_option("--exponent", r_exp, "kernel polynomial power");
    r_cmd->add_option("--format", r_format, "grid storage: binary | csv");
    r_cmd->add_option("--out-prefix", r_out, "output prefix");

    // coverage
    auto* v_cmd = app.add_subcommand("coverage", "Monte Carlo coverage / Gumbel checks");
    std::string v_model, v_check = "coverage", v_target = "mh", v_bn = "zero",
                v_out = "report", v_finder_grid = "40", v_grid = "21", v_oracle_grid = "60";
    double v_alpha = 0.1, v_h = 0.0, v_l = 0.0, v_probe = 0.0, v_eta = 0.5, v_mu = 0.5,
           v_nu = 0.5;
    long v_n = 0;
    int v_B = 100, v_r = 1, v_exp = 5;
    std::uint64_t v_seed = 1;
    bool v_combined = false;
    v_cmd->add_option("--model", v_model, "model JSON")->required();
    v_cmd->add_option("--alpha", v_alpha, "significance level");
    v_cmd->add_option("--n", v_n, "sample size per replicate")->required();
    v_cmd->add_option("--h", v_h, "main bandwidth")->required();
    v_cmd->add_option("--l", v_l, "auxiliary bandwidth");
    v_cmd->add_option("--replicates", v_B, "number of replicates");
    v_cmd->add_option("--seed", v_seed, "master seed");
    v_cmd->add_option("--target", v_target, "mh | m-undersmooth | m-biascorr");
    v_cmd->add_option("--check", v_check, "coverage | gumbel");
    v_cmd->add_option("--bn-mode", v_bn, "zero | zeta0 | zeta");
    v_cmd->add_flag("--combined", v_combined, "combined region");
    v_cmd->add_option("--eta", v_eta, "eta");
    v_cmd->add_option("--mu-exp", v_mu, "mu exponent");
    v_cmd->add_option("--nu-exp", v_nu, "nu exponent");
    v_cmd->add_option("--probe-resolution", v_probe, "oracle densification spacing");
    v_cmd->add_option("--r", v_r, "ridge dimension");
    v_cmd->add_option("--exponent", v_exp, "kernel polynomial power");
    v_cmd->add_option("--finder-grid", v_finder_grid, "per-replicate seed shape");
    v_cmd->add_option("--oracle-grid", v_oracle_grid, "oracle ridge seed shape");
    v_cmd->add_option("--grid", v_grid, "region grid shape");
    v_cmd->add_option("--out-prefix", v_out, "output prefix");

    // truth
    auto* t_cmd = app.add_subcommand("truth", "oracle ridge of an analytic model");
    std::string t_model, t_out = "truth", t_grid = "60";
    double t_h = 0.0, t_tol = 1e-10;
    int t_r = 1, t_exp = 5;
    t_cmd->add_option("--model", t_model, "model JSON")->required();
    t_cmd->add_option("--r", t_r, "ridge dimension");
    t_cmd->add_option("--h", t_h, "if > 0: surrogate ridge of the smoothed density");
    t_cmd->add_option("--grid", t_grid, "seed grid shape");
    t_cmd->add_option("--tol", t_tol, "solver tolerance");
    t_cmd->add_option("--exponent", t_exp, "kernel polynomial power");
    t_cmd->add_option("--out-prefix", t_out, "output prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*c_cmd) return cmd_constants(c_dim, c_exp, c_level, c_scheme, c_out);

        if (*e_cmd) {
            auto sample = std::make_shared<SampleSet>(read_sample_csv(e_input));
            const int d = sample->dim();
            auto spec = std::make_shared<KernelSpec>(d, e_exp);
            Box box = e_box.empty() ? sample_hull(*sample, e_h) : box_from_flag(e_box, d);
            KernelConstants consts = kernel_constants(*spec);
            IndexMaps maps = build_index_maps(d);
            EvalGrid seeds = EvalGrid::cover(box, parse_shape(e_grid, d));
            FindOptions opts;
            opts.conv_tol = e_tol;
            opts.max_iter = e_max_iter;
            RidgeSet rs = find_ridge(sample, spec, e_h, e_r, seeds, box, consts, maps, opts);
            if (e_r == 1 && rs.size() > 0) link_polyline(rs);
            write_ridge_csv(rs, e_out + ".csv");
            write_ridge_json(rs, e_out + ".json");
            return 0;
        }

        if (*r_cmd) {
            auto sample = std::make_shared<SampleSet>(read_sample_csv(r_input));
            const int d = sample->dim();
            auto spec = std::make_shared<KernelSpec>(d, r_exp);
            Box box = r_box.empty() ? sample_hull(*sample, r_h) : box_from_flag(r_box, d);
            RegionParams params;
            params.alpha = r_alpha;
            params.n = sample->size();
            params.d = d;
            params.r = r_r;
            params.h = r_h;
            params.l = r_l;
            params.bn_mode = parse_bn_mode(r_bn);
            params.combined = r_combined;
            params.eta = r_eta;
            params.mu_exponent = r_mu;
            params.nu_exponent = r_nu;
            params.target = parse_target(r_target);
            auto consts = std::make_shared<KernelConstants>(kernel_constants(*spec));
            auto maps = std::make_shared<IndexMaps>(build_index_maps(d));
            EvalGrid seeds = EvalGrid::cover(box, parse_shape(r_finder_grid, d));
            FindOptions opts;
            opts.conv_tol = r_tol;
            RidgeSet ridge_l =
                find_ridge(sample, spec, params.l, params.r, seeds, box, *consts, *maps, opts);
            if (params.r == 1 && ridge_l.size() > 0) link_polyline(ridge_l);
            const bool need_zeta =
                params.bn_mode != RegionParams::BnMode::zero || params.combined;
            RidgeSet ridge_h;
            if (need_zeta)
                ridge_h = find_ridge(sample, spec, params.h, params.r, seeds, box, *consts,
                                     *maps, opts);
            EvalGrid grid = EvalGrid::cover(box, parse_shape(r_grid, d));
            ConfidenceRegion region =
                build_region(sample, spec, params, grid, box, ridge_l,
                             need_zeta ? &ridge_h : nullptr, consts, maps, {}, threads);
            write_region_outputs(region, r_out, r_format != "csv");
            return 0;
        }

        if (*v_cmd) {
            auto model = std::make_shared<DensityModel>(read_model_json(v_model));
            const int d = model->dim();
            auto spec = std::make_shared<KernelSpec>(d, v_exp);
            ExperimentPlan plan;
            plan.model = model;
            plan.spec = spec;
            plan.params.alpha = v_alpha;
            plan.params.n = v_n;
            plan.params.d = d;
            plan.params.r = v_r;
            plan.params.h = v_h;
            plan.params.l = v_l > 0.0 ? v_l : 1.8 * v_h;
            plan.params.bn_mode = parse_bn_mode(v_bn);
            plan.params.combined = v_combined;
            plan.params.eta = v_eta;
            plan.params.mu_exponent = v_mu;
            plan.params.nu_exponent = v_nu;
            plan.params.target = parse_target(v_target);
            plan.replicates = v_B;
            plan.seed = v_seed;
            plan.probe_resolution = v_probe;
            plan.finder_seed_shape = parse_shape(v_finder_grid, d);
            plan.oracle_seed_shape = parse_shape(v_oracle_grid, d);
            plan.grid_shape = parse_shape(v_grid, d);
            plan.threads = threads;
            if (v_check == "gumbel") {
                GumbelReport rep = run_gumbel_check(plan);
                write_gumbel_report(rep, plan.params, v_out + ".json", v_out + "_replicates.csv");
            } else {
                CoverageReport rep = run_coverage(plan);
                write_coverage_report(rep, plan.params, v_out + ".json",
                                      v_out + "_replicates.csv");
            }
            return 0;
        }

        if (*t_cmd) {
            DensityModel model = read_model_json(t_model);
            const int d = model.dim();
            KernelConstants consts;
            IndexMaps maps = build_index_maps(d);
            KernelSpec spec(d, t_exp);
            consts = kernel_constants(spec);
            std::vector<int> shape = parse_shape(t_grid, d);
            RidgeSet rs = (t_h > 0.0)
                              ? true_ridge_smoothed(model, spec, t_h, t_r, shape, consts, maps,
                                                    t_tol)
                              : true_ridge(model, t_r, shape, consts, maps, t_tol);
            write_ridge_csv(rs, t_out + ".csv");
            write_ridge_json(rs, t_out + ".json");
            return 0;
        }
    } catch (const PreconditionError& e) {
        error_json("precondition", e.what());
        return kExitPrecondition;
    } catch (const FileFormatError& e) {
        error_json("file", e.what());
        return kExitFile;
    } catch (const NumericError& e) {
        error_json("numeric", e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        error_json("internal", e.what());
        return kExitNumeric;
    }
    return 0;
}
