#include "ridgecr/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ridgecr/errors.hpp"

namespace ridgecr {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileFormatError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw FileFormatError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

void dump_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FileFormatError("cannot write " + path);
    out << j.dump(2) << "\n";
}

json vec_to_json(const Vector& v) {
    json a = json::array();
    for (long i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Vector json_to_vec(const json& a) {
    Vector v(a.size());
    for (size_t i = 0; i < a.size(); ++i) v(i) = a[i].get<double>();
    return v;
}

}  // namespace

DensityModel read_model_json(const std::string& path) {
    json j = load_json(path);
    try {
        std::vector<DensityModel::Component> comps;
        for (const auto& c : j.at("components")) {
            DensityModel::Component comp;
            comp.weight = c.at("weight").get<double>();
            comp.mean = json_to_vec(c.at("mean"));
            const auto& rows = c.at("cov");
            const int d = static_cast<int>(comp.mean.size());
            comp.cov.resize(d, d);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) comp.cov(a, b) = rows.at(a).at(b).get<double>();
            comps.push_back(std::move(comp));
        }
        Box box;
        box.lo = json_to_vec(j.at("domain_box").at("lo"));
        box.hi = json_to_vec(j.at("domain_box").at("hi"));
        return DensityModel(std::move(comps), std::move(box));
    } catch (const json::exception& e) {
        throw FileFormatError("model file " + path + ": " + e.what());
    }
}

void write_model_json(const DensityModel& model, const std::string& path) {
    json j;
    j["components"] = json::array();
    for (const auto& c : model.components()) {
        json jc;
        jc["weight"] = c.weight;
        jc["mean"] = vec_to_json(c.mean);
        json rows = json::array();
        for (int a = 0; a < model.dim(); ++a) {
            json row = json::array();
            for (int b = 0; b < model.dim(); ++b) row.push_back(c.cov(a, b));
            rows.push_back(row);
        }
        jc["cov"] = rows;
        j["components"].push_back(jc);
    }
    j["domain_box"] = {{"lo", vec_to_json(model.domain().lo)},
                       {"hi", vec_to_json(model.domain().hi)}};
    dump_json(j, path);
}

void write_sample_csv(const SampleSet& sample, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FileFormatError("cannot write " + path);
    const int d = sample.dim();
    for (int i = 0; i < d; ++i) out << (i ? "," : "") << "x" << (i + 1);
    out << "\n";
    for (long r = 0; r < sample.size(); ++r) {
        for (int i = 0; i < d; ++i) out << (i ? "," : "") << format_double(sample.points(r, i));
        out << "\n";
    }
}

SampleSet read_sample_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileFormatError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw FileFormatError(path + ": empty sample file");
    int d = 1;
    for (char ch : line)
        if (ch == ',') ++d;
    std::vector<double> vals;
    long rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        int got = 0;
        while (std::getline(ss, cell, ',')) {
            try {
                vals.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw FileFormatError(path + ": non-numeric cell '" + cell + "'");
            }
            ++got;
        }
        if (got != d) throw FileFormatError(path + ": ragged row");
        ++rows;
    }
    if (rows == 0) throw FileFormatError(path + ": no data rows");
    SampleSet s;
    s.points.resize(rows, d);
    for (long r = 0; r < rows; ++r)
        for (int i = 0; i < d; ++i) s.points(r, i) = vals[r * d + i];
    return s;
}

void write_field_grid(const FieldGrid& fg, const std::string& path_prefix, bool binary) {
    json side;
    side["origin"] = vec_to_json(fg.grid.origin);
    side["spacing"] = vec_to_json(fg.grid.spacing);
    side["shape"] = fg.grid.shape;
    side["fields"] = fg.names;
    side["layout"] = "row-major";
    side["dtype"] = "float64";
    side["storage"] = binary ? "binary" : "csv";
    dump_json(side, path_prefix + ".json");

    const long cells = fg.grid.size();
    if (binary) {
        std::ofstream out(path_prefix + ".f64", std::ios::binary);
        if (!out) throw FileFormatError("cannot write " + path_prefix + ".f64");
        for (size_t f = 0; f < fg.names.size(); ++f) {
            for (long c = 0; c < cells; ++c) {
                const double v = fg.values(c, f);
                out.write(reinterpret_cast<const char*>(&v), sizeof(double));
            }
        }
    } else {
        std::ofstream out(path_prefix + ".csv");
        if (!out) throw FileFormatError("cannot write " + path_prefix + ".csv");
        for (size_t f = 0; f < fg.names.size(); ++f) out << (f ? "," : "") << fg.names[f];
        out << "\n";
        for (long c = 0; c < cells; ++c) {
            for (size_t f = 0; f < fg.names.size(); ++f)
                out << (f ? "," : "") << format_double(fg.values(c, f));
            out << "\n";
        }
    }
}

FieldGrid read_field_grid(const std::string& path_prefix) {
    json side = load_json(path_prefix + ".json");
    FieldGrid fg;
    try {
        fg.grid.origin = json_to_vec(side.at("origin"));
        fg.grid.spacing = json_to_vec(side.at("spacing"));
        fg.grid.shape = side.at("shape").get<std::vector<int>>();
        fg.names = side.at("fields").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw FileFormatError("sidecar " + path_prefix + ".json: " + e.what());
    }
    const long cells = fg.grid.size();
    fg.values.resize(cells, fg.names.size());
    const std::string storage = side.value("storage", "binary");
    if (storage == "binary") {
        std::ifstream in(path_prefix + ".f64", std::ios::binary);
        if (!in) throw FileFormatError("cannot open " + path_prefix + ".f64");
        for (size_t f = 0; f < fg.names.size(); ++f)
            for (long c = 0; c < cells; ++c) {
                double v;
                in.read(reinterpret_cast<char*>(&v), sizeof(double));
                if (!in) throw FileFormatError(path_prefix + ".f64: truncated");
                fg.values(c, f) = v;
            }
    } else {
        std::ifstream in(path_prefix + ".csv");
        if (!in) throw FileFormatError("cannot open " + path_prefix + ".csv");
        std::string line;
        std::getline(in, line);
        for (long c = 0; c < cells; ++c) {
            if (!std::getline(in, line)) throw FileFormatError(path_prefix + ".csv: truncated");
            std::stringstream ss(line);
            std::string cell;
            for (size_t f = 0; f < fg.names.size(); ++f) {
                std::getline(ss, cell, ',');
                fg.values(c, f) = std::stod(cell);
            }
        }
    }
    return fg;
}

void write_ridge_csv(const RidgeSet& rs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FileFormatError("cannot write " + path);
    const int d = rs.dim;
    for (int i = 0; i < d; ++i) out << "x" << (i + 1) << ",";
    out << "lambda_rp1,vproj_norm";
    for (int t = 0; t < rs.r; ++t)
        for (int i = 0; i < d; ++i) out << ",t" << (t + 1) << "_" << (i + 1);
    out << ",polyline\n";

    std::vector<int> chain_of(rs.size(), -1);
    for (size_t c = 0; c < rs.polylines.size(); ++c)
        for (int idx : rs.polylines[c]) chain_of[idx] = static_cast<int>(c);

    for (long i = 0; i < rs.size(); ++i) {
        for (int j = 0; j < d; ++j) out << format_double(rs.points(i, j)) << ",";
        out << format_double(rs.diag[i].lambda_rp1) << ","
            << format_double(rs.diag[i].proj_grad.norm());
        for (int t = 0; t < rs.r; ++t)
            for (int j = 0; j < d; ++j) out << "," << format_double(rs.tangents[i](j, t));
        out << "," << chain_of[i] << "\n";
    }
}

void write_ridge_json(const RidgeSet& rs, const std::string& path) {
    json j;
    j["dim"] = rs.dim;
    j["r"] = rs.r;
    j["points"] = rs.size();
    j["resolution"] = rs.resolution;
    j["total_length"] = rs.total_length;
    j["polylines"] = rs.polylines;
    j["closed"] = rs.closed;
    j["stats"] = {{"seeds", rs.stats.seeds},
                  {"converged", rs.stats.converged},
                  {"dropped_nonconverged", rs.stats.dropped_nonconverged},
                  {"dropped_condition2", rs.stats.dropped_condition2},
                  {"dropped_outside", rs.stats.dropped_outside},
                  {"dropped_degenerate", rs.stats.dropped_degenerate},
                  {"deduplicated", rs.stats.deduplicated}};
    dump_json(j, path);
}

namespace {

json params_to_json(const RegionParams& p) {
    json j;
    j["alpha"] = p.alpha;
    j["n"] = p.n;
    j["d"] = p.d;
    j["r"] = p.r;
    j["h"] = p.h;
    j["l"] = p.l;
    j["bn_mode"] = p.bn_mode == RegionParams::BnMode::zero
                       ? "zero"
                       : (p.bn_mode == RegionParams::BnMode::zeta0 ? "zeta0" : "zeta");
    j["combined"] = p.combined;
    j["eta"] = p.eta;
    j["mu_exponent"] = p.mu_exponent;
    j["nu_exponent"] = p.nu_exponent;
    j["target"] = p.target == RegionParams::Target::mh
                      ? "mh"
                      : (p.target == RegionParams::Target::m_undersmooth ? "m-undersmooth"
                                                                         : "m-biascorr");
    return j;
}

}  // namespace

void write_region_outputs(const ConfidenceRegion& region, const std::string& path_prefix,
                          bool binary_grid) {
    FieldGrid fg;
    fg.grid = region.grid;
    fg.names = {"stat", "lambda_rp1", "gradnorm", "mask"};
    const long cells = region.grid.size();
    fg.values.resize(cells, 4);
    for (long c = 0; c < cells; ++c) {
        fg.values(c, 0) = region.stat_field(c);
        fg.values(c, 1) = region.lambda_field(c);
        fg.values(c, 2) = region.gradnorm_field(c);
        fg.values(c, 3) = region.mask[c];
    }
    write_field_grid(fg, path_prefix + "_grid", binary_grid);

    json j;
    j["a_n"] = region.a_n;
    j["b_n"] = region.b_n;
    j["c_hat"] = region.c_hat;
    j["z_alpha"] = region.z_alpha_value;
    if (std::isfinite(region.zeta0)) j["zeta0"] = region.zeta0;
    if (std::isfinite(region.zeta)) j["zeta"] = region.zeta;
    j["e_threshold"] = region.e_threshold;
    j["flagged_cells"] = region.flagged_cells;
    j["params"] = params_to_json(region.params);
    dump_json(j, path_prefix + ".json");
}

void write_coverage_report(const CoverageReport& rep, const RegionParams& params,
                           const std::string& json_path, const std::string& csv_path) {
    json j;
    j["check"] = "coverage";
    j["B"] = rep.B;
    j["covered"] = rep.covered;
    j["empirical"] = rep.empirical;
    j["wilson_lo"] = rep.wilson.first;
    j["wilson_hi"] = rep.wilson.second;
    j["probe_spacing"] = rep.probe_spacing;
    j["probe_count"] = rep.probe_count;
    j["elapsed_seconds"] = rep.elapsed_seconds;
    j["params"] = params_to_json(params);
    dump_json(j, json_path);

    std::ofstream out(csv_path);
    if (!out) throw FileFormatError("cannot write " + csv_path);
    out << "replicate,covered,lambda_ok,sup_stat,sup_lambda,c_hat,a_n\n";
    for (int b = 0; b < rep.B; ++b) {
        out << b << "," << int(rep.covered_flags[b]) << "," << int(rep.lambda_ok[b]) << ","
            << format_double(rep.sup_stat[b]) << "," << format_double(rep.sup_lambda[b]) << ","
            << format_double(rep.c_hat[b]) << "," << format_double(rep.a_n[b]) << "\n";
    }
}

void write_gumbel_report(const GumbelReport& rep, const RegionParams& params,
                         const std::string& json_path, const std::string& csv_path) {
    json j;
    j["check"] = "gumbel";
    j["B"] = rep.B;
    j["ks_distance"] = rep.ks_distance;
    j["c_used"] = rep.c_used;
    j["probe_count"] = rep.probe_count;
    j["params"] = params_to_json(params);
    dump_json(j, json_path);

    std::ofstream out(csv_path);
    if (!out) throw FileFormatError("cannot write " + csv_path);
    out << "replicate,z\n";
    for (int b = 0; b < rep.B; ++b) out << b << "," << format_double(rep.z_values[b]) << "\n";
}

}  // namespace ridgecr
