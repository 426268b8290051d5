#pragma once

#include <string>

#include "ridgecr/confidence.hpp"
#include "ridgecr/coverage.hpp"

namespace ridgecr {

// All numeric text output uses 17 significant digits so re-reads are bit-faithful.
std::string format_double(double v);

DensityModel read_model_json(const std::string& path);
void write_model_json(const DensityModel& model, const std::string& path);

void write_sample_csv(const SampleSet& sample, const std::string& path);
SampleSet read_sample_csv(const std::string& path);

// Dense row-major float64 fields with a JSON sidecar ({origin, spacing, shape,
// fields, layout}). `binary` writes <path>.f64 next to <path>.json; otherwise a CSV.
struct FieldGrid {
    EvalGrid grid;
    std::vector<std::string> names;
    Matrix values;  // cells x fields
};
void write_field_grid(const FieldGrid& fg, const std::string& path_prefix, bool binary = true);
FieldGrid read_field_grid(const std::string& path_prefix);

void write_ridge_csv(const RidgeSet& rs, const std::string& path);
void write_ridge_json(const RidgeSet& rs, const std::string& path);

void write_region_outputs(const ConfidenceRegion& region, const std::string& path_prefix,
                          bool binary_grid = true);

void write_coverage_report(const CoverageReport& rep, const RegionParams& params,
                           const std::string& json_path, const std::string& csv_path);
void write_gumbel_report(const GumbelReport& rep, const RegionParams& params,
                         const std::string& json_path, const std::string& csv_path);

}  // namespace ridgecr
