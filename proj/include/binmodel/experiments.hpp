#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "binmodel/detection.hpp"
#include "binmodel/parallel.hpp"
#include "binmodel/periphery.hpp"
#include "binmodel/solve.hpp"
#include "binmodel/stimulus.hpp"

namespace binmodel {

struct ConditionVariant {
  std::string label;
  FixedParams fixed;
  std::optional<double> dprime_target;  // overrides the parameter set's target for this curve
};

// One reproduced study. Sweep values are stored in display units (x_unit); x_to_si converts
// them to what build_condition expects (e.g. ms -> s).
struct ExperimentDef {
  Study study = Study::Pollack1959;
  std::string name;
  std::string sweep_name;
  std::string x_unit;
  double x_to_si = 1.0;
  std::vector<double> sweep;
  std::vector<ConditionVariant> conditions;
  DetectionParams table1_params;
  double table1_r_squared = 0.0;
  Ordinate ordinate = Ordinate::SnrDb;

  const ConditionVariant* find_condition(std::string_view label) const;
  ConditionPair build(const ConditionVariant& condition, double x) const;
};

const std::vector<ExperimentDef>& builtin_experiments();
// Throws ValidationError for unknown names. Accepts study aliases.
const ExperimentDef& find_experiment(std::string_view name);

// Single parameter set fitted jointly to all eight studies.
DetectionParams global_params();
inline constexpr double kGlobalRSquared = 0.93;
inline constexpr double kTable1PooledRSquared = 0.98;

using ParamSet = std::map<std::string, DetectionParams, std::less<>>;
ParamSet table1_param_set();
// Same parameters for every experiment; σ_mon is dropped for binaural-only studies.
ParamSet uniform_param_set(const DetectionParams& params);
DetectionParams params_for(const ParamSet& set, const ExperimentDef& def);

std::string_view ordinate_units(Ordinate ordinate);  // "db_snr" or "delta_rho"

struct RunOptions {
  PeripheryFilter filter{};
  QuadratureOptions quadrature{};
  SolverOptions solver{};
  unsigned jobs = default_jobs();
};

struct ExperimentPoint {
  std::string experiment;
  std::string condition;
  double x = 0.0;  // display units
  ThresholdResult result;
};

DetectionParams condition_params(const DetectionParams& params, const ConditionVariant& c);

// Threshold for one condition at one abscissa. No-threshold errors are recorded in
// result.error instead of thrown.
ExperimentPoint evaluate_point(const ExperimentDef& def, const ConditionVariant& condition,
                               double x, const DetectionParams& params,
                               const RunOptions& opts = {});

// One point per (condition, sweep value), ordered by condition then sweep value.
std::vector<ExperimentPoint> run_experiment(const ExperimentDef& def, const DetectionParams& params,
                                            const RunOptions& opts = {});
std::vector<ExperimentPoint> run_experiment(const ExperimentDef& def, std::span<const double> sweep,
                                            const DetectionParams& params,
                                            const RunOptions& opts = {});

struct DigitizedDatum {
  std::string experiment;
  std::string condition;
  double x = 0.0;
  double y = 0.0;
  std::string units;
};

// CSV with header `experiment,condition,x,y,units`. Throws DataError naming the offending row.
std::vector<DigitizedDatum> ingest_data(std::istream& in, std::string_view source = "<stream>");
std::vector<DigitizedDatum> ingest_data(const std::filesystem::path& path);
// All *.csv files of a directory, in file name order.
std::vector<DigitizedDatum> ingest_data_dir(const std::filesystem::path& dir);

// BINMODEL_DATA_DIR if set, else the bundled data directory.
std::filesystem::path default_data_dir();

struct ReportRow {
  std::string experiment;
  std::string condition;
  double x = 0.0;
  std::optional<double> y_model;
  std::optional<double> y_data;
};

struct ExperimentSummary {
  std::string experiment;
  std::optional<double> r_squared;
  std::size_t n_points = 0;
  std::string notice;
};

struct Report {
  std::vector<ReportRow> rows;             // model grid plus model-at-data rows
  std::vector<ExperimentSummary> summary;  // one per experiment
  std::optional<double> pooled_r_squared;  // over all SNR-ordinate data points
  std::size_t pooled_points = 0;
  std::vector<ReportRow> scatter;          // data points with their model predictions
};

Report build_report(std::span<const ExperimentDef> defs, const ParamSet& params,
                    std::span<const DigitizedDatum> data, const RunOptions& opts = {});

// results/<experiment>.csv, results/summary.csv, results/scatter.csv
void write_report(const Report& report, const std::filesystem::path& out_dir);
void write_experiment_csv(std::span<const ExperimentPoint> points, std::ostream& out);

}  // namespace binmodel
