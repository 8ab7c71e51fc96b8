#include "binmodel/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "binmodel/error.hpp"
#include "binmodel/fit.hpp"
#include "binmodel/io.hpp"

#ifndef BINMODEL_DEFAULT_DATA_DIR
#define BINMODEL_DEFAULT_DATA_DIR "data"
#endif

namespace binmodel {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
  return v;
}

DetectionParams row(double rho_hat, double sigma_bin, std::optional<double> sigma_mon) {
  return {rho_hat, sigma_bin, sigma_mon, 1.0};
}

ConditionVariant tone(std::string label, double ipd) {
  ConditionVariant c{std::move(label), {}, std::nullopt};
  c.fixed.tone_ipd = ipd;
  return c;
}

std::string label_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

ExperimentDef make(Study study, std::string name, std::string sweep_name, std::string x_unit,
                   double x_to_si = 1.0) {
  ExperimentDef d;
  d.study = study;
  d.name = std::move(name);
  d.sweep_name = std::move(sweep_name);
  d.x_unit = std::move(x_unit);
  d.x_to_si = x_to_si;
  return d;
}

std::vector<ExperimentDef> make_experiments() {
  std::vector<ExperimentDef> defs;

  {
    ExperimentDef d = make(Study::Pollack1959, "pollack1959", "reference correlation", "rho");
    d.sweep = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.85};
    d.conditions = {{"d1", {}, 1.0}};
    d.table1_params = row(0.92, 0.42, std::nullopt);
    d.table1_r_squared = 0.97;
    d.ordinate = Ordinate::DeltaRho;
    defs.push_back(std::move(d));
  }
  {
    ExperimentDef d = make(Study::Robinson1963, "robinson1963", "noise correlation", "rho");
    d.sweep = linspace(-1.0, 1.0, 9);
    d.conditions = {tone("S0", 0.0), tone("Spi", kPi)};
    d.table1_params = row(0.92, 0.31, 0.76);
    d.table1_r_squared = 0.98;
    defs.push_back(std::move(d));
  }
  {
    ExperimentDef d = make(Study::Bernstein2014, "bernstein2014", "noise correlation", "rho");
    d.sweep = linspace(-1.0, 1.0, 9);
    for (double bw : {25.0, 50.0, 100.0, 200.0, 400.0, 900.0}) {
      ConditionVariant c = tone("bw" + label_number(bw), kPi);
      c.fixed.bandwidth_hz = bw;
      d.conditions.push_back(c);
    }
    d.table1_params = row(0.97, 0.54, 0.76);
    d.table1_r_squared = 0.97;
    defs.push_back(std::move(d));
  }
  {
    ExperimentDef d = make(Study::Langford1964, "langford1964", "noise ITD", "ms", 1e-3);
    d.sweep = linspace(0.0, 9.0, 37);
    d.conditions = {tone("S0", 0.0), tone("Spi", kPi)};
    d.table1_params = row(0.95, 0.33, 0.70);
    d.table1_r_squared = 0.96;
    defs.push_back(std::move(d));
  }
  {
    ExperimentDef d = make(Study::VanDerHeijden1999, "vanderheijden1999", "ITD", "ms", 1e-3);
    d.sweep = linspace(0.0, 4.0, 41);
    d.conditions = {tone("NdtS0", 0.0), tone("NdtSpi", kPi)};
    ConditionVariant on_tone = tone("N0Sdt", 0.0);
    on_tone.fixed.itd_target = ItdTarget::Tone;
    d.conditions.push_back(on_tone);
    d.table1_params = row(0.90, 0.19, 0.61);
    d.table1_r_squared = 0.95;
    defs.push_back(std::move(d));
  }
  {
    ExperimentDef d = make(Study::Rabiner1966, "rabiner1966", "envelope ITD", "ms", 1e-3);
    d.sweep = linspace(0.0, 9.0, 19);
    d.conditions = {tone("Spi", kPi)};
    d.table1_params = row(0.85, 0.24, 0.71);
    d.table1_r_squared = 0.95;
    defs.push_back(std::move(d));
  }
  {
    ExperimentDef d = make(Study::Bernstein2020, "bernstein2020", "whole-signal ITD", "ms", 1e-3);
    d.sweep = linspace(0.0, 4.0, 9);
    for (double bw : {100.0, 900.0}) {
      for (double rho : {1.0, 0.992, 0.963, 0.922, 0.807, 0.498}) {
        ConditionVariant c = tone("bw" + label_number(bw) + "_rho" + label_number(rho), kPi);
        c.fixed.bandwidth_hz = bw;
        c.fixed.rho_n = rho;
        d.conditions.push_back(c);
      }
      ConditionVariant n0s0 = tone("bw" + label_number(bw) + "_N0S0", 0.0);
      n0s0.fixed.bandwidth_hz = bw;
      d.conditions.push_back(n0s0);
    }
    d.table1_params = row(0.89, 0.52, 0.93);
    d.table1_r_squared = 0.96;
    defs.push_back(std::move(d));
  }
  {
    ExperimentDef d = make(Study::VanDePar1999, "vandepar1999", "bandwidth", "Hz");
    d.sweep = logspace(5.0, 1000.0, 16);
    ConditionVariant n0s0 = tone("N0S0", 0.0);
    ConditionVariant n0spi = tone("N0Spi", kPi);
    ConditionVariant npis0 = tone("NpiS0", 0.0);
    n0s0.fixed.noise_phase = 0.0;
    n0spi.fixed.noise_phase = 0.0;
    npis0.fixed.noise_phase = kPi;
    d.conditions = {n0s0, n0spi, npis0};
    d.table1_params = row(0.97, 0.38, 0.76);
    d.table1_r_squared = 0.91;
    defs.push_back(std::move(d));
  }
  return defs;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t row, std::string_view source) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw DataError(std::string(source) + ": row " + std::to_string(row) + ": bad number '" + s +
                    "'");
  }
  return v;
}

}  // namespace

const ConditionVariant* ExperimentDef::find_condition(std::string_view label) const {
  for (const auto& c : conditions) {
    if (c.label == label) return &c;
  }
  return nullptr;
}

ConditionPair ExperimentDef::build(const ConditionVariant& condition, double x) const {
  return build_condition(study, x * x_to_si, condition.fixed);
}

const std::vector<ExperimentDef>& builtin_experiments() {
  static const std::vector<ExperimentDef> defs = make_experiments();
  return defs;
}

const ExperimentDef& find_experiment(std::string_view name) {
  const auto study = parse_study(name);
  if (study) {
    for (const auto& d : builtin_experiments()) {
      if (d.study == *study) return d;
    }
  }
  throw ValidationError("unknown experiment '" + std::string(name) + "'");
}

DetectionParams global_params() { return row(0.96, 0.40, 0.74); }

ParamSet table1_param_set() {
  ParamSet set;
  for (const auto& d : builtin_experiments()) set.emplace(d.name, d.table1_params);
  return set;
}

ParamSet uniform_param_set(const DetectionParams& params) {
  ParamSet set;
  for (const auto& d : builtin_experiments()) {
    DetectionParams p = params;
    if (d.ordinate == Ordinate::DeltaRho) p.sigma_mon.reset();
    set.emplace(d.name, p);
  }
  return set;
}

DetectionParams params_for(const ParamSet& set, const ExperimentDef& def) {
  const auto it = set.find(def.name);
  if (it == set.end()) throw ValidationError("no parameters for experiment " + def.name);
  return it->second;
}

std::string_view ordinate_units(Ordinate ordinate) {
  return ordinate == Ordinate::DeltaRho ? "delta_rho" : "db_snr";
}

DetectionParams condition_params(const DetectionParams& params, const ConditionVariant& c) {
  DetectionParams p = params;
  if (c.dprime_target) p.dprime_target = *c.dprime_target;
  return p;
}

ExperimentPoint evaluate_point(const ExperimentDef& def, const ConditionVariant& condition,
                               double x, const DetectionParams& params, const RunOptions& opts) {
  ExperimentPoint pt{def.name, condition.label, x, {}};
  const PreparedCondition prepared(def.build(condition, x), opts.filter, opts.quadrature);
  try {
    pt.result = solve_threshold(prepared, condition_params(params, condition), opts.solver);
  } catch (const NoThreshold& e) {
    pt.result.error = e.what();
  }
  pt.result.sweep_value = x;
  return pt;
}

std::vector<ExperimentPoint> run_experiment(const ExperimentDef& def, const DetectionParams& params,
                                            const RunOptions& opts) {
  return run_experiment(def, def.sweep, params, opts);
}

std::vector<ExperimentPoint> run_experiment(const ExperimentDef& def, std::span<const double> sweep,
                                            const DetectionParams& params,
                                            const RunOptions& opts) {
  validate(params);
  const std::size_t nx = sweep.size();
  std::vector<ExperimentPoint> out(def.conditions.size() * nx);
  parallel_for(out.size(), opts.jobs, [&](std::size_t i) {
    out[i] = evaluate_point(def, def.conditions[i / nx], sweep[i % nx], params, opts);
  });
  return out;
}

std::vector<DigitizedDatum> ingest_data(std::istream& in, std::string_view source) {
  std::string line;
  if (!std::getline(in, line)) return {};
  const auto header = split_csv_line(line);
  const std::vector<std::string> expected = {"experiment", "condition", "x", "y", "units"};
  if (header != expected) {
    throw DataError(std::string(source) + ": header must be experiment,condition,x,y,units");
  }
  std::vector<DigitizedDatum> rows;
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    const auto cells = split_csv_line(line);
    auto fail = [&](const std::string& what) {
      throw DataError(std::string(source) + ": row " + std::to_string(row_no) + ": " + what);
    };
    if (cells.size() != 5) fail("expected 5 fields, got " + std::to_string(cells.size()));
    const auto study = parse_study(cells[0]);
    if (!study) fail("unknown experiment '" + cells[0] + "'");
    const ExperimentDef& def = find_experiment(cells[0]);
    if (!def.find_condition(cells[1])) {
      fail("unknown condition '" + cells[1] + "' for " + def.name);
    }
    if (cells[4] != ordinate_units(def.ordinate)) {
      fail("units '" + cells[4] + "' do not match " + std::string(ordinate_units(def.ordinate)));
    }
    rows.push_back({def.name, cells[1], parse_double(cells[2], row_no, source),
                    parse_double(cells[3], row_no, source), cells[4]});
  }
  return rows;
}

std::vector<DigitizedDatum> ingest_data(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return ingest_data(in, path.string());
}

std::vector<DigitizedDatum> ingest_data_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<DigitizedDatum> all;
  for (const auto& f : files) {
    auto rows = ingest_data(f);
    all.insert(all.end(), rows.begin(), rows.end());
  }
  return all;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("BINMODEL_DATA_DIR"); env && *env) return env;
  return BINMODEL_DEFAULT_DATA_DIR;
}

Report build_report(std::span<const ExperimentDef> defs, const ParamSet& params,
                    std::span<const DigitizedDatum> data, const RunOptions& opts) {
  Report report;
  std::vector<double> pooled_obs, pooled_pred;
  for (const auto& def : defs) {
    const DetectionParams p = params_for(params, def);
    for (const auto& pt : run_experiment(def, p, opts)) {
      ReportRow r{def.name, pt.condition, pt.x, std::nullopt, std::nullopt};
      if (pt.result.error.empty()) r.y_model = pt.result.threshold;
      report.rows.push_back(r);
    }

    std::vector<const DigitizedDatum*> mine;
    for (const auto& d : data) {
      if (d.experiment == def.name) mine.push_back(&d);
    }
    std::vector<ReportRow> at_data(mine.size());
    parallel_for(mine.size(), opts.jobs, [&](std::size_t i) {
      const auto* d = mine[i];
      const ConditionVariant* c = def.find_condition(d->condition);
      if (!c) throw DataError("unknown condition " + d->condition);
      const auto pt = evaluate_point(def, *c, d->x, p, opts);
      at_data[i] = {def.name, d->condition, d->x, std::nullopt, d->y};
      if (pt.result.error.empty()) at_data[i].y_model = pt.result.threshold;
    });

    ExperimentSummary s{def.name, std::nullopt, mine.size(), {}};
    std::vector<double> obs, pred;
    for (const auto& r : at_data) {
      report.rows.push_back(r);
      report.scatter.push_back(r);
      if (r.y_model) {
        obs.push_back(*r.y_data);
        pred.push_back(*r.y_model);
      }
    }
    if (mine.empty()) {
      s.notice = "no data";
    } else if (obs.size() < 2) {
      s.notice = "too few points with a model threshold";
    } else {
      try {
        s.r_squared = r_squared(obs, pred);
      } catch (const UndefinedRSquared& e) {
        s.notice = e.what();
      }
      if (obs.size() < mine.size()) s.notice = "some points have no model threshold";
      if (def.ordinate == Ordinate::SnrDb) {
        pooled_obs.insert(pooled_obs.end(), obs.begin(), obs.end());
        pooled_pred.insert(pooled_pred.end(), pred.begin(), pred.end());
      }
    }
    report.summary.push_back(s);
  }
  report.pooled_points = pooled_obs.size();
  if (pooled_obs.size() >= 2) {
    try {
      report.pooled_r_squared = r_squared(pooled_obs, pooled_pred);
    } catch (const UndefinedRSquared&) {
    }
  }
  return report;
}

void write_experiment_csv(std::span<const ExperimentPoint> points, std::ostream& out) {
  out << "experiment,condition,x,y_model\n";
  for (const auto& p : points) {
    out << p.experiment << ',' << p.condition << ',' << format_number(p.x) << ','
        << (p.result.error.empty() ? format_number(p.result.threshold) : std::string{}) << '\n';
  }
}

void write_report(const Report& report, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto open = [&](const std::string& name) {
    std::ofstream f(out_dir / name);
    if (!f) throw ValidationError("cannot write " + (out_dir / name).string());
    return f;
  };
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string{}; };

  std::set<std::string> names;
  for (const auto& s : report.summary) names.insert(s.experiment);
  for (const auto& name : names) {
    auto f = open(name + ".csv");
    f << "experiment,condition,x,y_model,y_data\n";
    for (const auto& r : report.rows) {
      if (r.experiment != name) continue;
      f << r.experiment << ',' << r.condition << ',' << format_number(r.x) << ',' << opt(r.y_model)
        << ',' << opt(r.y_data) << '\n';
    }
  }
  {
    auto f = open("summary.csv");
    f << "experiment,r_squared,n_points\n";
    for (const auto& s : report.summary) {
      f << s.experiment << ',' << opt(s.r_squared) << ',' << s.n_points << '\n';
    }
    f << "pooled," << opt(report.pooled_r_squared) << ',' << report.pooled_points << '\n';
  }
  {
    auto f = open("scatter.csv");
    f << "experiment,condition,x,y_data,y_model\n";
    for (const auto& r : report.scatter) {
      f << r.experiment << ',' << r.condition << ',' << format_number(r.x) << ',' << opt(r.y_data)
        << ',' << opt(r.y_model) << '\n';
    }
  }
}

}  // namespace binmodel
