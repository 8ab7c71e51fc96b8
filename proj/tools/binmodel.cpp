// Command-line front end: coherence, thresholds, experiment batches, fits, reports, IPD
// discrimination and the Monte-Carlo oracle.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <numbers>

#include "binmodel/coherence.hpp"
#include "binmodel/detection.hpp"
#include "binmodel/error.hpp"
#include "binmodel/experiments.hpp"
#include "binmodel/fit.hpp"
#include "binmodel/io.hpp"
#include "binmodel/oracle.hpp"
#include "binmodel/solve.hpp"

using namespace binmodel;
using nlohmann::json;

namespace {

double sig6(double v) { return std::isfinite(v) ? std::stod(format_number(v)) : v; }

json coherence_json(const Coherence& g) {
  return {{"re", sig6(g.real())},
          {"im", sig6(g.imag())},
          {"modulus", sig6(g.modulus())},
          {"arg_rad", sig6(g.argument())},
          {"arg_pi", sig6(g.argument() / std::numbers::pi)}};
}

void print_coherence(const Coherence& g) {
  std::cout << "re       " << format_number(g.real()) << "\n"
            << "im       " << format_number(g.imag()) << "\n"
            << "modulus  " << format_number(g.modulus()) << "\n"
            << "arg      " << format_number(g.argument()) << " rad ("
            << format_number(g.argument() / std::numbers::pi) << " pi)\n";
}

DetectionParams pick_params(const ParamSet& set, const ConditionConfig& config,
                            const std::string& spec) {
  if (config.family) return params_for(set, find_experiment(study_name(*config.family)));
  if (spec == "table1") {
    throw ValidationError("--params table1 needs a 'family' in the condition file");
  }
  return set.begin()->second;
}

std::vector<ExperimentDef> select_experiments(const std::string& name) {
  if (name == "all") return builtin_experiments();
  return {find_experiment(name)};
}

std::vector<DigitizedDatum> load_data(const std::string& dir, bool required) {
  const std::filesystem::path p = dir.empty() ? default_data_dir() : std::filesystem::path(dir);
  if (!std::filesystem::is_directory(p)) {
    if (required) throw DataError("data directory not found: " + p.string());
    return {};
  }
  auto rows = ingest_data_dir(p);
  if (required && rows.empty()) throw DataError("no digitized data in " + p.string());
  return rows;
}

void print_summary(const Report& report, bool as_json) {
  if (as_json) {
    json arr = json::array();
    for (const auto& s : report.summary) {
      arr.push_back({{"experiment", s.experiment},
                     {"r_squared", s.r_squared ? json(sig6(*s.r_squared)) : json(nullptr)},
                     {"n_points", s.n_points},
                     {"notice", s.notice}});
    }
    std::cout << json{{"summary", arr},
                      {"pooled_r_squared", report.pooled_r_squared
                                               ? json(sig6(*report.pooled_r_squared))
                                               : json(nullptr)},
                      {"pooled_points", report.pooled_points}}
                     .dump(2)
              << "\n";
    return;
  }
  std::cout << std::left << std::setw(20) << "experiment" << std::setw(12) << "r_squared"
            << std::setw(10) << "points" << "notice\n";
  for (const auto& s : report.summary) {
    std::cout << std::setw(20) << s.experiment << std::setw(12)
              << (s.r_squared ? format_number(*s.r_squared) : "-") << std::setw(10) << s.n_points
              << s.notice << "\n";
  }
  std::cout << std::setw(20) << "pooled" << std::setw(12)
            << (report.pooled_r_squared ? format_number(*report.pooled_r_squared) : "-")
            << std::setw(10) << report.pooled_points << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex-valued interaural coherence model of binaural unmasking"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable output");
  unsigned jobs = default_jobs();
  app.add_option("--jobs", jobs, "Worker threads for batch runs")->check(CLI::PositiveNumber);

  // coherence
  auto* coh = app.add_subcommand("coherence", "Analytic complex coherence of a condition");
  std::string coh_config;
  std::optional<double> coh_snr;
  coh->add_option("--config", coh_config, "Condition JSON")->required()->check(CLI::ExistingFile);
  coh->add_option("--snr-db", coh_snr, "Override the tone SNR (dB)");

  // threshold
  auto* thr = app.add_subcommand("threshold", "Detection threshold of a condition");
  std::string thr_config, thr_params = "table1";
  std::optional<double> thr_dprime;
  thr->add_option("--config", thr_config, "Condition JSON")->required()->check(CLI::ExistingFile);
  thr->add_option("--params", thr_params, "table1 | global | study name | params JSON");
  thr->add_option("--dprime", thr_dprime, "Target sensitivity index");

  // experiment run
  auto* exp = app.add_subcommand("experiment", "Built-in experiments");
  exp->require_subcommand(1);
  auto* exp_run = exp->add_subcommand("run", "Simulate thresholds for one or all experiments");
  std::string exp_name, exp_params = "table1", exp_out = "results", exp_data;
  exp_run->add_option("name", exp_name, "Experiment name or 'all'")->required();
  exp_run->add_option("--params", exp_params, "table1 | global | study name | params JSON");
  exp_run->add_option("--out", exp_out, "Output directory");
  exp_run->add_option("--data", exp_data, "Digitized data directory (optional)");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit model parameters to digitized data");
  std::string fit_name, fit_out, fit_data;
  fit->add_option("name", fit_name, "Experiment name, 'all' or 'global'")->required();
  fit->add_option("--data", fit_data, "Digitized data directory");
  fit->add_option("--out", fit_out, "Write the parameter JSON here instead of stdout");

  // report
  auto* rep = app.add_subcommand("report", "R^2 report against digitized data");
  std::string rep_params = "table1", rep_out = "results", rep_data;
  rep->add_option("--params", rep_params, "table1 | global | study name | params JSON");
  rep->add_option("--out", rep_out, "Output directory");
  rep->add_option("--data", rep_data, "Digitized data directory");

  // ipd-threshold
  auto* ipd = app.add_subcommand("ipd-threshold", "IPD discrimination threshold");
  std::string ipd_params = "table1";
  std::optional<double> ipd_rho, ipd_sigma;
  double ipd_dprime = 1.0;
  ipd->add_option("--params", ipd_params, "table1 | global | study name | params JSON");
  ipd->add_option("--rho-hat", ipd_rho, "Explicit rho_hat");
  ipd->add_option("--sigma-bin", ipd_sigma, "Explicit sigma_bin");
  ipd->add_option("--dprime", ipd_dprime, "Binaural sensitivity index at threshold");

  // oracle compare
  auto* orc = app.add_subcommand("oracle", "Monte-Carlo waveform oracle");
  orc->require_subcommand(1);
  auto* orc_cmp = orc->add_subcommand("compare", "Compare analytic and empirical coherence");
  std::string orc_config, orc_csv;
  TokenEnsemble ens;
  orc_cmp->add_option("--config", orc_config, "Condition JSON")->required()->check(
      CLI::ExistingFile);
  orc_cmp->add_option("--tokens", ens.n_tokens, "Number of tokens");
  orc_cmp->add_option("--duration", ens.duration, "Token duration (s)");
  orc_cmp->add_option("--seed", ens.seed, "Random seed");
  orc_cmp->add_option("--sample-rate", ens.sample_rate, "Sample rate (Hz)");
  orc_cmp->add_option("--csv", orc_csv, "Dump per-token coherence to this CSV file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  RunOptions run;
  run.jobs = jobs;

  try {
    if (*coh) {
      ConditionConfig c = load_condition(coh_config);
      if (coh_snr) c.spec.snr = db_to_linear(*coh_snr);
      const Coherence g = coherence_of(c.spec, run.filter);
      if (as_json) {
        std::cout << coherence_json(g).dump(2) << "\n";
      } else {
        print_coherence(g);
      }
    } else if (*thr) {
      const ConditionConfig c = load_condition(thr_config);
      DetectionParams p = pick_params(resolve_param_set(thr_params), c, thr_params);
      if (thr_dprime) p.dprime_target = *thr_dprime;
      const PreparedCondition prepared(condition_pair(c), run.filter);
      if (prepared.ordinate() == Ordinate::DeltaRho) p.sigma_mon.reset();
      const ThresholdResult r = solve_threshold(prepared, p);
      const std::string unit = prepared.ordinate() == Ordinate::DeltaRho ? "delta_rho" : "dB";
      if (as_json) {
        std::cout << json{{"threshold", sig6(r.threshold)},
                          {"units", std::string(ordinate_units(prepared.ordinate()))},
                          {"d_bin", sig6(r.d_bin)},
                          {"d_mon", sig6(r.d_mon)},
                          {"iterations", r.iterations},
                          {"converged", r.converged},
                          {"clamped", r.clamped}}
                         .dump(2)
                  << "\n";
      } else {
        std::cout << "threshold  " << format_number(r.threshold) << " " << unit
                  << (r.clamped ? " (clamped at bracket edge)" : "") << "\n"
                  << "d_bin      " << format_number(r.d_bin) << "\n"
                  << "d_mon      " << format_number(r.d_mon) << "\n";
      }
    } else if (*exp_run) {
      const ParamSet params = resolve_param_set(exp_params);
      const auto defs = select_experiments(exp_name);
      const auto data = load_data(exp_data, !exp_data.empty());
      const Report report = build_report(defs, params, data, run);
      write_report(report, exp_out);
      print_summary(report, as_json);
    } else if (*fit) {
      const auto data = load_data(fit_data, true);
      FitOptions opts;
      opts.run = run;
      json out;
      auto record = [](const FitResult& r) {
        if (!r.converged) {
          std::cerr << "warning: " << r.experiment
                    << ": simplex did not converge within the evaluation budget\n";
        }
        return fit_to_json(r);
      };
      if (fit_name == "global") {
        out = record(fit_global(builtin_experiments(), data, opts));
      } else if (fit_name == "all") {
        out = json::array();
        for (const auto& def : builtin_experiments()) {
          const bool has = std::any_of(data.begin(), data.end(),
                                       [&](const auto& d) { return d.experiment == def.name; });
          if (has) out.push_back(record(fit_params(def, data, opts)));
        }
      } else {
        out = record(fit_params(find_experiment(fit_name), data, opts));
      }
      if (fit_out.empty()) {
        std::cout << out.dump(2) << "\n";
      } else {
        std::ofstream f(fit_out);
        if (!f) throw ValidationError("cannot write " + fit_out);
        f << out.dump(2) << "\n";
      }
    } else if (*rep) {
      const ParamSet params = resolve_param_set(rep_params);
      const auto data = load_data(rep_data, true);
      const Report report = build_report(builtin_experiments(), params, data, run);
      write_report(report, rep_out);
      print_summary(report, as_json);
    } else if (*ipd) {
      std::vector<std::pair<std::string, DetectionParams>> rows;
      if (ipd_rho || ipd_sigma) {
        if (!ipd_rho || !ipd_sigma) {
          throw ValidationError("--rho-hat and --sigma-bin must be given together");
        }
        rows.push_back({"custom", DetectionParams{*ipd_rho, *ipd_sigma, std::nullopt, 1.0}});
      } else if (ipd_params == "global") {
        rows.push_back({"global", global_params()});
      } else if (ipd_params == "table1") {
        for (const auto& def : builtin_experiments()) rows.push_back({def.name, def.table1_params});
      } else if (parse_study(ipd_params)) {
        const auto& def = find_experiment(ipd_params);
        rows.push_back({def.name, def.table1_params});
      } else {
        const ParamSet set = resolve_param_set(ipd_params);
        for (const auto& [name, p] : set) rows.push_back({name, p});
      }
      json arr = json::array();
      std::vector<double> us;
      for (auto& [name, p] : rows) {
        p.dprime_target = ipd_dprime;
        const auto t = ipd_discrimination_threshold(p);
        us.push_back(t.microseconds);
        arr.push_back({{"name", name}, {"rad", sig6(t.radians)}, {"us", sig6(t.microseconds)}});
        if (!as_json) {
          std::cout << std::left << std::setw(20) << name << std::setw(12)
                    << format_number(t.radians) << " rad  " << format_number(t.microseconds)
                    << " us\n";
        }
      }
      if (us.size() > 1) {
        std::sort(us.begin(), us.end());
        const std::size_t n = us.size();
        const double median = n % 2 ? us[n / 2] : 0.5 * (us[n / 2 - 1] + us[n / 2]);
        if (!as_json) {
          std::cout << "min " << format_number(us.front()) << " us  max "
                    << format_number(us.back()) << " us  median " << format_number(median)
                    << " us\n";
        }
        if (as_json) {
          std::cout << json{{"rows", arr},
                            {"min_us", sig6(us.front())},
                            {"max_us", sig6(us.back())},
                            {"median_us", sig6(median)}}
                           .dump(2)
                    << "\n";
        }
      } else if (as_json) {
        std::cout << arr[0].dump(2) << "\n";
      }
    } else if (*orc_cmp) {
      const ConditionConfig c = load_condition(orc_config);
      ens.spec = c.spec;
      CompareOptions opts;
      opts.jobs = jobs;
      const ComparisonRecord rec = compare(ens, run.filter, opts);
      if (!orc_csv.empty()) {
        std::ofstream f(orc_csv);
        if (!f) throw ValidationError("cannot write " + orc_csv);
        f << "token,re,im\n";
        for (std::size_t i = 0; i < rec.empirical.per_token.size(); ++i) {
          f << i << ',' << format_number(rec.empirical.per_token[i].real()) << ','
            << format_number(rec.empirical.per_token[i].imag()) << '\n';
        }
      }
      if (as_json) {
        std::cout << json{{"analytic", coherence_json(rec.analytic)},
                          {"empirical", coherence_json(rec.empirical.gamma)},
                          {"se_re", sig6(rec.empirical.se_re)},
                          {"se_im", sig6(rec.empirical.se_im)},
                          {"deviation", sig6(rec.deviation)},
                          {"tolerance", sig6(rec.tolerance)},
                          {"pass", rec.pass}}
                         .dump(2)
                  << "\n";
      } else {
        std::cout << "analytic   " << format_number(rec.analytic.real()) << " "
                  << format_number(rec.analytic.imag()) << "i\n"
                  << "empirical  " << format_number(rec.empirical.gamma.real()) << " "
                  << format_number(rec.empirical.gamma.imag()) << "i  (se "
                  << format_number(rec.empirical.se_re) << ", "
                  << format_number(rec.empirical.se_im) << ")\n"
                  << "deviation  " << format_number(rec.deviation) << "  tolerance "
                  << format_number(rec.tolerance) << "\n"
                  << (rec.pass ? "PASS" : "FAIL") << "\n";
      }
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ComputationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
