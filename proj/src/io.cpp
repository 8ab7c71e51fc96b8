#include "binmodel/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "binmodel/error.hpp"

namespace binmodel {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);
  return buf;
}

namespace {

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ValidationError(std::string("condition: '") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace

ConditionConfig condition_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("condition must be a JSON object");
  ConditionConfig c;
  if (j.contains("family") && !j.at("family").is_null()) {
    const auto name = j.at("family").get<std::string>();
    c.family = parse_study(name);
    if (!c.family) throw ValidationError("unknown family '" + name + "'");
  }
  if (j.contains("noise_phase")) {
    const auto& p = j.at("noise_phase");
    const auto type = p.value("type", std::string("constant"));
    const double value = p.contains("value") ? number(p, "value") : 0.0;
    if (type == "constant") {
      c.spec.noise_phase = ConstantPhase{value};
    } else if (type == "waveform_itd") {
      c.spec.noise_phase = WaveformItd{value};
    } else if (type == "envelope_itd") {
      c.spec.noise_phase = EnvelopeItd{value};
    } else {
      throw ValidationError("unknown noise_phase type '" + type + "'");
    }
  }
  if (j.contains("rho_n")) c.spec.rho_n = number(j, "rho_n");
  if (j.contains("tone_ipd_rad") && !j.at("tone_ipd_rad").is_null()) {
    c.spec.tone_ipd = number(j, "tone_ipd_rad");
  }
  if (j.contains("bandwidth_hz")) c.spec.bandwidth_hz = number(j, "bandwidth_hz");
  if (j.contains("center_hz")) c.spec.center_hz = number(j, "center_hz");
  if (j.contains("snr_db") && !j.at("snr_db").is_null()) {
    c.snr_db = number(j, "snr_db");
    c.spec.snr = std::pow(10.0, *c.snr_db / 10.0);
  }
  validate(c.spec);
  return c;
}

ConditionConfig load_condition(const std::filesystem::path& path) {
  return condition_from_json(read_json(path));
}

json to_json(const StimulusSpec& spec) {
  json j;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ConstantPhase>) {
          j["noise_phase"] = {{"type", "constant"}, {"value", p.phi}};
        } else if constexpr (std::is_same_v<P, WaveformItd>) {
          j["noise_phase"] = {{"type", "waveform_itd"}, {"value", p.dt}};
        } else {
          j["noise_phase"] = {{"type", "envelope_itd"}, {"value", p.dt}};
        }
      },
      spec.noise_phase);
  j["rho_n"] = spec.rho_n;
  j["tone_ipd_rad"] = spec.tone_ipd ? json(*spec.tone_ipd) : json(nullptr);
  j["bandwidth_hz"] = spec.bandwidth_hz;
  j["center_hz"] = spec.center_hz;
  if (spec.snr > 0.0) j["snr_db"] = 10.0 * std::log10(spec.snr);
  return j;
}

Ordinate config_ordinate(const ConditionConfig& config) {
  if (config.family == Study::Pollack1959 || !config.spec.has_tone()) return Ordinate::DeltaRho;
  return Ordinate::SnrDb;
}

ConditionPair condition_pair(const ConditionConfig& config) {
  ConditionPair pair;
  pair.ordinate = config_ordinate(config);
  pair.reference = config.spec;
  pair.reference.tone_ipd.reset();
  pair.reference.snr = 0.0;
  pair.target = config.spec;
  pair.target.snr = 0.0;
  if (pair.ordinate == Ordinate::DeltaRho) pair.target.tone_ipd.reset();
  return pair;
}

DetectionParams params_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("parameters must be a JSON object");
  DetectionParams p;
  auto get = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
      throw ValidationError(std::string("parameters: '") + key + "' must be a number");
    }
    return j.at(key).get<double>();
  };
  p.rho_hat = get("rho_hat");
  p.sigma_bin = get("sigma_bin");
  if (j.contains("sigma_mon") && !j.at("sigma_mon").is_null()) p.sigma_mon = get("sigma_mon");
  if (j.contains("dprime_target")) p.dprime_target = get("dprime_target");
  validate(p);
  return p;
}

json params_to_json(const DetectionParams& p) {
  return {{"rho_hat", p.rho_hat},
          {"sigma_bin", p.sigma_bin},
          {"sigma_mon", p.sigma_mon ? json(*p.sigma_mon) : json(nullptr)},
          {"dprime_target", p.dprime_target}};
}

json fit_to_json(const FitResult& fit) {
  json j = params_to_json(fit.params);
  j["experiment"] = fit.experiment;
  j["r_squared"] = fit.r_squared;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  return j;
}

ParamSet resolve_param_set(std::string_view spec) {
  if (spec == "table1") return table1_param_set();
  if (spec == "global") return uniform_param_set(global_params());
  if (parse_study(spec)) {
    const auto& def = find_experiment(spec);
    return uniform_param_set(def.table1_params);
  }
  const std::filesystem::path path{std::string(spec)};
  if (!std::filesystem::exists(path)) {
    throw ValidationError("--params: not a parameter set name or file: " + std::string(spec));
  }
  const json j = read_json(path);
  ParamSet set = table1_param_set();
  auto apply = [&](const json& obj) {
    const DetectionParams p = params_from_json(obj);
    const std::string exp = obj.value("experiment", std::string("global"));
    if (exp == "global" || exp == "all") {
      set = uniform_param_set(p);
    } else {
      set[find_experiment(exp).name] = p;
    }
  };
  if (j.is_array()) {
    for (const auto& obj : j) apply(obj);
  } else {
    apply(j);
  }
  return set;
}

}  // namespace binmodel
