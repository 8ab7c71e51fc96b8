#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "binmodel/detection.hpp"
#include "binmodel/experiments.hpp"
#include "binmodel/fit.hpp"
#include "binmodel/stimulus.hpp"

namespace binmodel {

// Six significant digits, the precision of every number the CLI and the CSV writers emit.
std::string format_number(double v);

// Condition file:
//   {"family": "robinson1963", "noise_phase": {"type": "constant", "value": 0},
//    "rho_n": 1, "tone_ipd_rad": 3.14159, "bandwidth_hz": 900, "snr_db": -20, "center_hz": 500}
// noise_phase.type is constant (value in rad), waveform_itd or envelope_itd (value in s).
// A missing or null tone_ipd_rad means no tone; a missing snr_db means no tone power.
struct ConditionConfig {
  std::optional<Study> family;
  StimulusSpec spec;
  std::optional<double> snr_db;
};

ConditionConfig condition_from_json(const nlohmann::json& j);
ConditionConfig load_condition(const std::filesystem::path& path);
nlohmann::json to_json(const StimulusSpec& spec);

// Ordinate used when solving a threshold for a config: Δρ for the correlation-change family
// or for tone-free configs, SNR otherwise.
Ordinate config_ordinate(const ConditionConfig& config);
ConditionPair condition_pair(const ConditionConfig& config);

// Parameter object {rho_hat, sigma_bin, sigma_mon?, dprime_target?}; extra keys are ignored.
DetectionParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const DetectionParams& p);
nlohmann::json fit_to_json(const FitResult& fit);

// Resolves --params: "table1", "global", a study name or alias, or a JSON file holding one
// parameter object (with an optional "experiment" key) or an array of them.
ParamSet resolve_param_set(std::string_view spec);

}  // namespace binmodel
