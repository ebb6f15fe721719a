// Copyright 2026 The qdcnot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qdcnot/bloch.hpp"
#include "qdcnot/liouville.hpp"
#include "qdcnot/pulse.hpp"

namespace qdcnot {

/// Scenario description. Times are in units of the time unit and rates in
/// rad per time unit; with the defaults (Omega = 1, T2 = 100) every input is
/// effectively the dimensionless group Omega * t. Areas are in units of pi.
struct ScenarioConfig {
  EvalMode mode = EvalMode::kConsistent;
  Envelope envelope = Envelope::kSquare;

  double phi1_pi = 1.0 / 3.0;
  double phi2_pi = 0.25;
  double flip_pi = 0.5;
  int n_flips = 5;
  /// Physical area = axis_scale * nominal area.
  double axis_scale = 1.0;

  double rabi_01 = 1.0;
  double rabi_12 = 1.0;
  double rabi_23 = 1.0;
  double detuning_01 = 0.0;
  double detuning_12 = 0.0;
  double detuning_23 = 0.0;
  bool zeeman_shift = false;

  double t1 = 100.0;
  double t2 = 100.0;
  double t2_prime = 100.0;
  double regime1_w0 = 0.0;

  /// Gaussian train spacing; 0 selects one window (8 sigma).
  double train_period = 0.0;
  bool reset_coherences = true;

  double dt = 0.005;
  int stride = 20;
  /// Sampling step of area sweeps, in units of pi.
  double area_step_pi = 1.0 / 64.0;
  /// Origin of the fidelity area axis: "zero" or "phi0".
  std::string fidelity_axis = "zero";

  double time_unit_s = 1e-15;

  PerChannel peak_rabis() const { return {rabi_01, rabi_12, rabi_23}; }
  PerChannel detunings() const { return {detuning_01, detuning_12, detuning_23}; }
  DecayTimes decay_times() const { return {t1, t2, t2_prime}; }
  DecayParams decay() const { return DecayParams::from_times(decay_times()); }

  /// Nominal phi0 = phi1 + phi2 (radians).
  double phi0() const;

  /// Sequence with the axis scale applied to every area.
  RegimeSchedule schedule(Envelope regime3_shape) const;
  RegimeSchedule schedule() const { return schedule(envelope); }
};

/// Parse or validation failure; what() lists one diagnostic per line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> diagnostics);

  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

/// Flat `key = value` document, `#` comments. Unknown keys, malformed
/// values and out-of-range values are all reported with their line number.
/// Numbers accept `a/b` fractions and `inf`.
ScenarioConfig parse_config(std::string_view text, std::string_view source = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);

/// Sets one key from its textual value (same rules as the file format).
void apply_override(ScenarioConfig& config, std::string_view key, std::string_view value);

/// Cross-field checks; throws ConfigError.
void validate(const ScenarioConfig& config);

/// Every key with its effective value, in a fixed order; parses back to an
/// identical config.
std::string serialize(const ScenarioConfig& config);

/// FNV-1a of serialize(config).
std::uint64_t config_hash(const ScenarioConfig& config);

/// Model-validity findings that do not stop a run (strong-field and
/// coherent-regime assumptions).
std::vector<std::string> validity_warnings(const ScenarioConfig& config);

}  // namespace qdcnot
