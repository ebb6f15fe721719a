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

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qdcnot/config.hpp"

namespace qdcnot {

/// A reference value that the model should reproduce for some axis scale.
struct AxisLandmark {
  std::string description;
  double target = 0.0;
  std::function<double(double)> model;  // model value at a given axis scale
};

struct AxisFit {
  double scale = 1.0;
  double residual = 0.0;  // rms of model - target at `scale`
  std::vector<double> model_values;
};

/// Grid scan over [lo, hi] followed by golden-section refinement.
AxisFit fit_axis_scale(std::span<const AxisLandmark> landmarks, double lo = 0.05, double hi = 4.0);

/// Evaluates every landmark at one scale.
AxisFit evaluate_axis_scale(std::span<const AxisLandmark> landmarks, double scale);

/// Landmarks attached to a figure command (fig2, fig3, fig4, fig6, fig7).
std::vector<AxisLandmark> figure_landmarks(std::string_view figure, const ScenarioConfig& config);

bool is_figure_name(std::string_view name);

/// Named snapshot areas a..h (nominal, radians): start, end of regime I,
/// phi0, then phi0 + k * flip for k = 1..5, limited to the schedule.
std::vector<std::pair<std::string, double>> snapshot_areas(const ScenarioConfig& config);

/// Unreproducible or inconsistent reference landmarks with the nearest
/// value the model reaches.
nlohmann::json discrepancy_report(const ScenarioConfig& config);

struct CommandResult {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

/// Writes effective_config.cfg, trace.csv, tomogram.json, fidelity.csv and
/// discrepancy_report.json into out_dir. On NumericalFailure the partial
/// trace is written before the exception propagates.
CommandResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir);

/// Plot data for one figure. Throws std::invalid_argument for unknown names.
CommandResult figure_command(std::string_view name, const ScenarioConfig& config,
                             const std::filesystem::path& out_dir);

}  // namespace qdcnot
