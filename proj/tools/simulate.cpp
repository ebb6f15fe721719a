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

// simulate: scenario runner and figure data generator.
//
//   simulate run --config <path> --out <dir> [--mode paper-literal|consistent] [--strict]
//   simulate figure <fig2|fig3|fig4|fig6|fig7> --out <dir> [--config <path>] [--key=value ...]
//   simulate validate --config <path>
//
// Exit codes: 0 ok, 1 usage, 2 config error, 3 numerical failure,
// 4 validity warning under --strict.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdcnot/config.hpp"
#include "qdcnot/liouville.hpp"
#include "qdcnot/scenario.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kConfig = 2, kNumerical = 3, kStrict = 4 };

std::filesystem::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SIM_OUT_DIR"); env && *env) return env;
  throw CLI::RequiredError("--out (or SIM_OUT_DIR)");
}

// Leftover `--key=value` or `--key value` tokens become config overrides.
void apply_extras(qdcnot::ScenarioConfig& config, const std::vector<std::string>& extras) {
  std::vector<std::string> problems;
  for (std::size_t k = 0; k < extras.size(); ++k) {
    std::string token = extras[k];
    if (token.rfind("--", 0) != 0) {
      problems.push_back("unexpected argument '" + token + "'");
      continue;
    }
    token.erase(0, 2);
    std::string key;
    std::string value;
    if (const auto eq = token.find('='); eq != std::string::npos) {
      key = token.substr(0, eq);
      value = token.substr(eq + 1);
    } else if (k + 1 < extras.size()) {
      key = token;
      value = extras[++k];
    } else {
      problems.push_back("override --" + token + " has no value");
      continue;
    }
    try {
      qdcnot::apply_override(config, key, value);
    } catch (const qdcnot::ConfigError& e) {
      for (const auto& d : e.diagnostics()) problems.push_back("--" + key + ": " + d);
    }
  }
  if (!problems.empty()) throw qdcnot::ConfigError(problems);
}

void report(const qdcnot::CommandResult& result) {
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& f : result.files) std::cout << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Four-level quantum-dot CNOT simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  std::string mode;
  bool strict = false;
  std::string figure;

  auto* run = app.add_subcommand("run", "Simulate one scenario and write traces and reports");
  run->add_option("--config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory (default $SIM_OUT_DIR)");
  run->add_option("--mode", mode, "Closed-form mode")->check(CLI::IsMember({"paper-literal", "consistent"}));
  run->add_flag("--strict", strict, "Treat validity warnings as fatal");

  auto* fig = app.add_subcommand("figure", "Write plot data for one figure");
  fig->add_option("name", figure, "fig2, fig3, fig4, fig6 or fig7")->required();
  fig->add_option("--out", out, "Output directory (default $SIM_OUT_DIR)");
  fig->add_option("--config", config_path, "Base scenario file")->check(CLI::ExistingFile);
  fig->add_flag("--strict", strict, "Treat validity warnings as fatal");
  fig->allow_extras();

  auto* val = app.add_subcommand("validate", "Check a scenario file");
  val->add_option("--config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    qdcnot::ScenarioConfig config;
    if (!config_path.empty()) config = qdcnot::load_config(config_path);

    if (*val) {
      qdcnot::validate(config);
      for (const auto& w : qdcnot::validity_warnings(config)) std::cerr << "warning: " << w << '\n';
      std::cout << "ok " << config_path << '\n';
      return kOk;
    }

    if (*run) {
      if (!mode.empty()) qdcnot::apply_override(config, "mode", mode);
      qdcnot::validate(config);
      if (strict && !qdcnot::validity_warnings(config).empty()) {
        for (const auto& w : qdcnot::validity_warnings(config)) std::cerr << "error: " << w << '\n';
        return kStrict;
      }
      report(qdcnot::run_scenario(config, output_dir(out)));
      return kOk;
    }

    if (!qdcnot::is_figure_name(figure)) {
      std::cerr << "unknown figure '" << figure << "' (expected fig2, fig3, fig4, fig6 or fig7)\n";
      return kUsage;
    }
    apply_extras(config, fig->remaining());
    qdcnot::validate(config);
    if (strict && !qdcnot::validity_warnings(config).empty()) {
      for (const auto& w : qdcnot::validity_warnings(config)) std::cerr << "error: " << w << '\n';
      return kStrict;
    }
    report(qdcnot::figure_command(figure, config, output_dir(out)));
    return kOk;
  } catch (const CLI::RequiredError& e) {
    std::cerr << "missing " << e.what() << '\n';
    return kUsage;
  } catch (const qdcnot::ConfigError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << "error: " << d << '\n';
    return kConfig;
  } catch (const qdcnot::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const qdcnot::StepSizeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
}
