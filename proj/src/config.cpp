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

#include "qdcnot/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

namespace qdcnot {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_plain_number(std::string_view s) {
  s = trim(s);
  if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("expected a number, got '" + std::string(s) + "'");
  }
  return value;
}

double parse_number(std::string_view s) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_plain_number(s);
  const double num = parse_plain_number(s.substr(0, slash));
  const double den = parse_plain_number(s.substr(slash + 1));
  if (den == 0.0) throw std::invalid_argument("division by zero in '" + std::string(s) + "'");
  return num / den;
}

int parse_int(std::string_view s) {
  s = trim(s);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
  }
  return value;
}

bool parse_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(s) + "'");
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

struct Field {
  std::string_view name;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<std::string(const ScenarioConfig&)> check;  // empty string when fine
};

template <typename Pred>
Field number_field(std::string_view name, double ScenarioConfig::*member, Pred ok, std::string_view rule) {
  return {name, [member](ScenarioConfig& c, std::string_view v) { c.*member = parse_number(v); },
          [member](const ScenarioConfig& c) { return format_number(c.*member); },
          [member, ok, rule, name](const ScenarioConfig& c) {
            const double v = c.*member;
            return (!std::isnan(v) && ok(v)) ? std::string() : fmt::format("{} must be {}", name, rule);
          }};
}

auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
auto positive_or_inf = [](double v) { return v > 0.0; };
auto finite = [](double v) { return std::isfinite(v); };
auto non_negative = [](double v) { return v >= 0.0 && std::isfinite(v); };

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"mode",
                 [](ScenarioConfig& c, std::string_view v) { c.mode = eval_mode_from_string(trim(v)); },
                 [](const ScenarioConfig& c) { return std::string(to_string(c.mode)); },
                 [](const ScenarioConfig&) { return std::string(); }});
    f.push_back({"envelope",
                 [](ScenarioConfig& c, std::string_view v) { c.envelope = envelope_from_string(trim(v)); },
                 [](const ScenarioConfig& c) { return std::string(to_string(c.envelope)); },
                 [](const ScenarioConfig&) { return std::string(); }});
    f.push_back(number_field("phi1_pi", &ScenarioConfig::phi1_pi, positive, "> 0"));
    f.push_back(number_field("phi2_pi", &ScenarioConfig::phi2_pi, positive, "> 0"));
    f.push_back(number_field("flip_pi", &ScenarioConfig::flip_pi, positive, "> 0"));
    f.push_back({"n_flips", [](ScenarioConfig& c, std::string_view v) { c.n_flips = parse_int(v); },
                 [](const ScenarioConfig& c) { return std::to_string(c.n_flips); },
                 [](const ScenarioConfig& c) {
                   return c.n_flips >= 0 ? std::string() : std::string("n_flips must be >= 0");
                 }});
    f.push_back(number_field("axis_scale", &ScenarioConfig::axis_scale, positive, "> 0"));
    f.push_back(number_field("rabi_01", &ScenarioConfig::rabi_01, positive, "> 0"));
    f.push_back(number_field("rabi_12", &ScenarioConfig::rabi_12, positive, "> 0"));
    f.push_back(number_field("rabi_23", &ScenarioConfig::rabi_23, positive, "> 0"));
    f.push_back(number_field("detuning_01", &ScenarioConfig::detuning_01, finite, "finite"));
    f.push_back(number_field("detuning_12", &ScenarioConfig::detuning_12, finite, "finite"));
    f.push_back(number_field("detuning_23", &ScenarioConfig::detuning_23, finite, "finite"));
    f.push_back({"zeeman_shift",
                 [](ScenarioConfig& c, std::string_view v) { c.zeeman_shift = parse_bool(v); },
                 [](const ScenarioConfig& c) { return std::string(c.zeeman_shift ? "true" : "false"); },
                 [](const ScenarioConfig&) { return std::string(); }});
    f.push_back(number_field("t1", &ScenarioConfig::t1, positive_or_inf, "> 0 (or inf)"));
    f.push_back(number_field("t2", &ScenarioConfig::t2, positive_or_inf, "> 0 (or inf)"));
    f.push_back(number_field("t2_prime", &ScenarioConfig::t2_prime, positive_or_inf, "> 0 (or inf)"));
    f.push_back(number_field("regime1_w0", &ScenarioConfig::regime1_w0,
                             [](double v) { return v >= -1.0 && v <= 1.0; }, "in [-1, 1]"));
    f.push_back(number_field("train_period", &ScenarioConfig::train_period, non_negative, ">= 0"));
    f.push_back({"reset_coherences",
                 [](ScenarioConfig& c, std::string_view v) { c.reset_coherences = parse_bool(v); },
                 [](const ScenarioConfig& c) { return std::string(c.reset_coherences ? "true" : "false"); },
                 [](const ScenarioConfig&) { return std::string(); }});
    f.push_back(number_field("dt", &ScenarioConfig::dt, positive, "> 0"));
    f.push_back({"stride", [](ScenarioConfig& c, std::string_view v) { c.stride = parse_int(v); },
                 [](const ScenarioConfig& c) { return std::to_string(c.stride); },
                 [](const ScenarioConfig& c) {
                   return c.stride >= 1 ? std::string() : std::string("stride must be >= 1");
                 }});
    f.push_back(number_field("area_step_pi", &ScenarioConfig::area_step_pi, positive, "> 0"));
    f.push_back({"fidelity_axis",
                 [](ScenarioConfig& c, std::string_view v) {
                   const auto s = trim(v);
                   if (s != "zero" && s != "phi0") {
                     throw std::invalid_argument("fidelity_axis must be zero or phi0");
                   }
                   c.fidelity_axis = std::string(s);
                 },
                 [](const ScenarioConfig& c) { return c.fidelity_axis; },
                 [](const ScenarioConfig&) { return std::string(); }});
    f.push_back(number_field("time_unit_s", &ScenarioConfig::time_unit_s, positive, "> 0"));
    return f;
  }();
  return table;
}

const Field* find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.name == key) return &f;
  }
  return nullptr;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += '\n';
    out += l;
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : std::runtime_error(join_lines(diagnostics)), diagnostics_(std::move(diagnostics)) {}

double ScenarioConfig::phi0() const { return (phi1_pi + phi2_pi) * std::numbers::pi; }

RegimeSchedule ScenarioConfig::schedule(Envelope regime3_shape) const {
  ScheduleOptions opts;
  opts.flip_area = axis_scale * flip_pi * std::numbers::pi;
  if (train_period > 0.0) opts.train_period = train_period;
  opts.microwave_zeeman_shift = zeeman_shift;
  return build_cnot_schedule(axis_scale * phi1_pi * std::numbers::pi, axis_scale * phi2_pi * std::numbers::pi,
                             n_flips, regime3_shape, peak_rabis(), detunings(), decay_times(), opts);
}

void apply_override(ScenarioConfig& config, std::string_view key, std::string_view value) {
  const Field* f = find_field(trim(key));
  if (!f) throw ConfigError({"unknown key '" + std::string(trim(key)) + "'"});
  try {
    f->set(config, value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError({std::string(f->name) + ": " + e.what()});
  }
  if (auto problem = f->check(config); !problem.empty()) throw ConfigError({problem});
}

ScenarioConfig parse_config(std::string_view text, std::string_view source) {
  ScenarioConfig config;
  std::vector<std::string> errors;
  std::vector<std::string_view> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto where = [&] { return fmt::format("{}:{}: ", source, line_no); };
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back(where() + "expected 'key = value'");
      continue;
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const Field* f = find_field(key);
    if (!f) {
      errors.push_back(where() + "unknown key '" + std::string(key) + "'");
      continue;
    }
    if (std::find(seen.begin(), seen.end(), f->name) != seen.end()) {
      errors.push_back(where() + "duplicate key '" + std::string(key) + "'");
      continue;
    }
    seen.push_back(f->name);
    try {
      f->set(config, value);
    } catch (const std::invalid_argument& e) {
      errors.push_back(where() + std::string(key) + ": " + e.what());
      continue;
    }
    if (auto problem = f->check(config); !problem.empty()) errors.push_back(where() + problem);
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  try {
    validate(config);
  } catch (const ConfigError& e) {
    std::vector<std::string> located;
    for (const auto& d : e.diagnostics()) located.push_back(std::string(source) + ": " + d);
    throw ConfigError(std::move(located));
  }
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file " + path.string()});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

void validate(const ScenarioConfig& config) {
  std::vector<std::string> errors;
  for (const auto& f : fields()) {
    if (auto problem = f.check(config); !problem.empty()) errors.push_back(problem);
  }
  if (errors.empty()) {
    try {
      for (Envelope e : {Envelope::kSquare, Envelope::kGaussian}) {
        const RegimeSchedule s = config.schedule(e);
        const double limit = max_time_step(s);
        if (config.dt > limit) {
          errors.push_back(fmt::format("dt = {} exceeds the step limit {} of the {} schedule", config.dt, limit,
                                       to_string(e)));
        }
      }
    } catch (const std::domain_error& e) {
      errors.push_back(e.what());
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
}

std::string serialize(const ScenarioConfig& config) {
  std::string out;
  for (const auto& f : fields()) out += fmt::format("{} = {}\n", f.name, f.get(config));
  return out;
}

std::uint64_t config_hash(const ScenarioConfig& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : serialize(config)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Closed forms assume Omega >> 1/T; a run is flagged below this margin.
constexpr double kStrongFieldMargin = 10.0;

std::vector<std::string> validity_warnings(const ScenarioConfig& config) {
  std::vector<std::string> out;
  const DecayTimes times = config.decay_times();
  const std::array<std::pair<Channel, double>, 3> drives{
      {{Channel::kSigmaMinus, config.rabi_01}, {Channel::kMicrowave, config.rabi_12}, {Channel::kSigmaPlus, config.rabi_23}}};
  for (const auto& [channel, rabi] : drives) {
    const double t = std::min(times.t1, times.dephasing(transition_of(channel)));
    if (!(rabi * t >= kStrongFieldMargin)) {
      out.push_back(fmt::format("strong-field assumption broken on {}: Omega*T = {} < {}", to_string(channel),
                                format_number(rabi * t), format_number(kStrongFieldMargin)));
    }
  }
  for (Envelope e : {Envelope::kSquare, Envelope::kGaussian}) {
    const RegimeSchedule schedule = config.schedule(e);
    for (const auto& w : schedule.warnings()) out.push_back(std::string(to_string(e)) + " schedule: " + w);
  }
  return out;
}

}  // namespace qdcnot
