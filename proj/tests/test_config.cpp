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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "qdcnot/config.hpp"

using namespace qdcnot;
using std::numbers::pi;

namespace {

std::vector<std::string> diagnostics_of(std::string_view text) {
  try {
    parse_config(text, "s.cfg");
  } catch (const ConfigError& e) {
    return e.diagnostics();
  }
  return {};
}

bool contains(const std::vector<std::string>& lines, std::string_view needle) {
  for (const auto& l : lines) {
    if (l.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("defaults describe the reference scenario") {
  const ScenarioConfig c = parse_config("");
  CHECK(c.phi1_pi == doctest::Approx(1.0 / 3));
  CHECK(c.phi2_pi == doctest::Approx(0.25));
  CHECK(c.phi0() == doctest::Approx(pi / 3 + pi / 4));
  CHECK(c.detuning_01 == 0.0);
  CHECK(c.detuning_12 == 0.0);
  CHECK(c.detuning_23 == 0.0);
  CHECK(c.rabi_01 * c.t2 == doctest::Approx(100.0));
  CHECK(c.mode == EvalMode::kConsistent);
  CHECK(c.axis_scale == 1.0);
  CHECK(c.n_flips == 5);
  CHECK_NOTHROW(validate(c));
  CHECK(validity_warnings(c).empty());
}

TEST_CASE("values, comments and fractions") {
  const ScenarioConfig c = parse_config(
      "# scenario\n"
      "phi1_pi = 1/2   # half\n"
      "  envelope=gaussian\n"
      "mode = paper-literal\n"
      "t1 = inf\n"
      "zeeman_shift = true\n"
      "n_flips = 3\n"
      "\n");
  CHECK(c.phi1_pi == 0.5);
  CHECK(c.envelope == Envelope::kGaussian);
  CHECK(c.mode == EvalMode::kPaperLiteral);
  CHECK(std::isinf(c.t1));
  CHECK(c.zeeman_shift);
  CHECK(c.n_flips == 3);
}

TEST_CASE("diagnostics carry the line number") {
  const auto d = diagnostics_of("phi1_pi = 0.5\nbogus = 3\nphi1_pi = 0.2\nt2 = -1\nmode = exact\nn_flips 4\nrabi_01 = x\n");
  REQUIRE(d.size() == 6);
  CHECK(d[0] == "s.cfg:2: unknown key 'bogus'");
  CHECK(d[1] == "s.cfg:3: duplicate key 'phi1_pi'");
  CHECK(d[2] == "s.cfg:4: t2 must be > 0 (or inf)");
  CHECK(contains({d[3]}, "s.cfg:5: mode"));
  CHECK(d[4] == "s.cfg:6: expected 'key = value'");
  CHECK(contains({d[5]}, "s.cfg:7: rabi_01: expected a number"));
}

TEST_CASE("cross-field problems are reported") {
  CHECK(contains(diagnostics_of("dt = 0.5\n"), "exceeds the step limit"));
  CHECK(contains(diagnostics_of("train_period = 0.1\nn_flips = 2\n"), "train period"));
  CHECK(contains(diagnostics_of("stride = 0\n"), "stride must be >= 1"));
  CHECK(contains(diagnostics_of("fidelity_axis = middle\n"), "fidelity_axis"));
  CHECK(contains(diagnostics_of("regime1_w0 = 2\n"), "in [-1, 1]"));
}

TEST_CASE("overrides use the file rules") {
  ScenarioConfig c;
  apply_override(c, "rabi_23", "2");
  CHECK(c.rabi_23 == 2.0);
  apply_override(c, "flip_pi", "1/1");
  CHECK(c.flip_pi == 1.0);
  CHECK_THROWS_AS(apply_override(c, "nope", "1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "dt", "-1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "envelope", "triangle"), ConfigError);
}

TEST_CASE("serialization round trip") {
  ScenarioConfig c;
  c.phi1_pi = 1.0 / 3.0;
  c.t2_prime = kNoDecay;
  c.detuning_12 = -0.123456789012345678;
  c.envelope = Envelope::kGaussian;
  c.fidelity_axis = "phi0";
  c.train_period = 11.0;
  const std::string text = serialize(c);
  const ScenarioConfig back = parse_config(text);
  CHECK(serialize(back) == text);
  CHECK(back.phi1_pi == c.phi1_pi);
  CHECK(back.detuning_12 == c.detuning_12);
  CHECK(config_hash(back) == config_hash(c));
  ScenarioConfig other = c;
  other.dt = 0.004;
  CHECK(config_hash(other) != config_hash(c));
}

TEST_CASE("weak coupling raises a validity warning") {
  ScenarioConfig c;
  c.t2 = 2.0;
  const auto w = validity_warnings(c);
  CHECK(contains(w, "strong-field"));
  CHECK(contains(w, "sigma-minus"));
}

TEST_CASE("the axis scale multiplies every area") {
  ScenarioConfig c;
  c.axis_scale = 2.0;
  const RegimeSchedule s = c.schedule();
  CHECK(s.channel_area(Channel::kSigmaMinus) == doctest::Approx(2 * pi / 3));
  CHECK(s.channel_area(Channel::kMicrowave) == doctest::Approx(pi / 2));
  CHECK(s.channel_area(Channel::kSigmaPlus) == doctest::Approx(5 * pi));
}

TEST_CASE("missing config file") {
  CHECK_THROWS_AS(load_config("/nonexistent/scenario.cfg"), ConfigError);
}
