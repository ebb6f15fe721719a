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

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qdcnot/gate.hpp"

using namespace qdcnot;
using std::numbers::pi;

namespace {

DensityMatrix bell_state() {
  const Eigen::Vector4cd psi = bell_target();
  return DensityMatrix(psi * psi.adjoint());
}

RegimeSchedule flip_schedule(double flip_area, int n_flips, double rabi = 1.0,
                             Envelope shape = Envelope::kSquare) {
  ScheduleOptions o;
  o.flip_area = flip_area;
  return build_cnot_schedule(pi / 3, pi / 4, n_flips, shape, {rabi, rabi, rabi}, {}, {}, o);
}

}  // namespace

TEST_CASE("Bell target") {
  const Eigen::Vector4cd psi = bell_target();
  CHECK(psi(0) == std::complex<double>(1 / std::sqrt(2.0), 0));
  CHECK(psi(3) == std::complex<double>(0, -1 / std::sqrt(2.0)));
  CHECK(psi(1) == 0.0);
  CHECK(psi(2) == 0.0);
}

TEST_CASE("Bell fidelity of reference states") {
  CHECK(bell_fidelity(bell_state()) == doctest::Approx(1.0));
  CHECK(bell_fidelity(DensityMatrix::diagonal({0.25, 0.25, 0.25, 0.25})) == doctest::Approx(0.5));
  const DensityMatrix thirds = DensityMatrix::diagonal({1.0 / 3, 1.0 / 3, 0, 1.0 / 3});
  CHECK(bell_fidelity(thirds) == doctest::Approx(std::sqrt(1.0 / 3)));
  CHECK(bell_overlap(thirds) == doctest::Approx(1.0 / 3));
  CHECK(bell_fidelity(DensityMatrix::basis(0)) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("Bell overlap uses the imaginary part of rho03") {
  DensityMatrix::Matrix m = DensityMatrix::diagonal({0.5, 0, 0, 0.5}).matrix();
  m(0, 3) = {0.0, 0.2};
  m(3, 0) = {0.0, -0.2};
  CHECK(bell_overlap(DensityMatrix(m)) == doctest::Approx(0.7));
  m(0, 3) = {0.0, -0.5};
  m(3, 0) = {0.0, 0.5};
  CHECK(bell_fidelity(DensityMatrix(m)) == doctest::Approx(0.0));
  m(0, 3) = {0.0, -0.6};
  m(3, 0) = {0.0, 0.6};
  CHECK_THROWS_AS(bell_overlap(DensityMatrix(m)), std::domain_error);
}

TEST_CASE("property: the Bell overlap is affine in the state") {
  std::mt19937_64 rng(55);
  for (int n = 0; n < 200; ++n) {
    const DensityMatrix a(oracle::random_density(rng));
    const DensityMatrix b(oracle::random_density(rng));
    const double lambda = oracle::uniform(rng, 0, 1);
    const DensityMatrix mix(lambda * a.matrix() + (1 - lambda) * b.matrix());
    CHECK(bell_overlap(mix) == doctest::Approx(lambda * bell_overlap(a) + (1 - lambda) * bell_overlap(b)));
    const double f = bell_fidelity(a);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
}

TEST_CASE("dominant level") {
  bool tie = true;
  CHECK(dominant_level({0.1, 0.6, 0.2, 0.1}, &tie) == 1);
  CHECK_FALSE(tie);
  CHECK(dominant_level({0.1, 0.4, 0.1, 0.4}, &tie) == 1);
  CHECK(tie);
  CHECK(dominant_level({0.25, 0.25, 0.25, 0.25}) == 0);
}

TEST_CASE("truth table for a full flip") {
  const RegimeSchedule s = flip_schedule(pi, 1);
  const TruthTable table = cnot_truth_table(s, DecayParams::none(), 0.005);
  CHECK(table.rows[0].dominant_output == 0);
  CHECK(table.rows[1].dominant_output == 1);
  CHECK(table.rows[2].dominant_output == 3);
  CHECK(table.rows[3].dominant_output == 2);
  CHECK(table.matches_cnot());
  CHECK(table.rows[2].distribution(3) == doctest::Approx(1.0).epsilon(1e-6));
  for (const auto& row : table.rows) CHECK_FALSE(row.tie);
}

TEST_CASE("a half flip leaves the doublet tied") {
  const TruthTable table = cnot_truth_table(flip_schedule(pi / 2, 1), DecayParams::none(), 0.005);
  CHECK(table.rows[2].tie);
  CHECK_FALSE(table.matches_cnot());
}

TEST_CASE("property: truth table depends on areas, not on drive strength") {
  const TruthTable reference = cnot_truth_table(flip_schedule(pi, 1), DecayParams::none(), 0.005);
  for (double k : {0.25, 0.5, 2.0, 4.0}) {
    const TruthTable scaled = cnot_truth_table(flip_schedule(pi, 1, k), DecayParams::none(), 0.005 / k);
    for (int i = 0; i < 4; ++i) {
      CHECK(scaled.rows[i].dominant_output == reference.rows[i].dominant_output);
      CHECK((scaled.rows[i].distribution - reference.rows[i].distribution).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("tomogram assembly") {
  std::array<DensityMatrix, 4> outputs{DensityMatrix::basis(0), DensityMatrix::basis(1), DensityMatrix::basis(3),
                                       DensityMatrix::diagonal({0, 0, 0.4, 0.6})};
  const Tomogram t = tomogram(outputs, 1.5);
  CHECK(t.pulse_area_tag == 1.5);
  CHECK(t.populations(2, 3) == 1.0);
  CHECK(t.populations(3, 2) == doctest::Approx(0.4));
  CHECK_NOTHROW(t.validate());
  Tomogram bad = t;
  bad.populations(0, 1) = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("tomogram series") {
  const RegimeSchedule s = flip_schedule(pi, 1);
  const double phi0 = pi / 3 + pi / 4;
  const std::vector<double> areas{0.0, phi0, phi0 + pi / 2, phi0 + pi};
  const auto series = tomogram_series(s, DecayParams::none(), 0.005, areas);
  REQUIRE(series.size() == 4);
  CHECK(series[0].populations.isIdentity(1e-12));
  CHECK(series[1].populations.isIdentity(1e-12));
  CHECK(series[2].populations(2, 3) == doctest::Approx(0.5));
  CHECK(series[3].populations(2, 3) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(series[3].populations(3, 2) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(series[3].populations(0, 0) == 1.0);
  CHECK(series[3].populations(1, 1) == 1.0);
  for (const auto& t : series) CHECK_NOTHROW(t.validate());
}

TEST_CASE("property: tomograms repeat every 2 pi of regime-III area") {
  for (Envelope e : {Envelope::kSquare, Envelope::kGaussian}) {
    const RegimeSchedule s = flip_schedule(pi / 2, 7, 1.0, e);
    const double phi0 = pi / 3 + pi / 4;
    std::vector<double> areas;
    for (double a = 0.1; a + 2 * pi <= 7 * pi / 2; a += 0.4) {
      areas.push_back(phi0 + a);
      areas.push_back(phi0 + a + 2 * pi);
    }
    const auto series = tomogram_series(s, DecayParams::none(), 0.005, areas);
    for (std::size_t k = 0; k < series.size(); k += 2) {
      CHECK((series[k].populations - series[k + 1].populations).cwiseAbs().maxCoeff() < 1e-3);
    }
  }
}

TEST_CASE("fidelity without drive stays at the |00> overlap") {
  Pulse off;
  off.peak_rabi = 0.0;
  off.duration = 3.0;
  const RegimeSchedule s = RegimeSchedule::from_pulses({{0.0, off}});
  const std::vector<double> areas{0.0, 0.0, 0.0};
  const FidelitySeries series = fidelity_vs_area(s, DecayParams::none(), 0.01, Envelope::kSquare, areas);
  for (const auto& p : series.points) CHECK(p.fidelity == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("property: fidelity sweep is bounded and continuous") {
  for (Envelope e : {Envelope::kSquare, Envelope::kGaussian}) {
    const RegimeSchedule s = flip_schedule(pi / 2, 5, 1.0, e);
    const double step = pi / 64;
    std::vector<double> areas;
    for (double a = 0.0; a <= s.cumulative_area(s.end()) - 1e-9; a += step) areas.push_back(a);
    const FidelitySeries series =
        fidelity_vs_area(s, DecayParams::from_times({100, 100, 100}), 0.005, e, areas);
    REQUIRE(series.points.size() == areas.size());
    CHECK(series.envelope == e);
    for (std::size_t k = 0; k < series.points.size(); ++k) {
      const auto& p = series.points[k];
      CHECK(p.fidelity <= 1.0);
      CHECK(p.fidelity * p.fidelity == doctest::Approx(p.fidelity_squared));
      // Populations move by at most 1/2 per unit area.
      if (k > 0) CHECK(std::abs(p.fidelity_squared - series.points[k - 1].fidelity_squared) <= step);
    }
    const FidelityPoint best = series.max();
    for (const auto& p : series.points) CHECK(p.fidelity <= best.fidelity);
  }
}
