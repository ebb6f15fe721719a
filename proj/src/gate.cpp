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

#include "qdcnot/gate.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

namespace qdcnot {

void Tomogram::validate() const {
  if ((populations.array() < -1e-12).any()) throw std::domain_error("negative tomogram entry");
  if ((populations.rowwise().sum().array() > 1.0 + 1e-9).any()) {
    throw std::domain_error("tomogram row exceeds unit population");
  }
}

FidelityPoint FidelitySeries::max() const {
  if (points.empty()) throw std::domain_error("empty fidelity series");
  return *std::max_element(points.begin(), points.end(),
                           [](const auto& a, const auto& b) { return a.fidelity < b.fidelity; });
}

Eigen::Vector4cd bell_target() {
  const double r = 1.0 / std::sqrt(2.0);
  return {std::complex<double>(r, 0.0), 0.0, 0.0, std::complex<double>(0.0, -r)};
}

double bell_overlap(const DensityMatrix& rho) {
  const Eigen::Vector4cd psi = bell_target();
  const std::complex<double> value = psi.dot(rho.matrix() * psi);
  if (value.real() < -1e-9) throw std::domain_error("negative Bell overlap: not a valid state");
  return value.real();
}

double bell_fidelity(const DensityMatrix& rho) {
  return std::sqrt(std::clamp(bell_overlap(rho), 0.0, 1.0));
}

bool TruthTable::matches_cnot() const {
  for (const auto& row : rows) {
    if (row.tie || row.dominant_output != kIdealCnot[static_cast<std::size_t>(row.input)]) return false;
  }
  return true;
}

int dominant_level(const Eigen::Vector4d& populations, bool* tie) {
  int best = 0;
  for (int k = 1; k < 4; ++k) {
    if (populations[k] > populations[best]) best = k;
  }
  if (tie) {
    *tie = false;
    for (int k = 0; k < 4; ++k) {
      if (k != best && std::abs(populations[k] - populations[best]) <= 1e-9) *tie = true;
    }
  }
  return best;
}

TruthTable cnot_truth_table(const RegimeSchedule& schedule, const DecayParams& decay, double dt,
                            bool reset_coherences) {
  const RegimeSchedule drive = schedule.slice_from(schedule.tau2());
  IntegrateOptions opts;
  opts.stride = std::numeric_limits<std::size_t>::max();
  opts.reset_coherences_at_boundaries = reset_coherences;
  TruthTable table;
  for (int input = 0; input < 4; ++input) {
    const SimulationTrace trace = integrate(DensityMatrix::basis(input), drive, decay, dt, opts);
    auto& row = table.rows[static_cast<std::size_t>(input)];
    row.input = input;
    row.distribution = trace.final_state.populations();
    row.dominant_output = dominant_level(row.distribution, &row.tie);
  }
  return table;
}

Tomogram tomogram(std::span<const DensityMatrix, 4> outputs, double phi) {
  Tomogram t;
  for (int i = 0; i < 4; ++i) t.populations.row(i) = outputs[static_cast<std::size_t>(i)].populations().transpose();
  t.pulse_area_tag = phi;
  return t;
}

std::vector<Tomogram> tomogram_series(const RegimeSchedule& schedule, const DecayParams& decay, double dt,
                                      std::span<const double> areas, bool reset_coherences) {
  const double injected_at = schedule.tau2();
  const double area_at_injection = schedule.cumulative_area(injected_at);
  const RegimeSchedule drive = schedule.slice_from(injected_at);

  std::vector<double> local_times(areas.size(), 0.0);
  for (std::size_t k = 0; k < areas.size(); ++k) {
    if (areas[k] > area_at_injection) local_times[k] = schedule.time_at_area(areas[k]) - injected_at;
    local_times[k] = std::clamp(local_times[k], 0.0, drive.end());
  }

  IntegrateOptions opts;
  opts.stride = std::numeric_limits<std::size_t>::max();
  opts.sample_times = local_times;
  opts.reset_coherences_at_boundaries = reset_coherences;

  std::array<std::future<SimulationTrace>, 4> runs;
  for (int input = 0; input < 4; ++input) {
    runs[static_cast<std::size_t>(input)] = std::async(std::launch::async, [&, input] {
      return integrate(DensityMatrix::basis(input), drive, decay, dt, opts);
    });
  }
  std::array<SimulationTrace, 4> traces;
  for (std::size_t k = 0; k < 4; ++k) traces[k] = runs[k].get();

  std::vector<Tomogram> out;
  out.reserve(areas.size());
  for (std::size_t k = 0; k < areas.size(); ++k) {
    std::array<DensityMatrix, 4> outputs;
    for (std::size_t input = 0; input < 4; ++input) {
      if (areas[k] <= area_at_injection) {
        outputs[input] = DensityMatrix::basis(static_cast<int>(input));
      } else {
        outputs[input] = traces[input].at(local_times[k])->rho;
      }
    }
    out.push_back(tomogram(outputs, areas[k]));
  }
  return out;
}

FidelitySeries fidelity_vs_area(const RegimeSchedule& schedule, const DecayParams& decay, double dt,
                                Envelope envelope, std::span<const double> areas, const DensityMatrix& rho0,
                                bool reset_coherences) {
  std::vector<double> times;
  times.reserve(areas.size());
  for (double a : areas) times.push_back(schedule.time_at_area(a));

  IntegrateOptions opts;
  opts.stride = std::numeric_limits<std::size_t>::max();
  opts.sample_times = times;
  opts.reset_coherences_at_boundaries = reset_coherences;
  const SimulationTrace trace = integrate(rho0, schedule, decay, dt, opts);

  FidelitySeries series;
  series.envelope = envelope;
  for (std::size_t k = 0; k < areas.size(); ++k) {
    const DensityMatrix& rho = trace.at(times[k])->rho;
    const double overlap = std::clamp(bell_overlap(rho), 0.0, 1.0);
    series.points.push_back({areas[k], std::sqrt(overlap), overlap});
  }
  return series;
}

}  // namespace qdcnot
