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

#include <array>
#include <span>
#include <vector>

#include "qdcnot/liouville.hpp"
#include "qdcnot/pulse.hpp"
#include "qdcnot/state.hpp"

namespace qdcnot {

/// Output populations per basis input: row = input level, column = output level.
struct Tomogram {
  Eigen::Matrix4d populations = Eigen::Matrix4d::Identity();
  double pulse_area_tag = 0.0;

  /// Rows sum to <= 1 + 1e-9, entries >= -1e-12.
  void validate() const;
};

struct FidelityPoint {
  double area = 0.0;
  double fidelity = 0.0;          // sqrt(<Psi|rho|Psi>)
  double fidelity_squared = 0.0;  // <Psi|rho|Psi>
};

struct FidelitySeries {
  Envelope envelope = Envelope::kSquare;
  std::vector<FidelityPoint> points;

  /// First point of largest fidelity.
  FidelityPoint max() const;
};

/// (|00> - i|11>) / sqrt(2) in the level basis.
Eigen::Vector4cd bell_target();

/// <Psi|rho|Psi> for the Bell target. Throws std::domain_error below -1e-9.
double bell_overlap(const DensityMatrix& rho);

/// sqrt(<Psi|rho|Psi>), clamped to [0, 1].
double bell_fidelity(const DensityMatrix& rho);

struct TruthTableRow {
  int input = 0;
  int dominant_output = 0;
  bool tie = false;
  Eigen::Vector4d distribution = Eigen::Vector4d::Zero();
};

struct TruthTable {
  static constexpr std::array<int, 4> kIdealCnot{0, 1, 3, 2};

  std::array<TruthTableRow, 4> rows;

  bool matches_cnot() const;
};

/// Argmax of the populations; ties go to the lower level and set *tie.
int dominant_level(const Eigen::Vector4d& populations, bool* tie = nullptr);

/// Injects each basis state at tau2 and runs the regime-III drive of the
/// schedule to its end.
TruthTable cnot_truth_table(const RegimeSchedule& schedule, const DecayParams& decay, double dt,
                            bool reset_coherences = true);

/// Row i = populations of outputs[i].
Tomogram tomogram(std::span<const DensityMatrix, 4> outputs, double phi);

/// Tomograms at the given cumulative areas. Basis inputs are injected at
/// tau2, so snapshots taken before the regime-III drive show the identity.
/// The four inputs are simulated concurrently.
std::vector<Tomogram> tomogram_series(const RegimeSchedule& schedule, const DecayParams& decay, double dt,
                                      std::span<const double> areas, bool reset_coherences = true);

/// Bell fidelity of the state grown from rho0 at each cumulative area.
FidelitySeries fidelity_vs_area(const RegimeSchedule& schedule, const DecayParams& decay, double dt,
                                Envelope envelope, std::span<const double> areas,
                                const DensityMatrix& rho0 = DensityMatrix::basis(0),
                                bool reset_coherences = true);

}  // namespace qdcnot
