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

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qdcnot/pulse.hpp"
#include "qdcnot/state.hpp"

namespace qdcnot {

/// Elementwise relaxation rates: d rho_ij / dt gets -gamma_ij (rho_ij - eq_ij)
/// where eq is diagonal (equilibrium populations, zero by default).
struct DecayParams {
  Eigen::Matrix4d gamma = Eigen::Matrix4d::Zero();
  Eigen::Vector4d equilibrium = Eigen::Vector4d::Zero();

  static DecayParams none() { return {}; }

  /// 1/T1 on the diagonal, 1/T2 off it, 1/T2' on the 1<->2 coherence.
  static DecayParams from_times(const DecayTimes& times);

  /// Non-negative, finite, symmetric.
  void validate() const;
};

/// Rotating-frame Hamiltonian in rad/s (hbar = 1).
struct HamiltonianFrame {
  Matrix4c<double> matrix = Matrix4c<double>::Zero();
};

/// Frame diagonal: H_jj - H_ii equals the channel detuning on every driven
/// pair. Coupling: H_ij = H_ji = -Omega(t)/2 on the active pair.
HamiltonianFrame hamiltonian_at(double t, const RegimeSchedule& schedule);

template <typename Scalar>
Matrix4c<Scalar> liouville_rhs(const Matrix4c<Scalar>& rho, const Matrix4c<Scalar>& h,
                               const Matrix4<Scalar>& gamma, const Vector4<Scalar>& equilibrium) {
  const std::complex<Scalar> minus_i(Scalar(0), Scalar(-1));
  Matrix4c<Scalar> shifted = rho;
  shifted.diagonal() -= equilibrium.template cast<std::complex<Scalar>>();
  Matrix4c<Scalar> d = minus_i * (h * rho - rho * h);
  d -= gamma.template cast<std::complex<Scalar>>().cwiseProduct(shifted);
  return d;
}

/// d rho / dt = -i [H, rho] - gamma o (rho - eq).
Matrix4c<double> liouville_rhs(const DensityMatrix& rho, const HamiltonianFrame& h, const DecayParams& decay);

struct TraceSample {
  double t = 0.0;
  double area = 0.0;  // cumulative pulse area
  DensityMatrix rho;
};

struct SimulationTrace {
  std::vector<TraceSample> samples;
  DensityMatrix final_state;

  /// Sample recorded at time t (exact match), or nullptr.
  const TraceSample* at(double t) const;
};

struct IntegrateOptions {
  /// Record every `stride` steps, plus the start, the end and every
  /// sample time.
  std::size_t stride = 1;
  /// Extra breakpoints; the state is recorded exactly at each of them.
  std::vector<double> sample_times;
  /// Zero every coherence where the driven channel changes.
  bool reset_coherences_at_boundaries = true;
  double hermiticity_tolerance = 1e-8;
};

class StepSizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Integration blew up or lost Hermiticity. Carries what was recorded so far.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, SimulationTrace partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}

  const SimulationTrace& partial() const { return partial_; }

 private:
  SimulationTrace partial_;
};

/// Largest dt accepted for a schedule: (1/50) * min over pulses of 2 pi / beta.
double max_time_step(const RegimeSchedule& schedule);

/// Classic RK4 with fixed steps of at most dt between breakpoints (pulse
/// edges, regime boundaries, sample times), so no step straddles a
/// discontinuity of the drive.
SimulationTrace integrate(const DensityMatrix& rho0, const RegimeSchedule& schedule,
                          const DecayParams& decay, double dt, const IntegrateOptions& options = {});

}  // namespace qdcnot
