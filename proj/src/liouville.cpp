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

#include "qdcnot/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qdcnot {
namespace {

using Matrix = Matrix4c<double>;

Eigen::Vector4d frame_diagonal(const RegimeSchedule& schedule) {
  const double d01 = schedule.channel_detuning(Channel::kSigmaMinus);
  const double d12 = schedule.channel_detuning(Channel::kMicrowave);
  const double d23 = schedule.channel_detuning(Channel::kSigmaPlus);
  return {0.0, d01, d01 + d12, d01 + d12 + d23};
}

void set_coupling(Matrix& h, Transition t, double rabi) {
  const int i = lower_level(t);
  const int j = upper_level(t);
  h(i, j) = -0.5 * rabi;
  h(j, i) = -0.5 * rabi;
}

}  // namespace

DecayParams DecayParams::from_times(const DecayTimes& times) {
  auto rate = [](double t) {
    if (!(t > 0.0)) throw std::domain_error("relaxation times must be > 0");
    return std::isinf(t) ? 0.0 : 1.0 / t;
  };
  DecayParams d;
  d.gamma.setConstant(rate(times.t2));
  d.gamma.diagonal().setConstant(rate(times.t1));
  d.gamma(1, 2) = d.gamma(2, 1) = rate(times.t2_prime);
  return d;
}

void DecayParams::validate() const {
  if (!gamma.allFinite() || !equilibrium.allFinite()) throw std::domain_error("decay rates must be finite");
  if ((gamma.array() < 0.0).any()) throw std::domain_error("decay rates must be >= 0");
  if ((gamma - gamma.transpose()).cwiseAbs().maxCoeff() != 0.0) {
    throw std::domain_error("decay rate matrix must be symmetric");
  }
}

HamiltonianFrame hamiltonian_at(double t, const RegimeSchedule& schedule) {
  if (!(t >= 0.0 && t <= schedule.end())) throw std::domain_error("time outside the schedule");
  HamiltonianFrame h;
  h.matrix.diagonal() = frame_diagonal(schedule).cast<std::complex<double>>();
  if (const ScheduledPulse* sp = schedule.active_at(t)) {
    set_coupling(h.matrix, sp->pulse.transition(), sp->pulse.rabi_at(t - sp->start));
  }
  return h;
}

Matrix liouville_rhs(const DensityMatrix& rho, const HamiltonianFrame& h, const DecayParams& decay) {
  return liouville_rhs<double>(rho.matrix(), h.matrix, decay.gamma, decay.equilibrium);
}

const TraceSample* SimulationTrace::at(double t) const {
  for (const auto& s : samples) {
    if (s.t == t) return &s;
  }
  return nullptr;
}

double max_time_step(const RegimeSchedule& schedule) {
  double limit = std::numeric_limits<double>::infinity();
  for (const auto& sp : schedule.pulses()) {
    const double b = std::hypot(sp.pulse.peak_rabi, sp.pulse.detuning);
    if (b > 0.0) limit = std::min(limit, 2.0 * std::numbers::pi / b / 50.0);
  }
  return limit;
}

SimulationTrace integrate(const DensityMatrix& rho0, const RegimeSchedule& schedule,
                          const DecayParams& decay, double dt, const IntegrateOptions& options) {
  rho0.validate();
  decay.validate();
  if (!(dt > 0.0)) throw StepSizeError("time step must be > 0");
  const double limit = max_time_step(schedule);
  if (dt > limit * (1.0 + 1e-12)) {
    throw StepSizeError("time step " + std::to_string(dt) + " exceeds the stability limit " +
                        std::to_string(limit));
  }
  const std::size_t stride = std::max<std::size_t>(1, options.stride);
  const double end = schedule.end();

  std::vector<double> breaks{0.0, end};
  for (const auto& sp : schedule.pulses()) {
    breaks.push_back(sp.start);
    breaks.push_back(std::min(sp.end(), end));
  }
  for (double t : options.sample_times) {
    if (!(t >= 0.0 && t <= end)) throw std::domain_error("sample time outside the schedule");
    breaks.push_back(t);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<double> samples = options.sample_times;
  std::sort(samples.begin(), samples.end());
  const std::vector<double> boundaries = schedule.regime_boundaries();

  const Eigen::Vector4d diag = frame_diagonal(schedule);
  Matrix frame = Matrix::Zero();
  frame.diagonal() = diag.cast<std::complex<double>>();

  SimulationTrace trace;
  Matrix rho = rho0.matrix();
  double last_recorded = -1.0;
  auto record = [&](double t) {
    if (t == last_recorded) return;
    trace.samples.push_back({t, schedule.cumulative_area(t), DensityMatrix(rho)});
    last_recorded = t;
  };
  record(0.0);

  std::size_t step = 0;
  for (std::size_t seg = 0; seg + 1 < breaks.size(); ++seg) {
    const double a = breaks[seg];
    const double b = breaks[seg + 1];
    if (options.reset_coherences_at_boundaries &&
        std::find(boundaries.begin(), boundaries.end(), a) != boundaries.end()) {
      rho = DensityMatrix(rho).without_coherences().matrix();
    }

    const double mid = 0.5 * (a + b);
    const ScheduledPulse* active = nullptr;
    for (const auto& sp : schedule.pulses()) {
      if (mid > sp.start && mid < sp.end()) {
        active = &sp;
        break;
      }
    }
    auto hamiltonian = [&](double t) {
      Matrix h = frame;
      if (active) {
        const double local = std::clamp(t - active->start, 0.0, active->pulse.window());
        set_coupling(h, active->pulse.transition(), active->pulse.rabi_at(local));
      }
      return h;
    };
    auto f = [&](double t, const Matrix& r) {
      return liouville_rhs<double>(r, hamiltonian(t), decay.gamma, decay.equilibrium);
    };

    const auto n = std::max<long>(1, static_cast<long>(std::ceil((b - a) / dt - 1e-9)));
    const double h = (b - a) / static_cast<double>(n);
    for (long k = 0; k < n; ++k) {
      const double t = a + h * static_cast<double>(k);
      const Matrix k1 = f(t, rho);
      const Matrix k2 = f(t + 0.5 * h, rho + (0.5 * h) * k1);
      const Matrix k3 = f(t + 0.5 * h, rho + (0.5 * h) * k2);
      const Matrix k4 = f(t + h, rho + h * k3);
      const Matrix next = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const double t_next = k + 1 == n ? b : t + h;

      const bool finite = next.allFinite();
      const double drift = finite ? (next - next.adjoint()).cwiseAbs().maxCoeff() : 0.0;
      if (!finite || drift > options.hermiticity_tolerance) {
        trace.final_state = DensityMatrix(rho);
        const std::string why = finite ? "Hermiticity drift " + std::to_string(drift)
                                       : std::string("non-finite density matrix");
        throw NumericalFailure(why + " at t = " + std::to_string(t_next), std::move(trace));
      }
      rho = next;
      ++step;
      if (step % stride == 0) record(t_next);
    }
    if (std::binary_search(samples.begin(), samples.end(), b)) record(b);
  }
  record(end);
  trace.final_state = DensityMatrix(rho);
  return trace;
}

}  // namespace qdcnot
