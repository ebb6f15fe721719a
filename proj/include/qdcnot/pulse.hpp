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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdcnot/bloch.hpp"
#include "qdcnot/state.hpp"

namespace qdcnot {

enum class Envelope { kSquare, kGaussian };

/// sigma-minus optical drives 0<->1, the microwave drives 1<->2 and
/// sigma-plus optical drives 2<->3.
enum class Channel { kSigmaMinus, kMicrowave, kSigmaPlus };

constexpr Transition transition_of(Channel c) { return static_cast<Transition>(static_cast<int>(c)); }

std::string_view to_string(Envelope e);
std::string_view to_string(Channel c);
Envelope envelope_from_string(std::string_view s);

/// Gaussian envelopes are cut at +-kGaussianCutoff sigma.
inline constexpr double kGaussianCutoff = 4.0;

struct Pulse {
  Envelope shape = Envelope::kSquare;
  Channel channel = Channel::kSigmaMinus;
  double peak_rabi = 0.0;  // rad/s
  double duration = 0.0;   // square: full width; gaussian: sigma
  double detuning = 0.0;   // rad/s

  Transition transition() const { return transition_of(channel); }

  /// Time the pulse occupies: the square width, or 2 * cutoff * sigma.
  double window() const;

  /// Rabi frequency at time `local` after the window opens; zero outside.
  double rabi_at(double local) const;

  /// Integral of rabi_at over [0, local].
  double area_until(double local) const;

  double area() const;
};

/// Area theorem: square -> Omega * duration, gaussian -> Omega * sigma * sqrt(2 pi).
/// The gaussian value ignores the cutoff (relative error below 1e-4).
double pulse_area(const Pulse& p);

/// Inverse of pulse_area at fixed peak Rabi frequency: the square width or
/// the gaussian sigma. Throws std::domain_error for peak_rabi <= 0 or theta < 0.
double duration_for_area(Envelope shape, double peak_rabi, double theta);

struct ScheduledPulse {
  double start = 0.0;
  Pulse pulse;

  double end() const { return start + pulse.window(); }
};

struct PulseTrain {
  double period = 0.0;
  int count = 0;
};

/// Relaxation times of the sequence. t2_prime belongs to the 1<->2 transition.
struct DecayTimes {
  double t1 = kNoDecay;
  double t2 = kNoDecay;
  double t2_prime = kNoDecay;

  double dephasing(Transition t) const { return t == Transition::k12 ? t2_prime : t2; }
};

/// Ordered, non-overlapping pulses. Channels appear in regime order
/// (sigma-minus, microwave, sigma-plus), so at most one coupling is on at
/// any instant. tau1 and tau2 are where the sigma-minus and microwave
/// regimes end; a schedule without a given channel has a zero-length regime.
class RegimeSchedule {
 public:
  RegimeSchedule() = default;

  /// Validates ordering and overlap; throws std::domain_error.
  static RegimeSchedule from_pulses(std::vector<ScheduledPulse> pulses,
                                    std::optional<PulseTrain> train = std::nullopt);

  const std::vector<ScheduledPulse>& pulses() const { return pulses_; }
  double tau1() const { return tau1_; }
  double tau2() const { return tau2_; }
  double end() const { return end_; }
  const std::optional<PulseTrain>& train() const { return train_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Start time of the regime driven by channel c.
  double regime_start(Channel c) const;
  double regime_end(Channel c) const;

  /// Pulse whose window owns t. Windows are closed on the right, so
  /// t == tau1 still belongs to regime I; t == 0 belongs to the first pulse.
  const ScheduledPulse* active_at(double t) const;

  /// Coupling on the active channel at t (0 in gaps).
  double rabi_at(double t) const;

  /// Integral of the coupling of all channels from 0 to t.
  double cumulative_area(double t) const;

  /// Earliest time with cumulative_area(t) >= area (clamped to [0, end]).
  double time_at_area(double area) const;

  /// Pulse area carried by channel c.
  double channel_area(Channel c) const;

  /// Detuning used for channel c (its first pulse), 0 when absent.
  double channel_detuning(Channel c) const;

  /// Times where the driven channel changes.
  std::vector<double> regime_boundaries() const;

  /// Pulses starting at or after t0, shifted so that t0 becomes 0.
  RegimeSchedule slice_from(double t0) const;

  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

 private:
  std::vector<ScheduledPulse> pulses_;
  std::optional<PulseTrain> train_;
  std::vector<std::string> warnings_;
  double tau1_ = 0.0;
  double tau2_ = 0.0;
  double end_ = 0.0;
};

struct PerChannel {
  double sigma_minus = 0.0;
  double microwave = 0.0;
  double sigma_plus = 0.0;

  double operator[](Channel c) const;
};

struct ScheduleOptions {
  /// Area of each regime-III flip pulse.
  double flip_area = 1.5707963267948966;
  /// Center-to-center spacing of a gaussian regime-III train; defaults to
  /// one window (2 * cutoff * sigma) when unset.
  std::optional<double> train_period;
  /// Shift the microwave detuning by its own Rabi frequency.
  bool microwave_zeeman_shift = false;
};

/// Three-regime CNOT sequence: area phi1 on sigma-minus (square), area phi2
/// on the microwave (square), then n_flips pulses of area
/// options.flip_area on sigma-plus, contiguous for square envelopes and a
/// train for gaussian ones. Regimes follow each other without dead time.
/// A warning is attached when the sequence outlasts the dephasing time.
RegimeSchedule build_cnot_schedule(double phi1, double phi2, int n_flips, Envelope regime3_shape,
                                   const PerChannel& peak_rabis, const PerChannel& detunings,
                                   const DecayTimes& decay_times, const ScheduleOptions& options = {});

/// Initial Bloch vector of the regime on `next`, given the density matrix at
/// the boundary and the regime-I inversion w(tau1). Coherences are dropped.
///  regime II: w' = -(1 + w(tau1)) / 2 (literal) or rho22 - rho11 (consistent)
///  regime III: w'' = -(1 + w(tau1)) / 4 (literal) or rho33 - rho22 (consistent)
RegimeInit stitch(const DensityMatrix& rho_at_boundary, double w_tau1, Transition next, EvalMode mode);

}  // namespace qdcnot
