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

#include "qdcnot/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qdcnot {
namespace {

const double kSqrtTwoPi = std::sqrt(2.0 * std::numbers::pi);

constexpr std::array<Channel, 3> kChannels{Channel::kSigmaMinus, Channel::kMicrowave,
                                           Channel::kSigmaPlus};

}  // namespace

std::string_view to_string(Envelope e) { return e == Envelope::kSquare ? "square" : "gaussian"; }

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::kSigmaMinus:
      return "sigma-minus";
    case Channel::kMicrowave:
      return "microwave";
    case Channel::kSigmaPlus:
      return "sigma-plus";
  }
  return "?";
}

Envelope envelope_from_string(std::string_view s) {
  if (s == "square") return Envelope::kSquare;
  if (s == "gaussian") return Envelope::kGaussian;
  throw std::invalid_argument("unknown envelope '" + std::string(s) + "' (expected square or gaussian)");
}

double Pulse::window() const {
  return shape == Envelope::kSquare ? duration : 2.0 * kGaussianCutoff * duration;
}

double Pulse::rabi_at(double local) const {
  if (local < 0.0 || local > window()) return 0.0;
  if (shape == Envelope::kSquare) return peak_rabi;
  const double x = (local - kGaussianCutoff * duration) / duration;
  return peak_rabi * std::exp(-0.5 * x * x);
}

double Pulse::area_until(double local) const {
  const double clamped = std::clamp(local, 0.0, window());
  if (shape == Envelope::kSquare) return peak_rabi * clamped;
  const double s = duration * std::numbers::sqrt2;
  const double lo = std::erf(-kGaussianCutoff / std::numbers::sqrt2);
  const double hi = std::erf((clamped - kGaussianCutoff * duration) / s);
  return peak_rabi * duration * std::sqrt(std::numbers::pi / 2.0) * (hi - lo);
}

double Pulse::area() const { return pulse_area(*this); }

double pulse_area(const Pulse& p) {
  if (p.shape == Envelope::kSquare) return p.peak_rabi * p.duration;
  return p.peak_rabi * p.duration * kSqrtTwoPi;
}

double duration_for_area(Envelope shape, double peak_rabi, double theta) {
  if (!(peak_rabi > 0.0)) throw std::domain_error("peak Rabi frequency must be > 0");
  if (!(theta >= 0.0)) throw std::domain_error("pulse area must be >= 0");
  if (shape == Envelope::kSquare) return theta / peak_rabi;
  return theta / (peak_rabi * kSqrtTwoPi);
}

double PerChannel::operator[](Channel c) const {
  switch (c) {
    case Channel::kSigmaMinus:
      return sigma_minus;
    case Channel::kMicrowave:
      return microwave;
    case Channel::kSigmaPlus:
      return sigma_plus;
  }
  return 0.0;
}

RegimeSchedule RegimeSchedule::from_pulses(std::vector<ScheduledPulse> pulses,
                                           std::optional<PulseTrain> train) {
  RegimeSchedule s;
  for (std::size_t k = 0; k < pulses.size(); ++k) {
    const auto& sp = pulses[k];
    if (!(sp.start >= 0.0) || !std::isfinite(sp.start)) throw std::domain_error("pulse start must be >= 0");
    if (!(sp.pulse.duration > 0.0) || !std::isfinite(sp.pulse.duration)) {
      throw std::domain_error("pulse duration must be > 0");
    }
    if (!(sp.pulse.peak_rabi >= 0.0) || !std::isfinite(sp.pulse.peak_rabi)) {
      throw std::domain_error("pulse peak Rabi frequency must be >= 0");
    }
    if (!std::isfinite(sp.pulse.detuning)) throw std::domain_error("pulse detuning must be finite");
    if (k == 0) continue;
    const auto& prev = pulses[k - 1];
    const double slack = 1e-12 * std::max(1.0, prev.end());
    if (sp.start < prev.end() - slack) throw std::domain_error("pulses overlap or are out of order");
    if (static_cast<int>(sp.pulse.channel) < static_cast<int>(prev.pulse.channel)) {
      throw std::domain_error("channels must follow regime order sigma-minus, microwave, sigma-plus");
    }
  }
  if (train && (!(train->period > 0.0) || train->count < 0)) throw std::domain_error("invalid pulse train");

  double tau1 = 0.0;
  double tau2 = 0.0;
  double end = 0.0;
  for (const auto& sp : pulses) {
    if (sp.pulse.channel == Channel::kSigmaMinus) tau1 = std::max(tau1, sp.end());
    if (sp.pulse.channel != Channel::kSigmaPlus) tau2 = std::max(tau2, sp.end());
    end = std::max(end, sp.end());
  }
  s.pulses_ = std::move(pulses);
  s.train_ = train;
  s.tau1_ = tau1;
  s.tau2_ = std::max(tau1, tau2);
  s.end_ = std::max(end, s.tau2_);
  return s;
}

double RegimeSchedule::regime_start(Channel c) const {
  switch (c) {
    case Channel::kSigmaMinus:
      return 0.0;
    case Channel::kMicrowave:
      return tau1_;
    case Channel::kSigmaPlus:
      return tau2_;
  }
  return 0.0;
}

double RegimeSchedule::regime_end(Channel c) const {
  switch (c) {
    case Channel::kSigmaMinus:
      return tau1_;
    case Channel::kMicrowave:
      return tau2_;
    case Channel::kSigmaPlus:
      return end_;
  }
  return end_;
}

const ScheduledPulse* RegimeSchedule::active_at(double t) const {
  if (pulses_.empty()) return nullptr;
  if (t == pulses_.front().start) return &pulses_.front();
  for (const auto& sp : pulses_) {
    if (t > sp.start && t <= sp.end()) return &sp;
  }
  return nullptr;
}

double RegimeSchedule::rabi_at(double t) const {
  const ScheduledPulse* sp = active_at(t);
  return sp ? sp->pulse.rabi_at(t - sp->start) : 0.0;
}

double RegimeSchedule::cumulative_area(double t) const {
  double total = 0.0;
  for (const auto& sp : pulses_) {
    if (t <= sp.start) break;
    total += sp.pulse.area_until(t - sp.start);
  }
  return total;
}

double RegimeSchedule::time_at_area(double area) const {
  if (area <= 0.0) return 0.0;
  if (area >= cumulative_area(end_)) return end_;
  double lo = 0.0;
  double hi = end_;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cumulative_area(mid) >= area) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double RegimeSchedule::channel_area(Channel c) const {
  double total = 0.0;
  for (const auto& sp : pulses_) {
    if (sp.pulse.channel == c) total += pulse_area(sp.pulse);
  }
  return total;
}

double RegimeSchedule::channel_detuning(Channel c) const {
  for (const auto& sp : pulses_) {
    if (sp.pulse.channel == c) return sp.pulse.detuning;
  }
  return 0.0;
}

std::vector<double> RegimeSchedule::regime_boundaries() const {
  std::vector<double> out;
  for (std::size_t k = 1; k < pulses_.size(); ++k) {
    if (pulses_[k].pulse.channel != pulses_[k - 1].pulse.channel) out.push_back(pulses_[k].start);
  }
  return out;
}

RegimeSchedule RegimeSchedule::slice_from(double t0) const {
  std::vector<ScheduledPulse> kept;
  const double slack = 1e-12 * std::max(1.0, std::abs(t0));
  for (const auto& sp : pulses_) {
    if (sp.start >= t0 - slack) kept.push_back({std::max(0.0, sp.start - t0), sp.pulse});
  }
  RegimeSchedule s = from_pulses(std::move(kept), train_);
  s.warnings_ = warnings_;
  return s;
}

RegimeSchedule build_cnot_schedule(double phi1, double phi2, int n_flips, Envelope regime3_shape,
                                   const PerChannel& peak_rabis, const PerChannel& detunings,
                                   const DecayTimes& decay_times, const ScheduleOptions& options) {
  if (!(phi1 > 0.0) || !(phi2 > 0.0)) throw std::domain_error("regime areas must be > 0");
  if (n_flips < 0) throw std::domain_error("n_flips must be >= 0");
  if (!(options.flip_area > 0.0)) throw std::domain_error("flip area must be > 0");
  for (Channel c : kChannels) {
    if (!(peak_rabis[c] > 0.0)) {
      throw std::domain_error("peak Rabi frequency on " + std::string(to_string(c)) + " must be > 0");
    }
  }

  std::vector<ScheduledPulse> pulses;
  const Pulse first{Envelope::kSquare, Channel::kSigmaMinus, peak_rabis.sigma_minus,
                    duration_for_area(Envelope::kSquare, peak_rabis.sigma_minus, phi1),
                    detunings.sigma_minus};
  pulses.push_back({0.0, first});
  const double tau1 = pulses.back().end();

  double mw_detuning = detunings.microwave;
  if (options.microwave_zeeman_shift) mw_detuning += peak_rabis.microwave;
  const Pulse second{Envelope::kSquare, Channel::kMicrowave, peak_rabis.microwave,
                     duration_for_area(Envelope::kSquare, peak_rabis.microwave, phi2), mw_detuning};
  pulses.push_back({tau1, second});
  double t = pulses.back().end();

  std::optional<PulseTrain> train;
  const Pulse flip{regime3_shape, Channel::kSigmaPlus, peak_rabis.sigma_plus,
                   duration_for_area(regime3_shape, peak_rabis.sigma_plus, options.flip_area),
                   detunings.sigma_plus};
  if (regime3_shape == Envelope::kSquare) {
    for (int k = 0; k < n_flips; ++k) {
      pulses.push_back({t, flip});
      t = pulses.back().end();
    }
  } else {
    const double period = options.train_period.value_or(flip.window());
    if (period < flip.window() * (1.0 - 1e-12)) {
      throw std::domain_error("train period shorter than one gaussian window");
    }
    const double tau2 = t;
    for (int k = 0; k < n_flips; ++k) pulses.push_back({tau2 + period * k, flip});
    if (n_flips > 0) train = PulseTrain{period, n_flips};
  }

  RegimeSchedule s = RegimeSchedule::from_pulses(std::move(pulses), train);
  const double budget = std::min(decay_times.t2, decay_times.t2_prime);
  if (s.end() >= budget) {
    s.add_warning("sequence length " + std::to_string(s.end()) +
                  " reaches the dephasing time " + std::to_string(budget));
  }
  return s;
}

RegimeInit stitch(const DensityMatrix& rho_at_boundary, double w_tau1, Transition next, EvalMode mode) {
  const double consistent = rho_at_boundary.population(upper_level(next)) -
                            rho_at_boundary.population(lower_level(next));
  if (mode == EvalMode::kConsistent || next == Transition::k01) return {0.0, 0.0, consistent};
  const double divisor = next == Transition::k12 ? 2.0 : 4.0;
  return {0.0, 0.0, -(1.0 + w_tau1) / divisor};
}

}  // namespace qdcnot
