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

#include "qdcnot/sequence.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace qdcnot {
namespace {

constexpr std::array<Channel, 3> kOrder{Channel::kSigmaMinus, Channel::kMicrowave, Channel::kSigmaPlus};

// Smallest pair population that still counts as a populated block.
constexpr double kEmptyBlock = 1e-300;

}  // namespace

ClosedFormSequence::ClosedFormSequence(RegimeSchedule schedule, DecayTimes decay,
                                       ClosedFormOptions options, DensityMatrix rho0)
    : schedule_(std::move(schedule)), decay_(decay), options_(options), rho0_(std::move(rho0)) {
  DensityMatrix boundary = rho0_;
  for (Channel c : kOrder) {
    Regime r{c, schedule_.regime_start(c), schedule_.regime_end(c), boundary.without_coherences(),
             {}, true, 0.0, {}};
    const ScheduledPulse* first = nullptr;
    double cursor = r.start;
    for (const auto& sp : schedule_.pulses()) {
      if (sp.pulse.channel != c) continue;
      if (!first) first = &sp;
      const bool same = sp.pulse.shape == Envelope::kSquare &&
                        sp.pulse.peak_rabi == first->pulse.peak_rabi &&
                        sp.pulse.detuning == first->pulse.detuning &&
                        std::abs(sp.start - cursor) <= 1e-12 * std::max(1.0, cursor);
      r.constant_drive = r.constant_drive && same;
      cursor = sp.end();
    }
    if (!first) continue;
    r.rabi = first->pulse.peak_rabi;
    if (std::abs(cursor - r.end) > 1e-12 * std::max(1.0, r.end)) r.constant_drive = false;
    r.init = stitch(boundary, w_tau1_, transition_of(c), options_.mode);
    if (needs_stepping(r)) tabulate(r);
    regimes_.push_back(std::move(r));

    const BlochVector last = evaluate(regimes_.back(), regimes_.back().end);
    if (c == Channel::kSigmaMinus) w_tau1_ = last.w;
    boundary = embed(regimes_.back(), last);
  }
}

RegimeInit ClosedFormSequence::initial_condition(Channel c) const {
  for (const auto& r : regimes_) {
    if (r.channel == c) return r.init;
  }
  throw std::domain_error("schedule has no " + std::string(to_string(c)) + " regime");
}

const ClosedFormSequence::Regime& ClosedFormSequence::regime_at(double t) const {
  if (!(t >= 0.0 && t <= schedule_.end()) || regimes_.empty()) {
    throw std::domain_error("time outside the schedule");
  }
  for (const auto& r : regimes_) {
    if (t <= r.end) return r;
  }
  return regimes_.back();
}

TransitionParams ClosedFormSequence::params_for(const Regime& r) const {
  const Transition tr = transition_of(r.channel);
  TransitionParams p;
  p.transition = tr;
  p.rabi = r.rabi;
  p.detuning = schedule_.channel_detuning(r.channel);
  p.t1 = decay_.t1;
  p.t2 = decay_.dephasing(tr);
  p.w0 = r.channel == Channel::kSigmaMinus ? options_.regime1_w0 : 0.0;
  return p;
}

// Shaped drives about a fixed axis only depend on the accumulated area;
// anything else is stepped.
bool ClosedFormSequence::needs_stepping(const Regime& r) const {
  if (options_.mode == EvalMode::kPaperLiteral || r.constant_drive) return false;
  const TransitionParams p = params_for(r);
  return !(p.detuning == 0.0 && p.t1 == p.t2 && p.w0 == 0.0);
}

void ClosedFormSequence::tabulate(Regime& r) const {
  std::vector<double> edges{r.start};
  std::vector<int> owners;
  const auto& pulses = schedule_.pulses();
  for (std::size_t k = 0; k < pulses.size(); ++k) {
    if (pulses[k].pulse.channel != r.channel) continue;
    if (pulses[k].start > edges.back()) {
      edges.push_back(pulses[k].start);
      owners.push_back(-1);
    }
    edges.push_back(std::min(pulses[k].end(), r.end));
    owners.push_back(static_cast<int>(k));
  }
  if (r.end > edges.back()) {
    edges.push_back(r.end);
    owners.push_back(-1);
  }

  const TransitionParams p = params_for(r);
  Eigen::Vector3d x = r.init.components();
  for (std::size_t k = 0; k < owners.size(); ++k) {
    Segment seg{edges[k], edges[k + 1], owners[k], 0.0, {}};
    const double len = seg.end - seg.begin;
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / options_.max_step)));
    seg.step = len / static_cast<double>(n);
    seg.nodes.reserve(n + 1);
    seg.nodes.push_back(x);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = seg.begin + seg.step * static_cast<double>(i);
      const double b = i + 1 == n ? seg.end : a + seg.step;
      x = step_within(seg, p, x, a, b).components();
      seg.nodes.push_back(x);
    }
    r.segments.push_back(std::move(seg));
  }
}

BlochVector ClosedFormSequence::step_within(const Segment& seg, const TransitionParams& p,
                                            const Eigen::Vector3d& from, double t0, double t1) const {
  const RegimeInit init{from.x(), from.y(), from.z()};
  if (seg.pulse < 0) {
    TransitionParams idle = p;
    idle.rabi = 0.0;
    return propagate(idle, init, t1 - t0);
  }
  const ScheduledPulse& sp = schedule_.pulses()[static_cast<std::size_t>(seg.pulse)];
  return propagate_driven([&sp](double time) { return sp.pulse.rabi_at(time - sp.start); }, p, init, t0, t1,
                          options_.max_step);
}

BlochVector ClosedFormSequence::evaluate(const Regime& r, double t) const {
  TransitionParams p = params_for(r);
  const double s = std::max(0.0, t - r.start);

  if (!r.segments.empty()) {
    for (const auto& seg : r.segments) {
      if (t > seg.end && &seg != &r.segments.back()) continue;
      const double offset = std::clamp(t - seg.begin, 0.0, seg.end - seg.begin);
      const auto last = seg.nodes.size() - 1;
      const auto k = std::min(last, static_cast<std::size_t>(offset / seg.step));
      const double node_t = seg.begin + seg.step * static_cast<double>(k);
      if (k == last || node_t >= t) return BlochVector::from(seg.nodes[k], p.transition);
      return step_within(seg, p, seg.nodes[k], node_t, t);
    }
  }

  if (!r.constant_drive) {
    // Average Rabi frequency over [start, t]: with a fixed rotation axis the
    // accumulated area is all that matters.
    const double area = schedule_.cumulative_area(t) - schedule_.cumulative_area(r.start);
    p.rabi = s > 0.0 ? area / s : 0.0;
  }

  if (options_.mode == EvalMode::kPaperLiteral) {
    switch (r.channel) {
      case Channel::kSigmaMinus:
        return regime1_solution(p, s, EvalMode::kPaperLiteral);
      case Channel::kMicrowave:
        return regime2_solution(r.init.w_init, p, s, EvalMode::kPaperLiteral);
      case Channel::kSigmaPlus:
        return regime3_solution(r.init.w_init, p, s, EvalMode::kPaperLiteral);
    }
  }
  return propagate(p, r.init, s);
}

DensityMatrix ClosedFormSequence::embed(const Regime& r, const BlochVector& b) const {
  const Transition tr = transition_of(r.channel);
  const double shared = r.rho_start.population(lower_level(tr)) + r.rho_start.population(upper_level(tr));
  if (!(shared > kEmptyBlock)) return r.rho_start;
  return density_update_from_bloch(r.rho_start, b);
}

BlochVector ClosedFormSequence::bloch_at(double t) const { return evaluate(regime_at(t), t); }

DensityMatrix ClosedFormSequence::at(double t) const {
  const Regime& r = regime_at(t);
  return embed(r, evaluate(r, t));
}

}  // namespace qdcnot
