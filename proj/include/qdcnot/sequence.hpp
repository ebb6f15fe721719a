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

#include <vector>

#include "qdcnot/bloch.hpp"
#include "qdcnot/pulse.hpp"
#include "qdcnot/state.hpp"

namespace qdcnot {

struct ClosedFormOptions {
  EvalMode mode = EvalMode::kConsistent;
  /// Equilibrium inversion of regime I; later regimes never carry a source.
  double regime1_w0 = 0.0;
  /// Step for regimes that have no closed form (shaped, detuned drive).
  double max_step = 1e-3;
};

/// Population dynamics of a whole schedule from the regime closed forms,
/// stitched regime to regime. Each regime starts with its coherences
/// cleared and its inversion from stitch(); spectator levels stay frozen.
class ClosedFormSequence {
 public:
  ClosedFormSequence(RegimeSchedule schedule, DecayTimes decay, ClosedFormOptions options = {},
                     DensityMatrix rho0 = DensityMatrix::basis(0));

  /// Density matrix at t in [0, end]. Regimes are closed on the right.
  DensityMatrix at(double t) const;

  /// Bloch vector of the regime that owns t.
  BlochVector bloch_at(double t) const;

  /// Regime-I inversion at tau1.
  double w_tau1() const { return w_tau1_; }

  /// Initial Bloch vector of the regime driven by c.
  RegimeInit initial_condition(Channel c) const;

  const RegimeSchedule& schedule() const { return schedule_; }

 private:
  // Stretch of a regime with one smooth drive (one pulse, or a gap when
  // pulse < 0), tabulated on a uniform grid.
  struct Segment {
    double begin;
    double end;
    int pulse;
    double step;
    std::vector<Eigen::Vector3d> nodes;
  };

  struct Regime {
    Channel channel;
    double start;
    double end;
    DensityMatrix rho_start;
    RegimeInit init;
    bool constant_drive;
    double rabi;
    std::vector<Segment> segments;  // empty unless the drive needs stepping
  };

  const Regime& regime_at(double t) const;
  TransitionParams params_for(const Regime& r) const;
  bool needs_stepping(const Regime& r) const;
  void tabulate(Regime& r) const;
  BlochVector step_within(const Segment& seg, const TransitionParams& p, const Eigen::Vector3d& from, double t0,
                          double t1) const;
  BlochVector evaluate(const Regime& r, double t) const;
  DensityMatrix embed(const Regime& r, const BlochVector& b) const;

  RegimeSchedule schedule_;
  DecayTimes decay_;
  ClosedFormOptions options_;
  std::vector<Regime> regimes_;
  DensityMatrix rho0_;
  double w_tau1_ = -1.0;
};

}  // namespace qdcnot
