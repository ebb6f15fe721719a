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

#include <functional>
#include <limits>

#include "qdcnot/state.hpp"

namespace qdcnot {

inline constexpr double kNoDecay = std::numeric_limits<double>::infinity();

/// Which closed forms a regime evaluation uses. kConsistent is the exact
/// solution of the Bloch equations with the regime's initial condition;
/// kPaperLiteral evaluates the literal regime formulas term for term,
/// including the ones that miss their own t = 0 condition.
enum class EvalMode { kConsistent, kPaperLiteral };

std::string_view to_string(EvalMode m);
EvalMode eval_mode_from_string(std::string_view s);

/// Drive and relaxation parameters for one two-level transition.
/// Relaxation times may be kNoDecay.
struct TransitionParams {
  Transition transition = Transition::k01;
  double rabi = 0.0;      // Omega, rad/s
  double detuning = 0.0;  // Delta, rad/s
  double t1 = kNoDecay;
  double t2 = kNoDecay;
  double w0 = 0.0;  // equilibrium inversion

  /// Omega >= 0, T1 > 0, T2 > 0, all finite where required.
  void validate() const;

  /// Omega * min(T1, T2) > 1; the damped closed forms assume this.
  bool strong_field() const;
};

struct RegimeInit {
  double u0 = 0.0;
  double v0 = 0.0;
  double w_init = -1.0;

  Eigen::Vector3d components() const { return {u0, v0, w_init}; }
};

struct BlochSolution {
  BlochVector value;
  bool within_validity = true;
};

/// Generalized Rabi frequency sqrt(Omega^2 + Delta^2).
double beta(const TransitionParams& p);

/// Steady-state source parameter (Omega w0 / T) / (Omega^2 + Delta^2 + 1/T^2)
/// with T = T2.
double xi(const TransitionParams& p);

/// Damped transient solution for T1 = T2 = T in the strong-field limit,
/// evaluated term for term. T2 is used as T. The result is flagged when the
/// strong-field assumption does not hold.
BlochSolution general_solution(const TransitionParams& p, const RegimeInit& init, double t);

/// Generator A and source b of the Bloch equations x' = A x + b.
template <typename Scalar>
Matrix3<Scalar> bloch_generator(Scalar rabi, Scalar detuning, Scalar inv_t1, Scalar inv_t2) {
  Matrix3<Scalar> a;
  a << -inv_t2, -detuning, Scalar(0),  //
      detuning, -inv_t2, rabi,         //
      Scalar(0), -rabi, -inv_t1;
  return a;
}

template <typename Scalar>
Vector3<Scalar> bloch_rhs(const Vector3<Scalar>& x, Scalar rabi, Scalar detuning, Scalar inv_t1,
                          Scalar inv_t2, Scalar w0) {
  Vector3<Scalar> dx = bloch_generator(rabi, detuning, inv_t1, inv_t2) * x;
  dx.z() += w0 * inv_t1;
  return dx;
}

/// (du/dt, dv/dt, dw/dt):
///   u' = -Delta v - u/T2
///   v' =  Delta u + Omega w - v/T2
///   w' = -Omega v - (w - w0)/T1
Eigen::Vector3d bloch_rhs(const BlochVector& b, const TransitionParams& p);

/// Exact solution of the Bloch equations with constant drive from init after
/// time t. Uniform damping (T1 = T2) uses the rotation-plus-decay form;
/// otherwise the augmented 4x4 generator is exponentiated.
BlochVector propagate(const TransitionParams& p, const RegimeInit& init, double t);

/// Bloch equations with a time-dependent Rabi frequency, integrated with
/// classic RK4 from t_begin to t_end using steps no longer than max_step.
/// p.rabi is ignored.
BlochVector propagate_driven(const std::function<double(double)>& rabi_at, const TransitionParams& p,
                             const RegimeInit& init, double t_begin, double t_end, double max_step);

/// Regime I on (0,1) from (0, 0, -1).
BlochVector regime1_solution(const TransitionParams& p, double t,
                             EvalMode mode = EvalMode::kConsistent);

/// Regime II on (1,2) from (0, 0, w_prime_0); p.t2 carries T2'. The caller
/// supplies whatever detuning the regime runs at. p.w0 is ignored (no source).
BlochVector regime2_solution(double w_prime_0, const TransitionParams& p, double t,
                             EvalMode mode = EvalMode::kConsistent);

/// Regime III on (2,3) from (0, 0, w_dprime_0). p.w0 is ignored.
BlochVector regime3_solution(double w_dprime_0, const TransitionParams& p, double t,
                             EvalMode mode = EvalMode::kConsistent);

}  // namespace qdcnot
