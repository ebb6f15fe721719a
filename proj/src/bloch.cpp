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

#include "qdcnot/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace qdcnot {
namespace {

double inverse_time(double t) { return std::isinf(t) ? 0.0 : 1.0 / t; }

// sin(x t)/x and (cos(x t) - 1)/x^2 with their x -> 0 limits.
double sinc_t(double x, double t) { return x == 0.0 ? t : std::sin(x * t) / x; }
double versine_t(double x, double t) { return x == 0.0 ? -0.5 * t * t : (std::cos(x * t) - 1.0) / (x * x); }

// Rotation generated by the axis (-Omega, 0, Delta) for time t.
Eigen::Vector3d rotate(const Eigen::Vector3d& y, double rabi, double detuning, double t) {
  const Eigen::Vector3d axis(-rabi, 0.0, detuning);
  const double rate = axis.norm();
  if (rate == 0.0) return y;
  const Eigen::Vector3d n = axis / rate;
  const double c = std::cos(rate * t);
  const double s = std::sin(rate * t);
  return y * c + n.cross(y) * s + n * n.dot(y) * (1.0 - c);
}

}  // namespace

std::string_view to_string(EvalMode m) {
  return m == EvalMode::kConsistent ? "consistent" : "paper-literal";
}

EvalMode eval_mode_from_string(std::string_view s) {
  if (s == "consistent") return EvalMode::kConsistent;
  if (s == "paper-literal") return EvalMode::kPaperLiteral;
  throw std::invalid_argument("unknown mode '" + std::string(s) +
                              "' (expected consistent or paper-literal)");
}

void TransitionParams::validate() const {
  if (!(rabi >= 0.0) || !std::isfinite(rabi)) throw std::domain_error("Rabi frequency must be >= 0");
  if (!std::isfinite(detuning)) throw std::domain_error("detuning must be finite");
  if (!(t1 > 0.0)) throw std::domain_error("T1 must be > 0");
  if (!(t2 > 0.0)) throw std::domain_error("T2 must be > 0");
  if (!std::isfinite(w0)) throw std::domain_error("equilibrium inversion must be finite");
}

bool TransitionParams::strong_field() const { return rabi * std::min(t1, t2) > 1.0; }

double beta(const TransitionParams& p) { return std::hypot(p.rabi, p.detuning); }

double xi(const TransitionParams& p) {
  const double inv_t = inverse_time(p.t2);
  const double num = p.rabi * p.w0 * inv_t;
  if (num == 0.0) return 0.0;
  return num / (p.rabi * p.rabi + p.detuning * p.detuning + inv_t * inv_t);
}

BlochSolution general_solution(const TransitionParams& p, const RegimeInit& init, double t) {
  const double inv_t = inverse_time(p.t2);
  const double b = beta(p);
  const double x = xi(p);
  const double denom = b * b + inv_t * inv_t;
  // xi * T, finite even when T is infinite.
  const double xi_t = (p.rabi * p.w0 == 0.0 || denom == 0.0) ? 0.0 : p.rabi * p.w0 / denom;
  const double omega = p.rabi;
  const double delta = p.detuning;

  const double sn = sinc_t(b, t);
  const double vs = versine_t(b, t);
  const double k = delta * init.u0 + omega * init.w_init - x * inv_t;
  const double decay = std::exp(-t * inv_t);

  const double u =
      decay * (init.u0 - delta * (init.v0 - x) * sn + delta * k * vs + delta * xi_t) - delta * xi_t;
  const double v = decay * ((init.v0 - x) * std::cos(b * t) + k * sn) + x;
  const double w =
      decay * (init.w_init - p.w0 - omega * (init.v0 - x) * sn + omega * k * vs + omega * xi_t) +
      p.w0 - omega * xi_t;

  const bool valid = p.strong_field() && p.t1 == p.t2;
  return {{u, v, w, p.transition}, valid};
}

Eigen::Vector3d bloch_rhs(const BlochVector& b, const TransitionParams& p) {
  return bloch_rhs<double>(b.components(), p.rabi, p.detuning, inverse_time(p.t1),
                           inverse_time(p.t2), p.w0);
}

BlochVector propagate(const TransitionParams& p, const RegimeInit& init, double t) {
  const double g1 = inverse_time(p.t1);
  const double g2 = inverse_time(p.t2);
  const Eigen::Vector3d x0 = init.components();

  if (g1 == g2) {
    if (g1 == 0.0) return BlochVector::from(rotate(x0, p.rabi, p.detuning, t), p.transition);
    const Eigen::Matrix3d a = bloch_generator(p.rabi, p.detuning, g1, g2);
    const Eigen::Vector3d source(0.0, 0.0, p.w0 * g1);
    const Eigen::Vector3d steady = -a.partialPivLu().solve(source);
    const Eigen::Vector3d x =
        steady + std::exp(-g1 * t) * rotate(x0 - steady, p.rabi, p.detuning, t);
    return BlochVector::from(x, p.transition);
  }

  Eigen::Matrix4d aug = Eigen::Matrix4d::Zero();
  aug.topLeftCorner<3, 3>() = bloch_generator(p.rabi, p.detuning, g1, g2);
  aug(2, 3) = p.w0 * g1;
  const Eigen::Matrix4d flow = (aug * t).exp();
  const Eigen::Vector4d y = flow * Eigen::Vector4d(x0.x(), x0.y(), x0.z(), 1.0);
  return BlochVector::from(y.head<3>(), p.transition);
}

BlochVector propagate_driven(const std::function<double(double)>& rabi_at, const TransitionParams& p,
                             const RegimeInit& init, double t_begin, double t_end,
                             double max_step) {
  if (!(max_step > 0.0)) throw std::invalid_argument("max_step must be > 0");
  const double g1 = inverse_time(p.t1);
  const double g2 = inverse_time(p.t2);
  Eigen::Vector3d x = init.components();
  const double span = t_end - t_begin;
  if (span <= 0.0) return BlochVector::from(x, p.transition);

  const auto steps = static_cast<long>(std::ceil(span / max_step - 1e-9));
  const double h = span / static_cast<double>(steps);
  auto f = [&](double t, const Eigen::Vector3d& y) {
    return bloch_rhs<double>(y, rabi_at(t), p.detuning, g1, g2, p.w0);
  };
  for (long n = 0; n < steps; ++n) {
    const double t = t_begin + h * static_cast<double>(n);
    const Eigen::Vector3d k1 = f(t, x);
    const Eigen::Vector3d k2 = f(t + 0.5 * h, x + 0.5 * h * k1);
    const Eigen::Vector3d k3 = f(t + 0.5 * h, x + 0.5 * h * k2);
    const Eigen::Vector3d k4 = f(t + h, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return BlochVector::from(x, p.transition);
}

BlochVector regime1_solution(const TransitionParams& p, double t, EvalMode mode) {
  TransitionParams q = p;
  q.transition = Transition::k01;
  if (mode == EvalMode::kConsistent) return propagate(q, RegimeInit{0.0, 0.0, -1.0}, t);

  // Literal form; note the leading +1 in w, so w(0) = +1.
  const double b = beta(q);
  const double decay = std::exp(-t * inverse_time(q.t2));
  const double ratio = b == 0.0 ? 0.0 : q.rabi / b;
  const double u = b == 0.0 ? 0.0 : q.rabi * q.detuning / (b * b) * (1.0 - std::cos(b * t)) * decay;
  const double v = -ratio * std::sin(b * t) * decay;
  const double w = (1.0 + ratio * ratio * (1.0 - std::cos(b * t))) * decay;
  return {u, v, w, Transition::k01};
}

namespace {

BlochVector later_regime(double w_start, TransitionParams p, double t, EvalMode mode,
                         Transition transition) {
  p.transition = transition;
  p.w0 = 0.0;
  if (mode == EvalMode::kConsistent) return propagate(p, RegimeInit{0.0, 0.0, w_start}, t);

  // Literal form; w vanishes at t = 0 whatever w_start is.
  const double phase = beta(p) * t;
  const double decay = std::exp(-t * inverse_time(p.t2));
  const double u = 0.5 * w_start * (std::cos(phase) - 1.0) * decay;
  const double v = -w_start * std::sin(phase) * decay;
  const double w = w_start * (0.5 * (1.0 - std::cos(phase)) - std::sin(phase)) * decay;
  // + 0.0 turns -0 into 0.
  return {u + 0.0, v + 0.0, w + 0.0, transition};
}

}  // namespace

BlochVector regime2_solution(double w_prime_0, const TransitionParams& p, double t, EvalMode mode) {
  return later_regime(w_prime_0, p, t, mode, Transition::k12);
}

BlochVector regime3_solution(double w_dprime_0, const TransitionParams& p, double t, EvalMode mode) {
  return later_regime(w_dprime_0, p, t, mode, Transition::k23);
}

}  // namespace qdcnot
