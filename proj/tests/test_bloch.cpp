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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qdcnot/bloch.hpp"

using namespace qdcnot;
using std::numbers::pi;

namespace {

TransitionParams params(double rabi, double detuning, double t1 = kNoDecay, double t2 = kNoDecay, double w0 = 0.0) {
  TransitionParams p;
  p.rabi = rabi;
  p.detuning = detuning;
  p.t1 = t1;
  p.t2 = t2;
  p.w0 = w0;
  return p;
}

RegimeInit ground() { return {0.0, 0.0, -1.0}; }

}  // namespace

TEST_CASE("generalized Rabi frequency") {
  CHECK(beta(params(3, 4)) == doctest::Approx(5));
  CHECK(beta(params(1, 0)) == doctest::Approx(1));
  CHECK(beta(params(0, 2)) == doctest::Approx(2));
}

TEST_CASE("steady-state source parameter") {
  CHECK(xi(params(1, 0.3, 5, 5, 0.0)) == 0.0);
  CHECK(xi(params(1, 0, 1, 1, 1.0)) == doctest::Approx(0.5));
  CHECK(xi(params(0, 0.7, 2, 2, 0.8)) == 0.0);
}

TEST_CASE("general solution: initial values") {
  const TransitionParams p = params(2.0, 0.5, 30, 30, 0.0);
  const RegimeInit init{0.3, -0.2, -0.6};
  const BlochVector b = general_solution(p, init, 0.0).value;
  CHECK(b.u == doctest::Approx(0.3));
  CHECK(b.v == doctest::Approx(-0.2));
  CHECK(b.w == doctest::Approx(-0.6));
}

TEST_CASE("general solution: undamped resonant nutation") {
  const TransitionParams p = params(1.3, 0.0);
  for (double t : {0.1, 0.9, 2.5, 7.0}) {
    const BlochVector b = general_solution(p, ground(), t).value;
    CHECK(b.u == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(b.v == doctest::Approx(-std::sin(1.3 * t)));
    CHECK(b.w == doctest::Approx(-std::cos(1.3 * t)));
  }
}

TEST_CASE("general solution: pure relaxation") {
  const TransitionParams p = params(0.0, 0.0, 4.0, 4.0, 0.0);
  const BlochSolution s = general_solution(p, ground(), 3.0);
  CHECK(s.value.u == 0.0);
  CHECK(s.value.v == 0.0);
  CHECK(s.value.w == doctest::Approx(-std::exp(-3.0 / 4.0)));
  CHECK_FALSE(s.within_validity);
}

TEST_CASE("general solution flags the weak-field regime") {
  CHECK(general_solution(params(1.0, 0.0, 50, 50), ground(), 1.0).within_validity);
  CHECK_FALSE(general_solution(params(1.0, 0.0, 0.5, 0.5), ground(), 1.0).within_validity);
  CHECK_FALSE(general_solution(params(1.0, 0.0, 50, 40), ground(), 1.0).within_validity);
}

TEST_CASE("property: general solution tracks the damped envelope in the strong-field limit") {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 50; ++n) {
    const double rabi = oracle::uniform(rng, 0.5, 3.0);
    const double t = oracle::uniform(rng, 20.0, 200.0) / rabi;
    const TransitionParams p = params(rabi, 0.0, t, t);
    const double bound = 1.0 / (rabi * t);
    for (double tt = 0.0; tt <= 2 * pi / rabi; tt += 0.05 / rabi) {
      const BlochVector b = general_solution(p, ground(), tt).value;
      const double damping = std::exp(-tt / t);
      CHECK(std::abs(b.w + std::cos(rabi * tt) * damping) <= bound);
      CHECK(std::abs(b.v + std::sin(rabi * tt) * damping) <= bound);
    }
  }
}

TEST_CASE("property: general solution is exact for uniform damping without a source") {
  std::mt19937_64 rng(31);
  for (int n = 0; n < 100; ++n) {
    const double t2 = oracle::uniform(rng, 5, 100);
    const TransitionParams p = params(oracle::uniform(rng, 0.2, 3), oracle::uniform(rng, -2, 2), t2, t2);
    const RegimeInit init{oracle::uniform(rng, -0.5, 0.5), oracle::uniform(rng, -0.5, 0.5), -0.7};
    const double t = oracle::uniform(rng, 0, 10);
    const Eigen::Vector3d expected = oracle::bloch(p.rabi, p.detuning, t2, t2, 0.0, init.components(), t);
    CHECK((general_solution(p, init, t).value.components() - expected).norm() < 1e-10);
  }
}

TEST_CASE("Bloch right-hand side") {
  const Eigen::Vector3d eq = bloch_rhs({0, 0, 0.4, Transition::k01}, params(0.0, 1.0, 3, 2, 0.4));
  CHECK(eq.norm() < 1e-15);

  const Eigen::Vector3d slope = bloch_rhs({0, 0, -1, Transition::k01}, params(1.7, 0.0));
  CHECK(slope.x() == 0.0);
  CHECK(slope.y() == doctest::Approx(-1.7));
  CHECK(slope.z() == 0.0);

  const Eigen::Vector3d dephase = bloch_rhs({1, 0, 0, Transition::k01}, params(0.0, 0.0, 4.0, 2.0, 0.5));
  CHECK(dephase.x() == doctest::Approx(-0.5));
  CHECK(dephase.y() == 0.0);
  CHECK(dephase.z() == doctest::Approx(0.125));

  const Eigen::Vector3d generic = bloch_rhs({0.2, -0.4, 0.3, Transition::k12}, params(1.5, 0.7, 5.0, 2.0, -0.1));
  CHECK(generic.x() == doctest::Approx(-0.7 * -0.4 - 0.2 / 2.0));
  CHECK(generic.y() == doctest::Approx(0.7 * 0.2 + 1.5 * 0.3 + 0.4 / 2.0));
  CHECK(generic.z() == doctest::Approx(-1.5 * -0.4 - (0.3 + 0.1) / 5.0));
}

TEST_CASE("regime I") {
  const TransitionParams p = params(2.0, 0.0);
  const BlochVector half = regime1_solution(p, pi / 2.0);
  CHECK(half.w == doctest::Approx(1.0));
  CHECK((1.0 + half.w) / 2.0 == doctest::Approx(1.0));
  const BlochVector start = regime1_solution(p, 0.0);
  CHECK(start.u == 0.0);
  CHECK(start.v == 0.0);
  CHECK(start.w == -1.0);
  CHECK(regime1_solution(p, 0.0, EvalMode::kPaperLiteral).w == 1.0);
  CHECK(regime1_solution(params(1.0, 0.4, 30, 30), 0.0, EvalMode::kPaperLiteral).w == 1.0);
}

TEST_CASE("regime II") {
  const TransitionParams p = params(1.1, 0.3, 40, 25);
  const BlochVector literal = regime2_solution(-2.0 / 3.0, p, 0.0, EvalMode::kPaperLiteral);
  CHECK(literal.u == 0.0);
  CHECK(literal.v == 0.0);
  CHECK(literal.w == 0.0);
  const BlochVector consistent = regime2_solution(-2.0 / 3.0, p, 0.0);
  CHECK(consistent.u == 0.0);
  CHECK(consistent.v == 0.0);
  CHECK(consistent.w == doctest::Approx(-2.0 / 3.0));
  CHECK(consistent.transition == Transition::k12);
}

TEST_CASE("regime III") {
  const BlochVector start = regime3_solution(-0.25, params(1.0, 0.0, 40, 40), 0.0);
  CHECK(start.w == doctest::Approx(-0.25));
  CHECK(start.transition == Transition::k23);
  const BlochVector flip = regime3_solution(-1.0 / 3.0, params(1.0, 0.0), pi);
  CHECK(flip.w == doctest::Approx(1.0 / 3.0));
  CHECK(regime3_solution(-0.4, params(1.0, 0.2, 40, 40), 0.0, EvalMode::kPaperLiteral).w == 0.0);
}

TEST_CASE("property: consistent solutions satisfy the Bloch equations") {
  std::mt19937_64 rng(2026);
  const double h = 1e-4;
  for (int n = 0; n < 200; ++n) {
    const double t1 = oracle::uniform(rng, 2, 80);
    const double t2 = n % 2 ? t1 : oracle::uniform(rng, 1, t1);
    const TransitionParams p =
        params(oracle::uniform(rng, 0.1, 3), oracle::uniform(rng, -2, 2), t1, t2, oracle::uniform(rng, -1, 1));
    const RegimeInit init{oracle::uniform(rng, -0.5, 0.5), oracle::uniform(rng, -0.5, 0.5), oracle::uniform(rng, -1, 0)};
    const double t = oracle::uniform(rng, 0.5, 20);
    const BlochVector at = propagate(p, init, t);
    const Eigen::Vector3d rhs = bloch_rhs(at, p);
    for (int k = 0; k < 3; ++k) {
      const double fd = oracle::derivative([&](double s) { return propagate(p, init, s).components()(k); }, t, h);
      CHECK(std::abs(fd - rhs(k)) < 1e-6);
    }
  }
}

TEST_CASE("property: exact propagation agrees with an independent matrix exponential") {
  std::mt19937_64 rng(99);
  for (int n = 0; n < 200; ++n) {
    const double t1 = oracle::uniform(rng, 1, 100);
    const double t2 = oracle::uniform(rng, 1, 100);
    const TransitionParams p =
        params(oracle::uniform(rng, 0, 3), oracle::uniform(rng, -3, 3), t1, t2, oracle::uniform(rng, -1, 1));
    const RegimeInit init{oracle::uniform(rng, -0.5, 0.5), oracle::uniform(rng, -0.5, 0.5), oracle::uniform(rng, -1, 1)};
    const double t = oracle::uniform(rng, 0, 30);
    const Eigen::Vector3d expected = oracle::bloch(p.rabi, p.detuning, t1, t2, p.w0, init.components(), t);
    CHECK((propagate(p, init, t).components() - expected).norm() < 1e-10);
  }
}

TEST_CASE("property: undamped resonant nutation conserves the Bloch norm") {
  const TransitionParams p = params(1.0, 0.0);
  const RegimeInit init{0.3, 0.0, -std::sqrt(1 - 0.09)};
  for (double t = 0.0; t <= 20 * pi; t += 0.01) {
    CHECK(std::abs(regime1_solution(p, t).norm() - 1.0) < 1e-9);
    CHECK(std::abs(propagate(p, init, t).norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("property: both modes relax to the origin") {
  const TransitionParams p = params(1.0, 0.2, 10, 10);
  for (double w0 : {-0.3, -0.8}) {
    for (EvalMode m : {EvalMode::kConsistent, EvalMode::kPaperLiteral}) {
      CHECK(regime2_solution(w0, p, 400.0, m).norm() < 1e-12);
      CHECK(regime3_solution(w0, p, 400.0, m).norm() < 1e-12);
    }
  }
  CHECK(regime1_solution(p, 400.0, EvalMode::kPaperLiteral).norm() < 1e-12);
  CHECK(regime1_solution(p, 400.0).norm() < 1e-12);
}

TEST_CASE("property: consistent solutions depend only on dimensionless groups") {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 100; ++n) {
    const double k = oracle::uniform(rng, 0.1, 10);
    const TransitionParams p = params(oracle::uniform(rng, 0.2, 2), oracle::uniform(rng, -1, 1),
                                      oracle::uniform(rng, 5, 50), oracle::uniform(rng, 5, 50));
    TransitionParams q = p;
    q.rabi *= k;
    q.detuning *= k;
    q.t1 /= k;
    q.t2 /= k;
    const double t = oracle::uniform(rng, 0, 10);
    CHECK((regime1_solution(p, t).components() - regime1_solution(q, t / k).components()).norm() < 1e-10);
    CHECK((regime2_solution(-0.4, p, t).components() - regime2_solution(-0.4, q, t / k).components()).norm() <
          1e-10);
    CHECK((regime3_solution(-0.2, p, t).components() - regime3_solution(-0.2, q, t / k).components()).norm() <
          1e-10);
  }
}

TEST_CASE("driven propagation with a constant drive matches the exact form") {
  const TransitionParams p = params(1.4, 0.3, 20, 12, 0.1);
  const RegimeInit init{0.1, 0.2, -0.8};
  const BlochVector exact = propagate(p, init, 6.0);
  const BlochVector rk = propagate_driven([](double) { return 1.4; }, p, init, 2.0, 8.0, 1e-3);
  CHECK((exact.components() - rk.components()).norm() < 1e-10);
}

TEST_CASE("mode names") {
  CHECK(to_string(EvalMode::kPaperLiteral) == "paper-literal");
  CHECK(eval_mode_from_string("consistent") == EvalMode::kConsistent);
  CHECK(eval_mode_from_string(to_string(EvalMode::kPaperLiteral)) == EvalMode::kPaperLiteral);
  CHECK_THROWS(eval_mode_from_string("exact"));
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(params(1, 0, 1, 1).validate());
  CHECK_THROWS(params(-1, 0).validate());
  CHECK_THROWS(params(1, 0, 0.0, 1).validate());
  CHECK_THROWS(params(1, 0, 1, -2).validate());
}
