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
#include <complex>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace qdcnot {

template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;
template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

inline constexpr int kLevels = 4;

/// One of the three driven transitions of the ladder |0> - |1> - |2> - |3>.
/// The pair is ordered (lower index, upper index); the Bloch inversion is
/// always rho[upper][upper] - rho[lower][lower].
enum class Transition { k01, k12, k23 };

constexpr int lower_level(Transition t) { return static_cast<int>(t); }
constexpr int upper_level(Transition t) { return static_cast<int>(t) + 1; }

/// Throws std::domain_error unless (i, j) is one of (0,1), (1,2), (2,3).
Transition transition_from_levels(int i, int j);

std::string_view to_string(Transition t);

/// Bare level angular frequencies omega_00 .. omega_33 (rad/s).
struct LevelStructure {
  std::array<double, kLevels> omega{};

  /// Conduction levels |1>, |2> above valence levels |0>, |3>, and a
  /// nonzero |1>-|2> splitting.
  void validate() const;

  /// |omega_jj - omega_ii| for the pair.
  double transition_frequency(Transition t) const;

  /// Drive detuning from the pair's resonance.
  double detuning(Transition t, double drive_frequency) const;
};

/// 4x4 density matrix over the levels |0>..|3>.
///
/// Construction does not check physicality: closed-form evaluations that
/// reproduce the literal regime formulas can leave the physical cone, and
/// those values still have to be representable. Use validate() at API
/// boundaries.
class DensityMatrix {
 public:
  using Matrix = Matrix4c<double>;

  DensityMatrix() : m_(Matrix::Zero()) {}
  explicit DensityMatrix(const Matrix& m) : m_(m) {}

  /// |level><level|.
  static DensityMatrix basis(int level);
  static DensityMatrix diagonal(const Eigen::Vector4d& populations);

  const Matrix& matrix() const { return m_; }
  std::complex<double> operator()(int i, int j) const { return m_(i, j); }

  double population(int level) const { return m_(level, level).real(); }
  Eigen::Vector4d populations() const { return m_.diagonal().real(); }
  double trace() const { return m_.trace().real(); }

  /// max |rho_ij - conj(rho_ji)|, including imaginary parts of the diagonal.
  double hermiticity_error() const;

  /// Hermitian within tol, diagonals >= -tol, trace <= 1 + 1e-9.
  bool is_physical(double tol = 1e-12) const;

  /// Throws std::domain_error when !is_physical(tol).
  void validate(double tol = 1e-12) const;

  /// Copy with every off-diagonal element set to zero.
  DensityMatrix without_coherences() const;

 private:
  Matrix m_;
};

struct BlochVector {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
  Transition transition = Transition::k01;

  Eigen::Vector3d components() const { return {u, v, w}; }
  double norm() const { return components().norm(); }

  static BlochVector from(const Eigen::Vector3d& c, Transition t) {
    return {c.x(), c.y(), c.z(), t};
  }
};

/// u = rho_ij + rho_ji, v = i (rho_ji - rho_ij), w = rho_jj - rho_ii for
/// the ordered pair (i, j) = (lower, upper).
BlochVector bloch_from_density(const DensityMatrix& rho, Transition t);
BlochVector bloch_from_density(const DensityMatrix& rho, int i, int j);

/// Writes b back into the active 2x2 block of rho_prev. The pair's shared
/// population S = rho_ii + rho_jj is held fixed, so rho_ii = (S - w) / 2 and
/// rho_jj = (S + w) / 2. Spectator populations and every coherence outside
/// the block are left untouched. Throws std::domain_error when S <= 0.
DensityMatrix density_update_from_bloch(const DensityMatrix& rho_prev, const BlochVector& b);

struct TwoQubitLabel {
  int decimal = 0;
  std::string binary;

  friend bool operator==(const TwoQubitLabel&, const TwoQubitLabel&) = default;
};

/// 0 -> "00", 1 -> "01", 2 -> "10", 3 -> "11".
TwoQubitLabel binary_label(int level);
int level_from_binary(std::string_view bits);

}  // namespace qdcnot
