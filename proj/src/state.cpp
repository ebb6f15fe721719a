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

#include "qdcnot/state.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qdcnot {

Transition transition_from_levels(int i, int j) {
  if (i == 0 && j == 1) return Transition::k01;
  if (i == 1 && j == 2) return Transition::k12;
  if (i == 2 && j == 3) return Transition::k23;
  throw std::domain_error("no driven transition between levels " + std::to_string(i) + " and " +
                          std::to_string(j));
}

std::string_view to_string(Transition t) {
  switch (t) {
    case Transition::k01:
      return "01";
    case Transition::k12:
      return "12";
    case Transition::k23:
      return "23";
  }
  return "?";
}

void LevelStructure::validate() const {
  if (!(omega[1] > omega[0])) throw std::domain_error("level |1> must lie above |0>");
  if (!(omega[2] > omega[3])) throw std::domain_error("level |2> must lie above |3>");
  if (omega[1] == omega[2]) throw std::domain_error("levels |1> and |2> must be split");
}

double LevelStructure::transition_frequency(Transition t) const {
  return std::abs(omega[upper_level(t)] - omega[lower_level(t)]);
}

double LevelStructure::detuning(Transition t, double drive_frequency) const {
  return drive_frequency - transition_frequency(t);
}

DensityMatrix DensityMatrix::basis(int level) {
  if (level < 0 || level >= kLevels) throw std::domain_error("level out of range");
  Matrix m = Matrix::Zero();
  m(level, level) = 1.0;
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::diagonal(const Eigen::Vector4d& populations) {
  Matrix m = Matrix::Zero();
  m.diagonal() = populations.cast<std::complex<double>>();
  return DensityMatrix(m);
}

double DensityMatrix::hermiticity_error() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

bool DensityMatrix::is_physical(double tol) const {
  if (!m_.allFinite()) return false;
  if (hermiticity_error() > tol) return false;
  if ((populations().array() < -tol).any()) return false;
  return trace() <= 1.0 + 1e-9;
}

void DensityMatrix::validate(double tol) const {
  if (!m_.allFinite()) throw std::domain_error("density matrix has non-finite entries");
  if (hermiticity_error() > tol) throw std::domain_error("density matrix is not Hermitian");
  if ((populations().array() < -tol).any()) throw std::domain_error("negative population");
  if (trace() > 1.0 + 1e-9) throw std::domain_error("trace exceeds one");
}

DensityMatrix DensityMatrix::without_coherences() const {
  Matrix m = Matrix::Zero();
  m.diagonal() = m_.diagonal();
  return DensityMatrix(m);
}

BlochVector bloch_from_density(const DensityMatrix& rho, Transition t) {
  const int i = lower_level(t);
  const int j = upper_level(t);
  const std::complex<double> u = rho(i, j) + rho(j, i);
  const std::complex<double> v = std::complex<double>(0.0, 1.0) * (rho(j, i) - rho(i, j));
  return {u.real(), v.real(), rho.population(j) - rho.population(i), t};
}

BlochVector bloch_from_density(const DensityMatrix& rho, int i, int j) {
  return bloch_from_density(rho, transition_from_levels(i, j));
}

DensityMatrix density_update_from_bloch(const DensityMatrix& rho_prev, const BlochVector& b) {
  const int i = lower_level(b.transition);
  const int j = upper_level(b.transition);
  const double shared = rho_prev.population(i) + rho_prev.population(j);
  if (!(shared > 0.0)) {
    throw std::domain_error("degenerate block: no population on transition " +
                            std::string(to_string(b.transition)));
  }
  DensityMatrix::Matrix m = rho_prev.matrix();
  m(i, i) = 0.5 * (shared - b.w);
  m(j, j) = 0.5 * (shared + b.w);
  // rho_ij = (u + i v) / 2 inverts the u, v definitions above.
  m(i, j) = std::complex<double>(0.5 * b.u, 0.5 * b.v);
  m(j, i) = std::conj(m(i, j));
  return DensityMatrix(m);
}

TwoQubitLabel binary_label(int level) {
  static constexpr std::array<std::string_view, kLevels> kBits{"00", "01", "10", "11"};
  if (level < 0 || level >= kLevels) {
    throw std::domain_error("level " + std::to_string(level) + " has no two-qubit label");
  }
  return {level, std::string(kBits[static_cast<std::size_t>(level)])};
}

int level_from_binary(std::string_view bits) {
  if (bits.size() != 2 || (bits[0] != '0' && bits[0] != '1') || (bits[1] != '0' && bits[1] != '1')) {
    throw std::domain_error("not a two-bit label: " + std::string(bits));
  }
  return (bits[0] - '0') * 2 + (bits[1] - '0');
}

}  // namespace qdcnot
