// Copyright 2026 The kidecomp Authors
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

#include <cmath>
#include <vector>

#include "kid/ensemble.hpp"

namespace kid::testing {

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix diag(std::initializer_list<double> values) {
  RealVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index j = 0;
  for (double x : values) v[j++] = x;
  return v.cast<cplx>().asDiagonal();
}

inline Vector ket(int dim, int index) {
  Vector v = Vector::Zero(dim);
  v[index] = 1.0;
  return v;
}

inline Vector plus_ket() {
  Vector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return v;
}

inline Ensemble make(int dim, std::vector<std::pair<double, Matrix>> entries) {
  RawEnsemble raw{dim, {}};
  for (auto& [p, m] : entries) raw.entries.push_back({p, m});
  return make_ensemble(raw);
}

// {(1/2, |0><0|), (1/2, |+><+|)}
inline Ensemble zero_plus() {
  return make(2, {{0.5, DensityMatrix::pure(ket(2, 0)).matrix()},
                  {0.5, DensityMatrix::pure(plus_ket()).matrix()}});
}

// {(1/2, |0><0|), (1/2, |1><1|)}
inline Ensemble classical_bit() {
  return make(2, {{0.5, DensityMatrix::pure(ket(2, 0)).matrix()},
                  {0.5, DensityMatrix::pure(ket(2, 1)).matrix()}});
}

// (1 + 1/sqrt2)/2 and (1 - 1/sqrt2)/2 are the eigenvalues of the average
// state of zero_plus().
inline double zero_plus_entropy() {
  const double a = (1.0 + 1.0 / std::sqrt(2.0)) / 2.0;
  const double b = 1.0 - a;
  return -a * std::log2(a) - b * std::log2(b);
}

}  // namespace kid::testing
