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

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kid/matstack.hpp"

namespace kid {

/// Hermitian, positive-semidefinite, unit-trace operator.
///
/// `checked` enforces the invariants; `trusted` is for values produced by
/// this library from already-valid inputs (it only re-symmetrizes).
class DensityMatrix {
 public:
  DensityMatrix() : mat_(Matrix::Ones(1, 1)) {}

  static DensityMatrix checked(const Matrix& m, double tol = kDefaultTol);
  static DensityMatrix trusted(const Matrix& m);
  static DensityMatrix pure(const Vector& psi);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& matrix() const { return mat_; }

 private:
  explicit DensityMatrix(Matrix m) : mat_(std::move(m)) {}
  Matrix mat_;
};

struct EnsembleEntry {
  double p;
  DensityMatrix state;
};

struct Ensemble {
  int dim = 0;
  std::vector<EnsembleEntry> entries;

  std::size_t size() const { return entries.size(); }
};

struct Violation {
  std::string invariant;  // e.g. "probability-sum", "hermiticity"
  int index;              // entry index, -1 for ensemble-wide checks
  double residual;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

/// Columns of `isometry` are an orthonormal basis of supp(sum_i p_i rho_i).
struct SupportFrame {
  int ambient_dim = 0;
  int rank = 0;
  Matrix isometry;
};

// Validation runs on raw matrices so that unnormalized or broken input can
// be reported instead of rejected at construction.
struct RawEntry {
  double p;
  Matrix mat;
};
struct RawEnsemble {
  int dim = 0;
  std::vector<RawEntry> entries;
};

ValidationReport validate(const RawEnsemble& e, double tol = kDefaultTol);
ValidationReport validate(const Ensemble& e, double tol = kDefaultTol);

// Throws ValidationError listing the first violations when `raw` is invalid.
Ensemble make_ensemble(const RawEnsemble& raw, double tol = kDefaultTol);

DensityMatrix average_state(const Ensemble& e);

// Restricts every state to the support of the average state. Eigenvalues
// <= tol * lambda_max count as zero. A full-rank average gives the identity
// frame and the input ensemble unchanged.
std::pair<SupportFrame, Ensemble> support_restrict(const Ensemble& e,
                                                   double tol = kDefaultTol);

// Maps an operator on the support back to the ambient space.
Matrix embed(const SupportFrame& frame, const Matrix& restricted);

// File format: {"dim": d, "states": [{"p": x, "matrix": [[[re, im], ...]]}]}
// Reading throws ParseError (with a line or field locus) or ValidationError.
Ensemble read_ensemble(std::string_view text, double tol = kDefaultTol);
RawEnsemble parse_ensemble(std::string_view text);
std::string write_ensemble(const Ensemble& e);

}  // namespace kid
