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

#include "kid/ensemble.hpp"

#include <cmath>
#include <sstream>

#include "kid/error.hpp"

namespace kid {

namespace {

void check_state(const Matrix& m, int dim, int index, double tol,
                 std::vector<Violation>& out) {
  if (m.rows() != dim || m.cols() != dim) {
    out.push_back({"shape", index, static_cast<double>(std::abs(m.rows() - dim) +
                                                       std::abs(m.cols() - dim))});
    return;
  }
  if (!m.allFinite()) {
    out.push_back({"finite", index, 0.0});
    return;
  }
  const double asym = (m - m.adjoint()).norm();
  if (asym > tol * std::max(1.0, m.norm())) {
    out.push_back({"hermiticity", index, asym});
  }
  const Matrix h = hermitian_part(m);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().size() ? solver.eigenvalues()[0] : 0.0;
  if (min_eig < -tol) out.push_back({"positivity", index, -min_eig});
  const double tr_err = std::abs(h.trace().real() - 1.0);
  if (tr_err > tol) out.push_back({"trace", index, tr_err});
}

}  // namespace

DensityMatrix DensityMatrix::checked(const Matrix& m, double tol) {
  std::vector<Violation> v;
  check_state(m, static_cast<int>(m.rows()), 0, tol, v);
  if (!v.empty()) {
    throw Error(ErrorCode::ValidationError,
                "density matrix violates " + v.front().invariant + " (residual " +
                    std::to_string(v.front().residual) + ")");
  }
  return DensityMatrix(hermitian_part(m));
}

DensityMatrix DensityMatrix::trusted(const Matrix& m) {
  return DensityMatrix(hermitian_part(m));
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  const Vector unit = psi / psi.norm();
  return DensityMatrix(unit * unit.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t j = 0; j < violations.size(); ++j) {
    const auto& v = violations[j];
    if (j) os << "; ";
    os << v.invariant;
    if (v.index >= 0) os << " at states[" << v.index << "]";
    os << " (residual " << v.residual << ")";
  }
  return os.str();
}

ValidationReport validate(const RawEnsemble& e, double tol) {
  ValidationReport report;
  auto& out = report.violations;
  if (e.dim <= 0) {
    out.push_back({"dim-positive", -1, static_cast<double>(e.dim)});
    return report;
  }
  if (e.entries.empty()) out.push_back({"non-empty", -1, 0.0});
  double total = 0.0;
  for (std::size_t i = 0; i < e.entries.size(); ++i) {
    const auto& entry = e.entries[i];
    const int idx = static_cast<int>(i);
    if (!std::isfinite(entry.p) || entry.p <= 0.0) {
      out.push_back({"probability-positive", idx, entry.p});
    }
    total += entry.p;
    check_state(entry.mat, e.dim, idx, tol, out);
  }
  if (!e.entries.empty() && std::abs(total - 1.0) > tol) {
    out.push_back({"probability-sum", -1, std::abs(total - 1.0)});
  }
  return report;
}

ValidationReport validate(const Ensemble& e, double tol) {
  RawEnsemble raw{e.dim, {}};
  for (const auto& entry : e.entries) raw.entries.push_back({entry.p, entry.state.matrix()});
  return validate(raw, tol);
}

Ensemble make_ensemble(const RawEnsemble& raw, double tol) {
  auto report = validate(raw, tol);
  if (!report.ok()) throw Error(ErrorCode::ValidationError, report.summary());
  Ensemble e{raw.dim, {}};
  for (const auto& entry : raw.entries) {
    e.entries.push_back({entry.p, DensityMatrix::trusted(entry.mat)});
  }
  return e;
}

DensityMatrix average_state(const Ensemble& e) {
  Matrix acc = Matrix::Zero(e.dim, e.dim);
  for (const auto& entry : e.entries) acc += entry.p * entry.state.matrix();
  return DensityMatrix::trusted(acc);
}

std::pair<SupportFrame, Ensemble> support_restrict(const Ensemble& e, double tol) {
  const auto rho = average_state(e);
  auto eig = eig_hermitian(rho.matrix(), tol);
  const int d = e.dim;
  const double lmax = eig.values[d - 1];
  // Kept eigenvectors are listed by descending eigenvalue.
  std::vector<int> kept;
  for (int j = d - 1; j >= 0; --j) {
    if (eig.values[j] > tol * lmax) kept.push_back(j);
  }
  SupportFrame frame{d, static_cast<int>(kept.size()), {}};
  if (frame.rank == d) {
    frame.isometry = Matrix::Identity(d, d);
    return {frame, e};
  }
  frame.isometry.resize(d, frame.rank);
  for (int c = 0; c < frame.rank; ++c) frame.isometry.col(c) = eig.vectors.col(kept[c]);
  fix_column_phases(frame.isometry);

  Ensemble restricted{frame.rank, {}};
  for (const auto& entry : e.entries) {
    Matrix m = frame.isometry.adjoint() * entry.state.matrix() * frame.isometry;
    // The discarded weight is round-off; renormalize so the restricted state
    // has unit trace exactly.
    m /= m.trace().real();
    restricted.entries.push_back({entry.p, DensityMatrix::trusted(m)});
  }
  return {frame, restricted};
}

Matrix embed(const SupportFrame& frame, const Matrix& restricted) {
  return frame.isometry * restricted * frame.isometry.adjoint();
}

}  // namespace kid
