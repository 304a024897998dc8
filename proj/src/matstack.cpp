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

#include "kid/matstack.hpp"

#include <algorithm>
#include <cmath>

#include "kid/error.hpp"

namespace kid {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::FormViolation: return "FormViolation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::EmptyTypicalSet: return "EmptyTypicalSet";
    case ErrorCode::ConfigTooLarge: return "ConfigTooLarge";
    case ErrorCode::RejectionExhausted: return "RejectionExhausted";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian:
    case ErrorCode::NotPSD:
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::DimensionOverflow:
    case ErrorCode::DegenerateSample:
    case ErrorCode::FormViolation:
    case ErrorCode::EmptyTypicalSet:
    case ErrorCode::RejectionExhausted:
      return true;
    default:
      return false;
  }
}

HermitianEigen eig_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::InvalidArgument, "eig_hermitian: matrix is not square");
  }
  if (!m.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "eig_hermitian: non-finite entry");
  }
  const double norm = m.norm();
  const double asym = (m - m.adjoint()).norm();
  if (asym > tol * norm) {
    throw Error(ErrorCode::NotHermitian,
                "asymmetry " + std::to_string(asym) + " exceeds tolerance");
  }
  const Matrix h = hermitian_part(m);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix psd_sqrt(const Matrix& m, double tol) {
  auto eig = eig_hermitian(m, tol);
  const double scale = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  RealVector root(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double lambda = eig.values[i];
    if (lambda < -tol * scale) {
      throw Error(ErrorCode::NotPSD, "eigenvalue " + std::to_string(lambda));
    }
    root[i] = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
  }
  return eig.vectors * root.asDiagonal() * eig.vectors.adjoint();
}

std::vector<Matrix> orthonormalize_hs(std::span<const Matrix> mats, double tol) {
  std::vector<Matrix> out;
  if (mats.empty()) return out;
  const auto rows = mats.front().rows();
  const auto cols = mats.front().cols();
  Matrix stack(rows * cols, static_cast<Eigen::Index>(mats.size()));
  for (std::size_t j = 0; j < mats.size(); ++j) {
    if (mats[j].rows() != rows || mats[j].cols() != cols) {
      throw Error(ErrorCode::InvalidArgument, "orthonormalize_hs: dimension mismatch");
    }
    stack.col(static_cast<Eigen::Index>(j)) = vec(mats[j]);
  }
  Eigen::JacobiSVD<Matrix> svd(stack, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return out;
  Matrix u = svd.matrixU();
  fix_column_phases(u);
  for (Eigen::Index j = 0; j < sv.size(); ++j) {
    if (sv[j] <= tol * sv[0]) break;
    out.push_back(unvec(u.col(j), static_cast<int>(rows), static_cast<int>(cols)));
  }
  return out;
}

Matrix null_space(const Matrix& a, double tol, double scale) {
  const auto n = a.cols();
  if (a.rows() == 0 || a.norm() == 0.0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd;
  if (a.rows() > n) {
    // Tall systems are squeezed through a QR first; the SVD of R shares
    // the right singular vectors of a and costs O(n^3) instead of O(m n^2).
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    svd.compute(r, Eigen::ComputeFullV);
  } else {
    svd.compute(a, Eigen::ComputeFullV);
  }
  const auto& sv = svd.singularValues();
  const double cutoff = tol * std::max(sv[0], scale);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv[rank] > cutoff) ++rank;
  Matrix kernel = svd.matrixV().rightCols(n - rank);
  fix_column_phases(kernel);
  return kernel;
}

cplx hs_inner(const Matrix& a, const Matrix& b) {
  return (a.adjoint() * b).trace();
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix partial_trace_k(const Matrix& m, int n, int k) {
  Matrix out = Matrix::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      cplx acc = 0.0;
      for (int j = 0; j < k; ++j) acc += m(a * k + j, b * k + j);
      out(a, b) = acc;
    }
  }
  return out;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, int rows, int cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix polar_unitary(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

void fix_column_phases(Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      // Ties are broken toward the first index, with a relative slack so
      // round-off cannot flip the choice between two equal entries.
      const double v = std::abs(m(i, j));
      if (v > best_abs * (1.0 + 1e-12) + 1e-300) {
        best_abs = v;
        best = i;
      }
    }
    if (best_abs > 0.0) m.col(j) *= std::conj(m(best, j)) / best_abs;
  }
}

std::vector<int> cluster_sorted(const RealVector& values, double rel_gap) {
  std::vector<int> starts;
  const auto n = static_cast<int>(values.size());
  if (n == 0) return {0};
  const double scale = std::max(values.cwiseAbs().maxCoeff(), 1e-300);
  starts.push_back(0);
  for (int i = 1; i < n; ++i) {
    if (values[i] - values[i - 1] > rel_gap * scale) starts.push_back(i);
  }
  starts.push_back(n);
  return starts;
}

}  // namespace kid
