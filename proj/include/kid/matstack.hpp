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

// Dense complex matrix helpers shared by every other module. Rank decisions
// are always relative to the largest singular value (or eigenvalue) of the
// object being truncated.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace kid {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-9;

struct HermitianEigen {
  RealVector values;  // ascending
  Matrix vectors;     // orthonormal columns
};

// Factorizes (m + m^dagger)/2. Throws NotHermitian when
// ||m - m^dagger||_F > tol * ||m||_F and ConvergenceFailure if the solver
// gives up.
HermitianEigen eig_hermitian(const Matrix& m, double tol = kDefaultTol);

// Principal square root of a PSD matrix. Eigenvalues in [-tol*scale, 0) are
// clamped to zero; anything more negative throws NotPSD.
Matrix psd_sqrt(const Matrix& m, double tol = kDefaultTol);

// Hilbert-Schmidt orthonormal basis for the span of `mats`, via an SVD of the
// vectorized stack. Directions with singular value <= tol * sigma_max are
// dropped. Each output is phase-fixed so its largest-magnitude entry is real
// positive.
std::vector<Matrix> orthonormalize_hs(std::span<const Matrix> mats,
                                      double tol = kDefaultTol);

// Orthonormal basis (columns) of ker(a), with singular values
// <= tol * max(sigma_max, scale) counted as zero. `scale` is the magnitude
// the operator would have if it were not (numerically) zero; without it a
// matrix of pure round-off would be reported as full rank.
Matrix null_space(const Matrix& a, double tol = kDefaultTol, double scale = 0.0);

// Tr(a^dagger b).
cplx hs_inner(const Matrix& a, const Matrix& b);

Matrix hermitian_part(const Matrix& m);
Matrix kron(const Matrix& a, const Matrix& b);

// Tr_K of an operator on C^n (x) C^k, J index major.
Matrix partial_trace_k(const Matrix& m, int n, int k);

// Block-diagonal direct sum.
Matrix direct_sum(const Matrix& a, const Matrix& b);

// Column-major vectorization, the convention used by every linear
// superoperator in this library: vec(A X B) = (B^T (x) A) vec(X).
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, int rows, int cols);

// Unitary polar factor U of a = U P.
Matrix polar_unitary(const Matrix& a);

// Multiplies each column by a phase so that its largest-magnitude entry is
// real positive.
void fix_column_phases(Matrix& m);

// Groups sorted eigenvalues into runs whose consecutive gaps are
// <= rel_gap * scale, scale = max(|lambda|, tiny). Returns run start
// offsets plus a trailing sentinel equal to values.size().
std::vector<int> cluster_sorted(const RealVector& values, double rel_gap);

}  // namespace kid
