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

// Finite-dimensional *-algebras of matrices.
//
// Every unital *-algebra A acting on C^d decomposes as
//
//     C^d = (+)_m C^{n_m} (x) C^{k_m},   A = (+)_m M_{n_m} (x) 1_{k_m},
//
// and its commutant is (+)_m 1_{n_m} (x) M_{k_m}. irrep_decompose recovers
// this structure numerically from random elements of the center and of the
// commutant, then aligns the k_m copies of each irreducible factor with
// Schur intertwiners.

#include <cstdint>
#include <span>
#include <vector>

#include "kid/matstack.hpp"

namespace kid {

struct OperatorBasis {
  int dim = 0;
  std::vector<Matrix> basis;  // Hilbert-Schmidt orthonormal
  bool closed_under_product = false;
  bool closed_under_adjoint = false;
  bool contains_identity = false;

  std::size_t size() const { return basis.size(); }
};

struct IrrepBlock {
  int n = 0;        // dimension of the irreducible factor
  int k = 0;        // multiplicity
  Matrix isometry;  // dim x (n*k), column a*k + j is J index a, copy j
};

// Smallest unital *-closed algebra containing `generators`. The basis starts
// with identity/sqrt(dim), followed by the generators' directions in order.
OperatorBasis generate_algebra(std::span<const Matrix> generators, int dim,
                               double tol = kDefaultTol);

OperatorBasis commutant(const OperatorBasis& a, double tol = kDefaultTol);

// A intersected with its commutant.
OperatorBasis center(const OperatorBasis& a, double tol = kDefaultTol);

// Largest residual of projecting `m` onto span(a.basis), relative to ||m||_F.
double span_residual(const OperatorBasis& a, const Matrix& m);

// Distance between the orthogonal projectors onto two operator spans.
double span_distance(const OperatorBasis& a, const OperatorBasis& b);

// Recomputes the three closure flags, each tested at `tol`.
void refresh_flags(OperatorBasis& a, double tol = kDefaultTol);

// Blocks are ordered by descending n, descending k, then ascending real
// trace of the compressed reference element (the first non-identity basis
// direction). Throws DegenerateSample after 8 failed probe draws.
std::vector<IrrepBlock> irrep_decompose(const OperatorBasis& a, std::uint64_t seed,
                                        double tol = kDefaultTol);

// Null space of X -> X*B - B*X over all B, reshaped as matrices.
std::vector<Matrix> commuting_solutions(std::span<const Matrix> ops, int dim,
                                        double tol = kDefaultTol);

// Solutions T (n x n) of T*left[i] == right[i]*T for all i.
std::vector<Matrix> intertwiners(std::span<const Matrix> left,
                                 std::span<const Matrix> right,
                                 double tol = kDefaultTol);

}  // namespace kid
