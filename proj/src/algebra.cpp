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

#include "kid/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kid/error.hpp"
#include "kid/rng.hpp"

namespace kid {

namespace {

constexpr int kMaxProbeAttempts = 8;

// Incremental Gram-Schmidt with one re-orthogonalization pass. A candidate
// is accepted when its residual exceeds tol * ref, where ref is the scale of
// the round-off the candidate carries (the product of its factors' norms).
class SpanBuilder {
 public:
  SpanBuilder(int dim, double tol) : dim_(dim), tol_(tol) {}

  bool add(const Matrix& m, double ref) {
    Matrix r = m;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis_) r -= hs_inner(b, r) * b;
    }
    const double nr = r.norm();
    if (nr <= tol_ * ref) return false;
    basis_.push_back(r / nr);
    words_.push_back(m / m.norm());
    if (basis_.size() > static_cast<std::size_t>(dim_) * dim_) {
      throw Error(ErrorCode::DimensionOverflow,
                  "operator span exceeds dim^2; tolerance too tight for the input");
    }
    return true;
  }

  std::vector<Matrix>& basis() { return basis_; }
  // The accepted inputs themselves, normalized but not orthogonalized.
  const std::vector<Matrix>& words() const { return words_; }

 private:
  int dim_;
  double tol_;
  std::vector<Matrix> basis_;
  std::vector<Matrix> words_;
};

Matrix project(const std::vector<Matrix>& basis, const Matrix& m) {
  Matrix p = Matrix::Zero(m.rows(), m.cols());
  for (const auto& b : basis) p += hs_inner(b, m) * b;
  return p;
}

Matrix random_self_adjoint(const std::vector<Matrix>& span, Rng& rng) {
  Matrix x = Matrix::Zero(span.front().rows(), span.front().cols());
  for (const auto& b : span) x += cplx(standard_normal(rng), standard_normal(rng)) * b;
  return hermitian_part(x);
}

std::vector<Matrix> compress_all(const std::vector<Matrix>& ops, const Matrix& w) {
  std::vector<Matrix> out;
  out.reserve(ops.size());
  for (const auto& op : ops) out.push_back(w.adjoint() * op * w);
  return out;
}

struct ProbeFailed {};

}  // namespace

double span_residual(const OperatorBasis& a, const Matrix& m) {
  const double nm = m.norm();
  if (nm == 0.0) return 0.0;
  return (m - project(a.basis, m)).norm() / nm;
}

double span_distance(const OperatorBasis& a, const OperatorBasis& b) {
  // ||P_a - P_b||_F^2 = sum_j ||(1 - P_a) b_j||^2 + sum_i ||(1 - P_b) a_i||^2
  // for orthonormal bases; summing residuals avoids the cancellation in
  // |a| + |b| - 2 Tr(P_a P_b).
  double sq = 0.0;
  for (const auto& y : b.basis) sq += (y - project(a.basis, y)).squaredNorm();
  for (const auto& x : a.basis) sq += (x - project(b.basis, x)).squaredNorm();
  return std::sqrt(sq);
}

void refresh_flags(OperatorBasis& a, double tol) {
  const Matrix id = Matrix::Identity(a.dim, a.dim);
  a.contains_identity = span_residual(a, id) <= tol;
  a.closed_under_adjoint = true;
  a.closed_under_product = true;
  for (const auto& x : a.basis) {
    if (span_residual(a, x.adjoint()) > tol) a.closed_under_adjoint = false;
  }
  for (const auto& x : a.basis) {
    for (const auto& y : a.basis) {
      const Matrix xy = x * y;
      // Products of unit-norm elements: measure against the unit scale, not
      // ||xy||, which can be tiny by cancellation.
      if ((xy - project(a.basis, xy)).norm() > tol) {
        a.closed_under_product = false;
        return;
      }
    }
  }
}

namespace {

OperatorBasis product_closure(std::span<const Matrix> generators, int dim, double tol) {
  SpanBuilder span(dim, tol);
  span.add(Matrix::Identity(dim, dim), 1.0);
  for (const auto& g : generators) {
    const double ng = g.norm();
    if (ng == 0.0) continue;
    span.add(g / ng, 1.0);
    span.add(g.adjoint() / ng, 1.0);
  }

  // Breadth-first product rounds. Pairs of elements that were both present
  // in the previous round are already known to close, so each round only
  // multiplies pairs that involve a newly added element.
  //
  // Products are formed from the raw words, not the orthonormal basis: a
  // basis vector admitted with a small residual carries round-off scaled
  // by 1/residual, and multiplying such vectors compounds that error until
  // noise clears the threshold.
  const auto& words = span.words();
  std::size_t settled = 0;
  while (settled < words.size()) {
    const std::size_t current = words.size();
    for (std::size_t i = 0; i < current; ++i) {
      for (std::size_t j = (i < settled ? settled : 0); j < current; ++j) {
        span.add(words[i] * words[j], 1.0);
      }
    }
    for (std::size_t i = settled; i < current; ++i) span.add(words[i].adjoint(), 1.0);
    settled = current;
  }
  OperatorBasis out;
  out.dim = dim;
  out.basis = std::move(span.basis());
  refresh_flags(out, tol);
  return out;
}

}  // namespace

OperatorBasis generate_algebra(std::span<const Matrix> generators, int dim, double tol) {
  if (dim <= 0) throw Error(ErrorCode::InvalidArgument, "generate_algebra: dim must be positive");
  for (const auto& g : generators) {
    if (g.rows() != dim || g.cols() != dim) {
      throw Error(ErrorCode::InvalidArgument, "generate_algebra: generator dimension mismatch");
    }
  }
  try {
    auto closed = product_closure(generators, dim, tol);
    if (closed.closed_under_product && closed.closed_under_adjoint && closed.contains_identity) {
      return closed;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DimensionOverflow) throw;
  }
  // Closure lost the span to round-off (small eigenvalue gaps make the
  // distinguishing products nearly collinear). The commutant of the
  // generators is a well-conditioned null space, and its commutant is the
  // same algebra.
  std::vector<Matrix> ops;
  for (const auto& g : generators) {
    ops.push_back(g);
    ops.push_back(g.adjoint());
  }
  const auto outer = commuting_solutions(ops, dim, tol);
  OperatorBasis out;
  out.dim = dim;
  out.basis = commuting_solutions(outer, dim, tol);
  refresh_flags(out, tol);
  return out;
}

std::vector<Matrix> commuting_solutions(std::span<const Matrix> ops, int dim, double tol) {
  const int d2 = dim * dim;
  const Matrix id = Matrix::Identity(dim, dim);
  Matrix stacked(static_cast<Eigen::Index>(ops.size()) * d2, d2);
  for (std::size_t j = 0; j < ops.size(); ++j) {
    stacked.middleRows(static_cast<Eigen::Index>(j) * d2, d2) =
        kron(ops[j].transpose(), id) - kron(id, ops[j]);
  }
  const Matrix kernel = ops.empty() ? Matrix::Identity(d2, d2) : null_space(stacked, tol, 1.0);
  std::vector<Matrix> out;
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) out.push_back(unvec(kernel.col(c), dim, dim));
  return out;
}

std::vector<Matrix> intertwiners(std::span<const Matrix> left, std::span<const Matrix> right,
                                 double tol) {
  if (left.size() != right.size() || left.empty()) {
    throw Error(ErrorCode::InvalidArgument, "intertwiners: operator lists must match");
  }
  const auto n = static_cast<int>(left.front().rows());
  const auto m = static_cast<int>(right.front().rows());
  const Matrix id_n = Matrix::Identity(n, n);
  const Matrix id_m = Matrix::Identity(m, m);
  Matrix stacked(static_cast<Eigen::Index>(left.size()) * n * m, n * m);
  for (std::size_t j = 0; j < left.size(); ++j) {
    stacked.middleRows(static_cast<Eigen::Index>(j) * n * m, n * m) =
        kron(left[j].transpose(), id_m) - kron(id_n, right[j]);
  }
  const Matrix kernel = null_space(stacked, tol, 1.0);
  std::vector<Matrix> out;
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) out.push_back(unvec(kernel.col(c), m, n));
  return out;
}

OperatorBasis commutant(const OperatorBasis& a, double tol) {
  OperatorBasis out;
  out.dim = a.dim;
  out.basis = commuting_solutions(a.basis, a.dim, tol);
  refresh_flags(out, tol);
  return out;
}

OperatorBasis center(const OperatorBasis& a, double tol) {
  const int d2 = a.dim * a.dim;
  const auto m = static_cast<Eigen::Index>(a.size());
  Matrix stacked(m * d2, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto& aj = a.basis[static_cast<std::size_t>(j)];
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto& ak = a.basis[static_cast<std::size_t>(k)];
      stacked.block(j * d2, k, d2, 1) = vec(ak * aj - aj * ak);
    }
  }
  const Matrix coeffs = null_space(stacked, tol, 1.0);
  OperatorBasis out;
  out.dim = a.dim;
  for (Eigen::Index c = 0; c < coeffs.cols(); ++c) {
    Matrix z = Matrix::Zero(a.dim, a.dim);
    for (Eigen::Index k = 0; k < m; ++k) z += coeffs(k, c) * a.basis[static_cast<std::size_t>(k)];
    out.basis.push_back(z);
  }
  refresh_flags(out, tol);
  return out;
}

std::vector<IrrepBlock> irrep_decompose(const OperatorBasis& a, std::uint64_t seed, double tol) {
  if (a.basis.empty()) throw Error(ErrorCode::InvalidArgument, "irrep_decompose: empty basis");
  const int dim = a.dim;
  const OperatorBasis z = center(a, tol);
  const OperatorBasis comm = commutant(a, tol);
  const double gap = std::sqrt(tol);
  Rng rng = make_rng(seed);

  for (int attempt = 0; attempt < kMaxProbeAttempts; ++attempt) {
    try {
      // Central blocks: eigenspaces of a generic self-adjoint central element.
      const auto central = eig_hermitian(random_self_adjoint(z.basis, rng), tol);
      const auto starts = cluster_sorted(central.values, gap);
      if (starts.size() - 1 != z.size()) throw ProbeFailed{};

      std::vector<IrrepBlock> blocks;
      std::size_t algebra_dim = 0;
      for (std::size_t c = 0; c + 1 < starts.size(); ++c) {
        const int r = starts[c + 1] - starts[c];
        const Matrix w = central.vectors.middleCols(starts[c], r);
        const auto comm_w = compress_all(comm.basis, w);
        const auto alg_w = compress_all(a.basis, w);

        // Restricted to the block the commutant is 1_n (x) M_k: a generic
        // self-adjoint element has k distinct eigenvalues, each n-fold.
        const auto mult = eig_hermitian(random_self_adjoint(comm_w, rng), tol);
        const auto copies = cluster_sorted(mult.values, gap);
        const int k = static_cast<int>(copies.size()) - 1;
        if (r % k != 0) throw ProbeFailed{};
        const int n = r / k;
        for (int j = 0; j < k; ++j) {
          if (copies[j + 1] - copies[j] != n) throw ProbeFailed{};
        }

        IrrepBlock block{n, k, Matrix(dim, n * k)};
        const Matrix e1 = mult.vectors.middleCols(copies[0], n);
        const auto left = compress_all(alg_w, e1);
        for (int j = 0; j < k; ++j) {
          const Matrix ej = mult.vectors.middleCols(copies[j], n);
          Matrix t = Matrix::Identity(n, n);
          if (j > 0) {
            const auto right = compress_all(alg_w, ej);
            const auto sols = intertwiners(left, right, tol);
            // Schur: irreducible copies admit a one-dimensional intertwiner space.
            if (sols.size() != 1) throw ProbeFailed{};
            t = polar_unitary(sols.front());
            Eigen::Index pivot = 0;
            t.col(0).cwiseAbs().maxCoeff(&pivot);
            t *= std::conj(t(pivot, 0)) / std::abs(t(pivot, 0));
          }
          const Matrix cols = w * ej * t;
          for (int aa = 0; aa < n; ++aa) block.isometry.col(aa * k + j) = cols.col(aa);
        }
        algebra_dim += static_cast<std::size_t>(n) * n;
        blocks.push_back(std::move(block));
      }
      if (algebra_dim != a.size()) throw ProbeFailed{};

      const Matrix& ref = a.basis[a.size() > 1 ? 1 : 0];
      std::vector<double> key(blocks.size());
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto& iso = blocks[b].isometry;
        key[b] = (iso.adjoint() * ref * iso).trace().real();
      }
      std::vector<std::size_t> order(blocks.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (blocks[x].n != blocks[y].n) return blocks[x].n > blocks[y].n;
        if (blocks[x].k != blocks[y].k) return blocks[x].k > blocks[y].k;
        return key[x] < key[y];
      });
      std::vector<IrrepBlock> sorted;
      for (auto idx : order) sorted.push_back(std::move(blocks[idx]));
      return sorted;
    } catch (const ProbeFailed&) {
      continue;
    }
  }
  throw Error(ErrorCode::DegenerateSample,
              "random probes failed to separate the block spectra after " +
                  std::to_string(kMaxProbeAttempts) + " draws");
}

}  // namespace kid
