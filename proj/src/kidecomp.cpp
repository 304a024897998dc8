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

#include "kid/kidecomp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kid/algebra.hpp"
#include "kid/error.hpp"

namespace kid {

namespace {

KIBlock extract_block(const IrrepBlock& irrep, const Ensemble& restricted, double tol) {
  KIBlock block;
  block.n = irrep.n;
  block.k = irrep.k;
  block.isometry = irrep.isometry;
  block.rho_K = DensityMatrix::maximally_mixed(irrep.k);
  const Matrix id_k = Matrix::Identity(irrep.k, irrep.k) / static_cast<double>(irrep.k);
  for (std::size_t i = 0; i < restricted.size(); ++i) {
    const Matrix& rho = restricted.entries[i].state.matrix();
    const Matrix compressed = irrep.isometry.adjoint() * rho * irrep.isometry;
    const Matrix j_part = partial_trace_k(compressed, irrep.n, irrep.k);
    const double residual = (compressed - kron(j_part, id_k)).norm();
    if (residual > tol) {
      throw Error(ErrorCode::FormViolation,
                  "state " + std::to_string(i) + " compressed into an irreducible block is not " +
                      "of the form q*(sigma (x) 1/k); residual " + std::to_string(residual));
    }
    const double q = j_part.trace().real();
    if (q > tol) {
      block.q.push_back(q);
      block.rho_J.emplace_back(DensityMatrix::trusted(j_part / q));
    } else {
      block.q.push_back(0.0);
      block.rho_J.emplace_back(std::nullopt);
    }
  }
  return block;
}

// Rotates the K factor to the eigenbasis of rho_K (descending eigenvalues),
// so the stored rho_K is diagonal whatever order the merges happened in.
void diagonalize_k(KIBlock& block) {
  if (block.k == 1) return;
  auto eig = eig_hermitian(block.rho_K.matrix());
  Matrix u = eig.vectors.rowwise().reverse();
  fix_column_phases(u);
  block.isometry = block.isometry * kron(Matrix::Identity(block.n, block.n), u);
  RealVector values = eig.values.reverse();
  block.rho_K = DensityMatrix::trusted(values.cast<cplx>().asDiagonal().toDenseMatrix());
}

}  // namespace

std::optional<MergeWitness> mergeable(const KIBlock& a, const KIBlock& b, double tol) {
  if (a.n != b.n || a.q.size() != b.q.size()) return std::nullopt;
  double sum_a = 0.0;
  double sum_b = 0.0;
  std::vector<Matrix> left;
  std::vector<Matrix> right;
  for (std::size_t i = 0; i < a.q.size(); ++i) {
    if (a.present(i) != b.present(i)) return std::nullopt;
    if (!a.present(i)) continue;
    sum_a += a.q[i];
    sum_b += b.q[i];
    left.push_back(a.rho_J[i]->matrix());
    right.push_back(b.rho_J[i]->matrix());
  }
  if (left.empty()) return std::nullopt;
  const double c = sum_b / sum_a;
  for (std::size_t i = 0; i < a.q.size(); ++i) {
    if (a.present(i) && std::abs(b.q[i] - c * a.q[i]) > tol * b.q[i]) return std::nullopt;
  }
  Matrix v = Matrix::Identity(a.n, a.n);
  if (a.n > 1) {
    const auto sols = intertwiners(left, right, tol);
    if (sols.size() != 1) return std::nullopt;
    v = polar_unitary(sols.front());
  }
  for (std::size_t j = 0; j < left.size(); ++j) {
    if ((v * left[j] * v.adjoint() - right[j]).norm() > tol) return std::nullopt;
  }
  return MergeWitness{v, c};
}

KIBlock merge_blocks(const KIBlock& a, const KIBlock& b, const MergeWitness& w) {
  KIBlock out;
  out.n = a.n;
  out.k = a.k + b.k;
  const Matrix iso_b = b.isometry * kron(w.unitary, Matrix::Identity(b.k, b.k));
  out.isometry.resize(a.isometry.rows(), out.n * out.k);
  for (int aa = 0; aa < out.n; ++aa) {
    for (int j = 0; j < a.k; ++j) out.isometry.col(aa * out.k + j) = a.isometry.col(aa * a.k + j);
    for (int j = 0; j < b.k; ++j) {
      out.isometry.col(aa * out.k + a.k + j) = iso_b.col(aa * b.k + j);
    }
  }
  out.rho_K = DensityMatrix::trusted(
      direct_sum(a.rho_K.matrix(), w.ratio * b.rho_K.matrix()) / (1.0 + w.ratio));
  out.q.resize(a.q.size());
  for (std::size_t i = 0; i < a.q.size(); ++i) out.q[i] = a.q[i] + b.q[i];
  out.rho_J = a.rho_J;
  return out;
}

void refresh_averages(KIDecomposition& d, const Ensemble& e) {
  d.p_block.assign(d.blocks.size(), 0.0);
  d.rho_J_avg.clear();
  for (std::size_t l = 0; l < d.blocks.size(); ++l) {
    const auto& block = d.blocks[l];
    Matrix acc = Matrix::Zero(block.n, block.n);
    double pl = 0.0;
    for (std::size_t i = 0; i < block.q.size(); ++i) {
      if (!block.present(i)) continue;
      const double w = e.entries[i].p * block.q[i];
      pl += w;
      acc += w * block.rho_J[i]->matrix();
    }
    d.p_block[l] = pl;
    d.rho_J_avg.push_back(DensityMatrix::trusted(pl > 0.0 ? Matrix(acc / pl) : acc));
  }
}

KIDecomposition ki_decompose(const Ensemble& e, std::uint64_t seed, double tol) {
  auto [frame, restricted] = support_restrict(e, tol);

  std::vector<Matrix> generators;
  generators.reserve(restricted.size());
  for (const auto& entry : restricted.entries) generators.push_back(entry.state.matrix());
  const auto algebra = generate_algebra(generators, frame.rank, tol);
  const auto irreps = irrep_decompose(algebra, seed, tol);

  std::vector<KIBlock> blocks;
  for (const auto& irrep : irreps) blocks.push_back(extract_block(irrep, restricted, tol));

  // Greedy merging in canonical order, restarted after every merge until no
  // pair qualifies.
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t a = 0; a < blocks.size() && !merged; ++a) {
      for (std::size_t b = a + 1; b < blocks.size() && !merged; ++b) {
        if (auto w = mergeable(blocks[a], blocks[b], tol)) {
          blocks[a] = merge_blocks(blocks[a], blocks[b], *w);
          blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(b));
          merged = true;
        }
      }
    }
  }
  for (auto& block : blocks) diagonalize_k(block);

  KIDecomposition d;
  d.frame = std::move(frame);
  d.blocks = std::move(blocks);
  refresh_averages(d, e);

  std::vector<std::size_t> order(d.blocks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto& bx = d.blocks[x];
    const auto& by = d.blocks[y];
    if (bx.n != by.n) return bx.n > by.n;
    if (bx.k != by.k) return bx.k > by.k;
    if (bx.q[0] != by.q[0]) return bx.q[0] < by.q[0];
    return d.p_block[x] > d.p_block[y];
  });
  KIDecomposition sorted;
  sorted.frame = d.frame;
  for (auto idx : order) sorted.blocks.push_back(std::move(d.blocks[idx]));
  refresh_averages(sorted, e);
  return sorted;
}

Matrix embedded_block_state(const KIDecomposition& d, std::size_t block, std::size_t i) {
  const auto& b = d.blocks[block];
  if (!b.present(i)) return Matrix::Zero(d.frame.ambient_dim, d.frame.ambient_dim);
  const Matrix e = d.frame.isometry * b.isometry;
  return e * (b.q[i] * kron(b.rho_J[i]->matrix(), b.rho_K.matrix())) * e.adjoint();
}

Matrix reconstruct_state(const KIDecomposition& d, std::size_t i) {
  Matrix acc = Matrix::Zero(d.frame.ambient_dim, d.frame.ambient_dim);
  for (std::size_t l = 0; l < d.blocks.size(); ++l) acc += embedded_block_state(d, l, i);
  return acc;
}

Ensemble remove_redundancy(const KIDecomposition& d, const Ensemble& e) {
  int dim = 0;
  for (const auto& b : d.blocks) dim += b.n;
  Ensemble out{dim, {}};
  for (std::size_t i = 0; i < e.size(); ++i) {
    Matrix m = Matrix::Zero(dim, dim);
    int offset = 0;
    for (const auto& b : d.blocks) {
      if (b.present(i)) m.block(offset, offset, b.n, b.n) = b.q[i] * b.rho_J[i]->matrix();
      offset += b.n;
    }
    out.entries.push_back({e.entries[i].p, DensityMatrix::trusted(m)});
  }
  return out;
}

}  // namespace kid
