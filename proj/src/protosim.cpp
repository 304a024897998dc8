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

#include "kid/protosim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

#include "kid/error.hpp"
#include "kid/measures.hpp"
#include "kid/rng.hpp"

namespace kid {

namespace {

constexpr double kGuardBits = 20.0;
constexpr std::size_t kDenseCap = 4096;

std::size_t sample_index(const std::vector<double>& weights, Rng& rng) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (weights[j] <= 0.0) continue;
    acc += weights[j];
    last = j;
    if (u < acc) return j;
  }
  return last;
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr out;
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  if (xs.size() > 1 && *lo != *hi) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    const double n = static_cast<double>(xs.size());
    out.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

std::vector<double> block_weights(const KIDecomposition& d, std::size_t i) {
  std::vector<double> w;
  for (const auto& b : d.blocks) w.push_back(b.present(i) ? b.q[i] : 0.0);
  return w;
}

std::vector<double> state_weights(const Ensemble& e) {
  std::vector<double> w;
  for (const auto& entry : e.entries) w.push_back(entry.p);
  return w;
}

// Runs body(t) for t in [0, trials) on `threads` workers; the first
// exception (by trial chunk) is rethrown.
template <typename Body>
void parallel_trials(int trials, int threads, Body body) {
  threads = std::clamp(threads, 1, std::max(1, trials));
  if (threads == 1) {
    for (int t = 0; t < trials; ++t) body(t);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    const int lo = static_cast<int>(static_cast<long long>(trials) * w / threads);
    const int hi = static_cast<int>(static_cast<long long>(trials) * (w + 1) / threads);
    pool.emplace_back([&, w, lo, hi] {
      try {
        for (int t = lo; t < hi; ++t) body(t);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace

IndividualResult simulate_individual(const Ensemble& e, const KIDecomposition& d, int trials,
                                     std::uint64_t seed, double tol) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (d.num_states() != e.size()) {
    throw Error(ErrorCode::InvalidArgument, "decomposition and ensemble disagree on state count");
  }
  const std::size_t nb = d.blocks.size();
  IndividualResult out;
  auto& s = out.summary;
  s.trials = trials;
  s.block_counts.assign(nb, 0);

  // Conditional fidelity of the reconstructed block state against the
  // normalized compression of rho_i onto the block, one per (i, l).
  std::vector<std::vector<double>> cond(e.size(), std::vector<double>(nb, 0.0));
  for (std::size_t i = 0; i < e.size(); ++i) {
    Matrix mixture = Matrix::Zero(e.dim, e.dim);
    for (std::size_t l = 0; l < nb; ++l) {
      const auto& b = d.blocks[l];
      if (!b.present(i)) continue;
      s.max_ebits_blocks = std::max(s.max_ebits_blocks, std::log2(static_cast<double>(b.n)));
      const Matrix block_state = embedded_block_state(d, l, i);
      mixture += block_state;
      const Matrix emb = d.frame.isometry * b.isometry;
      const Matrix proj = emb * emb.adjoint();
      const Matrix compressed = proj * e.entries[i].state.matrix() * proj;
      const double weight = compressed.trace().real();
      if (weight <= 0.0) continue;
      cond[i][l] = fidelity(DensityMatrix::trusted(block_state / b.q[i]),
                            DensityMatrix::trusted(compressed / weight), tol);
    }
    s.mixture_residual =
        std::max(s.mixture_residual, (mixture - e.entries[i].state.matrix()).norm());
  }

  const auto pw = state_weights(e);
  out.records.resize(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    auto& r = out.records[static_cast<std::size_t>(t)];
    r.i = sample_index(pw, rng);
    r.l = sample_index(block_weights(d, r.i), rng);
    r.ebits_consumed = std::log2(static_cast<double>(d.blocks[r.l].n));
    r.conditional_fidelity = cond[r.i][r.l];
  }

  std::vector<double> ebits;
  ebits.reserve(out.records.size());
  for (const auto& r : out.records) {
    ebits.push_back(r.ebits_consumed);
    s.max_ebits_observed = std::max(s.max_ebits_observed, r.ebits_consumed);
    s.min_conditional_fidelity = std::min(s.min_conditional_fidelity, r.conditional_fidelity);
    ++s.block_counts[r.l];
  }
  const auto ms = mean_stderr(ebits);
  s.mean_ebits = ms.mean;
  s.stderr_ebits = ms.stderr_;
  return out;
}

bool TypicalSet::contains(const std::vector<int>& sequence) const {
  if (types.empty()) return false;
  std::vector<int> counts(types.front().size(), 0);
  for (int x : sequence) {
    if (x < 0 || static_cast<std::size_t>(x) >= counts.size()) return false;
    ++counts[static_cast<std::size_t>(x)];
  }
  return std::find(types.begin(), types.end(), counts) != types.end();
}

TypicalSet typical_projector(const std::vector<double>& spectrum, int N, double delta) {
  if (N < 1 || spectrum.empty()) {
    throw Error(ErrorCode::InvalidArgument, "typical_projector: need N >= 1 and a spectrum");
  }
  const double total = std::accumulate(spectrum.begin(), spectrum.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-8) {
    throw Error(ErrorCode::InvalidArgument, "typical_projector: spectrum must sum to 1");
  }
  TypicalSet ts;
  ts.N = N;
  ts.delta = delta;
  ts.entropy = shannon_entropy(spectrum);
  const std::size_t r = spectrum.size();
  constexpr double kSlack = 1e-12;

  std::vector<int> counts(r, 0);
  // Enumerates compositions of N into r parts; zero eigenvalues may only
  // carry a zero count (their surprisal is infinite).
  auto visit = [&](auto&& self, std::size_t pos, int left) -> void {
    if (pos + 1 == r) {
      counts[pos] = left;
      double logp = 0.0;
      double log_mult = std::lgamma(N + 1.0);
      for (std::size_t a = 0; a < r; ++a) {
        if (counts[a] == 0) continue;
        if (spectrum[a] <= 0.0) return;
        logp += counts[a] * std::log2(spectrum[a]);
        log_mult -= std::lgamma(counts[a] + 1.0);
      }
      if (std::abs(-logp / N - ts.entropy) > delta + kSlack) return;
      const double mult = std::exp(log_mult);
      ts.types.push_back(counts);
      ts.size += mult;
      ts.weight += mult * std::exp2(logp);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[pos] = c;
      self(self, pos + 1, left - c);
    }
  };
  visit(visit, 0, N);
  if (ts.types.empty()) {
    throw Error(ErrorCode::EmptyTypicalSet,
                "no length-" + std::to_string(N) + " sequence within delta " +
                    std::to_string(delta) + " of the entropy");
  }
  ts.log2_size = std::log2(ts.size);
  ts.weight = std::min(ts.weight, 1.0);
  return ts;
}

std::vector<std::uint32_t> high_probability_code(const std::vector<double>& spectrum, int m,
                                                 double delta) {
  const auto n = static_cast<std::uint64_t>(spectrum.size());
  if (n == 0 || m < 0) throw Error(ErrorCode::InvalidArgument, "high_probability_code: bad input");
  const double full_bits = m * std::log2(static_cast<double>(n));
  if (full_bits > kGuardBits + 1e-9) {
    throw Error(ErrorCode::ConfigTooLarge, "code space exceeds 2^20 sequences");
  }
  std::uint64_t space = 1;
  for (int j = 0; j < m; ++j) space *= n;

  const double bits = m * (shannon_entropy(spectrum) + delta);
  std::uint64_t size = space;
  if (bits < full_bits) {
    const double raw = std::floor(std::exp2(bits) * (1.0 + 1e-12));
    size = std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(raw, 1.0)), 1, space);
  }

  std::vector<std::uint32_t> all(space);
  std::iota(all.begin(), all.end(), 0u);
  if (size == space) return all;

  // Log-probability from occupation counts summed in a fixed order, so
  // sequences of one type tie exactly.
  std::vector<double> logs(n);
  for (std::size_t a = 0; a < n; ++a) {
    logs[a] = spectrum[a] > 0.0 ? std::log2(spectrum[a]) : -std::numeric_limits<double>::infinity();
  }
  std::vector<double> key(space);
  std::vector<int> counts(n);
  for (std::uint64_t s = 0; s < space; ++s) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::uint64_t x = s, j = 0; j < static_cast<std::uint64_t>(m); ++j, x /= n) ++counts[x % n];
    double lp = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      if (counts[a] > 0) lp += counts[a] * logs[a];
    }
    key[s] = lp;
  }
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(size), all.end(),
                    [&](std::uint32_t x, std::uint32_t y) {
                      if (key[x] != key[y]) return key[x] > key[y];
                      return x < y;
                    });
  all.resize(size);
  return all;
}

namespace {

struct GroupOutcome {
  double fidelity_sampled = 1.0;
  double fidelity_mixture = 1.0;
  bool success = true;
};

// One l-group: factors[j] is B_j (n x r_j) with rho_J^(i_j,l) = B_j B_j^dagger
// written in the eigenbasis of the block-average J state.
GroupOutcome run_group(const std::vector<const Matrix*>& factors,
                       const std::vector<std::uint32_t>& code, int n, double u) {
  GroupOutcome g;
  const auto m = factors.size();
  std::uint64_t space = 1;
  for (std::size_t j = 0; j < m; ++j) space *= static_cast<std::uint64_t>(n);
  if (code.size() == space) return g;  // the code is the whole space

  auto digit = [&](std::uint32_t s, std::size_t j) {
    // message j of m, first message most significant
    for (std::size_t t = j + 1; t < m; ++t) s /= static_cast<std::uint32_t>(n);
    return static_cast<Eigen::Index>(s % static_cast<std::uint32_t>(n));
  };

  double rank_prod = 1.0;
  for (const auto* f : factors) rank_prod *= static_cast<double>(f->cols());
  const double k_code = static_cast<double>(code.size());
  if (std::min(rank_prod, k_code) > static_cast<double>(kDenseCap)) {
    throw Error(ErrorCode::ConfigTooLarge, "occupied subspace exceeds the dense cap of 4096");
  }

  // Nonzero eigenvalues a_j of P Omega P.
  RealVector a;
  if (rank_prod <= k_code) {
    const auto rdim = static_cast<Eigen::Index>(rank_prod);
    Matrix gram = Matrix::Zero(rdim, rdim);
    Vector row(rdim);
    for (auto s : code) {
      row.setOnes(1);
      for (std::size_t j = 0; j < m; ++j) {
        const Matrix& f = *factors[j];
        const auto fr = f.row(digit(s, j));
        Vector next(row.size() * f.cols());
        for (Eigen::Index x = 0; x < row.size(); ++x)
          for (Eigen::Index y = 0; y < f.cols(); ++y) next(x * f.cols() + y) = row(x) * fr(y);
        row.swap(next);
      }
      gram.noalias() += row.conjugate() * row.transpose();
    }
    a = rdim == 1 ? RealVector::Constant(1, gram(0, 0).real())
                  : eig_hermitian(hermitian_part(gram), 1.0).values;
  } else {
    std::vector<Matrix> tau;
    for (const auto* f : factors) tau.push_back(*f * f->adjoint());
    const auto kdim = static_cast<Eigen::Index>(code.size());
    Matrix gram(kdim, kdim);
    for (Eigen::Index x = 0; x < kdim; ++x) {
      for (Eigen::Index y = 0; y <= x; ++y) {
        cplx v = 1.0;
        for (std::size_t j = 0; j < m; ++j) v *= tau[j](digit(code[x], j), digit(code[y], j));
        gram(x, y) = v;
        gram(y, x) = std::conj(v);
      }
    }
    a = eig_hermitian(gram, 1.0).values;
  }
  a = a.cwiseMax(0.0);
  const double w = std::min(a.sum(), 1.0);
  const double junk = (1.0 - w) / k_code;
  double root_fail = 0.0;
  double root_mix = 0.0;
  for (double x : a) {
    root_fail += std::sqrt(x);
    root_mix += std::sqrt(x * (x + junk));
  }
  g.fidelity_mixture = std::min(root_mix * root_mix, 1.0);
  g.success = u < w;
  // Success leaves P Omega P / w, whose fidelity with Omega is w; failure
  // leaves the maximally mixed state on the code.
  g.fidelity_sampled = g.success ? w : std::min(root_fail * root_fail / k_code, 1.0);
  return g;
}

}  // namespace

AsymptoticRun simulate_asymptotic(const Ensemble& e, const KIDecomposition& d,
                                  const AsymptoticConfig& cfg, double tol) {
  if (cfg.N < 1 || cfg.trials < 1) {
    throw Error(ErrorCode::InvalidArgument, "N and trials must be >= 1");
  }
  if (d.num_states() != e.size()) {
    throw Error(ErrorCode::InvalidArgument, "decomposition and ensemble disagree on state count");
  }
  const std::size_t nb = d.blocks.size();
  int max_n = 1;
  for (std::size_t l = 0; l < nb; ++l) {
    if (d.p_block[l] > 0.0) max_n = std::max(max_n, d.blocks[l].n);
  }
  if (cfg.N * std::log2(static_cast<double>(max_n)) > kGuardBits + 1e-9) {
    throw Error(ErrorCode::ConfigTooLarge,
                "N * log2(max n) = " + std::to_string(cfg.N * std::log2(max_n)) + " exceeds 20");
  }

  // Per block: eigenbasis and spectrum of the average J state, and codes for
  // every group size.
  std::vector<std::vector<std::vector<std::uint32_t>>> codes(nb);
  std::vector<Matrix> basis(nb);
  for (std::size_t l = 0; l < nb; ++l) {
    if (d.p_block[l] <= 0.0) continue;
    auto eig = eig_hermitian(d.rho_J_avg[l].matrix());
    basis[l] = eig.vectors.rowwise().reverse();
    std::vector<double> spectrum(eig.values.data(), eig.values.data() + eig.values.size());
    std::reverse(spectrum.begin(), spectrum.end());
    for (auto& x : spectrum) x = std::max(x, 0.0);
    const double total = std::accumulate(spectrum.begin(), spectrum.end(), 0.0);
    for (auto& x : spectrum) x /= total;
    for (int m = 0; m <= cfg.N; ++m) codes[l].push_back(high_probability_code(spectrum, m, cfg.delta));
  }

  // Rank factors of each J state in that eigenbasis.
  std::vector<std::vector<Matrix>> factor(e.size(), std::vector<Matrix>(nb));
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t l = 0; l < nb; ++l) {
      if (!d.blocks[l].present(i) || d.p_block[l] <= 0.0) continue;
      const Matrix local = basis[l].adjoint() * d.blocks[l].rho_J[i]->matrix() * basis[l];
      const auto eig = eig_hermitian(hermitian_part(local));
      const double top = std::max(eig.values.maxCoeff(), 0.0);
      std::vector<Eigen::Index> keep;
      for (Eigen::Index j = eig.values.size() - 1; j >= 0; --j) {
        if (eig.values[j] > tol * top) keep.push_back(j);
      }
      Matrix f(local.rows(), static_cast<Eigen::Index>(keep.size()));
      for (std::size_t c = 0; c < keep.size(); ++c) {
        f.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(keep[c]) * std::sqrt(eig.values[keep[c]]);
      }
      factor[i][l] = std::move(f);
    }
  }

  const auto pw = state_weights(e);
  std::vector<std::vector<double>> qw(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) qw[i] = block_weights(d, i);

  const auto trials = static_cast<std::size_t>(cfg.trials);
  std::vector<double> f_sampled(trials), f_mixture(trials), qubits(trials);
  std::vector<int> groups(trials), successes(trials);

  parallel_trials(cfg.trials, cfg.threads, [&](int t) {
    Rng rng = make_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));
    std::vector<std::size_t> msg_i(static_cast<std::size_t>(cfg.N));
    std::vector<std::size_t> msg_l(static_cast<std::size_t>(cfg.N));
    for (auto& i : msg_i) i = sample_index(pw, rng);
    for (std::size_t j = 0; j < msg_i.size(); ++j) msg_l[j] = sample_index(qw[msg_i[j]], rng);

    const auto ts = static_cast<std::size_t>(t);
    f_sampled[ts] = 1.0;
    f_mixture[ts] = 1.0;
    qubits[ts] = 0.0;
    groups[ts] = 0;
    successes[ts] = 0;
    for (std::size_t l = 0; l < nb; ++l) {
      std::vector<const Matrix*> members;
      for (std::size_t j = 0; j < msg_l.size(); ++j) {
        if (msg_l[j] == l) members.push_back(&factor[msg_i[j]][l]);
      }
      if (members.empty()) continue;
      const auto& code = codes[l][members.size()];
      qubits[ts] += std::log2(static_cast<double>(code.size()));
      const double u = uniform01(rng);
      const auto g = run_group(members, code, d.blocks[l].n, u);
      f_sampled[ts] *= g.fidelity_sampled;
      f_mixture[ts] *= g.fidelity_mixture;
      ++groups[ts];
      if (g.success) ++successes[ts];
    }
  });

  AsymptoticRun run;
  run.config = cfg;
  run.bit_rate_used = shannon_entropy(d.p_block);
  const auto fs = mean_stderr(f_sampled);
  const auto fm = mean_stderr(f_mixture);
  run.F_bar = std::clamp(fs.mean, 0.0, 1.0);
  run.F_stderr = fs.stderr_;
  run.F_mixture = std::clamp(fm.mean, 0.0, 1.0);
  run.F_mixture_stderr = fm.stderr_;
  double q_total = 0.0;
  long long g_total = 0;
  long long s_total = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    q_total += qubits[t];
    g_total += groups[t];
    s_total += successes[t];
  }
  run.qubit_rate_used = q_total / static_cast<double>(trials) / cfg.N;
  run.success_rate = g_total > 0 ? static_cast<double>(s_total) / static_cast<double>(g_total) : 1.0;
  return run;
}

std::vector<AsymptoticRun> rate_sweep(const Ensemble& e, const KIDecomposition& d,
                                      const AsymptoticConfig& cfg, std::vector<double> deltas,
                                      double tol) {
  std::stable_sort(deltas.begin(), deltas.end());
  std::vector<AsymptoticRun> out;
  for (double delta : deltas) {
    AsymptoticConfig c = cfg;
    c.delta = delta;
    out.push_back(simulate_asymptotic(e, d, c, tol));
  }
  return out;
}

}  // namespace kid
