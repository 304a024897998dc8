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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure.
//
//   acceptance --cli <path to kidecomp> --work <scratch dir>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kid/ensemble.hpp"
#include "kid/kidecomp.hpp"
#include "kid/measures.hpp"
#include "kid/protosim.hpp"
#include "kid/rng.hpp"
#include "kid/testkit.hpp"

namespace fs = std::filesystem;
using namespace kid;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Independent entropy oracle: Eigen's dense solver, natural-log sum.
double entropy_oracle(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  double s = 0.0;
  for (int j = 0; j < es.eigenvalues().size(); ++j) {
    const double v = es.eigenvalues()(j);
    if (v > 1e-14) s -= v * std::log(v);
  }
  return s / std::log(2.0);
}

std::array<double, 10> fields(const InfoMeasures& m) {
  return {m.S_total, m.I_C, m.I_NC, m.I_R, m.E_per_prepare, m.E_per_consume,
          m.E_asy, m.I_passive, m.hybrid_qubit_rate, m.hybrid_bit_rate};
}

std::vector<std::pair<int, int>> shapes(const KIDecomposition& d) {
  std::vector<std::pair<int, int>> s;
  for (const auto& b : d.blocks) s.emplace_back(b.n, b.k);
  std::sort(s.begin(), s.end());
  return s;
}

// Random block layout with total dimension <= 10 and 1..4 states. A single
// state only admits one block with n = 1.
PlantSpec random_spec(std::uint64_t seed) {
  Rng rng = make_rng(seed);
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(uniform01(rng) * (hi - lo + 1));
  };
  PlantSpec spec;
  spec.seed = seed;
  spec.num_states = pick(1, 4);
  if (spec.num_states == 1) {
    spec.blocks = {{1, pick(1, 4)}};
    return spec;
  }
  for (;;) {
    spec.blocks.clear();
    const int num_blocks = pick(1, 3);
    int total = 0;
    for (int l = 0; l < num_blocks; ++l) {
      const int n = pick(1, 3);
      const int k = pick(1, 3);
      spec.blocks.emplace_back(n, k);
      total += n * k;
    }
    if (total <= 10) return spec;
  }
}

struct Instance {
  Planted planted;
  KIDecomposition found;
};

std::vector<Instance> build_instances(int count) {
  std::vector<Instance> out;
  for (std::uint64_t s = 0; out.size() < static_cast<std::size_t>(count); ++s) {
    Instance inst;
    inst.planted = planted_ensemble(random_spec(1000 + s));
    inst.found = ki_decompose(inst.planted.ensemble, 0);
    out.push_back(std::move(inst));
  }
  return out;
}

// Pairs each recovered block with an unused truth block of the same shape
// and matching weights; returns the largest deviation in p and q, or
// infinity when no pairing exists.
double pairing_error(const KIDecomposition& found, const KIDecomposition& truth) {
  if (found.blocks.size() != truth.blocks.size()) return INFINITY;
  std::vector<bool> used(truth.blocks.size(), false);
  double worst = 0.0;
  for (std::size_t a = 0; a < found.blocks.size(); ++a) {
    const auto& fb = found.blocks[a];
    double best = INFINITY;
    std::size_t best_b = 0;
    for (std::size_t b = 0; b < truth.blocks.size(); ++b) {
      const auto& tb = truth.blocks[b];
      if (used[b] || tb.n != fb.n || tb.k != fb.k) continue;
      double err = std::abs(found.p_block[a] - truth.p_block[b]);
      for (std::size_t i = 0; i < fb.q.size(); ++i) err = std::max(err, std::abs(fb.q[i] - tb.q[i]));
      if (err < best) {
        best = err;
        best_b = b;
      }
    }
    if (!std::isfinite(best)) return INFINITY;
    used[best_b] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

Ensemble two_pure_states() {
  Vector zero(2);
  zero << 1.0, 0.0;
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Ensemble e;
  e.dim = 2;
  e.entries = {{0.5, DensityMatrix::pure(zero)}, {0.5, DensityMatrix::pure(plus)}};
  return e;
}

// `elapsed` covers decomposing the instances; the measures are added here.
Outcome criterion1(const std::vector<Instance>& xs, double elapsed) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& x : xs) {
    worst = std::max(worst, info_measures(x.found, x.planted.ensemble).additivity_residual());
  }
  elapsed += seconds_since(t0);
  Outcome o;
  o.pass = worst <= 1e-8 && elapsed <= 120.0;
  o.detail = std::to_string(xs.size()) + " ensembles, max additivity residual " +
             fmt("%.3g", worst) + ", " + fmt("%.2f", elapsed) + " s";
  return o;
}

Outcome criterion2(const std::vector<Instance>& xs) {
  int shape_misses = 0;
  double worst_weights = 0.0;
  double worst_measures = 0.0;
  for (const auto& x : xs) {
    if (shapes(x.found) != shapes(x.planted.truth)) {
      ++shape_misses;
      continue;
    }
    worst_weights = std::max(worst_weights, pairing_error(x.found, x.planted.truth));
    const auto got = info_measures(x.found, x.planted.ensemble);
    const auto want = info_measures(x.planted.truth, x.planted.ensemble);
    const std::array<double, 5> g{got.I_C, got.I_NC, got.I_R, got.E_per_prepare, got.E_per_consume};
    const std::array<double, 5> w{want.I_C, want.I_NC, want.I_R, want.E_per_prepare, want.E_per_consume};
    for (std::size_t f = 0; f < g.size(); ++f) worst_measures = std::max(worst_measures, std::abs(g[f] - w[f]));
  }
  Outcome o;
  o.pass = shape_misses == 0 && worst_weights <= 1e-7 && worst_measures <= 1e-7;
  o.detail = std::to_string(shape_misses) + " shape mismatches, max p/q error " +
             fmt("%.3g", worst_weights) + ", max measure error " + fmt("%.3g", worst_measures);
  return o;
}

Outcome criterion3() {
  const auto e = two_pure_states();
  const auto m = info_measures(ki_decompose(e, 0), e);
  const double a = (1.0 + 1.0 / std::sqrt(2.0)) / 2.0;
  const double b = (1.0 - 1.0 / std::sqrt(2.0)) / 2.0;
  const double s = -a * std::log2(a) - b * std::log2(b);
  const double cost_err = std::max(std::abs(m.E_per_prepare - 1.0), std::abs(m.E_per_consume - 1.0));
  const double rate_err = std::max({std::abs(m.E_asy - s), std::abs(m.I_NC - s), std::abs(m.S_total - s)});
  Outcome o;
  o.pass = cost_err <= 1e-9 && rate_err <= 1e-6 && std::abs(s - 0.600876) <= 1e-6;
  o.detail = "E_per_p " + fmt("%.9f", m.E_per_prepare) + ", E_per_c " + fmt("%.9f", m.E_per_consume) +
             ", E_asy " + fmt("%.9f", m.E_asy) + " (oracle " + fmt("%.9f", s) + ")";
  return o;
}

Outcome criterion4() {
  double worst = 0.0;
  int count = 0;
  Rng rng = make_rng(4);
  for (int dim = 1; dim <= 6; ++dim) {
    for (int rank = 1; rank <= dim; ++rank) {
      Ensemble e;
      e.dim = dim;
      e.entries = {{1.0, random_density(dim, rank, rng)}};
      const auto m = info_measures(ki_decompose(e, 0), e);
      const double s = entropy_oracle(e.entries[0].state.matrix());
      for (double v : {m.I_C, m.I_NC, m.E_per_prepare, m.E_per_consume, m.E_asy, m.I_R - s}) {
        worst = std::max(worst, std::abs(v));
      }
      ++count;
    }
  }
  Outcome o;
  o.pass = worst <= 1e-8;
  o.detail = std::to_string(count) + " single-state ensembles, max deviation " + fmt("%.3g", worst);
  return o;
}

Outcome criterion5(const std::vector<Instance>& xs) {
  const auto t0 = Clock::now();
  double worst_fid = 0.0;
  double worst_z = 0.0;
  double worst_excess = -INFINITY;
  for (std::size_t j = 0; j < 10; ++j) {
    const auto& x = xs[j];
    const auto m = info_measures(x.found, x.planted.ensemble);
    const auto r = simulate_individual(x.planted.ensemble, x.found, 10000, 500 + j);
    for (const auto& rec : r.records) {
      worst_fid = std::max(worst_fid, std::abs(1.0 - rec.conditional_fidelity));
      worst_excess = std::max(worst_excess, rec.ebits_consumed - m.E_per_prepare);
    }
    const double gap = std::abs(r.summary.mean_ebits - m.E_per_consume);
    // Zero spread means every trial used the same block size.
    const double z = r.summary.stderr_ebits > 0.0 ? gap / r.summary.stderr_ebits
                                                  : (gap <= 1e-12 ? 0.0 : INFINITY);
    worst_z = std::max(worst_z, z);
  }
  const double elapsed = seconds_since(t0);
  Outcome o;
  o.pass = worst_fid <= 1e-8 && worst_z <= 3.0 && worst_excess <= 1e-12 && elapsed <= 120.0;
  o.detail = "10 ensembles x 10000 trials, max |1-F| " + fmt("%.3g", worst_fid) +
             ", max |mean-E_per_c|/SE " + fmt("%.2f", worst_z) + ", max ebits over E_per_p " +
             fmt("%.3g", worst_excess) + ", " + fmt("%.2f", elapsed) + " s";
  return o;
}

Outcome criterion6() {
  const auto t0 = Clock::now();
  const auto e = two_pure_states();
  const auto d = ki_decompose(e, 0);
  AsymptoticConfig cfg;
  cfg.trials = 200;
  cfg.seed = 0;
  cfg.N = 12;
  cfg.delta = 0.25;
  const auto above = simulate_asymptotic(e, d, cfg);
  cfg.delta = -0.25;
  const auto below = simulate_asymptotic(e, d, cfg);
  const double gap = above.F_bar - below.F_bar;
  const double gap_se = std::hypot(above.F_stderr, below.F_stderr);
  bool threshold = gap > 3.0 * gap_se;

  bool monotone = true;
  std::string curve;
  cfg.delta = 0.25;
  AsymptoticRun prev;
  for (int n : {2, 4, 8, 12}) {
    cfg.N = n;
    const auto run = simulate_asymptotic(e, d, cfg);
    if (n > 2 && run.F_bar < prev.F_bar - 2.0 * std::hypot(run.F_stderr, prev.F_stderr)) monotone = false;
    curve += (curve.empty() ? "" : " ") + std::string("N=") + std::to_string(n) + ":" +
             fmt("%.4f", run.F_bar) + "+-" + fmt("%.4f", run.F_stderr);
    prev = run;
  }
  const double elapsed = seconds_since(t0);
  Outcome o;
  o.pass = threshold && monotone && elapsed <= 300.0;
  o.detail = "F(+0.25) " + fmt("%.4f", above.F_bar) + " vs F(-0.25) " + fmt("%.4f", below.F_bar) +
             " (gap " + fmt("%.2f", gap_se > 0.0 ? gap / gap_se : INFINITY) + " SE); " + curve +
             (monotone ? "" : " not monotone") + ", " + fmt("%.2f", elapsed) + " s";
  return o;
}

Outcome criterion7(const std::vector<Instance>& xs) {
  int bad_k = 0;
  double worst = 0.0;
  for (const auto& x : xs) {
    const auto before = info_measures(x.found, x.planted.ensemble);
    const auto reduced = remove_redundancy(x.found, x.planted.ensemble);
    const auto again = ki_decompose(reduced, 0);
    for (const auto& b : again.blocks) bad_k += b.k != 1;
    const auto after = info_measures(again, reduced);
    worst = std::max({worst, std::abs(after.I_R), std::abs(after.I_C - before.I_C),
                      std::abs(after.I_NC - before.I_NC)});
  }
  Outcome o;
  o.pass = bad_k == 0 && worst <= 1e-8;
  o.detail = std::to_string(xs.size()) + " ensembles, " + std::to_string(bad_k) +
             " blocks with k>1, max deviation " + fmt("%.3g", worst);
  return o;
}

Outcome criterion8(const std::vector<Instance>& xs) {
  double worst = 0.0;
  double worst_tp = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const auto r = verify(xs[j].found, xs[j].planted.ensemble, kDefaultTol, 20, 800 + j);
    worst = std::max(worst, r.max_channel_residual);
    worst_tp = std::max(worst_tp, r.channel_tp_residual);
  }
  Outcome o;
  o.pass = worst <= 1e-8 && worst_tp <= 1e-8;
  o.detail = std::to_string(xs.size()) + " ensembles x 20 channels, max |N(rho)-rho| " +
             fmt("%.3g", worst) + ", max trace-preservation residual " + fmt("%.3g", worst_tp);
  return o;
}

Outcome criterion9(const std::vector<Instance>& xs) {
  int shape_misses = 0;
  double worst = 0.0;
  for (std::size_t j = 0; j < 20; ++j) {
    const auto& e = xs[j].planted.ensemble;
    const Matrix u = haar_unitary(e.dim, static_cast<std::uint64_t>(900 + j));
    Ensemble rotated;
    rotated.dim = e.dim;
    for (const auto& entry : e.entries) {
      rotated.entries.push_back(
          {entry.p, DensityMatrix::trusted(u * entry.state.matrix() * u.adjoint())});
    }
    const auto d0 = ki_decompose(e, 0);
    const auto d1 = ki_decompose(rotated, 0);
    if (shapes(d0) != shapes(d1)) ++shape_misses;
    const auto f0 = fields(info_measures(d0, e));
    const auto f1 = fields(info_measures(d1, rotated));
    for (std::size_t f = 0; f < f0.size(); ++f) worst = std::max(worst, std::abs(f0[f] - f1[f]));
  }
  Outcome o;
  o.pass = shape_misses == 0 && worst <= 1e-7;
  o.detail = "20 conjugated ensembles, " + std::to_string(shape_misses) +
             " shape mismatches, max field deviation " + fmt("%.3g", worst);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion10(const std::string& cli, const fs::path& work) {
  fs::remove_all(work);
  fs::create_directories(work);
  const auto input = work / "two_states.json";
  std::ofstream(input, std::ios::binary) << write_ensemble(two_pure_states());

  const std::string in = " -i " + input.string();
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"decompose", "decompose" + in},
      {"measures", "measures" + in},
      {"simulate-individual", "simulate-individual" + in + " --trials 2000 --records"},
      {"simulate-asymptotic", "simulate-asymptotic" + in + " --n-messages 8 --trials 200"},
      {"rate-sweep", "rate-sweep" + in + " --n-messages 6 --trials 100"},
      {"remove-redundancy", "remove-redundancy" + in},
      {"verify", "verify" + in},
      {"gen", "gen --blocks 2x2,1x3 --states 3 --seed 9"},
  };
  std::vector<std::string> differing;
  for (const auto& [name, args] : commands) {
    std::array<std::string, 2> outputs;
    for (int run = 0; run < 2; ++run) {
      // Same path both times: reports echo the output path.
      const auto out = work / (name + ".out");
      const std::string cmd = "\"" + cli + "\" " + args + " -o " + out.string() + " > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        outputs[run] = "<failed>";
        break;
      }
      outputs[run] = slurp(out);
      if (name == "gen") outputs[run] += slurp(out.string() + ".truth.json");
    }
    if (outputs[0].empty() || outputs[0] == "<failed>" || outputs[0] != outputs[1]) {
      differing.push_back(name);
    }
  }
  Outcome o;
  o.pass = differing.empty();
  o.detail = std::to_string(commands.size()) + " commands run twice";
  for (const auto& name : differing) o.detail += ", differs or failed: " + name;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string cli;
  std::string work = "acceptance_work";
  app.add_option("--cli", cli, "kidecomp executable")->required();
  app.add_option("--work", work, "scratch directory");
  CLI11_PARSE(app, argc, argv);

  int failures = 0;
  auto report = [&](int n, const std::function<Outcome()>& body) {
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    failures += !o.pass;
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", n, o.detail.c_str());
    std::fflush(stdout);
  };

  const auto t0 = Clock::now();
  std::vector<Instance> xs;
  try {
    xs = build_instances(100);
  } catch (const std::exception& ex) {
    std::printf("FAIL criterion 1: building planted ensembles: %s\n", ex.what());
    return 1;
  }
  const double build_seconds = seconds_since(t0);

  report(1, [&] { return criterion1(xs, build_seconds); });
  report(2, [&] { return criterion2(xs); });
  report(3, [&] { return criterion3(); });
  report(4, [&] { return criterion4(); });
  report(5, [&] { return criterion5(xs); });
  report(6, [&] { return criterion6(); });
  report(7, [&] { return criterion7(xs); });
  report(8, [&] { return criterion8(xs); });
  report(9, [&] { return criterion9(xs); });
  report(10, [&] { return criterion10(cli, work); });
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
