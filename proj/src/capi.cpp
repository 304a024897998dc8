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

#include "kid/kid.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "kid/error.hpp"
#include "kid/jsonio.hpp"
#include "kid/kidecomp.hpp"
#include "kid/measures.hpp"
#include "kid/protosim.hpp"
#include "kid/testkit.hpp"

struct kid_ensemble {
  kid::Ensemble rep;
};

struct kid_decomposition {
  kid::KIDecomposition rep;
};

namespace {

using kid::jsonio::json;

thread_local std::string last_error;

kid_status to_status(kid::ErrorCode code) {
  switch (code) {
    case kid::ErrorCode::NotHermitian: return KID_ERR_NOT_HERMITIAN;
    case kid::ErrorCode::NotPSD: return KID_ERR_NOT_PSD;
    case kid::ErrorCode::ConvergenceFailure: return KID_ERR_CONVERGENCE;
    case kid::ErrorCode::DimensionOverflow: return KID_ERR_DIMENSION_OVERFLOW;
    case kid::ErrorCode::DegenerateSample: return KID_ERR_DEGENERATE_SAMPLE;
    case kid::ErrorCode::FormViolation: return KID_ERR_FORM_VIOLATION;
    case kid::ErrorCode::ParseError: return KID_ERR_PARSE;
    case kid::ErrorCode::ValidationError: return KID_ERR_VALIDATION;
    case kid::ErrorCode::EmptyTypicalSet: return KID_ERR_EMPTY_TYPICAL_SET;
    case kid::ErrorCode::ConfigTooLarge: return KID_ERR_CONFIG_TOO_LARGE;
    case kid::ErrorCode::RejectionExhausted: return KID_ERR_REJECTION_EXHAUSTED;
    case kid::ErrorCode::InvalidArgument: return KID_ERR_INVALID_ARGUMENT;
  }
  return KID_ERR_INTERNAL;
}

template <typename F>
kid_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return KID_OK;
  } catch (const kid::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return KID_ERR_INTERNAL;
}

void require(bool cond, const char* what) {
  if (!cond) throw kid::Error(kid::ErrorCode::InvalidArgument, what);
}

char* copy_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json verify_to_json(const kid::VerificationReport& r) {
  json pairs = json::array();
  for (auto [a, b] : r.mergeable_pairs) pairs.push_back({a, b});
  json failures = json::array();
  if (!r.reconstruction_ok()) failures.push_back("reconstruction");
  if (!r.weights_ok()) failures.push_back("weight-sum");
  if (!r.irreducible_ok()) failures.push_back("irreducibility");
  if (!r.maximal_ok()) failures.push_back("non-mergeability");
  if (!r.channels_ok()) failures.push_back("channel-preservation");
  return {{"passed", r.passed()},
          {"failures", std::move(failures)},
          {"checks",
           {{"reconstruction", r.reconstruction_ok()},
            {"weight_sum", r.weights_ok()},
            {"irreducibility", r.irreducible_ok()},
            {"non_mergeability", r.maximal_ok()},
            {"channel_preservation", r.channels_ok()}}},
          {"max_reconstruction_residual", r.max_reconstruction_residual},
          {"max_weight_sum_residual", r.max_weight_sum_residual},
          {"block_commutant_dims", r.block_commutant_dims},
          {"mergeable_pairs", std::move(pairs)},
          {"channels_tested", r.channels_tested},
          {"max_channel_residual", r.max_channel_residual},
          {"channel_tp_residual", r.channel_tp_residual}};
}

json run_to_json(const kid::AsymptoticRun& r) {
  return {{"N", r.config.N},
          {"delta", r.config.delta},
          {"trials", r.config.trials},
          {"seed", r.config.seed},
          {"qubit_rate_used", r.qubit_rate_used},
          {"bit_rate_used", r.bit_rate_used},
          {"F_bar", r.F_bar},
          {"F_stderr", r.F_stderr},
          {"F_mixture", r.F_mixture},
          {"F_mixture_stderr", r.F_mixture_stderr},
          {"success_rate", r.success_rate}};
}

kid::AsymptoticConfig to_config(const kid_asymptotic_config* cfg) {
  require(cfg != nullptr, "null config");
  kid::AsymptoticConfig c;
  c.N = cfg->n_messages;
  c.delta = cfg->delta;
  c.trials = cfg->trials;
  c.seed = cfg->seed;
  c.threads = cfg->threads < 1 ? 1 : cfg->threads;
  return c;
}

}  // namespace

extern "C" {

const char* kid_version(void) { return "1.0.0"; }

const char* kid_status_name(kid_status status) {
  switch (status) {
    case KID_OK: return "Ok";
    case KID_ERR_NOT_HERMITIAN: return "NotHermitian";
    case KID_ERR_NOT_PSD: return "NotPSD";
    case KID_ERR_CONVERGENCE: return "ConvergenceFailure";
    case KID_ERR_DIMENSION_OVERFLOW: return "DimensionOverflow";
    case KID_ERR_DEGENERATE_SAMPLE: return "DegenerateSample";
    case KID_ERR_FORM_VIOLATION: return "FormViolation";
    case KID_ERR_PARSE: return "ParseError";
    case KID_ERR_VALIDATION: return "ValidationError";
    case KID_ERR_EMPTY_TYPICAL_SET: return "EmptyTypicalSet";
    case KID_ERR_CONFIG_TOO_LARGE: return "ConfigTooLarge";
    case KID_ERR_REJECTION_EXHAUSTED: return "RejectionExhausted";
    case KID_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case KID_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

int kid_status_is_numerical(kid_status status) {
  switch (status) {
    case KID_ERR_NOT_HERMITIAN:
    case KID_ERR_NOT_PSD:
    case KID_ERR_CONVERGENCE:
    case KID_ERR_DIMENSION_OVERFLOW:
    case KID_ERR_DEGENERATE_SAMPLE:
    case KID_ERR_FORM_VIOLATION:
    case KID_ERR_INTERNAL:
      return 1;
    default:
      return 0;
  }
}

const char* kid_last_error(void) { return last_error.c_str(); }

void kid_string_free(char* s) { std::free(s); }

kid_status kid_ensemble_read(const char* text, double tol, kid_ensemble** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new kid_ensemble{kid::read_ensemble(text, tol)};
  });
}

kid_status kid_ensemble_write(const kid_ensemble* e, char** out) {
  return guarded([&] {
    require(e != nullptr && out != nullptr, "null argument");
    *out = copy_string(kid::write_ensemble(e->rep));
  });
}

int kid_ensemble_dim(const kid_ensemble* e) { return e == nullptr ? 0 : e->rep.dim; }

size_t kid_ensemble_size(const kid_ensemble* e) { return e == nullptr ? 0 : e->rep.size(); }

void kid_ensemble_free(kid_ensemble* e) { delete e; }

kid_status kid_decompose(const kid_ensemble* e, uint64_t seed, double tol,
                         kid_decomposition** out) {
  return guarded([&] {
    require(e != nullptr && out != nullptr, "null argument");
    require(tol > 0.0, "tol must be positive");
    *out = new kid_decomposition{kid::ki_decompose(e->rep, seed, tol)};
  });
}

kid_status kid_decomposition_read(const char* text, kid_decomposition** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new kid_decomposition{kid::read_decomposition(text)};
  });
}

kid_status kid_decomposition_write(const kid_decomposition* d, char** out) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null argument");
    *out = copy_string(kid::write_decomposition(d->rep));
  });
}

size_t kid_decomposition_num_blocks(const kid_decomposition* d) {
  return d == nullptr ? 0 : d->rep.blocks.size();
}

kid_status kid_decomposition_block(const kid_decomposition* d, size_t block, int* n, int* k,
                                   double* p) {
  return guarded([&] {
    require(d != nullptr, "null argument");
    require(block < d->rep.blocks.size(), "block index out of range");
    if (n != nullptr) *n = d->rep.blocks[block].n;
    if (k != nullptr) *k = d->rep.blocks[block].k;
    if (p != nullptr) *p = d->rep.p_block[block];
  });
}

void kid_decomposition_free(kid_decomposition* d) { delete d; }

kid_status kid_info_measures(const kid_decomposition* d, const kid_ensemble* e, double tol,
                             kid_measures* out) {
  return guarded([&] {
    require(d != nullptr && e != nullptr && out != nullptr, "null argument");
    const auto m = kid::info_measures(d->rep, e->rep, tol);
    *out = {m.S_total,        m.I_C,           m.I_NC,      m.I_R,
            m.E_per_prepare,  m.E_per_consume, m.E_asy,     m.I_passive,
            m.hybrid_qubit_rate, m.hybrid_bit_rate, m.additivity_residual()};
  });
}

kid_status kid_verify_json(const kid_decomposition* d, const kid_ensemble* e, double tol,
                           int channels, uint64_t seed, char** out) {
  return guarded([&] {
    require(d != nullptr && e != nullptr && out != nullptr, "null argument");
    require(channels >= 0, "channels must be >= 0");
    *out = copy_string(verify_to_json(kid::verify(d->rep, e->rep, tol, channels, seed)).dump());
  });
}

kid_status kid_remove_redundancy(const kid_decomposition* d, const kid_ensemble* e,
                                 kid_ensemble** out) {
  return guarded([&] {
    require(d != nullptr && e != nullptr && out != nullptr, "null argument");
    require(d->rep.num_states() == e->rep.size(), "decomposition does not match the ensemble");
    *out = new kid_ensemble{kid::remove_redundancy(d->rep, e->rep)};
  });
}

kid_status kid_simulate_individual_json(const kid_ensemble* e, const kid_decomposition* d,
                                        int trials, uint64_t seed, double tol, int with_records,
                                        char** out) {
  return guarded([&] {
    require(d != nullptr && e != nullptr && out != nullptr, "null argument");
    const auto r = kid::simulate_individual(e->rep, d->rep, trials, seed, tol);
    const auto& s = r.summary;
    json result{{"summary",
                 {{"trials", s.trials},
                  {"mean_ebits", s.mean_ebits},
                  {"stderr_ebits", s.stderr_ebits},
                  {"max_ebits_observed", s.max_ebits_observed},
                  {"max_ebits_blocks", s.max_ebits_blocks},
                  {"min_conditional_fidelity", s.min_conditional_fidelity},
                  {"mixture_residual", s.mixture_residual},
                  {"block_counts", s.block_counts}}}};
    if (with_records != 0) {
      json records = json::array();
      for (const auto& t : r.records) {
        records.push_back({{"i", t.i},
                           {"l", t.l},
                           {"ebits_consumed", t.ebits_consumed},
                           {"conditional_fidelity", t.conditional_fidelity}});
      }
      result["records"] = std::move(records);
    }
    *out = copy_string(result.dump());
  });
}

kid_status kid_simulate_asymptotic_json(const kid_ensemble* e, const kid_decomposition* d,
                                        const kid_asymptotic_config* cfg, double tol,
                                        char** out) {
  return guarded([&] {
    require(d != nullptr && e != nullptr && out != nullptr, "null argument");
    *out = copy_string(run_to_json(kid::simulate_asymptotic(e->rep, d->rep, to_config(cfg), tol)).dump());
  });
}

kid_status kid_rate_sweep_json(const kid_ensemble* e, const kid_decomposition* d,
                               const kid_asymptotic_config* cfg, const double* deltas,
                               size_t num_deltas, double tol, char** out) {
  return guarded([&] {
    require(d != nullptr && e != nullptr && out != nullptr, "null argument");
    require(num_deltas == 0 || deltas != nullptr, "null deltas");
    std::vector<double> ds(deltas, deltas + num_deltas);
    json table = json::array();
    for (const auto& run : kid::rate_sweep(e->rep, d->rep, to_config(cfg), ds, tol)) {
      table.push_back(run_to_json(run));
    }
    *out = copy_string(table.dump());
  });
}

kid_status kid_generate_planted(const int* ns, const int* ks, size_t num_blocks, int num_states,
                                uint64_t seed, kid_ensemble** out, kid_decomposition** truth) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    require(num_blocks == 0 || (ns != nullptr && ks != nullptr), "null block arrays");
    kid::PlantSpec spec;
    for (size_t j = 0; j < num_blocks; ++j) spec.blocks.emplace_back(ns[j], ks[j]);
    spec.num_states = num_states;
    spec.seed = seed;
    auto planted = kid::planted_ensemble(spec);
    auto* ens = new kid_ensemble{std::move(planted.ensemble)};
    if (truth != nullptr) {
      try {
        *truth = new kid_decomposition{std::move(planted.truth)};
      } catch (...) {
        delete ens;
        throw;
      }
    }
    *out = ens;
  });
}

}  // extern "C"
