/* Copyright 2026 The kidecomp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef KID_KID_H_
#define KID_KID_H_

/* C interface to the kidecomp library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns a kid_status; on failure kid_last_error()
 * describes the problem for the calling thread until its next call.
 * Strings returned through char** are owned by the caller and released
 * with kid_string_free. Structured results are JSON documents with
 * full-precision numbers.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32) && defined(KID_BUILDING)
#define KID_API __declspec(dllexport)
#elif defined(_WIN32)
#define KID_API __declspec(dllimport)
#elif defined(KID_BUILDING)
#define KID_API __attribute__((visibility("default")))
#else
#define KID_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kid_status {
  KID_OK = 0,
  KID_ERR_NOT_HERMITIAN = 1,
  KID_ERR_NOT_PSD = 2,
  KID_ERR_CONVERGENCE = 3,
  KID_ERR_DIMENSION_OVERFLOW = 4,
  KID_ERR_DEGENERATE_SAMPLE = 5,
  KID_ERR_FORM_VIOLATION = 6,
  KID_ERR_PARSE = 7,
  KID_ERR_VALIDATION = 8,
  KID_ERR_EMPTY_TYPICAL_SET = 9,
  KID_ERR_CONFIG_TOO_LARGE = 10,
  KID_ERR_REJECTION_EXHAUSTED = 11,
  KID_ERR_INVALID_ARGUMENT = 12,
  KID_ERR_INTERNAL = 13
} kid_status;

typedef struct kid_ensemble kid_ensemble;
typedef struct kid_decomposition kid_decomposition;

typedef struct kid_measures {
  double S_total;
  double I_C;
  double I_NC;
  double I_R;
  double E_per_prepare;
  double E_per_consume;
  double E_asy;
  double I_passive;
  double hybrid_qubit_rate;
  double hybrid_bit_rate;
  double additivity_residual;
} kid_measures;

typedef struct kid_asymptotic_config {
  int n_messages;
  double delta;
  int trials;
  uint64_t seed;
  int threads;
} kid_asymptotic_config;

KID_API const char* kid_version(void);
KID_API const char* kid_status_name(kid_status status);
/* Nonzero for failures that signal tolerance or internal trouble rather
 * than bad input. */
KID_API int kid_status_is_numerical(kid_status status);
KID_API const char* kid_last_error(void);
KID_API void kid_string_free(char* s);

KID_API kid_status kid_ensemble_read(const char* text, double tol, kid_ensemble** out);
KID_API kid_status kid_ensemble_write(const kid_ensemble* e, char** out);
KID_API int kid_ensemble_dim(const kid_ensemble* e);
KID_API size_t kid_ensemble_size(const kid_ensemble* e);
KID_API void kid_ensemble_free(kid_ensemble* e);

KID_API kid_status kid_decompose(const kid_ensemble* e, uint64_t seed, double tol,
                                 kid_decomposition** out);
KID_API kid_status kid_decomposition_read(const char* text, kid_decomposition** out);
KID_API kid_status kid_decomposition_write(const kid_decomposition* d, char** out);
KID_API size_t kid_decomposition_num_blocks(const kid_decomposition* d);
KID_API kid_status kid_decomposition_block(const kid_decomposition* d, size_t block, int* n,
                                           int* k, double* p);
KID_API void kid_decomposition_free(kid_decomposition* d);

KID_API kid_status kid_info_measures(const kid_decomposition* d, const kid_ensemble* e,
                                     double tol, kid_measures* out);
KID_API kid_status kid_verify_json(const kid_decomposition* d, const kid_ensemble* e,
                                   double tol, int channels, uint64_t seed, char** out);
KID_API kid_status kid_remove_redundancy(const kid_decomposition* d, const kid_ensemble* e,
                                         kid_ensemble** out);

KID_API kid_status kid_simulate_individual_json(const kid_ensemble* e,
                                                const kid_decomposition* d, int trials,
                                                uint64_t seed, double tol, int with_records,
                                                char** out);
KID_API kid_status kid_simulate_asymptotic_json(const kid_ensemble* e,
                                                const kid_decomposition* d,
                                                const kid_asymptotic_config* cfg, double tol,
                                                char** out);
KID_API kid_status kid_rate_sweep_json(const kid_ensemble* e, const kid_decomposition* d,
                                       const kid_asymptotic_config* cfg, const double* deltas,
                                       size_t num_deltas, double tol, char** out);

/* Planted ensemble with blocks (ns[j], ks[j]); `truth` may be NULL. */
KID_API kid_status kid_generate_planted(const int* ns, const int* ks, size_t num_blocks,
                                        int num_states, uint64_t seed, kid_ensemble** out,
                                        kid_decomposition** truth);

#ifdef __cplusplus
}
#endif

#endif /* KID_KID_H_ */
