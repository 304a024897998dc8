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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "kid/measures.hpp"
#include "kid/rng.hpp"
#include "kid/testkit.hpp"

using namespace kid;
using namespace kid::testing;

TEST_CASE("von_neumann_entropy") {
  CHECK(von_neumann_entropy(DensityMatrix::pure(plus_ket())) == doctest::Approx(0.0));
  CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed(5)) == doctest::Approx(std::log2(5.0)));
  CHECK(von_neumann_entropy(DensityMatrix::trusted(diag({0.75, 0.25}))) ==
        doctest::Approx(2.0 - 0.75 * std::log2(3.0)).epsilon(1e-12));
  CHECK(von_neumann_entropy(DensityMatrix::trusted(diag({0.75, 0.25}))) ==
        doctest::Approx(0.811278).epsilon(1e-6));
}

TEST_CASE("fidelity") {
  const auto zero = DensityMatrix::pure(ket(2, 0));
  const auto one = DensityMatrix::pure(ket(2, 1));
  const auto plus = DensityMatrix::pure(plus_ket());
  CHECK(fidelity(plus, plus) == doctest::Approx(1.0));
  CHECK(fidelity(zero, one) == doctest::Approx(0.0));
  CHECK(fidelity(zero, plus) == doctest::Approx(0.5));

  Rng rng = make_rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + trial % 4;
    const auto a = random_density(dim, 1 + trial % dim, rng);
    const auto b = random_density(dim, dim, rng);
    const double fab = fidelity(a, b);
    CHECK(std::abs(fab - fidelity(b, a)) <= 1e-9);
    CHECK(fab >= 0.0);
    CHECK(fab <= 1.0);
    CHECK(fidelity(b, b) == doctest::Approx(1.0).epsilon(1e-10));
    // pure first argument: F = <psi|sigma|psi>
    if (trial % dim == 0) {
      const Vector psi = eig_hermitian(a.matrix()).vectors.col(dim - 1);
      CHECK(fab == doctest::Approx((psi.adjoint() * b.matrix() * psi)(0, 0).real()).epsilon(1e-10));
    }
  }
}

TEST_CASE("classical bit source") {
  const auto e = classical_bit();
  const auto m = info_measures(ki_decompose(e, 0), e);
  CHECK(m.I_C == doctest::Approx(1.0));
  CHECK(m.I_NC == doctest::Approx(0.0));
  CHECK(m.I_R == doctest::Approx(0.0));
  CHECK(m.E_per_prepare == doctest::Approx(0.0));
  CHECK(m.E_asy == doctest::Approx(0.0));
}

TEST_CASE("two nonorthogonal pure states need one full ebit") {
  const auto e = zero_plus();
  const auto m = info_measures(ki_decompose(e, 0), e);
  CHECK(std::abs(m.E_per_prepare - 1.0) <= 1e-9);
  CHECK(std::abs(m.E_per_consume - 1.0) <= 1e-9);
  CHECK(std::abs(m.I_C) <= 1e-12);
  CHECK(std::abs(m.I_R) <= 1e-12);
  CHECK(std::abs(m.I_NC - zero_plus_entropy()) <= 1e-9);
  CHECK(std::abs(m.I_NC - 0.600876) <= 1e-6);
  CHECK(m.E_asy == m.I_NC);
}

TEST_CASE("a single known state costs nothing") {
  Rng rng = make_rng(12);
  for (int dim = 1; dim <= 4; ++dim) {
    const auto rho = random_density(dim, dim, rng);
    const auto e = make(dim, {{1.0, rho.matrix()}});
    const auto m = info_measures(ki_decompose(e, 0), e);
    CHECK(std::abs(m.I_C) <= 1e-8);
    CHECK(std::abs(m.I_NC) <= 1e-8);
    CHECK(std::abs(m.I_R - von_neumann_entropy(rho)) <= 1e-8);
    CHECK(std::abs(m.E_per_prepare) <= 1e-8);
    CHECK(std::abs(m.E_per_consume) <= 1e-8);
    CHECK(std::abs(m.E_asy) <= 1e-8);
  }
}

TEST_CASE("invariants over planted ensembles") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::vector<std::vector<std::pair<int, int>>> specs{{{2, 1}, {1, 2}}, {{2, 2}, {1, 1}}, {{1, 3}, {3, 1}}};
    const auto planted = planted_ensemble({specs[seed % 3], 2 + static_cast<int>(seed % 3), seed});
    const auto& e = planted.ensemble;
    const auto m = info_measures(ki_decompose(e, 0), e);
    CHECK(m.additivity_residual() <= 1e-8);
    CHECK(m.I_passive == doctest::Approx(m.I_C + m.I_NC));
    CHECK(m.hybrid_qubit_rate == m.I_NC);
    CHECK(m.hybrid_bit_rate == m.I_C);
    CHECK(0.0 <= m.E_asy);
    CHECK(m.E_asy <= m.E_per_consume + 1e-12);
    CHECK(m.E_per_consume <= m.E_per_prepare + 1e-12);
    CHECK(m.E_per_prepare <= std::log2(static_cast<double>(e.dim)) + 1e-12);
    for (double x : {m.S_total, m.I_C, m.I_NC, m.I_R, m.E_per_prepare, m.E_per_consume}) CHECK(x >= 0.0);
  }
}

TEST_CASE("distinct pure states carry no redundancy") {
  Rng rng = make_rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + trial % 3;
    const int states = 2 + trial % 3;
    RawEnsemble raw{dim, {}};
    for (int i = 0; i < states; ++i) {
      raw.entries.push_back({1.0 / states, random_density(dim, 1, rng).matrix()});
    }
    const auto e = make_ensemble(raw);
    const auto m = info_measures(ki_decompose(e, 0), e);
    CHECK(std::abs(m.I_R) <= 1e-8);
    CHECK(m.additivity_residual() <= 1e-8);
  }
}
