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

#include <functional>

#include "helpers.hpp"
#include "kid/ensemble.hpp"
#include "kid/error.hpp"
#include "kid/rng.hpp"
#include "kid/testkit.hpp"

using namespace kid;
using namespace kid::testing;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

Ensemble random_ensemble(int dim, int states, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  RawEnsemble raw{dim, {}};
  double total = 0.0;
  for (int i = 0; i < states; ++i) {
    const double p = 0.1 + uniform01(rng);
    total += p;
    raw.entries.push_back({p, random_density(dim, 1 + i % dim, rng).matrix()});
  }
  for (auto& entry : raw.entries) entry.p /= total;
  return make_ensemble(raw);
}

}  // namespace

TEST_CASE("validate") {
  RawEnsemble ok{2, {{1.0, DensityMatrix::pure(ket(2, 0)).matrix()}}};
  CHECK(validate(ok).ok());

  RawEnsemble sum{2,
                  {{0.5, DensityMatrix::pure(ket(2, 0)).matrix()},
                   {0.6, DensityMatrix::pure(ket(2, 1)).matrix()}}};
  auto report = validate(sum);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].invariant == "probability-sum");
  CHECK(report.violations[0].residual == doctest::Approx(0.1));

  Matrix skew(2, 2);
  skew << 1, 1, 0, 0;
  report = validate(RawEnsemble{2, {{1.0, skew}}});
  bool found = false;
  for (const auto& v : report.violations) found |= v.invariant == "hermiticity";
  CHECK(found);

  report = validate(RawEnsemble{2, {{1.0, diag({1.5, -0.5})}}});
  found = false;
  for (const auto& v : report.violations) found |= v.invariant == "positivity";
  CHECK(found);

  report = validate(RawEnsemble{2, {{0.0, diag({1.0, 0.0})}, {1.0, diag({0.0, 1.0})}}});
  CHECK(report.violations.at(0).invariant == "probability-positive");
  CHECK(report.violations.at(0).index == 0);

  CHECK(!validate(RawEnsemble{2, {}}).ok());
  CHECK(!validate(RawEnsemble{2, {{1.0, Matrix::Identity(3, 3) / 3.0}}}).ok());
  CHECK(code_of([&] { make_ensemble(sum); }) == ErrorCode::ValidationError);
}

TEST_CASE("average_state") {
  const Matrix rho = diag({0.75, 0.25});
  CHECK((average_state(make(2, {{1.0, rho}})).matrix() - rho).norm() < 1e-15);
  CHECK((average_state(classical_bit()).matrix() - Matrix::Identity(2, 2) / 2.0).norm() < 1e-15);
  Matrix expected(2, 2);
  expected << 0.75, 0.25, 0.25, 0.25;
  CHECK((average_state(zero_plus()).matrix() - expected).norm() < 1e-15);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto e = random_ensemble(3, 4, seed);
    CHECK(std::abs(average_state(e).matrix().trace().real() - 1.0) < 1e-10);
  }
}

TEST_CASE("support_restrict") {
  auto [full, same] = support_restrict(zero_plus());
  CHECK(full.rank == 2);
  CHECK((full.isometry - Matrix::Identity(2, 2)).norm() == 0.0);

  auto [f1, r1] = support_restrict(make(3, {{1.0, DensityMatrix::pure(ket(3, 0)).matrix()}}));
  CHECK(f1.rank == 1);
  CHECK(r1.dim == 1);
  CHECK(std::abs(r1.entries[0].state.matrix()(0, 0) - 1.0) < 1e-12);

  // zero_plus padded into C^4
  const auto base = zero_plus();
  std::vector<std::pair<double, Matrix>> padded;
  for (const auto& entry : base.entries) {
    Matrix m = Matrix::Zero(4, 4);
    m.topLeftCorner(2, 2) = entry.state.matrix();
    padded.emplace_back(entry.p, m);
  }
  const auto e4 = make(4, padded);
  auto [frame, restricted] = support_restrict(e4);
  CHECK(frame.rank == 2);
  CHECK((frame.isometry.adjoint() * frame.isometry - Matrix::Identity(2, 2)).norm() < 1e-12);
  // restricted states equal the originals up to the 2x2 frame unitary
  const Matrix w = frame.isometry.topRows(2);
  for (std::size_t i = 0; i < 2; ++i) {
    const Matrix back = w * restricted.entries[i].state.matrix() * w.adjoint();
    CHECK((back - base.entries[i].state.matrix()).norm() < 1e-10);
    CHECK((embed(frame, restricted.entries[i].state.matrix()) - e4.entries[i].state.matrix()).norm() <
          1e-8);
  }
}

TEST_CASE("support_restrict then embed reproduces every state") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng = make_rng(seed);
    const Matrix u = haar_unitary(5, rng);
    RawEnsemble raw{5, {}};
    for (int i = 0; i < 3; ++i) {
      Matrix m = Matrix::Zero(5, 5);
      m.topLeftCorner(3, 3) = random_density(3, 2, rng).matrix();
      raw.entries.push_back({1.0 / 3.0, u * m * u.adjoint()});
    }
    const auto e = make_ensemble(raw);
    auto [frame, restricted] = support_restrict(e);
    CHECK(frame.rank == 3);
    for (std::size_t i = 0; i < e.size(); ++i) {
      CHECK(validate(restricted).ok());
      CHECK((embed(frame, restricted.entries[i].state.matrix()) - e.entries[i].state.matrix())
                .norm() <= 1e-8);
    }
  }
}

TEST_CASE("ensemble files") {
  const auto minimal = R"({"dim": 1, "states": [{"p": 1.0, "matrix": [[[1.0, 0.0]]]}]})";
  CHECK(read_ensemble(minimal).size() == 1);

  const auto short_p = R"({"dim": 1, "states": [{"p": 0.9, "matrix": [[[1.0, 0.0]]]}]})";
  CHECK(code_of([&] { read_ensemble(short_p); }) == ErrorCode::ValidationError);

  const auto unknown = R"({"dim": 1, "extra": 0, "states": [{"p": 1.0, "matrix": [[[1, 0]]]}]})";
  CHECK(code_of([&] { read_ensemble(unknown); }) == ErrorCode::ParseError);

  const auto broken = "{\"dim\": 1,\n \"states\": [";
  try {
    read_ensemble(broken);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  const auto bad_entry = R"({"dim": 1, "states": [{"p": 1.0, "matrix": [[[1.0]]]}]})";
  try {
    read_ensemble(bad_entry);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("states[0].matrix") != std::string::npos);
  }
}

TEST_CASE("round trip of a random qutrit ensemble is exact") {
  const auto e = random_ensemble(3, 3, 42);
  const auto text = write_ensemble(e);
  const auto back = read_ensemble(text);
  REQUIRE(back.size() == e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    CHECK(back.entries[i].p == e.entries[i].p);
    CHECK((back.entries[i].state.matrix() - e.entries[i].state.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK(write_ensemble(back) == text);
}
