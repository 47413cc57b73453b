// Copyright 2026 The pptq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pptq/errors.hpp"
#include "pptq/negativity.hpp"
#include "pptq/synthesis.hpp"

using namespace pptq;

namespace {

double en(const QuasiState& s) { return log_negativity(s).log_negativity; }

// Diagonal, output-traceless perturbation: keeps HP and TP, and survives
// both partial transposes unchanged.
ChannelChoi corrupt(ChannelChoi ch) {
  const double c = 2.0 * ch.choi.cwiseAbs().maxCoeff() + 1.0;
  ch.choi(0, 0) += c;
  ch.choi(1, 1) -= c;
  return ch;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("identity channel passes every check") {
  const ChannelChoi id = identity_channel({2, 2});
  const VerificationReport r = verify(id);
  CHECK(r.hp.pass);
  CHECK(r.tp.pass);
  CHECK(r.cp.pass);
  CHECK(r.pptq.pass);
  CHECK_FALSE(r.maps_rho_to_sigma.evaluated);
  CHECK(r.all_pass());
}

TEST_CASE("partial transpose map is neither CP nor PPTq") {
  const VerificationReport r = verify(partial_transpose_channel({2, 2}));
  CHECK(r.hp.pass);
  CHECK(r.tp.pass);
  // Choi = (unnormalized Phi on A) (x) (swap on B): spectrum {2, 0} x {1, -1}.
  CHECK(r.cp.value == doctest::Approx(-2.0));
  CHECK_FALSE(r.cp.pass);
  CHECK_FALSE(r.pptq.pass);
}

TEST_CASE("swap conjugated by partial transposes is PPTq but not CP") {
  const Dims dims{2, 2};
  Matrix swap = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) swap(2 * i + j, 2 * j + i) = 1.0;
  const LinearMap ad_swap = [swap](const Matrix& m) { return Matrix(swap * m * swap); };
  const LinearMap wrapped = [&](const Matrix& m) {
    return partial_transpose(ad_swap(partial_transpose(m, 2, 2)), 2, 2);
  };
  const ChannelChoi t = choi_of(wrapped, dims, dims);
  const VerificationReport r = verify(t);
  CHECK(r.hp.pass);
  CHECK(r.tp.pass);
  CHECK_FALSE(r.cp.pass);
  CHECK(r.pptq.pass);
  CHECK(r.pptq.value == doctest::Approx(0.0).scale(1.0));
  CHECK((pt_conjugated_choi(t) - choi_of(ad_swap, dims, dims).choi).norm() < 1e-14);
  CHECK(r.is_pptq_channel());
  CHECK_FALSE(r.all_pass());
}

TEST_CASE("choi convention is self-consistent") {
  const Dims dims{2, 3};
  const QuasiState target = random_state(2, 2, 4);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix x = random_hermitian(6, seed);
    CHECK((pptq::apply(identity_channel(dims), x) - x).norm() < 1e-13);
    CHECK((pptq::apply(partial_transpose_channel(dims), x) - partial_transpose(x, 2, 3)).norm() < 1e-13);
    CHECK((pptq::apply(constant_channel(dims, target), x) - x.trace() * target.matrix()).norm() < 1e-13);
    const LinearMap transpose = [](const Matrix& m) { return Matrix(m.transpose()); };
    CHECK((pptq::apply(choi_of(transpose, dims, dims), x) - x.transpose()).norm() < 1e-13);
  }
}

TEST_CASE("synthesize Phi4 to Phi2") {
  const QuasiState rho = max_entangled(4);
  const QuasiState sigma = max_entangled(2);
  const SynthesisResult res = synthesize(rho, sigma);
  CHECK(res.certificate.branch == SynthesisBranch::General);
  CHECK(res.certificate.en_rho == doctest::Approx(2.0));
  CHECK(res.certificate.en_sigma == doctest::Approx(1.0));
  CHECK(res.channel.in_dims == Dims{4, 4});
  CHECK(res.channel.out_dims == Dims{2, 2});
  const VerificationReport r = verify(res.channel, &rho, &sigma);
  CHECK(r.is_pptq_channel());
  CHECK(r.maps_rho_to_sigma.value <= 1e-8);
  CHECK(r.tp.value <= 1e-10);
  const MonotoneReport m = en_monotone_check(res.channel, 50, 1);
  CHECK(m.pass());
  CHECK(m.trials == 50);
}

TEST_CASE("synthesize Phi2 to itself") {
  const QuasiState phi = max_entangled(2);
  const SynthesisResult res = synthesize(phi, phi);
  CHECK(verify(res.channel, &phi, &phi).is_pptq_channel());
}

TEST_CASE("PPT target uses the constant map") {
  const QuasiState rho = random_pure_state(2, 2, 3);
  const QuasiState sigma = maximally_mixed(2, 3);
  const SynthesisResult res = synthesize(rho, sigma);
  CHECK(res.certificate.branch == SynthesisBranch::ConstantTarget);
  const VerificationReport r = verify(res.channel, &rho, &sigma);
  CHECK(r.all_pass());
}

TEST_CASE("converse: more entangled targets are rejected") {
  CHECK_THROWS_AS(synthesize(maximally_mixed(2, 2), max_entangled(2)), PreconditionViolated);
  try {
    synthesize(max_entangled(2), max_entangled(3));
    FAIL("expected PreconditionViolated");
  } catch (const PreconditionViolated& e) {
    CHECK(e.en_rho() == doctest::Approx(1.0));
    CHECK(e.en_sigma() == doctest::Approx(std::log2(3.0)));
  }
}

TEST_CASE("random pairs round trip") {
  const Dims shapes[] = {{2, 2}, {2, 3}, {3, 3}};
  int built = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Dims d = shapes[seed % 3];
    QuasiState a = random_pure_state(d.first, d.second, 2 * seed);
    QuasiState b = random_state(d.first, d.second, 2 * seed + 1, 1 + seed % 3);
    if (en(a) < en(b)) std::swap(a, b);
    const SynthesisResult res = synthesize(a, b);
    const VerificationReport r = verify(res.channel, &a, &b);
    CHECK(r.hp.value <= 1e-10);
    CHECK(r.tp.value <= 1e-9);
    CHECK(r.pptq.value >= -1e-9);
    CHECK(r.maps_rho_to_sigma.value <= 1e-8);
    CHECK(res.certificate.lambda_min >= -1e-9);
    if (en(a) > en(b) + 1e-9) CHECK_THROWS_AS(synthesize(b, a), PreconditionViolated);
    ++built;
  }
  CHECK(built == 30);
}

TEST_CASE("quasi-state inputs") {
  const QuasiState rho = random_quasi_state(2, 2, 0.4, 2);
  const QuasiState sigma = random_state(2, 2, 5, 2);
  if (en(rho) >= en(sigma)) {
    const SynthesisResult res = synthesize(rho, sigma);
    CHECK(verify(res.channel, &rho, &sigma).is_pptq_channel());
  } else {
    CHECK_THROWS_AS(synthesize(rho, sigma), PreconditionViolated);
  }
}

TEST_CASE("corrupted Choi is flagged") {
  const SynthesisResult res = synthesize(max_entangled(4), max_entangled(2));
  const ChannelChoi bad = corrupt(res.channel);
  const VerificationReport r = verify(bad);
  CHECK(r.hp.pass);
  CHECK(r.tp.pass);
  CHECK_FALSE(r.pptq.pass);
  CHECK_FALSE(r.is_pptq_channel());

  const ChannelChoi id_bad = corrupt(identity_channel({2, 2}));
  CHECK_FALSE(en_monotone_check(id_bad, 30, 3).pass());
}

TEST_CASE("non-Hermitian Choi fails hp and the spectral checks") {
  ChannelChoi ch = identity_channel({2, 2});
  ch.choi(0, 1) += Complex(0.0, 0.5);
  const VerificationReport r = verify(ch);
  CHECK_FALSE(r.hp.pass);
  CHECK_FALSE(r.cp.pass);
  CHECK_FALSE(r.pptq.pass);
}

TEST_CASE("identity channel never increases E_N") {
  const MonotoneReport m = en_monotone_check(identity_channel({2, 3}), 20, 9);
  CHECK(m.pass());
  CHECK(std::abs(m.max_increase) < 1e-9);
}

TEST_CASE("channel JSON round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "pptq_test_synthesis";
  std::filesystem::create_directories(dir);
  const SynthesisResult res = synthesize(random_pure_state(2, 2, 1), random_state(2, 2, 2, 2));
  save_channel(res.channel, dir / "a.json");
  const ChannelChoi back = load_channel(dir / "a.json");
  CHECK((back.choi - res.channel.choi).norm() == 0.0);
  save_channel(back, dir / "b.json");
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  nlohmann::json j = channel_to_json(res.channel);
  CHECK(j["convention"] == "input-major-row-major");
  j["convention"] = "output-major";
  CHECK_THROWS_AS(channel_from_json(j), ParseError);
  j = channel_to_json(res.channel);
  j["out_dims"] = {3, 2};
  CHECK_THROWS_AS(channel_from_json(j), ParseError);
}

TEST_CASE("dimension mismatch on apply") {
  CHECK_THROWS_AS(pptq::apply(identity_channel({2, 2}), Matrix::Identity(6, 6)), DimensionMismatch);
}
