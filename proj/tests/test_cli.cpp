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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pptq/cli.hpp"
#include "pptq/states.hpp"
#include "pptq/synthesis.hpp"

using namespace pptq;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "pptq_test_cli";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string state_file(const std::string& name, const QuasiState& s) {
  const std::string p = path(name);
  save(s, p);
  return p;
}

}  // namespace

TEST_CASE("en prints the log-negativity") {
  const Run r = run({"en", state_file("phi2.json", max_entangled(2))});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("E_N = 1.000000") != std::string::npos);
  const Run ppt = run({"en", state_file("mixed.json", maximally_mixed(2, 2))});
  CHECK(ppt.out.find("E_N = 0.000000") != std::string::npos);
  const Run j = run({"--format", "json", "en", path("phi2.json")});
  CHECK(nlohmann::json::parse(j.out)["log_negativity"].get<double>() == 1.0);
}

TEST_CASE("malformed input exits 2") {
  std::ofstream(path("broken.json")) << "[1, 2";
  CHECK(run({"en", path("broken.json")}).code == cli::kInputError);
  CHECK(run({"en", path("does_not_exist.json")}).code == cli::kInputError);
  CHECK(run({"nonsense"}).code == cli::kInputError);
  CHECK(run({}).code == cli::kInputError);
  CHECK(run({"--format", "yaml", "en", path("phi2.json")}).code == cli::kInputError);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("synthesize success and precondition failure") {
  const std::string phi4 = state_file("phi4.json", max_entangled(4));
  const std::string phi2 = state_file("phi2.json", max_entangled(2));
  const std::string mixed = state_file("mixed.json", maximally_mixed(2, 2));
  const Run ok = run({"synthesize", phi4, phi2, path("ch.json")});
  CHECK(ok.code == cli::kOk);
  CHECK(std::filesystem::exists(path("ch.json")));
  CHECK(run({"synthesize", phi2, phi2, path("ch_same.json")}).code == cli::kOk);

  const Run bad = run({"synthesize", mixed, phi2, path("never.json")});
  CHECK(bad.code == cli::kPrecondition);
  CHECK(bad.err.find("E_N(ρ)=0.000000 < E_N(σ)=1.000000") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(path("never.json")));
}

TEST_CASE("verify-channel") {
  save_channel(identity_channel({2, 2}), path("id.json"));
  CHECK(run({"verify-channel", path("id.json")}).code == cli::kOk);
  CHECK(run({"verify-channel", path("id.json"), "--require-cp"}).code == cli::kOk);

  Matrix swap = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) swap(2 * i + j, 2 * j + i) = 1.0;
  const LinearMap wrapped = [&swap](const Matrix& m) {
    return partial_transpose(Matrix(swap * partial_transpose(m, 2, 2) * swap), 2, 2);
  };
  save_channel(choi_of(wrapped, {2, 2}, {2, 2}), path("pt.json"));
  const Run pt = run({"verify-channel", path("pt.json")});
  CHECK(pt.code == cli::kOk);
  CHECK(pt.out.find("completely_positive = FAIL") != std::string::npos);
  CHECK(pt.out.find("pptq = PASS") != std::string::npos);
  CHECK(run({"verify-channel", path("pt.json"), "--require-cp"}).code == cli::kCheckFailed);

  ChannelChoi broken = identity_channel({2, 2});
  broken.choi(0, 1) += 0.3;
  save_channel(broken, path("broken_ch.json"));
  const Run b = run({"--format", "json", "verify-channel", path("broken_ch.json")});
  CHECK(b.code == cli::kCheckFailed);
  CHECK_FALSE(nlohmann::json::parse(b.out)["hp"]["pass"].get<bool>());

  const std::string phi4 = state_file("phi4.json", max_entangled(4));
  const std::string phi2 = state_file("phi2.json", max_entangled(2));
  run({"synthesize", phi4, phi2, path("ch.json")});
  CHECK(run({"verify-channel", path("ch.json"), "--rho", phi4, "--sigma", phi2}).code == cli::kOk);
  CHECK(run({"verify-channel", path("ch.json"), "--rho", phi4, "--sigma", phi4}).code != cli::kOk);
  CHECK(run({"verify-channel", path("ch.json"), "--rho", phi4}).code == cli::kInputError);
}

TEST_CASE("rate and chain-check") {
  const std::string phi4 = state_file("phi4.json", max_entangled(4));
  const std::string phi2 = state_file("phi2.json", max_entangled(2));
  const Run r = run({"--format", "json", "rate", phi4, phi2});
  CHECK(r.code == cli::kOk);
  CHECK(nlohmann::json::parse(r.out)["ratio_forward"].get<double>() == 2.0);
  CHECK(run({"rate", phi4, state_file("mixed.json", maximally_mixed(2, 2))}).code == cli::kPrecondition);

  const Run c = run({"--format", "json", "chain-check", phi2});
  CHECK(c.code == cli::kOk);
  const auto j = nlohmann::json::parse(c.out);
  CHECK(j["chain_holds"].get<bool>());
  CHECK(j["e_n"].get<double>() == 1.0);
  CHECK(std::abs(j["e_n_tau"].get<double>() - 1.0) <= 1e-4);

  const std::string pure = state_file("pure.json", random_pure_state(2, 2, 1));
  CHECK(run({"chain-check", pure, "--max-iters", "2"}).code == cli::kInconclusive);
  CHECK(run({"chain-check", phi4}).code == cli::kPrecondition);
}

TEST_CASE("ntau") {
  const std::string phi2 = state_file("phi2.json", max_entangled(2));
  const Run r = run({"ntau", phi2});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("N_tau = 2.000000") != std::string::npos);
  const std::string pure = state_file("pure.json", random_pure_state(2, 2, 1));
  CHECK(run({"ntau", pure, "--max-iters", "2"}).code == cli::kInconclusive);
  const Run cross = run({"ntau", pure, "--sigma", phi2});
  CHECK(cross.code == cli::kOk);
  CHECK(run({"ntau", pure, "--tol", "-1"}).code == cli::kInputError);
}

TEST_CASE("random-state is deterministic") {
  CHECK(run({"--seed", "7", "random-state", "state", "2", "2", path("r1.json")}).code == cli::kOk);
  CHECK(run({"--seed", "7", "random-state", "state", "2", "2", path("r2.json")}).code == cli::kOk);
  CHECK(slurp(path("r1.json")) == slurp(path("r2.json")));
  CHECK(run({"--seed", "8", "random-state", "state", "2", "2", path("r3.json")}).code == cli::kOk);
  CHECK(slurp(path("r1.json")) != slurp(path("r3.json")));
  // Hex seeds and the default seed.
  CHECK(run({"--seed", "0xC0FFEE", "random-state", "pure", "2", "3"}).out ==
        run({"random-state", "pure", "2", "3"}).out);
  const Run q = run({"random-state", "quasi", "2", "2", "--neg-weight", "0.5"});
  CHECK_FALSE(state_from_json(nlohmann::json::parse(q.out)).is_state());
  CHECK(run({"random-state", "maxent", "2", "3"}).code == cli::kInputError);
  CHECK(run({"random-state", "banana", "2", "2"}).code == cli::kInputError);
}

TEST_CASE("dimension cap") {
  const std::string phi4 = state_file("phi4.json", max_entangled(4));
  CHECK(run({"--dim-cap", "8", "en", phi4}).code == cli::kPrecondition);
  CHECK(run({"--dim-cap", "16", "en", phi4}).code == cli::kOk);
}

TEST_CASE("outputs are byte-identical across runs") {
  const std::string phi4 = state_file("phi4.json", max_entangled(4));
  const std::string phi2 = state_file("phi2.json", max_entangled(2));
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"--format", "json", "en", phi4},
           {"--format", "json", "rate", phi4, phi2},
           {"--format", "json", "ntau", phi2},
           {"--format", "json", "synthesize", phi4, phi2, path("det.json")},
           {"--format", "json", "chain-check", phi2}}) {
    CHECK(run(args).out == run(args).out);
  }
}

TEST_CASE("hidden selftest") {
  const Run r = run({"selftest", "--trials", "6"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(run({"--help"}).out.find("selftest") == std::string::npos);
}
