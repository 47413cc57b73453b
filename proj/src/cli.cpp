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


#include "pptq/cli.hpp"

#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pptq/errors.hpp"
#include "pptq/negativity.hpp"
#include "pptq/rates.hpp"
#include "pptq/states.hpp"
#include "pptq/synthesis.hpp"
#include "pptq/tempered.hpp"

namespace pptq::cli {

namespace {

struct Options {
  std::optional<double> tol;
  std::uint64_t seed = kDefaultSeed;
  std::string format = "text";
  std::size_t dim_cap = kDefaultDimensionCap;
};

struct SolverFlags {
  double tol = SolverConfig{}.bisection_tol;
  std::size_t max_iters = SolverConfig{}.max_iterations;
  std::size_t bisect_steps = SolverConfig{}.max_bisection_steps;

  SolverConfig config() const {
    SolverConfig cfg;
    cfg.bisection_tol = tol;
    cfg.max_iterations = max_iters;
    cfg.max_bisection_steps = bisect_steps;
    return cfg;
  }
};

class Context {
 public:
  Context(const Options& opt, std::ostream& out, std::ostream& err) : opt_(opt), out_(out), err_(err) {}

  bool json() const { return opt_.format == "json"; }
  const Options& options() const { return opt_; }
  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }

  void emit(const nlohmann::json& j) { out_ << dump_canonical(j); }
  void line(const std::string& key, const std::string& value) { out_ << key << " = " << value << '\n'; }

  QuasiState load_state(const std::string& path) const {
    QuasiState s = load(path);
    check_cap(s.side());
    return s;
  }

  void check_cap(std::size_t side) const {
    if (side > opt_.dim_cap) {
      throw DimensionCapExceeded("dimension " + std::to_string(side) + " exceeds --dim-cap " +
                                 std::to_string(opt_.dim_cap));
    }
  }

  VerifyTolerances verify_tolerances() const {
    VerifyTolerances t;
    if (opt_.tol) t.hermitian = t.trace_preserving = t.positivity = t.maps_to = *opt_.tol;
    return t;
  }

 private:
  const Options& opt_;
  std::ostream& out_;
  std::ostream& err_;
};

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v + 0.0);
  return buf;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

void add_solver_flags(CLI::App* cmd, SolverFlags& flags) {
  cmd->add_option("--tol", flags.tol, "solver bracket tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", flags.max_iters, "iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--bisect-steps", flags.bisect_steps, "stage cap")->check(CLI::PositiveNumber);
}

void print_check(Context& ctx, const std::string& name, const CheckResult& c) {
  if (!c.evaluated) {
    ctx.line(name, "skipped");
    return;
  }
  ctx.line(name, std::string(c.pass ? "PASS" : "FAIL") + " (" + sci(c.value) + ")");
}

void print_report(Context& ctx, const VerificationReport& r) {
  print_check(ctx, "hermitian_preserving", r.hp);
  print_check(ctx, "trace_preserving", r.tp);
  print_check(ctx, "completely_positive", r.cp);
  print_check(ctx, "pptq", r.pptq);
  print_check(ctx, "maps_rho_to_sigma", r.maps_rho_to_sigma);
}

int cmd_en(Context& ctx, const std::string& path) {
  const QuasiState s = ctx.load_state(path);
  const NegativityValue v = log_negativity(s);
  if (ctx.json()) {
    ctx.emit({{"log_negativity", v.log_negativity},
              {"trace_norm_pt", v.trace_norm_pt},
              {"classification", std::string(to_string(s.classification()))},
              {"ppt", std::string(to_string(s.ppt_flag()))}});
  } else {
    ctx.line("E_N", fixed6(v.log_negativity));
    ctx.line("trace_norm_pt", fixed6(v.trace_norm_pt));
  }
  return kOk;
}

int cmd_ntau(Context& ctx, const std::string& rho_path, const std::string& sigma_path,
             const SolverFlags& flags) {
  const QuasiState rho = ctx.load_state(rho_path);
  const TemperedResult r = sigma_path.empty()
                               ? tempered_negativity(rho, flags.config())
                               : tempered_negativity_cross(ctx.load_state(sigma_path), rho, flags.config());
  if (ctx.json()) {
    ctx.emit(to_json(r));
  } else {
    ctx.line("N_tau", fixed6(r.n_tau));
    ctx.line("E_N_tau", fixed6(tempered_log_negativity(r)));
    ctx.line("upper_bound", fixed6(r.upper_bound));
    ctx.line("converged", yes_no(r.converged));
    if (r.experimental) ctx.line("experimental", "true");
  }
  return r.converged ? kOk : kInconclusive;
}

int cmd_synthesize(Context& ctx, const std::string& rho_path, const std::string& sigma_path,
                   const std::string& out_path) {
  const QuasiState rho = ctx.load_state(rho_path);
  const QuasiState sigma = ctx.load_state(sigma_path);
  ctx.check_cap(rho.side() * sigma.side());
  const SynthesisResult result = synthesize(rho, sigma);
  save_channel(result.channel, out_path);
  const VerificationReport report = verify(result.channel, &rho, &sigma, ctx.verify_tolerances());
  if (ctx.json()) {
    ctx.emit({{"channel_file", out_path},
              {"verification", to_json(report)},
              {"certificate", to_json(result.certificate)}});
  } else {
    ctx.line("E_N(rho)", fixed6(result.certificate.en_rho));
    ctx.line("E_N(sigma)", fixed6(result.certificate.en_sigma));
    ctx.line("branch", std::string(to_string(result.certificate.branch)));
    print_report(ctx, report);
    ctx.line("channel", out_path);
  }
  if (!report.is_pptq_channel()) {
    ctx.err() << "error: synthesized channel failed verification\n";
    return kInternal;
  }
  return kOk;
}

// Complete positivity is reported but only required with --require-cp.
int cmd_verify(Context& ctx, const std::string& channel_path, const std::string& rho_path,
               const std::string& sigma_path, bool require_cp) {
  const ChannelChoi ch = load_channel(channel_path);
  ctx.check_cap(ch.in_side() * ch.out_side());
  if (rho_path.empty() != sigma_path.empty()) {
    throw ParseError("--rho and --sigma must be given together");
  }
  std::optional<QuasiState> rho, sigma;
  if (!rho_path.empty()) {
    rho.emplace(ctx.load_state(rho_path));
    sigma.emplace(ctx.load_state(sigma_path));
  }
  const VerificationReport report =
      verify(ch, rho ? &*rho : nullptr, sigma ? &*sigma : nullptr, ctx.verify_tolerances());
  if (ctx.json()) {
    ctx.emit(to_json(report));
  } else {
    print_report(ctx, report);
    ctx.line("is_pptq_channel", yes_no(report.is_pptq_channel()));
  }
  const bool pass = require_cp ? report.all_pass() : report.is_pptq_channel();
  return pass ? kOk : kCheckFailed;
}

int cmd_rate(Context& ctx, const std::string& rho_path, const std::string& sigma_path, std::size_t depth) {
  const RateReport r = conversion_ratio(ctx.load_state(rho_path), ctx.load_state(sigma_path), depth);
  if (ctx.json()) {
    ctx.emit(to_json(r));
  } else {
    ctx.line("E_N(rho)", fixed6(r.en_rho));
    ctx.line("E_N(sigma)", fixed6(r.en_sigma));
    ctx.line("ratio_forward", fixed6(r.ratio_forward));
    ctx.line("ratio_backward", fixed6(r.ratio_backward));
    ctx.line("reversibility_product", fixed6(r.reversibility_product));
    for (const OneShotRow& row : r.one_shot_table) {
      ctx.out() << "n=" << row.n << " distill_d=" << row.distill.d_string()
                << " cost_d=" << row.cost.d_string() << " distill_rate=" << fixed6(row.distill_rate)
                << " cost_rate=" << fixed6(row.cost_rate) << '\n';
    }
  }
  return kOk;
}

int cmd_chain(Context& ctx, const std::string& rho_path, const SolverFlags& flags, std::size_t depth) {
  const QuasiState rho = ctx.load_state(rho_path);
  const double tol = ctx.options().tol.value_or(1e-6);
  const ChainReport r = chain_report(rho, flags.config(), depth, tol);
  if (ctx.json()) {
    ctx.emit(to_json(r));
  } else {
    ctx.line("E_N_tau", fixed6(r.e_n_tau));
    ctx.line("E_N", fixed6(r.e_n));
    ctx.line("E_C", "[" + fixed6(r.cost_interval.lower) + ", " + fixed6(r.cost_interval.upper) + "]");
    ctx.line("E_D", "[" + fixed6(r.distillable_interval.lower) + ", " +
                         fixed6(r.distillable_interval.upper) + "]");
    for (const ChainLink& l : r.links) {
      ctx.out() << (l.holds ? "holds " : "FAILS ") << l.name << " (margin " << sci(l.margin) << ")\n";
    }
    ctx.line("chain", to_string(r.status));
  }
  switch (r.status) {
    case ChainStatus::Holds: return kOk;
    case ChainStatus::Fails: return kCheckFailed;
    case ChainStatus::Inconclusive: return kInconclusive;
  }
  return kInternal;
}

struct RandomFlags {
  std::string kind;
  std::size_t d_a = 2;
  std::size_t d_b = 2;
  std::string out;
  std::size_t rank = 0;
  double neg_weight = 0.25;
};

int cmd_random(Context& ctx, const RandomFlags& f) {
  ctx.check_cap(f.d_a * f.d_b);
  const std::uint64_t seed = ctx.options().seed;
  std::optional<QuasiState> s;
  if (f.kind == "state") {
    s.emplace(random_state(f.d_a, f.d_b, seed, f.rank));
  } else if (f.kind == "pure") {
    s.emplace(random_pure_state(f.d_a, f.d_b, seed));
  } else if (f.kind == "quasi") {
    s.emplace(random_quasi_state(f.d_a, f.d_b, f.neg_weight, seed));
  } else if (f.kind == "mixed") {
    s.emplace(maximally_mixed(f.d_a, f.d_b));
  } else {
    if (f.d_a != f.d_b) throw ParseError("maxent needs d_a = d_b");
    s.emplace(max_entangled(f.d_a));
  }
  if (f.out.empty()) {
    ctx.emit(state_to_json(*s));
  } else {
    save(*s, f.out);
  }
  return kOk;
}

// Seeded battery of the core identities.
int cmd_selftest(Context& ctx, std::size_t trials) {
  const std::uint64_t seed = ctx.options().seed;
  const VerifyTolerances tol = ctx.verify_tolerances();
  std::vector<std::pair<std::string, bool>> checks;
  const std::vector<std::pair<std::size_t, std::size_t>> dims{{2, 2}, {2, 3}, {3, 3}};

  bool synth_ok = true;
  bool converse_ok = true;
  bool reversible_ok = true;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto [da, db] = dims[t % dims.size()];
    QuasiState a = random_pure_state(da, db, seed + 2 * t);
    QuasiState b = random_state(da, db, seed + 2 * t + 1, 1 + t % (da * db));
    double en_a = log_negativity(a).log_negativity;
    double en_b = log_negativity(b).log_negativity;
    if (en_a < en_b) {
      std::swap(a, b);
      std::swap(en_a, en_b);
    }
    const SynthesisResult r = synthesize(a, b);
    synth_ok = synth_ok && verify(r.channel, &a, &b, tol).is_pptq_channel();
    if (en_a > en_b + 1e-9) {
      try {
        synthesize(b, a);
        converse_ok = false;
      } catch (const PreconditionViolated&) {
      }
    }
    if (en_a > kZeroNegativity && en_b > kZeroNegativity) {
      const RateReport rate = conversion_ratio(a, b);
      reversible_ok = reversible_ok && std::abs(rate.reversibility_product - 1.0) <= 1e-9;
    }
  }
  checks.emplace_back("synthesis_verifies", synth_ok);
  checks.emplace_back("converse_rejects", converse_ok);
  checks.emplace_back("reversibility", reversible_ok);
  checks.emplace_back("snap_rule", one_shot_exact_cost_from_en(std::log2(3.0), 2).d == 9 &&
                                       one_shot_exact_distillable_from_en(std::log2(3.0), 2).d == 9);
  const TemperedResult phi2 = tempered_negativity(max_entangled(2));
  checks.emplace_back("tempered_phi2", std::abs(phi2.n_tau - 2.0) <= 1e-4);

  bool all = true;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& [name, pass] : checks) {
    all = all && pass;
    list.push_back({{"name", name}, {"pass", pass}});
  }
  if (ctx.json()) {
    ctx.emit({{"checks", std::move(list)}, {"all_pass", all}, {"seed", seed}, {"trials", trials}});
  } else {
    for (const auto& [name, pass] : checks) ctx.out() << (pass ? "PASS " : "FAIL ") << name << '\n';
  }
  return all ? kOk : kCheckFailed;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const InvariantViolation*>(&e) ||
      dynamic_cast<const DimensionMismatch*>(&e)) {
    return kInputError;
  }
  if (dynamic_cast<const PreconditionViolated*>(&e) || dynamic_cast<const DimensionCapExceeded*>(&e) ||
      dynamic_cast<const ZeroNegativityTarget*>(&e) || dynamic_cast<const NegativeNegativity*>(&e)) {
    return kPrecondition;
  }
  if (dynamic_cast<const NonConvergence*>(&e)) return kInconclusive;
  return kInternal;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"PPT quasi-operation toolkit", "pptq"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--tol", opt.tol, "verification tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "random seed");
  app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--dim-cap", opt.dim_cap, "largest matrix side accepted")->check(CLI::PositiveNumber);

  std::string rho, sigma, path;
  std::size_t depth = kDefaultTableDepth;
  std::size_t trials = 20;
  SolverFlags solver;
  RandomFlags random;
  std::function<int(Context&)> action;

  auto* en = app.add_subcommand("en", "log-negativity of a state");
  en->add_option("state", rho)->required();
  en->callback([&] { action = [&](Context& c) { return cmd_en(c, rho); }; });

  auto* ntau = app.add_subcommand("ntau", "tempered negativity");
  ntau->add_option("rho", rho)->required();
  ntau->add_option("--sigma", sigma, "evaluate N_tau(sigma|rho)");
  add_solver_flags(ntau, solver);
  ntau->callback([&] { action = [&](Context& c) { return cmd_ntau(c, rho, sigma, solver); }; });

  auto* syn = app.add_subcommand("synthesize", "build a PPTq channel mapping rho to sigma");
  syn->add_option("rho", rho)->required();
  syn->add_option("sigma", sigma)->required();
  syn->add_option("out", path, "channel file to write")->required();
  syn->callback([&] { action = [&](Context& c) { return cmd_synthesize(c, rho, sigma, path); }; });

  auto* ver = app.add_subcommand("verify-channel", "check a channel file");
  ver->add_option("channel", path)->required();
  ver->add_option("--rho", rho);
  ver->add_option("--sigma", sigma);
  bool require_cp = false;
  ver->add_flag("--require-cp", require_cp, "fail when the Choi matrix is not PSD");
  ver->callback([&] { action = [&](Context& c) { return cmd_verify(c, path, rho, sigma, require_cp); }; });

  auto* rate = app.add_subcommand("rate", "exact conversion rates");
  rate->add_option("rho", rho)->required();
  rate->add_option("sigma", sigma)->required();
  rate->add_option("--depth", depth, "one-shot table depth")->check(CLI::PositiveNumber);
  rate->callback([&] { action = [&](Context& c) { return cmd_rate(c, rho, sigma, depth); }; });

  auto* chain = app.add_subcommand("chain-check", "entanglement measure chain");
  chain->add_option("rho", rho)->required();
  chain->add_option("--depth", depth, "one-shot table depth")->check(CLI::PositiveNumber);
  add_solver_flags(chain, solver);
  chain->callback([&] { action = [&](Context& c) { return cmd_chain(c, rho, solver, depth); }; });

  auto* rnd = app.add_subcommand("random-state", "generate a test state");
  rnd->add_option("kind", random.kind)->required()->check(CLI::IsMember({"state", "pure", "quasi", "mixed", "maxent"}));
  rnd->add_option("d_a", random.d_a)->required()->check(CLI::PositiveNumber);
  rnd->add_option("d_b", random.d_b)->required()->check(CLI::PositiveNumber);
  rnd->add_option("out", random.out, "file to write (stdout if omitted)");
  rnd->add_option("--rank", random.rank, "rank for kind=state (0 = full)");
  rnd->add_option("--neg-weight", random.neg_weight, "negative mass for kind=quasi")->check(CLI::NonNegativeNumber);
  rnd->callback([&] { action = [&](Context& c) { return cmd_random(c, random); }; });

  auto* self = app.add_subcommand("selftest", "");
  self->group("");
  self->add_option("--trials", trials)->check(CLI::PositiveNumber);
  self->callback([&] { action = [&](Context& c) { return cmd_selftest(c, trials); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  Context ctx(opt, out, err);
  try {
    return action(ctx);
  } catch (const PreconditionViolated& e) {
    err << "error: E_N(ρ)=" << fixed6(e.en_rho()) << " < E_N(σ)=" << fixed6(e.en_sigma()) << '\n';
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace pptq::cli
