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

#include "pptq/tempered.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <random>

#include "pptq/errors.hpp"

namespace pptq {


namespace {

// Eigenvalues of rho above this span its support.
constexpr double kSupportThreshold = 1e-10;
constexpr std::size_t kCheckEvery = 10;
constexpr int kSearchSteps = 200;

// A point of the search space. `t` is only used by the lifted formulation.
struct Point {
  Matrix x;
  double t = 0.0;

  Point operator+(const Point& o) const { return {x + o.x, t + o.t}; }
  Point operator-(const Point& o) const { return {x - o.x, t - o.t}; }
};

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

// tr(AB) for Hermitian A, B.
double real_trace_product(const Matrix& a, const Matrix& b) {
  return (a.cwiseProduct(b.transpose())).sum().real();
}

Eigen::SelfAdjointEigenSolver<Matrix> solve_eigen(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
  if (solver.info() != Eigen::Success) throw NonConvergence("eigensolver failed in projection");
  return solver;
}

Matrix rebuild(const Eigen::SelfAdjointEigenSolver<Matrix>& solver, const RealVector& values) {
  return solver.eigenvectors() * values.cast<Complex>().asDiagonal() *
         solver.eigenvectors().adjoint();
}

struct ConeProjection {
  double c;
  RealVector values;
};

// Euclidean projection of (c0, x) onto {(c, y) : |y_i| <= c, c >= c_min}
// under the metric weight * c^2 + |y|^2, c_min >= 0.
ConeProjection project_norm_cone(double c0, const RealVector& x, double weight, double c_min) {
  std::vector<double> mags(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) mags[static_cast<std::size_t>(i)] = std::abs(x[i]);
  std::sort(mags.begin(), mags.end(), std::greater<>());

  // With the m largest magnitudes clipped, stationarity gives
  // c = (weight * c0 + sum_{i<m} |x_i|) / (weight + m). The reduced objective
  // is convex in c, so the bound c >= c_min is applied afterwards.
  double c = c0;
  double partial = 0.0;
  for (std::size_t m = 0; m <= mags.size(); ++m) {
    const double candidate = (weight * c0 + partial) / (weight + static_cast<double>(m));
    const bool lower_ok = m == mags.size() || mags[m] <= candidate;
    const bool upper_ok = m == 0 || mags[m - 1] > candidate;
    if (lower_ok && upper_ok) {
      c = candidate;
      break;
    }
    if (m < mags.size()) partial += mags[m];
  }
  c = std::max(c, c_min);
  return {c, x.cwiseMax(-c).cwiseMin(c)};
}

double pt_operator_norm(const Matrix& x, std::size_t d_a, std::size_t d_b) {
  return operator_norm(hermitian_part(partial_transpose(x, d_a, d_b)));
}

Matrix project_pt_ball(const Matrix& x, std::size_t d_a, std::size_t d_b) {
  const auto solver = solve_eigen(hermitian_part(partial_transpose(x, d_a, d_b)));
  const RealVector clipped = solver.eigenvalues().cwiseMax(-1.0).cwiseMin(1.0);
  return partial_transpose(rebuild(solver, clipped), d_a, d_b);
}

struct ProbeCheck {
  double violation = std::numeric_limits<double>::infinity();
  bool infeasible = false;  ///< certified by a separating hyperplane
};

// Feasibility problem at one objective level: convex sets with exact
// projections, a repair map that turns any point into an exactly feasible
// witness, and an optional infeasibility certificate.
class Model {
 public:
  Model(const QuasiState& sigma, std::size_t d_a, std::size_t d_b)
      : sigma_(sigma.matrix()), sigma_norm2_(sigma.matrix().squaredNorm()), d_a_(d_a), d_b_(d_b) {}
  virtual ~Model() = default;

  virtual std::size_t num_sets() const = 0;
  virtual Point project(std::size_t set, const Point& p, double level) const = 0;
  /// `last` holds the most recent projection onto each set.
  virtual ProbeCheck check(const std::vector<Point>& last, double level) const = 0;
  virtual Matrix repair(const Point& p) const = 0;
  virtual Point lift(const Matrix& witness) const = 0;

  double value(const Matrix& witness) const { return real_trace_product(witness, sigma_); }

 protected:
  Matrix project_objective(const Matrix& x, double level) const {
    const double s = value(x);
    if (s >= level) return x;
    return x + ((level - s) / sigma_norm2_) * sigma_;
  }

  Matrix sigma_;
  double sigma_norm2_;
  std::size_t d_a_;
  std::size_t d_b_;
};

// For a quantum state rho, ||X||_inf = tr(X rho) holds iff the support of
// rho lies in the top eigenspace of X, i.e. X = c P + K Y K^dagger with P
// the support projector, K an orthonormal basis of ker(rho) and
// ||Y||_inf <= c. On this face the program is a small SDP in (c, Y) with
// strictly feasible points, solved by a log-barrier method:
//
//   max g.v  s.t.  F_i(v) = C_i + sum_j v_j A_ij >= 0,
//   F_{1,2} = I -/+ X^{T_B},  F_{3,4} = c I -/+ Y.
class FaceBarrier {
 public:
  FaceBarrier(const QuasiState& sigma, const QuasiState& rho) : d_a_(rho.d_a()), d_b_(rho.d_b()) {
    const SpectralDecomposition spec = eigendecompose(rho.op());
    const auto n = static_cast<Eigen::Index>(rho.side());
    Eigen::Index rank = 0;
    while (rank < n && spec.eigenvalues[rank] > kSupportThreshold) ++rank;
    const Matrix support = spec.eigenvectors.leftCols(rank);
    support_ = support * support.adjoint();
    kernel_ = spec.eigenvectors.rightCols(n - rank);
    const Eigen::Index k = n - rank;

    // Orthonormal (Hilbert-Schmidt) basis of k x k Hermitian matrices.
    const double h = std::sqrt(0.5);
    for (Eigen::Index i = 0; i < k; ++i) {
      Matrix e = Matrix::Zero(k, k);
      e(i, i) = 1.0;
      basis_.push_back(e);
      for (Eigen::Index j = i + 1; j < k; ++j) {
        Matrix re = Matrix::Zero(k, k);
        re(i, j) = h;
        re(j, i) = h;
        basis_.push_back(re);
        Matrix im = Matrix::Zero(k, k);
        im(i, j) = Complex(0.0, -h);
        im(j, i) = Complex(0.0, h);
        basis_.push_back(im);
      }
    }

    const std::size_t vars = 1 + basis_.size();
    objective_ = RealVector(static_cast<Eigen::Index>(vars));
    objective_[0] = real_trace_product(support_, sigma.matrix());
    std::vector<Matrix> pt_coeffs{partial_transpose(support_, d_a_, d_b_)};
    const Matrix sigma_kernel = kernel_.adjoint() * sigma.matrix() * kernel_;
    for (std::size_t j = 0; j < basis_.size(); ++j) {
      objective_[static_cast<Eigen::Index>(j + 1)] = real_trace_product(basis_[j], sigma_kernel);
      pt_coeffs.push_back(partial_transpose(Matrix(kernel_ * basis_[j] * kernel_.adjoint()), d_a_, d_b_));
    }

    const Matrix id_n = Matrix::Identity(n, n);
    Lmi upper{id_n, {}}, lower{id_n, {}};
    for (const Matrix& a : pt_coeffs) {
      upper.coeffs.push_back(-a);
      lower.coeffs.push_back(a);
    }
    lmis_.push_back(std::move(upper));
    lmis_.push_back(std::move(lower));
    if (k > 0) {
      const Matrix id_k = Matrix::Identity(k, k);
      Lmi minus{Matrix::Zero(k, k), {id_k}}, plus{Matrix::Zero(k, k), {id_k}};
      for (const Matrix& b : basis_) {
        minus.coeffs.push_back(-b);
        plus.coeffs.push_back(b);
      }
      lmis_.push_back(std::move(minus));
      lmis_.push_back(std::move(plus));
    }
    for (const Lmi& l : lmis_) barrier_degree_ += static_cast<double>(l.constant.rows());
    // Feasible vectors satisfy |v|_2 = ||X||_F = ||X^{T_B}||_F <= sqrt(n).
    radius_ = std::sqrt(static_cast<double>(n));
  }

  std::size_t num_vars() const { return 1 + basis_.size(); }

  // c = 1/(2 ||P^{T_B}||_inf), Y = 0 is strictly feasible.
  RealVector start() const {
    RealVector v = RealVector::Zero(static_cast<Eigen::Index>(num_vars()));
    v[0] = 0.5 / std::max(pt_operator_norm(support_, d_a_, d_b_), 1e-300);
    return v;
  }

  Matrix witness(const RealVector& v) const {
    Matrix x = v[0] * support_;
    if (kernel_.cols() == 0) return x;
    Matrix y = Matrix::Zero(kernel_.cols(), kernel_.cols());
    for (std::size_t j = 0; j < basis_.size(); ++j) y += v[static_cast<Eigen::Index>(j + 1)] * basis_[j];
    return x + kernel_ * y * kernel_.adjoint();
  }

  double value(const RealVector& v) const { return objective_.dot(v); }

  struct Local {
    bool interior = false;
    double f = 0.0;
    RealVector grad;
    Eigen::MatrixXd hess;
  };

  // f(v) = -s g.v - sum_i log det F_i(v), with derivatives when requested.
  Local evaluate(const RealVector& v, double s, bool derivatives) const {
    Local out;
    const auto vars = static_cast<Eigen::Index>(num_vars());
    out.f = -s * value(v);
    if (derivatives) {
      out.grad = -s * objective_;
      out.hess = Eigen::MatrixXd::Zero(vars, vars);
    }
    for (const Lmi& l : lmis_) {
      Matrix f = l.constant;
      for (Eigen::Index j = 0; j < vars; ++j) f += v[j] * l.coeffs[static_cast<std::size_t>(j)];
      Eigen::LLT<Matrix> llt(hermitian_part(f));
      if (llt.info() != Eigen::Success) return out;
      const Matrix& lower = llt.matrixLLT();
      for (Eigen::Index i = 0; i < lower.rows(); ++i) {
        const double diag = lower(i, i).real();
        if (!(diag > 0.0)) return out;
        out.f -= 2.0 * std::log(diag);
      }
      if (!derivatives) continue;
      // W_j = L^{-1} A_j L^{-dagger}: grad_j = -tr W_j, H_jk = <W_j, W_k>.
      const auto side = f.rows();
      Matrix stacked(side * side, vars);
      for (Eigen::Index j = 0; j < vars; ++j) {
        const Matrix half = llt.matrixL().solve(l.coeffs[static_cast<std::size_t>(j)]);
        const Matrix w = llt.matrixL().solve(Matrix(half.adjoint())).adjoint();
        out.grad[j] -= w.trace().real();
        stacked.col(j) = w.reshaped();
      }
      out.hess += (stacked.adjoint() * stacked).real();
    }
    out.interior = true;
    return out;
  }

  // Upper bound from the dual matrices Z_i = (F^{-1} - F^{-1} dF F^{-1}) / s,
  // dF the Newton step's change of F_i; these satisfy the dual equality up
  // to rounding, which is charged at the feasible radius.
  double dual_bound(const RealVector& v, const RealVector& dir, double s) const {
    const auto vars = static_cast<Eigen::Index>(num_vars());
    RealVector residual = objective_;
    double bound = 0.0;
    for (const Lmi& l : lmis_) {
      Matrix f = l.constant;
      Matrix df = Matrix::Zero(f.rows(), f.cols());
      for (Eigen::Index j = 0; j < vars; ++j) {
        f += v[j] * l.coeffs[static_cast<std::size_t>(j)];
        df += dir[j] * l.coeffs[static_cast<std::size_t>(j)];
      }
      Eigen::LLT<Matrix> llt(hermitian_part(f));
      if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
      const Matrix inverse = llt.solve(Matrix::Identity(f.rows(), f.cols()));
      const Matrix z = hermitian_part(inverse - inverse * df * inverse) / s;
      Eigen::SelfAdjointEigenSolver<Matrix> eig(z, Eigen::EigenvaluesOnly);
      if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < 0.0) {
        return std::numeric_limits<double>::infinity();
      }
      bound += real_trace_product(l.constant, z);
      for (Eigen::Index j = 0; j < vars; ++j) {
        residual[j] += real_trace_product(l.coeffs[static_cast<std::size_t>(j)], z);
      }
    }
    return bound + radius_ * residual.norm();
  }

  double barrier_degree() const { return barrier_degree_; }

 private:
  struct Lmi {
    Matrix constant;
    std::vector<Matrix> coeffs;
  };

  std::size_t d_a_;
  std::size_t d_b_;
  Matrix support_;
  Matrix kernel_;
  std::vector<Matrix> basis_;
  RealVector objective_;
  std::vector<Lmi> lmis_;
  double barrier_degree_ = 0.0;
  double radius_ = 1.0;
};

struct BarrierOutcome {
  Matrix witness;
  double value = -std::numeric_limits<double>::infinity();
  double upper_bound = std::numeric_limits<double>::infinity();
  std::size_t newton_steps = 0;
  std::size_t stages = 0;
  std::vector<double> history;
};

BarrierOutcome run_barrier(const FaceBarrier& problem, const SolverConfig& cfg, double target_gap) {
  constexpr double kGrowth = 10.0;
  constexpr double kCentered = 1e-10;
  constexpr int kMaxHalvings = 80;
  constexpr std::size_t kMaxStageSteps = 100;
  BarrierOutcome out;
  RealVector v = problem.start();
  double s = 1.0;
  while (out.stages < cfg.max_bisection_steps && out.newton_steps < cfg.max_iterations) {
    ++out.stages;
    FaceBarrier::Local here = problem.evaluate(v, s, true);
    std::size_t stage_steps = 0;
    while (out.newton_steps < cfg.max_iterations) {
      const RealVector dir = here.hess.ldlt().solve(-here.grad);
      const double decrement = -here.grad.dot(dir);
      if (!(decrement > 2.0 * kCentered) || !dir.allFinite()) break;
      ++out.newton_steps;
      // Damped Newton step; it stays inside the domain of a self-concordant
      // function, the halving only guards against rounding.
      const double lambda = std::sqrt(decrement);
      double alpha = lambda > 0.25 ? 1.0 / (1.0 + lambda) : 1.0;
      bool moved = false;
      for (int h = 0; h < kMaxHalvings; ++h, alpha *= 0.5) {
        const RealVector trial = v + alpha * dir;
        if (problem.evaluate(trial, s, false).interior) {
          v = trial;
          moved = true;
          break;
        }
      }
      if (!moved || ++stage_steps > kMaxStageSteps) break;
      here = problem.evaluate(v, s, true);
    }
    const double value = problem.value(v);
    if (value > out.value) {
      out.value = value;
      out.witness = problem.witness(v);
    }
    here = problem.evaluate(v, s, true);
    if (here.interior) {
      const RealVector dir = here.hess.ldlt().solve(-here.grad);
      if (dir.allFinite()) out.upper_bound = std::min(out.upper_bound, problem.dual_bound(v, dir, s));
    }
    out.history.push_back(out.value);
    if (out.upper_bound - out.value <= target_gap) break;
    if (problem.barrier_degree() / s < 1e-3 * target_gap && s > 1e14) break;
    s *= kGrowth;
  }
  return out;
}

// For a proper quasi-state rho the constraint ||X||_inf <= tr(X rho) has
// interior; the search runs over pairs (X, t) with the sets
//   {tr(X rho) = t}, {||X||_inf <= t}, {||X^{T_B}||_inf <= 1}, {tr(X sigma) >= level}.
// No infeasibility certificate is produced on this path.
class LiftedModel final : public Model {
 public:
  LiftedModel(const QuasiState& sigma, const QuasiState& rho)
      : Model(sigma, rho.d_a(), rho.d_b()), rho_(rho.matrix()), rho_norm2_(rho.matrix().squaredNorm()) {
    // Interior point used by repair: s * sign(rho), scaled into the PT ball.
    const SpectralDecomposition spec = eigendecompose(rho.op());
    const RealVector signs = spec.eigenvalues.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
    const Matrix sign = spec.eigenvectors * signs.cast<Complex>().asDiagonal() * spec.eigenvectors.adjoint();
    const double scale = 1.0 / pt_operator_norm(sign, d_a_, d_b_);
    interior_ = sign * scale;
    interior_slack_ = scale * (spec.eigenvalues.cwiseAbs().sum() - 1.0);
  }

  std::size_t num_sets() const override { return 4; }

  Point project(std::size_t set, const Point& p, double level) const override {
    switch (set) {
      case 0: {
        const double gap = real_trace_product(p.x, rho_) - p.t;
        const double step = gap / (rho_norm2_ + 1.0);
        return {p.x - step * rho_, p.t + step};
      }
      case 1: {
        const auto solver = solve_eigen(hermitian_part(p.x));
        const ConeProjection proj = project_norm_cone(p.t, solver.eigenvalues(), 1.0, 0.0);
        return {rebuild(solver, proj.values), proj.c};
      }
      case 2: return {project_pt_ball(p.x, d_a_, d_b_), p.t};
      default: return {project_objective(p.x, level), p.t};
    }
  }

  ProbeCheck check(const std::vector<Point>& last, double level) const override {
    const Point& p = last.back();
    const Matrix h = hermitian_part(p.x);
    const double lin = std::abs(real_trace_product(h, rho_) - p.t);
    const double cone = std::max(0.0, operator_norm(h) - p.t);
    const double pt = std::max(0.0, pt_operator_norm(h, d_a_, d_b_) - 1.0);
    const double gap = std::max(0.0, level - value(h));
    return {std::max({lin, cone, pt, gap}), false};
  }

  Matrix repair(const Point& p) const override {
    Matrix x = hermitian_part(p.x);
    const double pt = pt_operator_norm(x, d_a_, d_b_);
    if (pt > 1.0) x /= pt;
    const double excess = operator_norm(x) - real_trace_product(x, rho_);
    if (excess > 0.0) {
      // Convexity of the norm: this mixing weight restores ||X||_inf <= tr(X rho).
      const double mu = excess / (excess + interior_slack_);
      x = (1.0 - mu) * x + mu * interior_;
    }
    return x;
  }

  Point lift(const Matrix& witness) const override { return {witness, real_trace_product(witness, rho_)}; }

 private:
  Matrix rho_;
  double rho_norm2_;
  Matrix interior_;
  double interior_slack_ = 0.0;
};

enum class ProbeOutcome { Feasible, Infeasible, Capped };

struct ProbeResult {
  ProbeOutcome outcome = ProbeOutcome::Capped;
  Matrix best_witness;
  double best_value = -std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
};

// Dykstra's alternating projections, started from a known witness.
ProbeResult run_dykstra(const Model& model, const Matrix& start, double level, const SolverConfig& cfg) {
  ProbeResult out;
  const std::size_t sets = model.num_sets();
  Point x = model.lift(start);
  const Point zero{Matrix::Zero(start.rows(), start.cols()), 0.0};
  std::vector<Point> increments(sets, zero);
  std::vector<Point> last(sets, zero);
  for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
    for (std::size_t s = 0; s < sets; ++s) {
      const Point shifted = x + increments[s];
      x = model.project(s, shifted, level);
      increments[s] = shifted - x;
      last[s] = x;
    }
    out.iterations = it;
    if (it % kCheckEvery != 0 && it != cfg.max_iterations) continue;
    const Matrix candidate = model.repair(x);
    const double value = model.value(candidate);
    if (value > out.best_value) {
      out.best_value = value;
      out.best_witness = candidate;
    }
    const ProbeCheck check = model.check(last, level);
    if (value >= level || check.violation <= cfg.feasibility_tol) {
      out.outcome = ProbeOutcome::Feasible;
      return out;
    }
    if (check.infeasible) {
      out.outcome = ProbeOutcome::Infeasible;
      return out;
    }
  }
  return out;
}

void validate_config(const SolverConfig& cfg) {
  if (!(cfg.bisection_tol > 0.0) || !(cfg.feasibility_tol > 0.0) || cfg.max_iterations == 0) {
    throw InvariantViolation("solver tolerances and iteration limits must be positive");
  }
}

TemperedResult solve(const QuasiState& sigma, const QuasiState& rho, const SolverConfig& cfg) {
  validate_config(cfg);
  if (sigma.d_a() != rho.d_a() || sigma.d_b() != rho.d_b()) {
    throw DimensionMismatch("sigma and rho must have matching dimensions");
  }
  TemperedResult result;
  result.config = cfg;
  result.experimental = !rho.is_state();

  const auto n = static_cast<Eigen::Index>(rho.side());
  // X = I is feasible for every unit-trace rho, with value tr(sigma) = 1;
  // ||sigma^{T_B}||_1 bounds the program from above.
  Matrix best = Matrix::Identity(n, n);
  double lo = real_trace_product(best, sigma.matrix());
  double hi = trace_norm(partial_transpose(sigma.op()));
  double certified_hi = hi;
  result.lower_bound_history.push_back(lo);

  if (hi - lo > cfg.bisection_tol && rho.is_state()) {
    const FaceBarrier problem(sigma, rho);
    const BarrierOutcome run = run_barrier(problem, cfg, 0.01 * cfg.bisection_tol);
    result.iterations = run.newton_steps;
    result.bisection_steps = run.stages;
    for (double value : run.history) result.lower_bound_history.push_back(std::max(lo, value));
    if (run.value > lo) {
      lo = run.value;
      best = run.witness;
    }
    hi = std::max(lo, std::min(hi, run.upper_bound));
    certified_hi = hi;
  } else if (hi - lo > cfg.bisection_tol) {
    const LiftedModel model(sigma, rho);
    while (hi - lo > cfg.bisection_tol && result.bisection_steps < cfg.max_bisection_steps) {
      const double level = 0.5 * (lo + hi);
      const ProbeResult probe = run_dykstra(model, best, level, cfg);
      result.iterations += probe.iterations;
      ++result.bisection_steps;
      if (probe.best_value > lo) {
        lo = probe.best_value;
        best = probe.best_witness;
      }
      if (probe.outcome == ProbeOutcome::Infeasible) {
        hi = std::min(hi, level);
        certified_hi = std::min(certified_hi, level);
      } else if (probe.outcome == ProbeOutcome::Capped) {
        hi = std::min(hi, level);
        ++result.capped_probes;
      }
      hi = std::max(hi, lo);
      certified_hi = std::max(certified_hi, lo);
      result.lower_bound_history.push_back(lo);
    }
  }
  result.converged = hi - lo <= cfg.bisection_tol;
  result.upper_bound = certified_hi;
  result.witness = BipartiteOperator(rho.d_a(), rho.d_b(), hermitian_part(best));
  result.n_tau = real_trace_product(result.witness.matrix(), sigma.matrix());
  result.residuals = witness_residuals(result.witness, rho);
  return result;
}

PropertyCheck& record(PropertyCheck& check, double margin, bool conclusive, double tolerance) {
  ++check.trials;
  if (!conclusive) ++check.inconclusive;
  check.worst_margin = std::min(check.worst_margin, margin);
  if (margin < -tolerance) {
    check.verdict = Verdict::Fail;
  } else if (!conclusive && check.verdict == Verdict::Pass) {
    check.verdict = Verdict::Inconclusive;
  }
  return check;
}

nlohmann::json check_to_json(const PropertyCheck& c) {
  return nlohmann::json{{"verdict", to_string(c.verdict)},
                        {"worst_margin", c.worst_margin},
                        {"trials", c.trials},
                        {"inconclusive", c.inconclusive}};
}

}  // namespace

FeasibilityResiduals witness_residuals(const BipartiteOperator& witness, const QuasiState& rho) {
  const double op = operator_norm(witness);
  const double pt = operator_norm(partial_transpose(witness));
  const double linear = real_trace_product(witness.matrix(), rho.matrix());
  return {std::max(0.0, op - linear), std::max(0.0, pt - 1.0), std::abs(op - linear)};
}

TemperedResult tempered_negativity(const QuasiState& rho, const SolverConfig& cfg) {
  return solve(rho, rho, cfg);
}

TemperedResult tempered_negativity_cross(const QuasiState& sigma, const QuasiState& rho,
                                         const SolverConfig& cfg) {
  return solve(sigma, rho, cfg);
}

double tempered_log_negativity(const TemperedResult& result) { return std::log2(result.n_tau); }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

bool PropertyReport::all_pass() const {
  return a.verdict == Verdict::Pass && b.verdict == Verdict::Pass && c.verdict == Verdict::Pass;
}

PropertyReport verify_lemma_properties(const QuasiState& rho, std::size_t trials,
                                       std::uint64_t seed, const SolverConfig& cfg,
                                       double tolerance) {
  if (!rho.is_state()) throw InvariantViolation("property checks are defined for quantum states");
  if (rho.side() > 9) throw DimensionCapExceeded("property checks need side <= 9");
  PropertyReport report;
  report.tolerance = tolerance;

  const TemperedResult base = tempered_negativity(rho, cfg);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.05, 0.5);
  for (std::size_t t = 0; t < trials; ++t) {
    const QuasiState tau = random_state(rho.d_a(), rho.d_b(), rng());
    const double mu = weight(rng);
    const Matrix mixed = (1.0 - mu) * rho.matrix() + mu * tau.matrix();
    const QuasiState sigma(BipartiteOperator(rho.d_a(), rho.d_b(), mixed / mixed.trace().real()));
    const double eps = trace_norm(Matrix(sigma.matrix() - rho.matrix()));
    const TemperedResult cross = tempered_negativity_cross(sigma, rho, cfg);
    const bool conclusive = cross.converged && base.converged;
    record(report.a, trace_norm(partial_transpose(sigma.op())) - cross.n_tau, cross.converged,
           tolerance);
    record(report.b, cross.n_tau - (1.0 - eps) * base.n_tau, conclusive, tolerance);
  }

  // The product of an optimal witness is feasible for rho (x) rho.
  const QuasiState squared(tensor_power(rho.op(), 2));
  const BipartiteOperator product = tensor_product(base.witness, base.witness);
  const FeasibilityResiduals res = witness_residuals(product, squared);
  const double value = real_trace_product(product.matrix(), squared.matrix());
  const bool feasible = std::max(res.r_op, res.r_pt) <= 1e-6;
  record(report.c, value - base.n_tau * base.n_tau, feasible && base.converged, tolerance);
  return report;
}

nlohmann::json to_json(const SolverConfig& cfg) {
  return nlohmann::json{{"bisection_tol", cfg.bisection_tol},
                        {"max_bisection_steps", cfg.max_bisection_steps},
                        {"max_iterations", cfg.max_iterations},
                        {"feasibility_tol", cfg.feasibility_tol}};
}

nlohmann::json to_json(const TemperedResult& result) {
  return nlohmann::json{
      {"n_tau", result.n_tau},
      {"e_n_tau", tempered_log_negativity(result)},
      {"upper_bound", result.upper_bound},
      {"witness",
       {{"d_a", result.witness.d_a()},
        {"d_b", result.witness.d_b()},
        {"matrix", matrix_to_json(result.witness.matrix())}}},
      {"residuals",
       {{"r_op", result.residuals.r_op}, {"r_pt", result.residuals.r_pt}, {"r_lin", result.residuals.r_lin}}},
      {"iterations", result.iterations},
      {"bisection_steps", result.bisection_steps},
      {"capped_probes", result.capped_probes},
      {"converged", result.converged},
      {"experimental", result.experimental},
      {"lower_bound_history", result.lower_bound_history},
      {"config", to_json(result.config)}};
}

nlohmann::json to_json(const PropertyReport& report) {
  return nlohmann::json{{"a", check_to_json(report.a)},
                        {"b", check_to_json(report.b)},
                        {"c", check_to_json(report.c)},
                        {"tolerance", report.tolerance},
                        {"all_pass", report.all_pass()}};
}

}  // namespace pptq
