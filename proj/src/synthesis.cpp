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

#include "pptq/synthesis.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "pptq/errors.hpp"
#include "pptq/negativity.hpp"

namespace pptq {

namespace {

// Transposes the subsystems flagged in `mask` of a matrix on the ordered
// tensor product of `dims`.
Matrix partial_transpose_subsystems(const Matrix& m, const std::vector<std::size_t>& dims,
                                    const std::vector<bool>& mask) {
  const Eigen::Index side = m.rows();
  Matrix out(side, side);
  const std::size_t k = dims.size();
  std::vector<std::size_t> row_digits(k), col_digits(k);
  auto decompose = [&](std::size_t index, std::vector<std::size_t>& digits) {
    for (std::size_t s = k; s-- > 0;) {
      digits[s] = index % dims[s];
      index /= dims[s];
    }
  };
  auto compose = [&](const std::vector<std::size_t>& digits) {
    std::size_t index = 0;
    for (std::size_t s = 0; s < k; ++s) index = index * dims[s] + digits[s];
    return static_cast<Eigen::Index>(index);
  };
  for (Eigen::Index r = 0; r < side; ++r) {
    for (Eigen::Index c = 0; c < side; ++c) {
      decompose(static_cast<std::size_t>(r), row_digits);
      decompose(static_cast<std::size_t>(c), col_digits);
      for (std::size_t s = 0; s < k; ++s) {
        if (mask[s]) std::swap(row_digits[s], col_digits[s]);
      }
      out(r, c) = m(compose(row_digits), compose(col_digits));
    }
  }
  return out;
}

double min_eigenvalue_hermitian_part(const Matrix& m) {
  const Matrix h = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NonConvergence("eigensolver failed in verify");
  return solver.eigenvalues().minCoeff();
}

Matrix projector_onto(const Matrix& vectors, const std::vector<Eigen::Index>& columns) {
  const Eigen::Index n = vectors.rows();
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index j : columns) p += vectors.col(j) * vectors.col(j).adjoint();
  return p;
}

Matrix weighted_sum(const SpectralDecomposition& spec, const std::vector<Eigen::Index>& columns,
                    double sign) {
  const Eigen::Index n = spec.eigenvectors.rows();
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index j : columns) {
    out += (sign * spec.eigenvalues[j]) * spec.eigenvectors.col(j) * spec.eigenvectors.col(j).adjoint();
  }
  return out;
}

void require_dims(const ChannelChoi& ch) {
  const auto expected = static_cast<Eigen::Index>(ch.in_side() * ch.out_side());
  if (ch.choi.rows() != expected || ch.choi.cols() != expected) {
    throw DimensionMismatch("Choi side " + std::to_string(ch.choi.rows()) +
                            " does not match in_side*out_side = " + std::to_string(expected));
  }
}

Dims dims_from_json(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  const auto& v = j[key];
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_unsigned() || !v[1].is_number_unsigned()) {
    throw ParseError(std::string(key) + " must be a pair of positive integers");
  }
  Dims d{v[0].get<std::size_t>(), v[1].get<std::size_t>()};
  if (d.first == 0 || d.second == 0) throw ParseError(std::string(key) + " must be positive");
  return d;
}

nlohmann::json check_to_json(const CheckResult& c) {
  if (!c.evaluated) return nlohmann::json{{"evaluated", false}};
  return nlohmann::json{{"evaluated", true}, {"pass", c.pass}, {"value", c.value}};
}

}  // namespace

std::string_view to_string(SynthesisBranch b) {
  switch (b) {
    case SynthesisBranch::General: return "general";
    case SynthesisBranch::ConstantTarget: return "constant-target";
    case SynthesisBranch::NoNegativePart: return "no-negative-part";
  }
  return "unknown";
}

ChannelChoi choi_of(const LinearMap& map, Dims in_dims, Dims out_dims) {
  const auto n_in = static_cast<Eigen::Index>(in_dims.first * in_dims.second);
  const auto n_out = static_cast<Eigen::Index>(out_dims.first * out_dims.second);
  Matrix choi = Matrix::Zero(n_in * n_out, n_in * n_out);
  Matrix unit = Matrix::Zero(n_in, n_in);
  for (Eigen::Index i = 0; i < n_in; ++i) {
    for (Eigen::Index j = 0; j < n_in; ++j) {
      unit(i, j) = 1.0;
      const Matrix image = map(unit);
      unit(i, j) = 0.0;
      if (image.rows() != n_out || image.cols() != n_out) {
        throw DimensionMismatch("map output side does not match out_dims");
      }
      choi.block(i * n_out, j * n_out, n_out, n_out) = image;
    }
  }
  return {in_dims, out_dims, std::move(choi)};
}

ChannelChoi identity_channel(Dims dims) {
  return choi_of([](const Matrix& x) { return x; }, dims, dims);
}

ChannelChoi constant_channel(Dims in_dims, const QuasiState& target) {
  const Matrix sigma = target.matrix();
  return choi_of([sigma](const Matrix& x) -> Matrix { return x.trace() * sigma; }, in_dims,
                 {target.d_a(), target.d_b()});
}

ChannelChoi partial_transpose_channel(Dims dims) {
  return choi_of(
      [dims](const Matrix& x) { return partial_transpose(x, dims.first, dims.second); }, dims,
      dims);
}

Matrix apply(const ChannelChoi& ch, const Matrix& input) {
  require_dims(ch);
  const auto n_in = static_cast<Eigen::Index>(ch.in_side());
  const auto n_out = static_cast<Eigen::Index>(ch.out_side());
  if (input.rows() != n_in || input.cols() != n_in) {
    throw DimensionMismatch("input side " + std::to_string(input.rows()) +
                            " does not match channel input side " + std::to_string(n_in));
  }
  Matrix out = Matrix::Zero(n_out, n_out);
  for (Eigen::Index i = 0; i < n_in; ++i) {
    for (Eigen::Index j = 0; j < n_in; ++j) {
      const Complex x = input(i, j);
      if (x == Complex(0.0, 0.0)) continue;
      out += x * ch.choi.block(i * n_out, j * n_out, n_out, n_out);
    }
  }
  return out;
}

QuasiState apply(const ChannelChoi& ch, const QuasiState& input) {
  if (input.d_a() != ch.in_dims.first || input.d_b() != ch.in_dims.second) {
    throw DimensionMismatch("state dimensions do not match channel input dimensions");
  }
  Matrix out = apply(ch, input.matrix());
  return QuasiState(BipartiteOperator(ch.out_dims.first, ch.out_dims.second, std::move(out)));
}

Matrix pt_conjugated_choi(const ChannelChoi& ch) {
  require_dims(ch);
  return partial_transpose_subsystems(
      ch.choi, {ch.in_dims.first, ch.in_dims.second, ch.out_dims.first, ch.out_dims.second},
      {false, true, false, true});
}

Matrix choi_input_marginal(const ChannelChoi& ch) {
  require_dims(ch);
  const auto n_in = static_cast<Eigen::Index>(ch.in_side());
  const auto n_out = static_cast<Eigen::Index>(ch.out_side());
  Matrix marginal(n_in, n_in);
  for (Eigen::Index i = 0; i < n_in; ++i)
    for (Eigen::Index j = 0; j < n_in; ++j)
      marginal(i, j) = ch.choi.block(i * n_out, j * n_out, n_out, n_out).trace();
  return marginal;
}

SynthesisResult synthesize(const QuasiState& rho, const QuasiState& sigma) {
  SynthesisCertificate cert;
  const NegativityValue en_rho = log_negativity(rho);
  const NegativityValue en_sigma = log_negativity(sigma);
  cert.en_rho = en_rho.log_negativity;
  cert.en_sigma = en_sigma.log_negativity;
  if (cert.en_rho < cert.en_sigma - kPreconditionSlack) {
    throw PreconditionViolated("E_N(rho) < E_N(sigma): no PPT quasi-operation maps rho to sigma",
                               cert.en_rho, cert.en_sigma);
  }

  const Dims in_dims{rho.d_a(), rho.d_b()};
  const Dims out_dims{sigma.d_a(), sigma.d_b()};
  const Matrix rho_pt = partial_transpose(rho.matrix(), rho.d_a(), rho.d_b());
  const Matrix sigma_pt = partial_transpose(sigma.matrix(), sigma.d_a(), sigma.d_b());
  cert.spectrum_rho_pt = eigendecompose(rho_pt);
  cert.spectrum_sigma_pt = eigendecompose(sigma_pt);
  const SpectralDecomposition& r = cert.spectrum_rho_pt;
  const SpectralDecomposition& s = cert.spectrum_sigma_pt;

  std::vector<Eigen::Index> r_plus, r_minus;
  for (Eigen::Index j = 0; j < r.eigenvalues.size(); ++j) {
    if (r.eigenvalues[j] >= -kSpectralSignGuard) {
      r_plus.push_back(j);
      cert.tr_r_plus += r.eigenvalues[j];
    } else {
      r_minus.push_back(j);
      cert.tr_r_minus -= r.eigenvalues[j];
    }
  }

  // Eigenvalues are sorted descending, so column 0 is argmax s_n.
  cert.chosen_k = 0;
  const auto k = static_cast<Eigen::Index>(cert.chosen_k);
  std::vector<Eigen::Index> s_plus, s_minus;
  for (Eigen::Index n = 0; n < s.eigenvalues.size(); ++n) {
    if (n == k) continue;
    if (s.eigenvalues[n] >= -kSpectralSignGuard) {
      s_plus.push_back(n);
      cert.tr_s_plus_tilde += s.eigenvalues[n];
    } else {
      s_minus.push_back(n);
      cert.tr_s_minus -= s.eigenvalues[n];
    }
  }

  if (cert.en_sigma <= kPreconditionSlack) {
    // sigma^{T_B'} is PSD up to noise, so w -> tr(w) sigma^{T_B'} is CPTP
    // and its PT conjugate is the constant map onto sigma.
    cert.branch = SynthesisBranch::ConstantTarget;
    cert.lambda_min = 0.0;
    return {constant_channel(in_dims, sigma), std::move(cert)};
  }

  const Matrix p_plus = projector_onto(r.eigenvectors, r_plus);
  const Matrix p_minus = projector_onto(r.eigenvectors, r_minus);
  const Matrix s_plus_tilde = weighted_sum(s, s_plus, 1.0);
  const Matrix s_minus_op = weighted_sum(s, s_minus, -1.0);
  const Matrix k_proj = s.eigenvectors.col(k) * s.eigenvectors.col(k).adjoint();

  const bool has_negative_part = cert.tr_r_minus > kSpectralSignGuard;
  cert.branch = has_negative_part ? SynthesisBranch::General : SynthesisBranch::NoNegativePart;
  const double plus_ratio = cert.tr_s_plus_tilde / cert.tr_r_plus;
  const double minus_ratio = has_negative_part ? cert.tr_s_minus / cert.tr_r_minus : 0.0;

  // lambda(w) = tr(w Q) with Q = I - plus_ratio P+ - minus_ratio P-.
  const auto n_in = static_cast<Eigen::Index>(rho.side());
  const Matrix q = Matrix::Identity(n_in, n_in) - plus_ratio * p_plus - minus_ratio * p_minus;
  cert.lambda_min = eigendecompose(Matrix((q + q.adjoint()) * 0.5)).eigenvalues.minCoeff();

  const double inv_r_plus = 1.0 / cert.tr_r_plus;
  const double inv_r_minus = has_negative_part ? 1.0 / cert.tr_r_minus : 0.0;
  auto measure_prepare = [&](const Matrix& w) -> Matrix {
    const Complex weight_plus = (p_plus * w).trace();
    const Complex weight_minus = (p_minus * w).trace();
    const Complex lambda = (q * w).trace();
    Matrix out = (weight_plus * inv_r_plus) * s_plus_tilde + lambda * k_proj;
    if (has_negative_part) out += (weight_minus * inv_r_minus) * s_minus_op;
    return out;
  };
  auto pptq_map = [&](const Matrix& x) -> Matrix {
    const Matrix w = partial_transpose(x, in_dims.first, in_dims.second);
    return partial_transpose(measure_prepare(w), out_dims.first, out_dims.second);
  };
  return {choi_of(pptq_map, in_dims, out_dims), std::move(cert)};
}

bool VerificationReport::all_pass() const {
  for (const CheckResult* c : {&hp, &tp, &cp, &pptq, &maps_rho_to_sigma}) {
    if (c->evaluated && !c->pass) return false;
  }
  return true;
}

bool VerificationReport::is_pptq_channel() const {
  return hp.pass && tp.pass && pptq.pass && (!maps_rho_to_sigma.evaluated || maps_rho_to_sigma.pass);
}

VerificationReport verify(const ChannelChoi& ch, const QuasiState* rho, const QuasiState* sigma,
                          const VerifyTolerances& tol) {
  require_dims(ch);
  VerificationReport report;

  report.hp.evaluated = true;
  report.hp.value = hermiticity_residual(ch.choi);
  report.hp.pass = report.hp.value <= tol.hermitian;

  const auto n_in = static_cast<Eigen::Index>(ch.in_side());
  report.tp.evaluated = true;
  report.tp.value = max_abs_entry(choi_input_marginal(ch) - Matrix::Identity(n_in, n_in));
  report.tp.pass = report.tp.value <= tol.trace_preserving;

  report.cp.evaluated = true;
  report.cp.value = min_eigenvalue_hermitian_part(ch.choi);
  report.cp.pass = report.hp.pass && report.cp.value >= -tol.positivity;

  report.pptq.evaluated = true;
  report.pptq.value = min_eigenvalue_hermitian_part(pt_conjugated_choi(ch));
  report.pptq.pass = report.hp.pass && report.pptq.value >= -tol.positivity;

  if (rho != nullptr && sigma != nullptr) {
    report.maps_rho_to_sigma.evaluated = true;
    if (rho->d_a() != ch.in_dims.first || rho->d_b() != ch.in_dims.second ||
        sigma->d_a() != ch.out_dims.first || sigma->d_b() != ch.out_dims.second) {
      throw DimensionMismatch("rho/sigma dimensions do not match the channel");
    }
    const Matrix diff = apply(ch, rho->matrix()) - sigma->matrix();
    report.maps_rho_to_sigma.value = trace_norm(Matrix((diff + diff.adjoint()) * 0.5));
    report.maps_rho_to_sigma.pass = report.maps_rho_to_sigma.value <= tol.maps_to;
  }
  return report;
}

MonotoneReport en_monotone_check(const ChannelChoi& ch, std::size_t trials, std::uint64_t seed,
                                 double tolerance) {
  constexpr std::array<double, 3> kNegWeights{0.0, 0.25, 0.5};
  MonotoneReport report;
  report.tolerance = tolerance;
  const auto [d_a, d_b] = ch.in_dims;
  const auto [d_a2, d_b2] = ch.out_dims;
  for (std::size_t t = 0; t < trials; ++t) {
    const QuasiState x = random_quasi_state(d_a, d_b, kNegWeights[t % kNegWeights.size()], seed + t);
    Matrix y = apply(ch, x.matrix());
    y = (y + y.adjoint()) * 0.5;
    const double en_in = log_negativity(x).log_negativity;
    const double en_out = std::log2(trace_norm(partial_transpose(y, d_a2, d_b2)));
    const double increase = en_out - en_in;
    report.max_increase = std::max(report.max_increase, increase);
    ++report.trials;
    if (increase > tolerance) ++report.violations;
  }
  return report;
}

nlohmann::json channel_to_json(const ChannelChoi& ch) {
  nlohmann::json j;
  j["in_dims"] = {ch.in_dims.first, ch.in_dims.second};
  j["out_dims"] = {ch.out_dims.first, ch.out_dims.second};
  j["choi"] = matrix_to_json(ch.choi);
  j["convention"] = std::string(kChoiConvention);
  return j;
}

ChannelChoi channel_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("channel file must hold a JSON object");
  ChannelChoi ch{dims_from_json(j, "in_dims"), dims_from_json(j, "out_dims"), {}};
  if (!j.contains("choi")) throw ParseError("missing field 'choi'");
  if (j.contains("convention") &&
      (!j["convention"].is_string() || j["convention"].get<std::string>() != kChoiConvention)) {
    throw ParseError("unsupported Choi convention");
  }
  ch.choi = matrix_from_json(j["choi"]);
  if (static_cast<std::size_t>(ch.choi.rows()) != ch.in_side() * ch.out_side()) {
    throw ParseError("Choi side does not match in_dims and out_dims");
  }
  return ch;
}

void save_channel(const ChannelChoi& ch, const std::filesystem::path& path) {
  write_text_file(path, dump_canonical(channel_to_json(ch)));
}

ChannelChoi load_channel(const std::filesystem::path& path) {
  return channel_from_json(read_json_file(path));
}

nlohmann::json to_json(const VerificationReport& report) {
  return nlohmann::json{{"hp", check_to_json(report.hp)},
                        {"tp", check_to_json(report.tp)},
                        {"cp", check_to_json(report.cp)},
                        {"pptq", check_to_json(report.pptq)},
                        {"maps_rho_to_sigma", check_to_json(report.maps_rho_to_sigma)},
                        {"all_pass", report.all_pass()}};
}

nlohmann::json to_json(const SynthesisCertificate& cert) {
  auto values = [](const SpectralDecomposition& s) {
    return std::vector<double>(s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size());
  };
  return nlohmann::json{{"branch", std::string(to_string(cert.branch))},
                        {"en_rho", cert.en_rho},
                        {"en_sigma", cert.en_sigma},
                        {"spectrum_rho_pt", values(cert.spectrum_rho_pt)},
                        {"spectrum_sigma_pt", values(cert.spectrum_sigma_pt)},
                        {"tr_r_plus", cert.tr_r_plus},
                        {"tr_r_minus", cert.tr_r_minus},
                        {"tr_s_plus_tilde", cert.tr_s_plus_tilde},
                        {"tr_s_minus", cert.tr_s_minus},
                        {"chosen_k", cert.chosen_k},
                        {"lambda_min", cert.lambda_min}};
}

nlohmann::json to_json(const MonotoneReport& report) {
  return nlohmann::json{{"trials", report.trials},
                        {"violations", report.violations},
                        {"max_increase", report.max_increase},
                        {"tolerance", report.tolerance},
                        {"pass", report.pass()}};
}

}  // namespace pptq
