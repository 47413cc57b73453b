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

#include "pptq/states.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "pptq/errors.hpp"

namespace pptq {

namespace {

double min_eigenvalue_of(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NonConvergence("eigensolver failed");
  return solver.eigenvalues().minCoeff();
}

Matrix ginibre(std::size_t side, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(side);
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

Matrix haar_unitary(std::size_t side, std::mt19937_64& rng) {
  const Matrix g = ginibre(side, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

QuasiState from_spectrum(std::size_t d_a, std::size_t d_b, const std::vector<double>& spectrum,
                         std::mt19937_64& rng) {
  const Matrix u = haar_unitary(d_a * d_b, rng);
  RealVector values(static_cast<Eigen::Index>(spectrum.size()));
  for (std::size_t i = 0; i < spectrum.size(); ++i) values[static_cast<Eigen::Index>(i)] = spectrum[i];
  Matrix m = u * values.cast<Complex>().asDiagonal() * u.adjoint();
  // Remove the O(eps) trace drift of the conjugation.
  m /= m.trace().real();
  return QuasiState(BipartiteOperator(d_a, d_b, (m + m.adjoint()) * 0.5));
}

void check_dims(std::size_t d_a, std::size_t d_b) {
  if (d_a == 0 || d_b == 0) throw InvariantViolation("local dimensions must be positive");
}

}  // namespace

std::string_view to_string(Classification c) {
  return c == Classification::QuantumState ? "QuantumState" : "ProperQuasiState";
}

std::string_view to_string(PptFlag f) {
  switch (f) {
    case PptFlag::PPT: return "PPT";
    case PptFlag::NPT: return "NPT";
    case PptFlag::Unknown: break;
  }
  return "Unknown";
}

QuasiState::QuasiState(BipartiteOperator op) : op_(std::move(op)) {
  const Complex tr = op_.trace();
  if (!(std::abs(tr.real() - 1.0) <= kTraceTolerance)) {
    throw InvariantViolation("trace must be 1 (got " + std::to_string(tr.real()) + ")");
  }
  min_eigenvalue_ = min_eigenvalue_of(op_.matrix());
  min_pt_eigenvalue_ = min_eigenvalue_of(partial_transpose(op_.matrix(), op_.d_a(), op_.d_b()));
  classification_ = min_eigenvalue_ >= -kSignTolerance ? Classification::QuantumState
                                                       : Classification::ProperQuasiState;
  ppt_flag_ = min_pt_eigenvalue_ >= -kSignTolerance ? PptFlag::PPT : PptFlag::NPT;
}

QuasiState max_entangled(std::size_t d) {
  if (d == 0) throw InvariantViolation("max_entangled requires d >= 1");
  const auto side = static_cast<Eigen::Index>(d * d);
  Matrix m = Matrix::Zero(side, side);
  const double w = 1.0 / static_cast<double>(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      m(static_cast<Eigen::Index>(i * d + i), static_cast<Eigen::Index>(j * d + j)) = w;
  return QuasiState(BipartiteOperator(d, d, std::move(m)));
}

QuasiState maximally_mixed(std::size_t d_a, std::size_t d_b) {
  check_dims(d_a, d_b);
  const auto side = static_cast<Eigen::Index>(d_a * d_b);
  Matrix m = Matrix::Identity(side, side) / static_cast<double>(side);
  return QuasiState(BipartiteOperator(d_a, d_b, std::move(m)));
}

Matrix random_unitary(std::size_t side, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return haar_unitary(side, rng);
}

Matrix random_hermitian(std::size_t side, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Matrix g = ginibre(side, rng);
  return (g + g.adjoint()) * 0.5;
}

QuasiState random_state(std::size_t d_a, std::size_t d_b, std::uint64_t seed, std::size_t rank) {
  check_dims(d_a, d_b);
  const std::size_t side = d_a * d_b;
  if (rank == 0 || rank > side) rank = side;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> spectrum(side, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rank; ++i) {
    // Shift away from zero so the support has exactly `rank` dimensions.
    spectrum[i] = 0.05 + uniform(rng);
    total += spectrum[i];
  }
  for (double& v : spectrum) v /= total;
  return from_spectrum(d_a, d_b, spectrum, rng);
}

QuasiState random_pure_state(std::size_t d_a, std::size_t d_b, std::uint64_t seed) {
  check_dims(d_a, d_b);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXcd psi(static_cast<Eigen::Index>(d_a * d_b));
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    psi[i] = Complex(re, im);
  }
  psi.normalize();
  Matrix m = psi * psi.adjoint();
  m /= m.trace().real();
  return QuasiState(BipartiteOperator(d_a, d_b, (m + m.adjoint()) * 0.5));
}

QuasiState random_quasi_state(std::size_t d_a, std::size_t d_b, double neg_weight,
                              std::uint64_t seed) {
  check_dims(d_a, d_b);
  if (!(neg_weight >= 0.0)) throw InvariantViolation("neg_weight must be nonnegative");
  const std::size_t side = d_a * d_b;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  std::size_t negatives = 0;
  if (neg_weight > 0.0 && side >= 2) {
    std::uniform_int_distribution<std::size_t> count(1, side - 1);
    negatives = count(rng);
  }
  const std::size_t positives = side - negatives;
  std::vector<double> pos(positives), neg(negatives);
  for (double& v : pos) v = 0.05 + uniform(rng);
  for (double& v : neg) v = 0.05 + uniform(rng);
  const double pos_total = std::accumulate(pos.begin(), pos.end(), 0.0);
  const double neg_total = std::accumulate(neg.begin(), neg.end(), 0.0);

  std::vector<double> spectrum;
  spectrum.reserve(side);
  const double pos_mass = 1.0 + (negatives > 0 ? neg_weight : 0.0);
  for (double v : pos) spectrum.push_back(v / pos_total * pos_mass);
  for (double v : neg) spectrum.push_back(-v / neg_total * neg_weight);
  return from_spectrum(d_a, d_b, spectrum, rng);
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(nlohmann::json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("matrix must be an array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ParseError("matrix must be square: row " + std::to_string(i) + " has wrong length");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto& entry = row[static_cast<std::size_t>(k)];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
          !entry[1].is_number()) {
        throw ParseError("matrix entries must be [re, im] number pairs");
      }
      m(i, k) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return m;
}

nlohmann::json state_to_json(const QuasiState& s) {
  nlohmann::json j;
  j["d_a"] = s.d_a();
  j["d_b"] = s.d_b();
  j["matrix"] = matrix_to_json(s.matrix());
  return j;
}

QuasiState state_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("state file must hold a JSON object");
  for (const char* key : {"d_a", "d_b", "matrix"}) {
    if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  }
  if (!j["d_a"].is_number_unsigned() || !j["d_b"].is_number_unsigned()) {
    throw ParseError("d_a and d_b must be positive integers");
  }
  const auto d_a = j["d_a"].get<std::size_t>();
  const auto d_b = j["d_b"].get<std::size_t>();
  if (d_a == 0 || d_b == 0) throw ParseError("d_a and d_b must be positive integers");
  Matrix m = matrix_from_json(j["matrix"]);
  if (static_cast<std::size_t>(m.rows()) != d_a * d_b) {
    throw ParseError("matrix side " + std::to_string(m.rows()) + " does not equal d_a*d_b = " +
                     std::to_string(d_a * d_b));
  }
  return QuasiState(BipartiteOperator(d_a, d_b, std::move(m)));
}

std::string dump_canonical(const nlohmann::json& j) { return j.dump() + "\n"; }

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

void save(const QuasiState& s, const std::filesystem::path& path) {
  write_text_file(path, dump_canonical(state_to_json(s)));
}

QuasiState load(const std::filesystem::path& path) { return state_from_json(read_json_file(path)); }

}  // namespace pptq
