// Copyright 2026 The jdrsim Authors
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

#include "jdr/decoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "jdr/seed.hpp"

namespace jdr {

namespace {

std::string to_bits(std::uint64_t value, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int k = 0; k < width; ++k)
    if (value & (std::uint64_t{1} << (width - 1 - k))) s[static_cast<std::size_t>(k)] = '1';
  return s;
}

int ceil_log2(int M) {
  int m = 0;
  while ((1 << m) < M) ++m;
  return m;
}

// Row indices of the computational basis whose measured bits equal `outcome`.
std::vector<Eigen::Index> outcome_rows(const Codebook& book, Eigen::Index outcome) {
  std::vector<Eigen::Index> rows;
  const int m = book.measured_bits();
  const Eigen::Index dim = Eigen::Index{1} << book.n;
  for (Eigen::Index r = 0; r < dim; ++r) {
    Eigen::Index o = 0;
    for (int k = 0; k < m; ++k)
      if (static_cast<std::uint64_t>(r) & qubit_mask(book.measured_qubits[static_cast<std::size_t>(k)], book.n))
        o |= Eigen::Index{1} << (m - 1 - k);
    if (o == outcome) rows.push_back(r);
  }
  return rows;
}

void check_states(const std::vector<DensityMatrix>& states, const Codebook& book) {
  book.validate();
  if (static_cast<int>(states.size()) != book.M)
    throw DimensionError("number of states does not match the codebook size");
  const Eigen::Index dim = Eigen::Index{1} << book.n;
  for (const auto& s : states)
    if (s.dim() != dim) throw DimensionError("codeword state dimension does not match 2^n");
}

// 2x2 block P(x, y) = sum_r W[(x, r), (y, r)] over all other qubits r.
Matrix2c reduce_to_qubit(const MatrixXc& w, int q, int n) {
  const std::uint64_t mask = qubit_mask(q, n);
  Matrix2c p = Matrix2c::Zero();
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    if (static_cast<std::uint64_t>(i) & mask) continue;
    const Eigen::Index i1 = i | static_cast<Eigen::Index>(mask);
    p(0, 0) += w(i, i);
    p(0, 1) += w(i, i1);
    p(1, 0) += w(i1, i);
    p(1, 1) += w(i1, i1);
  }
  return p;
}

VectorXd random_angles(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, kTwoPi);
  VectorXd a(count);
  for (int k = 0; k < count; ++k) a[k] = dist(rng);
  return a;
}

}  // namespace

CodebookKind parse_codebook_kind(const std::string& name) {
  if (name == "parity") return CodebookKind::parity;
  if (name == "random") return CodebookKind::random;
  if (name == "simplex") return CodebookKind::simplex;
  throw ParameterError("unknown codebook kind '" + name + "'");
}

std::string to_string(CodebookKind kind) {
  switch (kind) {
    case CodebookKind::parity: return "parity";
    case CodebookKind::random: return "random";
    case CodebookKind::simplex: return "simplex";
  }
  return "unknown";
}

Eigen::Index Codebook::outcome_index(int i) const {
  Eigen::Index o = 0;
  for (char c : output_map.at(static_cast<std::size_t>(i))) o = (o << 1) | (c == '1' ? 1 : 0);
  return o;
}

void Codebook::validate() const {
  if (n < 1 || n > 62) throw ParameterError("codebook: n out of range");
  if (M < 2 || (n < 62 && static_cast<std::uint64_t>(M) > (std::uint64_t{1} << n)))
    throw ParameterError("codebook: need 2 <= M <= 2^n");
  if (static_cast<int>(codewords.size()) != M || static_cast<int>(output_map.size()) != M)
    throw ParameterError("codebook: codeword and output-map sizes must equal M");
  std::set<int> qubits(measured_qubits.begin(), measured_qubits.end());
  if (qubits.size() != measured_qubits.size() || measured_qubits.empty())
    throw ParameterError("codebook: measured qubits must be distinct and non-empty");
  for (int q : measured_qubits)
    if (q < 0 || q >= n) throw ParameterError("codebook: measured qubit out of range");
  std::set<std::string> words, outputs;
  for (int i = 0; i < M; ++i) {
    const auto& w = codewords[static_cast<std::size_t>(i)];
    const auto& o = output_map[static_cast<std::size_t>(i)];
    if (static_cast<int>(w.size()) != n || w.find_first_not_of("01") != std::string::npos)
      throw ParameterError("codebook: codeword '" + w + "' is not an n-bit string");
    if (o.size() != measured_qubits.size() || o.find_first_not_of("01") != std::string::npos)
      throw ParameterError("codebook: output string '" + o + "' has the wrong width");
    if (!words.insert(w).second) throw ParameterError("codebook: duplicate codeword " + w);
    if (!outputs.insert(o).second) throw ParameterError("codebook: output map is not injective");
  }
}

Codebook make_codebook(int n, int M, CodebookKind kind, std::uint64_t seed) {
  if (n < 1 || n > 62) throw ParameterError("make_codebook: n out of range");
  if (M < 2 || static_cast<std::uint64_t>(M) > (std::uint64_t{1} << n))
    throw ParameterError("make_codebook: need 2 <= M <= 2^n");
  Codebook book;
  book.n = n;
  book.M = M;
  const int m = ceil_log2(M);
  if (m > n) throw ParameterError("make_codebook: not enough qubits to measure");
  for (int q = 0; q < m; ++q) book.measured_qubits.push_back(q);
  for (int i = 0; i < M; ++i) book.output_map.push_back(to_bits(static_cast<std::uint64_t>(i), m));

  switch (kind) {
    case CodebookKind::parity: {
      if (static_cast<std::uint64_t>(M) != (std::uint64_t{1} << (n - 1)))
        throw ParameterError("make_codebook: parity code requires M = 2^(n-1)");
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x)
        if (std::popcount(x) % 2 == 0) book.codewords.push_back(to_bits(x, n));
      break;
    }
    case CodebookKind::random: {
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<std::uint64_t> dist(0, (std::uint64_t{1} << n) - 1);
      std::set<std::uint64_t> seen;
      while (static_cast<int>(book.codewords.size()) < M) {
        const std::uint64_t x = dist(rng);
        if (seen.insert(x).second) book.codewords.push_back(to_bits(x, n));
      }
      break;
    }
    case CodebookKind::simplex: {
      if ((1 << m) != M) throw ParameterError("make_codebook: simplex code requires M a power of two");
      if (n < m) throw ParameterError("make_codebook: simplex code requires n >= log2 M");
      std::vector<std::uint64_t> columns;
      for (int j = 0; j < m; ++j) columns.push_back(std::uint64_t{1} << (m - 1 - j));
      for (std::uint64_t v = 1; v < (std::uint64_t{1} << m); ++v)
        if (std::popcount(v) > 1) columns.push_back(v);
      for (int i = 0; i < M; ++i) {
        std::string w(static_cast<std::size_t>(n), '0');
        for (int j = 0; j < n; ++j)
          if (std::popcount(static_cast<std::uint64_t>(i) & columns[static_cast<std::size_t>(j) % columns.size()]) % 2)
            w[static_cast<std::size_t>(j)] = '1';
        book.codewords.push_back(w);
      }
      break;
    }
  }
  book.validate();
  return book;
}

std::vector<DensityMatrix> codeword_states(const Codebook& book, const TransducedPair& pair,
                                           int max_qubits) {
  book.validate();
  std::vector<DensityMatrix> states;
  states.reserve(book.codewords.size());
  for (const auto& w : book.codewords) states.push_back(build_codeword_state(w, pair, max_qubits));
  return states;
}

double cost(const Circuit& circuit, const std::vector<DensityMatrix>& states, const Codebook& book,
            const NoiseModel& noise) {
  check_states(states, book);
  if (circuit.layout.n != book.n) throw DimensionError("circuit and codebook qubit counts differ");
  double total = 0.0;
  for (int i = 0; i < book.M; ++i) {
    MatrixXc rho = states[static_cast<std::size_t>(i)].matrix();
    run_circuit_in_place(rho, circuit, noise);
    total += measurement_distribution(rho, book.measured_qubits, noise.pm)(book.outcome_index(i));
  }
  return total / book.M;
}

double cost(const MatrixXc& unitary, const std::vector<DensityMatrix>& states, const Codebook& book,
            const NoiseModel& noise) {
  check_states(states, book);
  validate(noise);
  if (unitary.rows() != states.front().dim() || unitary.cols() != unitary.rows())
    throw DimensionError("unitary dimension does not match the codeword states");
  double total = 0.0;
  for (int i = 0; i < book.M; ++i) {
    const MatrixXc rho = unitary * states[static_cast<std::size_t>(i)].matrix() * unitary.adjoint();
    total += measurement_distribution(rho, book.measured_qubits, noise.pm)(book.outcome_index(i));
  }
  return total / book.M;
}

double cost_and_gradient(const Circuit& circuit, const std::vector<DensityMatrix>& states,
                         const Codebook& book, VectorXd& gradient) {
  check_states(states, book);
  const auto& layout = circuit.layout;
  if (layout.n != book.n) throw DimensionError("circuit and codebook qubit counts differ");
  if (circuit.angles.size() != layout.parameter_count())
    throw DimensionError("circuit angle vector does not match the layout");
  const int n = layout.n;
  const auto ops = gate_sequence(layout);
  const auto& a = circuit.angles;

  std::vector<Matrix2c> gates(ops.size());
  std::vector<std::array<Matrix2c, 3>> generators(ops.size());
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (ops[k].kind != GateOp::Kind::single) continue;
    const int o = ops[k].param_offset;
    gates[k] = euler_zyz(a[o], a[o + 1], a[o + 2]);
    for (int j = 0; j < 3; ++j)
      generators[k][static_cast<std::size_t>(j)] =
          euler_zyz_derivative(a[o], a[o + 1], a[o + 2], j) * gates[k].adjoint();
  }

  gradient = VectorXd::Zero(layout.parameter_count());
  double total = 0.0;
  const double scale = 2.0 / book.M;
  for (int i = 0; i < book.M; ++i) {
    MatrixXc sigma = states[static_cast<std::size_t>(i)].matrix();
    for (std::size_t k = 0; k < ops.size(); ++k) {
      if (ops[k].kind == GateOp::Kind::single)
        conjugate_1q(sigma, gates[k], ops[k].q0, n);
      else
        conjugate_cnot(sigma, ops[k].q0, ops[k].q1, n);
    }
    const auto rows = outcome_rows(book, book.outcome_index(i));
    MatrixXc observable = MatrixXc::Zero(sigma.rows(), sigma.cols());
    for (auto r : rows) {
      observable(r, r) = 1.0;
      total += sigma(r, r).real();
    }
    // Walk back through the circuit; sigma is the state just after op k and
    // observable the projector pulled back to the same point.
    for (std::size_t k = ops.size(); k-- > 0;) {
      const auto& op = ops[k];
      if (op.kind == GateOp::Kind::single) {
        const Matrix2c p = reduce_to_qubit(sigma * observable, op.q0, n);
        for (int j = 0; j < 3; ++j)
          gradient[op.param_offset + j] +=
              scale * (generators[k][static_cast<std::size_t>(j)] * p).trace().real();
        const Matrix2c inv = gates[k].adjoint();
        conjugate_1q(sigma, inv, op.q0, n);
        conjugate_1q(observable, inv, op.q0, n);
      } else {
        conjugate_cnot(sigma, op.q0, op.q1, n);
        conjugate_cnot(observable, op.q0, op.q1, n);
      }
    }
  }
  return total / book.M;
}

VectorXd cost_gradient(const Circuit& circuit, const std::vector<DensityMatrix>& states,
                       const Codebook& book) {
  VectorXd g;
  cost_and_gradient(circuit, states, book, g);
  return g;
}

namespace {

struct RestartOutcome {
  VectorXd angles;
  MatrixXc unitary;
  double J = -1.0;
  int iterations = 0;
  bool converged = false;
};

RestartOutcome adam_ascent(const std::vector<DensityMatrix>& states, const Codebook& book,
                           const CircuitLayout& layout, VectorXd start, const TrainOptions& opts) {
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  Circuit circuit{layout, std::move(start)};
  const auto count = circuit.angles.size();
  VectorXd m = VectorXd::Zero(count), v = VectorXd::Zero(count), g;
  double lr = opts.learning_rate;
  double reference = -std::numeric_limits<double>::infinity();
  int stale = 0;
  RestartOutcome out;
  for (int it = 1; it <= opts.max_iters; ++it) {
    const double J = cost_and_gradient(circuit, states, book, g);
    out.iterations = it;
    if (J > out.J) {
      out.J = J;
      out.angles = circuit.angles;
    }
    if (J > reference + opts.tol) {
      reference = J;
      stale = 0;
    } else if (++stale >= opts.patience) {
      lr *= 0.5;
      stale = 0;
      reference = out.J;
      if (lr < opts.min_learning_rate) {
        out.converged = true;
        break;
      }
    }
    if (g.norm() < 1e-12) {
      out.converged = true;
      break;
    }
    m = kBeta1 * m + (1.0 - kBeta1) * g;
    v = kBeta2 * v + (1.0 - kBeta2) * g.cwiseProduct(g);
    const double c1 = 1.0 - std::pow(kBeta1, it), c2 = 1.0 - std::pow(kBeta2, it);
    circuit.angles += lr * ((m / c1).array() / ((v / c2).array().sqrt() + kEps)).matrix();
  }
  if (out.angles.size() == 0) out.angles = circuit.angles;
  return out;
}

// Euclidean gradient (2/M) sum_i Pi_i U rho_i, with the projectors applied as
// row selections, and the matching cost.
double unitary_gradient(const MatrixXc& u, const std::vector<DensityMatrix>& states,
                        const std::vector<std::vector<Eigen::Index>>& rows, MatrixXc& grad) {
  grad = MatrixXc::Zero(u.rows(), u.cols());
  const double scale = 2.0 / static_cast<double>(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const MatrixXc block = u(rows[i], Eigen::all) * states[i].matrix();
    grad(rows[i], Eigen::all) = scale * block;
  }
  return 0.5 * (u.adjoint() * grad).trace().real();
}

RestartOutcome polar_ascent(const std::vector<DensityMatrix>& states,
                            const std::vector<std::vector<Eigen::Index>>& rows, MatrixXc u,
                            const TrainOptions& opts) {
  RestartOutcome out;
  MatrixXc grad;
  double J = unitary_gradient(u, states, rows, grad);
  for (int it = 1; it <= opts.max_iters; ++it) {
    out.iterations = it;
    const MatrixXc candidate = polar_unitary(grad + 1e-3 * grad.norm() / std::sqrt(double(u.rows())) * u);
    MatrixXc next_grad;
    const double next = unitary_gradient(candidate, states, rows, next_grad);
    if (next < J - 1e-14) {
      out.converged = true;
      break;
    }
    const bool small = next - J < opts.tol;
    u = candidate;
    grad = std::move(next_grad);
    J = next;
    if (small) {
      out.converged = true;
      break;
    }
  }
  out.J = J;
  out.unitary = std::move(u);
  return out;
}

}  // namespace

TrainResult train(const std::vector<DensityMatrix>& states, const Codebook& book,
                  const CircuitLayout& layout, const TrainOptions& opts) {
  check_states(states, book);
  layout.validate();
  if (layout.n != book.n) throw DimensionError("layout and codebook qubit counts differ");
  if (opts.restarts < 1 || opts.max_iters < 1) throw ParameterError("train: need restarts, iterations >= 1");

  TrainResult result;
  RestartOutcome best;
  for (int r = 0; r < opts.restarts; ++r) {
    VectorXd start = (r == 0 && opts.initial_angles)
                         ? *opts.initial_angles
                         : random_angles(layout.parameter_count(), derive_seed(opts.seed, static_cast<std::uint64_t>(r)));
    if (start.size() != layout.parameter_count())
      throw DimensionError("train: initial angles do not match the layout");
    auto outcome = adam_ascent(states, book, layout, std::move(start), opts);
    result.iterations += outcome.iterations;
    if (outcome.J > best.J) best = std::move(outcome);
  }
  result.restarts_used = opts.restarts;
  result.angles = best.angles;
  result.converged = best.converged;
  result.J = cost(Circuit{layout, best.angles}, states, book);
  result.error = 1.0 - result.J;
  return result;
}

TrainResult optimize_unitary(const std::vector<DensityMatrix>& states, const Codebook& book,
                             const TrainOptions& opts) {
  check_states(states, book);
  if (opts.restarts < 1 || opts.max_iters < 1)
    throw ParameterError("optimize_unitary: need restarts, iterations >= 1");
  std::vector<std::vector<Eigen::Index>> rows;
  for (int i = 0; i < book.M; ++i) rows.push_back(outcome_rows(book, book.outcome_index(i)));
  const Eigen::Index dim = states.front().dim();

  TrainResult result;
  result.is_unitary = true;
  RestartOutcome best;
  for (int r = 0; r < opts.restarts; ++r) {
    MatrixXc start = (r == 0 && opts.initial_unitary)
                         ? *opts.initial_unitary
                         : random_unitary(dim, derive_seed(opts.seed, static_cast<std::uint64_t>(r)));
    if (start.rows() != dim || start.cols() != dim)
      throw DimensionError("optimize_unitary: initial unitary has the wrong size");
    auto outcome = polar_ascent(states, rows, std::move(start), opts);
    result.iterations += outcome.iterations;
    if (outcome.J > best.J) best = std::move(outcome);
  }
  result.restarts_used = opts.restarts;
  result.unitary = best.unitary;
  result.converged = best.converged;
  result.J = cost(best.unitary, states, book);
  result.error = 1.0 - result.J;
  return result;
}

MatrixXc polar_unitary(const MatrixXc& a) {
  Eigen::BDCSVD<MatrixXc> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

MatrixXc random_unitary(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  MatrixXc z(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) z(i, j) = Complex(normal(rng), normal(rng));
  Eigen::HouseholderQR<MatrixXc> qr(z);
  MatrixXc q = qr.householderQ();
  const MatrixXc r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

DecodeResult decode_error(const DecodeSpec& spec) {
  DecodeResult out;
  out.pair = transduce_bpsk(spec.beta, spec.channel, spec.jc);
  const auto states = codeword_states(spec.book, out.pair);
  if (spec.layout) {
    out.trained = train(states, spec.book, *spec.layout, spec.train);
    out.J = cost(Circuit{*spec.layout, out.trained.angles}, states, spec.book, spec.noise);
  } else {
    out.trained = optimize_unitary(states, spec.book, spec.train);
    out.J = cost(out.trained.unitary, states, spec.book, spec.noise);
  }
  out.error = 1.0 - out.J;
  return out;
}

}  // namespace jdr
