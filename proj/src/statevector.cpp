#include "qforge/statevector.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"

namespace qforge {

namespace {

constexpr double kPi = std::numbers::pi;

using Mat2 = std::array<cdouble, 4>;  // row-major {m00, m01, m10, m11}

Mat2 single_qubit_matrix(GateKind kind, const std::vector<double>& angles) {
  const cdouble i{0.0, 1.0};
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case GateKind::X: return {0, 1, 1, 0};
    case GateKind::Y: return {0, -i, i, 0};
    case GateKind::Z: return {1, 0, 0, -1};
    case GateKind::H: return {inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2};
    case GateKind::S: return {1, 0, 0, i};
    case GateKind::Sdg: return {1, 0, 0, -i};
    case GateKind::T: return {1, 0, 0, std::exp(i * (kPi / 4))};
    case GateKind::Tdg: return {1, 0, 0, std::exp(-i * (kPi / 4))};
    case GateKind::RX: {
      double h = angles[0] / 2;
      return {std::cos(h), -i * std::sin(h), -i * std::sin(h), std::cos(h)};
    }
    case GateKind::RY: {
      double h = angles[0] / 2;
      return {std::cos(h), -std::sin(h), std::sin(h), std::cos(h)};
    }
    case GateKind::RZ: {
      double h = angles[0] / 2;
      return {std::exp(-i * h), 0, 0, std::exp(i * h)};
    }
    case GateKind::P:
    case GateKind::CP:
      return {1, 0, 0, std::exp(i * angles[0])};
    default:
      throw SimError("not a single-qubit matrix gate");
  }
}

void apply_controlled_single(std::vector<cdouble>& a, int n, const Mat2& m,
                             int target, std::uint64_t cmask) {
  const std::uint64_t dim = std::uint64_t{1} << n;
  const std::uint64_t tmask = std::uint64_t{1} << target;
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    if (idx & tmask) continue;
    if ((idx & cmask) != cmask) continue;
    const std::uint64_t j = idx | tmask;
    const cdouble a0 = a[idx];
    const cdouble a1 = a[j];
    a[idx] = m[0] * a0 + m[1] * a1;
    a[j] = m[2] * a0 + m[3] * a1;
  }
}

void apply_controlled_swap(std::vector<cdouble>& a, int n, int q1, int q2,
                           std::uint64_t cmask) {
  const std::uint64_t dim = std::uint64_t{1} << n;
  const std::uint64_t m1 = std::uint64_t{1} << q1;
  const std::uint64_t m2 = std::uint64_t{1} << q2;
  for (std::uint64_t idx = 0; idx < dim; ++idx) {
    if ((idx & m1) == 0 || (idx & m2) != 0) continue;
    if ((idx & cmask) != cmask) continue;
    std::swap(a[idx], a[idx ^ m1 ^ m2]);
  }
}

void apply_op(std::vector<cdouble>& a, int n, const GateOp& op) {
  switch (op.kind) {
    case GateKind::Barrier:
    case GateKind::BreakBarrier:
      return;
    case GateKind::Measure:
      throw SimError("measure not allowed in run(); use sample()");
    case GateKind::CX:
      apply_controlled_single(a, n, single_qubit_matrix(GateKind::X, {}),
                              op.qubits[1], std::uint64_t{1} << op.qubits[0]);
      return;
    case GateKind::CZ:
      apply_controlled_single(a, n, single_qubit_matrix(GateKind::Z, {}),
                              op.qubits[1], std::uint64_t{1} << op.qubits[0]);
      return;
    case GateKind::CP:
      apply_controlled_single(a, n, single_qubit_matrix(GateKind::CP, op.angles),
                              op.qubits[1], std::uint64_t{1} << op.qubits[0]);
      return;
    case GateKind::CCX:
      apply_controlled_single(a, n, single_qubit_matrix(GateKind::X, {}),
                              op.qubits[2],
                              (std::uint64_t{1} << op.qubits[0]) |
                                  (std::uint64_t{1} << op.qubits[1]));
      return;
    case GateKind::Swap:
      apply_controlled_swap(a, n, op.qubits[0], op.qubits[1], 0);
      return;
    case GateKind::CSwap:
      apply_controlled_swap(a, n, op.qubits[1], op.qubits[2],
                            std::uint64_t{1} << op.qubits[0]);
      return;
    default:
      apply_controlled_single(a, n, single_qubit_matrix(op.kind, op.angles),
                              op.qubits[0], 0);
      return;
  }
}

// Run the op list, skipping Measure when `skip_measure` is set.
std::vector<cdouble> evolve(const Circuit& c, std::vector<cdouble> amps,
                            bool skip_measure) {
  for (const auto& op : c.ops()) {
    if (skip_measure && op.kind == GateKind::Measure) continue;
    apply_op(amps, c.num_qubits(), op);
  }
  return amps;
}

}  // namespace

StateVector::StateVector(int num_qubits)
    : n_(num_qubits), amps_(std::uint64_t{1} << num_qubits, cdouble{0, 0}) {
  if (num_qubits < 1 || num_qubits > 30) throw SimError("bad qubit count");
  amps_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, std::vector<cdouble> amps)
    : n_(num_qubits), amps_(std::move(amps)) {
  if (num_qubits < 1 || num_qubits > 30) throw SimError("bad qubit count");
  if (amps_.size() != (std::uint64_t{1} << num_qubits))
    throw SimError("amplitude vector length is not 2^n");
}

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
  StateVector sv(num_qubits);
  if (index >= sv.dim()) throw SimError("basis index out of range");
  sv.amps_[0] = 0.0;
  sv.amps_[index] = 1.0;
  return sv;
}

StateVector StateVector::from_bits(const std::vector<int>& bits) {
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0 && bits[i] != 1) throw SimError("bit value must be 0 or 1");
    if (bits[i]) index |= std::uint64_t{1} << i;
  }
  return basis(static_cast<int>(bits.size()), index);
}

double StateVector::norm() const {
  double s = 0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalize() {
  double nrm = norm();
  if (nrm <= 0) throw SimError("cannot normalize zero vector");
  for (auto& a : amps_) a /= nrm;
}

StateVector run(const Circuit& circuit, const StateVector& input) {
  if (input.num_qubits() != circuit.num_qubits())
    throw SimError("run: input dimension does not match circuit");
  return StateVector(circuit.num_qubits(),
                     evolve(circuit, input.amps(), /*skip_measure=*/false));
}

StateVector run(const Circuit& circuit, const std::vector<int>& bits) {
  return run(circuit, StateVector::from_bits(bits));
}

ShotCounts sample(const Circuit& circuit, std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw SimError("sample: shots must be >= 1");
  StateVector start(circuit.num_qubits());
  auto amps = evolve(circuit, start.amps(), /*skip_measure=*/true);

  std::vector<int> measured;
  for (const auto& op : circuit.ops()) {
    if (op.kind == GateKind::Measure) measured.push_back(op.qubits[0]);
  }
  std::sort(measured.begin(), measured.end());
  measured.erase(std::unique(measured.begin(), measured.end()), measured.end());
  if (measured.empty()) {
    measured.resize(circuit.num_qubits());
    for (int q = 0; q < circuit.num_qubits(); ++q) measured[q] = q;
  }

  const std::uint64_t dim = amps.size();
  std::vector<double> cumulative(dim);
  double acc = 0;
  for (std::uint64_t i = 0; i < dim; ++i) {
    acc += std::norm(amps[i]);
    cumulative[i] = acc;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, acc);
  std::map<std::uint64_t, std::uint64_t> raw;
  for (std::uint64_t s = 0; s < shots; ++s) {
    double r = unif(rng);
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), r);
    std::uint64_t idx = static_cast<std::uint64_t>(it - cumulative.begin());
    if (idx >= dim) idx = dim - 1;
    std::uint64_t key = 0;
    for (std::size_t b = 0; b < measured.size(); ++b) {
      if (idx & (std::uint64_t{1} << measured[b])) key |= std::uint64_t{1} << b;
    }
    ++raw[key];
  }

  ShotCounts out;
  out.total = shots;
  out.seed = seed;
  for (const auto& [key, count] : raw) {
    std::string bits(measured.size(), '0');
    for (std::size_t b = 0; b < measured.size(); ++b) {
      // qubit 0 rightmost
      if (key & (std::uint64_t{1} << b)) bits[measured.size() - 1 - b] = '1';
    }
    out.counts[bits] = count;
  }
  return out;
}

Unitary unitary_of(const Circuit& circuit, int max_qubits) {
  if (circuit.num_qubits() > max_qubits)
    throw SimError("unitary_of: circuit exceeds the qubit cap");
  if (circuit.has_measure())
    throw SimError("unitary_of: circuit contains measure");
  const int n = circuit.num_qubits();
  const std::uint64_t dim = std::uint64_t{1} << n;
  Unitary u;
  u.num_qubits = n;
  u.data.assign(dim * dim, cdouble{0, 0});
  for (std::uint64_t col = 0; col < dim; ++col) {
    std::vector<cdouble> amps(dim, cdouble{0, 0});
    amps[col] = 1.0;
    amps = evolve(circuit, std::move(amps), false);
    for (std::uint64_t row = 0; row < dim; ++row) u.data[row * dim + col] = amps[row];
  }
  return u;
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits())
    throw SimError("fidelity: dimension mismatch");
  cdouble inner{0, 0};
  for (std::uint64_t i = 0; i < a.dim(); ++i) inner += std::conj(a[i]) * b[i];
  return std::norm(inner);
}

std::vector<QSphereNode> qsphere(const StateVector& state) {
  const int n = state.num_qubits();
  std::vector<QSphereNode> nodes;
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    double p = std::norm(state[i]);
    if (p < 1e-12) continue;
    QSphereNode node;
    node.basis_index = i;
    node.probability = p;
    node.phase = std::arg(state[i]);
    if (node.phase <= -kPi) node.phase = kPi;
    node.hamming_weight = std::popcount(i);
    node.z = 1.0 - 2.0 * node.hamming_weight / n;
    nodes.push_back(node);
  }
  // Even longitude spacing within each latitude ring, ascending index.
  for (int w = 0; w <= n; ++w) {
    std::vector<QSphereNode*> ring;
    for (auto& node : nodes) {
      if (node.hamming_weight == w) ring.push_back(&node);
    }
    for (std::size_t k = 0; k < ring.size(); ++k) {
      ring[k]->longitude = 2.0 * kPi * k / ring.size();
    }
  }
  return nodes;
}

std::string qsphere_json(const std::vector<QSphereNode>& nodes) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& node : nodes) {
    arr.push_back({{"index", node.basis_index},
                   {"probability", node.probability},
                   {"phase", node.phase},
                   {"weight", node.hamming_weight},
                   {"z", node.z},
                   {"longitude", node.longitude}});
  }
  return arr.dump(2);
}

}  // namespace qforge
