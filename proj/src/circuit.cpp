#include "qforge/circuit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>

namespace qforge {

namespace {

struct KindInfo {
  GateKind kind;
  std::string_view name;
  int qubits;
  int angles;
};

constexpr std::array<KindInfo, 21> kKinds{{
    {GateKind::X, "x", 1, 0},
    {GateKind::Y, "y", 1, 0},
    {GateKind::Z, "z", 1, 0},
    {GateKind::H, "h", 1, 0},
    {GateKind::S, "s", 1, 0},
    {GateKind::Sdg, "sdg", 1, 0},
    {GateKind::T, "t", 1, 0},
    {GateKind::Tdg, "tdg", 1, 0},
    {GateKind::RX, "rx", 1, 1},
    {GateKind::RY, "ry", 1, 1},
    {GateKind::RZ, "rz", 1, 1},
    {GateKind::P, "p", 1, 1},
    {GateKind::CX, "cx", 2, 0},
    {GateKind::CZ, "cz", 2, 0},
    {GateKind::CP, "cp", 2, 1},
    {GateKind::Swap, "swap", 2, 0},
    {GateKind::CCX, "ccx", 3, 0},
    {GateKind::CSwap, "cswap", 3, 0},
    {GateKind::Measure, "measure", 1, 0},
    {GateKind::Barrier, "barrier", 0, 0},
    {GateKind::BreakBarrier, "breakbarrier", 0, 0},
}};

const KindInfo& info(GateKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k;
  }
  throw CircuitError("unknown gate kind");
}

}  // namespace

int qubit_arity(GateKind kind) { return info(kind).qubits; }
int angle_arity(GateKind kind) { return info(kind).angles; }
std::string_view kind_name(GateKind kind) { return info(kind).name; }

std::optional<GateKind> kind_from_name(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

Circuit::Circuit(int num_qubits, int num_clbits)
    : num_qubits_(num_qubits), num_clbits_(num_clbits) {
  if (num_qubits < 1) throw CircuitError("circuit needs at least one qubit");
  if (num_clbits < 0) throw CircuitError("negative clbit count");
  qregs_.push_back({"q", num_qubits});
  if (num_clbits > 0) cregs_.push_back({"c", num_clbits});
}

Circuit::Circuit(std::vector<RegisterDecl> qregs, std::vector<RegisterDecl> cregs)
    : qregs_(std::move(qregs)), cregs_(std::move(cregs)) {
  num_qubits_ = 0;
  for (const auto& r : qregs_) num_qubits_ += r.size;
  num_clbits_ = 0;
  for (const auto& r : cregs_) num_clbits_ += r.size;
  if (num_qubits_ < 1) throw CircuitError("circuit needs at least one qubit");
}

QubitRef Circuit::qubit(int flat) const {
  if (flat < 0 || flat >= num_qubits_) throw CircuitError("qubit index out of range");
  int base = 0;
  for (const auto& r : qregs_) {
    if (flat < base + r.size) return {r.name, flat - base, flat};
    base += r.size;
  }
  throw CircuitError("qubit index out of range");
}

void Circuit::add(GateOp op) {
  const auto& ki = info(op.kind);
  const bool variadic =
      op.kind == GateKind::Barrier || op.kind == GateKind::BreakBarrier;
  if (!variadic && static_cast<int>(op.qubits.size()) != ki.qubits) {
    std::ostringstream os;
    os << "gate " << ki.name << " expects " << ki.qubits << " qubit(s), got "
       << op.qubits.size();
    throw CircuitError(os.str());
  }
  if (static_cast<int>(op.angles.size()) != ki.angles) {
    std::ostringstream os;
    os << "gate " << ki.name << " expects " << ki.angles << " angle(s), got "
       << op.angles.size();
    throw CircuitError(os.str());
  }
  if (op.kind == GateKind::BreakBarrier && !op.qubits.empty())
    throw CircuitError("breakbarrier spans all qubits implicitly");
  std::set<int> seen;
  for (int q : op.qubits) {
    if (q < 0 || q >= num_qubits_) throw CircuitError("qubit index out of range");
    if (!seen.insert(q).second) throw CircuitError("duplicate qubit in one gate");
  }
  if (op.kind == GateKind::Measure) {
    if (op.clbits.size() != 1) throw CircuitError("measure needs one clbit target");
    if (op.clbits[0] < 0 || op.clbits[0] >= num_clbits_)
      throw CircuitError("clbit index out of range");
  } else if (!op.clbits.empty()) {
    throw CircuitError("only measure carries clbits");
  }
  ops_.push_back(std::move(op));
}

void Circuit::gate(GateKind kind, std::vector<int> qubits,
                   std::vector<double> angles, const std::string& label) {
  add(GateOp{kind, std::move(angles), std::move(qubits), {}, SourceSpan{label, 0, 0}});
}

void Circuit::measure(int q, int c, const std::string& label) {
  add(GateOp{GateKind::Measure, {}, {q}, {c}, SourceSpan{label, 0, 0}});
}

void Circuit::barrier(std::vector<int> qubits, const std::string& label) {
  add(GateOp{GateKind::Barrier, {}, std::move(qubits), {}, SourceSpan{label, 0, 0}});
}

void Circuit::break_barrier(const std::string& label) {
  add(GateOp{GateKind::BreakBarrier, {}, {}, {}, SourceSpan{label, 0, 0}});
}

std::vector<std::pair<std::size_t, SourceSpan>>
Circuit::locate(GateKind kind, const std::vector<int>& qubits) const {
  std::vector<std::pair<std::size_t, SourceSpan>> hits;
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const auto& op = ops_[i];
    if (op.kind != kind) continue;
    bool match = true;
    for (int q : qubits) {
      if (std::find(op.qubits.begin(), op.qubits.end(), q) == op.qubits.end()) {
        match = false;
        break;
      }
    }
    if (match) hits.emplace_back(i, op.span);
  }
  return hits;
}

GateStats Circuit::count_ops() const {
  GateStats stats;
  for (const auto& op : ops_) {
    if (op.kind == GateKind::BreakBarrier) continue;
    ++stats[op.kind];
  }
  return stats;
}

Circuit Circuit::compose(const Circuit& second) const {
  if (second.num_qubits_ != num_qubits_)
    throw CircuitError("compose: qubit-count mismatch");
  Circuit out(qregs_, num_clbits_ >= second.num_clbits_ ? cregs_ : second.cregs_);
  out.ops_ = ops_;
  for (const auto& op : second.ops_) out.ops_.push_back(op);
  return out;
}

bool Circuit::has_measure() const {
  return std::any_of(ops_.begin(), ops_.end(), [](const GateOp& op) {
    return op.kind == GateKind::Measure;
  });
}

Circuit Circuit::inverse() const {
  if (has_measure()) throw CircuitError("inverse: circuit contains measure");
  Circuit out(qregs_, cregs_);
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    GateOp op = *it;
    switch (op.kind) {
      case GateKind::S: op.kind = GateKind::Sdg; break;
      case GateKind::Sdg: op.kind = GateKind::S; break;
      case GateKind::T: op.kind = GateKind::Tdg; break;
      case GateKind::Tdg: op.kind = GateKind::T; break;
      default: break;
    }
    for (auto& a : op.angles) a = -a;
    out.ops_.push_back(std::move(op));
  }
  return out;
}

bool same_op(const GateOp& a, const GateOp& b, double angle_tol) {
  if (a.kind != b.kind || a.qubits != b.qubits || a.clbits != b.clbits) return false;
  if (a.angles.size() != b.angles.size()) return false;
  for (std::size_t i = 0; i < a.angles.size(); ++i) {
    if (std::abs(a.angles[i] - b.angles[i]) > angle_tol) return false;
  }
  return true;
}

bool same_ops(const Circuit& a, const Circuit& b, double angle_tol) {
  if (a.num_qubits() != b.num_qubits()) return false;
  if (a.ops().size() != b.ops().size()) return false;
  for (std::size_t i = 0; i < a.ops().size(); ++i) {
    if (!same_op(a.ops()[i], b.ops()[i], angle_tol)) return false;
  }
  return true;
}

}  // namespace qforge
