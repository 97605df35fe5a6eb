#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qforge {

enum class GateKind {
  X, Y, Z, H, S, Sdg, T, Tdg,
  RX, RY, RZ, P,
  CX, CZ, CP, Swap,
  CCX, CSwap,
  Measure, Barrier, BreakBarrier,
};

/// Number of qubit operands for a kind. Barrier and BreakBarrier are
/// variadic (Barrier takes any subset, BreakBarrier always spans the
/// whole register) and report 0 here.
int qubit_arity(GateKind kind);

/// Number of angle parameters (0 or 1).
int angle_arity(GateKind kind);

std::string_view kind_name(GateKind kind);

/// Lookup by lowercase QASM mnemonic; nullopt for unknown names.
std::optional<GateKind> kind_from_name(std::string_view name);

struct SourceSpan {
  std::string origin;  // file name or builder label
  int line = 0;
  int column = 0;
};

struct QubitRef {
  std::string reg;
  int index = 0;  // index within the register
  int flat = 0;   // global qubit index
};

struct GateOp {
  GateKind kind;
  std::vector<double> angles;
  std::vector<int> qubits;  // flat indices; empty for Barrier/BreakBarrier = all
  std::vector<int> clbits;  // Measure only
  SourceSpan span;
};

struct RegisterDecl {
  std::string name;
  int size = 0;
};

using GateStats = std::map<GateKind, std::size_t>;

class CircuitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Ordered gate list over a fixed set of qubit/clbit registers. Instances
/// are treated as immutable once built; all mutating methods return or
/// act during construction only.
class Circuit {
public:
  explicit Circuit(int num_qubits, int num_clbits = 0);
  Circuit(std::vector<RegisterDecl> qregs, std::vector<RegisterDecl> cregs);

  int num_qubits() const { return num_qubits_; }
  int num_clbits() const { return num_clbits_; }
  const std::vector<GateOp>& ops() const { return ops_; }
  const std::vector<RegisterDecl>& qregs() const { return qregs_; }
  const std::vector<RegisterDecl>& cregs() const { return cregs_; }

  /// Resolve a flat qubit index to its declaring register.
  QubitRef qubit(int flat) const;

  /// Append a validated op. Throws CircuitError on arity mismatch,
  /// out-of-range indices, or duplicate qubits within one gate.
  void add(GateOp op);

  // Builder shorthands. `label` becomes the SourceSpan origin.
  void gate(GateKind kind, std::vector<int> qubits,
            std::vector<double> angles = {},
            const std::string& label = "builder");
  void x(int q, const std::string& label = "builder") { gate(GateKind::X, {q}, {}, label); }
  void y(int q, const std::string& label = "builder") { gate(GateKind::Y, {q}, {}, label); }
  void z(int q, const std::string& label = "builder") { gate(GateKind::Z, {q}, {}, label); }
  void h(int q, const std::string& label = "builder") { gate(GateKind::H, {q}, {}, label); }
  void s(int q, const std::string& label = "builder") { gate(GateKind::S, {q}, {}, label); }
  void sdg(int q, const std::string& label = "builder") { gate(GateKind::Sdg, {q}, {}, label); }
  void t(int q, const std::string& label = "builder") { gate(GateKind::T, {q}, {}, label); }
  void tdg(int q, const std::string& label = "builder") { gate(GateKind::Tdg, {q}, {}, label); }
  void rx(double theta, int q, const std::string& label = "builder") { gate(GateKind::RX, {q}, {theta}, label); }
  void ry(double theta, int q, const std::string& label = "builder") { gate(GateKind::RY, {q}, {theta}, label); }
  void rz(double theta, int q, const std::string& label = "builder") { gate(GateKind::RZ, {q}, {theta}, label); }
  void p(double theta, int q, const std::string& label = "builder") { gate(GateKind::P, {q}, {theta}, label); }
  void cx(int c, int t, const std::string& label = "builder") { gate(GateKind::CX, {c, t}, {}, label); }
  void cz(int a, int b, const std::string& label = "builder") { gate(GateKind::CZ, {a, b}, {}, label); }
  void cp(double theta, int a, int b, const std::string& label = "builder") { gate(GateKind::CP, {a, b}, {theta}, label); }
  void swap(int a, int b, const std::string& label = "builder") { gate(GateKind::Swap, {a, b}, {}, label); }
  void ccx(int c1, int c2, int t, const std::string& label = "builder") { gate(GateKind::CCX, {c1, c2, t}, {}, label); }
  void cswap(int c, int a, int b, const std::string& label = "builder") { gate(GateKind::CSwap, {c, a, b}, {}, label); }
  void measure(int q, int c, const std::string& label = "builder");
  void barrier(std::vector<int> qubits = {}, const std::string& label = "builder");
  void break_barrier(const std::string& label = "builder");

  /// Ops of `kind` whose qubit set contains every listed qubit
  /// (superset match), in circuit order with their spans.
  std::vector<std::pair<std::size_t, SourceSpan>>
  locate(GateKind kind, const std::vector<int>& qubits = {}) const;

  /// Histogram of op kinds. Measure and Barrier count separately,
  /// BreakBarrier is excluded.
  GateStats count_ops() const;

  /// Ops of this circuit followed by ops of `second`. Qubit counts must
  /// match; clbit count is the max of the two.
  Circuit compose(const Circuit& second) const;

  /// Adjoint circuit: ops reversed, each gate inverted (S<->Sdg,
  /// T<->Tdg, angles negated). Throws if a Measure is present.
  Circuit inverse() const;

  bool has_measure() const;

private:
  int num_qubits_;
  int num_clbits_;
  std::vector<RegisterDecl> qregs_;
  std::vector<RegisterDecl> cregs_;
  std::vector<GateOp> ops_;
};

/// True when the two ops agree on kind, operands and angles (within
/// `angle_tol`); spans are ignored.
bool same_op(const GateOp& a, const GateOp& b, double angle_tol = 1e-12);
bool same_ops(const Circuit& a, const Circuit& b, double angle_tol = 1e-12);

}  // namespace qforge
