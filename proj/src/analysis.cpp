#include "qforge/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>

namespace qforge {

namespace {

Circuit strip_break_barriers(const Circuit& circuit) {
  Circuit out(circuit.qregs(), circuit.cregs());
  for (const auto& op : circuit.ops()) {
    if (op.kind != GateKind::BreakBarrier) out.add(op);
  }
  return out;
}

bool is_ap_kind(GateKind k) {
  return k == GateKind::X || k == GateKind::CX || k == GateKind::CCX ||
         k == GateKind::Swap || k == GateKind::CSwap;
}

bool is_pm_kind(GateKind k) {
  return k == GateKind::Z || k == GateKind::S || k == GateKind::Sdg ||
         k == GateKind::T || k == GateKind::Tdg || k == GateKind::RZ ||
         k == GateKind::P || k == GateKind::CZ || k == GateKind::CP;
}

}  // namespace

std::string_view verdict_name(BlockVerdict v) {
  switch (v) {
    case BlockVerdict::AP: return "AP";
    case BlockVerdict::PM: return "PM";
    case BlockVerdict::AR: return "AR";
  }
  return "AR";
}

SliceSet vslice(const Circuit& circuit, SliceMode mode) {
  SliceSet set;
  set.mode = mode;

  std::vector<std::vector<GateOp>> segments(1);
  for (std::size_t i = 0; i < circuit.ops().size(); ++i) {
    const auto& op = circuit.ops()[i];
    if (op.kind == GateKind::BreakBarrier) {
      set.cut_positions.push_back(i);
      segments.emplace_back();
    } else {
      segments.back().push_back(op);
    }
  }

  auto make_slice = [&](const std::vector<GateOp>& ops) {
    Circuit slice(circuit.qregs(), circuit.cregs());
    for (const auto& op : ops) slice.add(op);
    return slice;
  };

  if (mode == SliceMode::Standalone) {
    for (const auto& seg : segments) set.slices.push_back(make_slice(seg));
  } else {
    std::vector<GateOp> prefix;
    for (const auto& seg : segments) {
      prefix.insert(prefix.end(), seg.begin(), seg.end());
      set.slices.push_back(make_slice(prefix));
    }
  }
  return set;
}

WireReduction hslice(const Circuit& circuit) {
  std::set<int> used;
  for (const auto& op : circuit.ops()) {
    for (int q : op.qubits) used.insert(q);
  }

  WireReduction red{{}, {}, Circuit(1)};
  for (int q = 0; q < circuit.num_qubits(); ++q) {
    if (used.count(q)) {
      red.kept_qubits.push_back(q);
    } else {
      red.removed_qubits.push_back(q);
    }
  }
  if (red.removed_qubits.empty()) {
    red.reduced = circuit;
    return red;
  }
  // At least one wire must survive; an all-idle circuit keeps qubit 0.
  if (red.kept_qubits.empty()) {
    red.kept_qubits.push_back(0);
    red.removed_qubits.erase(red.removed_qubits.begin());
  }

  std::vector<int> remap(circuit.num_qubits(), -1);
  for (std::size_t i = 0; i < red.kept_qubits.size(); ++i)
    remap[red.kept_qubits[i]] = static_cast<int>(i);

  Circuit reduced(static_cast<int>(red.kept_qubits.size()), circuit.num_clbits());
  for (const auto& op : circuit.ops()) {
    GateOp mapped = op;
    for (auto& q : mapped.qubits) q = remap[q];
    reduced.add(std::move(mapped));
  }
  red.reduced = std::move(reduced);
  return red;
}

bool verify_recomposition(const SliceSet& set, const Circuit& original,
                          double tolerance) {
  if (set.mode != SliceMode::Standalone)
    throw CircuitError("verify_recomposition needs a standalone slice set");
  if (set.slices.empty()) return true;
  Circuit composed = set.slices.front();
  for (std::size_t i = 1; i < set.slices.size(); ++i)
    composed = composed.compose(set.slices[i]);
  Circuit reference = strip_break_barriers(original);
  StateVector zero(original.num_qubits());
  return fidelity(run(composed, zero), run(reference, zero)) >= 1.0 - tolerance;
}

BlockCategory categorize(const Circuit& circuit, int max_unitary_qubits) {
  if (circuit.has_measure())
    throw CircuitError("categorize: circuit contains measure");

  bool any_gate = false;
  bool all_ap = true;
  bool all_pm = true;
  for (const auto& op : circuit.ops()) {
    if (op.kind == GateKind::Barrier || op.kind == GateKind::BreakBarrier) continue;
    any_gate = true;
    if (!is_ap_kind(op.kind)) all_ap = false;
    if (!is_pm_kind(op.kind)) all_pm = false;
  }

  BlockCategory cat;
  if (!any_gate || all_ap) {
    cat.verdict = BlockVerdict::AP;
    cat.method = "gate-set";
    cat.notes = any_gate ? "permutation gate set" : "empty circuit";
    return cat;
  }
  if (all_pm) {
    cat.verdict = BlockVerdict::PM;
    cat.method = "gate-set";
    cat.notes = "phase gate set";
    return cat;
  }

  if (circuit.num_qubits() > max_unitary_qubits) {
    cat.verdict = BlockVerdict::AR;
    cat.method = "gate-set";
    cat.notes = "mixed gate set, unverified";
    return cat;
  }

  const Unitary u = unitary_of(circuit, max_unitary_qubits);
  const std::uint64_t dim = u.dim();
  const double tol = 1e-9;

  bool diagonal = true;
  for (std::uint64_t r = 0; r < dim && diagonal; ++r) {
    for (std::uint64_t c = 0; c < dim; ++c) {
      if (r != c && std::abs(u.at(r, c)) > tol) {
        diagonal = false;
        break;
      }
    }
  }
  cat.method = "unitary";
  if (diagonal) {
    cat.verdict = BlockVerdict::PM;
    cat.notes = "diagonal unitary";
    return cat;
  }

  // Monomial test: exactly one unit-modulus entry per row and column.
  bool monomial = true;
  std::vector<int> col_hits(dim, 0);
  cdouble first_phase{0, 0};
  bool common_phase = true;
  for (std::uint64_t r = 0; r < dim && monomial; ++r) {
    int hits = 0;
    for (std::uint64_t c = 0; c < dim; ++c) {
      double mag = std::abs(u.at(r, c));
      if (mag > tol) {
        if (std::abs(mag - 1.0) > tol) {
          monomial = false;
          break;
        }
        ++hits;
        ++col_hits[c];
        cdouble phase = u.at(r, c);
        if (std::abs(first_phase) == 0.0) {
          first_phase = phase;
        } else if (std::abs(phase - first_phase) > tol) {
          common_phase = false;
        }
      }
    }
    if (hits != 1) monomial = false;
  }
  if (monomial) {
    for (std::uint64_t c = 0; c < dim; ++c) {
      if (col_hits[c] != 1) {
        monomial = false;
        break;
      }
    }
  }

  if (monomial && common_phase) {
    cat.verdict = BlockVerdict::AP;
    cat.notes = "permutation up to global phase";
    return cat;
  }
  if (monomial) {
    cat.verdict = BlockVerdict::AR;
    cat.monomial_flag = true;
    cat.notes = "monomial unitary (permutation with nontrivial phases)";
    return cat;
  }
  cat.verdict = BlockVerdict::AR;
  cat.notes = "amplitude redistribution";
  return cat;
}

}  // namespace qforge
