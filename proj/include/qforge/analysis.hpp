#pragma once

#include <string>
#include <vector>

#include "qforge/circuit.hpp"
#include "qforge/statevector.hpp"

namespace qforge {

enum class SliceMode { Standalone, Accumulated };

struct SliceSet {
  SliceMode mode = SliceMode::Standalone;
  std::vector<Circuit> slices;
  std::vector<std::size_t> cut_positions;  // op indices of BreakBarriers
};

struct WireReduction {
  std::vector<int> kept_qubits;     // original flat indices, in order
  std::vector<int> removed_qubits;  // idle wires
  Circuit reduced;
};

enum class BlockVerdict { AP, PM, AR };

struct BlockCategory {
  BlockVerdict verdict = BlockVerdict::AR;
  std::string method;  // "gate-set" or "unitary"
  bool monomial_flag = false;
  std::string notes;
};

/// Split at BreakBarriers. Standalone slices are the segments between
/// cuts; accumulated slice i is the concatenation of segments 0..i.
/// BreakBarriers themselves do not appear in any slice.
SliceSet vslice(const Circuit& circuit, SliceMode mode);

/// Remove idle wires (qubits touched by no op) and remap the rest
/// order-preservingly. The reduced circuit gets a single register "q".
WireReduction hslice(const Circuit& circuit);

/// Standalone-mode check: composing the slices reproduces the original
/// circuit's action on |0...0> up to `tolerance` in fidelity.
bool verify_recomposition(const SliceSet& set, const Circuit& original,
                          double tolerance);

/// AP/PM/AR classification. A pure AP-set or PM-set gate list decides
/// directly; mixed or superposition-creating circuits up to
/// `max_unitary_qubits` are resolved by the unitary's structure.
BlockCategory categorize(const Circuit& circuit, int max_unitary_qubits = 10);

std::string_view verdict_name(BlockVerdict v);

}  // namespace qforge
