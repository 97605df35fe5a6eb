#pragma once

#include <string>
#include <vector>

#include "qforge/circuit.hpp"
#include "qforge/statevector.hpp"

namespace qforge {

enum class SubroutineKind {
  FullAdder,
  Diffusion,
  WState,
  GHZ,
  Dicke,
  QFT,
  QPE,
  Cluster1D,
};

struct SubroutineSpec {
  SubroutineKind kind = SubroutineKind::GHZ;
  int n = 1;            // qubits (counting qubits for QPE)
  int k = 0;            // Dicke Hamming weight
  double theta = 0.0;   // QPE target eigenphase, in turns (phase = 2*pi*theta)
};

/// Named test inputs spanning the Z, X, and Y bases as uniform products.
struct GeneratedCase {
  std::string name;
  StateVector input;
  StateVector expected;
};

/// Reference circuit for the request. Measurement-free. Diffusion above
/// three qubits appends ancilla wires for the multi-controlled Z.
Circuit build_subroutine(const SubroutineSpec& spec);

/// Uniform superposition over indices k with (k - shift) mod period == 0.
StateVector make_periodic_state(int num_qubits, int period, int shift);

/// Six cases ("test 0", "test 1", "test +", "test -", "test i",
/// "test -i"); expected outputs come from running the reference circuit.
std::vector<GeneratedCase> generate_test_cases(const SubroutineSpec& spec);

/// CLI helper: "full-adder", "diffusion", "w", "ghz", "dicke", "qft",
/// "qpe", "cluster1d" plus parameters.
SubroutineSpec parse_subroutine_name(const std::string& name, int n, int k,
                                     double theta);

}  // namespace qforge
