#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qforge/circuit.hpp"

namespace qforge {

using cdouble = std::complex<double>;

class SimError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Dense amplitude vector of length 2^n, little-endian: qubit 0 is the
/// least-significant bit of a basis index.
class StateVector {
public:
  explicit StateVector(int num_qubits);
  StateVector(int num_qubits, std::vector<cdouble> amps);

  static StateVector basis(int num_qubits, std::uint64_t index);
  /// |b_{n-1} ... b_1 b_0> from classical bits, bits[i] driving qubit i.
  static StateVector from_bits(const std::vector<int>& bits);

  int num_qubits() const { return n_; }
  std::uint64_t dim() const { return std::uint64_t{1} << n_; }
  const std::vector<cdouble>& amps() const { return amps_; }
  std::vector<cdouble>& amps() { return amps_; }
  cdouble operator[](std::uint64_t i) const { return amps_[i]; }

  double norm() const;
  void normalize();

private:
  int n_;
  std::vector<cdouble> amps_;
};

struct ShotCounts {
  std::map<std::string, std::uint64_t> counts;  // qubit 0 rightmost
  std::uint64_t total = 0;
  std::uint64_t seed = 0;
};

struct QSphereNode {
  std::uint64_t basis_index = 0;
  double probability = 0;
  double phase = 0;       // in (-pi, pi]
  int hamming_weight = 0;
  double z = 0;           // 1 - 2*weight/n
  double longitude = 0;   // [0, 2pi)
};

/// Dense 2^n x 2^n matrix in row-major order.
struct Unitary {
  int num_qubits = 0;
  std::vector<cdouble> data;

  std::uint64_t dim() const { return std::uint64_t{1} << num_qubits; }
  cdouble at(std::uint64_t row, std::uint64_t col) const {
    return data[row * dim() + col];
  }
};

/// Apply the circuit to `input`. Barrier/BreakBarrier are no-ops; a
/// Measure op is an error (sampling lives in `sample`).
StateVector run(const Circuit& circuit, const StateVector& input);
StateVector run(const Circuit& circuit, const std::vector<int>& bits);

/// Sample `shots` measurement outcomes of the pre-measurement state.
/// Measure ops select the measured qubits (all qubits when absent).
/// Deterministic for a fixed seed.
ShotCounts sample(const Circuit& circuit, std::uint64_t shots, std::uint64_t seed);

/// Dense matrix of the circuit, columns obtained by running every basis
/// state. Guarded by `max_qubits` (4096^2 complex doubles at 12).
Unitary unitary_of(const Circuit& circuit, int max_qubits = 12);

/// |<a|b>|^2, invariant under global phase.
double fidelity(const StateVector& a, const StateVector& b);

/// One node per basis state with probability >= 1e-12. Latitude by
/// Hamming weight; equal-weight nodes evenly spaced by ascending index.
std::vector<QSphereNode> qsphere(const StateVector& state);

std::string qsphere_json(const std::vector<QSphereNode>& nodes);

}  // namespace qforge
