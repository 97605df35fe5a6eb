#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qforge/analysis.hpp"
#include "qforge/circuit.hpp"
#include "qforge/statevector.hpp"

namespace qforge {

struct TestCase {
  std::string name;
  std::variant<std::vector<int>, StateVector> input;
  std::variant<std::vector<int>, StateVector> expected;
};

enum class CaseStatus { Pass, Fail, Error };

struct CaseResult {
  std::string name;
  CaseStatus status = CaseStatus::Error;
  std::string input_rendering;
  std::string actual_rendering;
  std::string expected_rendering;
  std::string error;  // Error status only
};

struct TestReport {
  std::vector<CaseResult> cases;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t errors = 0;

  bool all_passed() const { return failed == 0 && errors == 0; }
};

struct EquivalenceMode {
  bool exact = true;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;

  static EquivalenceMode Exact() { return {}; }
  static EquivalenceMode Shots(std::uint64_t n, std::uint64_t seed) {
    return {false, n, seed};
  }
};

struct EquivalenceResult {
  double p_all_zero = 0;
  bool pass = false;
  EquivalenceMode mode;
};

struct SwapTestResult {
  std::uint64_t shots = 0;  // 0 = exact expectation
  std::uint64_t seed = 0;
  double ones_count = 0;               // B
  double s = 0;                        // 1 - 2B/N, squared inner product
  double delta_theta = 0;              // arccos(clamp(2s-1)) in [0, pi]
  double stderr_s = 0;                 // 2*sqrt(P1(1-P1)/N)
};

struct PhaseProbeEstimate {
  int qubit = -1;  // -1 for the all-qubits probe
  double delta_theta = 0;
  double stderr_s = 0;
};

struct PhaseLocalizationReport {
  PhaseProbeEstimate total;            // probe (|0...0> + |1...1>)/sqrt(2)
  std::vector<PhaseProbeEstimate> per_qubit;
  std::uint64_t shots_per_probe = 0;   // 0 = exact
};

struct ShotPlan {
  double p = 0.5;
  double z = 1.96;
  double half_width = 0.01;
  std::uint64_t shots = 1;  // ceil(Z^2 p(1-p) / w^2), min 1
  double sigma = 0;         // sqrt(p(1-p)/N)
};

struct SqptProbeResult {
  std::vector<std::uint64_t> indices;
  std::vector<double> probabilities;   // p-hat per probed index
  std::vector<std::vector<double>> diag_block;  // zeros off-diagonal
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
};

enum class MutationKind {
  ExtraGate,
  MissingGate,
  WrongQubit,
  WrongOrder,
  PhaseShift,
  SkipInitialization,
};

struct Mutation {
  MutationKind kind = MutationKind::ExtraGate;
  std::optional<std::size_t> op_index;  // target (default: end for inserts)
  GateKind gate = GateKind::X;          // ExtraGate
  std::vector<int> qubits;              // ExtraGate / WrongQubit / PhaseShift
  double angle = 0;                     // ExtraGate / PhaseShift
  std::uint64_t seed = 0;               // randomized choices (WrongQubit)
};

/// Classical-bit tester for amplitude-permutation blocks: prepare each
/// basis input, run once exactly, and compare the resulting basis state
/// bit-for-bit. A non-basis output yields an Error status for that case.
TestReport run_bit_tests(const Circuit& circuit, const std::vector<TestCase>& cases);

/// Statevector tester: PASS iff fidelity(actual, expected) >= 1 - epsilon.
TestReport run_state_tests(const Circuit& circuit, const std::vector<TestCase>& cases,
                           double epsilon = 1e-4);

/// Probability that tv -> dut -> inverse(eo) returns |0...0>.
EquivalenceResult equivalence_test(const Circuit& dut, const Circuit& tv,
                                   const Circuit& eo, EquivalenceMode mode,
                                   double epsilon = 1e-6);

/// Ancilla-H, per-qubit CSWAP, H, measure-ancilla harness over 2n+1
/// qubits. shots >= 1; see swap_test_exact for the expectation value.
SwapTestResult swap_test(const Circuit& prep_a, const Circuit& prep_b,
                         std::uint64_t shots, std::uint64_t seed);

/// Exact-expectation variant (shots field is 0, stderr 0).
SwapTestResult swap_test_exact(const Circuit& prep_a, const Circuit& prep_b);

/// O(n) swap-test probes: the GHZ-style probe bounds the summed phase
/// error; the per-qubit probes (|0...0>+|e_j>)/sqrt(2) isolate the wire.
/// shots_per_probe = 0 runs the exact expectation. Both circuits must
/// categorize as PM unless `override_category` is set.
PhaseLocalizationReport localize_phase_error(const Circuit& dut, const Circuit& eo,
                                             std::uint64_t shots_per_probe,
                                             std::uint64_t seed,
                                             bool override_category = false);

/// N = max(1, ceil(Z^2 p(1-p) / w^2)) from the binomial sigma.
ShotPlan plan_shots(double p, double z, double half_width);

/// Shot-estimate selected diagonal entries of the output density matrix.
SqptProbeResult probe_diagonal(const Circuit& prep,
                               const std::vector<std::uint64_t>& indices,
                               std::uint64_t shots, std::uint64_t seed);

/// 4^n experimental configurations for full process tomography.
std::uint64_t qpt_config_count(int n);

/// Apply one mutation; mutated/inserted ops carry the provenance label
/// "injected". WrongOrder on identical adjacent ops is rejected.
Circuit inject_bug(const Circuit& circuit, const Mutation& mutation);

// Renderings used by both the report formats and the CLI.
std::string render_bits(const std::vector<int>& bits);
/// Report-style amplitude sum, e.g. "0.71|011> + -0.71|101>".
std::string render_state(const StateVector& state, double amp_threshold = 0.005);
std::string render_report_text(const TestReport& report);
std::string render_report_json(const TestReport& report);

/// Test-vector JSON: [{"name", "input", "expected_output"}], bit lists
/// as 0/1 integers, amplitudes as [re, im] pairs.
std::vector<TestCase> load_test_cases_json(const std::string& text);
std::string save_test_cases_json(const std::vector<TestCase>& cases);

}  // namespace qforge
