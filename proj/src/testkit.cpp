#include "qforge/testkit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace qforge {

namespace {

constexpr double kPi = std::numbers::pi;

double clamp_pm1(double v) { return std::max(-1.0, std::min(1.0, v)); }

StateVector case_input_state(const TestCase& tc, int num_qubits) {
  if (std::holds_alternative<std::vector<int>>(tc.input)) {
    const auto& bits = std::get<std::vector<int>>(tc.input);
    if (static_cast<int>(bits.size()) != num_qubits)
      throw SimError("test case input length does not match circuit");
    return StateVector::from_bits(bits);
  }
  StateVector sv = std::get<StateVector>(tc.input);
  if (sv.num_qubits() != num_qubits)
    throw SimError("test case input dimension does not match circuit");
  // Hand-written vectors often carry 3-decimal rounding; renormalize on load.
  sv.normalize();
  return sv;
}

std::optional<std::uint64_t> as_basis_index(const StateVector& sv, double tol) {
  std::optional<std::uint64_t> hit;
  for (std::uint64_t i = 0; i < sv.dim(); ++i) {
    double p = std::norm(sv[i]);
    if (p > tol) {
      if (hit) return std::nullopt;
      hit = i;
    }
  }
  if (!hit) return std::nullopt;
  if (std::abs(std::norm(sv[*hit]) - 1.0) > 1e-9) return std::nullopt;
  return hit;
}

std::vector<int> index_to_bits(std::uint64_t index, int n) {
  std::vector<int> bits(n);
  for (int q = 0; q < n; ++q) bits[q] = (index >> q) & 1 ? 1 : 0;
  return bits;
}

void tally(TestReport& report, const CaseResult& result) {
  switch (result.status) {
    case CaseStatus::Pass: ++report.passed; break;
    case CaseStatus::Fail: ++report.failed; break;
    case CaseStatus::Error: ++report.errors; break;
  }
}

// Shift prep_b's ops up by `offset` wires inside the harness.
void append_shifted(Circuit& harness, const Circuit& prep, int offset) {
  for (const auto& op : prep.ops()) {
    GateOp shifted = op;
    for (auto& q : shifted.qubits) q += offset;
    harness.add(std::move(shifted));
  }
}

Circuit swap_harness(const Circuit& prep_a, const Circuit& prep_b) {
  if (prep_a.num_qubits() != prep_b.num_qubits())
    throw SimError("swap test: state preparations differ in qubit count");
  if (prep_a.has_measure() || prep_b.has_measure())
    throw SimError("swap test: preparations must be measurement-free");
  const int n = prep_a.num_qubits();
  const int anc = 2 * n;
  Circuit harness(2 * n + 1, 1);
  append_shifted(harness, prep_a, 0);
  append_shifted(harness, prep_b, n);
  harness.h(anc, "swap-test");
  for (int q = 0; q < n; ++q) harness.cswap(anc, q, n + q, "swap-test");
  harness.h(anc, "swap-test");
  return harness;
}

SwapTestResult finish_swap_result(double p1_hat, std::uint64_t shots,
                                  std::uint64_t seed, double ones) {
  SwapTestResult r;
  r.shots = shots;
  r.seed = seed;
  r.ones_count = ones;
  r.s = 1.0 - 2.0 * p1_hat;
  r.delta_theta = std::acos(clamp_pm1(2.0 * r.s - 1.0));
  r.stderr_s =
      shots > 0 ? 2.0 * std::sqrt(p1_hat * (1.0 - p1_hat) / shots) : 0.0;
  return r;
}

Circuit ghz_probe_prep(int n) {
  Circuit c(n);
  c.h(0, "probe");
  for (int q = 0; q + 1 < n; ++q) c.cx(q, q + 1, "probe");
  return c;
}

Circuit single_qubit_probe_prep(int n, int qubit) {
  Circuit c(n);
  c.h(qubit, "probe");
  return c;
}

PhaseProbeEstimate run_probe(const Circuit& dut, const Circuit& eo,
                             const Circuit& probe, int qubit,
                             std::uint64_t shots, std::uint64_t seed) {
  Circuit prep_a = probe.compose(dut);
  Circuit prep_b = probe.compose(eo);
  SwapTestResult r = shots == 0 ? swap_test_exact(prep_a, prep_b)
                                : swap_test(prep_a, prep_b, shots, seed);
  return PhaseProbeEstimate{qubit, r.delta_theta, r.stderr_s};
}

}  // namespace

TestReport run_bit_tests(const Circuit& circuit, const std::vector<TestCase>& cases) {
  TestReport report;
  for (const auto& tc : cases) {
    CaseResult result;
    result.name = tc.name;
    try {
      if (!std::holds_alternative<std::vector<int>>(tc.input) ||
          !std::holds_alternative<std::vector<int>>(tc.expected))
        throw SimError("bit tester needs classical bit lists");
      const auto& in_bits = std::get<std::vector<int>>(tc.input);
      const auto& exp_bits = std::get<std::vector<int>>(tc.expected);
      result.input_rendering = render_bits(in_bits);
      result.expected_rendering = render_bits(exp_bits);
      if (static_cast<int>(exp_bits.size()) != circuit.num_qubits())
        throw SimError("expected bit list length does not match circuit");

      StateVector out = run(circuit, case_input_state(tc, circuit.num_qubits()));
      auto idx = as_basis_index(out, 1e-9);
      if (!idx) {
        result.status = CaseStatus::Error;
        result.error = "block is not amplitude-permutation on this input";
        result.actual_rendering = render_state(out);
      } else {
        auto actual = index_to_bits(*idx, circuit.num_qubits());
        result.actual_rendering = render_bits(actual);
        result.status = actual == exp_bits ? CaseStatus::Pass : CaseStatus::Fail;
      }
    } catch (const std::exception& e) {
      result.status = CaseStatus::Error;
      result.error = e.what();
    }
    tally(report, result);
    report.cases.push_back(std::move(result));
  }
  return report;
}

TestReport run_state_tests(const Circuit& circuit, const std::vector<TestCase>& cases,
                           double epsilon) {
  TestReport report;
  for (const auto& tc : cases) {
    CaseResult result;
    result.name = tc.name;
    try {
      StateVector input = case_input_state(tc, circuit.num_qubits());
      if (!std::holds_alternative<StateVector>(tc.expected))
        throw SimError("state tester needs statevector expectations");
      StateVector expected = std::get<StateVector>(tc.expected);
      if (expected.num_qubits() != circuit.num_qubits())
        throw SimError("expected state dimension does not match circuit");
      expected.normalize();

      StateVector actual = run(circuit, input);
      result.input_rendering = render_state(input);
      result.actual_rendering = render_state(actual);
      result.expected_rendering = render_state(expected);
      result.status = fidelity(actual, expected) >= 1.0 - epsilon
                          ? CaseStatus::Pass
                          : CaseStatus::Fail;
    } catch (const std::exception& e) {
      result.status = CaseStatus::Error;
      result.error = e.what();
    }
    tally(report, result);
    report.cases.push_back(std::move(result));
  }
  return report;
}

EquivalenceResult equivalence_test(const Circuit& dut, const Circuit& tv,
                                   const Circuit& eo, EquivalenceMode mode,
                                   double epsilon) {
  if (dut.num_qubits() != tv.num_qubits() || dut.num_qubits() != eo.num_qubits())
    throw SimError("equivalence test: qubit-count mismatch");
  Circuit composed = tv.compose(dut).compose(eo.inverse());

  EquivalenceResult result;
  result.mode = mode;
  if (mode.exact) {
    StateVector out = run(composed, StateVector(dut.num_qubits()));
    result.p_all_zero = std::norm(out[0]);
  } else {
    ShotCounts counts = sample(composed, mode.shots, mode.seed);
    std::string zeros(dut.num_qubits(), '0');
    auto it = counts.counts.find(zeros);
    result.p_all_zero =
        it == counts.counts.end()
            ? 0.0
            : static_cast<double>(it->second) / static_cast<double>(counts.total);
  }
  result.pass = result.p_all_zero >= 1.0 - epsilon;
  return result;
}

SwapTestResult swap_test(const Circuit& prep_a, const Circuit& prep_b,
                         std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw SimError("swap test: shots must be >= 1");
  Circuit harness = swap_harness(prep_a, prep_b);
  harness.measure(2 * prep_a.num_qubits(), 0, "swap-test");
  ShotCounts counts = sample(harness, shots, seed);
  std::uint64_t ones = 0;
  auto it = counts.counts.find("1");
  if (it != counts.counts.end()) ones = it->second;
  double p1 = static_cast<double>(ones) / static_cast<double>(shots);
  return finish_swap_result(p1, shots, seed, static_cast<double>(ones));
}

SwapTestResult swap_test_exact(const Circuit& prep_a, const Circuit& prep_b) {
  Circuit harness = swap_harness(prep_a, prep_b);
  StateVector out = run(harness, StateVector(harness.num_qubits()));
  const std::uint64_t anc_mask = std::uint64_t{1} << (2 * prep_a.num_qubits());
  double p1 = 0;
  for (std::uint64_t i = 0; i < out.dim(); ++i) {
    if (i & anc_mask) p1 += std::norm(out[i]);
  }
  return finish_swap_result(p1, 0, 0, 0);
}

PhaseLocalizationReport localize_phase_error(const Circuit& dut, const Circuit& eo,
                                             std::uint64_t shots_per_probe,
                                             std::uint64_t seed,
                                             bool override_category) {
  if (dut.num_qubits() != eo.num_qubits())
    throw SimError("phase localization: qubit-count mismatch");
  if (!override_category) {
    if (categorize(dut).verdict != BlockVerdict::PM ||
        categorize(eo).verdict != BlockVerdict::PM)
      throw SimError(
          "phase localization expects PM blocks (pass override to force)");
  }
  const int n = dut.num_qubits();
  PhaseLocalizationReport report;
  report.shots_per_probe = shots_per_probe;
  report.total =
      run_probe(dut, eo, ghz_probe_prep(n), -1, shots_per_probe, seed);
  for (int q = 0; q < n; ++q) {
    report.per_qubit.push_back(run_probe(dut, eo, single_qubit_probe_prep(n, q), q,
                                         shots_per_probe, seed + 1 + q));
  }
  return report;
}

ShotPlan plan_shots(double p, double z, double half_width) {
  if (half_width <= 0) throw SimError("shot plan: half-width must be positive");
  if (p < 0 || p > 1) throw SimError("shot plan: p must lie in [0, 1]");
  if (z <= 0) throw SimError("shot plan: Z must be positive");
  ShotPlan plan;
  plan.p = p;
  plan.z = z;
  plan.half_width = half_width;
  double raw = z * z * p * (1.0 - p) / (half_width * half_width);
  plan.shots = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(raw)));
  plan.sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(plan.shots));
  return plan;
}

SqptProbeResult probe_diagonal(const Circuit& prep,
                               const std::vector<std::uint64_t>& indices,
                               std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw SimError("diagonal probe: shots must be >= 1");
  const std::uint64_t dim = std::uint64_t{1} << prep.num_qubits();
  std::vector<std::uint64_t> seen;
  for (auto idx : indices) {
    if (idx >= dim) throw SimError("diagonal probe: basis index out of range");
    if (std::find(seen.begin(), seen.end(), idx) != seen.end())
      throw SimError("diagonal probe: duplicate basis index");
    seen.push_back(idx);
  }

  ShotCounts counts = sample(prep, shots, seed);
  SqptProbeResult result;
  result.indices = indices;
  result.shots = shots;
  result.seed = seed;
  const int n = prep.num_qubits();
  for (auto idx : indices) {
    std::string bits(n, '0');
    for (int q = 0; q < n; ++q) {
      if (idx & (std::uint64_t{1} << q)) bits[n - 1 - q] = '1';
    }
    auto it = counts.counts.find(bits);
    double p = it == counts.counts.end()
                   ? 0.0
                   : static_cast<double>(it->second) / static_cast<double>(shots);
    result.probabilities.push_back(p);
  }
  const std::size_t m = indices.size();
  result.diag_block.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) result.diag_block[i][i] = result.probabilities[i];
  return result;
}

std::uint64_t qpt_config_count(int n) {
  if (n < 1) throw SimError("config count: n must be >= 1");
  if (n > 31) throw SimError("config count: n too large for 64-bit result");
  std::uint64_t c = 1;
  for (int i = 0; i < n; ++i) c *= 4;
  return c;
}

Circuit inject_bug(const Circuit& circuit, const Mutation& mutation) {
  const auto& ops = circuit.ops();
  auto require_index = [&](std::size_t limit) -> std::size_t {
    if (!mutation.op_index || *mutation.op_index >= limit)
      throw CircuitError("mutation target index invalid");
    return *mutation.op_index;
  };

  Circuit out(circuit.qregs(), circuit.cregs());
  const SourceSpan injected{"injected", 0, 0};

  switch (mutation.kind) {
    case MutationKind::ExtraGate: {
      std::size_t at = mutation.op_index.value_or(ops.size());
      if (at > ops.size()) throw CircuitError("mutation target index invalid");
      std::vector<double> angles;
      if (angle_arity(mutation.gate) == 1) angles.push_back(mutation.angle);
      for (std::size_t i = 0; i < ops.size(); ++i) {
        if (i == at)
          out.add(GateOp{mutation.gate, angles, mutation.qubits, {}, injected});
        out.add(ops[i]);
      }
      if (at == ops.size())
        out.add(GateOp{mutation.gate, angles, mutation.qubits, {}, injected});
      return out;
    }
    case MutationKind::MissingGate: {
      std::size_t at = require_index(ops.size());
      for (std::size_t i = 0; i < ops.size(); ++i) {
        if (i != at) out.add(ops[i]);
      }
      return out;
    }
    case MutationKind::WrongQubit: {
      std::size_t at = require_index(ops.size());
      GateOp op = ops[at];
      if (op.qubits.empty())
        throw CircuitError("mutation target has no qubit operands");
      // Deterministic choice from the seed: pick an operand slot and a
      // replacement wire not already used by the gate.
      std::uint64_t r = mutation.seed * 6364136223846793005ULL + 1442695040888963407ULL;
      std::size_t slot = r % op.qubits.size();
      std::vector<int> candidates;
      for (int q = 0; q < circuit.num_qubits(); ++q) {
        if (std::find(op.qubits.begin(), op.qubits.end(), q) == op.qubits.end())
          candidates.push_back(q);
      }
      if (candidates.empty())
        throw CircuitError("no alternative qubit available for mutation");
      op.qubits[slot] = candidates[(r >> 16) % candidates.size()];
      op.span = injected;
      for (std::size_t i = 0; i < ops.size(); ++i) out.add(i == at ? op : ops[i]);
      return out;
    }
    case MutationKind::WrongOrder: {
      std::size_t at = require_index(ops.size() - 1);
      if (same_op(ops[at], ops[at + 1]))
        throw CircuitError("wrongOrder on identical adjacent ops is a no-op");
      for (std::size_t i = 0; i < ops.size(); ++i) {
        if (i == at) {
          GateOp a = ops[at + 1];
          GateOp b = ops[at];
          a.span = injected;
          b.span = injected;
          out.add(std::move(a));
          out.add(std::move(b));
          ++i;
        } else {
          out.add(ops[i]);
        }
      }
      return out;
    }
    case MutationKind::PhaseShift: {
      std::size_t at = mutation.op_index.value_or(ops.size());
      if (at > ops.size()) throw CircuitError("mutation target index invalid");
      if (mutation.qubits.size() != 1)
        throw CircuitError("phaseShift mutation needs exactly one qubit");
      GateOp phase{GateKind::P, {mutation.angle}, mutation.qubits, {}, injected};
      for (std::size_t i = 0; i < ops.size(); ++i) {
        if (i == at) out.add(phase);
        out.add(ops[i]);
      }
      if (at == ops.size()) out.add(phase);
      return out;
    }
    case MutationKind::SkipInitialization: {
      // Drop the leading layer of Hadamards (the usual |+>^n prep).
      std::size_t skip = 0;
      while (skip < ops.size() && ops[skip].kind == GateKind::H) ++skip;
      if (skip == 0) throw CircuitError("circuit has no leading H layer to skip");
      for (std::size_t i = skip; i < ops.size(); ++i) out.add(ops[i]);
      return out;
    }
  }
  throw CircuitError("unknown mutation kind");
}

std::string render_bits(const std::vector<int>& bits) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (i) os << ", ";
    os << bits[i];
  }
  os << "]";
  return os.str();
}

std::string render_state(const StateVector& state, double amp_threshold) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  bool first = true;
  const int n = state.num_qubits();
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    cdouble a = state[i];
    if (std::abs(a) < amp_threshold) continue;
    if (!first) os << " + ";
    first = false;
    if (std::abs(a.imag()) < amp_threshold) {
      os << a.real();
    } else if (std::abs(a.real()) < amp_threshold) {
      os << a.imag() << "i";
    } else {
      os << "(" << a.real() << (a.imag() < 0 ? "" : "+") << a.imag() << "i)";
    }
    os << "|";
    for (int q = n - 1; q >= 0; --q) os << ((i >> q) & 1 ? '1' : '0');
    os << ">";
  }
  if (first) os << "0";
  return os.str();
}

std::string render_report_text(const TestReport& report) {
  std::ostringstream os;
  for (const auto& c : report.cases) {
    os << "Testing " << c.name << ":\n";
    os << "Result:  "
       << (c.status == CaseStatus::Pass ? "PASS"
                                        : c.status == CaseStatus::Fail ? "FAIL"
                                                                       : "ERROR")
       << "\n";
    if (c.status == CaseStatus::Error && !c.error.empty())
      os << "Error:  " << c.error << "\n";
    os << "Input:  " << c.input_rendering << "\n";
    os << "Output:  " << c.actual_rendering << "\n";
    os << "Expected Output:  " << c.expected_rendering << "\n\n";
  }
  os << report.passed << " passed, " << report.failed << " failed, "
     << report.errors << " errors\n";
  return os.str();
}

std::string render_report_json(const TestReport& report) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : report.cases) {
    nlohmann::json jc{
        {"name", c.name},
        {"status", c.status == CaseStatus::Pass ? "PASS"
                                                : c.status == CaseStatus::Fail
                                                      ? "FAIL"
                                                      : "ERROR"},
        {"input", c.input_rendering},
        {"output", c.actual_rendering},
        {"expected_output", c.expected_rendering},
    };
    if (!c.error.empty()) jc["error"] = c.error;
    cases.push_back(jc);
  }
  nlohmann::json doc{{"cases", cases},
                     {"passed", report.passed},
                     {"failed", report.failed},
                     {"errors", report.errors}};
  return doc.dump(2);
}

namespace {

std::variant<std::vector<int>, StateVector> parse_case_value(
    const nlohmann::json& value, const std::string& what) {
  if (!value.is_array() || value.empty())
    throw SimError("test vector '" + what + "' must be a non-empty array");
  if (value[0].is_number_integer()) {
    std::vector<int> bits;
    for (const auto& v : value) {
      if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1))
        throw SimError("bit list entries must be 0 or 1 in '" + what + "'");
      bits.push_back(v.get<int>());
    }
    return bits;
  }
  std::vector<cdouble> amps;
  for (const auto& v : value) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw SimError("amplitudes must be [re, im] pairs in '" + what + "'");
    amps.emplace_back(v[0].get<double>(), v[1].get<double>());
  }
  const auto dim = amps.size();
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if ((std::size_t{1} << n) != dim)
    throw SimError("amplitude list length must be a power of two in '" + what + "'");
  return StateVector(n, std::move(amps));
}

}  // namespace

std::vector<TestCase> load_test_cases_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  if (!doc.is_array()) throw SimError("test vector file must be a JSON array");
  std::vector<TestCase> cases;
  for (const auto& jc : doc) {
    if (!jc.is_object() || !jc.contains("name") || !jc.contains("input") ||
        !jc.contains("expected_output"))
      throw SimError("each test vector needs name/input/expected_output");
    TestCase tc;
    tc.name = jc["name"].get<std::string>();
    tc.input = parse_case_value(jc["input"], "input");
    tc.expected = parse_case_value(jc["expected_output"], "expected_output");
    cases.push_back(std::move(tc));
  }
  return cases;
}

std::string save_test_cases_json(const std::vector<TestCase>& cases) {
  nlohmann::json doc = nlohmann::json::array();
  auto value_json = [](const std::variant<std::vector<int>, StateVector>& v) {
    nlohmann::json arr = nlohmann::json::array();
    if (std::holds_alternative<std::vector<int>>(v)) {
      for (int b : std::get<std::vector<int>>(v)) arr.push_back(b);
    } else {
      const auto& sv = std::get<StateVector>(v);
      for (std::uint64_t i = 0; i < sv.dim(); ++i)
        arr.push_back({sv[i].real(), sv[i].imag()});
    }
    return arr;
  };
  for (const auto& tc : cases) {
    doc.push_back({{"name", tc.name},
                   {"input", value_json(tc.input)},
                   {"expected_output", value_json(tc.expected)}});
  }
  return doc.dump(2);
}

}  // namespace qforge
