#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "qforge/qasm.hpp"
#include "qforge/subroutines.hpp"
#include "qforge/testkit.hpp"

using namespace qforge;

namespace {

constexpr double kPi = std::numbers::pi;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Circuit load_fixture(const std::string& name) {
  return parse_qasm(read_file(std::string(QFORGE_FIXTURES) + "/" + name), name);
}

std::vector<TestCase> adder_vectors() {
  return load_test_cases_json(
      read_file(std::string(QFORGE_FIXTURES) + "/adder_vectors.json"));
}

Circuit buggy_adder(const Circuit& adder) {
  Mutation m;
  m.kind = MutationKind::ExtraGate;
  m.gate = GateKind::CCX;
  m.qubits = {0, 1, 3};
  return inject_bug(adder, m);
}

}  // namespace

TEST_CASE("bit tester passes the reference adder") {
  TestReport report = run_bit_tests(load_fixture("adder.qasm"), adder_vectors());
  CHECK(report.passed == 5);
  CHECK(report.failed == 0);
  CHECK(report.errors == 0);
  CHECK(report.all_passed());
}

TEST_CASE("extra toffoli fails exactly tests 1 and 5") {
  Circuit bad = buggy_adder(load_fixture("adder.qasm"));
  CHECK(bad.count_ops()[GateKind::CCX] == 3);
  CHECK(bad.ops().back().span.origin == "injected");

  TestReport report = run_bit_tests(bad, adder_vectors());
  CHECK(report.passed == 3);
  CHECK(report.failed == 2);
  REQUIRE(report.cases.size() == 5);
  CHECK(report.cases[0].status == CaseStatus::Fail);
  CHECK(report.cases[0].actual_rendering == "[1, 1, 1, 0]");
  CHECK(report.cases[1].status == CaseStatus::Pass);
  CHECK(report.cases[2].status == CaseStatus::Pass);
  CHECK(report.cases[3].status == CaseStatus::Pass);
  CHECK(report.cases[4].status == CaseStatus::Fail);
  CHECK(report.cases[4].actual_rendering == "[1, 1, 0, 0]");
}

TEST_CASE("bit tester flags superposition outputs as errors") {
  Circuit h(1);
  h.h(0);
  TestReport report = run_bit_tests(h, {{"plus", std::vector<int>{0}, std::vector<int>{0}}});
  REQUIRE(report.cases.size() == 1);
  CHECK(report.cases[0].status == CaseStatus::Error);
  CHECK(report.cases[0].error == "block is not amplitude-permutation on this input");
  CHECK(report.errors == 1);
}

TEST_CASE("state tester compares by fidelity") {
  Circuit prep = load_fixture("plus_prep.qasm");
  const double r = 1 / std::sqrt(2.0);
  StateVector plus(1, {r, r});
  StateVector minus(1, {r, -r});
  TestReport ok = run_state_tests(prep, {{"plus", std::vector<int>{0}, plus}});
  CHECK(ok.all_passed());
  TestReport bad = run_state_tests(prep, {{"minus", std::vector<int>{0}, minus}});
  CHECK(bad.failed == 1);

  // Expected vectors carrying 3-decimal rounding still pass after the
  // loader renormalizes.
  StateVector rounded(1, {0.707, 0.707});
  CHECK(run_state_tests(prep, {{"round", std::vector<int>{0}, rounded}}).all_passed());
}

TEST_CASE("state tester epsilon is a fidelity margin") {
  Circuit ry(1);
  ry.ry(0.05, 0);  // fidelity to |0> is cos^2(0.025) ~ 0.999375
  StateVector zero = StateVector::basis(1, 0);
  CHECK(run_state_tests(ry, {{"tight", std::vector<int>{0}, zero}}, 1e-4).failed == 1);
  CHECK(run_state_tests(ry, {{"loose", std::vector<int>{0}, zero}}, 1e-2).all_passed());
}

TEST_CASE("equivalence test composes dut with the inverse oracle") {
  Circuit ghz = load_fixture("ghz3.qasm");
  Circuit tv(3);  // empty test vector: |000>

  EquivalenceResult same = equivalence_test(ghz, tv, ghz, EquivalenceMode::Exact());
  CHECK(same.pass);
  CHECK(same.p_all_zero == doctest::Approx(1.0));

  // GHZ with a stray Z on q1 is orthogonal to the reference GHZ.
  Circuit bad = ghz;
  bad.z(1);
  EquivalenceResult diff = equivalence_test(bad, tv, ghz, EquivalenceMode::Exact());
  CHECK(!diff.pass);
  CHECK(diff.p_all_zero == doctest::Approx(0.0).epsilon(1e-9));

  EquivalenceResult shot =
      equivalence_test(ghz, tv, ghz, EquivalenceMode::Shots(2048, 7), 1e-6);
  CHECK(shot.pass);
  CHECK(shot.p_all_zero == doctest::Approx(1.0));
  CHECK(!shot.mode.exact);

  Circuit narrow(2);
  CHECK_THROWS_AS(equivalence_test(ghz, narrow, ghz, EquivalenceMode::Exact()),
                  SimError);
}

TEST_CASE("missing hadamard in the transform shows up under a periodic input") {
  Circuit good = load_fixture("qft3.qasm");
  Circuit mutant = load_fixture("qft3_missing_h0.qasm");
  // tv preparing the period-2 shift-1 comb (|1>+|3>+|5>+|7>)/2.
  Circuit tv(3);
  tv.x(0);
  tv.h(1);
  tv.h(2);
  EquivalenceResult res = equivalence_test(mutant, tv, good, EquivalenceMode::Exact());
  CHECK(!res.pass);
}

TEST_CASE("exact swap test on identical, orthogonal and rotated states") {
  Circuit plus = load_fixture("plus_prep.qasm");
  SwapTestResult same = swap_test_exact(plus, plus);
  CHECK(same.s == doctest::Approx(1.0));
  CHECK(same.delta_theta == doctest::Approx(0.0));
  CHECK(same.shots == 0);
  CHECK(same.stderr_s == 0.0);

  Circuit zero(1);
  zero.barrier();
  Circuit one(1);
  one.x(0);
  SwapTestResult ortho = swap_test_exact(zero, one);
  CHECK(ortho.s == doctest::Approx(0.0));  // P(1) = 0.25 -> s = 0

  // |+> vs P(pi/3)|+>: s = cos^2(pi/6) = 0.75, recovered angle pi/3.
  Circuit rotated = load_fixture("plus_phase_pi3.qasm");
  SwapTestResult phase = swap_test_exact(plus, rotated);
  CHECK(phase.s == doctest::Approx(0.75));
  CHECK(phase.delta_theta == doctest::Approx(kPi / 3));
}

TEST_CASE("sampled swap test recovers the pi/3 phase at 8192 shots") {
  Circuit plus = load_fixture("plus_prep.qasm");
  Circuit rotated = load_fixture("plus_phase_pi3.qasm");
  SwapTestResult r = swap_test(plus, rotated, 8192, 11);
  CHECK(r.shots == 8192);
  CHECK(r.seed == 11);
  CHECK(r.ones_count == doctest::Approx(8192.0 * (1.0 - r.s) / 2.0));
  CHECK(std::abs(r.s - 0.75) <= 3 * r.stderr_s);
  CHECK(std::abs(r.delta_theta - kPi / 3) < 0.06);

  SwapTestResult again = swap_test(plus, rotated, 8192, 11);
  CHECK(again.s == r.s);  // deterministic under a fixed seed

  CHECK_THROWS_AS(swap_test(plus, rotated, 0, 0), SimError);
  Circuit wide(2);
  CHECK_THROWS_AS(swap_test_exact(plus, wide), SimError);
}

TEST_CASE("phase localization pins the wire carrying the extra phase") {
  Circuit eo(3);
  eo.s(0);
  eo.cz(1, 2);
  eo.t(2);
  Circuit dut = eo;
  dut.t(1);  // the planted defect

  PhaseLocalizationReport exact = localize_phase_error(dut, eo, 0, 0);
  CHECK(exact.shots_per_probe == 0);
  REQUIRE(exact.per_qubit.size() == 3);
  CHECK(exact.per_qubit[0].qubit == 0);
  CHECK(exact.per_qubit[0].delta_theta == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(exact.per_qubit[1].delta_theta == doctest::Approx(kPi / 4));
  CHECK(exact.per_qubit[2].delta_theta == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(exact.total.qubit == -1);
  CHECK(exact.total.delta_theta == doctest::Approx(kPi / 4));

  PhaseLocalizationReport shot = localize_phase_error(dut, eo, 8192, 3);
  CHECK(std::abs(shot.per_qubit[1].delta_theta - kPi / 4) < 0.06);
  CHECK(shot.per_qubit[0].delta_theta < 0.06);
  CHECK(shot.per_qubit[2].delta_theta < 0.06);
}

TEST_CASE("phase localization insists on PM blocks unless overridden") {
  Circuit pm(2);
  pm.s(0);
  Circuit ar(2);
  ar.h(0);
  CHECK_THROWS_AS(localize_phase_error(ar, pm, 0, 0), SimError);
  PhaseLocalizationReport forced = localize_phase_error(ar, ar, 0, 0, true);
  CHECK(forced.per_qubit[0].delta_theta == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("shot planner") {
  ShotPlan plan = plan_shots(0.5, 1.96, 0.01);
  CHECK(plan.shots == 9604);
  CHECK(plan.sigma == doctest::Approx(std::sqrt(0.25 / 9604.0)));

  // Halving the half-width quadruples the sample size.
  CHECK(plan_shots(0.5, 1.96, 0.005).shots == 4 * 9604);
  CHECK(plan_shots(0.0, 1.96, 0.01).shots == 1);  // floor at one shot
  CHECK_THROWS_AS(plan_shots(0.5, 1.96, 0.0), SimError);
  CHECK_THROWS_AS(plan_shots(1.5, 1.96, 0.01), SimError);
  CHECK_THROWS_AS(plan_shots(0.5, -1.0, 0.01), SimError);
}

TEST_CASE("diagonal probe on the GHZ preparation") {
  Circuit ghz = load_fixture("ghz3.qasm");
  SqptProbeResult probe = probe_diagonal(ghz, {0, 1, 7}, 10000, 5);
  REQUIRE(probe.probabilities.size() == 3);
  CHECK(std::abs(probe.probabilities[0] - 0.5) < 3 * 0.005);
  CHECK(probe.probabilities[1] <= 0.002);
  CHECK(std::abs(probe.probabilities[2] - 0.5) < 3 * 0.005);
  REQUIRE(probe.diag_block.size() == 3);
  CHECK(probe.diag_block[0][0] == probe.probabilities[0]);
  CHECK(probe.diag_block[0][1] == 0.0);

  CHECK_THROWS_AS(probe_diagonal(ghz, {8}, 100, 0), SimError);
  CHECK_THROWS_AS(probe_diagonal(ghz, {1, 1}, 100, 0), SimError);
  CHECK(qpt_config_count(3) == 64);
  CHECK(qpt_config_count(1) == 4);
  CHECK_THROWS_AS(qpt_config_count(0), SimError);
}

TEST_CASE("mutations cover the whole taxonomy") {
  Circuit ghz = load_fixture("ghz3.qasm");  // h, cx(0,1), cx(1,2)

  SUBCASE("extra gate at an index") {
    Mutation m{MutationKind::ExtraGate, 1, GateKind::Z, {2}, 0, 0};
    Circuit out = inject_bug(ghz, m);
    REQUIRE(out.ops().size() == 4);
    CHECK(out.ops()[1].kind == GateKind::Z);
    CHECK(out.ops()[1].span.origin == "injected");
  }

  SUBCASE("missing gate") {
    Mutation m;
    m.kind = MutationKind::MissingGate;
    m.op_index = 0;
    Circuit out = inject_bug(ghz, m);
    REQUIRE(out.ops().size() == 2);
    CHECK(out.ops()[0].kind == GateKind::CX);
    m.op_index = 9;
    CHECK_THROWS_AS(inject_bug(ghz, m), CircuitError);
  }

  SUBCASE("wrong qubit is deterministic and stays valid") {
    Mutation m;
    m.kind = MutationKind::WrongQubit;
    m.op_index = 1;
    m.seed = 4;
    Circuit out = inject_bug(ghz, m);
    Circuit out2 = inject_bug(ghz, m);
    CHECK(same_ops(out, out2));
    CHECK(out.ops()[1].kind == GateKind::CX);
    CHECK(out.ops()[1].qubits != ghz.ops()[1].qubits);
    CHECK(out.ops()[1].span.origin == "injected");
    CHECK(out.ops()[1].qubits[0] != out.ops()[1].qubits[1]);
  }

  SUBCASE("wrong order swaps neighbours, rejects identical pairs") {
    Mutation m;
    m.kind = MutationKind::WrongOrder;
    m.op_index = 1;
    Circuit out = inject_bug(ghz, m);
    CHECK(out.ops()[1].qubits == std::vector<int>{1, 2});
    CHECK(out.ops()[2].qubits == std::vector<int>{0, 1});

    Circuit twins(2);
    twins.x(0);
    twins.x(0);
    Mutation t;
    t.kind = MutationKind::WrongOrder;
    t.op_index = 0;
    CHECK_THROWS_AS(inject_bug(twins, t), CircuitError);
  }

  SUBCASE("phase shift inserts a P gate") {
    Mutation m;
    m.kind = MutationKind::PhaseShift;
    m.qubits = {1};
    m.angle = kPi / 8;
    Circuit out = inject_bug(ghz, m);  // default target: end of circuit
    REQUIRE(out.ops().size() == 4);
    CHECK(out.ops()[3].kind == GateKind::P);
    CHECK(out.ops()[3].angles[0] == doctest::Approx(kPi / 8));
    m.qubits = {0, 1};
    CHECK_THROWS_AS(inject_bug(ghz, m), CircuitError);
  }

  SUBCASE("skip initialization drops the leading H layer") {
    Mutation m;
    m.kind = MutationKind::SkipInitialization;
    Circuit out = inject_bug(ghz, m);
    REQUIRE(out.ops().size() == 2);
    CHECK(out.ops()[0].kind == GateKind::CX);

    Circuit no_h(2);
    no_h.x(0);
    CHECK_THROWS_AS(inject_bug(no_h, m), CircuitError);
  }
}

TEST_CASE("renderings") {
  CHECK(render_bits({1, 1, 1, 0}) == "[1, 1, 1, 0]");
  CHECK(render_bits({}) == "[]");

  const double r = 1 / std::sqrt(2.0);
  StateVector sv(3, {0, 0, 0, r, 0, -r, 0, 0});
  CHECK(render_state(sv) == "0.71|011> + -0.71|101>");

  StateVector imag(1, {r, cdouble{0, r}});
  CHECK(render_state(imag) == "0.71|0> + 0.71i|1>");

  StateVector mixed(1, {r, cdouble{-0.5, 0.5}});
  CHECK(render_state(mixed) == "0.71|0> + (-0.50+0.50i)|1>");

  StateVector zero(1, {0, 0});
  CHECK(render_state(zero) == "0");
}

TEST_CASE("report text matches the documented shape") {
  Circuit bad = buggy_adder(load_fixture("adder.qasm"));
  TestReport report = run_bit_tests(bad, adder_vectors());
  std::string text = render_report_text(report);
  CHECK(text.find("Testing test 1:\n"
                  "Result:  FAIL\n"
                  "Input:  [1, 1, 1, 0]\n"
                  "Output:  [1, 1, 1, 0]\n"
                  "Expected Output:  [1, 1, 1, 1]\n") != std::string::npos);
  CHECK(text.find("Testing test 5:\n"
                  "Result:  FAIL\n"
                  "Input:  [1, 1, 0, 0]\n"
                  "Output:  [1, 1, 0, 0]\n"
                  "Expected Output:  [1, 1, 0, 1]\n") != std::string::npos);
  CHECK(text.find("3 passed, 2 failed, 0 errors\n") != std::string::npos);
}

TEST_CASE("report json mirrors the text verdicts") {
  TestReport report = run_bit_tests(load_fixture("adder.qasm"), adder_vectors());
  nlohmann::json doc = nlohmann::json::parse(render_report_json(report));
  CHECK(doc["passed"] == 5);
  CHECK(doc["failed"] == 0);
  REQUIRE(doc["cases"].size() == 5);
  CHECK(doc["cases"][0]["status"] == "PASS");
  CHECK(doc["cases"][0]["name"] == "test 1");
}

TEST_CASE("test vector json round trip") {
  std::vector<TestCase> cases = adder_vectors();
  REQUIRE(cases.size() == 5);
  CHECK(cases[0].name == "test 1");
  CHECK(std::get<std::vector<int>>(cases[0].input) == std::vector<int>{1, 1, 1, 0});

  std::vector<TestCase> reloaded = load_test_cases_json(save_test_cases_json(cases));
  REQUIRE(reloaded.size() == 5);
  CHECK(std::get<std::vector<int>>(reloaded[4].expected) ==
        std::vector<int>{1, 1, 0, 1});

  // Amplitude-valued vectors survive as well.
  const double r = 1 / std::sqrt(2.0);
  TestCase amp{"bell", std::vector<int>{0, 0}, StateVector(2, {r, 0, 0, r})};
  auto back = load_test_cases_json(save_test_cases_json({amp}));
  REQUIRE(back.size() == 1);
  const auto& sv = std::get<StateVector>(back[0].expected);
  CHECK(sv[0].real() == doctest::Approx(r));
  CHECK(sv[3].real() == doctest::Approx(r));
}

TEST_CASE("test vector json rejects malformed input") {
  CHECK_THROWS(load_test_cases_json("{"));
  CHECK_THROWS_AS(load_test_cases_json("{}"), SimError);
  CHECK_THROWS_AS(load_test_cases_json("[{\"name\": \"x\"}]"), SimError);
  CHECK_THROWS_AS(
      load_test_cases_json(
          "[{\"name\": \"x\", \"input\": [0, 2], \"expected_output\": [0, 0]}]"),
      SimError);
  CHECK_THROWS_AS(
      load_test_cases_json("[{\"name\": \"x\", \"input\": [[1, 0], [0, 0], [0, 0]], "
                           "\"expected_output\": [0]}]"),
      SimError);
}
