#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "qforge/analysis.hpp"
#include "qforge/qasm.hpp"
#include "qforge/statevector.hpp"
#include "qforge/subroutines.hpp"

using namespace qforge;

namespace {

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

// Random circuit on a subset of wires so the rest stay idle.
Circuit random_circuit_on(int total_qubits, const std::vector<int>& wires,
                          int num_ops, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  Circuit c(total_qubits);
  for (int i = 0; i < num_ops; ++i) {
    switch (rng() % 4) {
      case 0: c.h(wires[rng() % wires.size()], "random"); break;
      case 1: c.p(angle(rng), wires[rng() % wires.size()], "random"); break;
      case 2: {
        if (wires.size() < 2) {
          c.x(wires[0], "random");
          break;
        }
        int a = static_cast<int>(rng() % wires.size());
        int b = static_cast<int>(rng() % wires.size());
        if (a == b) b = (b + 1) % static_cast<int>(wires.size());
        c.cx(wires[a], wires[b], "random");
        break;
      }
      default: c.x(wires[rng() % wires.size()], "random"); break;
    }
  }
  return c;
}

}  // namespace

TEST_CASE("vslice splits at break-barriers") {
  Circuit grover = load_fixture("grover3.qasm");
  SliceSet set = vslice(grover, SliceMode::Standalone);
  REQUIRE(set.slices.size() == 3);
  REQUIRE(set.cut_positions.size() == 2);
  CHECK(set.cut_positions[0] == 3);
  CHECK(set.cut_positions[1] == 7);
  CHECK(set.slices[0].ops().size() == 3);   // H prep layer
  CHECK(set.slices[1].ops().size() == 3);   // oracle: H CCX H
  CHECK(set.slices[2].ops().size() == 15);  // diffusion block
  for (const auto& slice : set.slices) {
    for (const auto& op : slice.ops()) CHECK(op.kind != GateKind::BreakBarrier);
  }
}

TEST_CASE("vslice accumulated builds prefixes") {
  Circuit grover = load_fixture("grover3.qasm");
  SliceSet acc = vslice(grover, SliceMode::Accumulated);
  REQUIRE(acc.slices.size() == 3);
  CHECK(acc.slices[0].ops().size() == 3);
  CHECK(acc.slices[1].ops().size() == 6);
  CHECK(acc.slices[2].ops().size() == 21);

  // The final accumulated slice acts exactly like the original circuit.
  StateVector zero(3);
  CHECK(fidelity(run(acc.slices[2], zero), run(grover, zero)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("vslice without directives yields one slice") {
  Circuit adder = load_fixture("adder.qasm");
  SliceSet set = vslice(adder, SliceMode::Standalone);
  REQUIRE(set.slices.size() == 1);
  CHECK(set.cut_positions.empty());
  CHECK(set.slices[0].ops().size() == adder.ops().size());
}

TEST_CASE("verify_recomposition holds on grover and fails on tampering") {
  Circuit grover = load_fixture("grover3.qasm");
  SliceSet set = vslice(grover, SliceMode::Standalone);
  CHECK(verify_recomposition(set, grover, 1e-9));

  SliceSet broken = set;
  Circuit extra(3);
  extra.x(0);
  broken.slices[1] = broken.slices[1].compose(extra);
  CHECK(!verify_recomposition(broken, grover, 1e-9));

  SliceSet acc = vslice(grover, SliceMode::Accumulated);
  CHECK_THROWS_AS(verify_recomposition(acc, grover, 1e-9), CircuitError);
}

TEST_CASE("hslice removes idle wires and remaps in order") {
  Circuit c(5);
  c.h(1);
  c.cx(1, 3);
  c.p(0.5, 4);
  WireReduction red = hslice(c);
  CHECK(red.kept_qubits == std::vector<int>{1, 3, 4});
  CHECK(red.removed_qubits == std::vector<int>{0, 2});
  CHECK(red.reduced.num_qubits() == 3);
  REQUIRE(red.reduced.ops().size() == 3);
  CHECK(red.reduced.ops()[0].qubits == std::vector<int>{0});
  CHECK(red.reduced.ops()[1].qubits == std::vector<int>{0, 1});
  CHECK(red.reduced.ops()[2].qubits == std::vector<int>{2});
  REQUIRE(red.reduced.qregs().size() == 1);
  CHECK(red.reduced.qregs()[0].name == "q");
}

TEST_CASE("hslice keeps busy circuits untouched and one wire when all idle") {
  Circuit busy(2);
  busy.h(0);
  busy.cx(0, 1);
  WireReduction none = hslice(busy);
  CHECK(none.removed_qubits.empty());
  CHECK(none.reduced.ops().size() == 2);

  Circuit idle(4);
  WireReduction all = hslice(idle);
  CHECK(all.kept_qubits == std::vector<int>{0});
  CHECK(all.removed_qubits == std::vector<int>{1, 2, 3});
  CHECK(all.reduced.num_qubits() == 1);
}

TEST_CASE("hslice embedding identity on randomized circuits") {
  std::mt19937_64 meta(12345);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 4 + static_cast<int>(meta() % 3);  // 4..6 wires
    // Pick a proper subset of wires to act on; the rest stay idle.
    std::vector<int> wires;
    for (int q = 0; q < n; ++q) {
      if (meta() % 2 == 0) wires.push_back(q);
    }
    if (wires.empty()) wires.push_back(static_cast<int>(meta() % n));
    if (static_cast<int>(wires.size()) == n) wires.pop_back();
    CAPTURE(trial);
    CAPTURE(n);

    Circuit c = random_circuit_on(n, wires, 15, meta());
    WireReduction red = hslice(c);
    REQUIRE(!red.removed_qubits.empty());

    StateVector full = run(c, StateVector(n));
    StateVector small = run(red.reduced, StateVector(red.reduced.num_qubits()));

    // Idle wires stay |0>; the kept-wire marginal equals the reduced run.
    double err = 0;
    for (std::uint64_t i = 0; i < full.dim(); ++i) {
      std::uint64_t packed = 0;
      bool idle_zero = true;
      for (std::size_t b = 0; b < red.kept_qubits.size(); ++b) {
        if (i & (std::uint64_t{1} << red.kept_qubits[b]))
          packed |= std::uint64_t{1} << b;
      }
      for (int q : red.removed_qubits) {
        if (i & (std::uint64_t{1} << q)) idle_zero = false;
      }
      cdouble expect = idle_zero ? small[packed] : cdouble{0, 0};
      err = std::max(err, std::abs(full[i] - expect));
    }
    CHECK(err < 1e-10);
  }
}

TEST_CASE("categorize by gate set") {
  Circuit adder = load_fixture("adder.qasm");
  BlockCategory cat = categorize(adder);
  CHECK(cat.verdict == BlockVerdict::AP);
  CHECK(cat.method == "gate-set");

  Circuit phases(3);
  phases.t(0);
  phases.s(1);
  phases.cz(1, 2);
  phases.rz(0.3, 2);
  BlockCategory pm = categorize(phases);
  CHECK(pm.verdict == BlockVerdict::PM);
  CHECK(pm.method == "gate-set");

  CHECK(verdict_name(cat.verdict) == "AP");
  CHECK(verdict_name(pm.verdict) == "PM");
}

TEST_CASE("categorize resolves mixed circuits by unitary structure") {
  Circuit grover = load_fixture("grover3.qasm");
  SliceSet set = vslice(grover, SliceMode::Standalone);

  // Oracle block H-CCX-H is a CCZ: diagonal, so PM despite the Hadamards.
  BlockCategory oracle = categorize(set.slices[1]);
  CHECK(oracle.verdict == BlockVerdict::PM);
  CHECK(oracle.method == "unitary");

  BlockCategory iterator = categorize(set.slices[2]);
  CHECK(iterator.verdict == BlockVerdict::AR);
  CHECK(iterator.method == "unitary");

  BlockCategory qft = categorize(load_fixture("qft3.qasm"));
  CHECK(qft.verdict == BlockVerdict::AR);
  CHECK(!qft.monomial_flag);

  // Z X Z = -X: permutation up to a global phase.
  Circuit zxz(1);
  zxz.z(0);
  zxz.x(0);
  zxz.z(0);
  BlockCategory ap = categorize(zxz);
  CHECK(ap.verdict == BlockVerdict::AP);
  CHECK(ap.method == "unitary");

  // X then S: monomial with distinct phases -> AR with the flag set.
  Circuit xs(1);
  xs.x(0);
  xs.s(0);
  BlockCategory mono = categorize(xs);
  CHECK(mono.verdict == BlockVerdict::AR);
  CHECK(mono.monomial_flag);
}

TEST_CASE("categorize verdicts satisfy the matrix invariants") {
  const double tol = 1e-9;
  auto check_structure = [&](const Circuit& c) {
    BlockCategory cat = categorize(c);
    if (cat.method != "unitary") return;
    Unitary u = unitary_of(c);
    if (cat.verdict == BlockVerdict::PM) {
      for (std::uint64_t r = 0; r < u.dim(); ++r) {
        for (std::uint64_t col = 0; col < u.dim(); ++col) {
          if (r != col) CHECK(std::abs(u.at(r, col)) < tol);
        }
      }
    } else if (cat.verdict == BlockVerdict::AP) {
      for (std::uint64_t r = 0; r < u.dim(); ++r) {
        int hits = 0;
        for (std::uint64_t col = 0; col < u.dim(); ++col) {
          if (std::abs(u.at(r, col)) > tol) ++hits;
        }
        CHECK(hits == 1);
      }
    }
  };
  check_structure(vslice(load_fixture("grover3.qasm"), SliceMode::Standalone).slices[1]);
  Circuit zxz(1);
  zxz.z(0);
  zxz.x(0);
  zxz.z(0);
  check_structure(zxz);
}

TEST_CASE("categorize above the unitary cap falls back to the gate set") {
  Circuit wide_ap(12);
  for (int q = 0; q + 1 < 12; ++q) wide_ap.cx(q, q + 1);
  BlockCategory ap = categorize(wide_ap, 10);
  CHECK(ap.verdict == BlockVerdict::AP);
  CHECK(ap.method == "gate-set");

  Circuit wide_mixed(12);
  wide_mixed.h(0);
  wide_mixed.cx(0, 1);
  BlockCategory mixed = categorize(wide_mixed, 10);
  CHECK(mixed.verdict == BlockVerdict::AR);
  CHECK(mixed.method == "gate-set");
  CHECK(mixed.notes == "mixed gate set, unverified");

  // Raising the cap resolves the same circuit by its unitary.
  Circuit small_mixed(2);
  small_mixed.h(0);
  small_mixed.cx(0, 1);
  CHECK(categorize(small_mixed).method == "unitary");
  CHECK(categorize(small_mixed).verdict == BlockVerdict::AR);
}

TEST_CASE("categorize rejects measures and labels empty circuits AP") {
  Circuit m(1, 1);
  m.measure(0, 0);
  CHECK_THROWS_AS(categorize(m), CircuitError);

  Circuit empty(2);
  empty.barrier();
  BlockCategory cat = categorize(empty);
  CHECK(cat.verdict == BlockVerdict::AP);  // identity is a permutation
}
