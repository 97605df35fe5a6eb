#include "qforge/subroutines.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qforge {

namespace {

constexpr double kPi = std::numbers::pi;

void check(bool cond, const char* msg) {
  if (!cond) throw CircuitError(msg);
}

// CRY(theta) via two CX and half-angle RY.
void cry(Circuit& c, double theta, int ctrl, int target, const std::string& label) {
  c.ry(theta / 2, target, label);
  c.cx(ctrl, target, label);
  c.ry(-theta / 2, target, label);
  c.cx(ctrl, target, label);
}

// Doubly controlled RY via the same sandwich with CCX.
void ccry(Circuit& c, double theta, int c1, int c2, int target,
          const std::string& label) {
  c.ry(theta / 2, target, label);
  c.ccx(c1, c2, target, label);
  c.ry(-theta / 2, target, label);
  c.ccx(c1, c2, target, label);
}

Circuit full_adder() {
  // Inputs A, B, Cin on qubits 0..2, |0> scratch on qubit 3; outputs
  // A, B, S, Cout.
  Circuit c(4);
  const std::string label = "full-adder";
  c.ccx(0, 1, 3, label);
  c.cx(0, 1, label);
  c.ccx(1, 2, 3, label);
  c.cx(1, 2, label);
  c.cx(0, 1, label);
  return c;
}

Circuit ghz(int n) {
  Circuit c(n);
  c.h(0, "ghz");
  for (int q = 0; q + 1 < n; ++q) c.cx(q, q + 1, "ghz");
  return c;
}

Circuit qft(int n) {
  Circuit c(n);
  const std::string label = "qft";
  for (int j = n - 1; j >= 0; --j) {
    c.h(j, label);
    for (int k = j - 1; k >= 0; --k)
      c.cp(kPi / std::pow(2.0, j - k), k, j, label);
  }
  for (int j = 0; j < n / 2; ++j) c.swap(j, n - j - 1, label);
  return c;
}

Circuit w_state(int n) {
  // Peel 1/sqrt(n - i) of the remaining amplitude off at each step.
  Circuit c(n);
  const std::string label = "w-state";
  c.x(0, label);
  for (int i = 0; i + 1 < n; ++i) {
    double theta = 2 * std::acos(std::sqrt(1.0 / (n - i)));
    cry(c, theta, i, i + 1, label);
    c.cx(i + 1, i, label);
  }
  return c;
}

// Split & cycle-shift block of the deterministic Dicke construction,
// acting on qubits 0..m-1 with up to `weight` excitations.
void dicke_scs(Circuit& c, int m, int weight, const std::string& label) {
  c.cx(m - 2, m - 1, label);
  cry(c, 2 * std::acos(std::sqrt(1.0 / m)), m - 1, m - 2, label);
  c.cx(m - 2, m - 1, label);
  for (int l = 2; l <= weight; ++l) {
    c.cx(m - l - 1, m - 1, label);
    ccry(c, 2 * std::acos(std::sqrt(static_cast<double>(l) / m)), m - 1, m - l,
         m - l - 1, label);
    c.cx(m - l - 1, m - 1, label);
  }
}

Circuit dicke(int n, int k) {
  Circuit c(n);
  const std::string label = "dicke";
  for (int q = n - k; q < n; ++q) c.x(q, label);
  for (int m = n; m > k; --m) dicke_scs(c, m, k, label);
  for (int m = k; m > 1; --m) dicke_scs(c, m, m - 1, label);
  return c;
}

// Multi-controlled X: direct up to two controls, CCX cascade through
// clean ancillas otherwise. `anc` must provide controls-2 wires.
void mcx(Circuit& c, const std::vector<int>& controls, int target,
         const std::vector<int>& anc, const std::string& label) {
  const std::size_t m = controls.size();
  if (m == 0) {
    c.x(target, label);
    return;
  }
  if (m == 1) {
    c.cx(controls[0], target, label);
    return;
  }
  if (m == 2) {
    c.ccx(controls[0], controls[1], target, label);
    return;
  }
  check(anc.size() >= m - 2, "mcx: not enough ancilla wires");
  c.ccx(controls[0], controls[1], anc[0], label);
  for (std::size_t i = 2; i + 1 < m; ++i)
    c.ccx(controls[i], anc[i - 2], anc[i - 1], label);
  c.ccx(controls[m - 1], anc[m - 3], target, label);
  for (std::size_t i = m - 2; i >= 2; --i)
    c.ccx(controls[i], anc[i - 2], anc[i - 1], label);
  c.ccx(controls[0], controls[1], anc[0], label);
}

Circuit diffusion(int n) {
  // H X (multi-controlled Z) X H; ancilla wires appear above n = 3.
  const std::string label = "diffusion";
  const int anc_count = n > 3 ? n - 3 : 0;
  Circuit c(n + anc_count);
  for (int q = 0; q < n; ++q) c.h(q, label);
  for (int q = 0; q < n; ++q) c.x(q, label);
  if (n == 1) {
    c.z(0, label);
  } else if (n == 2) {
    c.cz(0, 1, label);
  } else {
    std::vector<int> controls;
    for (int q = 0; q + 1 < n; ++q) controls.push_back(q);
    std::vector<int> anc;
    for (int a = 0; a < anc_count; ++a) anc.push_back(n + a);
    c.h(n - 1, label);
    mcx(c, controls, n - 1, anc, label);
    c.h(n - 1, label);
  }
  for (int q = 0; q < n; ++q) c.x(q, label);
  for (int q = 0; q < n; ++q) c.h(q, label);
  return c;
}

Circuit qpe(int n_count, double theta) {
  // Counting register on qubits 0..n_count-1, target (eigenstate |1> of
  // P(2*pi*theta)) on the last qubit.
  const std::string label = "qpe";
  Circuit c(n_count + 1);
  const int target = n_count;
  c.x(target, label);
  for (int j = 0; j < n_count; ++j) c.h(j, label);
  for (int j = 0; j < n_count; ++j) {
    double angle = 2 * kPi * theta * std::pow(2.0, j);
    c.cp(angle, j, target, label);
  }
  Circuit iqft = qft(n_count).inverse();
  for (const auto& op : iqft.ops()) {
    GateOp shifted = op;
    shifted.span.origin = label;
    c.add(std::move(shifted));  // counting qubits already occupy 0..n_count-1
  }
  return c;
}

Circuit cluster_1d(int n) {
  Circuit c(n);
  for (int q = 0; q < n; ++q) c.h(q, "cluster1d");
  for (int q = 0; q + 1 < n; ++q) c.cz(q, q + 1, "cluster1d");
  return c;
}

StateVector uniform_product(int n, cdouble zero_amp, cdouble one_amp) {
  std::vector<cdouble> amps(std::uint64_t{1} << n);
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    cdouble a{1, 0};
    for (int q = 0; q < n; ++q)
      a *= (i >> q) & 1 ? one_amp : zero_amp;
    amps[i] = a;
  }
  return StateVector(n, std::move(amps));
}

}  // namespace

Circuit build_subroutine(const SubroutineSpec& spec) {
  switch (spec.kind) {
    case SubroutineKind::FullAdder:
      return full_adder();
    case SubroutineKind::Diffusion:
      check(spec.n >= 1, "diffusion needs n >= 1");
      return diffusion(spec.n);
    case SubroutineKind::WState:
      check(spec.n >= 2, "w state needs n >= 2");
      return w_state(spec.n);
    case SubroutineKind::GHZ:
      check(spec.n >= 1, "ghz needs n >= 1");
      return ghz(spec.n);
    case SubroutineKind::Dicke:
      check(spec.n >= 1 && spec.k >= 1 && spec.k <= spec.n,
            "dicke needs 1 <= k <= n");
      return dicke(spec.n, spec.k);
    case SubroutineKind::QFT:
      check(spec.n >= 1, "qft needs n >= 1");
      return qft(spec.n);
    case SubroutineKind::QPE:
      check(spec.n >= 1, "qpe needs at least one counting qubit");
      return qpe(spec.n, spec.theta);
    case SubroutineKind::Cluster1D:
      check(spec.n >= 1, "cluster1d needs n >= 1");
      return cluster_1d(spec.n);
  }
  throw CircuitError("unknown subroutine kind");
}

StateVector make_periodic_state(int num_qubits, int period, int shift) {
  check(num_qubits >= 1, "periodic state needs n >= 1");
  check(period >= 1, "period must be positive");
  check(shift >= 0 && shift < period, "shift must satisfy 0 <= l < r");
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  std::vector<cdouble> amps(dim, cdouble{0, 0});
  std::uint64_t support = 0;
  for (std::uint64_t i = 0; i < dim; ++i) {
    if ((static_cast<std::int64_t>(i) - shift) % period == 0) ++support;
  }
  const double amp = 1.0 / std::sqrt(static_cast<double>(support));
  for (std::uint64_t i = 0; i < dim; ++i) {
    if ((static_cast<std::int64_t>(i) - shift) % period == 0) amps[i] = amp;
  }
  return StateVector(num_qubits, std::move(amps));
}

std::vector<GeneratedCase> generate_test_cases(const SubroutineSpec& spec) {
  Circuit reference = build_subroutine(spec);
  const int n = reference.num_qubits();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const cdouble i{0, 1};

  std::vector<std::pair<std::string, StateVector>> inputs;
  inputs.emplace_back("test 0", StateVector::basis(n, 0));
  inputs.emplace_back("test 1", StateVector::basis(n, (std::uint64_t{1} << n) - 1));
  inputs.emplace_back("test +", uniform_product(n, inv_sqrt2, inv_sqrt2));
  inputs.emplace_back("test -", uniform_product(n, inv_sqrt2, -inv_sqrt2));
  inputs.emplace_back("test i", uniform_product(n, inv_sqrt2, i * inv_sqrt2));
  inputs.emplace_back("test -i", uniform_product(n, inv_sqrt2, -i * inv_sqrt2));

  std::vector<GeneratedCase> cases;
  for (auto& [name, input] : inputs) {
    StateVector expected = run(reference, input);
    cases.push_back(GeneratedCase{name, std::move(input), std::move(expected)});
  }
  return cases;
}

SubroutineSpec parse_subroutine_name(const std::string& name, int n, int k,
                                     double theta) {
  SubroutineSpec spec;
  spec.n = n;
  spec.k = k;
  spec.theta = theta;
  if (name == "full-adder" || name == "adder") {
    spec.kind = SubroutineKind::FullAdder;
  } else if (name == "diffusion") {
    spec.kind = SubroutineKind::Diffusion;
  } else if (name == "w") {
    spec.kind = SubroutineKind::WState;
  } else if (name == "ghz") {
    spec.kind = SubroutineKind::GHZ;
  } else if (name == "dicke") {
    spec.kind = SubroutineKind::Dicke;
  } else if (name == "qft") {
    spec.kind = SubroutineKind::QFT;
  } else if (name == "qpe") {
    spec.kind = SubroutineKind::QPE;
  } else if (name == "cluster1d") {
    spec.kind = SubroutineKind::Cluster1D;
  } else {
    throw CircuitError("unknown subroutine '" + name + "'");
  }
  return spec;
}

}  // namespace qforge
