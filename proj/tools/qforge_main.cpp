// qforge command-line front end: slice, test, categorize, locate, count,
// generate, swap-test, inject, and Q-sphere export over QASM files.

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "qforge/analysis.hpp"
#include "qforge/circuit.hpp"
#include "qforge/qasm.hpp"
#include "qforge/statevector.hpp"
#include "qforge/subroutines.hpp"
#include "qforge/testkit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("QFORGE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      // fall through to 0
    }
  }
  return 0;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

qforge::Circuit load_circuit(const std::string& path) {
  return qforge::parse_qasm(read_file(path), path);
}

std::vector<int> parse_qubit_list(const std::string& arg) {
  std::vector<int> qubits;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) qubits.push_back(std::stoi(item));
  }
  return qubits;
}

struct CountExpectation {
  qforge::GateStats expected;
};

// "--expect qft:n" currently; an n-qubit transform carries n Hadamards,
// n(n-1)/2 controlled phases and floor(n/2) swaps.
CountExpectation parse_expectation(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::runtime_error("expectation must look like qft:<n>");
  std::string kind = spec.substr(0, colon);
  int n = std::stoi(spec.substr(colon + 1));
  if (kind != "qft" || n < 1)
    throw std::runtime_error("unsupported expectation '" + spec + "'");
  CountExpectation e;
  e.expected[qforge::GateKind::H] = n;
  if (n >= 2) e.expected[qforge::GateKind::CP] = static_cast<std::size_t>(n) * (n - 1) / 2;
  if (n >= 2) e.expected[qforge::GateKind::Swap] = n / 2;
  return e;
}

int cmd_slice(const std::string& file, const std::string& mode_name,
              bool strip_idle, std::string outdir) {
  qforge::Circuit circuit = load_circuit(file);
  qforge::SliceMode mode = mode_name == "accumulated"
                               ? qforge::SliceMode::Accumulated
                               : qforge::SliceMode::Standalone;
  qforge::SliceSet set = qforge::vslice(circuit, mode);

  fs::path input(file);
  fs::path dir = outdir.empty() ? input.parent_path() : fs::path(outdir);
  if (!dir.empty()) fs::create_directories(dir);
  std::string stem = input.stem().string();

  json manifest;
  manifest["source"] = file;
  manifest["mode"] = mode_name;
  manifest["cut_positions"] = set.cut_positions;
  json slices = json::array();

  for (std::size_t k = 0; k < set.slices.size(); ++k) {
    const qforge::Circuit* slice = &set.slices[k];
    std::optional<qforge::WireReduction> reduction;
    json js;
    js["index"] = k;
    if (strip_idle) {
      reduction = qforge::hslice(*slice);
      js["removed_qubits"] = reduction->removed_qubits;
      js["kept_qubits"] = reduction->kept_qubits;
      slice = &reduction->reduced;
    }
    fs::path out = dir / (stem + ".slice" + std::to_string(k) + ".qasm");
    write_file(out.string(), qforge::serialize_qasm(*slice));
    js["file"] = out.string();
    js["num_qubits"] = slice->num_qubits();
    js["num_ops"] = slice->ops().size();
    slices.push_back(js);
    std::cout << "wrote " << out.string() << "\n";
  }
  manifest["slices"] = slices;
  fs::path mpath = dir / (stem + ".manifest.json");
  write_file(mpath.string(), manifest.dump(2));
  std::cout << "wrote " << mpath.string() << "\n";
  return kExitOk;
}

int cmd_test(const std::string& file, const std::string& vectors,
             const std::string& mode, double tolerance, bool json_out) {
  qforge::Circuit circuit = load_circuit(file);
  std::vector<qforge::TestCase> cases = qforge::load_test_cases_json(read_file(vectors));
  qforge::TestReport report = mode == "pclass"
                                  ? qforge::run_bit_tests(circuit, cases)
                                  : qforge::run_state_tests(circuit, cases, tolerance);
  std::cout << (json_out ? qforge::render_report_json(report)
                         : qforge::render_report_text(report));
  if (json_out) std::cout << "\n";
  return report.all_passed() ? kExitOk : kExitFail;
}

int cmd_categorize(const std::string& file, int max_unitary_qubits, bool json_out) {
  qforge::Circuit circuit = load_circuit(file);
  qforge::BlockCategory cat = qforge::categorize(circuit, max_unitary_qubits);
  if (json_out) {
    json doc{{"verdict", std::string(qforge::verdict_name(cat.verdict))},
             {"method", cat.method},
             {"monomial", cat.monomial_flag},
             {"notes", cat.notes}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << qforge::verdict_name(cat.verdict) << " (" << cat.method << ": "
              << cat.notes << ")\n";
  }
  return kExitOk;
}

int cmd_locate(const std::string& file, const std::string& gate,
               const std::string& qubits_arg, bool json_out) {
  qforge::Circuit circuit = load_circuit(file);
  auto kind = qforge::kind_from_name(gate);
  if (!kind) throw std::runtime_error("unknown gate '" + gate + "'");
  std::vector<int> qubits =
      qubits_arg.empty() ? std::vector<int>{} : parse_qubit_list(qubits_arg);
  auto hits = circuit.locate(*kind, qubits);
  if (json_out) {
    json arr = json::array();
    for (const auto& [index, span] : hits) {
      arr.push_back({{"op_index", index},
                     {"origin", span.origin},
                     {"line", span.line},
                     {"column", span.column}});
    }
    std::cout << json{{"gate", gate}, {"occurrences", arr}}.dump(2) << "\n";
  } else {
    std::cout << gate << ": " << hits.size() << " occurrence(s)\n";
    for (const auto& [index, span] : hits) {
      std::cout << "  op " << index << " at " << span.origin << ":" << span.line
                << ":" << span.column << "\n";
    }
  }
  return kExitOk;
}

std::string gate_display_name(qforge::GateKind kind) {
  std::string name(qforge::kind_name(kind));
  for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return name;
}

int cmd_counts(const std::string& file, const std::string& expect, bool json_out) {
  qforge::Circuit circuit = load_circuit(file);
  qforge::GateStats stats = circuit.count_ops();

  json jstats;
  for (const auto& [kind, count] : stats)
    jstats[std::string(qforge::kind_name(kind))] = count;

  bool ok = true;
  json mismatches = json::array();
  std::ostringstream text;
  if (!expect.empty()) {
    CountExpectation expectation = parse_expectation(expect);
    for (const auto& [kind, want] : expectation.expected) {
      std::size_t have = stats.count(kind) ? stats.at(kind) : 0;
      if (have != want) {
        ok = false;
        mismatches.push_back({{"gate", std::string(qforge::kind_name(kind))},
                              {"expected", want},
                              {"found", have}});
        text << gate_display_name(kind) << ": expected " << want << ", found "
             << have << "\n";
      }
    }
  }

  if (json_out) {
    json doc{{"counts", jstats}, {"ok", ok}};
    if (!expect.empty()) doc["mismatches"] = mismatches;
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ostringstream counts;
    counts << "{";
    bool first = true;
    for (const auto& [kind, count] : stats) {
      if (!first) counts << ", ";
      first = false;
      counts << gate_display_name(kind) << ":" << count;
    }
    counts << "}";
    if (expect.empty()) {
      std::cout << counts.str() << "\n";
    } else if (ok) {
      std::cout << "OK " << counts.str() << "\n";
    } else {
      std::cout << "MISMATCH " << counts.str() << "\n" << text.str();
    }
  }
  return ok ? kExitOk : kExitFail;
}

int cmd_gen_tests(const std::string& kind, int qubits, int hamming, double theta,
                  const std::string& out) {
  qforge::SubroutineSpec spec =
      qforge::parse_subroutine_name(kind, qubits, hamming, theta);
  auto generated = qforge::generate_test_cases(spec);
  std::vector<qforge::TestCase> cases;
  for (auto& g : generated)
    cases.push_back(qforge::TestCase{g.name, g.input, g.expected});
  std::string text = qforge::save_test_cases_json(cases);
  if (out.empty()) {
    std::cout << text << "\n";
  } else {
    write_file(out, text);
    std::cout << "wrote " << out << "\n";
  }
  return kExitOk;
}

int cmd_swap_test(const std::string& file_a, const std::string& file_b,
                  std::uint64_t shots, std::uint64_t seed, bool json_out) {
  qforge::Circuit a = load_circuit(file_a);
  qforge::Circuit b = load_circuit(file_b);
  qforge::SwapTestResult r = qforge::swap_test(a, b, shots, seed);
  if (json_out) {
    json doc{{"shots", r.shots},     {"seed", r.seed},
             {"ones_count", r.ones_count}, {"s", r.s},
             {"delta_theta", r.delta_theta}, {"stderr_s", r.stderr_s}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "shots = " << r.shots << " (seed " << r.seed << ")\n"
              << "B (ones) = " << r.ones_count << "\n"
              << "s = " << r.s << " +/- " << r.stderr_s << "\n"
              << "delta_theta = " << r.delta_theta << " rad\n";
  }
  return kExitOk;
}

int cmd_inject(const std::string& file, const std::string& bug,
               std::optional<std::size_t> at, const std::string& gate,
               const std::string& qubits_arg, double angle, std::uint64_t seed,
               const std::string& out) {
  qforge::Circuit circuit = load_circuit(file);
  qforge::Mutation m;
  m.op_index = at;
  m.angle = angle;
  m.seed = seed;
  if (!qubits_arg.empty()) m.qubits = parse_qubit_list(qubits_arg);
  if (!gate.empty()) {
    auto kind = qforge::kind_from_name(gate);
    if (!kind) throw std::runtime_error("unknown gate '" + gate + "'");
    m.gate = *kind;
  }
  if (bug == "extra-gate") {
    m.kind = qforge::MutationKind::ExtraGate;
  } else if (bug == "missing-gate") {
    m.kind = qforge::MutationKind::MissingGate;
  } else if (bug == "wrong-qubit") {
    m.kind = qforge::MutationKind::WrongQubit;
  } else if (bug == "wrong-order") {
    m.kind = qforge::MutationKind::WrongOrder;
  } else if (bug == "phase-shift") {
    m.kind = qforge::MutationKind::PhaseShift;
  } else if (bug == "skip-init") {
    m.kind = qforge::MutationKind::SkipInitialization;
  } else {
    throw std::runtime_error("unknown bug kind '" + bug + "'");
  }
  qforge::Circuit mutated = qforge::inject_bug(circuit, m);
  std::string text = qforge::serialize_qasm(mutated);
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
    std::cout << "wrote " << out << "\n";
  }
  return kExitOk;
}

int cmd_qsphere(const std::string& file, const std::string& out) {
  qforge::Circuit circuit = load_circuit(file);
  qforge::StateVector state =
      qforge::run(circuit, qforge::StateVector(circuit.num_qubits()));
  std::string text = qforge::qsphere_json(qforge::qsphere(state));
  if (out.empty()) {
    std::cout << text << "\n";
  } else {
    write_file(out, text);
    std::cout << "wrote " << out << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum circuit slicing, categorization and testing toolkit"};
  app.require_subcommand(1);

  std::string file, file_b, vectors, mode = "standalone", test_mode = "pclass";
  std::string gate, qubits_arg, expect, out, bug, kind;
  bool strip_idle = false, json_out = false;
  double tolerance = 1e-4, angle = 0, theta = 0;
  int max_unitary_qubits = 10, qubits_n = 1, hamming = 1;
  std::uint64_t shots = 8192;
  std::uint64_t seed = default_seed();
  std::optional<std::size_t> at;

  auto* slice = app.add_subcommand("slice", "split a circuit at break-barriers");
  slice->add_option("file", file)->required();
  slice->add_option("--mode", mode)->check(CLI::IsMember({"standalone", "accumulated"}));
  slice->add_flag("--strip-idle", strip_idle, "remove idle wires per slice");
  slice->add_option("-o,--outdir", out);

  auto* test = app.add_subcommand("test", "run test vectors against a circuit");
  test->add_option("file", file)->required();
  test->add_option("--vectors", vectors)->required();
  test->add_option("--mode", test_mode)->check(CLI::IsMember({"pclass", "fquant"}));
  test->add_option("--tolerance", tolerance);
  test->add_flag("--json", json_out);

  auto* cat = app.add_subcommand("categorize", "AP / PM / AR verdict");
  cat->add_option("file", file)->required();
  cat->add_option("--max-unitary-qubits", max_unitary_qubits);
  cat->add_flag("--json", json_out);

  auto* locate = app.add_subcommand("locate", "find gates and their source spans");
  locate->add_option("file", file)->required();
  locate->add_option("--gate", gate)->required();
  locate->add_option("--qubits", qubits_arg, "comma-separated flat indices");
  locate->add_flag("--json", json_out);

  auto* counts = app.add_subcommand("counts", "gate histogram, optionally checked");
  counts->add_option("file", file)->required();
  counts->add_option("--expect", expect, "expectation such as qft:4");
  counts->add_flag("--json", json_out);

  auto* gen = app.add_subcommand("gen-tests", "emit six-basis test vectors");
  gen->add_option("kind", kind)->required();
  gen->add_option("--qubits", qubits_n);
  gen->add_option("--hamming", hamming);
  gen->add_option("--theta", theta);
  gen->add_option("-o,--out", out);

  auto* swap = app.add_subcommand("swap-test", "swap-test two state preparations");
  swap->add_option("fileA", file)->required();
  swap->add_option("fileB", file_b)->required();
  swap->add_option("--shots", shots);
  swap->add_option("--seed", seed);
  swap->add_flag("--json", json_out);

  auto* inject = app.add_subcommand("inject", "apply a mutation to a circuit");
  inject->add_option("file", file)->required();
  inject->add_option("--bug", bug)->required();
  inject->add_option("--at", at);
  inject->add_option("--gate", gate);
  inject->add_option("--qubits", qubits_arg);
  inject->add_option("--angle", angle);
  inject->add_option("--seed", seed);
  inject->add_option("-o,--out", out);

  auto* qsph = app.add_subcommand("qsphere", "export the Q-sphere projection");
  qsph->add_option("file", file)->required();
  qsph->add_option("-o,--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (slice->parsed()) return cmd_slice(file, mode, strip_idle, out);
    if (test->parsed()) return cmd_test(file, vectors, test_mode, tolerance, json_out);
    if (cat->parsed()) return cmd_categorize(file, max_unitary_qubits, json_out);
    if (locate->parsed()) return cmd_locate(file, gate, qubits_arg, json_out);
    if (counts->parsed()) return cmd_counts(file, expect, json_out);
    if (gen->parsed()) return cmd_gen_tests(kind, qubits_n, hamming, theta, out);
    if (swap->parsed()) return cmd_swap_test(file, file_b, shots, seed, json_out);
    if (inject->parsed())
      return cmd_inject(file, bug, at, gate, qubits_arg, angle, seed, out);
    if (qsph->parsed()) return cmd_qsphere(file, out);
  } catch (const qforge::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
