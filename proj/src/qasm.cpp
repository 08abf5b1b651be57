#include <cmath>
#include <cstdio>
#include <numbers>
#include <regex>
#include <sstream>

#include "dqfe/cd_circuit.hpp"
#include "dqfe/error.hpp"

namespace dqfe {

namespace {

constexpr int kPiDenominators[] = {1, 2, 3, 4, 6, 8};

double pi_fraction(int numerator, int denominator) {
  return std::numbers::pi * numerator / denominator;
}

// Exact multiples p*pi/q print symbolically; everything else uses 17
// significant digits so the text round-trips bit-exactly.
std::string format_angle(double angle) {
  if (angle == 0.0) return "0";
  for (int q : kPiDenominators) {
    for (int p = -4 * q; p <= 4 * q; ++p) {
      if (p == 0 || pi_fraction(p, q) != angle) continue;
      std::string s = p < 0 ? "-" : "";
      const int a = std::abs(p);
      if (a != 1) s += std::to_string(a) + "*";
      s += "pi";
      if (q != 1) s += "/" + std::to_string(q);
      return s;
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", angle);
  return buf;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw IoError("qasm line " + std::to_string(line) + ": " + what);
}

double parse_angle(const std::string& text, std::size_t line) {
  static const std::regex pi_re(R"(^(-?)(?:(\d+)\*)?pi(?:/(\d+))?$)");
  std::smatch m;
  if (std::regex_match(text, m, pi_re)) {
    int p = m[2].matched ? std::stoi(m[2].str()) : 1;
    if (m[1].length() > 0) p = -p;
    const int q = m[3].matched ? std::stoi(m[3].str()) : 1;
    return pi_fraction(p, q);
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) parse_error(line, "bad angle '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    parse_error(line, "bad angle '" + text + "'");
  }
}

}  // namespace

std::string export_qasm(const QuantumCircuit& circuit) {
  validate_circuit(circuit);
  const std::size_t n = circuit.qubits;
  std::ostringstream os;
  os << "OPENQASM 3.0;\n";
  os << "include \"stdgates.inc\";\n";
  os << "gate rzz(theta) a, b { cx a, b; rz(theta) b; cx a, b; }\n";
  const char* prep = circuit.initial == InitialState::minus ? "prep_minus" : "prep_plus";
  if (circuit.initial == InitialState::minus) {
    os << "gate prep_minus a { x a; h a; }\n";
  } else {
    os << "gate prep_plus a { h a; }\n";
  }
  if (circuit.sample_id >= 0) os << "// sample " << circuit.sample_id << "\n";
  os << "qubit[" << n << "] q;\n";
  os << "bit[" << n << "] c;\n";
  for (std::size_t q = 0; q < n; ++q) os << prep << " q[" << q << "];\n";

  auto emit = [&](const Gate& g) {
    os << to_string(g.kind);
    if (g.kind != GateKind::H) os << '(' << format_angle(g.angle) << ')';
    os << " q[" << g.q0 << ']';
    if (is_two_qubit(g.kind)) os << ", q[" << g.q1 << ']';
    os << ";\n";
  };
  for (const Gate& g : circuit.gates) {
    if (g.kind == GateKind::RYZ) {
      for (const Gate& d : decompose_two_body(g)) emit(d);
    } else {
      emit(g);
    }
  }
  for (std::size_t q = 0; q < n; ++q) os << "c[" << q << "] = measure q[" << q << "];\n";
  return os.str();
}

QuantumCircuit parse_qasm(const std::string& text) {
  static const std::regex version_re(R"(^OPENQASM\s+3(\.0)?;$)");
  static const std::regex include_re(R"(^include\s+"[^"]+";$)");
  static const std::regex gate_def_re(R"(^gate\s+(\w+).*\{.*\}$)");
  static const std::regex qubit_re(R"(^qubit\[(\d+)\]\s+q;$)");
  static const std::regex bit_re(R"(^bit\[(\d+)\]\s+c;$)");
  static const std::regex prep_re(R"(^(prep_minus|prep_plus)\s+q\[(\d+)\];$)");
  static const std::regex one_re(R"(^(rx|ry)\(([^)]*)\)\s+q\[(\d+)\];$)");
  static const std::regex h_re(R"(^h\s+q\[(\d+)\];$)");
  static const std::regex two_re(R"(^rzz\(([^)]*)\)\s+q\[(\d+)\],\s*q\[(\d+)\];$)");
  static const std::regex measure_re(R"(^c\[(\d+)\]\s*=\s*measure\s+q\[(\d+)\];$)");

  QuantumCircuit circuit;
  bool have_version = false;
  bool have_qubits = false;
  std::size_t prepared = 0;
  std::vector<bool> measured;
  std::size_t line_no = 0;

  auto qubit = [&](const std::string& s, std::size_t line) {
    const std::size_t q = std::stoul(s);
    if (!have_qubits || q >= circuit.qubits) parse_error(line, "qubit index " + s + " out of range");
    return q;
  };

  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find("//"));
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    std::size_t b = 0;
    while (b < line.size() && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
    line = line.substr(b);
    if (line.empty()) continue;

    std::smatch m;
    if (!have_version) {
      if (!std::regex_match(line, version_re)) parse_error(line_no, "expected OPENQASM 3 header");
      have_version = true;
    } else if (std::regex_match(line, include_re) || std::regex_match(line, gate_def_re)) {
      continue;
    } else if (std::regex_match(line, m, qubit_re)) {
      circuit.qubits = std::stoul(m[1].str());
      have_qubits = true;
      measured.assign(circuit.qubits, false);
    } else if (std::regex_match(line, m, bit_re)) {
      if (!have_qubits || std::stoul(m[1].str()) != circuit.qubits)
        parse_error(line_no, "bit register must follow and match the qubit register");
    } else if (std::regex_match(line, m, prep_re)) {
      qubit(m[2].str(), line_no);
      circuit.initial = m[1].str() == "prep_minus" ? InitialState::minus : InitialState::plus;
      ++prepared;
    } else if (std::regex_match(line, m, one_re)) {
      const GateKind kind = m[1].str() == "rx" ? GateKind::RX : GateKind::RY;
      circuit.gates.push_back({kind, qubit(m[3].str(), line_no), 0, parse_angle(m[2].str(), line_no)});
    } else if (std::regex_match(line, m, h_re)) {
      circuit.gates.push_back({GateKind::H, qubit(m[1].str(), line_no), 0, 0.0});
    } else if (std::regex_match(line, m, two_re)) {
      const std::size_t a = qubit(m[2].str(), line_no);
      const std::size_t c = qubit(m[3].str(), line_no);
      if (a == c) parse_error(line_no, "two-qubit gate on a single qubit");
      circuit.gates.push_back({GateKind::RZZ, a, c, parse_angle(m[1].str(), line_no)});
    } else if (std::regex_match(line, m, measure_re)) {
      const std::size_t q = qubit(m[2].str(), line_no);
      if (std::stoul(m[1].str()) != q) parse_error(line_no, "measurement must target the matching bit");
      measured[q] = true;
    } else {
      parse_error(line_no, "unrecognised statement '" + line + "'");
    }
  }
  if (!have_version || !have_qubits) throw IoError("qasm: missing header or qubit register");
  if (prepared != circuit.qubits)
    throw IoError("qasm: initial-state preparation must cover every qubit");
  for (std::size_t q = 0; q < circuit.qubits; ++q)
    if (!measured[q]) throw IoError("qasm: qubit " + std::to_string(q) + " is never measured");
  return circuit;
}

}  // namespace dqfe
