#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <regex>
#include <sstream>

#include "dqfe/cd_circuit.hpp"
#include "dqfe/encoder.hpp"
#include "dqfe/error.hpp"
#include "dqfe/rng.hpp"
#include "dqfe/simulator.hpp"
#include "oracle/dense_oracle.hpp"

using namespace dqfe;
using dense_oracle::Matrix;

namespace {

IsingHamiltonian random_chain(std::size_t n, Rng& rng) {
  IsingHamiltonian h;
  for (std::size_t q = 0; q < n; ++q) h.fields.push_back(2.0 * rng.uniform() - 1.0);
  for (std::size_t q = 0; q + 1 < n; ++q) h.couplings.push_back({q, q + 1, rng.uniform()});
  return h;
}

Matrix product(const std::vector<Gate>& gates, std::size_t n) {
  Matrix u = Matrix::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (const auto& g : gates) u = dense_oracle::gate_matrix(g, n) * u;
  return u;
}

std::size_t count_matching(const std::string& text, const std::regex& re) {
  std::istringstream in(text);
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) count += std::regex_match(line, re);
  return count;
}

const std::regex kGateLine(R"(^(rx|ry|rzz|h)(\(.*\))? q\[\d+\](, q\[\d+\])?;$)");
const std::regex kMeasureLine(R"(^c\[\d+\] = measure q\[\d+\];$)");

}  // namespace

TEST(CdCircuit, ZeroImpulseHasZeroAngles) {
  Rng rng(1);
  const auto c = build_cd_circuit(random_chain(4, rng), {.theta = 0.0});
  ASSERT_EQ(c.gates.size(), 4U + 2U * 3U);
  for (const auto& g : c.gates) EXPECT_EQ(g.angle, 0.0);
}

TEST(CdCircuit, SingleQubitIsOneRotation) {
  const double phi = 0.3;
  IsingHamiltonian h{{1.0}, {}};
  const auto c = build_cd_circuit(h, {.theta = phi});
  ASSERT_EQ(c.gates.size(), 1U);
  EXPECT_EQ(c.gates[0].kind, GateKind::RY);
  // exp(-i phi Y) = RY(2 phi).
  const Matrix expected = (Matrix(2, 2) << 0, -phi, phi, 0).finished().exp();
  const Matrix y = dense_oracle::pauli('Y');
  const Matrix target = (std::complex<double>(0, -phi) * y).exp();
  EXPECT_LT((dense_oracle::gate_matrix(c.gates[0], 1) - target).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((expected - target).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(c.initial, InitialState::minus);
}

TEST(CdCircuit, TwoQubitChainGateOrder) {
  IsingHamiltonian h{{0.5, -0.3}, {{0, 1, 0.2}}};
  const auto c = build_cd_circuit(h, {.theta = 0.5});
  ASSERT_EQ(c.gates.size(), 4U);
  EXPECT_EQ(c.gates[0], (Gate{GateKind::RY, 0, 0, 0.5}));
  EXPECT_EQ(c.gates[1], (Gate{GateKind::RY, 1, 0, -0.3}));
  EXPECT_EQ(c.gates[2], (Gate{GateKind::RYZ, 0, 1, 0.2}));
  EXPECT_EQ(c.gates[3], (Gate{GateKind::RYZ, 1, 0, 0.2}));
}

TEST(CdCircuit, MinusSignStartsFromPlus) {
  IsingHamiltonian h{{0.5}, {}};
  EXPECT_EQ(build_cd_circuit(h, {}, TransverseSign::minus).initial, InitialState::plus);
}

TEST(CdCircuit, MatchesDenseGaugePotentialTerms) {
  // Each gate equals exp(-i theta c P) for its Pauli term P and coefficient c.
  Rng rng(2);
  const auto h = random_chain(3, rng);
  const double theta = 0.37;
  const auto c = build_cd_circuit(h, {.theta = theta});
  std::vector<Matrix> terms;
  for (std::size_t q = 0; q < 3; ++q) terms.push_back(h.fields[q] * dense_oracle::pauli_string({{q, 'Y'}}, 3));
  for (const auto& m : h.couplings) {
    terms.push_back(m.weight * dense_oracle::pauli_string({{m.i, 'Y'}, {m.j, 'Z'}}, 3));
    terms.push_back(m.weight * dense_oracle::pauli_string({{m.i, 'Z'}, {m.j, 'Y'}}, 3));
  }
  ASSERT_EQ(terms.size(), c.gates.size());
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const Matrix target = (std::complex<double>(0, -theta) * terms[k]).exp();
    EXPECT_LT((dense_oracle::gate_matrix(c.gates[k], 3) - target).cwiseAbs().maxCoeff(), 1e-12) << k;
  }
}

TEST(CdCircuit, RelabelingPermutesGateIndices) {
  Rng rng(3);
  const auto h = random_chain(4, rng);
  const std::vector<std::size_t> sigma{2, 0, 3, 1};
  IsingHamiltonian relabeled;
  relabeled.fields.assign(4, 0.0);
  for (std::size_t q = 0; q < 4; ++q) relabeled.fields[sigma[q]] = h.fields[q];
  for (const auto& m : h.couplings) relabeled.couplings.push_back({sigma[m.i], sigma[m.j], m.weight});
  const auto a = build_cd_circuit(h, {});
  const auto b = build_cd_circuit(relabeled, {});
  // Two-body gates keep their order; one-body gates are emitted per qubit.
  for (std::size_t q = 0; q < 4; ++q) EXPECT_EQ(b.gates[sigma[q]].angle, a.gates[q].angle);
  for (std::size_t k = 4; k < a.gates.size(); ++k) {
    EXPECT_EQ(b.gates[k].q0, sigma[a.gates[k].q0]);
    EXPECT_EQ(b.gates[k].q1, sigma[a.gates[k].q1]);
    EXPECT_EQ(b.gates[k].angle, a.gates[k].angle);
  }
}

TEST(CdCircuit, ValidationErrors) {
  EXPECT_THROW(validate_impulse({.theta = NAN}), ValidationError);
  EXPECT_THROW(validate_impulse({.lambda_eval = 1.0}), ValidationError);
  QuantumCircuit c{2, InitialState::minus, {{GateKind::RYZ, 0, 2, 0.1}}};
  EXPECT_THROW(validate_circuit(c), ValidationError);
  c.gates = {{GateKind::RZZ, 1, 1, 0.1}};
  EXPECT_THROW(validate_circuit(c), ValidationError);
  c.gates = {{GateKind::RX, 0, 0, INFINITY}};
  EXPECT_THROW(validate_circuit(c), ValidationError);
}

TEST(Decompose, ZeroAngleIsIdentity) {
  const auto gates = decompose_two_body({GateKind::RYZ, 0, 1, 0.0});
  EXPECT_LT((product(gates, 2) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Decompose, MatchesMatrixExponential) {
  Rng rng(4);
  std::vector<double> angles{std::numbers::pi / 7};
  for (int k = 0; k < 10; ++k) angles.push_back(8.0 * rng.uniform() - 4.0);
  for (double a : angles) {
    for (auto [q0, q1] : {std::pair<std::size_t, std::size_t>{0, 1}, {1, 0}}) {
      const auto gates = decompose_two_body({GateKind::RYZ, q0, q1, a});
      ASSERT_EQ(gates.size(), 3U);
      const Matrix yz = dense_oracle::pauli_string({{q0, 'Y'}, {q1, 'Z'}}, 2);
      const Matrix target = (std::complex<double>(0, -a / 2.0) * yz).exp();
      EXPECT_LT((product(gates, 2) - target).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
  EXPECT_THROW(decompose_two_body({GateKind::RY, 0, 0, 0.1}), ValidationError);
}

TEST(Decompose, DisjointPairsCommute) {
  const auto a = decompose_two_body({GateKind::RYZ, 0, 1, 0.4});
  const auto b = decompose_two_body({GateKind::RYZ, 3, 2, -1.1});
  const Matrix ua = product(a, 4);
  const Matrix ub = product(b, 4);
  EXPECT_LT((ua * ub - ub * ua).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Qasm, EmptyCircuit) {
  QuantumCircuit c{2, InitialState::minus, {}};
  const std::string text = export_qasm(c);
  EXPECT_EQ(count_matching(text, kGateLine), 0U);
  EXPECT_EQ(count_matching(text, kMeasureLine), 2U);
  EXPECT_NE(text.find("OPENQASM 3.0;"), std::string::npos);
  EXPECT_NE(text.find("qubit[2] q;"), std::string::npos);
}

TEST(Qasm, SymbolicPiAngles) {
  QuantumCircuit c{1, InitialState::minus, {{GateKind::RY, 0, 0, std::numbers::pi / 2}}};
  const std::string text = export_qasm(c);
  EXPECT_NE(text.find("ry(pi/2) q[0];\n"), std::string::npos);
  const auto m = text.find("ry(pi/2)");
  EXPECT_LT(m, text.find("measure"));
  EXPECT_EQ(count_matching(text, kGateLine), 1U);
}

TEST(Qasm, ChainLineCount) {
  Rng rng(5);
  const auto c = build_cd_circuit(random_chain(3, rng), {});
  const std::string text = export_qasm(c);
  EXPECT_EQ(count_matching(text, kGateLine), 3U + 2U * 2U * 3U);
  EXPECT_EQ(count_matching(text, kMeasureLine), 3U);
}

TEST(Qasm, RoundTripReproducesState) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng.below(5);
    const auto sign = trial % 2 ? TransverseSign::plus : TransverseSign::minus;
    auto c = build_cd_circuit(random_chain(n, rng), {.theta = rng.uniform()}, sign);
    c.sample_id = trial;
    const QuantumCircuit back = parse_qasm(export_qasm(c));
    EXPECT_EQ(back.qubits, c.qubits);
    EXPECT_EQ(back.initial, c.initial);
    EXPECT_EQ(back.gates.size(), n + 3 * 2 * (n - 1));
    const auto a = run(c);
    const auto b = run(back);
    for (std::size_t k = 0; k < a.dimension(); ++k) EXPECT_LT(std::abs(a[k] - b[k]), 1e-12);
  }
}

TEST(Qasm, ParseRejectsOutsideGrammar) {
  const std::string good = export_qasm(QuantumCircuit{1, InitialState::minus, {{GateKind::RY, 0, 0, 0.25}}});
  EXPECT_NO_THROW(parse_qasm(good));
  EXPECT_THROW(parse_qasm("OPENQASM 2.0;\n"), IoError);
  std::string bad = good;
  bad.replace(bad.find("ry(0.25)"), 8, "rz(0.25)");
  EXPECT_THROW(parse_qasm(bad), IoError);
  std::string unmeasured = good.substr(0, good.find("c[0] = measure"));
  EXPECT_THROW(parse_qasm(unmeasured), IoError);
  std::string out_of_range = good;
  out_of_range.replace(out_of_range.find("ry(0.25) q[0]"), 13, "ry(0.25) q[3]");
  EXPECT_THROW(parse_qasm(out_of_range), IoError);
}
