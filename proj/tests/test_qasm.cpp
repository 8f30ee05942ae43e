#include "shuttle/qasm.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace shuttle;
using std::numbers::pi;

TEST(Qasm, ParsesBellPair) {
  const auto c = parse_qasm(R"(OPENQASM 2.0;
include "qelib1.inc";
qreg q[2];
creg c[2];
h q[0];
cx q[0],q[1];
measure q[0] -> c[0];
measure q[1] -> c[1];
)");
  EXPECT_EQ(c.num_qubits, 2u);
  ASSERT_EQ(c.gates.size(), 4u);
  EXPECT_EQ(c.gates[0], make_gate(GateKind::H, 0));
  EXPECT_EQ(c.gates[1], make_gate(GateKind::CX, 0, 1));
  EXPECT_EQ(c.gates[2], make_gate(GateKind::MEASURE, 0));
  EXPECT_EQ(c.gates[3], make_gate(GateKind::MEASURE, 1));
}

TEST(Qasm, AngleExpressions) {
  const auto c = parse_qasm(R"(OPENQASM 2.0;
qreg q[1];
rz(pi/4) q[0];
rx(-pi/2) q[0];
ry(2*pi/3 - 0.5) q[0];
rz(-(1+2)*0.25) q[0];
rz(1.5e-1) q[0];
)");
  ASSERT_EQ(c.gates.size(), 5u);
  EXPECT_DOUBLE_EQ(*c.gates[0].angle, pi / 4);
  EXPECT_DOUBLE_EQ(*c.gates[1].angle, -pi / 2);
  EXPECT_DOUBLE_EQ(*c.gates[2].angle, 2 * pi / 3 - 0.5);
  EXPECT_DOUBLE_EQ(*c.gates[3].angle, -0.75);
  EXPECT_DOUBLE_EQ(*c.gates[4].angle, 0.15);
}

TEST(Qasm, RegisterBroadcast) {
  const auto c = parse_qasm("OPENQASM 2.0;\nqreg q[3];\ncreg c[3];\nh q;\nmeasure q -> c;\n");
  ASSERT_EQ(c.gates.size(), 6u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(c.gates[i], make_gate(GateKind::H, i));
    EXPECT_EQ(c.gates[3 + i], make_gate(GateKind::MEASURE, i));
  }
}

TEST(Qasm, BarrierAndComments) {
  const auto c = parse_qasm(R"(OPENQASM 2.0;
// a comment
qreg q[3];
x q[0]; // trailing
barrier q[0],q[2];
barrier q;
)");
  ASSERT_EQ(c.gates.size(), 3u);
  EXPECT_EQ(c.gates[1].kind, GateKind::BARRIER);
  EXPECT_EQ(c.gates[1].qubits, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(c.gates[2].qubits, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Qasm, ErrorsCarryPosition) {
  try {
    parse_qasm("OPENQASM 2.0;\nqreg q[2];\nh q[0]\ncx q[0],q[1];\n");
    FAIL() << "expected a parse error";
  } catch (const QasmError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(Qasm, RejectsOutOfRangeIndex) {
  try {
    parse_qasm("OPENQASM 2.0;\nqreg q[2];\nh q[2];\n");
    FAIL() << "expected a parse error";
  } catch (const QasmError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("out of range"), std::string::npos);
  }
}

TEST(Qasm, UnsupportedConstructs) {
  EXPECT_THROW(parse_qasm("OPENQASM 2.0;\nqreg q[3];\ncswap q[0],q[1],q[2];\n"), QasmUnsupported);
  EXPECT_THROW(parse_qasm("OPENQASM 2.0;\nqreg q[1];\ngate foo a { h a; }\n"), QasmUnsupported);
  EXPECT_THROW(parse_qasm("OPENQASM 2.0;\nqreg q[1];\ncreg c[1];\nif(c==1) x q[0];\n"),
               QasmUnsupported);
  EXPECT_THROW(parse_qasm("OPENQASM 2.0;\nqreg q[1];\nreset q[0];\n"), QasmUnsupported);
  EXPECT_THROW(parse_qasm("OPENQASM 3.0;\nqubit[2] q;\n"), QasmUnsupported);
  EXPECT_THROW(parse_qasm("OPENQASM 2.0;\nqreg a[1];\nqreg b[1];\n"), QasmUnsupported);
}

TEST(Qasm, SemanticErrors) {
  EXPECT_THROW(parse_qasm("OPENQASM 2.0;\nh q[0];\n"), QasmError);
  EXPECT_THROW(parse_qasm("OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[0];\n"), QasmError);
  EXPECT_THROW(parse_qasm("OPENQASM 2.0;\nqreg q[2];\nrx q[0];\n"), QasmError);
  EXPECT_THROW(parse_qasm("OPENQASM 2.0;\nqreg q[2];\nh(0.1) q[0];\n"), QasmError);
  EXPECT_THROW(parse_qasm("OPENQASM 2.0;\nqreg q[2];\ncx q[0];\n"), QasmError);
  EXPECT_THROW(parse_qasm("OPENQASM 2.0;\nqreg q[2];\nh r[0];\n"), QasmError);
  EXPECT_THROW(parse_qasm(""), QasmError);
}

TEST(Qasm, ExportRoundTrip) {
  Circuit c(3, {}, "rt");
  c.add(make_gate(GateKind::H, 0))
      .add(make_rotation(GateKind::RZ, 0.1 + 1e-13, 1))
      .add(make_rotation(GateKind::RY, -2.5, 2))
      .add(make_gate(GateKind::CX, 0, 2))
      .add(make_gate(GateKind::SWAP, 1, 2))
      .add(make_gate(GateKind::Sdg, 1))
      .add(Gate{GateKind::BARRIER, {0, 1}, {}})
      .add(make_gate(GateKind::MEASURE, 2));
  const auto back = parse_qasm(export_qasm(c));
  EXPECT_EQ(back.num_qubits, c.num_qubits);
  EXPECT_EQ(back.gates, c.gates);
  EXPECT_EQ(export_qasm(back), export_qasm(c));
}
