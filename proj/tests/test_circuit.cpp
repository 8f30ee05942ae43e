#include "shuttle/circuit.hpp"
#include "shuttle/unitary.hpp"

#include <gtest/gtest.h>

#include <complex>
#include <numbers>
#include <vector>

using namespace shuttle;
using std::numbers::pi;

namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

CMatrix literal(std::size_t dim, std::initializer_list<cplx> entries) {
  CMatrix m(dim);
  std::size_t k = 0;
  for (auto e : entries) {
    m(k / dim, k % dim) = e;
    ++k;
  }
  return m;
}

// Textbook matrices, written out by hand. Qubit 0 is the most significant bit.
CMatrix reference(const Gate& g) {
  const double s2 = 1.0 / std::sqrt(2.0);
  const double t = g.angle.value_or(0.0);
  switch (g.kind) {
  case GateKind::X: return literal(2, {0, 1, 1, 0});
  case GateKind::Y: return literal(2, {0, -I, I, 0});
  case GateKind::Z: return literal(2, {1, 0, 0, -1});
  case GateKind::H: return literal(2, {s2, s2, s2, -s2});
  case GateKind::S: return literal(2, {1, 0, 0, I});
  case GateKind::Sdg: return literal(2, {1, 0, 0, -I});
  case GateKind::T: return literal(2, {1, 0, 0, std::exp(I * pi / 4.0)});
  case GateKind::Tdg: return literal(2, {1, 0, 0, std::exp(-I * pi / 4.0)});
  case GateKind::RX:
    return literal(2, {std::cos(t / 2), -I * std::sin(t / 2), -I * std::sin(t / 2), std::cos(t / 2)});
  case GateKind::RY:
    return literal(2, {std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2)});
  case GateKind::RZ: return literal(2, {std::exp(-I * t / 2.0), 0, 0, std::exp(I * t / 2.0)});
  case GateKind::CZ: return literal(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1});
  case GateKind::CX:
    if (g.qubits[0] == 0) {
      return literal(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0});
    }
    return literal(4, {1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0});
  case GateKind::SWAP: return literal(4, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1});
  default: break;
  }
  throw std::logic_error("no reference matrix");
}

std::vector<Gate> every_kind() {
  std::vector<Gate> gs;
  for (auto k : {GateKind::X, GateKind::Y, GateKind::Z, GateKind::H, GateKind::S, GateKind::Sdg,
                 GateKind::T, GateKind::Tdg}) {
    gs.push_back(make_gate(k, 0));
  }
  for (auto k : {GateKind::RX, GateKind::RY, GateKind::RZ}) {
    for (double t : {0.0, 0.3, pi / 2, -1.7, pi, 2.9, 5.5}) {
      gs.push_back(make_rotation(k, t, 0));
    }
  }
  gs.push_back(make_gate(GateKind::CZ, 0, 1));
  gs.push_back(make_gate(GateKind::CX, 0, 1));
  gs.push_back(make_gate(GateKind::CX, 1, 0));
  gs.push_back(make_gate(GateKind::SWAP, 0, 1));
  return gs;
}

} // namespace

TEST(Unitary, PrimitiveMatricesMatchTextbook) {
  for (const auto& g : every_kind()) {
    const std::size_t n = g.qubits.size();
    const std::vector<Gate> one{g};
    EXPECT_LT(distance_up_to_phase(unitary_of(one, n), reference(g)), 1e-12) << to_string(g.kind);
  }
}

TEST(Unitary, PhaseDistanceDetectsRealDifferences) {
  const auto x = reference(make_gate(GateKind::X, 0));
  const auto z = reference(make_gate(GateKind::Z, 0));
  CMatrix phased(2);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) phased(r, c) = x(r, c) * std::exp(I * 0.7);
  EXPECT_LT(distance_up_to_phase(phased, x), 1e-15);
  EXPECT_GT(distance_up_to_phase(z, x), 0.5);
}

TEST(Unitary, RejectsUnsupportedInputs) {
  const std::vector<Gate> m{make_gate(GateKind::MEASURE, 0)};
  EXPECT_THROW(unitary_of(m, 1), std::invalid_argument);
  EXPECT_THROW(unitary_of({}, 3), std::invalid_argument);
}

TEST(Decompose, EveryKindIsEquivalentUpToGlobalPhase) {
  for (const auto& g : every_kind()) {
    const std::size_t n = g.qubits.size();
    const auto native = decompose(Circuit(n, {g}));
    ASSERT_TRUE(native.is_native());
    EXPECT_LT(distance_up_to_phase(unitary_of(native.gates, n), reference(g)), 1e-9)
        << to_string(g.kind) << " angle " << g.angle.value_or(0.0);
  }
}

TEST(Decompose, GateCounts) {
  auto count = [](Gate g) { return decompose(Circuit(2, {std::move(g)})).gates.size(); };
  EXPECT_EQ(count(make_gate(GateKind::CX, 0, 1)), 3u);
  EXPECT_EQ(count(make_gate(GateKind::SWAP, 0, 1)), 9u);
  EXPECT_EQ(count(make_rotation(GateKind::RY, 0.4, 1)), 3u);
  EXPECT_EQ(count(make_gate(GateKind::T, 1)), 1u);
  EXPECT_EQ(count(make_gate(GateKind::H, 0)), 1u);
}

TEST(Decompose, RyUsesConjugatedRx) {
  const auto c = decompose(Circuit(1, {make_rotation(GateKind::RY, 0.8, 0)}));
  ASSERT_EQ(c.gates.size(), 3u);
  EXPECT_EQ(c.gates[0], make_rotation(GateKind::RZ, -pi / 2, 0));
  EXPECT_EQ(c.gates[1], make_rotation(GateKind::RX, 0.8, 0));
  EXPECT_EQ(c.gates[2], make_rotation(GateKind::RZ, pi / 2, 0));
}

TEST(Decompose, MeasurementsStrippedUnlessKept) {
  Circuit c(2);
  c.add(make_gate(GateKind::H, 0)).add(make_gate(GateKind::MEASURE, 0));
  EXPECT_EQ(decompose(c).gates.size(), 1u);
  const auto kept = decompose(c, {.keep_measurements = true});
  ASSERT_EQ(kept.gates.size(), 2u);
  EXPECT_EQ(kept.gates[1].kind, GateKind::MEASURE);
}

TEST(Decompose, EmptyCircuit) {
  const auto c = decompose(Circuit(3));
  EXPECT_EQ(c.num_qubits, 3u);
  EXPECT_TRUE(c.gates.empty());
  EXPECT_EQ(slice(c).depth(), 0u);
}

TEST(CheckGate, RejectsMalformedGates) {
  EXPECT_THROW(Circuit(2).add(make_gate(GateKind::CZ, 0, 0)), CircuitError);
  EXPECT_THROW(Circuit(2).add(make_gate(GateKind::H, 2)), CircuitError);
  EXPECT_THROW(Circuit(2).add(Gate{GateKind::RX, {0}, {}}), CircuitError);
  EXPECT_THROW(Circuit(2).add(Gate{GateKind::H, {0}, 1.0}), CircuitError);
  EXPECT_THROW(Circuit(2).add(make_rotation(GateKind::RZ, std::nan(""), 0)), CircuitError);
  EXPECT_THROW(Circuit(2).add(Gate{GateKind::CZ, {0}, {}}), CircuitError);
  EXPECT_THROW(Circuit(2).add(Gate{GateKind::BARRIER, {}, {}}), CircuitError);
  EXPECT_NO_THROW(Circuit(3).add(Gate{GateKind::BARRIER, {0, 1, 2}, {}}));
}

TEST(Slice, AsapLayers) {
  Circuit c(4);
  c.add(make_gate(GateKind::H, 0))
      .add(make_gate(GateKind::H, 1))
      .add(make_gate(GateKind::CZ, 0, 1))
      .add(make_gate(GateKind::H, 3))
      .add(make_gate(GateKind::CZ, 1, 2))
      .add(make_gate(GateKind::H, 3));
  const auto sc = slice(c);
  ASSERT_EQ(sc.depth(), 3u);
  EXPECT_EQ(sc.layers[0], (std::vector<std::size_t>{0, 1, 3}));
  EXPECT_EQ(sc.layers[1], (std::vector<std::size_t>{2, 5}));
  EXPECT_EQ(sc.layers[2], (std::vector<std::size_t>{4}));
}

TEST(Slice, LayersHoldDisjointQubitsAndPreserveOrder) {
  Circuit c(3);
  c.add(make_gate(GateKind::CZ, 0, 1))
      .add(make_gate(GateKind::CZ, 1, 2))
      .add(make_gate(GateKind::H, 0))
      .add(make_gate(GateKind::CZ, 0, 2));
  const auto sc = slice(c);
  std::vector<std::size_t> layer_of(c.gates.size());
  for (std::size_t l = 0; l < sc.depth(); ++l) {
    std::vector<int> used(3, 0);
    for (auto gi : sc.layers[l]) {
      layer_of[gi] = l;
      for (auto q : sc.circuit.gates[gi].qubits) EXPECT_EQ(used[q]++, 0);
    }
  }
  EXPECT_LT(layer_of[0], layer_of[1]);
  EXPECT_LT(layer_of[0], layer_of[2]);
  EXPECT_LT(layer_of[1], layer_of[3]);
  EXPECT_LT(layer_of[2], layer_of[3]);
}

TEST(Slice, BarrierIsAFence) {
  Circuit c(2);
  c.add(make_gate(GateKind::H, 0))
      .add(make_gate(GateKind::H, 0))
      .add(Gate{GateKind::BARRIER, {0, 1}, {}})
      .add(make_gate(GateKind::H, 1));
  const auto sc = slice(c);
  EXPECT_EQ(sc.circuit.gates.size(), 3u);
  ASSERT_EQ(sc.depth(), 3u);
  EXPECT_EQ(sc.layers[2], (std::vector<std::size_t>{2}));
}

TEST(Slice, RejectsNonNativeGates) {
  Circuit c(2, {make_gate(GateKind::CX, 0, 1)});
  EXPECT_THROW(slice(c), CircuitError);
}
