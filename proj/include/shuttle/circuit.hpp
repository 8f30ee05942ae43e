#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shuttle {

enum class GateKind {
  // native basis
  RX,
  RZ,
  H,
  CZ,
  // extended
  X,
  Y,
  Z,
  S,
  Sdg,
  T,
  Tdg,
  RY,
  CX,
  SWAP,
  MEASURE,
  BARRIER,
};

inline constexpr bool is_native(GateKind k) {
  return k == GateKind::RX || k == GateKind::RZ || k == GateKind::H ||
         k == GateKind::CZ;
}

inline constexpr bool is_rotation(GateKind k) {
  return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ;
}

inline constexpr bool is_two_qubit(GateKind k) {
  return k == GateKind::CZ || k == GateKind::CX || k == GateKind::SWAP;
}

inline constexpr std::string_view to_string(GateKind k) {
  switch (k) {
  case GateKind::RX: return "rx";
  case GateKind::RZ: return "rz";
  case GateKind::H: return "h";
  case GateKind::CZ: return "cz";
  case GateKind::X: return "x";
  case GateKind::Y: return "y";
  case GateKind::Z: return "z";
  case GateKind::S: return "s";
  case GateKind::Sdg: return "sdg";
  case GateKind::T: return "t";
  case GateKind::Tdg: return "tdg";
  case GateKind::RY: return "ry";
  case GateKind::CX: return "cx";
  case GateKind::SWAP: return "swap";
  case GateKind::MEASURE: return "measure";
  case GateKind::BARRIER: return "barrier";
  }
  return "?";
}

/// A gate over virtual qubits. Barriers may span any number of qubits; every
/// other kind acts on one or two.
struct Gate {
  GateKind kind{};
  std::vector<std::size_t> qubits;
  std::optional<double> angle;

  bool operator==(const Gate&) const = default;
};

inline Gate make_gate(GateKind kind, std::size_t q) { return {kind, {q}, {}}; }
inline Gate make_gate(GateKind kind, std::size_t a, std::size_t b) {
  return {kind, {a, b}, {}};
}
inline Gate make_rotation(GateKind kind, double theta, std::size_t q) {
  return {kind, {q}, theta};
}

class CircuitError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Throws CircuitError if `g` is malformed for a register of `num_qubits`.
inline void check_gate(const Gate& g, std::size_t num_qubits) {
  const auto name = std::string(to_string(g.kind));
  if (g.kind == GateKind::BARRIER) {
    if (g.qubits.empty()) {
      throw CircuitError("barrier without operands");
    }
  } else {
    const std::size_t arity = is_two_qubit(g.kind) ? 2 : 1;
    if (g.qubits.size() != arity) {
      throw CircuitError(name + " expects " + std::to_string(arity) +
                         " operand(s)");
    }
  }
  if (is_rotation(g.kind) != g.angle.has_value()) {
    throw CircuitError(name + (g.angle ? " takes no angle" : " requires an angle"));
  }
  if (g.angle && !std::isfinite(*g.angle)) {
    throw CircuitError(name + " angle is not finite");
  }
  for (std::size_t i = 0; i < g.qubits.size(); ++i) {
    if (g.qubits[i] >= num_qubits) {
      throw CircuitError(name + " operand q[" + std::to_string(g.qubits[i]) +
                         "] out of range");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (g.qubits[i] == g.qubits[j]) {
        throw CircuitError(name + " operands are not distinct");
      }
    }
  }
}

struct Circuit {
  std::size_t num_qubits = 0;
  std::vector<Gate> gates;
  std::string name;

  Circuit() = default;
  Circuit(std::size_t n, std::vector<Gate> g = {}, std::string label = {})
      : num_qubits(n), gates(std::move(g)), name(std::move(label)) {
    for (const auto& gate : gates) {
      check_gate(gate, num_qubits);
    }
  }

  Circuit& add(Gate g) {
    check_gate(g, num_qubits);
    gates.push_back(std::move(g));
    return *this;
  }

  bool is_native() const {
    for (const auto& g : gates) {
      if (!shuttle::is_native(g.kind)) {
        return false;
      }
    }
    return true;
  }

  bool operator==(const Circuit&) const = default;
};

struct DecomposeOptions {
  /// Keep MEASURE as a schedulable single-qubit operation instead of
  /// stripping it.
  bool keep_measurements = false;
};

/// Rewrites every gate into {rx, rz, h, cz}. Barriers pass through; they are
/// consumed by `slice`.
inline Circuit decompose(const Circuit& c, DecomposeOptions opts = {}) {
  using std::numbers::pi;
  Circuit out(c.num_qubits, {}, c.name);
  out.gates.reserve(c.gates.size() * 2);
  auto rx = [&](double t, std::size_t q) {
    out.gates.push_back(make_rotation(GateKind::RX, t, q));
  };
  auto rz = [&](double t, std::size_t q) {
    out.gates.push_back(make_rotation(GateKind::RZ, t, q));
  };
  auto h = [&](std::size_t q) { out.gates.push_back(make_gate(GateKind::H, q)); };
  auto cx = [&](std::size_t a, std::size_t b) {
    h(b);
    out.gates.push_back(make_gate(GateKind::CZ, a, b));
    h(b);
  };
  // Time order: rz(-pi/2), rx(theta), rz(pi/2).
  auto ry = [&](double t, std::size_t q) {
    rz(-pi / 2, q);
    rx(t, q);
    rz(pi / 2, q);
  };

  for (const auto& g : c.gates) {
    check_gate(g, c.num_qubits);
    const auto q = g.qubits.front();
    switch (g.kind) {
    case GateKind::RX:
    case GateKind::RZ:
    case GateKind::H:
    case GateKind::CZ:
    case GateKind::BARRIER:
      out.gates.push_back(g);
      break;
    case GateKind::X: rx(pi, q); break;
    case GateKind::Y: ry(pi, q); break;
    case GateKind::Z: rz(pi, q); break;
    case GateKind::S: rz(pi / 2, q); break;
    case GateKind::Sdg: rz(-pi / 2, q); break;
    case GateKind::T: rz(pi / 4, q); break;
    case GateKind::Tdg: rz(-pi / 4, q); break;
    case GateKind::RY: ry(*g.angle, q); break;
    case GateKind::CX: cx(g.qubits[0], g.qubits[1]); break;
    case GateKind::SWAP:
      cx(g.qubits[0], g.qubits[1]);
      cx(g.qubits[1], g.qubits[0]);
      cx(g.qubits[0], g.qubits[1]);
      break;
    case GateKind::MEASURE:
      if (opts.keep_measurements) {
        out.gates.push_back(g);
      }
      break;
    }
  }
  return out;
}

/// Native circuit partitioned into ASAP layers. `circuit` has barriers removed;
/// `layers` index into `circuit.gates`.
struct SlicedCircuit {
  Circuit circuit;
  std::vector<std::vector<std::size_t>> layers;

  std::size_t depth() const { return layers.size(); }
};

/// Greedy ASAP layering. A barrier is a fence: gates after it on any of its
/// qubits land strictly after every earlier gate on those qubits.
inline SlicedCircuit slice(const Circuit& c) {
  SlicedCircuit sc;
  sc.circuit = Circuit(c.num_qubits, {}, c.name);
  std::vector<std::size_t> ready(c.num_qubits, 0);
  for (const auto& g : c.gates) {
    check_gate(g, c.num_qubits);
    if (g.kind == GateKind::BARRIER) {
      std::size_t fence = 0;
      for (auto q : g.qubits) {
        fence = std::max(fence, ready[q]);
      }
      for (auto q : g.qubits) {
        ready[q] = fence;
      }
      continue;
    }
    if (!is_native(g.kind) && g.kind != GateKind::MEASURE) {
      throw CircuitError("slice requires a native-basis circuit, found " +
                         std::string(to_string(g.kind)));
    }
    std::size_t layer = 0;
    for (auto q : g.qubits) {
      layer = std::max(layer, ready[q]);
    }
    if (layer >= sc.layers.size()) {
      sc.layers.resize(layer + 1);
    }
    sc.layers[layer].push_back(sc.circuit.gates.size());
    sc.circuit.gates.push_back(g);
    for (auto q : g.qubits) {
      ready[q] = layer + 1;
    }
  }
  return sc;
}

} // namespace shuttle
