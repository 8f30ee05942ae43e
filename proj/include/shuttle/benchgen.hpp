#pragma once

#include "shuttle/circuit.hpp"
#include "shuttle/rng.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shuttle {

enum class Family { GHZ, GraphState, DJ, QFT, QPE, QAOA, Random };

inline constexpr std::array<Family, 7> all_families = {
    Family::GHZ, Family::GraphState, Family::DJ, Family::QFT,
    Family::QPE, Family::QAOA,       Family::Random};

inline constexpr std::string_view to_string(Family f) {
  switch (f) {
  case Family::GHZ: return "ghz";
  case Family::GraphState: return "graph_state";
  case Family::DJ: return "dj";
  case Family::QFT: return "qft";
  case Family::QPE: return "qpe";
  case Family::QAOA: return "qaoa";
  case Family::Random: return "random";
  }
  return "?";
}

inline Family family_from_string(std::string_view name) {
  for (auto f : all_families) {
    if (to_string(f) == name) {
      return f;
    }
  }
  throw std::invalid_argument("unknown benchmark family '" + std::string(name) + "'");
}

struct BenchmarkSpec {
  Family family = Family::GHZ;
  std::size_t n = 16;
  std::uint64_t seed = 0;
  std::size_t qaoa_rounds = 2;
  /// Random-circuit layer count; defaults to 2n.
  std::optional<std::size_t> random_depth;
  double cx_density = 0.5;
  double edge_probability = 0.5;
};

/// Seeded Erdos-Renyi edge list, pairs (u, v) with u < v in lexicographic
/// order. One uniform draw per pair, in that order.
inline std::vector<std::pair<std::size_t, std::size_t>> random_graph_edges(std::size_t n, double p,
                                                                          Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (rng.bernoulli(p)) {
        edges.emplace_back(u, v);
      }
    }
  }
  return edges;
}

namespace detail {

// Controlled phase diag(1,1,1,e^{i theta}) up to global phase.
inline void controlled_phase(Circuit& c, double theta, std::size_t control, std::size_t target) {
  c.add(make_rotation(GateKind::RZ, theta / 2, control));
  c.add(make_rotation(GateKind::RZ, theta / 2, target));
  c.add(make_gate(GateKind::CX, control, target));
  c.add(make_rotation(GateKind::RZ, -theta / 2, target));
  c.add(make_gate(GateKind::CX, control, target));
}

inline void qft_on(Circuit& c, std::span<const std::size_t> qs, bool inverse) {
  using std::numbers::pi;
  const std::size_t m = qs.size();
  if (!inverse) {
    for (std::size_t i = 0; i < m; ++i) {
      c.add(make_gate(GateKind::H, qs[i]));
      for (std::size_t j = i + 1; j < m; ++j) {
        controlled_phase(c, pi / static_cast<double>(std::size_t{1} << (j - i)), qs[j], qs[i]);
      }
    }
    for (std::size_t i = 0; i < m / 2; ++i) {
      c.add(make_gate(GateKind::SWAP, qs[i], qs[m - 1 - i]));
    }
    return;
  }
  for (std::size_t i = 0; i < m / 2; ++i) {
    c.add(make_gate(GateKind::SWAP, qs[i], qs[m - 1 - i]));
  }
  for (std::size_t i = m; i-- > 0;) {
    for (std::size_t j = m; j-- > i + 1;) {
      controlled_phase(c, -pi / static_cast<double>(std::size_t{1} << (j - i)), qs[j], qs[i]);
    }
    c.add(make_gate(GateKind::H, qs[i]));
  }
}

} // namespace detail

/// Builds a circuit of the requested family before basis decomposition.
/// Output is a pure function of the spec.
inline Circuit generate(const BenchmarkSpec& spec) {
  using std::numbers::pi;
  const std::size_t n = spec.n;
  if (n < 2 || n > 64) {
    throw std::invalid_argument("benchmark size must lie in [2, 64]");
  }
  Rng rng(spec.seed);
  Circuit c(n, {}, std::string(to_string(spec.family)) + "_n" + std::to_string(n));
  switch (spec.family) {
  case Family::GHZ:
    c.add(make_gate(GateKind::H, 0));
    for (std::size_t i = 0; i + 1 < n; ++i) {
      c.add(make_gate(GateKind::CX, i, i + 1));
    }
    break;
  case Family::GraphState:
    for (std::size_t i = 0; i < n; ++i) {
      c.add(make_gate(GateKind::H, i));
    }
    for (const auto& [u, v] : random_graph_edges(n, spec.edge_probability, rng)) {
      c.add(make_gate(GateKind::CZ, u, v));
    }
    break;
  case Family::DJ: {
    // Inputs 0..n-2, ancilla n-1; balanced oracle: parity of the inputs,
    // conjugated by X on a seeded subset.
    const std::size_t anc = n - 1;
    std::vector<bool> flip(anc);
    for (std::size_t i = 0; i < anc; ++i) {
      flip[i] = rng.bernoulli(0.5);
    }
    c.add(make_gate(GateKind::X, anc));
    for (std::size_t i = 0; i < n; ++i) {
      c.add(make_gate(GateKind::H, i));
    }
    for (std::size_t i = 0; i < anc; ++i) {
      if (flip[i]) c.add(make_gate(GateKind::X, i));
    }
    for (std::size_t i = 0; i < anc; ++i) {
      c.add(make_gate(GateKind::CX, i, anc));
    }
    for (std::size_t i = 0; i < anc; ++i) {
      if (flip[i]) c.add(make_gate(GateKind::X, i));
    }
    for (std::size_t i = 0; i < anc; ++i) {
      c.add(make_gate(GateKind::H, i));
    }
    break;
  }
  case Family::QFT: {
    std::vector<std::size_t> qs(n);
    for (std::size_t i = 0; i < n; ++i) qs[i] = i;
    detail::qft_on(c, qs, false);
    break;
  }
  case Family::QPE: {
    // Counting register 0..n-2, eigenstate |1> of a phase gate on qubit n-1.
    const std::size_t m = n - 1;
    const std::size_t target = m;
    const std::uint64_t k = rng.below(std::uint64_t{1} << std::min<std::size_t>(m, 62));
    const double phase = static_cast<double>(k) / std::ldexp(1.0, static_cast<int>(m));
    c.add(make_gate(GateKind::X, target));
    for (std::size_t i = 0; i < m; ++i) {
      c.add(make_gate(GateKind::H, i));
    }
    // Counting qubit i controls U^(2^(m-1-i)).
    for (std::size_t i = 0; i < m; ++i) {
      const double reps = std::ldexp(1.0, static_cast<int>(m - 1 - i));
      const double angle = std::remainder(2.0 * pi * phase * reps, 2.0 * pi);
      detail::controlled_phase(c, angle, i, target);
    }
    std::vector<std::size_t> qs(m);
    for (std::size_t i = 0; i < m; ++i) qs[i] = i;
    detail::qft_on(c, qs, true);
    break;
  }
  case Family::QAOA: {
    const auto edges = random_graph_edges(n, spec.edge_probability, rng);
    for (std::size_t i = 0; i < n; ++i) {
      c.add(make_gate(GateKind::H, i));
    }
    for (std::size_t r = 0; r < spec.qaoa_rounds; ++r) {
      const double gamma = rng.uniform(0.0, pi);
      const double beta = rng.uniform(0.0, pi);
      for (const auto& [u, v] : edges) {
        c.add(make_gate(GateKind::CX, u, v));
        c.add(make_rotation(GateKind::RZ, 2.0 * gamma, v));
        c.add(make_gate(GateKind::CX, u, v));
      }
      for (std::size_t i = 0; i < n; ++i) {
        c.add(make_rotation(GateKind::RX, 2.0 * beta, i));
      }
    }
    break;
  }
  case Family::Random: {
    const std::size_t depth = spec.random_depth.value_or(2 * n);
    std::vector<std::size_t> perm(n);
    for (std::size_t layer = 0; layer < depth; ++layer) {
      if (layer % 2 == 0) {
        static constexpr GateKind rots[] = {GateKind::RX, GateKind::RY, GateKind::RZ};
        for (std::size_t q = 0; q < n; ++q) {
          const auto kind = rots[rng.below(3)];
          c.add(make_rotation(kind, rng.uniform(0.0, 2.0 * pi), q));
        }
      } else {
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        rng.shuffle(std::span<std::size_t>(perm));
        for (std::size_t i = 0; i + 1 < n; i += 2) {
          if (rng.bernoulli(spec.cx_density)) {
            c.add(make_gate(GateKind::CX, perm[i], perm[i + 1]));
          }
        }
      }
    }
    break;
  }
  }
  return c;
}

} // namespace shuttle
