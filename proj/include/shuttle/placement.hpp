#pragma once

#include "shuttle/circuit.hpp"
#include "shuttle/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace shuttle {

/// Dense row-major real square matrix.
class DenseMatrix {
public:
  explicit DenseMatrix(std::size_t n = 0) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

  bool operator==(const DenseMatrix&) const = default;

private:
  std::size_t n_;
  std::vector<double> data_;
};

/// Symmetric nonnegative qubit-interaction weights with zero diagonal.
class InteractionGraph {
public:
  explicit InteractionGraph(std::size_t n = 0) : w_(n) {}

  std::size_t size() const { return w_.size(); }
  double weight(std::size_t u, std::size_t v) const { return w_(u, v); }

  void add(std::size_t u, std::size_t v, double w) {
    if (u >= size() || v >= size() || u == v) {
      throw std::invalid_argument("interaction edge endpoints must be distinct vertices");
    }
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("interaction weight must be nonnegative");
    }
    w_(u, v) += w;
    w_(v, u) += w;
  }

  double degree(std::size_t u) const {
    double d = 0.0;
    for (std::size_t v = 0; v < size(); ++v) {
      d += w_(u, v);
    }
    return d;
  }

  const DenseMatrix& weights() const { return w_; }

private:
  DenseMatrix w_;
};

/// Edge weights sum 2^-l over every layer l holding a two-qubit gate on the
/// pair.
inline InteractionGraph build_interaction_graph(const SlicedCircuit& sc) {
  InteractionGraph g(sc.circuit.num_qubits);
  for (std::size_t l = 0; l < sc.layers.size(); ++l) {
    const double w = std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(l, 4096)));
    for (auto gi : sc.layers[l]) {
      const auto& gate = sc.circuit.gates[gi];
      if (gate.qubits.size() == 2) {
        g.add(gate.qubits[0], gate.qubits[1], w);
      }
    }
  }
  return g;
}

inline DenseMatrix laplacian(const InteractionGraph& g) {
  const std::size_t n = g.size();
  DenseMatrix L(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u != v) {
        L(u, v) = -g.weight(u, v);
      }
    }
    L(u, u) = g.degree(u);
  }
  return L;
}

struct EigenDecomposition {
  std::vector<double> values;               // ascending
  std::vector<std::vector<double>> vectors; // vectors[k] pairs with values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for a dense symmetric matrix. Iterates until the
/// largest off-diagonal entry is below `rel_tol` times the Frobenius norm.
inline EigenDecomposition jacobi_eigen(DenseMatrix a, double rel_tol = 1e-12,
                                       int max_sweeps = 100) {
  const std::size_t n = a.size();
  DenseMatrix v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v(i, i) = 1.0;
  }
  double frob = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      frob += a(i, j) * a(i, j);
    }
  }
  frob = std::sqrt(frob);
  const double threshold = rel_tol * frob;

  auto max_off = [&] {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        m = std::max(m, std::abs(a(i, j)));
      }
    }
    return m;
  };

  EigenDecomposition out;
  while (out.sweeps < max_sweeps && frob > 0.0 && max_off() > threshold) {
    ++out.sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= threshold * 1e-3) {
          continue;
        }
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  for (auto k : order) {
    out.values.push_back(a(k, k));
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) {
      col[i] = v(i, k);
    }
    out.vectors.push_back(std::move(col));
  }
  return out;
}

struct FiedlerResult {
  double value = 0.0;
  std::vector<double> vector;
};

/// Unit eigenvector of the second-smallest Laplacian eigenvalue, orthogonal to
/// the all-ones vector even when that eigenvalue is degenerate. The first
/// clearly nonzero component is made positive.
inline FiedlerResult fiedler_vector(const DenseMatrix& L) {
  const std::size_t n = L.size();
  if (n < 2) {
    throw std::invalid_argument("fiedler_vector needs at least 2 vertices");
  }
  // Lift the constant eigenvector above the spectrum (Gershgorin bound), so
  // the smallest remaining eigenpair is the Fiedler pair.
  double max_deg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    max_deg = std::max(max_deg, std::abs(L(i, i)));
  }
  const double shift = 2.0 * max_deg + 1.0;
  DenseMatrix lifted = L;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      lifted(i, j) += shift / static_cast<double>(n);
    }
  }
  auto eig = jacobi_eigen(std::move(lifted));
  FiedlerResult r{eig.values.front(), std::move(eig.vectors.front())};

  double norm = 0.0;
  for (double x : r.vector) {
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : r.vector) {
    x /= norm;
  }
  for (double x : r.vector) {
    if (std::abs(x) > 1e-9) {
      if (x < 0.0) {
        for (double& y : r.vector) {
          y = -y;
        }
      }
      break;
    }
  }
  return r;
}

/// Bijection virtual qubit -> storage site.
struct Placement {
  std::vector<std::size_t> site_of;

  std::size_t size() const { return site_of.size(); }

  void validate() const {
    std::vector<bool> seen(site_of.size(), false);
    for (auto s : site_of) {
      if (s >= site_of.size() || seen[s]) {
        throw std::invalid_argument("placement is not a permutation");
      }
      seen[s] = true;
    }
  }

  bool operator==(const Placement&) const = default;
};

inline Placement identity_placement(std::size_t n) {
  Placement p;
  p.site_of.resize(n);
  std::iota(p.site_of.begin(), p.site_of.end(), 0);
  return p;
}

/// Placement from a left-to-right qubit order.
inline Placement placement_from_order(const std::vector<std::size_t>& order) {
  Placement p;
  p.site_of.assign(order.size(), order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k] >= order.size() || p.site_of[order[k]] != order.size()) {
      throw std::invalid_argument("order must be a permutation");
    }
    p.site_of[order[k]] = k;
  }
  p.validate();
  return p;
}

inline Placement random_placement(std::size_t n, std::uint64_t seed) {
  Placement p = identity_placement(n);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(p.site_of));
  return p;
}

namespace detail {

inline std::vector<std::vector<std::size_t>> components(const InteractionGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> label(n, n);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != n) {
      continue;
    }
    std::vector<std::size_t> comp{s};
    label[s] = out.size();
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (std::size_t v = 0; v < n; ++v) {
        if (label[v] == n && g.weight(comp[head], v) > 0.0) {
          label[v] = out.size();
          comp.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

// Fiedler components snapped to a 1e-9 grid so that symmetric vertices tie
// exactly and fall back to index order.
inline std::int64_t sort_key(double x) { return std::llround(x * 1e9); }

inline std::vector<std::size_t> spectral_order(const InteractionGraph& g,
                                               const std::vector<std::size_t>& verts) {
  const std::size_t m = verts.size();
  InteractionGraph sub(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double w = g.weight(verts[i], verts[j]);
      if (w > 0.0) {
        sub.add(i, j, w);
      }
    }
  }
  const auto f = fiedler_vector(laplacian(sub));
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return sort_key(f.vector[a]) < sort_key(f.vector[b]);
  });
  std::vector<std::size_t> out;
  for (auto i : idx) {
    out.push_back(verts[i]);
  }
  return out;
}

} // namespace detail

/// Orders qubits along the bus by their Fiedler-vector component.
///
/// Disconnected graphs: each multi-vertex component is laid out contiguously
/// in its own Fiedler order, components follow the mean of the global Fiedler
/// vector over their vertices, and isolated qubits fill the right end in
/// index order.
inline Placement spectral_placement(const InteractionGraph& g) {
  const std::size_t n = g.size();
  if (n < 2) {
    throw std::invalid_argument("spectral_placement needs at least 2 qubits");
  }
  const auto comps = detail::components(g);
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> isolated;
  for (const auto& c : comps) {
    if (c.size() > 1) {
      groups.push_back(c);
    } else {
      isolated.push_back(c.front());
    }
  }
  if (groups.size() == 1 && isolated.empty()) {
    return placement_from_order(detail::spectral_order(g, groups.front()));
  }

  std::vector<std::size_t> order;
  if (!groups.empty()) {
    const auto global = fiedler_vector(laplacian(g));
    std::vector<std::pair<std::int64_t, std::size_t>> keyed;
    for (std::size_t k = 0; k < groups.size(); ++k) {
      double mean = 0.0;
      for (auto v : groups[k]) {
        mean += global.vector[v];
      }
      mean /= static_cast<double>(groups[k].size());
      keyed.emplace_back(detail::sort_key(mean), k);
    }
    // Ties fall back to the component's smallest vertex, i.e. discovery order.
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [key, k] : keyed) {
      const auto part = detail::spectral_order(g, groups[k]);
      order.insert(order.end(), part.begin(), part.end());
    }
  }
  order.insert(order.end(), isolated.begin(), isolated.end());
  return placement_from_order(order);
}

inline double minla_cost(const InteractionGraph& g, const Placement& p) {
  if (g.size() != p.size()) {
    throw std::invalid_argument("placement size does not match the graph");
  }
  double cost = 0.0;
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (std::size_t v = u + 1; v < g.size(); ++v) {
      const double w = g.weight(u, v);
      if (w != 0.0) {
        const auto su = static_cast<double>(p.site_of[u]);
        const auto sv = static_cast<double>(p.site_of[v]);
        cost += w * std::abs(su - sv);
      }
    }
  }
  return cost;
}

struct MinLAResult {
  Placement placement;
  double cost = 0.0;
};

/// Exhaustive minimum linear arrangement for n <= 9. Among optimal
/// arrangements the lexicographically smallest site vector wins.
inline MinLAResult brute_force_minla(const InteractionGraph& g) {
  const std::size_t n = g.size();
  if (n > 9) {
    throw std::invalid_argument("brute_force_minla is limited to 9 vertices");
  }
  Placement p = identity_placement(n);
  MinLAResult best{p, minla_cost(g, p)};
  while (std::next_permutation(p.site_of.begin(), p.site_of.end())) {
    const double c = minla_cost(g, p);
    if (c < best.cost - 1e-12 * std::max(1.0, best.cost)) {
      best = {p, c};
    }
  }
  return best;
}

/// Weighted edge list with header `u,v,weight`, one row per pair u < v with
/// nonzero weight.
inline std::string to_edge_csv(const InteractionGraph& g) {
  std::string out = "u,v,weight\n";
  char buf[64];
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (std::size_t v = u + 1; v < g.size(); ++v) {
      if (g.weight(u, v) != 0.0) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g\n", u, v, g.weight(u, v));
        out += buf;
      }
    }
  }
  return out;
}

inline void to_json(nlohmann::json& j, const Placement& p) { j = p.site_of; }

inline void from_json(const nlohmann::json& j, Placement& p) {
  p.site_of = j.get<std::vector<std::size_t>>();
  p.validate();
}

} // namespace shuttle
