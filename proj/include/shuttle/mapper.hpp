#pragma once

#include "shuttle/architecture.hpp"
#include "shuttle/circuit.hpp"
#include "shuttle/error_model.hpp"
#include "shuttle/placement.hpp"
#include "shuttle/schedule.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace shuttle {

namespace detail {

class ScheduleBuilder {
public:
  ScheduleBuilder(Strategy tag, const ArchitectureSpec& arch, const Placement& placement,
                  const ErrorModelParams& err, std::size_t num_qubits)
      : arch_(arch), err_(err) {
    arch.validate();
    err.validate();
    placement.validate();
    if (placement.size() != num_qubits) {
      throw std::invalid_argument("placement size " + std::to_string(placement.size()) +
                                  " does not match circuit width " + std::to_string(num_qubits));
    }
    s_.strategy = tag;
    s_.arch = arch;
    s_.error = err;
    s_.initial = placement;
    s_.per_qubit_error.assign(num_qubits, 0.0);
    layout_ = LayoutState(arch, placement);
  }

  const LayoutState& layout() const { return layout_; }
  const ArchitectureSpec& arch() const { return arch_; }
  const ErrorModelParams& error() const { return err_; }

  double shuttle(std::size_t q, Location to, double start, double velocity) {
    const auto op = make_shuttle(q, layout_.where(q), to, start, velocity, arch_, err_);
    layout_.move(q, to);
    s_.per_qubit_error[q] += op.delta_c;
    s_.total_time = std::max(s_.total_time, op.end());
    s_.ops.emplace_back(op);
    return op.end();
  }

  double gate(std::size_t index, const Gate& g, std::size_t zone, double start) {
    GateOp op{index, g.kind, g.qubits, zone, start, gate_duration(g.kind, arch_)};
    for (auto q : g.qubits) {
      if (layout_.where(q) != Location::zone(zone)) {
        throw std::logic_error("gate operand q" + std::to_string(q) + " is not at " +
                               to_string(Location::zone(zone)));
      }
    }
    s_.total_time = std::max(s_.total_time, op.end());
    s_.ops.emplace_back(std::move(op));
    return start + gate_duration(g.kind, arch_);
  }

  Schedule finish() && {
    s_.final_layout = layout_;
    return std::move(s_);
  }

private:
  ArchitectureSpec arch_;
  ErrorModelParams err_;
  Schedule s_;
  LayoutState layout_;
};

inline void require_schedulable(const Circuit& c) {
  for (const auto& g : c.gates) {
    if (!is_native(g.kind) && g.kind != GateKind::MEASURE && g.kind != GateKind::BARRIER) {
      throw CircuitError("mapper requires a native-basis circuit, found " +
                         std::string(to_string(g.kind)));
    }
  }
}

} // namespace detail

/// One gate at a time. Single-qubit gates use the zone right of the qubit's
/// site; two-qubit gates on sites i, j meet in zone ceil((i+j)/2). Operands
/// move out together and return to their own sites afterwards.
inline Schedule map_baseline(const Circuit& c, const ArchitectureSpec& arch,
                             const Placement& placement, const ErrorModelParams& err = {}) {
  detail::require_schedulable(c);
  detail::ScheduleBuilder b(Strategy::Baseline, arch, placement, err, c.num_qubits);
  const double v = arch.default_velocity;
  double now = 0.0;
  for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
    const auto& g = c.gates[gi];
    if (g.kind == GateKind::BARRIER) {
      continue;
    }
    std::vector<std::size_t> sites;
    for (auto q : g.qubits) {
      sites.push_back(b.layout().where(q).index);
    }
    const std::size_t zone = sites.size() == 1 ? sites[0] : (sites[0] + sites[1] + 1) / 2;
    double out_end = now;
    for (auto q : g.qubits) {
      out_end = std::max(out_end, b.shuttle(q, Location::zone(zone), now, v));
    }
    const double gate_end = b.gate(gi, g, zone, out_end);
    double back_end = gate_end;
    for (std::size_t k = 0; k < g.qubits.size(); ++k) {
      back_end = std::max(back_end, b.shuttle(g.qubits[k], Location::site(sites[k]), gate_end, v));
    }
    now = back_end;
  }
  return std::move(b).finish();
}

/// Knobs of the layer-by-layer mappers.
struct SlicedPolicy {
  /// Return qubits to the nearest free site at or left of their zone instead
  /// of their origin.
  bool dynamic_return = false;
  /// Per phase, run all shuttles at the velocity minimizing the phase error of
  /// the longest shuttle in that phase.
  bool tune_velocity = false;
  /// Order co-zone returns by the qubits' next interaction partners.
  bool lookahead_return = false;
  VelocityBracket bracket{};
};

namespace detail {

// Per qubit, the (layer, partner) of every two-qubit gate in layer order.
inline std::vector<std::vector<std::pair<std::size_t, std::size_t>>>
interaction_timeline(const SlicedCircuit& sc) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out(sc.circuit.num_qubits);
  for (std::size_t l = 0; l < sc.layers.size(); ++l) {
    for (auto gi : sc.layers[l]) {
      const auto& g = sc.circuit.gates[gi];
      if (g.qubits.size() == 2) {
        out[g.qubits[0]].emplace_back(l, g.qubits[1]);
        out[g.qubits[1]].emplace_back(l, g.qubits[0]);
      }
    }
  }
  return out;
}

} // namespace detail

/// Layer-by-layer mapping shared by the parallel, minimum-return, tunable
/// velocity and swap-return strategies.
///
/// Each layer runs three phases: every operand moves right to its zone
/// (single-qubit gate at site i: zone i; two-qubit gate at sites i, j: zone
/// max(i, j)), all gates start together, then all operands return. A phase
/// lasts as long as its slowest member.
inline Schedule map_sliced(const SlicedCircuit& sc, const ArchitectureSpec& arch,
                           const Placement& placement, const ErrorModelParams& err,
                           Strategy tag, const SlicedPolicy& policy) {
  detail::require_schedulable(sc.circuit);
  detail::ScheduleBuilder b(tag, arch, placement, err, sc.circuit.num_qubits);
  const std::size_t nq = sc.circuit.num_qubits;

  std::map<double, double> v_cache;
  auto phase_velocity = [&](double max_dist) {
    if (!policy.tune_velocity) {
      return arch.default_velocity;
    }
    auto it = v_cache.find(max_dist);
    if (it == v_cache.end()) {
      it = v_cache.emplace(max_dist, optimal_velocity(max_dist, err, policy.bracket)).first;
    }
    return it->second;
  };

  const auto timeline = detail::interaction_timeline(sc);
  std::vector<std::size_t> cursor(nq, 0);

  double now = 0.0;
  for (std::size_t l = 0; l < sc.layers.size(); ++l) {
    const auto& layer = sc.layers[l];
    if (layer.empty()) {
      continue;
    }
    std::vector<std::size_t> origin(nq, 0);
    std::vector<std::size_t> movers;
    std::vector<std::size_t> zone_of_gate;
    double out_dist = 0.0;
    for (auto gi : layer) {
      const auto& g = sc.circuit.gates[gi];
      std::size_t zone = 0;
      for (auto q : g.qubits) {
        origin[q] = b.layout().where(q).index;
        zone = std::max(zone, origin[q]);
        movers.push_back(q);
      }
      zone_of_gate.push_back(zone);
      for (auto q : g.qubits) {
        out_dist = std::max(out_dist, distance(Location::site(origin[q]), Location::zone(zone), arch));
      }
    }

    const double v_out = phase_velocity(out_dist);
    double out_end = now;
    for (std::size_t k = 0; k < layer.size(); ++k) {
      for (auto q : sc.circuit.gates[layer[k]].qubits) {
        out_end = std::max(out_end, b.shuttle(q, Location::zone(zone_of_gate[k]), now, v_out));
      }
    }
    double gate_end = out_end;
    for (std::size_t k = 0; k < layer.size(); ++k) {
      gate_end = std::max(gate_end, b.gate(layer[k], sc.circuit.gates[layer[k]], zone_of_gate[k], out_end));
    }

    for (auto q : movers) {
      auto& c = cursor[q];
      while (c < timeline[q].size() && timeline[q][c].first <= l) {
        ++c;
      }
    }

    // Decide return sites.
    std::vector<std::size_t> target(nq, std::numeric_limits<std::size_t>::max());
    if (!policy.dynamic_return) {
      for (auto q : movers) {
        target[q] = origin[q];
      }
    } else {
      std::vector<bool> taken(arch.n_sites);
      for (std::size_t s = 0; s < arch.n_sites; ++s) {
        taken[s] = !b.layout().site_free(s);
      }
      std::vector<std::size_t> zones = zone_of_gate;
      std::sort(zones.begin(), zones.end(), std::greater<>());
      auto take_rightmost = [&](std::size_t limit) {
        for (std::size_t s = limit + 1; s-- > 0;) {
          if (!taken[s]) {
            taken[s] = true;
            return s;
          }
        }
        throw std::logic_error("no free storage site left of zone " + std::to_string(limit));
      };
      // Where a qubit will sit when the next layer starts, as far as known now.
      auto settled_site = [&](std::size_t q) {
        const auto loc = b.layout().where(q);
        if (loc.is_site()) {
          return loc.index;
        }
        return target[q] != std::numeric_limits<std::size_t>::max() ? target[q] : origin[q];
      };
      auto next_partner = [&](std::size_t q) -> std::optional<std::size_t> {
        if (cursor[q] < timeline[q].size()) {
          return timeline[q][cursor[q]].second;
        }
        return std::nullopt;
      };
      for (auto z : zones) {
        auto occ = b.layout().zone_occupants(z);
        std::sort(occ.begin(), occ.end());
        if (occ.size() == 1) {
          target[occ[0]] = take_rightmost(z);
          continue;
        }
        const std::size_t qi = occ[0];
        const std::size_t qj = occ[1];
        const std::size_t site_i = take_rightmost(z);
        const std::size_t site_j = take_rightmost(z);
        target[qi] = site_i;
        target[qj] = site_j;
        if (!policy.lookahead_return) {
          continue;
        }
        const auto pi = next_partner(qi);
        const auto pj = next_partner(qj);
        auto gap = [&](std::size_t site, std::size_t partner) {
          const auto a = static_cast<double>(site);
          const auto c = static_cast<double>(settled_site(partner));
          return std::abs(a - c);
        };
        bool swap = false;
        if (pi && pj) {
          swap = !(gap(site_i, *pi) <= gap(site_j, *pj));
        } else if (pi) {
          swap = gap(site_j, *pi) < gap(site_i, *pi);
        } else if (pj) {
          swap = gap(site_i, *pj) < gap(site_j, *pj);
        }
        if (swap) {
          std::swap(target[qi], target[qj]);
        }
      }
    }

    double back_dist = 0.0;
    for (auto q : movers) {
      back_dist = std::max(back_dist, distance(b.layout().where(q), Location::site(target[q]), arch));
    }
    const double v_back = phase_velocity(back_dist);
    double back_end = gate_end;
    for (auto q : movers) {
      back_end = std::max(back_end, b.shuttle(q, Location::site(target[q]), gate_end, v_back));
    }
    now = back_end;
  }
  return std::move(b).finish();
}

/// Layers run concurrently; qubits return to their origin sites.
inline Schedule map_parallel(const SlicedCircuit& sc, const ArchitectureSpec& arch,
                             const Placement& placement, const ErrorModelParams& err = {}) {
  return map_sliced(sc, arch, placement, err, Strategy::Parallel, {});
}

/// Parallel layers, but after each layer qubits settle into the rightmost
/// free sites left of their zones (zones handled right to left; in a shared
/// zone the lower-indexed qubit goes first).
inline Schedule map_min_return(const SlicedCircuit& sc, const ArchitectureSpec& arch,
                               const Placement& placement, const ErrorModelParams& err = {}) {
  return map_sliced(sc, arch, placement, err, Strategy::MinReturn, {.dynamic_return = true});
}

/// Minimum-return movements with a per-phase error-optimal velocity.
inline Schedule map_tunable_velocity(const SlicedCircuit& sc, const ArchitectureSpec& arch,
                                     const Placement& placement, const ErrorModelParams& err = {},
                                     VelocityBracket bracket = {}) {
  return map_sliced(sc, arch, placement, err, Strategy::TunableVelocity,
                    {.dynamic_return = true, .tune_velocity = true, .bracket = bracket});
}

/// Tunable velocity plus look-ahead ordering of the two return sites of a
/// shared zone: with Q_i' the site the lower-indexed qubit q_i would get and
/// Q_l, Q_m the sites of the next partners of q_i, q_j, keep the assignment
/// iff |Q_i' - Q_l| <= |Q_j' - Q_m|. With only one upcoming partner, that
/// qubit takes the closer site.
inline Schedule map_swap_return(const SlicedCircuit& sc, const ArchitectureSpec& arch,
                                const Placement& placement, const ErrorModelParams& err = {},
                                VelocityBracket bracket = {}) {
  return map_sliced(sc, arch, placement, err, Strategy::SwapReturn,
                    {.dynamic_return = true,
                     .tune_velocity = true,
                     .lookahead_return = true,
                     .bracket = bracket});
}

inline Schedule map_circuit(Strategy strategy, const SlicedCircuit& sc,
                            const ArchitectureSpec& arch, const Placement& placement,
                            const ErrorModelParams& err = {}) {
  switch (strategy) {
  case Strategy::Baseline: return map_baseline(sc.circuit, arch, placement, err);
  case Strategy::Parallel: return map_parallel(sc, arch, placement, err);
  case Strategy::MinReturn: return map_min_return(sc, arch, placement, err);
  case Strategy::TunableVelocity: return map_tunable_velocity(sc, arch, placement, err);
  case Strategy::SwapReturn: return map_swap_return(sc, arch, placement, err);
  }
  throw std::invalid_argument("unknown strategy");
}

} // namespace shuttle
