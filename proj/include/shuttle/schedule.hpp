#pragma once

#include "shuttle/architecture.hpp"
#include "shuttle/circuit.hpp"
#include "shuttle/error_model.hpp"
#include "shuttle/placement.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace shuttle {

enum class Strategy { Baseline, Parallel, MinReturn, TunableVelocity, SwapReturn };

inline constexpr std::array<Strategy, 5> all_strategies = {
    Strategy::Baseline, Strategy::Parallel, Strategy::MinReturn, Strategy::TunableVelocity,
    Strategy::SwapReturn};

inline constexpr std::string_view to_string(Strategy s) {
  switch (s) {
  case Strategy::Baseline: return "baseline";
  case Strategy::Parallel: return "parallel";
  case Strategy::MinReturn: return "min_return";
  case Strategy::TunableVelocity: return "tunable_velocity";
  case Strategy::SwapReturn: return "swap_return";
  }
  return "?";
}

inline Strategy strategy_from_string(std::string_view name) {
  for (auto s : all_strategies) {
    if (to_string(s) == name) {
      return s;
    }
  }
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

/// Where every virtual qubit currently is. A storage site holds at most one
/// qubit and a manipulation zone at most two.
class LayoutState {
public:
  static constexpr std::size_t zone_capacity = 2;

  LayoutState() = default;
  LayoutState(const ArchitectureSpec& arch, const Placement& initial)
      : site_occupant_(arch.n_sites, none), zone_occupants_(arch.n_sites) {
    if (initial.size() > arch.n_sites) {
      throw std::invalid_argument("more qubits than storage sites");
    }
    for (std::size_t q = 0; q < initial.size(); ++q) {
      const auto s = initial.site_of[q];
      if (s >= arch.n_sites || site_occupant_[s] != none) {
        throw std::invalid_argument("initial placement is not injective into storage sites");
      }
      site_occupant_[s] = q;
      where_.push_back(Location::site(s));
    }
  }

  std::size_t num_qubits() const { return where_.size(); }
  const Location& where(std::size_t q) const { return where_.at(q); }
  const std::vector<Location>& assignment() const { return where_; }

  bool site_free(std::size_t s) const { return site_occupant_.at(s) == none; }
  std::optional<std::size_t> site_occupant(std::size_t s) const {
    const auto q = site_occupant_.at(s);
    return q == none ? std::nullopt : std::optional<std::size_t>(q);
  }
  const std::vector<std::size_t>& zone_occupants(std::size_t z) const {
    return zone_occupants_.at(z);
  }

  void move(std::size_t q, Location to) {
    if (to.index >= site_occupant_.size()) {
      throw std::logic_error("move target " + to_string(to) + " out of range");
    }
    if (to.is_site() && site_occupant_[to.index] != none) {
      throw std::logic_error("storage site " + to_string(to) + " already occupied");
    }
    if (to.is_zone() && zone_occupants_[to.index].size() >= zone_capacity) {
      throw std::logic_error("manipulation zone " + to_string(to) + " is full");
    }
    leave(q);
    if (to.is_site()) {
      site_occupant_[to.index] = q;
    } else {
      zone_occupants_[to.index].push_back(q);
    }
    where_.at(q) = to;
  }

  bool operator==(const LayoutState&) const = default;

private:
  static constexpr std::size_t none = std::numeric_limits<std::size_t>::max();

  void leave(std::size_t q) {
    const auto from = where_.at(q);
    if (from.is_site()) {
      site_occupant_[from.index] = none;
    } else {
      auto& occ = zone_occupants_[from.index];
      occ.erase(std::find(occ.begin(), occ.end(), q));
    }
  }

  std::vector<Location> where_;
  std::vector<std::size_t> site_occupant_;
  std::vector<std::vector<std::size_t>> zone_occupants_;
};

/// One qubit moved along the bus at constant velocity. Times in s, lengths in
/// m, velocity in m/s.
struct ShuttleOp {
  std::size_t qubit = 0;
  Location from;
  Location to;
  double start = 0.0;
  double velocity = 0.0;
  double distance = 0.0;
  double duration = 0.0;
  double delta_c = 0.0;

  double end() const { return start + duration; }
  bool operator==(const ShuttleOp&) const = default;
};

struct GateOp {
  std::size_t gate = 0;
  GateKind kind{};
  std::vector<std::size_t> qubits;
  std::size_t zone = 0;
  double start = 0.0;
  double duration = 0.0;

  double end() const { return start + duration; }
  bool operator==(const GateOp&) const = default;
};

using ScheduledOp = std::variant<ShuttleOp, GateOp>;

inline double op_start(const ScheduledOp& op) {
  return std::visit([](const auto& o) { return o.start; }, op);
}
inline double op_end(const ScheduledOp& op) {
  return std::visit([](const auto& o) { return o.end(); }, op);
}

struct Schedule {
  Strategy strategy = Strategy::Baseline;
  ArchitectureSpec arch;
  ErrorModelParams error;
  Placement initial;
  std::vector<ScheduledOp> ops;
  double total_time = 0.0;
  std::vector<double> per_qubit_error;
  LayoutState final_layout;

  std::size_t num_qubits() const { return initial.size(); }
};

/// Builds a ShuttleOp with duration and phase error derived from the geometry.
inline ShuttleOp make_shuttle(std::size_t q, Location from, Location to, double start,
                              double velocity, const ArchitectureSpec& arch,
                              const ErrorModelParams& err) {
  ShuttleOp op;
  op.qubit = q;
  op.from = from;
  op.to = to;
  op.start = start;
  op.velocity = velocity;
  op.distance = distance(from, to, arch);
  op.duration = shuttle_time(op.distance, velocity);
  op.delta_c = phase_error(velocity, op.distance, err);
  return op;
}

inline double gate_duration(GateKind kind, const ArchitectureSpec& arch) {
  if (kind == GateKind::MEASURE) {
    return arch.t_measure;
  }
  return is_two_qubit(kind) ? arch.t_2q : arch.t_1q;
}

struct Violation {
  /// Index into Schedule::ops; empty for whole-schedule rules.
  std::optional<std::size_t> op;
  /// a: gate operands at zone, b: zone capacity, c: site capacity,
  /// d: crossing trajectories, e: final storage, f: error accounting,
  /// g: total time, s: shuttle consistency.
  char rule = '?';
  std::string message;
};

inline std::string to_string(const Violation& v) {
  std::string s = "(" + std::string(1, v.rule) + ")";
  if (v.op) {
    s += " op " + std::to_string(*v.op);
  }
  return s + ": " + v.message;
}

namespace detail {

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

struct Stay {
  std::size_t qubit;
  Location loc;
  double arrive;
  double depart;
  std::optional<std::size_t> arrival_op;
};

} // namespace detail

/// Checks the movement semantics of a schedule. An empty result means valid.
inline std::vector<Violation> validate_schedule(const Schedule& s, const ArchitectureSpec& arch) {
  // Serialized timestamps are rounded to 1 ps each, so a gate end and the
  // departure after it can disagree by up to 1.5 ps in a reloaded schedule.
  constexpr double t_eps = 2e-12;
  constexpr double x_eps = 1e-15;
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<Violation> out;
  const std::size_t nq = s.num_qubits();

  try {
    s.initial.validate();
  } catch (const std::exception& e) {
    out.push_back({std::nullopt, 's', e.what()});
    return out;
  }
  if (nq > arch.n_sites) {
    out.push_back({std::nullopt, 'c', "more qubits than storage sites"});
    return out;
  }

  // Per-qubit shuttle timelines in start order.
  std::vector<std::vector<std::size_t>> shuttles_of(nq);
  std::vector<std::size_t> shuttle_ops;
  for (std::size_t i = 0; i < s.ops.size(); ++i) {
    if (const auto* sh = std::get_if<ShuttleOp>(&s.ops[i])) {
      if (sh->qubit >= nq) {
        out.push_back({i, 's', "shuttle of unknown qubit"});
        continue;
      }
      shuttles_of[sh->qubit].push_back(i);
      shuttle_ops.push_back(i);
    }
  }

  std::vector<detail::Stay> stays;
  std::vector<double> folded_error(nq, 0.0);
  std::vector<Location> final_loc(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    auto& idx = shuttles_of[q];
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return std::get<ShuttleOp>(s.ops[a]).start < std::get<ShuttleOp>(s.ops[b]).start;
    });
    Location loc = Location::site(s.initial.site_of[q]);
    double arrived = -inf;
    std::optional<std::size_t> arrival_op;
    double last_end = -inf;
    for (auto i : idx) {
      const auto& sh = std::get<ShuttleOp>(s.ops[i]);
      if (sh.from.index >= arch.n_sites || sh.to.index >= arch.n_sites) {
        out.push_back({i, 's', "shuttle endpoint outside the architecture"});
        continue;
      }
      if (sh.from != loc) {
        out.push_back({i, 's', "q" + std::to_string(q) + " departs " + to_string(sh.from) +
                                   " but is at " + to_string(loc)});
      }
      if (sh.start < last_end - t_eps) {
        out.push_back({i, 's', "q" + std::to_string(q) + " starts moving before its previous shuttle ended"});
      }
      const double d = distance(sh.from, sh.to, arch);
      if (d <= 0.0) {
        out.push_back({i, 's', "zero-distance shuttle"});
      }
      if (!(sh.velocity > 0.0) || !detail::close_rel(sh.distance, d, 1e-12) ||
          !detail::close_rel(sh.duration, d / sh.velocity, 1e-12)) {
        out.push_back({i, 's', "shuttle distance or duration inconsistent with geometry"});
      } else if (!detail::close_rel(sh.delta_c, phase_error(sh.velocity, d, s.error), 1e-12)) {
        out.push_back({i, 's', "shuttle phase error inconsistent with the error model"});
      }
      stays.push_back({q, loc, arrived, sh.start, arrival_op});
      folded_error[q] += sh.delta_c;
      loc = sh.to;
      arrived = sh.end();
      arrival_op = i;
      last_end = sh.end();
    }
    stays.push_back({q, loc, arrived, inf, arrival_op});
    final_loc[q] = loc;
  }

  // (b), (c): occupancy over half-open stays [arrive, depart).
  std::map<Location, std::vector<const detail::Stay*>> by_loc;
  for (const auto& st : stays) {
    by_loc[st.loc].push_back(&st);
  }
  for (const auto& [loc, list] : by_loc) {
    const std::size_t cap = loc.is_site() ? 1 : LayoutState::zone_capacity;
    std::vector<std::pair<double, int>> events;
    std::vector<const detail::Stay*> arrivals;
    for (const auto* st : list) {
      if (st->depart - st->arrive <= t_eps && st->arrive != -inf) {
        continue;
      }
      events.emplace_back(st->arrive, +1);
      events.emplace_back(st->depart - t_eps, -1);
    }
    std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first < b.first : a.second < b.second;
    });
    std::size_t count = 0;
    double worst_t = 0.0;
    std::size_t worst = 0;
    for (const auto& [t, delta] : events) {
      count = delta > 0 ? count + 1 : count - 1;
      if (count > worst) {
        worst = count;
        worst_t = t;
      }
    }
    if (worst > cap) {
      std::optional<std::size_t> culprit;
      for (const auto* st : list) {
        if (st->arrive == worst_t) {
          culprit = st->arrival_op;
        }
      }
      out.push_back({culprit, loc.is_site() ? 'c' : 'b',
                     to_string(loc) + " holds " + std::to_string(worst) + " qubits at once"});
    }
  }

  // (a): gate operands sit in the gate's zone for the whole gate.
  std::vector<std::vector<std::pair<double, double>>> gate_busy(nq);
  for (std::size_t i = 0; i < s.ops.size(); ++i) {
    const auto* g = std::get_if<GateOp>(&s.ops[i]);
    if (!g) {
      continue;
    }
    if (g->zone >= arch.n_sites) {
      out.push_back({i, 'a', "gate zone outside the architecture"});
      continue;
    }
    if (!detail::close_rel(g->duration, gate_duration(g->kind, arch), 1e-12)) {
      out.push_back({i, 'a', "gate duration does not match the architecture"});
    }
    const Location zone = Location::zone(g->zone);
    for (auto q : g->qubits) {
      if (q >= nq) {
        out.push_back({i, 'a', "gate on unknown qubit"});
        continue;
      }
      const bool present = std::any_of(stays.begin(), stays.end(), [&](const auto& st) {
        return st.qubit == q && st.loc == zone && st.arrive <= g->start + t_eps &&
               st.depart >= g->end() - t_eps;
      });
      if (!present) {
        out.push_back({i, 'a', "q" + std::to_string(q) + " is not held at " + to_string(zone) +
                                   " for the whole gate"});
      }
      for (const auto& [b0, b1] : gate_busy[q]) {
        if (g->start < b1 - t_eps && b0 < g->end() - t_eps) {
          out.push_back({i, 'a', "q" + std::to_string(q) + " has overlapping gates"});
        }
      }
      gate_busy[q].emplace_back(g->start, g->end());
    }
  }

  // (d): simultaneously moving qubits keep their spatial order.
  std::stable_sort(shuttle_ops.begin(), shuttle_ops.end(), [&](std::size_t a, std::size_t b) {
    return std::get<ShuttleOp>(s.ops[a]).start < std::get<ShuttleOp>(s.ops[b]).start;
  });
  auto pos_at = [&](const ShuttleOp& sh, double t) {
    const double x0 = position(sh.from, arch);
    const double x1 = position(sh.to, arch);
    const double f = sh.duration > 0.0 ? std::clamp((t - sh.start) / sh.duration, 0.0, 1.0) : 1.0;
    return x0 + (x1 - x0) * f;
  };
  for (std::size_t x = 0; x < shuttle_ops.size(); ++x) {
    const auto& a = std::get<ShuttleOp>(s.ops[shuttle_ops[x]]);
    if (a.from.index >= arch.n_sites || a.to.index >= arch.n_sites) {
      continue;
    }
    for (std::size_t y = x + 1; y < shuttle_ops.size(); ++y) {
      const auto& b = std::get<ShuttleOp>(s.ops[shuttle_ops[y]]);
      if (b.start >= a.end() - t_eps) {
        break;
      }
      if (b.qubit == a.qubit || b.from.index >= arch.n_sites || b.to.index >= arch.n_sites) {
        continue;
      }
      if (a.from.is_zone() && a.from == b.from) {
        continue;
      }
      const double t0 = std::max(a.start, b.start);
      const double t1 = std::min(a.end(), b.end());
      const double d0 = pos_at(a, t0) - pos_at(b, t0);
      const double d1 = pos_at(a, t1) - pos_at(b, t1);
      if ((d0 > x_eps && d1 < -x_eps) || (d0 < -x_eps && d1 > x_eps)) {
        out.push_back({shuttle_ops[y], 'd',
                       "q" + std::to_string(a.qubit) + " and q" + std::to_string(b.qubit) +
                           " cross while moving"});
      }
    }
  }

  // (e)
  for (std::size_t q = 0; q < nq; ++q) {
    if (!final_loc[q].is_site()) {
      out.push_back({std::nullopt, 'e', "q" + std::to_string(q) + " ends in " + to_string(final_loc[q])});
    }
  }

  // (f)
  if (s.per_qubit_error.size() != nq) {
    out.push_back({std::nullopt, 'f', "per-qubit error vector has the wrong size"});
  } else {
    for (std::size_t q = 0; q < nq; ++q) {
      if (!detail::close_rel(s.per_qubit_error[q], folded_error[q], 1e-12) &&
          std::abs(s.per_qubit_error[q] - folded_error[q]) > 0.0) {
        out.push_back({std::nullopt, 'f', "q" + std::to_string(q) + " accumulated error mismatch"});
      }
    }
  }

  // (g)
  double last = 0.0;
  for (const auto& op : s.ops) {
    last = std::max(last, op_end(op));
  }
  if (std::abs(s.total_time - last) > t_eps) {
    out.push_back({std::nullopt, 'g', "total time differs from the last op end"});
  }
  return out;
}

// Serialization. Times in ns rounded to 1 ps, velocities in m/s.
namespace detail {
inline double to_ps_ns(double seconds) { return std::round(seconds * 1e12) / 1e3; }

inline nlohmann::json location_json(const Location& l) {
  return {{"kind", l.is_site() ? "site" : "zone"}, {"idx", l.index}};
}

inline Location location_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind != "site" && kind != "zone") {
    throw std::invalid_argument("location kind must be 'site' or 'zone'");
  }
  const auto idx = j.at("idx").get<std::size_t>();
  return kind == "site" ? Location::site(idx) : Location::zone(idx);
}
} // namespace detail

inline nlohmann::json schedule_to_json(const Schedule& s) {
  nlohmann::json ops = nlohmann::json::array();
  for (const auto& op : s.ops) {
    if (const auto* sh = std::get_if<ShuttleOp>(&op)) {
      ops.push_back({{"type", "shuttle"},
                     {"q", sh->qubit},
                     {"from", detail::location_json(sh->from)},
                     {"to", detail::location_json(sh->to)},
                     {"t0_ns", detail::to_ps_ns(sh->start)},
                     {"v_mps", sh->velocity},
                     {"dC", sh->delta_c}});
    } else {
      const auto& g = std::get<GateOp>(op);
      ops.push_back({{"type", "gate"},
                     {"gate", g.gate},
                     {"kind", std::string(to_string(g.kind))},
                     {"qubits", g.qubits},
                     {"zone", g.zone},
                     {"t0_ns", detail::to_ps_ns(g.start)},
                     {"dur_ns", detail::to_ps_ns(g.duration)}});
    }
  }
  std::vector<nlohmann::json> final_layout;
  for (const auto& l : s.final_layout.assignment()) {
    final_layout.push_back(detail::location_json(l));
  }
  return {
      {"strategy", std::string(to_string(s.strategy))},
      {"architecture", s.arch},
      {"placement", s.initial},
      {"error_model", s.error},
      {"total_time_ns", detail::to_ps_ns(s.total_time)},
      {"per_qubit_dC", s.per_qubit_error},
      {"final_layout", final_layout},
      {"ops", ops},
  };
}

/// Reads a serialized schedule back. Shuttle durations are rederived from the
/// architecture; timestamps carry the 1 ps rounding of the file.
inline Schedule schedule_from_json(const nlohmann::json& j) {
  Schedule s;
  s.strategy = strategy_from_string(j.at("strategy").get<std::string>());
  j.at("architecture").get_to(s.arch);
  j.at("error_model").get_to(s.error);
  j.at("placement").get_to(s.initial);
  s.total_time = j.at("total_time_ns").get<double>() * units::ns;
  s.per_qubit_error = j.at("per_qubit_dC").get<std::vector<double>>();
  s.final_layout = LayoutState(s.arch, s.initial);
  for (const auto& o : j.at("ops")) {
    const auto type = o.at("type").get<std::string>();
    if (type == "shuttle") {
      ShuttleOp sh;
      sh.qubit = o.at("q").get<std::size_t>();
      sh.from = detail::location_from_json(o.at("from"));
      sh.to = detail::location_from_json(o.at("to"));
      sh.start = o.at("t0_ns").get<double>() * units::ns;
      sh.velocity = o.at("v_mps").get<double>();
      sh.distance = distance(sh.from, sh.to, s.arch);
      sh.duration = shuttle_time(sh.distance, sh.velocity);
      sh.delta_c = o.at("dC").get<double>();
      s.ops.emplace_back(sh);
    } else if (type == "gate") {
      GateOp g;
      g.gate = o.at("gate").get<std::size_t>();
      g.qubits = o.at("qubits").get<std::vector<std::size_t>>();
      g.zone = o.at("zone").get<std::size_t>();
      g.start = o.at("t0_ns").get<double>() * units::ns;
      g.duration = o.at("dur_ns").get<double>() * units::ns;
      const auto kind = o.at("kind").get<std::string>();
      bool found = false;
      for (int k = 0; k <= static_cast<int>(GateKind::BARRIER); ++k) {
        if (to_string(static_cast<GateKind>(k)) == kind) {
          g.kind = static_cast<GateKind>(k);
          found = true;
        }
      }
      if (!found) {
        throw std::invalid_argument("unknown gate kind '" + kind + "'");
      }
      s.ops.emplace_back(std::move(g));
    } else {
      throw std::invalid_argument("unknown op type '" + type + "'");
    }
  }
  for (const auto& op : s.ops) {
    if (const auto* sh = std::get_if<ShuttleOp>(&op)) {
      s.final_layout.move(sh->qubit, sh->to);
    }
  }
  return s;
}

} // namespace shuttle
