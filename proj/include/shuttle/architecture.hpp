#pragma once

#include "shuttle/units.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace shuttle {

/// 1D shuttling bus: storage site i at i*pitch, manipulation zone j just right
/// of site j at j*pitch + offset. Lengths in meters, durations in seconds.
struct ArchitectureSpec {
  std::size_t n_sites = 16;
  double site_pitch = 2.0 / units::per_um;
  double zone_offset = 1.0 / units::per_um;
  double default_velocity = 10.0; // m/s
  double t_1q = 20.0 / units::per_ns;
  double t_2q = 45.0 / units::per_ns;
  /// Readout duration, used only when measurements are scheduled.
  double t_measure = 1000.0 / units::per_ns;

  std::size_t n_zones() const { return n_sites; }

  void validate() const {
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (n_sites < 2) {
      throw std::invalid_argument("architecture needs at least 2 storage sites");
    }
    if (!positive(site_pitch) || !positive(zone_offset) || !positive(default_velocity) ||
        !positive(t_1q) || !positive(t_2q) || !positive(t_measure)) {
      throw std::invalid_argument("architecture lengths, speeds and durations must be positive");
    }
    if (zone_offset >= site_pitch) {
      throw std::invalid_argument("zone offset must be smaller than the site pitch");
    }
  }

  static ArchitectureSpec with_sites(std::size_t n) {
    ArchitectureSpec spec;
    spec.n_sites = n;
    return spec;
  }

  bool operator==(const ArchitectureSpec&) const = default;
};

struct Location {
  enum class Kind { Storage, Zone };
  Kind kind = Kind::Storage;
  std::size_t index = 0;

  static constexpr Location site(std::size_t i) { return {Kind::Storage, i}; }
  static constexpr Location zone(std::size_t j) { return {Kind::Zone, j}; }

  constexpr bool is_site() const { return kind == Kind::Storage; }
  constexpr bool is_zone() const { return kind == Kind::Zone; }

  auto operator<=>(const Location&) const = default;
};

inline std::string to_string(const Location& loc) {
  return (loc.is_site() ? "Q" : "O") + std::to_string(loc.index);
}

inline void check_location(const Location& loc, const ArchitectureSpec& spec) {
  if (loc.index >= spec.n_sites) {
    throw std::out_of_range("location " + to_string(loc) + " outside architecture of " +
                            std::to_string(spec.n_sites) + " sites");
  }
}

/// Position along the bus in meters.
inline double position(const Location& loc, const ArchitectureSpec& spec) {
  check_location(loc, spec);
  const double base = static_cast<double>(loc.index) * spec.site_pitch;
  return loc.is_site() ? base : base + spec.zone_offset;
}

inline double distance(const Location& a, const Location& b, const ArchitectureSpec& spec) {
  return std::abs(position(a, spec) - position(b, spec));
}

/// Seconds needed to move `dist` meters at `velocity` m/s.
inline double shuttle_time(double dist, double velocity) {
  if (!(velocity > 0.0) || !std::isfinite(velocity)) {
    throw std::invalid_argument("shuttle velocity must be positive");
  }
  if (!(dist >= 0.0)) {
    throw std::invalid_argument("shuttle distance must be nonnegative");
  }
  return dist / velocity;
}

// JSON: lengths in um, durations in ns, speed in m/s.
inline void to_json(nlohmann::json& j, const ArchitectureSpec& s) {
  j = nlohmann::json{
      {"n_sites", s.n_sites},
      {"site_pitch_um", units::in_units(s.site_pitch, units::um)},
      {"zone_offset_um", units::in_units(s.zone_offset, units::um)},
      {"default_velocity_mps", s.default_velocity},
      {"t_1q_ns", units::in_units(s.t_1q, units::ns)},
      {"t_2q_ns", units::in_units(s.t_2q, units::ns)},
      {"t_measure_ns", units::in_units(s.t_measure, units::ns)},
  };
}

/// Missing keys keep their current values, so a partial object acts as an
/// override.
inline void from_json(const nlohmann::json& j, ArchitectureSpec& s) {
  static const char* const keys[] = {"n_sites", "site_pitch_um", "zone_offset_um",
                                     "default_velocity_mps", "t_1q_ns", "t_2q_ns",
                                     "t_measure_ns"};
  if (!j.is_object()) {
    throw std::invalid_argument("architecture config must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(keys), std::end(keys), key) == std::end(keys)) {
      throw std::invalid_argument("unknown architecture key '" + key + "'");
    }
  }
  if (j.contains("n_sites")) s.n_sites = j.at("n_sites").get<std::size_t>();
  if (j.contains("site_pitch_um")) s.site_pitch = j.at("site_pitch_um").get<double>() / units::per_um;
  if (j.contains("zone_offset_um")) s.zone_offset = j.at("zone_offset_um").get<double>() / units::per_um;
  if (j.contains("default_velocity_mps")) s.default_velocity = j.at("default_velocity_mps").get<double>();
  if (j.contains("t_1q_ns")) s.t_1q = j.at("t_1q_ns").get<double>() / units::per_ns;
  if (j.contains("t_2q_ns")) s.t_2q = j.at("t_2q_ns").get<double>() / units::per_ns;
  if (j.contains("t_measure_ns")) s.t_measure = j.at("t_measure_ns").get<double>() / units::per_ns;
}

} // namespace shuttle
