#pragma once

#include "shuttle/units.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace shuttle {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double electron_volt = 1.602176634e-19; // J
} // namespace constants

/// Conveyor-belt dephasing parameters, SI units.
struct ErrorModelParams {
  double l_c = 100e-9;                                   // m
  double T2_star = 20e-6;                                // s
  double L_dot = 20e-9;                                  // m
  double E_vs0 = 100e-6 * constants::electron_volt;      // J
  double d_bar = 30e-9;                                  // m
  double a_x = 0.05 * std::numbers::pi * 1e9;            // rad/m
  double hbar = constants::hbar;

  void validate() const {
    for (double x : {l_c, T2_star, L_dot, E_vs0, d_bar, a_x, hbar}) {
      if (!std::isfinite(x) || x <= 0.0) {
        throw std::invalid_argument("error model parameters must be positive and finite");
      }
    }
  }

  bool operator==(const ErrorModelParams&) const = default;
};

/// The four contributions to the phase error of one shuttle:
/// g-factor fluctuations, spin-valley hotspot, and valley relaxation at high
/// and low irregularity density.
struct PhaseErrorTerms {
  double g_factor = 0.0;
  double hotspot = 0.0;
  double valley_dense = 0.0;
  double valley_sparse = 0.0;

  double sum() const { return g_factor + hotspot + valley_dense + valley_sparse; }
};

namespace detail {
inline void check_velocity(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument("velocity must be positive and finite");
  }
}
inline void check_length(double L) {
  if (!(L >= 0.0) || !std::isfinite(L)) {
    throw std::invalid_argument("shuttle length must be nonnegative and finite");
  }
}
// Exponent rate of the sparse-valley term: value is exp(-k / v).
inline double sparse_rate(const ErrorModelParams& p) {
  return 0.03 * std::numbers::ln10 * p.E_vs0 * p.L_dot / p.hbar;
}
} // namespace detail

/// Velocity `v` in m/s, shuttle length `L_s` in m.
inline PhaseErrorTerms phase_error_terms(double v, double L_s, const ErrorModelParams& p = {}) {
  detail::check_velocity(v);
  detail::check_length(L_s);
  PhaseErrorTerms t;
  const double vt = v * p.T2_star;
  t.g_factor = 2.0 * p.l_c * L_s / (vt * vt);
  // The hotspot bound takes v as its magnitude in m/s.
  t.hotspot = 1e-4 / v;
  const double r = p.hbar * p.a_x * v / p.E_vs0;
  const double ax_ld = p.a_x * p.L_dot;
  t.valley_dense = 0.01 * 0.5 * r * r * std::exp(ax_ld * ax_ld / 2.0);
  t.valley_sparse = 0.01 * (L_s / p.d_bar) * std::exp(-detail::sparse_rate(p) / v);
  return t;
}

inline double phase_error(double v, double L_s, const ErrorModelParams& p = {}) {
  return phase_error_terms(v, L_s, p).sum();
}

/// Analytic derivative of phase_error with respect to v.
inline double d_phase_error_dv(double v, double L_s, const ErrorModelParams& p = {}) {
  const auto t = phase_error_terms(v, L_s, p);
  const double k = detail::sparse_rate(p);
  return -2.0 * t.g_factor / v - t.hotspot / v + 2.0 * t.valley_dense / v +
         t.valley_sparse * k / (v * v);
}

struct VelocityBracket {
  double v_min = 0.01;
  double v_max = 1000.0;
};

/// Golden-section minimization of `f` on [a, b]. Stops once the bracket is
/// narrower than `tol`.
template <class F>
double golden_section_minimize(F&& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Velocity in [v_min, v_max] minimizing the phase error of an `L_s` shuttle.
///
/// A 64-point geometric scan picks the neighbourhood of the global minimum,
/// then golden-section search on ln v refines it to 1e-6 in ln v. Bracket
/// endpoints are returned when they win.
inline double optimal_velocity(double L_s, const ErrorModelParams& p = {},
                               VelocityBracket bracket = {}) {
  detail::check_length(L_s);
  if (!(bracket.v_min > 0.0) || !(bracket.v_max > bracket.v_min) ||
      !std::isfinite(bracket.v_max)) {
    throw std::invalid_argument("velocity bracket must satisfy 0 < v_min < v_max");
  }
  const double lo = std::log(bracket.v_min);
  const double hi = std::log(bracket.v_max);
  auto f = [&](double ln_v) { return phase_error(std::exp(ln_v), L_s, p); };

  constexpr int scan = 64;
  const double step = (hi - lo) / (scan - 1);
  int best = 0;
  double best_val = f(lo);
  for (int i = 1; i < scan; ++i) {
    const double x = i == scan - 1 ? hi : lo + step * i;
    const double val = f(x);
    if (val < best_val) {
      best_val = val;
      best = i;
    }
  }
  const double a = best == 0 ? lo : lo + step * (best - 1);
  const double b = best == scan - 1 ? hi : lo + step * (best + 1);
  double x = golden_section_minimize(f, a, b, 1e-6);
  x = std::clamp(x, lo, hi);

  double v = std::exp(x);
  double fv = phase_error(v, L_s, p);
  for (double edge : {bracket.v_min, bracket.v_max}) {
    const double fe = phase_error(edge, L_s, p);
    if (fe < fv) {
      v = edge;
      fv = fe;
    }
  }
  return v;
}

// JSON in tabulated units: nm, us, ueV, pi/nm.
inline void to_json(nlohmann::json& j, const ErrorModelParams& p) {
  j = nlohmann::json{
      {"l_c_nm", units::in_units(p.l_c, 1e-9)},
      {"T2_star_us", units::in_units(p.T2_star, 1e-6)},
      {"L_dot_nm", units::in_units(p.L_dot, 1e-9)},
      {"E_vs0_ueV", units::in_units(p.E_vs0, 1e-6 * constants::electron_volt)},
      {"d_bar_nm", units::in_units(p.d_bar, 1e-9)},
      {"a_x_pi_per_nm", units::in_units(p.a_x, std::numbers::pi * 1e9)},
  };
}

inline void from_json(const nlohmann::json& j, ErrorModelParams& p) {
  static const char* const keys[] = {"l_c_nm",   "T2_star_us", "L_dot_nm",
                                     "E_vs0_ueV", "d_bar_nm",  "a_x_pi_per_nm"};
  if (!j.is_object()) {
    throw std::invalid_argument("error model config must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(keys), std::end(keys), key) == std::end(keys)) {
      throw std::invalid_argument("unknown error model key '" + key + "'");
    }
  }
  if (j.contains("l_c_nm")) p.l_c = j.at("l_c_nm").get<double>() * 1e-9;
  if (j.contains("T2_star_us")) p.T2_star = j.at("T2_star_us").get<double>() * 1e-6;
  if (j.contains("L_dot_nm")) p.L_dot = j.at("L_dot_nm").get<double>() * 1e-9;
  if (j.contains("E_vs0_ueV")) p.E_vs0 = j.at("E_vs0_ueV").get<double>() * 1e-6 * constants::electron_volt;
  if (j.contains("d_bar_nm")) p.d_bar = j.at("d_bar_nm").get<double>() * 1e-9;
  if (j.contains("a_x_pi_per_nm")) p.a_x = j.at("a_x_pi_per_nm").get<double>() * std::numbers::pi * 1e9;
}

} // namespace shuttle
