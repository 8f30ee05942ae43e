#pragma once

#include "shuttle/schedule.hpp"

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace shuttle {

struct CompilationReport {
  Strategy strategy = Strategy::Baseline;
  double total_time = 0.0; // s
  std::vector<double> qubit_errors;
  double mean_error = 0.0;
  double std_error = 0.0; // population std over all qubits
  std::size_t n_shuttles = 0;
  double total_distance = 0.0; // m
  std::size_t n_gates_1q = 0;
  std::size_t n_gates_2q = 0;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

/// Population mean and standard deviation; zeros for an empty sample.
inline MeanStd mean_std(const std::vector<double>& xs) {
  if (xs.empty()) {
    return {};
  }
  double sum = 0.0;
  for (double x : xs) {
    sum += x;
  }
  const double mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) {
    ss += (x - mean) * (x - mean);
  }
  return {mean, std::sqrt(ss / static_cast<double>(xs.size()))};
}

inline CompilationReport summarize(const Schedule& s) {
  CompilationReport r;
  r.strategy = s.strategy;
  r.total_time = s.total_time;
  r.qubit_errors = s.per_qubit_error;
  const auto ms = mean_std(r.qubit_errors);
  r.mean_error = ms.mean;
  r.std_error = ms.std;
  for (const auto& op : s.ops) {
    if (const auto* sh = std::get_if<ShuttleOp>(&op)) {
      ++r.n_shuttles;
      r.total_distance += sh->distance;
    } else {
      const auto& g = std::get<GateOp>(op);
      (g.qubits.size() == 2 ? r.n_gates_2q : r.n_gates_1q) += 1;
    }
  }
  return r;
}

struct RatioRow {
  Strategy strategy = Strategy::Baseline;
  /// Baseline time over strategy time; empty when undefined.
  std::optional<double> time_ratio;
  /// Baseline mean error over strategy mean error; empty when undefined.
  std::optional<double> error_ratio;
};

inline std::optional<double> safe_ratio(double num, double den) {
  if (den == 0.0 || !std::isfinite(num) || !std::isfinite(den)) {
    return std::nullopt;
  }
  return num / den;
}

inline std::vector<RatioRow> compare(const std::vector<CompilationReport>& reports,
                                     Strategy baseline = Strategy::Baseline) {
  const CompilationReport* base = nullptr;
  for (const auto& r : reports) {
    if (r.strategy == baseline) {
      base = &r;
      break;
    }
  }
  if (!base) {
    throw std::invalid_argument("baseline strategy '" + std::string(to_string(baseline)) +
                                "' missing from reports");
  }
  std::vector<RatioRow> out;
  for (const auto& r : reports) {
    out.push_back({r.strategy, safe_ratio(base->total_time, r.total_time),
                   safe_ratio(base->mean_error, r.mean_error)});
  }
  return out;
}

inline constexpr const char* report_csv_header =
    "strategy,total_time_ns,mean_dC,std_dC,n_shuttles,total_distance_um";

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string to_csv_row(const CompilationReport& r) {
  return std::string(to_string(r.strategy)) + "," + format_double(r.total_time / units::ns) + "," +
         format_double(r.mean_error) + "," + format_double(r.std_error) + "," +
         std::to_string(r.n_shuttles) + "," + format_double(r.total_distance / units::um);
}

inline std::string to_csv(const std::vector<CompilationReport>& reports) {
  std::string out = std::string(report_csv_header) + "\n";
  for (const auto& r : reports) {
    out += to_csv_row(r) + "\n";
  }
  return out;
}

inline void to_json(nlohmann::json& j, const CompilationReport& r) {
  j = {{"strategy", std::string(to_string(r.strategy))},
       {"total_time_ns", r.total_time / units::ns},
       {"mean_dC", r.mean_error},
       {"std_dC", r.std_error},
       {"n_shuttles", r.n_shuttles},
       {"total_distance_um", r.total_distance / units::um},
       {"n_gates_1q", r.n_gates_1q},
       {"n_gates_2q", r.n_gates_2q},
       {"qubit_dC", r.qubit_errors}};
}

inline void to_json(nlohmann::json& j, const RatioRow& r) {
  j = {{"strategy", std::string(to_string(r.strategy))},
       {"time_ratio", r.time_ratio ? nlohmann::json(*r.time_ratio) : nlohmann::json(nullptr)},
       {"error_ratio", r.error_ratio ? nlohmann::json(*r.error_ratio) : nlohmann::json(nullptr)}};
}

} // namespace shuttle
