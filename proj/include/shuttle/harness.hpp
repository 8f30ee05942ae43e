#pragma once

#include "shuttle/benchgen.hpp"
#include "shuttle/circuit.hpp"
#include "shuttle/mapper.hpp"
#include "shuttle/metrics.hpp"
#include "shuttle/placement.hpp"
#include "shuttle/schedule.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <future>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shuttle {

enum class PlacementMode { Spectral, Random, Identity };

inline constexpr std::string_view to_string(PlacementMode m) {
  switch (m) {
  case PlacementMode::Spectral: return "spectral";
  case PlacementMode::Random: return "random";
  case PlacementMode::Identity: return "identity";
  }
  return "?";
}

inline PlacementMode placement_mode_from_string(std::string_view s) {
  for (auto m : {PlacementMode::Spectral, PlacementMode::Random, PlacementMode::Identity}) {
    if (to_string(m) == s) {
      return m;
    }
  }
  throw std::invalid_argument("unknown placement mode '" + std::string(s) + "'");
}

/// A mapper produced a schedule that breaks the movement rules.
class ValidationFailure : public std::runtime_error {
public:
  ValidationFailure(Strategy s, std::vector<Violation> v)
      : std::runtime_error(std::string(to_string(s)) + " produced an invalid schedule: " +
                           (v.empty() ? std::string() : to_string(v.front()))),
        violations_(std::move(v)) {}

  const std::vector<Violation>& violations() const { return violations_; }

private:
  std::vector<Violation> violations_;
};

/// A circuit after decomposition and slicing, with its interaction graph.
struct PreparedCircuit {
  Circuit source;
  SlicedCircuit sliced;
  InteractionGraph graph;

  std::size_t num_qubits() const { return source.num_qubits; }
};

inline PreparedCircuit prepare(const Circuit& c, DecomposeOptions opts = {}) {
  PreparedCircuit p;
  p.source = c;
  p.sliced = slice(decompose(c, opts));
  p.graph = build_interaction_graph(p.sliced);
  return p;
}

inline Placement make_placement(PlacementMode mode, const PreparedCircuit& c, std::uint64_t seed) {
  switch (mode) {
  case PlacementMode::Spectral:
    return c.num_qubits() < 2 ? identity_placement(c.num_qubits()) : spectral_placement(c.graph);
  case PlacementMode::Random: return random_placement(c.num_qubits(), seed);
  case PlacementMode::Identity: return identity_placement(c.num_qubits());
  }
  throw std::invalid_argument("unknown placement mode");
}

/// Architecture sized for `num_qubits`, other fields taken from `base`.
inline ArchitectureSpec sized_architecture(ArchitectureSpec base, std::size_t num_qubits) {
  base.n_sites = std::max<std::size_t>({base.n_sites, num_qubits, 2});
  return base;
}

struct CellResult {
  Schedule schedule;
  CompilationReport report;
};

/// Maps, validates and summarizes one (strategy, placement) cell. Throws
/// ValidationFailure on any rule violation.
inline CellResult run_cell(Strategy strategy, const PreparedCircuit& c, const ArchitectureSpec& arch,
                           const Placement& placement, const ErrorModelParams& err) {
  auto schedule = map_circuit(strategy, c.sliced, arch, placement, err);
  auto violations = validate_schedule(schedule, arch);
  if (!violations.empty()) {
    throw ValidationFailure(strategy, std::move(violations));
  }
  auto report = summarize(schedule);
  return {std::move(schedule), std::move(report)};
}

struct BenchConfig {
  std::size_t n = 16;
  std::uint64_t circuit_seed = 0;
  /// Random placements use seeds placement_seed .. placement_seed + runs - 1.
  std::uint64_t placement_seed = 0;
  std::size_t runs = 10;
  std::vector<Family> families{all_families.begin(), all_families.end()};
  std::vector<Strategy> strategies{all_strategies.begin(), all_strategies.end()};
  ArchitectureSpec arch{};
  ErrorModelParams error{};
  bool parallel = true;
};

struct BenchRow {
  Family family{};
  Strategy strategy{};
  PlacementMode placement{};
  std::optional<std::uint64_t> seed; // random placements only
  std::size_t depth = 0;
  CompilationReport report;
};

inline BenchmarkSpec family_spec(Family f, std::size_t n, std::uint64_t seed) {
  BenchmarkSpec spec;
  spec.family = f;
  spec.n = n;
  spec.seed = seed;
  return spec;
}

namespace detail {

inline std::vector<BenchRow> bench_family(const BenchConfig& cfg, Family f) {
  const auto c = prepare(generate(family_spec(f, cfg.n, cfg.circuit_seed)));
  const auto arch = sized_architecture(cfg.arch, c.num_qubits());
  std::vector<BenchRow> rows;
  for (auto s : cfg.strategies) {
    const auto spectral = make_placement(PlacementMode::Spectral, c, 0);
    rows.push_back({f, s, PlacementMode::Spectral, std::nullopt, c.sliced.depth(),
                    run_cell(s, c, arch, spectral, cfg.error).report});
    for (std::size_t r = 0; r < cfg.runs; ++r) {
      const auto seed = cfg.placement_seed + r;
      const auto p = make_placement(PlacementMode::Random, c, seed);
      rows.push_back({f, s, PlacementMode::Random, seed, c.sliced.depth(),
                      run_cell(s, c, arch, p, cfg.error).report});
    }
  }
  return rows;
}

template <class T, class F>
std::vector<T> map_families(const std::vector<Family>& families, bool parallel, F&& fn) {
  std::vector<T> out;
  if (!parallel) {
    for (auto f : families) {
      auto part = fn(f);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  std::vector<std::future<std::vector<T>>> futures;
  for (auto f : families) {
    futures.push_back(std::async(std::launch::async, [&fn, f] { return fn(f); }));
  }
  for (auto& fut : futures) {
    auto part = fut.get();
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

} // namespace detail

/// Every family x strategy x {spectral, random seeds}. Rows come out ordered
/// by family, strategy, placement (spectral first), then seed.
inline std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  return detail::map_families<BenchRow>(cfg.families, cfg.parallel,
                                        [&](Family f) { return detail::bench_family(cfg, f); });
}

inline constexpr const char* bench_csv_header =
    "family,strategy,placement,seed,total_time_ns,mean_dC,std_dC";

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = std::string(bench_csv_header) + "\n";
  for (const auto& r : rows) {
    out += std::string(to_string(r.family)) + "," + std::string(to_string(r.strategy)) + "," +
           std::string(to_string(r.placement)) + "," +
           (r.seed ? std::to_string(*r.seed) : std::string()) + "," +
           format_double(r.report.total_time / units::ns) + "," + format_double(r.report.mean_error) +
           "," + format_double(r.report.std_error) + "\n";
  }
  return out;
}

/// Aggregate of one (family, strategy, placement) group of bench rows.
struct BenchSummary {
  Family family{};
  Strategy strategy{};
  PlacementMode placement{};
  MeanStd total_time;
  MeanStd mean_error;
};

inline std::vector<BenchSummary> summarize_bench(const std::vector<BenchRow>& rows) {
  std::vector<BenchSummary> out;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    std::vector<double> times, errors;
    while (j < rows.size() && rows[j].family == rows[i].family &&
           rows[j].strategy == rows[i].strategy && rows[j].placement == rows[i].placement) {
      times.push_back(rows[j].report.total_time);
      errors.push_back(rows[j].report.mean_error);
      ++j;
    }
    out.push_back({rows[i].family, rows[i].strategy, rows[i].placement, mean_std(times),
                   mean_std(errors)});
    i = j;
  }
  return out;
}

struct SweepConfig {
  std::size_t n_min = 10;
  std::size_t n_max = 30;
  std::size_t n_step = 5;
  std::uint64_t circuit_seed = 0;
  std::uint64_t placement_seed = 0;
  std::size_t runs = 10;
  std::vector<Family> families{all_families.begin(), all_families.end()};
  std::vector<Strategy> strategies{all_strategies.begin(), all_strategies.end()};
  ArchitectureSpec arch{};
  ErrorModelParams error{};
  bool parallel = true;
};

struct SweepRow {
  Family family{};
  std::size_t n = 0;
  std::size_t depth = 0;
  Strategy strategy{};
  /// Mean random-placement metric over the spectral-placement metric.
  std::optional<double> time_ratio;
  std::optional<double> error_ratio;
};

/// Rows ordered by family, n, strategy.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  if (cfg.n_step == 0 || cfg.n_min > cfg.n_max) {
    throw std::invalid_argument("sweep range must be non-empty with a positive step");
  }
  return detail::map_families<SweepRow>(cfg.families, cfg.parallel, [&](Family f) {
    std::vector<SweepRow> rows;
    for (std::size_t n = cfg.n_min; n <= cfg.n_max; n += cfg.n_step) {
      BenchConfig bc;
      bc.n = n;
      bc.circuit_seed = cfg.circuit_seed;
      bc.placement_seed = cfg.placement_seed;
      bc.runs = cfg.runs;
      bc.strategies = cfg.strategies;
      bc.arch = cfg.arch;
      bc.error = cfg.error;
      const auto summaries = summarize_bench(detail::bench_family(bc, f));
      for (auto s : cfg.strategies) {
        const BenchSummary* spectral = nullptr;
        const BenchSummary* random = nullptr;
        for (const auto& sm : summaries) {
          if (sm.strategy == s) {
            (sm.placement == PlacementMode::Spectral ? spectral : random) = &sm;
          }
        }
        const auto c = prepare(generate(family_spec(f, n, cfg.circuit_seed)));
        rows.push_back({f, n, c.sliced.depth(), s,
                        safe_ratio(random->total_time.mean, spectral->total_time.mean),
                        safe_ratio(random->mean_error.mean, spectral->mean_error.mean)});
      }
    }
    return rows;
  });
}

inline constexpr const char* sweep_csv_header = "family,n,depth,strategy,time_ratio,error_ratio";

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  auto opt = [](const std::optional<double>& x) { return x ? format_double(*x) : std::string("nan"); };
  std::string out = std::string(sweep_csv_header) + "\n";
  for (const auto& r : rows) {
    out += std::string(to_string(r.family)) + "," + std::to_string(r.n) + "," +
           std::to_string(r.depth) + "," + std::string(to_string(r.strategy)) + "," +
           opt(r.time_ratio) + "," + opt(r.error_ratio) + "\n";
  }
  return out;
}

} // namespace shuttle
