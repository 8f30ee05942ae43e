// Maps a 12-qubit QFT with every strategy and prints time and error next to
// the baseline.

#include "shuttle/shuttle.hpp"

#include <cstdio>

int main() {
  using namespace shuttle;
  BenchmarkSpec spec;
  spec.family = Family::QFT;
  spec.n = 12;
  const auto c = prepare(generate(spec));
  const auto arch = ArchitectureSpec::with_sites(12);
  const auto placement = make_placement(PlacementMode::Spectral, c, 0);

  std::vector<CompilationReport> reports;
  for (auto s : all_strategies) {
    reports.push_back(run_cell(s, c, arch, placement, {}).report);
  }
  const auto ratios = compare(reports);
  std::printf("%-18s %12s %12s %8s %8s\n", "strategy", "time [us]", "mean dC", "time_x", "err_x");
  for (std::size_t k = 0; k < reports.size(); ++k) {
    std::printf("%-18s %12.3f %12.4e %8.3f %8.3f\n", std::string(to_string(reports[k].strategy)).c_str(),
                reports[k].total_time * 1e6, reports[k].mean_error, *ratios[k].time_ratio,
                *ratios[k].error_ratio);
  }
}
