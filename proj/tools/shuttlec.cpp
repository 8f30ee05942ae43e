// shuttlec: compile circuits onto the shuttling bus, run the benchmark
// comparison and the placement sweep.

#include "shuttle/shuttle.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace shuttle;

namespace {

enum Exit { ok = 0, parse_error = 1, invalid_config = 2, validation_failure = 3 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string gen;
  std::size_t n = 16;
  std::uint64_t seed = 0;
  std::string strategy = "all";
  std::string placement = "spectral";
  std::size_t runs = 10;
  std::uint64_t placement_seed = 0;
  std::string arch_config;
  std::string error_config;
  std::string config;
  std::string out = ".";
  std::string format = "json,csv";
  bool keep_measure = false;
  bool serial = false;
  std::string families = "all";
  std::size_t n_min = 10;
  std::size_t n_max = 30;
  std::size_t n_step = 5;
  json arch_inline;
  json error_inline;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read '" + path + "'");
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot write '" + path.string() + "'");
  }
  out << text;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Config-file values fill in every option the command line left unset.
void apply_config(CLI::App& cmd, Options& o) {
  if (o.config.empty()) {
    return;
  }
  const json cfg = read_json(o.config);
  if (!cfg.is_object()) {
    throw ConfigError("config file must hold a JSON object");
  }
  auto unset = [&](const char* flag) { return cmd.get_option_no_throw(flag) == nullptr ||
                                              cmd.get_option(flag)->count() == 0; };
  static const std::vector<std::string> known = {
      "input", "gen",    "n",            "seed",     "strategy", "placement", "runs",
      "placement_seed",  "out",          "format",   "keep_measure", "families", "n_min",
      "n_max", "n_step", "architecture", "error_model"};
  try {
    for (const auto& [key, value] : cfg.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw ConfigError("unknown config key '" + key + "'");
      }
      if (key == "input" && unset("--input")) o.input = value.get<std::string>();
      if (key == "gen" && unset("--gen")) o.gen = value.get<std::string>();
      if (key == "n" && unset("--n")) o.n = value.get<std::size_t>();
      if (key == "seed" && unset("--seed")) o.seed = value.get<std::uint64_t>();
      if (key == "strategy" && unset("--strategy")) o.strategy = value.get<std::string>();
      if (key == "placement" && unset("--placement")) o.placement = value.get<std::string>();
      if (key == "runs" && unset("--runs")) o.runs = value.get<std::size_t>();
      if (key == "placement_seed" && unset("--placement-seed")) o.placement_seed = value.get<std::uint64_t>();
      if (key == "out" && unset("--out")) o.out = value.get<std::string>();
      if (key == "format" && unset("--format")) o.format = value.get<std::string>();
      if (key == "keep_measure" && unset("--keep-measure")) o.keep_measure = value.get<bool>();
      if (key == "families" && unset("--families")) o.families = value.get<std::string>();
      if (key == "n_min" && unset("--n-min")) o.n_min = value.get<std::size_t>();
      if (key == "n_max" && unset("--n-max")) o.n_max = value.get<std::size_t>();
      if (key == "n_step" && unset("--n-step")) o.n_step = value.get<std::size_t>();
      if (key == "architecture") o.arch_inline = value;
      if (key == "error_model") o.error_inline = value;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
}

ArchitectureSpec load_arch(const Options& o) {
  ArchitectureSpec arch;
  try {
    if (!o.arch_inline.is_null()) from_json(o.arch_inline, arch);
    if (!o.arch_config.empty()) from_json(read_json(o.arch_config), arch);
    arch.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("architecture: ") + e.what());
  }
  return arch;
}

ErrorModelParams load_error(const Options& o) {
  ErrorModelParams p;
  try {
    if (!o.error_inline.is_null()) from_json(o.error_inline, p);
    if (!o.error_config.empty()) from_json(read_json(o.error_config), p);
    p.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("error model: ") + e.what());
  }
  return p;
}

std::vector<Strategy> strategies_of(const std::string& s) {
  if (s == "all") {
    return {all_strategies.begin(), all_strategies.end()};
  }
  std::vector<Strategy> out;
  try {
    for (const auto& name : split(s)) out.push_back(strategy_from_string(name));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (out.empty()) throw ConfigError("no strategy selected");
  return out;
}

std::vector<Family> families_of(const std::string& s) {
  if (s == "all") {
    return {all_families.begin(), all_families.end()};
  }
  std::vector<Family> out;
  try {
    for (const auto& name : split(s)) out.push_back(family_from_string(name));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (out.empty()) throw ConfigError("no benchmark family selected");
  return out;
}

struct Formats {
  bool json = false;
  bool csv = false;
};

Formats formats_of(const std::string& s) {
  Formats f;
  for (const auto& x : split(s)) {
    if (x == "json") f.json = true;
    else if (x == "csv") f.csv = true;
    else throw ConfigError("unknown output format '" + x + "'");
  }
  return f;
}

fs::path prepare_out(const Options& o) {
  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) {
    throw ConfigError("cannot create output directory '" + o.out + "'");
  }
  return fs::path(o.out);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

int cmd_compile(const Options& o) {
  if (o.input.empty() == o.gen.empty()) {
    throw ConfigError("give exactly one of --input and --gen");
  }
  const auto mode = [&] {
    try {
      return placement_mode_from_string(o.placement);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  if (mode == PlacementMode::Random && o.runs == 0) {
    throw ConfigError("--runs must be at least 1");
  }
  const auto strategies = strategies_of(o.strategy);
  const auto formats = formats_of(o.format);
  const auto err = load_error(o);
  auto arch = load_arch(o);

  Circuit source;
  if (!o.input.empty()) {
    source = parse_qasm(read_file(o.input));
    if (source.name.empty()) source.name = fs::path(o.input).stem().string();
  } else {
    BenchmarkSpec spec;
    try {
      spec.family = family_from_string(o.gen);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    spec.n = o.n;
    spec.seed = o.seed;
    try {
      source = generate(spec);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (source.num_qubits > arch.n_sites) {
    arch.n_sites = source.num_qubits;
  }
  const auto c = prepare(source, {.keep_measurements = o.keep_measure});
  const auto out_dir = prepare_out(o);
  const std::string stem = source.name.empty() ? "circuit" : source.name;

  std::vector<std::uint64_t> seeds;
  if (mode == PlacementMode::Random) {
    for (std::size_t r = 0; r < o.runs; ++r) seeds.push_back(o.placement_seed + r);
  } else {
    seeds.push_back(0);
  }

  std::string csv = "placement,seed," + std::string(report_csv_header) + "\n";
  json report = {{"circuit", stem},
                 {"num_qubits", source.num_qubits},
                 {"depth", c.sliced.depth()},
                 {"placement", std::string(to_string(mode))},
                 {"runs", json::array()}};
  std::vector<CompilationReport> first_run;
  std::vector<std::vector<double>> times(strategies.size()), errors(strategies.size());

  for (auto seed : seeds) {
    const auto placement = make_placement(mode, c, seed);
    json run = {{"seed", seed}, {"reports", json::array()}};
    for (std::size_t k = 0; k < strategies.size(); ++k) {
      const auto cell = run_cell(strategies[k], c, arch, placement, err);
      const std::string tag = stem + "_" + std::string(to_string(strategies[k])) +
                              (mode == PlacementMode::Random ? "_seed" + std::to_string(seed) : "");
      if (formats.json) {
        write_file(out_dir / (tag + ".schedule.json"), schedule_to_json(cell.schedule).dump(1) + "\n");
      }
      csv += std::string(to_string(mode)) + "," +
             (mode == PlacementMode::Random ? std::to_string(seed) : std::string()) + "," +
             to_csv_row(cell.report) + "\n";
      run["reports"].push_back(cell.report);
      times[k].push_back(cell.report.total_time);
      errors[k].push_back(cell.report.mean_error);
      if (seed == seeds.front()) first_run.push_back(cell.report);
    }
    report["runs"].push_back(run);
  }

  std::vector<CompilationReport> mean_reports;
  for (std::size_t k = 0; k < strategies.size(); ++k) {
    const auto t = mean_std(times[k]);
    const auto e = mean_std(errors[k]);
    CompilationReport r;
    r.strategy = strategies[k];
    r.total_time = t.mean;
    r.mean_error = e.mean;
    mean_reports.push_back(r);
    std::cout << stem << " " << to_string(strategies[k]) << " " << to_string(mode)
              << ": time " << fmt("%.3f", t.mean / units::us) << " us";
    if (seeds.size() > 1) std::cout << " +- " << fmt("%.3f", t.std / units::us);
    std::cout << ", mean dC " << fmt("%.4e", e.mean);
    if (seeds.size() > 1) std::cout << " +- " << fmt("%.2e", e.std);
    std::cout << "\n";
  }
  const bool have_baseline =
      std::find(strategies.begin(), strategies.end(), Strategy::Baseline) != strategies.end();
  if (have_baseline) {
    const auto rows = compare(mean_reports);
    report["comparison"] = rows;
    std::cout << "strategy            time_x   error_x\n";
    for (const auto& r : rows) {
      char line[96];
      std::snprintf(line, sizeof line, "%-18s %7.3f %9.3f\n", std::string(to_string(r.strategy)).c_str(),
                    r.time_ratio.value_or(std::nan("")), r.error_ratio.value_or(std::nan("")));
      std::cout << line;
    }
  }
  if (formats.csv) write_file(out_dir / (stem + "_report.csv"), csv);
  if (formats.json) write_file(out_dir / (stem + "_report.json"), report.dump(1) + "\n");
  return ok;
}

int cmd_bench(const Options& o) {
  if (o.runs == 0) throw ConfigError("--runs must be at least 1");
  if (o.n < 2 || o.n > 64) throw ConfigError("--n must lie in [2, 64]");
  BenchConfig cfg;
  cfg.n = o.n;
  cfg.circuit_seed = o.seed;
  cfg.placement_seed = o.placement_seed;
  cfg.runs = o.runs;
  cfg.families = families_of(o.families);
  cfg.strategies = strategies_of(o.strategy);
  cfg.arch = load_arch(o);
  cfg.error = load_error(o);
  cfg.parallel = !o.serial;
  const auto out_dir = prepare_out(o);
  const auto rows = run_bench(cfg);
  write_file(out_dir / "bench.csv", bench_csv(rows));
  for (const auto& s : summarize_bench(rows)) {
    char line[160];
    std::snprintf(line, sizeof line, "%-12s %-17s %-9s time %10.3f us  mean dC %.4e\n",
                  std::string(to_string(s.family)).c_str(), std::string(to_string(s.strategy)).c_str(),
                  std::string(to_string(s.placement)).c_str(), s.total_time.mean / units::us,
                  s.mean_error.mean);
    std::cout << line;
  }
  return ok;
}

int cmd_sweep(const Options& o) {
  if (o.runs == 0) throw ConfigError("--runs must be at least 1");
  if (o.n_min < 2 || o.n_max > 64) throw ConfigError("sweep sizes must lie in [2, 64]");
  SweepConfig cfg;
  cfg.n_min = o.n_min;
  cfg.n_max = o.n_max;
  cfg.n_step = o.n_step;
  cfg.circuit_seed = o.seed;
  cfg.placement_seed = o.placement_seed;
  cfg.runs = o.runs;
  cfg.families = families_of(o.families);
  cfg.strategies = strategies_of(o.strategy);
  cfg.arch = load_arch(o);
  cfg.error = load_error(o);
  cfg.parallel = !o.serial;
  std::vector<SweepRow> rows;
  try {
    rows = run_sweep(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto out_dir = prepare_out(o);
  const auto csv = sweep_csv(rows);
  write_file(out_dir / "sweep.csv", csv);
  std::cout << csv;
  return ok;
}

void common_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Circuit generator seed");
  cmd->add_option("--strategy", o.strategy, "Strategy name, comma list, or 'all'");
  cmd->add_option("--runs", o.runs, "Random placements per cell");
  cmd->add_option("--placement-seed", o.placement_seed, "First random placement seed");
  cmd->add_option("--arch-config", o.arch_config, "Architecture override JSON");
  cmd->add_option("--error-config", o.error_config, "Error model override JSON");
  cmd->add_option("--config", o.config, "JSON config; flags take precedence");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_flag("--serial", o.serial, "Evaluate families one after another");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Map quantum circuits onto a 1D spin-qubit shuttling bus"};
  app.require_subcommand(1);
  Options o;

  auto* compile = app.add_subcommand("compile", "Compile one circuit with one or all strategies");
  compile->add_option("--input", o.input, "OpenQASM 2 file");
  compile->add_option("--gen", o.gen, "Generate a benchmark: ghz, graph_state, dj, qft, qpe, qaoa, random");
  compile->add_option("--n", o.n, "Generated circuit size");
  compile->add_option("--placement", o.placement, "spectral, random or identity");
  compile->add_option("--format", o.format, "Comma list of json, csv");
  compile->add_flag("--keep-measure", o.keep_measure, "Schedule measurements instead of dropping them");
  common_flags(compile, o);

  auto* bench = app.add_subcommand("bench", "All families x strategies x placements at one size");
  bench->add_option("--n", o.n, "Circuit size");
  bench->add_option("--families", o.families, "Comma list or 'all'");
  common_flags(bench, o);

  auto* sweep = app.add_subcommand("sweep", "Placement impact over a range of circuit sizes");
  sweep->add_option("--n-min", o.n_min, "Smallest size");
  sweep->add_option("--n-max", o.n_max, "Largest size");
  sweep->add_option("--n-step", o.n_step, "Size step");
  sweep->add_option("--families", o.families, "Comma list or 'all'");
  common_flags(sweep, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : invalid_config;
  }

  try {
    if (compile->parsed()) {
      apply_config(*compile, o);
      return cmd_compile(o);
    }
    if (bench->parsed()) {
      apply_config(*bench, o);
      return cmd_bench(o);
    }
    apply_config(*sweep, o);
    return cmd_sweep(o);
  } catch (const QasmError& e) {
    std::cerr << "shuttlec: " << o.input << ":" << e.what() << "\n";
    return parse_error;
  } catch (const CircuitError& e) {
    std::cerr << "shuttlec: " << e.what() << "\n";
    return parse_error;
  } catch (const ConfigError& e) {
    std::cerr << "shuttlec: " << e.what() << "\n";
    return invalid_config;
  } catch (const ValidationFailure& e) {
    std::cerr << "shuttlec: internal error: " << e.what() << "\n";
    for (const auto& v : e.violations()) std::cerr << "  " << to_string(v) << "\n";
    return validation_failure;
  } catch (const std::exception& e) {
    std::cerr << "shuttlec: " << e.what() << "\n";
    return invalid_config;
  }
}
