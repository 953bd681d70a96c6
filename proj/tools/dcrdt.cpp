// Scenario runner and metrics reporter for the dcrdt library.
//
//   dcrdt run --scenario PATH [--seed N] [--out PATH]
//   dcrdt sizebench --type SPEC --ops N [--out PATH]
//   dcrdt twin --scenario PATH [--seed N]
//
// Exit codes: 0 success, 1 verification failure (not converged, divergence,
// or a violated assertion), 2 usage or input errors.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "dcrdt/catalog.hpp"
#include "dcrdt/scenario.hpp"

namespace {

std::string resolve_scenario(const std::string& given) {
  namespace fs = std::filesystem;
  if (fs::exists(given)) return given;
  if (const char* dir = std::getenv("DCRDT_SCENARIO_DIR")) {
    fs::path p = fs::path(dir) / given;
    if (fs::exists(p)) return p.string();
    p += ".json";
    if (fs::exists(p)) return p.string();
  }
  return given;
}

void write_out(const std::optional<std::string>& out_path,
               const std::string& content) {
  if (!out_path) return;
  std::ofstream out(*out_path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + *out_path);
  out << content;
}

int cmd_run(const std::string& scenario_path, std::optional<uint64_t> seed,
            const std::optional<std::string>& out_path) {
  dcrdt::Scenario sc = dcrdt::Scenario::load_file(resolve_scenario(scenario_path));
  auto driver = dcrdt::make_driver(sc.datatype);
  dcrdt::SimReport report = driver->run(sc, seed);
  std::cout << report.render();
  write_out(out_path, report.render_csv());
  return report.ok() ? 0 : 1;
}

int cmd_twin(const std::string& scenario_path, std::optional<uint64_t> seed) {
  dcrdt::Scenario sc = dcrdt::Scenario::load_file(resolve_scenario(scenario_path));
  auto driver = dcrdt::make_driver(sc.datatype);
  dcrdt::TwinReport report = driver->twin(sc, seed);
  std::cout << report.render();
  return report.ok() ? 0 : 1;
}

int cmd_sizebench(const std::string& type_spec, uint64_t ops,
                  const std::optional<std::string>& out_path) {
  auto driver = dcrdt::make_driver(type_spec);
  dcrdt::SizebenchReport report = driver->sizebench(ops);
  std::cout << report.render();
  write_out(out_path, report.render_csv());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delta-state CRDT scenario runner"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string type_spec;
  uint64_t ops = 0;
  std::optional<uint64_t> seed;
  std::optional<std::string> out_path;

  CLI::App* run = app.add_subcommand("run", "run a scenario to quiescence");
  run->add_option("--scenario", scenario_path, "scenario file")->required();
  run->add_option("--seed", seed, "override the fault seed");
  run->add_option("--out", out_path, "write CSV rows to this file");

  CLI::App* twin = app.add_subcommand(
      "twin", "run a causal scenario against the full-state oracle");
  twin->add_option("--scenario", scenario_path, "scenario file")->required();
  twin->add_option("--seed", seed, "override the fault seed");

  CLI::App* bench = app.add_subcommand(
      "sizebench", "per-op delta size vs full-state size");
  bench->add_option("--type", type_spec, "datatype spec")->required();
  bench->add_option("--ops", ops, "operation count")->required();
  bench->add_option("--out", out_path, "write CSV rows to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(scenario_path, seed, out_path);
    if (twin->parsed()) return cmd_twin(scenario_path, seed);
    if (bench->parsed()) return cmd_sizebench(type_spec, ops, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
