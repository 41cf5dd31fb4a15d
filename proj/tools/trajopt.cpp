/*
 Copyright 2026 The trajopt Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

// trajopt: run DDP or GPM on the shipped benchmarks.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "trajopt/bench.hpp"

namespace fs = std::filesystem;
using namespace trajopt;

namespace {

void to_stderr(const std::string& line) { std::cerr << line << "\n"; }

// --problem replaces the problem-specific parts of the config (weights,
// plant, bounds, nodes) with that problem's defaults.
bench::RunConfig apply_flags(bench::RunConfig config, const std::string& method,
                             const std::string& problem, const std::string& out) {
  if (!problem.empty()) {
    ProblemId id;
    try {
      id = parse_problem_id(problem);
    } catch (const Error& e) {
      throw bench::UsageError(e.what());
    }
    if (id != config.problem) {
      bench::RunConfig fresh = bench::default_config(id, config.method);
      fresh.ddp = config.ddp;
      fresh.gpm.guess = config.gpm.guess;
      fresh.gpm.samples = config.gpm.samples;
      fresh.gpm.nlp = config.gpm.nlp;
      config = fresh;
    }
  }
  if (!method.empty()) config.method = bench::parse_method(method);
  if (!out.empty()) config.output_dir = out;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory optimization benchmarks: DDP and Gauss pseudospectral"};
  app.require_subcommand(1);

  std::string config_path, method, problem, out;
  auto* solve = app.add_subcommand("solve", "Run one solver on one benchmark");
  solve->add_option("--config", config_path, "Run config (JSON)")->required();
  solve->add_option("--method", method, "ddp or gpm (overrides the config)");
  solve->add_option("--problem", problem, "cartpole, double_cartpole or quadrotor");
  solve->add_option("--out", out, "Output directory (overrides the config)");

  std::string config_a, config_b, compare_out;
  auto* compare = app.add_subcommand("compare", "Run two configs side by side");
  compare->add_option("--a", config_a, "First config")->required();
  compare->add_option("--b", config_b, "Second config")->required();
  compare->add_option("--out", compare_out, "Output directory (default compare_<problem>)");

  std::string plot_dir;
  auto* plotdata = app.add_subcommand("plotdata", "Split a run into plot-ready series");
  plotdata->add_option("dir", plot_dir, "Run directory")->required();

  std::string init_problem, init_method = "ddp", init_out;
  auto* init = app.add_subcommand("init", "Print a config with every default filled in");
  init->add_option("--problem", init_problem, "Problem id")->required();
  init->add_option("--method", init_method, "ddp or gpm");
  init->add_option("--out", init_out, "Write to this file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const bench::LogLevel level = bench::log_level_from_env();
      const bench::RunConfig config =
          apply_flags(bench::load_config(config_path), method, problem, out);
      return bench::cmd_solve(config, config.output_dir, level, to_stderr, std::cout);
    }
    if (*compare) {
      const bench::LogLevel level = bench::log_level_from_env();
      const bench::RunConfig a = bench::load_config(config_a);
      const bench::RunConfig b = bench::load_config(config_b);
      const fs::path dir =
          compare_out.empty() ? fs::path("compare_" + to_string(a.problem)) : fs::path(compare_out);
      return bench::cmd_compare(a, b, dir, level, to_stderr, std::cout);
    }
    if (*plotdata) {
      for (const fs::path& p : bench::cmd_plotdata(plot_dir)) std::cout << p.string() << "\n";
      return bench::kExitConverged;
    }
    if (*init) {
      ProblemId id;
      try {
        id = parse_problem_id(init_problem);
      } catch (const Error& e) {
        throw bench::UsageError(e.what());
      }
      const std::string text =
          bench::to_json(bench::default_config(id, bench::parse_method(init_method))).dump(2) +
          "\n";
      if (init_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream file(init_out);
        if (!(file << text)) throw bench::UsageError("cannot write " + init_out);
      }
      return bench::kExitConverged;
    }
  } catch (const bench::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bench::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bench::kExitUsage;
  }
  return bench::kExitUsage;
}
