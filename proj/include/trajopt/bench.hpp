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

#ifndef TRAJOPT_BENCH_HPP_
#define TRAJOPT_BENCH_HPP_

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "trajopt/benchmarks.hpp"
#include "trajopt/ddp.hpp"
#include "trajopt/nlp.hpp"
#include "trajopt/transcription.hpp"

namespace trajopt::bench {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Exit codes shared by every subcommand.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNotConverged = 2;

/// Bad config, bad flags or missing inputs.
class UsageError : public Error {
 public:
  using Error::Error;
};

enum class Method { kDdp, kGpm };

std::string to_string(Method m);
Method parse_method(const std::string& name);

enum class LogLevel { kQuiet, kInfo, kDebug };

LogLevel parse_log_level(const std::string& name);
/// TRAJOPT_LOG, defaulting to info when unset.
LogLevel log_level_from_env();

struct DdpSettings {
  double dt = 0.01;
  int max_iters = 1000;
  double tol = 1e-8;
  double mu_init = 1e-6;
  double mu_max = 1e6;
  int line_search_halvings = 10;
};

struct GpmSettings {
  int nodes = 25;
  gpm::GuessStrategy guess = gpm::GuessStrategy::kLinear;
  int samples = 2001;
  nlp::Options nlp;
};

struct RunConfig {
  ProblemId problem = ProblemId::kCartPole;
  Method method = Method::kDdp;
  std::string output_dir;
  CostWeights weights;
  std::map<std::string, double> plant;
  std::optional<Bounds> control_bounds;
  std::optional<Bounds> state_bounds;
  DdpSettings ddp;
  GpmSettings gpm;
};

/// Full defaults for one problem: weights, plant parameters and node
/// count (25, 40, 30 for cartpole, double_cartpole, quadrotor).
RunConfig default_config(ProblemId problem, Method method);

/// Bounds serialize with null standing for an infinite entry.
Json to_json(const RunConfig& config);
/// Missing keys keep their defaults; unknown keys throw UsageError.
RunConfig config_from_json(const Json& json);
RunConfig load_config(const std::filesystem::path& path);

struct CostRecord {
  int iteration = 0;
  double cost = 0.0;
  /// Constraint violation for gpm rows; unused for ddp.
  double violation = 0.0;
};

struct RunResult {
  RunConfig config;
  std::string status;
  bool converged = false;
  std::string diagnostics;
  double cost = 0.0;
  double runtime_seconds = 0.0;
  int iterations = 0;
  /// Empty when the solver failed before producing a trajectory.
  Trajectory trajectory;
  /// Control written on the last trajectory row: the held final control
  /// (ddp) or the control interpolant at tf (gpm).
  Vector final_control;
  std::vector<CostRecord> cost_history;
  std::vector<ddp::TrialRecord> trials;
  /// Report body without file paths.
  Json report;
};

using LogSink = std::function<void(const std::string&)>;

/// Runs the configured solver. Solver errors are caught and reported as
/// status "failed".
RunResult run(const RunConfig& config, LogLevel level, const LogSink& sink);

/// Header: t, x_0..x_{n-1}, u_0..u_{m-1}.
void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& traj, const Vector& final_control);
struct TrajectoryTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
TrajectoryTable read_csv(const std::filesystem::path& path);

/// Writes trajectory.csv, cost_history.csv, trials.csv (ddp) and
/// report.json into `out_dir`; returns the exit code.
int cmd_solve(const RunConfig& config, const std::filesystem::path& out_dir,
              LogLevel level, const LogSink& sink, std::ostream& summary);

/// Runs both configs into out_dir/a and out_dir/b, writes
/// comparison.json and prints a table. Throws UsageError when the problems
/// differ.
int cmd_compare(const RunConfig& a, const RunConfig& b,
                const std::filesystem::path& out_dir, LogLevel level,
                const LogSink& sink, std::ostream& table);

/// Writes per-column series into dir/plot. Returns the files written.
std::vector<std::filesystem::path> cmd_plotdata(const std::filesystem::path& dir);

}  // namespace trajopt::bench

#endif  // TRAJOPT_BENCH_HPP_
