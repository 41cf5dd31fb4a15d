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

#include "trajopt/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace trajopt::bench {

namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json bound_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isinf(v[i])) {
      out.push_back(nullptr);
    } else {
      out.push_back(v[i]);
    }
  }
  return out;
}

Vector vector_from(const Json& j, const std::string& where) {
  if (!j.is_array()) throw UsageError(where + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw UsageError(where + ": expected numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Vector bound_from(const Json& j, double missing, const std::string& where) {
  if (!j.is_array()) throw UsageError(where + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].is_null()) {
      v[static_cast<Eigen::Index>(i)] = missing;
    } else if (j[i].is_number()) {
      v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    } else {
      throw UsageError(where + ": expected numbers or null");
    }
  }
  return v;
}

void check_keys(const Json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!obj.is_object()) throw UsageError(where + ": expected an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw UsageError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

template <typename T>
void read_if(const Json& obj, const char* key, T& target, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    target = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw UsageError(where + "." + key + ": wrong type");
  }
}

Json bounds_json(const std::optional<Bounds>& b) {
  if (!b) return nullptr;
  Json out;
  out["lower"] = bound_json(b->lower);
  out["upper"] = bound_json(b->upper);
  return out;
}

std::optional<Bounds> bounds_from(const Json& j, const std::string& where) {
  if (j.is_null()) return std::nullopt;
  check_keys(j, {"lower", "upper"}, where);
  if (!j.contains("lower") || !j.contains("upper")) {
    throw UsageError(where + ": needs both lower and upper");
  }
  return Bounds{bound_from(j.at("lower"), -kInf, where + ".lower"),
                bound_from(j.at("upper"), kInf, where + ".upper")};
}

std::string guess_name(gpm::GuessStrategy g) {
  return g == gpm::GuessStrategy::kLinear ? "linear" : "rollout";
}

gpm::GuessStrategy parse_guess(const std::string& name) {
  if (name == "linear") return gpm::GuessStrategy::kLinear;
  if (name == "rollout") return gpm::GuessStrategy::kRollout;
  throw UsageError("unknown initial guess '" + name + "' (linear|rollout)");
}

std::string inner_name(nlp::InnerMethod m) {
  return m == nlp::InnerMethod::kLbfgs ? "lbfgs" : "structured";
}

nlp::InnerMethod parse_inner(const std::string& name) {
  if (name == "structured") return nlp::InnerMethod::kStructuredQuasiNewton;
  if (name == "lbfgs") return nlp::InnerMethod::kLbfgs;
  throw UsageError("unknown inner method '" + name + "' (structured|lbfgs)");
}

int default_nodes(ProblemId id) {
  switch (id) {
    case ProblemId::kCartPole:
      return 25;
    case ProblemId::kDoubleCartPole:
      return 40;
    case ProblemId::kQuadrotor:
      return 30;
  }
  return 25;
}

double max_abs_control(const Trajectory& traj, const Vector& final_control) {
  double best = final_control.size() ? final_control.cwiseAbs().maxCoeff() : 0.0;
  for (const Vector& u : traj.controls) best = std::max(best, u.cwiseAbs().maxCoeff());
  return best;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

std::string to_string(Method m) { return m == Method::kDdp ? "ddp" : "gpm"; }

Method parse_method(const std::string& name) {
  if (name == "ddp") return Method::kDdp;
  if (name == "gpm") return Method::kGpm;
  throw UsageError("unknown method '" + name + "' (ddp|gpm)");
}

LogLevel parse_log_level(const std::string& name) {
  if (name == "quiet") return LogLevel::kQuiet;
  if (name == "info") return LogLevel::kInfo;
  if (name == "debug") return LogLevel::kDebug;
  throw UsageError("TRAJOPT_LOG must be quiet, info or debug (got '" + name + "')");
}

LogLevel log_level_from_env() {
  const char* value = std::getenv("TRAJOPT_LOG");
  return value ? parse_log_level(value) : LogLevel::kInfo;
}

RunConfig default_config(ProblemId problem, Method method) {
  RunConfig c;
  c.problem = problem;
  c.method = method;
  c.output_dir = "runs/" + to_string(problem) + "_" + to_string(method);
  c.weights = default_weights(problem);
  c.plant = make_benchmark(problem).plant->parameters();
  c.gpm.nodes = default_nodes(problem);
  return c;
}

Json to_json(const RunConfig& c) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["problem"] = to_string(c.problem);
  j["method"] = to_string(c.method);
  j["output_dir"] = c.output_dir;
  j["weights"] = {{"R", vector_json(c.weights.R)},
                  {"Q", vector_json(c.weights.Q)},
                  {"W_f", vector_json(c.weights.W_f)}};
  Json plant = Json::object();
  for (const auto& [k, v] : c.plant) plant[k] = v;
  j["plant"] = plant;
  j["control_bounds"] = bounds_json(c.control_bounds);
  j["state_bounds"] = bounds_json(c.state_bounds);
  j["ddp"] = {{"dt", c.ddp.dt},
              {"max_iters", c.ddp.max_iters},
              {"tol", c.ddp.tol},
              {"mu_init", c.ddp.mu_init},
              {"mu_max", c.ddp.mu_max},
              {"line_search_halvings", c.ddp.line_search_halvings}};
  const nlp::Options& o = c.gpm.nlp;
  j["gpm"] = {{"nodes", c.gpm.nodes},
              {"guess", guess_name(c.gpm.guess)},
              {"samples", c.gpm.samples},
              {"nlp",
               {{"max_outer", o.max_outer},
                {"max_inner", o.max_inner},
                {"constraint_tol", o.constraint_tol},
                {"stationarity_tol", o.stationarity_tol},
                {"penalty_init", o.penalty_init},
                {"penalty_growth", o.penalty_growth},
                {"penalty_max", o.penalty_max},
                {"inner", inner_name(o.inner)},
                {"lbfgs_memory", o.lbfgs_memory}}}};
  return j;
}

RunConfig config_from_json(const Json& j) {
  check_keys(j,
             {"schema_version", "problem", "method", "output_dir", "weights",
              "plant", "control_bounds", "state_bounds", "ddp", "gpm"},
             "config");
  int version = kSchemaVersion;
  read_if(j, "schema_version", version, "config");
  if (version != kSchemaVersion) {
    throw UsageError("unsupported schema_version " + std::to_string(version));
  }
  if (!j.contains("problem")) throw UsageError("config: 'problem' is required");
  std::string problem_name;
  std::string method_name = "ddp";
  read_if(j, "problem", problem_name, "config");
  read_if(j, "method", method_name, "config");
  ProblemId problem;
  try {
    problem = parse_problem_id(problem_name);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  RunConfig c = default_config(problem, parse_method(method_name));
  read_if(j, "output_dir", c.output_dir, "config");

  if (j.contains("weights")) {
    const Json& w = j.at("weights");
    check_keys(w, {"R", "Q", "W_f"}, "weights");
    if (w.contains("R")) c.weights.R = vector_from(w.at("R"), "weights.R");
    if (w.contains("Q")) c.weights.Q = vector_from(w.at("Q"), "weights.Q");
    if (w.contains("W_f")) c.weights.W_f = vector_from(w.at("W_f"), "weights.W_f");
  }
  if (j.contains("plant")) {
    const Json& p = j.at("plant");
    if (!p.is_object()) throw UsageError("plant: expected an object");
    for (const auto& item : p.items()) {
      if (!c.plant.count(item.key())) {
        throw UsageError("unknown key '" + item.key() + "' in plant");
      }
      if (!item.value().is_number()) {
        throw UsageError("plant." + item.key() + ": expected a number");
      }
      c.plant[item.key()] = item.value().get<double>();
    }
  }
  if (j.contains("control_bounds")) {
    c.control_bounds = bounds_from(j.at("control_bounds"), "control_bounds");
  }
  if (j.contains("state_bounds")) {
    c.state_bounds = bounds_from(j.at("state_bounds"), "state_bounds");
  }
  if (j.contains("ddp")) {
    const Json& d = j.at("ddp");
    check_keys(d, {"dt", "max_iters", "tol", "mu_init", "mu_max", "line_search_halvings"},
               "ddp");
    read_if(d, "dt", c.ddp.dt, "ddp");
    read_if(d, "max_iters", c.ddp.max_iters, "ddp");
    read_if(d, "tol", c.ddp.tol, "ddp");
    read_if(d, "mu_init", c.ddp.mu_init, "ddp");
    read_if(d, "mu_max", c.ddp.mu_max, "ddp");
    read_if(d, "line_search_halvings", c.ddp.line_search_halvings, "ddp");
  }
  if (j.contains("gpm")) {
    const Json& g = j.at("gpm");
    check_keys(g, {"nodes", "guess", "samples", "nlp"}, "gpm");
    read_if(g, "nodes", c.gpm.nodes, "gpm");
    read_if(g, "samples", c.gpm.samples, "gpm");
    if (g.contains("guess")) {
      std::string name;
      read_if(g, "guess", name, "gpm");
      c.gpm.guess = parse_guess(name);
    }
    if (g.contains("nlp")) {
      const Json& n = g.at("nlp");
      check_keys(n,
                 {"max_outer", "max_inner", "constraint_tol", "stationarity_tol",
                  "penalty_init", "penalty_growth", "penalty_max", "inner",
                  "lbfgs_memory"},
                 "gpm.nlp");
      nlp::Options& o = c.gpm.nlp;
      read_if(n, "max_outer", o.max_outer, "gpm.nlp");
      read_if(n, "max_inner", o.max_inner, "gpm.nlp");
      read_if(n, "constraint_tol", o.constraint_tol, "gpm.nlp");
      read_if(n, "stationarity_tol", o.stationarity_tol, "gpm.nlp");
      read_if(n, "penalty_init", o.penalty_init, "gpm.nlp");
      read_if(n, "penalty_growth", o.penalty_growth, "gpm.nlp");
      read_if(n, "penalty_max", o.penalty_max, "gpm.nlp");
      read_if(n, "lbfgs_memory", o.lbfgs_memory, "gpm.nlp");
      if (n.contains("inner")) {
        std::string name;
        read_if(n, "inner", name, "gpm.nlp");
        o.inner = parse_inner(name);
      }
    }
  }

  if (!(c.ddp.dt > 0.0) || c.ddp.max_iters < 1 || !(c.ddp.tol > 0.0) ||
      c.ddp.line_search_halvings < 0 || !(c.ddp.mu_init > 0.0) ||
      !(c.ddp.mu_max >= c.ddp.mu_init)) {
    throw UsageError("ddp settings: dt, max_iters, tol, mu_init must be positive "
                     "and mu_max >= mu_init");
  }
  const nlp::Options& o = c.gpm.nlp;
  if (c.gpm.nodes < 1 || c.gpm.samples < 2 || o.max_outer < 1 || o.max_inner < 1 ||
      !(o.constraint_tol > 0.0 && o.constraint_tol < 1.0) ||
      !(o.stationarity_tol > 0.0 && o.stationarity_tol < 1.0) ||
      !(o.penalty_init > 0.0) || !(o.penalty_growth > 1.0) ||
      !(o.penalty_max >= o.penalty_init) || o.lbfgs_memory < 1) {
    throw UsageError("gpm settings out of range");
  }
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

RunResult run(const RunConfig& config, LogLevel level, const LogSink& sink) {
  Benchmark b;
  try {
    BenchmarkOverrides overrides;
    overrides.weights = config.weights;
    overrides.plant_parameters = config.plant;
    overrides.control_bounds = config.control_bounds;
    overrides.state_bounds = config.state_bounds;
    b = make_benchmark(config.problem, overrides);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const LogSink info = level != LogLevel::kQuiet ? sink : LogSink();
  const LogSink debug = level == LogLevel::kDebug ? sink : LogSink();

  RunResult r;
  r.config = config;
  Json report;
  report["schema_version"] = kSchemaVersion;
  report["config"] = to_json(config);
  report["problem"] = to_string(config.problem);
  report["method"] = to_string(config.method);

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  };

  if (config.method == Method::kDdp) {
    const double horizon = b.boundary.horizon();
    const int steps = std::max(1, static_cast<int>(std::lround(horizon / config.ddp.dt)));
    ddp::Options o;
    o.steps = steps;
    o.max_iters = config.ddp.max_iters;
    o.tol = config.ddp.tol;
    o.mu_init = config.ddp.mu_init;
    o.mu_max = config.ddp.mu_max;
    o.line_search_halvings = config.ddp.line_search_halvings;
    o.initial_controls.assign(steps, b.nominal_control);
    o.log = info;
    o.trace = debug;
    Json details;
    details["steps"] = steps;
    details["dt"] = horizon / steps;
    try {
      ddp::Report rep = ddp::solve(*b.plant, *b.cost, b.boundary, o);
      r.runtime_seconds = elapsed();
      r.status = rep.status;
      r.converged = rep.converged;
      r.cost = rep.final_cost;
      r.iterations = rep.iterations;
      r.trajectory = std::move(rep.trajectory);
      r.final_control = r.trajectory.controls.back();
      for (std::size_t i = 0; i < rep.cost_history.size(); ++i) {
        r.cost_history.push_back({static_cast<int>(i), rep.cost_history[i], 0.0});
      }
      r.trials = std::move(rep.trials);
      details["expected_change"] = rep.last_expected_change;
      details["regularization_events"] = rep.regularization_events;
    } catch (const Error& e) {
      r.runtime_seconds = elapsed();
      r.status = "failed";
      r.diagnostics = e.what();
    }
    int rejected = 0;
    for (const auto& t : r.trials) rejected += t.accepted ? 0 : 1;
    details["trials"] = r.trials.size();
    details["rejected_trials"] = rejected;
    report["ddp"] = details;
  } else {
    gpm::SolveOptions o;
    o.nodes = config.gpm.nodes;
    o.guess = config.gpm.guess;
    o.samples = config.gpm.samples;
    o.nlp = config.gpm.nlp;
    o.nlp.log = info;
    Json details;
    details["nodes"] = o.nodes;
    try {
      gpm::SolveResult res = gpm::solve(b.plant, b.cost, b.boundary, o, b.nominal_control);
      r.runtime_seconds = elapsed();
      r.status = nlp::to_string(res.solution.status);
      r.converged = res.solution.status == nlp::Status::kOptimal;
      r.cost = res.objective;
      r.iterations = res.solution.outer_iterations;
      r.trajectory = std::move(res.trajectory);
      r.final_control = res.final_control;
      for (std::size_t i = 0; i < res.solution.objective_history.size(); ++i) {
        r.cost_history.push_back({static_cast<int>(i + 1),
                                  res.solution.objective_history[i],
                                  res.solution.violation_history[i]});
      }
      details["max_violation"] = res.max_residual;
      details["stationarity_norm"] = res.solution.stationarity_norm;
      details["outer_iterations"] = res.solution.outer_iterations;
      details["inner_iterations_total"] = res.solution.inner_iterations_total;
    } catch (const Error& e) {
      r.runtime_seconds = elapsed();
      r.status = "failed";
      r.diagnostics = e.what();
    }
    report["gpm"] = details;
  }

  report["status"] = r.status;
  report["converged"] = r.converged;
  report["diagnostics"] = r.diagnostics;
  report["final_cost"] = r.cost;
  report["runtime_seconds"] = r.runtime_seconds;
  report["iterations"] = r.iterations;
  report["target_state"] = vector_json(b.boundary.x_target);
  if (!r.trajectory.states.empty()) {
    const Vector& xf = r.trajectory.states.back();
    const Vector err = xf - b.boundary.x_target;
    report["final_state"] = vector_json(xf);
    report["final_state_error"] = vector_json(err);
    report["final_state_error_norm"] = err.norm();
    report["max_abs_control"] = max_abs_control(r.trajectory, r.final_control);
  }
  if (config.method == Method::kDdp) {
    report["cost_note"] = "discrete sum of L*dt over the Euler grid plus terminal cost";
  } else {
    report["cost_note"] = "Gauss quadrature of L plus terminal cost";
  }
  r.report = std::move(report);
  return r;
}

void write_trajectory_csv(const fs::path& path, const Trajectory& traj,
                          const Vector& final_control) {
  std::ostringstream out;
  const int n = traj.state_dim();
  const int m = traj.controls.empty() ? static_cast<int>(final_control.size())
                                      : traj.control_dim();
  out << "t";
  for (int i = 0; i < n; ++i) out << ",x_" << i;
  for (int i = 0; i < m; ++i) out << ",u_" << i;
  out << "\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out << fmt_double(traj.times[k]);
    for (int i = 0; i < n; ++i) out << "," << fmt_double(traj.states[k][i]);
    const Vector& u = k < traj.controls.size() ? traj.controls[k] : final_control;
    for (int i = 0; i < m; ++i) out << "," << fmt_double(u[i]);
    out << "\n";
  }
  write_text(path, out.str());
}

TrajectoryTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("missing input file " + path.string());
  TrajectoryTable table;
  std::string line;
  if (!std::getline(in, line)) throw UsageError("empty file " + path.string());
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw UsageError("malformed number '" + cell + "' in " + path.string());
      }
    }
    if (row.size() != table.header.size()) {
      throw UsageError("row width does not match header in " + path.string());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

int cmd_solve(const RunConfig& config, const fs::path& out_dir, LogLevel level,
              const LogSink& sink, std::ostream& summary) {
  RunResult r = run(config, level, sink);
  fs::create_directories(out_dir);

  Json files;
  if (!r.trajectory.states.empty()) {
    write_trajectory_csv(out_dir / "trajectory.csv", r.trajectory, r.final_control);
    files["trajectory"] = (out_dir / "trajectory.csv").string();
  }
  {
    std::ostringstream out;
    const bool gpm = config.method == Method::kGpm;
    out << (gpm ? "iteration,cost,max_violation\n" : "iteration,cost\n");
    for (const CostRecord& c : r.cost_history) {
      out << c.iteration << "," << fmt_double(c.cost);
      if (gpm) out << "," << fmt_double(c.violation);
      out << "\n";
    }
    write_text(out_dir / "cost_history.csv", out.str());
    files["cost_history"] = (out_dir / "cost_history.csv").string();
  }
  if (config.method == Method::kDdp) {
    std::ostringstream out;
    out << "iteration,alpha,cost,accepted\n";
    for (const auto& t : r.trials) {
      out << t.iteration << "," << fmt_double(t.alpha) << "," << fmt_double(t.cost)
          << "," << (t.accepted ? 1 : 0) << "\n";
    }
    write_text(out_dir / "trials.csv", out.str());
    files["trials"] = (out_dir / "trials.csv").string();
  }
  files["report"] = (out_dir / "report.json").string();
  r.report["files"] = files;
  write_text(out_dir / "report.json", r.report.dump(2) + "\n");

  summary << to_string(config.problem) << " " << to_string(config.method)
          << ": status " << r.status << ", cost " << fmt_double(r.cost)
          << ", runtime " << r.runtime_seconds << " s, iterations " << r.iterations;
  if (!r.diagnostics.empty()) summary << " (" << r.diagnostics << ")";
  summary << "\n";
  return r.converged ? kExitConverged : kExitNotConverged;
}

int cmd_compare(const RunConfig& a, const RunConfig& b, const fs::path& out_dir,
                LogLevel level, const LogSink& sink, std::ostream& table) {
  if (a.problem != b.problem) {
    throw UsageError("compare needs the same problem in both configs (got " +
                     to_string(a.problem) + " and " + to_string(b.problem) + ")");
  }
  std::ostringstream quiet;
  const int code_a = cmd_solve(a, out_dir / "a", level, sink, quiet);
  const int code_b = cmd_solve(b, out_dir / "b", level, sink, quiet);
  auto load = [](const fs::path& p) {
    std::ifstream in(p);
    return Json::parse(in);
  };
  const Json ra = load(out_dir / "a" / "report.json");
  const Json rb = load(out_dir / "b" / "report.json");

  auto number = [](const Json& r, const char* key) {
    return r.contains(key) ? r.at(key).get<double>()
                           : std::numeric_limits<double>::quiet_NaN();
  };
  struct Row {
    const char* label;
    const char* key;
  };
  const Row rows[] = {{"final cost", "final_cost"},
                      {"runtime [s]", "runtime_seconds"},
                      {"iterations", "iterations"},
                      {"max |u|", "max_abs_control"},
                      {"final-state error", "final_state_error_norm"}};

  Json cmp;
  cmp["schema_version"] = kSchemaVersion;
  cmp["problem"] = to_string(a.problem);
  cmp["a"] = {{"method", to_string(a.method)}, {"status", ra.at("status")},
              {"report", (out_dir / "a" / "report.json").string()}};
  cmp["b"] = {{"method", to_string(b.method)}, {"status", rb.at("status")},
              {"report", (out_dir / "b" / "report.json").string()}};
  Json metrics = Json::object();
  for (const Row& row : rows) {
    metrics[row.key] = {{"a", number(ra, row.key)}, {"b", number(rb, row.key)}};
  }
  cmp["metrics"] = metrics;
  const std::string caveat =
      "ddp costs are Euler sums at step dt and gpm costs are quadrature integrals; "
      "they are comparable only for small dt";
  cmp["cost_caveat"] = caveat;
  fs::create_directories(out_dir);
  write_text(out_dir / "comparison.json", cmp.dump(2) + "\n");

  char line[160];
  std::snprintf(line, sizeof(line), "%-20s %22s %22s\n", to_string(a.problem).c_str(),
                ("A: " + to_string(a.method)).c_str(),
                ("B: " + to_string(b.method)).c_str());
  table << line;
  std::snprintf(line, sizeof(line), "%-20s %22s %22s\n", "status",
                ra.at("status").get<std::string>().c_str(),
                rb.at("status").get<std::string>().c_str());
  table << line;
  for (const Row& row : rows) {
    std::snprintf(line, sizeof(line), "%-20s %22.10g %22.10g\n", row.label,
                  number(ra, row.key), number(rb, row.key));
    table << line;
  }
  table << "note: " << caveat << "\n";
  return code_a == kExitConverged && code_b == kExitConverged ? kExitConverged
                                                              : kExitNotConverged;
}

std::vector<fs::path> cmd_plotdata(const fs::path& dir) {
  const fs::path traj_path = dir / "trajectory.csv";
  const fs::path cost_path = dir / "cost_history.csv";
  if (!fs::exists(traj_path)) {
    throw UsageError("missing input: " + traj_path.string());
  }
  if (!fs::exists(cost_path)) {
    throw UsageError("missing input: " + cost_path.string());
  }
  const TrajectoryTable traj = read_csv(traj_path);
  const TrajectoryTable cost = read_csv(cost_path);
  if (traj.header.empty() || traj.header[0] != "t") {
    throw UsageError(traj_path.string() + ": first column must be t");
  }
  const fs::path out_dir = dir / "plot";
  fs::create_directories(out_dir);
  std::vector<fs::path> written;

  for (std::size_t c = 1; c < traj.header.size(); ++c) {
    const std::string& name = traj.header[c];
    const bool state = name.rfind("x_", 0) == 0;
    const fs::path path = out_dir / ((state ? "state_" : "control_") + name + ".csv");
    std::ostringstream out;
    out << "t," << name << "\n";
    for (const auto& row : traj.rows) {
      out << fmt_double(row[0]) << "," << fmt_double(row[c]) << "\n";
    }
    write_text(path, out.str());
    written.push_back(path);
  }
  {
    const fs::path path = out_dir / "cost.csv";
    std::ostringstream out;
    out << "iteration,cost\n";
    for (const auto& row : cost.rows) {
      out << static_cast<long long>(row[0]) << "," << fmt_double(row[1]) << "\n";
    }
    write_text(path, out.str());
    written.push_back(path);
  }
  return written;
}

}  // namespace trajopt::bench
