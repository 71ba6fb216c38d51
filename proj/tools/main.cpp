#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pcad/evaluation.hpp"
#include "pcad/event_io.hpp"
#include "pcad/field_grid.hpp"
#include "pcad/model_registry.hpp"
#include "pcad/params_io.hpp"
#include "pcad/scenarios.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace pcad;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& text, const std::string& what) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw std::runtime_error(what + ": bad number '" + text + "'");
  return value;
}

// Shared --params/--set handling. Precedence: built-in defaults, then the
// params file, then individual --set overrides.
struct ParamFlags {
  std::string file;
  std::vector<std::string> sets;

  void attach(CLI::App* cmd) {
    cmd->add_option("--params", file,
                    "Parameter file: one 'model.profile.param = value' per line");
    cmd->add_option("--set", sets,
                    "Override one parameter, e.g. --set pcad.merging.alpha=0.6 (repeatable)");
  }

  ProfileConfigs resolve(ProfileConfigs base = {}) const {
    if (!file.empty()) apply_params_file(file, base);
    for (const std::string& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("--set expects key=value, got '" + kv + "'");
      apply_param(kv.substr(0, eq), parse_number(kv.substr(eq + 1), "--set " + kv), base);
    }
    return base;
  }
};

DatasetProfile profile_of_events(const std::vector<Event>& events) {
  return profile_of(events.front().kind);
}

// ---------------------------------------------------------------------------

struct SimulateOpts {
  std::string out_dir;
  std::string only = "both";
  int merging_reps = 2;
  int obstacle_reps = 1;
  double dt = 0.05;
  double duration = 15.0;
  double merging_speed = 27.78;
  double obstacle_speed = 25.0;
  bool kmh = false;
  std::string rate_model;
  double noise_sd = 0.0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  ParamFlags params;
};

int run_simulate(const SimulateOpts& opts) {
  const double to_ms = opts.kmh ? 1.0 / 3.6 : 1.0;
  std::vector<Event> events;
  if (opts.only == "both" || opts.only == "merging") {
    MergingOptions merging;
    merging.initial_speed = opts.merging_speed * to_ms;
    merging.dt = opts.dt;
    merging.duration = opts.duration;
    std::vector<Event> dataset = make_merging_dataset(opts.merging_reps, merging);
    if (!opts.rate_model.empty()) {
      const ModelId id = model_from_string(opts.rate_model);
      synth_ratings(dataset, id, opts.params.resolve().merging, opts.noise_sd, opts.seed);
    }
    events.insert(events.end(), dataset.begin(), dataset.end());
  }
  if (opts.only == "both" || opts.only == "obstacle") {
    ObstacleOptions obstacle;
    obstacle.initial_speed = opts.obstacle_speed * to_ms;
    obstacle.dt = opts.dt;
    obstacle.duration = opts.duration;
    std::vector<Event> dataset = make_obstacle_dataset(opts.obstacle_reps, obstacle);
    if (!opts.rate_model.empty()) {
      const ModelId id = model_from_string(opts.rate_model);
      synth_ratings(dataset, id, opts.params.resolve().obstacle, opts.noise_sd, opts.seed + 1);
    }
    events.insert(events.end(), dataset.begin(), dataset.end());
  }
  write_dataset(events, opts.out_dir);
  std::cout << "wrote " << events.size() << " events to " << opts.out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct RiskOpts {
  std::string trajectory;
  std::string model;
  std::string profile;
  std::string out;
  ParamFlags params;
};

int run_risk(const RiskOpts& opts) {
  fs::path sidecar(opts.trajectory);
  sidecar.replace_extension(".json");
  const Event event = fs::exists(sidecar) ? read_event(opts.trajectory, sidecar.string())
                                          : read_trajectory_csv(opts.trajectory);

  const ModelId id = model_from_string(opts.model);
  const DatasetProfile profile =
      opts.profile.empty() ? profile_of(event.kind) : profile_from_string(opts.profile);
  const ModelConfig config = opts.params.resolve().by_profile(profile);
  const std::vector<double> trace = risk_trace(id, config, event.samples);

  // The input rows, canonically formatted, with the risk column appended.
  std::string csv = event_to_csv(event);
  std::string out;
  out.reserve(csv.size() + trace.size() * 24);
  std::size_t row = 0;
  std::size_t line_start = 0;
  for (std::size_t i = 0; i <= csv.size(); ++i) {
    if (i == csv.size() || csv[i] == '\n') {
      if (i > line_start) {
        out.append(csv, line_start, i - line_start);
        if (row == 0)
          out += ",risk";
        else
          out += "," + fmt17(trace[row - 1]);
        out += '\n';
        ++row;
      }
      line_start = i + 1;
    }
  }
  if (opts.out.empty())
    std::cout << out;
  else
    atomic_write_file(opts.out, out);
  return 0;
}

// ---------------------------------------------------------------------------

struct EvaluateOpts {
  std::string events_dir;
  std::string model;
  std::string out;
  ParamFlags params;
};

json report_to_json(const std::string& model, DatasetProfile profile,
                    const EvaluationReport& report) {
  json j;
  j["model"] = model;
  j["profile"] = to_string(profile);
  j["n_events"] = report.n_events;
  j["rmse_event"] = report.rmse_event;
  j["rmse_peak"] = report.rmse_peak;
  j["adjusted_r_square"] = report.adjusted_r2;
  j["detection_rate"] = report.detection;
  j["constant_predictions"] = report.constant_predictions;
  // Timing is reported on stdout only, keeping the file deterministic.
  return j;
}

void print_report_row(const std::string& model, const EvaluationReport& report) {
  std::printf("%-6s  n=%-4zu  rmse_event=%-8.4f rmse_peak=%-8.4f adj_r2=%-8.4f det=%-5.3f %.4f ms/step\n",
              model.c_str(), report.n_events, report.rmse_event, report.rmse_peak,
              report.adjusted_r2, report.detection, report.time_per_step_ms);
}

int run_evaluate(const EvaluateOpts& opts) {
  const std::vector<Event> events = load_dataset(opts.events_dir);
  const ModelId id = model_from_string(opts.model);
  const DatasetProfile profile = profile_of_events(events);
  const EvaluationReport report = evaluate(events, id, opts.params.resolve().by_profile(profile));
  print_report_row(opts.model, report);
  if (report.constant_predictions)
    std::cerr << "warning: a prediction group had no spread; its scaled values are 0\n";
  if (!opts.out.empty())
    atomic_write_file(opts.out, report_to_json(opts.model, profile, report).dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------

struct CalibrateOpts {
  std::string events_dir;
  std::string model;
  std::string out;
  std::string report;
  int restarts = 50;
  long max_evals = 2000;
  double f_tol = 1e-6;
  std::uint64_t seed = 1;
  ParamFlags params;
};

int run_calibrate(const CalibrateOpts& opts) {
  const std::vector<Event> events = load_dataset(opts.events_dir);
  const ModelId id = model_from_string(opts.model);
  const DatasetProfile profile = profile_of_events(events);
  ProfileConfigs configs = opts.params.resolve();

  OptimizerConfig optimizer;
  optimizer.restarts = opts.restarts;
  optimizer.max_evals = opts.max_evals;
  optimizer.f_tol = opts.f_tol;
  optimizer.seed = opts.seed;
  const CalibrationResult result = calibrate(events, id, configs.by_profile(profile), optimizer);

  configs.by_profile(profile) = result.config;
  atomic_write_file(opts.out, params_to_text(configs));

  json j;
  j["model"] = opts.model;
  j["profile"] = to_string(profile);
  j["objective"] = result.objective;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  for (std::size_t i = 0; i < result.names.size(); ++i)
    j["parameters"][result.names[i]] = result.values[i];
  if (!opts.report.empty()) atomic_write_file(opts.report, j.dump(2) + "\n");

  std::cout << "objective=" << result.objective << " iterations=" << result.iterations
            << " converged=" << (result.converged ? "yes" : "no") << "\n";
  for (std::size_t i = 0; i < result.names.size(); ++i)
    std::cout << "  " << result.names[i] << " = " << result.values[i] << "\n";
  std::cout << "wrote " << opts.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct FieldOpts {
  std::string model;
  std::string profile;
  std::string out;
  double subject_speed = 27.78;
  double neighbour_speed = 13.89;
  double subject_accel = 0.0;
  double neighbour_accel = 0.0;
  bool static_neighbour = false;
  bool kmh = false;
  bool serial = false;
  GridSpec spec;
  ParamFlags params;
};

int run_field(const FieldOpts& opts) {
  const ModelId id = model_from_string(opts.model);
  FieldScenario scenario;
  const double to_ms = opts.kmh ? 1.0 / 3.6 : 1.0;
  scenario.subject_speed = opts.subject_speed * to_ms;
  scenario.neighbour_speed = opts.static_neighbour ? 0.0 : opts.neighbour_speed * to_ms;
  scenario.subject_accel = opts.subject_accel;
  scenario.neighbour_accel = opts.static_neighbour ? 0.0 : opts.neighbour_accel;
  scenario.neighbour_kind =
      opts.static_neighbour ? NeighbourKind::kStaticObject : NeighbourKind::kMovingVehicle;

  const DatasetProfile profile = opts.profile.empty()
                                     ? (opts.static_neighbour ? DatasetProfile::kObstacle
                                                              : DatasetProfile::kMerging)
                                     : profile_from_string(opts.profile);
  // Dense sweeps default to the cheaper field search; file/--set still win.
  ProfileConfigs base;
  base.merging.pcad_search = SearchConfig::field_defaults();
  base.obstacle.pcad_search = SearchConfig::field_defaults();
  const ModelConfig config = opts.params.resolve(base).by_profile(profile);

  const RiskFieldGrid grid = opts.serial ? risk_field_serial(id, config, scenario, opts.spec)
                                         : risk_field(id, config, scenario, opts.spec);
  atomic_write_file(opts.out, grid_to_csv(grid));
  fs::path header(opts.out);
  header.replace_extension(".json");
  atomic_write_file(header.string(), grid_header_json(grid));
  std::cout << "wrote " << grid.nx << "x" << grid.ny << " grid to " << opts.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct BenchOpts {
  std::string events_dir;
  std::string out;
  int repetitions = 1;
  ParamFlags params;
};

int run_bench(const BenchOpts& opts) {
  const std::vector<Event> events = load_dataset(opts.events_dir);
  const DatasetProfile profile = profile_of_events(events);
  const ModelConfig config = opts.params.resolve().by_profile(profile);
  const std::vector<BenchmarkRow> rows = benchmark_all(events, config, opts.repetitions);

  json j;
  j["profile"] = to_string(profile);
  j["repetitions"] = opts.repetitions;
  for (const BenchmarkRow& row : rows) {
    j["rows"].push_back({{"name", row.name},
                         {"snapshots", row.snapshots},
                         {"total_ms", row.total_ms},
                         {"ms_per_snapshot", row.ms_per_snapshot}});
    std::printf("%-12s %8zu snapshots  %10.3f ms total  %10.6f ms/step\n", row.name.c_str(),
                row.snapshots, row.total_ms, row.ms_per_snapshot);
  }
  if (!opts.out.empty()) atomic_write_file(opts.out, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perceived-risk models: scenario simulation, risk traces, calibration, "
               "evaluation, risk fields, benchmarks"};
  app.require_subcommand(1);

  SimulateOpts sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Generate the synthetic event datasets");
  simulate->add_option("--out", sim.out_dir, "Output directory")->required();
  simulate->add_option("--only", sim.only, "merging | obstacle | both")
      ->check(CLI::IsMember({"merging", "obstacle", "both"}));
  simulate->add_option("--merging-reps", sim.merging_reps, "Repetitions per merging design");
  simulate->add_option("--obstacle-reps", sim.obstacle_reps, "Repetitions per obstacle position");
  simulate->add_option("--dt", sim.dt, "Sample interval [s]");
  simulate->add_option("--duration", sim.duration, "Event duration [s]");
  simulate->add_option("--merging-speed", sim.merging_speed, "Initial speed, merging [m/s]");
  simulate->add_option("--obstacle-speed", sim.obstacle_speed, "Subject speed, obstacle [m/s]");
  simulate->add_flag("--kmh", sim.kmh, "Speeds are given in km/h");
  simulate->add_option("--rate-model", sim.rate_model,
                       "Attach synthetic ratings from this model (pcad|rpr|ppdrf|drf)");
  simulate->add_option("--noise", sim.noise_sd, "Rating noise standard deviation");
  CLI::Option* seed_opt =
      simulate->add_option("--seed", sim.seed, "Seed for the rating noise");
  sim.params.attach(simulate);

  RiskOpts risk;
  CLI::App* risk_cmd = app.add_subcommand("risk", "Append a model risk column to a trajectory");
  risk_cmd->add_option("--trajectory", risk.trajectory, "Trajectory CSV")->required();
  risk_cmd->add_option("--model", risk.model, "pcad|rpr|ppdrf|drf")->required();
  risk_cmd->add_option("--profile", risk.profile, "Parameter profile (merging|obstacle)");
  risk_cmd->add_option("--out", risk.out, "Output CSV (stdout when omitted)");
  risk.params.attach(risk_cmd);

  EvaluateOpts eval;
  CLI::App* eval_cmd = app.add_subcommand("evaluate", "Score a model against rated events");
  eval_cmd->add_option("--events", eval.events_dir, "Event dataset directory")->required();
  eval_cmd->add_option("--model", eval.model, "pcad|rpr|ppdrf|drf")->required();
  eval_cmd->add_option("--out", eval.out, "Report JSON path");
  eval.params.attach(eval_cmd);

  CalibrateOpts cal;
  CLI::App* cal_cmd = app.add_subcommand("calibrate", "Fit model parameters to rated events");
  cal_cmd->add_option("--events", cal.events_dir, "Event dataset directory")->required();
  cal_cmd->add_option("--model", cal.model, "pcad|rpr|ppdrf|drf")->required();
  cal_cmd->add_option("--out", cal.out, "Fitted parameter file path")->required();
  cal_cmd->add_option("--report", cal.report, "Calibration report JSON path");
  cal_cmd->add_option("--restarts", cal.restarts, "Optimizer restarts");
  cal_cmd->add_option("--max-evals", cal.max_evals, "Objective evaluations per restart");
  cal_cmd->add_option("--f-tol", cal.f_tol, "Simplex spread tolerance");
  cal_cmd->add_option("--seed", cal.seed, "Seed for restart draws");
  cal.params.attach(cal_cmd);

  FieldOpts field;
  CLI::App* field_cmd = app.add_subcommand("field", "Export a risk surface grid");
  field_cmd->add_option("--model", field.model, "pcad|rpr|ppdrf|drf")->required();
  field_cmd->add_option("--out", field.out, "Grid CSV path (JSON header written alongside)")
      ->required();
  field_cmd->add_option("--profile", field.profile, "Parameter profile (merging|obstacle)");
  field_cmd->add_option("--subject-speed", field.subject_speed, "Subject speed");
  field_cmd->add_option("--neighbour-speed", field.neighbour_speed, "Neighbour speed");
  field_cmd->add_option("--subject-accel", field.subject_accel, "Subject acceleration [m/s^2]");
  field_cmd->add_option("--neighbour-accel", field.neighbour_accel,
                        "Neighbour acceleration [m/s^2]");
  field_cmd->add_flag("--static", field.static_neighbour, "Neighbour is a static object");
  field_cmd->add_flag("--kmh", field.kmh, "Speeds are given in km/h");
  field_cmd->add_flag("--serial", field.serial, "Use the serial reference sweep");
  field_cmd->add_option("--x-min", field.spec.x_min, "Grid x minimum [m]");
  field_cmd->add_option("--x-max", field.spec.x_max, "Grid x maximum [m]");
  field_cmd->add_option("--y-min", field.spec.y_min, "Grid y minimum [m]");
  field_cmd->add_option("--y-max", field.spec.y_max, "Grid y maximum [m]");
  field_cmd->add_option("--resolution", field.spec.resolution, "Cell size [m]");
  field.params.attach(field_cmd);

  BenchOpts bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Time every model over an event dataset");
  bench_cmd->add_option("--events", bench.events_dir, "Event dataset directory")->required();
  bench_cmd->add_option("--reps", bench.repetitions, "Repetitions over the dataset");
  bench_cmd->add_option("--out", bench.out, "Report JSON path");
  bench.params.attach(bench_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      if (!sim.rate_model.empty() && seed_opt->count() == 0)
        throw std::runtime_error("--seed is required when --rate-model is given");
      return run_simulate(sim);
    }
    if (risk_cmd->parsed()) return run_risk(risk);
    if (eval_cmd->parsed()) return run_evaluate(eval);
    if (cal_cmd->parsed()) return run_calibrate(cal);
    if (field_cmd->parsed()) return run_field(field);
    if (bench_cmd->parsed()) return run_bench(bench);
  } catch (const std::exception& err) {
    std::cerr << "pcad: error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
