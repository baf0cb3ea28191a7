// covform: leader-follower coverage formation simulator.
//
// Subcommands:
//   run     execute a mission from a config, write logs and SVG snapshots
//   solve   compute the initial optimal formation only
//   verify  check a positions+flow file against the formation constraints
//   render  re-render SVG snapshots from an existing mission log
//
// Exit codes: 0 success, 2 validation error, 3 projection-failed halt,
// 4 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "covform/config_io.hpp"
#include "covform/svg.hpp"

namespace {

using covform::MissionConfig;
using covform::OutputFormat;
using ordered_json = nlohmann::ordered_json;

std::vector<OutputFormat> parse_formats(const std::string& csv) {
  std::vector<OutputFormat> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "json_log")
      out.push_back(OutputFormat::JsonLog);
    else if (item == "svg")
      out.push_back(OutputFormat::Svg);
    else if (item == "csv_trace")
      out.push_back(OutputFormat::CsvTrace);
    else
      throw covform::ValidationError("formats", "unknown format: " + item);
  }
  if (out.empty()) throw covform::ValidationError("formats", "empty format list");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw covform::IoError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw covform::IoError("cannot open for writing: " + path.string());
  out << body;
  if (!out) throw covform::IoError("write failed: " + path.string());
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::vector<int>& snapshots, const std::string& formats, bool has_seed,
            std::uint64_t seed) {
  MissionConfig cfg = covform::load_config(config_path);
  if (has_seed) cfg.seed = seed;
  const covform::MissionLog log = covform::run_mission(cfg);

  covform::RunManifest manifest;
  manifest.config_path = config_path;
  manifest.out_dir = out_dir;
  manifest.snapshot_times = snapshots;
  manifest.formats = parse_formats(formats);
  const auto written = covform::emit_outputs(log, cfg, manifest);

  std::cout << "mission complete: " << log.records.size() << " records, H(final) = "
            << log.summary.final_objective << ", projections = "
            << log.summary.projection_count << "\n";
  for (const auto& p : written) std::cout << "wrote " << p.string() << "\n";
  return 0;
}

int cmd_solve(const std::string& config_path, const std::string& out_dir, bool has_seed,
              std::uint64_t seed, int restarts, const std::string& formats) {
  MissionConfig cfg = covform::load_config(config_path);
  if (has_seed) cfg.seed = seed;
  if (restarts > 0) cfg.solver_restarts = restarts;

  const covform::FormationProblem problem = cfg.problem_at(cfg.trajectory[0]);
  const covform::FormationSolution sol =
      covform::solve_initial_formation(problem, cfg.solver_restarts, cfg.seed);

  std::filesystem::create_directories(out_dir);
  ordered_json doc;
  doc["schema"] = 1;
  ordered_json pos = ordered_json::array();
  for (auto p : sol.positions) pos.push_back(ordered_json::array({p.x, p.y}));
  doc["positions"] = std::move(pos);
  ordered_json flow = ordered_json::array();
  for (int i = 0; i < sol.flow.n_agents; ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < sol.flow.n_agents; ++j) row.push_back(sol.flow.at(i, j));
    flow.push_back(std::move(row));
  }
  doc["flow"] = std::move(flow);
  doc["H"] = sol.objective;
  doc["restarts_used"] = sol.restarts_used;
  const auto out_path = std::filesystem::path(out_dir) / "formation.json";
  write_file(out_path, doc.dump(2) + "\n");
  std::cout << "H = " << sol.objective << ", wrote " << out_path.string() << "\n";

  for (OutputFormat f : parse_formats(formats)) {
    if (f == OutputFormat::Svg) {
      const auto svg_path = std::filesystem::path(out_dir) / "snap_solve.svg";
      write_file(svg_path, covform::render_snapshot_svg(cfg, sol.positions));
      std::cout << "wrote " << svg_path.string() << "\n";
    }
  }
  return 0;
}

int cmd_verify(const std::string& config_path, const std::string& input_path) {
  MissionConfig cfg = covform::load_config(config_path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(read_file(input_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw covform::ParseError(e.what());
  }
  std::vector<covform::Point2> positions;
  for (const auto& p : doc.at("positions")) positions.push_back({p.at(0), p.at(1)});
  const auto& flow_rows = doc.at("flow");
  covform::FlowVector flow = covform::FlowVector::zeros(static_cast<int>(flow_rows.size()));
  for (int i = 0; i < flow.n_agents; ++i)
    for (int j = 0; j < flow.n_agents; ++j) flow.at(i, j) = flow_rows.at(i).at(j).get<int>();

  if (positions.empty()) throw covform::ValidationError("positions", "empty");
  covform::FormationProblem problem = cfg.problem_at(positions[0]);
  const bool ok = covform::verify_solution(positions, flow, problem);
  std::cout << (ok ? "feasible: all formation constraints hold\n"
                   : "infeasible: at least one constraint is violated\n");
  return ok ? 0 : 2;
}

int cmd_render(const std::string& config_path, const std::string& log_path,
               const std::string& out_dir, std::vector<int> snapshots) {
  MissionConfig cfg = covform::load_config(config_path);
  const covform::MissionLog log = covform::log_from_json(read_file(log_path));
  if (snapshots.empty())
    for (const auto& r : log.records) snapshots.push_back(r.t);

  covform::RunManifest manifest;
  manifest.config_path = config_path;
  manifest.out_dir = out_dir;
  manifest.snapshot_times = std::move(snapshots);
  manifest.formats = {OutputFormat::Svg};
  const auto written = covform::emit_outputs(log, cfg, manifest);
  for (const auto& p : written) std::cout << "wrote " << p.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal dynamic formation control simulator for coverage missions"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", formats = "json_log,svg,csv_trace";
  std::string input_path, log_path;
  std::vector<int> snapshots;
  std::uint64_t seed = 0;
  int restarts = 0;

  CLI::App* run = app.add_subcommand("run", "Execute a full mission");
  run->add_option("--config", config_path, "Mission config JSON")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--snapshots", snapshots, "Snapshot time indices");
  run->add_option("--formats", formats, "Comma list of json_log,svg,csv_trace");
  CLI::Option* run_seed = run->add_option("--seed", seed, "Override config seed");

  CLI::App* solve = app.add_subcommand("solve", "Compute the initial formation only");
  solve->add_option("--config", config_path, "Mission config JSON")->required();
  solve->add_option("--out", out_dir, "Output directory");
  solve->add_option("--restarts", restarts, "Override solver restarts");
  solve->add_option("--formats", formats, "svg adds a snapshot of the formation");
  CLI::Option* solve_seed = solve->add_option("--seed", seed, "Override config seed");

  CLI::App* verify = app.add_subcommand("verify", "Verify a positions+flow file");
  verify->add_option("--config", config_path, "Mission config JSON")->required();
  verify->add_option("--input", input_path, "JSON with positions and flow")->required();

  CLI::App* render = app.add_subcommand("render", "Re-render snapshots from a log");
  render->add_option("--config", config_path, "Mission config JSON")->required();
  render->add_option("--log", log_path, "mission_log.json from a previous run")->required();
  render->add_option("--out", out_dir, "Output directory");
  render->add_option("--snapshots", snapshots, "Snapshot times (default: all)");

  try {
    app.parse(argc, argv);
    if (*run)
      return cmd_run(config_path, out_dir, snapshots, formats, run_seed->count() > 0, seed);
    if (*solve)
      return cmd_solve(config_path, out_dir, solve_seed->count() > 0, seed, restarts, formats);
    if (*verify) return cmd_verify(config_path, input_path);
    if (*render) return cmd_render(config_path, log_path, out_dir, snapshots);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const covform::ProjectionFailed& e) {
    std::cerr << "projection failed: " << e.what() << "\n";
    return 3;
  } catch (const covform::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const covform::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
