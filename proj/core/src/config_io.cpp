#include "covform/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "covform/svg.hpp"

namespace covform {

namespace {

using ordered_json = nlohmann::ordered_json;

const ordered_json& require(const ordered_json& j, const std::string& key) {
  if (!j.contains(key)) throw ValidationError(key, "missing required key");
  return j.at(key);
}

double as_number(const ordered_json& j, const std::string& field) {
  if (!j.is_number()) throw ValidationError(field, "expected a number");
  return j.get<double>();
}

Point2 as_point(const ordered_json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ValidationError(field, "expected [x, y]");
  return {as_number(j[0], field), as_number(j[1], field)};
}

std::vector<Point2> as_points(const ordered_json& j, const std::string& field) {
  if (!j.is_array()) throw ValidationError(field, "expected an array of points");
  std::vector<Point2> out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k)
    out.push_back(as_point(j[k], field + "[" + std::to_string(k) + "]"));
  return out;
}

ordered_json point_json(Point2 p) { return ordered_json::array({p.x, p.y}); }

ordered_json points_json(const std::vector<Point2>& pts) {
  ordered_json arr = ordered_json::array();
  for (Point2 p : pts) arr.push_back(point_json(p));
  return arr;
}

MissionConfig config_from_json(const ordered_json& doc) {
  if (!doc.is_object()) throw ValidationError("document", "expected a JSON object");
  if (doc.contains("schema") && doc.at("schema") != 1)
    throw ValidationError("schema", "unsupported schema version");

  MissionConfig cfg;

  const ordered_json& rect = require(doc, "mission_rect");
  if (!rect.is_array() || rect.size() != 4)
    throw ValidationError("mission_rect", "expected [x0, y0, x1, y1]");
  Rect mission{as_number(rect[0], "mission_rect"), as_number(rect[1], "mission_rect"),
               as_number(rect[2], "mission_rect"), as_number(rect[3], "mission_rect")};

  std::vector<Polygon> obstacles;
  const ordered_json& obs = require(doc, "obstacles");
  if (!obs.is_array()) throw ValidationError("obstacles", "expected an array of polygons");
  for (std::size_t k = 0; k < obs.size(); ++k) {
    const std::string field = "obstacles[" + std::to_string(k) + "]";
    try {
      obstacles.emplace_back(as_points(obs[k], field));
    } catch (const ValidationError& e) {
      throw ValidationError(field, e.what());
    }
  }
  try {
    cfg.scene = Scene::make(mission, std::move(obstacles));
  } catch (const ValidationError& e) {
    throw ValidationError(e.field, e.what());
  }

  cfg.trajectory = as_points(require(doc, "trajectory"), "trajectory");
  for (Point2& w : cfg.trajectory) w = snap_to_lattice(w);

  const ordered_json& nf = require(doc, "n_followers");
  if (!nf.is_number_integer() || nf.get<int>() < 1)
    throw ValidationError("n_followers", "expected a positive integer");
  cfg.n_followers = nf.get<int>();

  cfg.C = as_number(require(doc, "C"), "C");
  cfg.sensing.delta = as_number(require(doc, "delta"), "delta");

  const ordered_json& sensing = require(doc, "sensing");
  const std::string form = require(sensing, "form").get<std::string>();
  if (form == "linear_decay")
    cfg.sensing.form = SensingForm::linear_decay;
  else if (form == "smooth_poly")
    cfg.sensing.form = SensingForm::smooth_poly;
  else
    throw ValidationError("sensing.form", "expected linear_decay or smooth_poly");
  cfg.sensing.peak = as_number(require(sensing, "peak"), "sensing.peak");

  const ordered_json& density = require(doc, "density");
  if (require(density, "kind").get<std::string>() != "uniform")
    throw ValidationError("density.kind", "only uniform is supported");
  cfg.density.kind = EventDensity::Kind::uniform;
  cfg.density.value = as_number(require(density, "value"), "density.value");

  if (doc.contains("side_constraint") && !doc.at("side_constraint").is_null()) {
    const ordered_json& sc = doc.at("side_constraint");
    HalfPlane hp;
    hp.normal = as_point(require(sc, "normal"), "side_constraint.normal");
    const double len = norm(hp.normal);
    if (!(len > 0.0)) throw ValidationError("side_constraint.normal", "must be nonzero");
    hp.normal = hp.normal / len;
    hp.offset = sc.contains("offset") ? as_number(sc.at("offset"), "side_constraint.offset") : 0.0;
    cfg.side_constraint = hp;
  }

  cfg.cpa = CpaConfig::defaults_for(cfg.sensing, cfg.scene);
  if (doc.contains("cpa") && !doc.at("cpa").is_null()) {
    const ordered_json& c = doc.at("cpa");
    if (c.contains("step_init")) cfg.cpa.step_init = as_number(c.at("step_init"), "cpa.step_init");
    if (c.contains("step_min")) cfg.cpa.step_min = as_number(c.at("step_min"), "cpa.step_min");
    if (c.contains("max_sweeps")) cfg.cpa.max_sweeps = c.at("max_sweeps").get<int>();
    if (c.contains("tol")) cfg.cpa.tol = as_number(c.at("tol"), "cpa.tol");
  }

  cfg.grid_cell = doc.contains("grid_cell") ? as_number(doc.at("grid_cell"), "grid_cell")
                                            : cfg.sensing.delta / 20.0;
  const ordered_json& seed = require(doc, "seed");
  if (!seed.is_number_integer()) throw ValidationError("seed", "expected an integer");
  cfg.seed = seed.get<std::uint64_t>();
  cfg.occlusion = doc.contains("occlusion") ? doc.at("occlusion").get<bool>() : false;
  if (doc.contains("solver_restarts")) cfg.solver_restarts = doc.at("solver_restarts").get<int>();

  cfg.validate();
  return cfg;
}

}  // namespace

MissionConfig parse_config(const std::string& json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  return config_from_json(doc);
}

MissionConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const MissionConfig& config) {
  ordered_json doc;
  doc["schema"] = 1;
  doc["mission_rect"] = ordered_json::array({config.scene.mission_rect.x0,
                                             config.scene.mission_rect.y0,
                                             config.scene.mission_rect.x1,
                                             config.scene.mission_rect.y1});
  ordered_json obs = ordered_json::array();
  for (const Polygon& p : config.scene.obstacles) obs.push_back(points_json(p.vertices()));
  doc["obstacles"] = std::move(obs);
  doc["trajectory"] = points_json(config.trajectory);
  doc["n_followers"] = config.n_followers;
  doc["C"] = config.C;
  doc["delta"] = config.sensing.delta;
  doc["sensing"] = {
      {"form", config.sensing.form == SensingForm::linear_decay ? "linear_decay" : "smooth_poly"},
      {"peak", config.sensing.peak}};
  doc["density"] = {{"kind", "uniform"}, {"value", config.density.value}};
  if (config.side_constraint)
    doc["side_constraint"] = {{"normal", point_json(config.side_constraint->normal)},
                              {"offset", config.side_constraint->offset}};
  else
    doc["side_constraint"] = nullptr;
  doc["cpa"] = {{"step_init", config.cpa.step_init},
                {"step_min", config.cpa.step_min},
                {"max_sweeps", config.cpa.max_sweeps},
                {"tol", config.cpa.tol}};
  doc["grid_cell"] = config.grid_cell;
  doc["seed"] = config.seed;
  doc["occlusion"] = config.occlusion;
  doc["solver_restarts"] = config.solver_restarts;
  return doc.dump(2) + "\n";
}

std::string log_to_json(const MissionLog& log, const MissionConfig& config) {
  ordered_json doc;
  doc["schema"] = 1;
  doc["config"] = ordered_json::parse(config_to_json(config));
  ordered_json records = ordered_json::array();
  for (const MissionRecord& r : log.records) {
    ordered_json rec;
    rec["t"] = r.t;
    rec["state"] = to_string(r.state);
    rec["H"] = r.objective;
    rec["positions"] = points_json(r.positions);
    ordered_json events = ordered_json::array();
    for (const ProjectionEvent& e : r.events) {
      events.push_back({{"agent", e.agent},
                        {"from", point_json(e.from)},
                        {"candidate", point_json(e.candidate)},
                        {"projected", point_json(e.projected)},
                        {"beyond_translation", e.beyond_translation}});
    }
    rec["events"] = std::move(events);
    records.push_back(std::move(rec));
  }
  doc["records"] = std::move(records);
  ordered_json transitions = ordered_json::array();
  for (const StateTransition& tr : log.transitions)
    transitions.push_back({{"t", tr.t}, {"to", to_string(tr.to)}});
  doc["transitions"] = std::move(transitions);
  doc["summary"] = {{"initial_H", log.summary.initial_objective},
                    {"nominal_H", log.summary.nominal_objective},
                    {"final_H", log.summary.final_objective},
                    {"projections", log.summary.projection_count},
                    {"reconfigurations", log.summary.reconfiguration_count}};
  return doc.dump(2) + "\n";
}

std::string log_to_csv(const MissionLog& log) {
  std::string out = "t,state,H\n";
  char buf[64];
  for (const MissionRecord& r : log.records) {
    std::snprintf(buf, sizeof(buf), "%d,%s,%.10g\n", r.t, to_string(r.state), r.objective);
    out += buf;
  }
  return out;
}

MissionLog log_from_json(const std::string& json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  MissionLog log;
  for (const auto& rec : require(doc, "records")) {
    MissionRecord r;
    r.t = rec.at("t").get<int>();
    r.state = rec.at("state").get<std::string>() == "free" ? StateLabel::Free
                                                           : StateLabel::Constrained;
    r.objective = rec.at("H").get<double>();
    r.positions = as_points(rec.at("positions"), "records.positions");
    for (const auto& ev : rec.at("events")) {
      ProjectionEvent e;
      e.agent = ev.at("agent").get<int>();
      e.from = as_point(ev.at("from"), "events.from");
      e.candidate = as_point(ev.at("candidate"), "events.candidate");
      e.projected = as_point(ev.at("projected"), "events.projected");
      e.beyond_translation = ev.at("beyond_translation").get<double>();
      r.events.push_back(e);
    }
    log.records.push_back(std::move(r));
  }
  if (doc.contains("summary")) {
    const auto& s = doc.at("summary");
    log.summary.initial_objective = s.at("initial_H").get<double>();
    log.summary.nominal_objective = s.at("nominal_H").get<double>();
    log.summary.final_objective = s.at("final_H").get<double>();
    log.summary.projection_count = s.at("projections").get<int>();
    log.summary.reconfiguration_count = s.at("reconfigurations").get<int>();
  }
  return log;
}

std::vector<std::filesystem::path> emit_outputs(const MissionLog& log,
                                                const MissionConfig& config,
                                                const RunManifest& manifest) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(manifest.out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + manifest.out_dir.string());

  const int t_max = log.records.empty() ? 0 : log.records.back().t;
  for (int t : manifest.snapshot_times)
    if (t < 0 || t > t_max)
      throw ValidationError("snapshot_times", "time " + std::to_string(t) + " outside [0, T]");

  const auto write_file = [](const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + p.string());
    out << body;
    if (!out) throw IoError("write failed: " + p.string());
  };

  std::vector<fs::path> written;
  for (OutputFormat f : manifest.formats) {
    switch (f) {
      case OutputFormat::JsonLog: {
        const fs::path p = manifest.out_dir / "mission_log.json";
        write_file(p, log_to_json(log, config));
        written.push_back(p);
        break;
      }
      case OutputFormat::CsvTrace: {
        const fs::path p = manifest.out_dir / "trace.csv";
        write_file(p, log_to_csv(log));
        written.push_back(p);
        break;
      }
      case OutputFormat::Svg: {
        for (int t : manifest.snapshot_times) {
          const MissionRecord* rec = nullptr;
          for (const MissionRecord& r : log.records)
            if (r.t == t) rec = &r;
          if (!rec) throw ValidationError("snapshot_times", "no record at t=" + std::to_string(t));
          const fs::path p = manifest.out_dir / ("snap_t" + std::to_string(t) + ".svg");
          write_file(p, render_snapshot_svg(config, rec->positions));
          written.push_back(p);
        }
        break;
      }
    }
  }
  return written;
}

}  // namespace covform
