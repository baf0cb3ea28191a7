#include <doctest.h>

#include <cctype>
#include <fstream>
#include <sstream>

#include "covform/config_io.hpp"
#include "covform/svg.hpp"

using namespace covform;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string source_path(const std::string& rel) {
  return std::string(COVFORM_SOURCE_DIR) + "/" + rel;
}

// Minimal well-formedness checker sufficient for the SVG we emit: balanced
// tags, quoted attributes, prolog/comment handling.
bool xml_well_formed(const std::string& s) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '<') {
      ++i;
      continue;
    }
    if (s.compare(i, 2, "<?") == 0) {
      i = s.find("?>", i);
      if (i == std::string::npos) return false;
      i += 2;
      continue;
    }
    if (s.compare(i, 4, "<!--") == 0) {
      i = s.find("-->", i);
      if (i == std::string::npos) return false;
      i += 3;
      continue;
    }
    const bool closing = i + 1 < s.size() && s[i + 1] == '/';
    std::size_t j = i + (closing ? 2 : 1);
    std::size_t name_end = j;
    while (name_end < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[name_end])) || s[name_end] == '-' ||
            s[name_end] == '_' || s[name_end] == ':'))
      ++name_end;
    const std::string name = s.substr(j, name_end - j);
    if (name.empty()) return false;
    std::size_t k = name_end;
    bool in_quote = false;
    char quote = 0;
    while (k < s.size()) {
      const char c = s[k];
      if (in_quote) {
        if (c == quote) in_quote = false;
      } else if (c == '"' || c == '\'') {
        in_quote = true;
        quote = c;
      } else if (c == '>') {
        break;
      }
      ++k;
    }
    if (k >= s.size() || in_quote) return false;
    const bool self_closing = s[k - 1] == '/';
    if (closing) {
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
    } else if (!self_closing) {
      stack.push_back(name);
    }
    i = k + 1;
  }
  return stack.empty();
}

}  // namespace

TEST_CASE("bundled tiny scenario parses with expected fields") {
  const MissionConfig cfg = load_config(source_path("scenarios/tiny.json"));
  CHECK(cfg.n_followers == 2);
  CHECK(cfg.C == 4.0);
  CHECK(cfg.sensing.delta == 2.5);
  CHECK(cfg.trajectory.size() == 4);
  CHECK(cfg.scene.obstacles.size() == 1);
  CHECK(cfg.occlusion == false);
  // defaults for absent keys
  CHECK(cfg.cpa.step_init == doctest::Approx(0.5 * cfg.sensing.delta));
  CHECK(cfg.side_constraint.has_value() == false);
}

TEST_CASE("bundled reproduction scenario matches the headline parameters") {
  const MissionConfig cfg = load_config(source_path("scenarios/paper_sec5.json"));
  CHECK(cfg.scene.mission_rect.width() == 60.0);
  CHECK(cfg.scene.mission_rect.height() == 50.0);
  CHECK(cfg.C == 10.0);
  CHECK(cfg.sensing.delta == 8.0);
  CHECK(cfg.n_followers == 8);
  CHECK(cfg.density.value == 1.0);
  CHECK(cfg.trajectory.size() == 36);
  REQUIRE(cfg.side_constraint.has_value());
  CHECK(cfg.side_constraint->normal.x == -1.0);
  // rightward unit steps
  for (std::size_t k = 1; k < cfg.trajectory.size(); ++k) {
    CHECK(cfg.trajectory[k].x - cfg.trajectory[k - 1].x == 1.0);
    CHECK(cfg.trajectory[k].y == cfg.trajectory[k - 1].y);
  }
}

TEST_CASE("validation errors name the field") {
  const std::string good = read_file(source_path("scenarios/tiny.json"));

  CHECK_THROWS_AS(parse_config("{ not json"), ParseError);

  {
    auto bad = good;
    bad.replace(bad.find("\"n_followers\": 2"), 16, "\"n_followers\": 0");
    try {
      parse_config(bad);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.field == "n_followers");
    }
  }
  {
    // bow-tie obstacle
    auto bad = good;
    const std::string tag = "\"obstacles\": ";
    bad.replace(bad.find(tag), tag.size() + 1,
                tag + "[[[0,0],[2,2],[2,0],[0,2]]],\n  \"unused\": [");
    try {
      parse_config(bad);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.field.find("obstacles[0]") == 0);
    }
  }
  {
    auto bad = good;
    bad.replace(bad.find("\"seed\": 7"), 9, "\"seed\": true");
    CHECK_THROWS_AS(parse_config(bad), ValidationError);
  }
}

TEST_CASE("config round-trips through emit and parse") {
  const MissionConfig cfg = load_config(source_path("scenarios/tiny.json"));
  const MissionConfig back = parse_config(config_to_json(cfg));
  CHECK(back.n_followers == cfg.n_followers);
  CHECK(back.C == cfg.C);
  CHECK(back.sensing.delta == cfg.sensing.delta);
  CHECK(back.sensing.form == cfg.sensing.form);
  CHECK(back.seed == cfg.seed);
  CHECK(back.grid_cell == cfg.grid_cell);
  CHECK(back.cpa.max_sweeps == cfg.cpa.max_sweeps);
  CHECK(back.cpa.tol == cfg.cpa.tol);
  REQUIRE(back.trajectory.size() == cfg.trajectory.size());
  for (std::size_t k = 0; k < cfg.trajectory.size(); ++k)
    CHECK(back.trajectory[k] == cfg.trajectory[k]);
  REQUIRE(back.scene.obstacles.size() == cfg.scene.obstacles.size());
  CHECK(config_to_json(back) == config_to_json(cfg));
}

TEST_CASE("mission log emission: schema, csv, determinism, golden file") {
  const MissionConfig cfg = load_config(source_path("scenarios/tiny.json"));
  const MissionLog log = run_mission(cfg);

  const std::string json_a = log_to_json(log, cfg);
  const std::string json_b = log_to_json(run_mission(cfg), cfg);
  CHECK(json_a == json_b);  // byte-identical reruns

  const MissionLog parsed = log_from_json(json_a);
  REQUIRE(parsed.records.size() == log.records.size());
  for (std::size_t r = 0; r < log.records.size(); ++r) {
    CHECK(parsed.records[r].t == log.records[r].t);
    CHECK(parsed.records[r].objective == log.records[r].objective);
    CHECK(parsed.records[r].positions == log.records[r].positions);
  }

  const std::string csv = log_to_csv(log);
  CHECK(csv.rfind("t,state,H\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(log.records.size()) + 1);

  const std::string golden = read_file(source_path("tests/data/golden_tiny_log.json"));
  CHECK(json_a == golden);
}

TEST_CASE("svg snapshots are well-formed and structurally consistent") {
  const MissionConfig cfg = load_config(source_path("scenarios/tiny.json"));
  const MissionLog log = run_mission(cfg);
  const std::string svg = render_snapshot_svg(cfg, log.records.front().positions);

  CHECK(xml_well_formed(svg));
  CHECK(svg.find("viewBox=\"0 0 30 20\"") != std::string::npos);

  // one glyph per agent: a triangle for the leader, numbered circles for
  // followers; at least n_followers connectivity edges in a connected team
  std::size_t follower_glyphs = 0;
  for (std::size_t at = svg.find("text-anchor=\"middle\""); at != std::string::npos;
       at = svg.find("text-anchor=\"middle\"", at + 1))
    ++follower_glyphs;
  CHECK(follower_glyphs == static_cast<std::size_t>(cfg.n_followers));
  CHECK(svg.find(">L</text>") != std::string::npos);

  std::size_t edges = 0;
  for (std::size_t at = svg.find("<line "); at != std::string::npos;
       at = svg.find("<line ", at + 1))
    ++edges;
  CHECK(edges >= static_cast<std::size_t>(cfg.n_followers));

  // emit_outputs writes the requested artifact set
  RunManifest manifest;
  manifest.out_dir = "cli_io_test_out";
  manifest.snapshot_times = {0, 2};
  const auto written = emit_outputs(log, cfg, manifest);
  REQUIRE(written.size() == 4);  // json, two svgs, csv
  for (const auto& p : written) CHECK(std::ifstream(p).good());
  CHECK_THROWS_AS(
      [&] {
        RunManifest bad = manifest;
        bad.snapshot_times = {99};
        emit_outputs(log, cfg, bad);
      }(),
      ValidationError);
}
