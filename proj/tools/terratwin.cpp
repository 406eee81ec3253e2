// Copyright 2026 The terratwin Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "terratwin/common/checksum.hpp"
#include "terratwin/common/error.hpp"
#include "terratwin/engine/services.hpp"
#include "terratwin/engine/validation.hpp"
#include "terratwin/firesim/firesim.hpp"
#include "terratwin/geomodel/country.hpp"
#include "terratwin/geomodel/raster_io.hpp"
#include "terratwin/pipeline/catalog.hpp"
#include "terratwin/server/http.hpp"

namespace fs = std::filesystem;
using namespace terratwin;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInfeasible = 3;

// Inputs: the model directory first, then the working directory.
fs::path resolve_input(const fs::path& model, const fs::path& p) {
  if (p.is_absolute()) return p;
  if (fs::exists(model / p)) return model / p;
  return p;
}

// Outputs land inside the model directory unless given absolutely.
fs::path resolve_output(const fs::path& model, const fs::path& p) {
  return p.is_absolute() ? p : model / p;
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void emit(const std::string& text, const std::string& out, const fs::path& model) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    const fs::path path = resolve_output(model, out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_file_atomic(path, text);
    std::cerr << "wrote " << path.string() << "\n";
  }
}

geo::Point parse_xy(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw InvalidArgument("expected x,y but got '" + text + "'");
  try {
    std::size_t a = 0;
    std::size_t b = 0;
    const std::string xs = text.substr(0, comma);
    const std::string ys = text.substr(comma + 1);
    const double x = std::stod(xs, &a);
    const double y = std::stod(ys, &b);
    if (a != xs.size() || b != ys.size()) throw std::invalid_argument("trailing");
    return {x, y};
  } catch (const std::exception&) {
    throw InvalidArgument("expected x,y but got '" + text + "'");
  }
}

hazard::ClimateScenario load_scenario(const fs::path& model, const std::string& arg) {
  if (arg.empty()) return hazard::ClimateScenario::baseline();
  const fs::path path = resolve_input(model, arg);
  if (fs::exists(path) && fs::is_regular_file(path)) return hazard::parse_scenario(read_file(path));
  return engine::find_scenario(arg);
}

// `x,y` rows with an optional header line; blank lines are skipped.
std::vector<geo::Point> read_points(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<geo::Point> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (n == 1 && line.find_first_of("0123456789") != 0 && line.rfind("-", 0) != 0) continue;
    const auto parts = line.find(',', line.find(',') + 1);
    try {
      out.push_back(parse_xy(line.substr(0, parts)));
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), n);
    }
  }
  return out;
}

std::string csv_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int current_year() {
  const auto now = std::chrono::system_clock::now();
  const auto days = std::chrono::floor<std::chrono::days>(now);
  return static_cast<int>(std::chrono::year_month_day(days).year());
}

struct Options {
  std::uint64_t seed = 1;
  int size = 256;
  double cellsize = 100.0;
  int data_year = 0;
  std::string out;
  std::string model;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
  double refresh = 5.0;
  std::string peril;
  std::string points;
  std::string scenario;
  std::string config;
  std::string ignite;
  std::string params;
  std::string escape;
  int steps = -1;
  std::string category;
  std::vector<std::string> payload;
  int year = 0;
  std::string source = "payload";
  std::size_t k = 8;
  std::uint64_t cluster_seed = 0;
};

int cmd_generate(const Options& o) {
  geo::GeneratorParams params;
  if (o.data_year != 0) params.data_year = o.data_year;
  const auto model = geo::generate_country(o.seed, geo::default_grid(o.size, o.cellsize), params);
  const auto cat = pipeline::create_model_dir(o.out, model);
  std::cout << "model " << o.out << " version " << cat.version << ": "
            << model.layers.size() << " layers, " << model.features.size() << " features, "
            << model.roads.node_count() << " road nodes, " << model.events.size() << " events\n";
  return kExitOk;
}

int cmd_serve(const Options& o) {
  server::Router router{fs::path(o.model)};
  server::ServeOptions so;
  so.host = o.host;
  so.port = o.port;
  so.static_dir = o.static_dir;
  so.refresh_seconds = o.refresh;
  server::HttpServer http(router, so);
  std::cerr << "serving " << o.model << " (catalog " << router.snapshot()->version() << ") on "
            << o.host << ":" << o.port << "\n";
  if (!http.run()) {
    std::cerr << "error: cannot listen on " << o.host << ":" << o.port << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

int cmd_risk(const Options& o) {
  const fs::path model(o.model);
  const auto twin = engine::Twin::open(model);
  const auto peril = geo::parse_peril(o.peril);
  if (!peril) throw InvalidArgument("unknown peril '" + o.peril + "'");
  const auto scenario = load_scenario(model, o.scenario);
  const auto points = read_points(resolve_input(model, o.points));
  std::string csv = "x,y,score,class\n";
  for (const auto& p : points) {
    const auto a = twin->risk_at(*peril, p, scenario);
    csv += csv_real(p.x) + "," + csv_real(p.y) + "," + csv_real(a.score) + "," +
           std::to_string(a.hazard_class) + "\n";
  }
  emit(csv, o.out, model);
  return kExitOk;
}

int cmd_scenario(const std::string& mode, const Options& o) {
  const fs::path model(o.model);
  const auto twin = engine::Twin::open(model);
  const json config = o.config.empty() ? json::object() : read_json(resolve_input(model, o.config));
  json result;
  bool feasible = true;
  if (mode == "kmedian") {
    result = engine::run_kmedian(*twin, config);
    feasible = result["feasible"].get<bool>();
    std::cerr << "kmedian: sites " << result["chosen"].dump() << ", objective "
              << result["objective"].dump() << " min" << (feasible ? "" : " (infeasible)") << "\n";
  } else if (mode == "cover") {
    result = engine::run_cover(*twin, config);
    feasible = result["feasible"].get<bool>();
    std::cerr << "cover: " << result["chosen"].size() << " stations " << result["chosen"].dump()
              << ", uncoverable targets " << result["uncoverable"].size() << "\n";
  } else {
    result = engine::run_pv(*twin, config);
    feasible = !result["zones"].empty();
    std::cerr << "pv: " << result["total_zones"] << " zones";
    if (feasible) {
      std::cerr << ", best score " << result["zones"][0]["score"] << " over "
                << result["zones"][0]["area_m2"] << " m2";
    }
    std::cerr << "\n";
  }
  result["catalog_version"] = twin->version();
  emit(result.dump(2) + "\n", o.out, model);
  return feasible ? kExitOk : kExitInfeasible;
}

int cmd_fire(const Options& o) {
  const fs::path model(o.model);
  const auto twin = engine::Twin::open(model);
  json config = o.params.empty() ? json::object() : read_json(resolve_input(model, o.params));
  const geo::Point ig = parse_xy(o.ignite);
  config["ignite"] = json::array({json::array({ig.x, ig.y})});
  if (o.steps >= 0) config["steps"] = o.steps;
  const auto sim = engine::run_fire_simulation(*twin, config);
  const fs::path dir = resolve_output(model, o.out.empty() ? "runs/fire" : o.out);
  fs::create_directories(dir);
  for (std::size_t i = 0; i < sim.states.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "step_%04d.asc", sim.states[i].step);
    geo::write_raster(firesim::state_raster(sim, i), dir / name);
  }
  json summary = engine::fire_json(sim);
  summary.erase("ignition_steps");
  summary["catalog_version"] = twin->version();
  int code = kExitOk;
  if (!o.escape.empty()) {
    const geo::Point start = parse_xy(o.escape);
    const double walk = config.value("walk_speed_ms", 1.4);
    const auto route = firesim::escape_route(twin->model().roads, twin->snap(start), sim, walk);
    summary["route"] = {{"feasible", route.feasible},
                        {"nodes", route.nodes},
                        {"minutes", route.feasible ? json(route.minutes) : json(nullptr)}};
    if (!route.feasible) code = kExitInfeasible;
  }
  write_file_atomic(dir / "fire.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  std::cerr << sim.states.size() << " burn rasters in " << dir.string() << "\n";
  return code;
}

int cmd_update(const Options& o) {
  const auto cat = pipeline::parse_category(o.category);
  if (!cat) throw InvalidArgument("unknown category '" + o.category + "'");
  std::vector<fs::path> files;
  for (const auto& p : o.payload) files.push_back(resolve_input(o.model, p));
  const int year = o.year != 0 ? o.year : current_year();
  const auto res = pipeline::apply_update(o.model, *cat, files, year, o.source);
  std::cerr << (res.new_version ? "new catalog version " : "no change, catalog stays at ")
            << res.catalog.version << "\n";
  std::cout << pipeline::format_diffs(res.diffs);
  return kExitOk;
}

int cmd_staleness(const Options& o) {
  const auto cat = pipeline::ModelStore(o.model).load_current();
  const int year = o.year != 0 ? o.year : current_year();
  std::cout << pipeline::format_staleness(pipeline::staleness_report(cat, year), year);
  return kExitOk;
}

int cmd_validate(const Options& o) {
  const auto twin = engine::Twin::open(o.model);
  const auto report = engine::validate_representatives(*twin, o.k, o.cluster_seed);
  std::cout << engine::format_validation(report);
  std::cerr << report.suite.executed << " checks on " << report.representative_cells.size()
            << " representatives instead of " << report.full_grid_executions
            << " (reduction " << report.reduction() << "x), "
            << report.suite.failures.size() << " failed\n";
  return report.suite.all_passed() ? kExitOk : kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"terratwin: environmental digital twin engine"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "Generate a synthetic country model directory");
  gen->add_option("--seed", o.seed, "Generator seed")->default_val(1);
  gen->add_option("--size", o.size, "Grid cells per side")->default_val(256)->check(CLI::Range(16, 4096));
  gen->add_option("--cellsize", o.cellsize, "Cell size in meters")->default_val(100.0);
  gen->add_option("--data-year", o.data_year, "Version year stamped on every dataset");
  gen->add_option("--out", o.out, "Output model directory")->required();

  auto* srv = app.add_subcommand("serve", "Serve the HTTP API for a model directory");
  srv->add_option("--model", o.model, "Model directory")->required()->check(CLI::ExistingDirectory);
  srv->add_option("--port", o.port, "TCP port")->default_val(8080);
  srv->add_option("--host", o.host, "Bind address")->default_val("127.0.0.1");
  srv->add_option("--static", o.static_dir, "Directory served under /");
  srv->add_option("--refresh", o.refresh, "Seconds between catalog checks (0 = never)")->default_val(5.0);

  auto* risk = app.add_subcommand("risk", "Batch risk scores for a CSV of points");
  risk->add_option("--model", o.model, "Model directory")->required()->check(CLI::ExistingDirectory);
  risk->add_option("--peril", o.peril, "wildfire|flood|landslide|earthquake|subsidence")->required();
  risk->add_option("--points", o.points, "CSV with x,y columns")->required();
  risk->add_option("--scenario", o.scenario, "Scenario name or JSON file");
  risk->add_option("--out", o.out, "Output CSV (default stdout)");

  auto* sc = app.add_subcommand("scenario", "Run a what-if scenario");
  sc->require_subcommand(1);
  std::vector<CLI::App*> modes;
  for (const char* m : {"kmedian", "cover", "pv"}) {
    auto* s = sc->add_subcommand(m, std::string(m) + " scenario");
    s->add_option("--model", o.model, "Model directory")->required()->check(CLI::ExistingDirectory);
    s->add_option("--config", o.config, "Scenario JSON config");
    s->add_option("--out", o.out, "Output JSON (default stdout)");
    modes.push_back(s);
  }

  auto* fire = app.add_subcommand("fire", "Simulate a wildfire and optionally an escape route");
  fire->add_option("--model", o.model, "Model directory")->required()->check(CLI::ExistingDirectory);
  fire->add_option("--ignite", o.ignite, "Ignition point x,y")->required();
  fire->add_option("--params", o.params, "Fire parameter JSON");
  fire->add_option("--escape", o.escape, "Escape route start x,y");
  fire->add_option("--steps", o.steps, "Maximum steps (overrides the parameter file)");
  fire->add_option("--out", o.out, "Output directory for burn rasters (default runs/fire)");

  auto* upd = app.add_subcommand("update", "Ingest a payload into a new catalog version");
  upd->add_option("--model", o.model, "Model directory")->required()->check(CLI::ExistingDirectory);
  upd->add_option("--category", o.category, "land_cover|landform|geohazard|proximity|climate_weather")
      ->required();
  upd->add_option("--payload", o.payload, "Payload file named after its dataset")->required();
  upd->add_option("--year", o.year, "Version year (default: current year)");
  upd->add_option("--source", o.source, "Source descriptor")->default_val("payload");

  auto* stale = app.add_subcommand("staleness", "List catalog entries older than a year");
  stale->add_option("--model", o.model, "Model directory")->required()->check(CLI::ExistingDirectory);
  stale->add_option("--year", o.year, "Current year (default: this year)");

  auto* val = app.add_subcommand("validate", "Cluster-representative validation suite");
  val->add_option("--model", o.model, "Model directory")->required()->check(CLI::ExistingDirectory);
  val->add_option("--k", o.k, "Number of clusters")->default_val(8);
  val->add_option("--seed", o.cluster_seed, "Clustering seed")->default_val(0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(o);
    if (*srv) return cmd_serve(o);
    if (*risk) return cmd_risk(o);
    for (auto* m : modes) {
      if (*m) return cmd_scenario(m->get_name(), o);
    }
    if (*fire) return cmd_fire(o);
    if (*upd) return cmd_update(o);
    if (*stale) return cmd_staleness(o);
    if (*val) return cmd_validate(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
