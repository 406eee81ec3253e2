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

#include "terratwin/server/router.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <json.hpp>

#include "terratwin/common/error.hpp"
#include "terratwin/engine/services.hpp"
#include "terratwin/geomodel/raster_io.hpp"
#include "terratwin/landcover/landcover.hpp"
#include "terratwin/pipeline/weather.hpp"

namespace terratwin::server {

using engine::Twin;
using nlohmann::json;

namespace {

class MethodNotAllowed : public Error {
 public:
  using Error::Error;
};

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    std::size_t j = i;
    while (j < path.size() && path[j] != '/') ++j;
    if (j > i) parts.push_back(path.substr(i, j - i));
    i = j;
  }
  return parts;
}

const std::string* find_param(const Request& r, const std::string& key) {
  auto it = r.query.find(key);
  return it == r.query.end() ? nullptr : &it->second;
}

double number_param(const Request& r, const std::string& key) {
  const std::string* v = find_param(r, key);
  if (!v) throw InvalidArgument("missing parameter '" + key + "'");
  double out = 0.0;
  const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
  if (res.ec != std::errc() || res.ptr != v->data() + v->size() || !std::isfinite(out)) {
    throw InvalidArgument("parameter '" + key + "' is not a number");
  }
  return out;
}

std::int64_t integer_param(const std::string& text, const std::string& what) {
  std::int64_t out = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InvalidArgument(what + " must be an integer");
  }
  return out;
}

geo::Point point_param(const Request& r) { return {number_param(r, "x"), number_param(r, "y")}; }

const hazard::ClimateScenario& scenario_param(const Request& r) {
  const std::string* s = find_param(r, "scenario");
  return engine::find_scenario(s ? *s : "baseline");
}

geo::Peril peril_segment(const std::string& name) {
  const auto p = geo::parse_peril(name);
  if (!p) throw NotFound("unknown peril '" + name + "'");
  return *p;
}

json parse_body(const Request& r) {
  if (r.body.empty()) return json::object();
  try {
    return json::parse(r.body);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed JSON body: ") + e.what());
  }
}

json layer_json(const geo::RasterLayer& layer) {
  const auto& s = layer.spec();
  json values = json::array();
  for (double v : layer.values()) values.push_back(v);
  return {{"name", layer.name()}, {"units", layer.units()}, {"ncols", s.ncols},
          {"nrows", s.nrows},     {"xll", s.xll},           {"yll", s.yll},
          {"cellsize", s.cellsize}, {"nodata", s.nodata},   {"values", std::move(values)}};
}

Category layer_category(const std::string& name) {
  if (name == "protected_mask") return Category::kLandCover;
  return pipeline::dataset(name).category;
}

void require_method(const Request& r, const char* method) {
  if (r.method != method) throw MethodNotAllowed(std::string("use ") + method);
}

void require_segments(const std::vector<std::string>& seg, std::size_t n) {
  if (seg.size() != n) throw NotFound("unknown endpoint");
}

Response json_response(int status, json body, const std::string& version) {
  if (body.is_object()) body["catalog_version"] = version;
  return {status, body.dump(), version};
}

Response error_response(int status, const std::string& message, const std::string& version) {
  return {status, json{{"error", message}}.dump(), version};
}

bool is_async_request(const Request& r) {
  const std::string* a = find_param(r, "async");
  return a && (*a == "1" || *a == "true");
}

bool is_sync_forced(const Request& r) {
  const std::string* a = find_param(r, "async");
  return a && (*a == "0" || *a == "false");
}

}  // namespace

Router::Router(std::filesystem::path model_root)
    : root_(std::move(model_root)), twin_(Twin::open(*root_)) {}

Router::Router(std::shared_ptr<const Twin> twin) : twin_(std::move(twin)) {}

Router::~Router() {
  for (auto& w : workers_) {
    if (w.joinable()) w.join();
  }
}

std::shared_ptr<const Twin> Router::snapshot() const {
  std::lock_guard<std::mutex> lock(twin_mu_);
  return twin_;
}

bool Router::refresh() {
  if (!root_) return false;
  const std::string current = pipeline::ModelStore(*root_).current_version();
  if (current == snapshot()->version()) return false;
  auto next = Twin::open(*root_);
  std::lock_guard<std::mutex> lock(twin_mu_);
  twin_ = std::move(next);
  return true;
}

Response Router::handle(const Request& request) {
  const auto twin = snapshot();
  return dispatch(request, twin);
}

Response Router::dispatch(const Request& r, const std::shared_ptr<const Twin>& twin) {
  const std::string& version = twin->version();
  try {
    const auto seg = split_path(r.path);
    if (seg.size() < 3 || seg[0] != "api" || seg[1] != "v1") throw NotFound("unknown endpoint");
    const std::string& head = seg[2];
    std::optional<Category> category;
    json out;

    // POST services that may run as jobs.
    const auto solver = [&](const char* service, Category cat, auto&& fn) -> std::optional<Response> {
      require_method(r, "POST");
      const json body = parse_body(r);
      if (!is_sync_forced(r) &&
          (is_async_request(r) || engine::estimate_seconds(service, *twin, body) > job_threshold_)) {
        return start_job(r, twin, cat);
      }
      out = fn(body);
      category = cat;
      return std::nullopt;
    };

    if (head == "services") {
      require_method(r, "GET");
      require_segments(seg, 3);
      json list = json::array();
      std::size_t implemented = 0;
      for (const auto& d : service_catalog()) {
        implemented += d.implemented;
        list.push_back({{"id", d.id},
                        {"name", d.name},
                        {"category", pipeline::category_name(d.category)},
                        {"method", d.method},
                        {"endpoint", d.endpoint},
                        {"implemented", d.implemented}});
      }
      out = {{"services", list}, {"count", list.size()}, {"implemented", implemented}};
    } else if (head == "risk") {
      require_method(r, "GET");
      if (seg.size() == 5 && seg[4] == "layer") {
        const auto& a = twin->assessment(peril_segment(seg[3]), scenario_param(r));
        out = {{"peril", seg[3]}, {"scenario", scenario_param(r).name()},
               {"classes", layer_json(a.classes)}, {"risk", layer_json(a.risk)}};
      } else {
        require_segments(seg, 4);
        out = engine::risk_json(
            twin->risk_at(peril_segment(seg[3]), point_param(r), scenario_param(r)));
      }
      category = Category::kGeohazard;
    } else if (head == "damage") {
      require_method(r, "GET");
      require_segments(seg, 4);
      const auto ans = twin->risk_at(peril_segment(seg[3]), point_param(r), scenario_param(r));
      const double value = number_param(r, "value");
      if (value < 0) throw InvalidArgument("value must be non-negative");
      out = engine::risk_json(ans);
      out["property_value"] = value;
      out["expected_damage"] = hazard::expected_damage(hazard::HazardClass(ans.hazard_class),
                                                       value, hazard::DamageTable::defaults());
      category = Category::kGeohazard;
    } else if (head == "proximity") {
      require_method(r, "GET");
      require_segments(seg, 4);
      out = engine::proximity_json(twin->proximity_at(seg[3], point_param(r)));
      category = Category::kProximity;
    } else if (head == "zonal") {
      require_method(r, "GET");
      require_segments(seg, 4);
      out = engine::zonal_json(twin->zonal(integer_param(seg[3], "region id")));
      category = Category::kLandCover;
    } else if (head == "landcover") {
      require_segments(seg, 4);
      if (seg[3] != "spread") throw NotFound("unknown endpoint");
      require_method(r, "POST");
      const json body = parse_body(r);
      if (!body.is_object() || !body.contains("epoch_a") || !body.contains("epoch_b") ||
          !body["epoch_a"].is_string() || !body["epoch_b"].is_string()) {
        throw InvalidArgument("epoch_a and epoch_b must be ASCII grid texts");
      }
      const auto a = geo::parse_raster(body["epoch_a"].get<std::string>(), "epoch_a");
      const auto b = geo::parse_raster(body["epoch_b"].get<std::string>(), "epoch_b");
      if (!body.contains("years") || !body["years"].is_number()) {
        throw InvalidArgument("years must be a number");
      }
      const double years = body["years"].get<double>();
      const json& sp = body.value("species", json("pinus_brutia"));
      double v = 0.0;
      if (sp.is_number_integer()) {
        v = landcover::spread_velocity(a, b, sp.get<int>(), years);
      } else if (sp.is_string()) {
        v = landcover::spread_velocity(a, b, sp.get<std::string>(), years);
      } else {
        throw InvalidArgument("species must be a name or a code");
      }
      out = {{"species", sp}, {"years", years}, {"velocity_m_per_year", v}};
      category = Category::kLandCover;
    } else if (head == "scenario") {
      require_segments(seg, 4);
      std::optional<Response> job;
      if (seg[3] == "kmedian") {
        job = solver("kmedian", Category::kProximity,
                     [&](const json& b) { return engine::run_kmedian(*twin, b); });
      } else if (seg[3] == "cover") {
        job = solver("cover", Category::kProximity,
                     [&](const json& b) { return engine::run_cover(*twin, b); });
      } else if (seg[3] == "pv") {
        job = solver("pv", Category::kClimateWeather,
                     [&](const json& b) { return engine::run_pv(*twin, b); });
      } else {
        throw NotFound("unknown scenario service '" + seg[3] + "'");
      }
      if (job) return *job;
    } else if (head == "fire") {
      require_segments(seg, 4);
      std::optional<Response> job;
      if (seg[3] == "simulate") {
        job = solver("fire", Category::kGeohazard,
                     [&](const json& b) { return engine::run_fire(*twin, b); });
      } else if (seg[3] == "escape") {
        job = solver("escape", Category::kGeohazard,
                     [&](const json& b) { return engine::run_escape(*twin, b); });
      } else {
        throw NotFound("unknown fire service '" + seg[3] + "'");
      }
      if (job) return *job;
    } else if (head == "telemetry") {
      require_method(r, "GET");
      require_segments(seg, 4);
      if (seg[3] != "heatmap") throw NotFound("unknown endpoint");
      const auto counts = ledger_.counts();
      const auto heat = usage_heatmap(counts);
      json roles = json::array();
      for (std::size_t i = 0; i < kNamedRoles; ++i) roles.push_back(role_name(static_cast<Role>(i)));
      json cats = json::array();
      for (Category c : pipeline::kAllCategories) cats.push_back(pipeline::category_name(c));
      out = {{"roles", roles},
             {"categories", cats},
             {"values", heat},
             {"counts", counts},
             {"other", [&] {
                json row = json::array();
                for (Category c : pipeline::kAllCategories) row.push_back(ledger_.count(Role::kOther, c));
                return row;
              }()}};
    } else if (head == "catalog") {
      require_method(r, "GET");
      if (seg.size() == 3) {
        out = json::parse(pipeline::format_catalog(twin->catalog()));
      } else {
        require_segments(seg, 4);
        if (seg[3] != "staleness") throw NotFound("unknown endpoint");
        const std::string* y = find_param(r, "year");
        if (!y) throw InvalidArgument("missing parameter 'year'");
        const int year = static_cast<int>(integer_param(*y, "year"));
        out = json::parse(pipeline::format_staleness(
            pipeline::staleness_report(twin->catalog(), year), year));
      }
    } else if (head == "jobs") {
      require_method(r, "GET");
      require_segments(seg, 4);
      return job_status(seg[3]);
    } else if (head == "layers") {
      require_method(r, "GET");
      if (seg.size() == 3) {
        json names = json::array();
        for (const auto& [name, layer] : twin->model().layers) {
          names.push_back({{"name", name}, {"units", layer.units()},
                           {"category", pipeline::category_name(layer_category(name))}});
        }
        out = {{"layers", names}};
      } else {
        require_segments(seg, 4);
        out = layer_json(twin->model().layer(seg[3]));
        category = layer_category(seg[3]);
      }
    } else if (head == "scenarios") {
      require_method(r, "GET");
      require_segments(seg, 3);
      json list = json::array();
      for (const auto& s : engine::builtin_scenarios()) {
        list.push_back(json::parse(hazard::format_scenario(s)));
      }
      out = {{"scenarios", list}};
    } else if (head == "weather") {
      require_method(r, "GET");
      if (seg.size() == 3) {
        std::vector<std::string> stations;
        for (const auto& rd : twin->weather()) {
          if (stations.empty() || stations.back() != rd.station) stations.push_back(rd.station);
        }
        stations.erase(std::unique(stations.begin(), stations.end()), stations.end());
        out = {{"stations", stations}};
      } else {
        require_segments(seg, 4);
        const std::string* g = find_param(r, "granularity");
        const auto gran = pipeline::parse_granularity(g ? *g : "daily");
        if (!gran) throw InvalidArgument("granularity must be hourly, daily, monthly or yearly");
        std::vector<pipeline::Reading> mine;
        for (const auto& rd : twin->weather()) {
          if (rd.station == seg[3]) mine.push_back(rd);
        }
        if (mine.empty()) throw NotFound("unknown station '" + seg[3] + "'");
        const auto series = pipeline::aggregate_weather(std::move(mine), *gran);
        json buckets = json::array();
        for (const auto& b : series.begin()->second) {
          buckets.push_back({{"start", pipeline::format_timestamp(b.start)},
                             {"samples", b.samples},
                             {"mean_temp_c", b.mean_temp_c ? json(*b.mean_temp_c) : json(nullptr)},
                             {"precip_mm", b.precip_mm}});
        }
        out = {{"station", seg[3]},
               {"granularity", pipeline::granularity_name(*gran)},
               {"buckets", buckets}};
        category = Category::kClimateWeather;
      }
    } else {
      throw NotFound("unknown endpoint");
    }

    if (category) ledger_.record(parse_role(r.role), *category);
    return json_response(200, std::move(out), version);
  } catch (const MethodNotAllowed& e) {
    return error_response(405, e.what(), version);
  } catch (const InvalidArgument& e) {
    return error_response(400, e.what(), version);
  } catch (const ParseError& e) {
    return error_response(400, e.what(), version);
  } catch (const NotFound& e) {
    return error_response(404, e.what(), version);
  } catch (const DomainError& e) {
    return error_response(422, e.what(), version);
  } catch (const json::exception& e) {
    return error_response(400, e.what(), version);
  } catch (const std::exception& e) {
    return error_response(500, e.what(), version);
  }
}

Response Router::start_job(const Request& r, const std::shared_ptr<const Twin>& twin,
                           Category) {
  const std::string id = "job" + std::to_string(next_job_.fetch_add(1));
  Request inner = r;
  inner.query["async"] = "0";
  std::lock_guard<std::mutex> lock(jobs_mu_);
  jobs_[id] = Job{};
  workers_.emplace_back([this, inner, twin, id] {
    Response res = dispatch(inner, twin);
    std::lock_guard<std::mutex> lock(jobs_mu_);
    Job& job = jobs_[id];
    job.status = res.status == 200 ? "done" : "failed";
    job.response = std::move(res);
  });
  return json_response(202, {{"job", id}, {"status", "running"}}, twin->version());
}

Response Router::job_status(const std::string& id) const {
  std::lock_guard<std::mutex> lock(jobs_mu_);
  auto it = jobs_.find(id);
  const std::string version = snapshot()->version();
  if (it == jobs_.end()) return error_response(404, "unknown job '" + id + "'", version);
  const Job& job = it->second;
  json out = {{"job", id}, {"status", job.status}};
  if (job.status != "running") {
    out["http_status"] = job.response.status;
    out["result"] = json::parse(job.response.body);
    out["catalog_version"] = job.response.catalog_version;
    return {200, out.dump(), job.response.catalog_version};
  }
  return json_response(200, std::move(out), version);
}

}  // namespace terratwin::server
