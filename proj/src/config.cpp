/*
 Copyright 2026 citopt contributors

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

#include "config.hpp"

#include <cmath>
#include <sstream>

namespace citopt {

using nlohmann::json;

namespace {

// Typed extraction with dotted-path error messages. The resolved tree is
// built from default_config, so a missing key means the caller skipped the
// layering step.
class Reader {
 public:
  Reader(const json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {}

  Reader sub(const char* key) const { return Reader(get(key), path(key)); }

  double num(const char* key) const {
    const json& v = get(key);
    if (!v.is_number()) throw ConfigError("config key '" + path(key) + "' must be a number");
    return v.get<double>();
  }

  int integer(const char* key) const {
    const json& v = get(key);
    if (!v.is_number_integer()) throw ConfigError("config key '" + path(key) + "' must be an integer");
    return v.get<int>();
  }

  std::uint64_t uinteger(const char* key) const {
    const json& v = get(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      throw ConfigError("config key '" + path(key) + "' must be a nonnegative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const char* key) const {
    const json& v = get(key);
    if (!v.is_boolean()) throw ConfigError("config key '" + path(key) + "' must be a boolean");
    return v.get<bool>();
  }

  std::string str(const char* key) const {
    const json& v = get(key);
    if (!v.is_string()) throw ConfigError("config key '" + path(key) + "' must be a string");
    return v.get<std::string>();
  }

  Vec2 vec2(const char* key) const {
    const json& v = get(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw ConfigError("config key '" + path(key) + "' must be an array of 2 numbers");
    return Vec2(v[0].get<double>(), v[1].get<double>());
  }

  std::vector<double> numbers(const char* key, size_t count) const {
    const json& v = get(key);
    if (!v.is_array() || v.size() != count)
      throw ConfigError("config key '" + path(key) + "' must be an array of " +
                        std::to_string(count) + " numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError("config key '" + path(key) + "' must hold numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

 private:
  const json& get(const char* key) const {
    auto it = j_.find(key);
    if (it == j_.end()) throw ConfigError("config key '" + path(key) + "' is missing");
    return *it;
  }
  std::string path(const char* key) const {
    return prefix_.empty() ? key : prefix_ + "." + key;
  }

  const json& j_;
  std::string prefix_;
};

void collect_unknown(const json& in, const json& schema, const std::string& prefix,
                     std::vector<std::string>& out) {
  if (!in.is_object()) return;
  for (auto it = in.begin(); it != in.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!schema.is_object() || !schema.contains(it.key())) {
      out.push_back(path);
      continue;
    }
    if (it->is_object()) collect_unknown(*it, schema.at(it.key()), path, out);
  }
}

}  // namespace

int BenchConfig::steps() const {
  if (n_steps > 0) return n_steps;
  return static_cast<int>(std::max<long long>(1, std::llround(horizon / 0.1)));
}

double BenchConfig::step_duration() const { return horizon / steps(); }

int BenchConfig::substeps() const {
  return std::max(1, static_cast<int>(std::lround(step_duration() / substep_dt)));
}

void BenchConfig::validate() const {
  if (solver != "scvx" && solver != "ilqr")
    throw ConfigError("solver must be 'scvx' or 'ilqr', got '" + solver + "'");
  if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
  if (n_steps == 0) throw ConfigError("n_steps must be positive, or negative to derive");
  if (!(substep_dt > 0.0)) throw ConfigError("world.substep_dt must be positive");
  if (!(tau_limit > 0.0)) throw ConfigError("world.tau_limit must be positive");
  if (standoff < 0.0) throw ConfigError("standoff must be nonnegative");
  if (w_pos < 0.0 || w_theta < 0.0 || w_gain < 0.0 || w_vel < 0.0)
    throw ConfigError("cost weights must be nonnegative");
  if (!box_start.allFinite() || !goal_pos.allFinite() || !std::isfinite(goal_theta))
    throw ConfigError("box_start and goal must be finite");
  robot.validate();
  box.validate();
  contact.validate();
  vscm.validate();
  scvx.validate();
  ilqr.validate();
}

json default_config(const std::string& task) {
  Vec2 displacement;
  if (task == "1a") displacement = Vec2(-0.10, 0.0);
  else if (task == "2a") displacement = Vec2(0.0, -0.10);
  else if (task == "3a") displacement = Vec2(0.0, 0.10);
  else if (task == "custom") displacement = Vec2(0.0, 0.0);
  else throw ConfigError("unknown task '" + task + "' (expected 1a, 2a, 3a, or custom)");

  const Vec2 start(0.25, 0.0);
  const Vec2 goal = start + displacement;
  return json{
      {"task", task},
      {"solver", "scvx"},
      {"horizon", 1.0},
      {"n_steps", -1},
      {"seed", 0},
      {"out_dir", ""},
      {"box_start", {start.x(), start.y()}},
      {"goal", {goal.x(), goal.y(), 0.0}},
      {"standoff", 0.03},
      {"world",
       {{"box",
         {{"half_extents", {0.1, 0.1}},
          {"mass", 0.4},
          // Derived from mass and half_extents (uniform plate) when < 0.
          {"inertia", -1.0},
          {"friction_coeff", 0.75},
          {"normal_gravity", 9.81}}},
        {"contact", {{"spring_stiffness", 1e4}, {"vel_smoothing", 1e-3}}},
        {"vscm", {{"alpha", 15.0}, {"k_max", 5.0}, {"k_init", 5.0}}},
        {"substep_dt", 0.002},
        {"tau_limit", 1.0}}},
      {"cost",
       {{"w_pos", 1e4},
        {"w_theta", 0.0},
        {"w_gain", 1e-4},
        // Running velocity penalty; applied to ilqr runs only and excluded
        // from comparable costs.
        {"w_vel", 1e-3}}},
      {"scvx",
       {{"max_iterations", 100},
        {"trust_init", 100.0},
        {"virtual_weight", 1e3},
        {"accept_threshold", 0.01},
        {"shrink_threshold", 0.25},
        {"expand_threshold", 0.7},
        {"shrink_factor", 2.0},
        {"expand_factor", 2.0},
        {"trust_floor", 1e-6},
        {"trust_cap", 1e8},
        {"delta_l_tol", 1e-3},
        {"max_consecutive_rejections", 10},
        {"acceptable_cost", 1.0},
        {"qp",
         {{"eps_abs", 1e-6}, {"eps_rel", 1e-6}, {"max_iterations", 100}}}}},
      {"ilqr",
       {{"max_iterations", 100},
        {"cost_tol", 1e-4},
        {"reg_init", 1e-6},
        {"reg_min", 1e-9},
        {"reg_max", 1e9},
        {"reg_up", 10.0},
        {"reg_down", 2.0},
        {"line_search_steps", 10},
        {"accept_ratio", 0.1},
        {"acceptable_cost", 1.0}}},
  };
}

void apply_override(json& j, const std::string& key_value) {
  const auto eq = key_value.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + key_value + "' is not of the form key=value");
  const std::string key = key_value.substr(0, eq);
  const std::string value = key_value.substr(eq + 1);

  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;  // bare strings need no quoting on the command line
  }

  json* node = &j;
  std::istringstream parts(key);
  std::string part, next;
  if (!std::getline(parts, part, '.'))
    throw ConfigError("override '" + key_value + "' has an empty key");
  while (std::getline(parts, next, '.')) {
    if (next.empty()) throw ConfigError("override key '" + key + "' has an empty segment");
    node = &(*node)[part];
    if (!node->is_object() && !node->is_null())
      throw ConfigError("override key '" + key + "' descends into non-object '" + part + "'");
    part = next;
  }
  (*node)[part] = std::move(parsed);
}

json resolve_config(const std::vector<json>& file_layers, const std::vector<std::string>& overrides) {
  // The preset is decided first so later layers override its values, not
  // the other way around.
  std::string task = "1a";
  for (const json& layer : file_layers) {
    if (!layer.is_object()) throw ConfigError("config layers must be JSON objects");
    if (layer.contains("task")) {
      if (!layer.at("task").is_string()) throw ConfigError("config key 'task' must be a string");
      task = layer.at("task").get<std::string>();
    }
  }
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq != std::string::npos && kv.substr(0, eq) == "task") task = kv.substr(eq + 1);
  }

  json j = default_config(task);
  for (const json& layer : file_layers) j.merge_patch(layer);
  for (const std::string& kv : overrides) apply_override(j, kv);
  return j;
}

BenchConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  if (!j.contains("task") || !j.at("task").is_string())
    throw ConfigError("config key 'task' is missing");

  const std::string task = j.at("task").get<std::string>();
  std::vector<std::string> unknown;
  collect_unknown(j, default_config(task), "", unknown);
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const std::string& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }

  const Reader r(j, "");
  BenchConfig c;
  c.task = task;
  c.solver = r.str("solver");
  c.horizon = r.num("horizon");
  c.n_steps = r.integer("n_steps");
  c.seed = r.uinteger("seed");
  c.out_dir = r.str("out_dir");
  c.box_start = r.vec2("box_start");
  const auto goal = r.numbers("goal", 3);
  c.goal_pos = Vec2(goal[0], goal[1]);
  c.goal_theta = goal[2];
  c.standoff = r.num("standoff");

  const Reader world = r.sub("world");
  const Reader box = world.sub("box");
  c.box.half_extents = box.vec2("half_extents");
  c.box.mass = box.num("mass");
  const double inertia = box.num("inertia");
  c.box.inertia = inertia > 0.0
                      ? inertia
                      : c.box.mass *
                            (4.0 * c.box.half_extents.squaredNorm()) / 12.0;
  c.box.friction_coeff = box.num("friction_coeff");
  c.box.normal_gravity = box.num("normal_gravity");

  const Reader contact = world.sub("contact");
  c.contact.spring_stiffness = contact.num("spring_stiffness");
  c.contact.vel_smoothing = contact.num("vel_smoothing");

  const Reader vscm = world.sub("vscm");
  c.vscm.alpha = vscm.num("alpha");
  c.vscm.k_max = vscm.num("k_max");
  c.vscm.k_init = vscm.num("k_init");

  c.substep_dt = world.num("substep_dt");
  c.tau_limit = world.num("tau_limit");

  const Reader cost = r.sub("cost");
  c.w_pos = cost.num("w_pos");
  c.w_theta = cost.num("w_theta");
  c.w_gain = cost.num("w_gain");
  c.w_vel = cost.num("w_vel");

  const Reader scvx = r.sub("scvx");
  c.scvx.max_iterations = scvx.integer("max_iterations");
  c.scvx.trust_init = scvx.num("trust_init");
  c.scvx.virtual_weight = scvx.num("virtual_weight");
  c.scvx.accept_threshold = scvx.num("accept_threshold");
  c.scvx.shrink_threshold = scvx.num("shrink_threshold");
  c.scvx.expand_threshold = scvx.num("expand_threshold");
  c.scvx.shrink_factor = scvx.num("shrink_factor");
  c.scvx.expand_factor = scvx.num("expand_factor");
  c.scvx.trust_floor = scvx.num("trust_floor");
  c.scvx.trust_cap = scvx.num("trust_cap");
  c.scvx.delta_l_tol = scvx.num("delta_l_tol");
  c.scvx.max_consecutive_rejections = scvx.integer("max_consecutive_rejections");
  c.scvx.acceptable_cost = scvx.num("acceptable_cost");
  const Reader qp = scvx.sub("qp");
  c.scvx.qp.eps_abs = qp.num("eps_abs");
  c.scvx.qp.eps_rel = qp.num("eps_rel");
  c.scvx.qp.max_iterations = qp.integer("max_iterations");

  const Reader ilqr = r.sub("ilqr");
  c.ilqr.max_iterations = ilqr.integer("max_iterations");
  c.ilqr.cost_tol = ilqr.num("cost_tol");
  c.ilqr.reg_init = ilqr.num("reg_init");
  c.ilqr.reg_min = ilqr.num("reg_min");
  c.ilqr.reg_max = ilqr.num("reg_max");
  c.ilqr.reg_up = ilqr.num("reg_up");
  c.ilqr.reg_down = ilqr.num("reg_down");
  c.ilqr.line_search_steps = ilqr.integer("line_search_steps");
  c.ilqr.accept_ratio = ilqr.num("accept_ratio");
  c.ilqr.acceptable_cost = ilqr.num("acceptable_cost");

  c.validate();
  return c;
}

json config_to_json(const BenchConfig& c) {
  json j = default_config(c.task);
  j["solver"] = c.solver;
  j["horizon"] = c.horizon;
  j["n_steps"] = c.n_steps;
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;
  j["box_start"] = {c.box_start.x(), c.box_start.y()};
  j["goal"] = {c.goal_pos.x(), c.goal_pos.y(), c.goal_theta};
  j["standoff"] = c.standoff;
  json& world = j["world"];
  world["box"] = {{"half_extents", {c.box.half_extents.x(), c.box.half_extents.y()}},
                  {"mass", c.box.mass},
                  {"inertia", c.box.inertia},
                  {"friction_coeff", c.box.friction_coeff},
                  {"normal_gravity", c.box.normal_gravity}};
  world["contact"] = {{"spring_stiffness", c.contact.spring_stiffness},
                      {"vel_smoothing", c.contact.vel_smoothing}};
  world["vscm"] = {{"alpha", c.vscm.alpha}, {"k_max", c.vscm.k_max}, {"k_init", c.vscm.k_init}};
  world["substep_dt"] = c.substep_dt;
  world["tau_limit"] = c.tau_limit;
  j["cost"] = {{"w_pos", c.w_pos}, {"w_theta", c.w_theta}, {"w_gain", c.w_gain}, {"w_vel", c.w_vel}};
  json& scvx = j["scvx"];
  scvx["max_iterations"] = c.scvx.max_iterations;
  scvx["trust_init"] = c.scvx.trust_init;
  scvx["virtual_weight"] = c.scvx.virtual_weight;
  scvx["accept_threshold"] = c.scvx.accept_threshold;
  scvx["shrink_threshold"] = c.scvx.shrink_threshold;
  scvx["expand_threshold"] = c.scvx.expand_threshold;
  scvx["shrink_factor"] = c.scvx.shrink_factor;
  scvx["expand_factor"] = c.scvx.expand_factor;
  scvx["trust_floor"] = c.scvx.trust_floor;
  scvx["trust_cap"] = c.scvx.trust_cap;
  scvx["delta_l_tol"] = c.scvx.delta_l_tol;
  scvx["max_consecutive_rejections"] = c.scvx.max_consecutive_rejections;
  scvx["acceptable_cost"] = c.scvx.acceptable_cost;
  scvx["qp"] = {{"eps_abs", c.scvx.qp.eps_abs},
                {"eps_rel", c.scvx.qp.eps_rel},
                {"max_iterations", c.scvx.qp.max_iterations}};
  j["ilqr"] = {{"max_iterations", c.ilqr.max_iterations},
               {"cost_tol", c.ilqr.cost_tol},
               {"reg_init", c.ilqr.reg_init},
               {"reg_min", c.ilqr.reg_min},
               {"reg_max", c.ilqr.reg_max},
               {"reg_up", c.ilqr.reg_up},
               {"reg_down", c.ilqr.reg_down},
               {"line_search_steps", c.ilqr.line_search_steps},
               {"accept_ratio", c.ilqr.accept_ratio},
               {"acceptable_cost", c.ilqr.acceptable_cost}};
  return j;
}

}  // namespace citopt
