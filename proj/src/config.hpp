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

#ifndef CITOPT_CONFIG_HPP
#define CITOPT_CONFIG_HPP

#include <json.hpp>
#include <string>
#include <vector>

#include "ilqr.hpp"
#include "scvx.hpp"
#include "world.hpp"

namespace citopt {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A fully resolved benchmark run description. Everything the pipeline
// consumes comes from here; the JSON layering below is the only way these
// are populated, so a saved snapshot reproduces the run.
struct BenchConfig {
  std::string task = "1a";    // 1a | 2a | 3a | custom
  std::string solver = "scvx";  // scvx | ilqr
  double horizon = 1.0;         // seconds
  int n_steps = -1;             // < 0: derived to keep planner steps near 0.1 s
  std::uint64_t seed = 0;       // recorded in artifacts; the pipeline is deterministic
  std::string out_dir;          // empty: no files written

  Vec2 box_start = Vec2(0.25, 0.0);
  Vec2 goal_pos = Vec2(0.15, 0.0);
  double goal_theta = 0.0;
  double standoff = 0.03;  // initial gap between end effector and the +x face

  RobotModel robot;
  BoxModel box;
  ContactParams contact;
  VscmParams vscm;
  double substep_dt = 0.002;
  double tau_limit = 1.0;

  double w_pos = 1e4;
  double w_theta = 0.0;
  double w_gain = 1e-4;
  double w_vel = 1e-3;  // running velocity penalty; applied to ilqr runs only

  ScvxParams scvx;
  IlqrParams ilqr;

  // Derived discretization: N, the planner step length, and the number of
  // integrator substeps per planner step.
  int steps() const;
  double step_duration() const;
  int substeps() const;

  void validate() const;
};

// Defaults for a task preset, as JSON covering every known key. Unknown
// task ids throw; "custom" starts from zero displacement.
nlohmann::json default_config(const std::string& task);

// Layered resolution: preset defaults <- optional file layers <- key=value
// overrides, in order. The task id is taken from the last layer that sets
// it, so overrides may switch presets. Throws ConfigError on unknown keys
// (listed by dotted path), bad value types, or malformed overrides.
nlohmann::json resolve_config(const std::vector<nlohmann::json>& file_layers,
                              const std::vector<std::string>& overrides);

// "a.b.c=value" applied to a JSON tree. Values parse as JSON scalars when
// they can (numbers, booleans), otherwise as strings.
void apply_override(nlohmann::json& j, const std::string& key_value);

// Typed view of a resolved tree. Rejects keys outside the schema so typos
// fail loudly instead of silently running defaults.
BenchConfig config_from_json(const nlohmann::json& j);

// Inverse of config_from_json; resolve(config_to_json(c)) round-trips.
nlohmann::json config_to_json(const BenchConfig& c);

}  // namespace citopt

#endif  // CITOPT_CONFIG_HPP
