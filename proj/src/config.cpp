// Copyright 2026 The bitrade Authors.
//
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

#include "bitrade/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bitrade/errors.hpp"

namespace bitrade {
namespace {

using nlohmann::json;

// Typed access to one JSON object, tracking the dotted path for messages and
// the keys that were consumed so leftovers can be rejected.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double real(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError("key '" + name(key) + "' must be a number");
    return v.get<double>();
  }

  std::uint64_t count(const std::string& key) {
    const json& v = raw(key);
    return as_count(v, name(key));
  }

  bool boolean(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError("key '" + name(key) + "' must be true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError("key '" + name(key) + "' must be a string");
    return v.get<std::string>();
  }

  Reader object(const std::string& key) { return Reader(raw(key), name(key)); }

  void require(const std::string& key) const {
    if (!has(key)) throw ConfigError("missing required key '" + name(key) + "'");
  }

  // Rejects every key not consumed so far.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError("unknown key '" + name(it.key()) + "'");
    }
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  static std::uint64_t as_count(const json& v, const std::string& label) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_float()) {
      const double x = v.get<double>();
      if (x >= 0 && x == std::floor(x) && x < 1.8e19) return static_cast<std::uint64_t>(x);
    }
    throw ConfigError("key '" + label + "' must be a non-negative integer");
  }

 private:
  std::string where() const { return path_.empty() ? "config" : "key '" + path_ + "'"; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

FeedbackKind feedback_from(const std::string& text, const std::string& key) {
  try {
    return parse_feedback_kind(text);
  } catch (const ParameterError&) {
    throw ConfigError("key '" + key + "' must be \"full\" or \"realistic\"");
  }
}

InstanceSpec instance_from(Reader r) {
  r.require("name");
  InstanceSpec spec;
  const std::string name = r.text("name");
  try {
    spec.kind = parse_instance_kind(name);
  } catch (const ParameterError&) {
    throw ConfigError("key '" + r.name("name") + "': unknown instance '" + name + "'");
  }
  switch (spec.kind) {
    case InstanceKind::kSqrtLower:
    case InstanceKind::kTwoThird:
      if (r.has("epsilon")) spec.epsilon = r.real("epsilon");
      break;
    case InstanceKind::kBdLinear:
      if (r.has("lambda")) spec.lambda = r.real("lambda");
      break;
    case InstanceKind::kNeedle:
      if (r.has("x")) spec.x = r.real("x");
      break;
    case InstanceKind::kCustom: {
      if (r.has("rectangles")) {
        const json& arr = r.raw("rectangles");
        if (!arr.is_array()) throw ConfigError("key '" + r.name("rectangles") + "' must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
          Reader e(arr[i], r.name("rectangles") + "[" + std::to_string(i) + "]");
          for (const char* k : {"s_lo", "s_hi", "b_lo", "b_hi", "weight"}) e.require(k);
          spec.rectangles.push_back(
              {e.real("s_lo"), e.real("s_hi"), e.real("b_lo"), e.real("b_hi"), e.real("weight")});
          e.finish();
        }
      }
      if (r.has("atoms")) {
        const json& arr = r.raw("atoms");
        if (!arr.is_array()) throw ConfigError("key '" + r.name("atoms") + "' must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
          Reader e(arr[i], r.name("atoms") + "[" + std::to_string(i) + "]");
          for (const char* k : {"s", "b", "weight"}) e.require(k);
          spec.atoms.push_back({{e.real("s"), e.real("b")}, e.real("weight")});
          e.finish();
        }
      }
      if (r.has("M")) spec.density_bound = r.real("M");
      break;
    }
    case InstanceKind::kUniform: break;
  }
  r.finish();
  return spec;
}

// Parameters equal to their defaults are omitted, so that switching the name
// with an override does not leave keys the new kind rejects.
json instance_to_json(const InstanceSpec& spec) {
  const InstanceSpec defaults;
  json j;
  j["name"] = std::string(instance_name(spec.kind));
  switch (spec.kind) {
    case InstanceKind::kSqrtLower:
    case InstanceKind::kTwoThird:
      if (spec.epsilon != defaults.epsilon) j["epsilon"] = spec.epsilon;
      break;
    case InstanceKind::kBdLinear:
      if (spec.lambda != defaults.lambda) j["lambda"] = spec.lambda;
      break;
    case InstanceKind::kNeedle:
      if (spec.x != defaults.x) j["x"] = spec.x;
      break;
    case InstanceKind::kCustom: {
      json rects = json::array();
      for (const auto& r : spec.rectangles) {
        rects.push_back({{"s_lo", r.s_lo}, {"s_hi", r.s_hi}, {"b_lo", r.b_lo}, {"b_hi", r.b_hi},
                         {"weight", r.weight}});
      }
      json atoms = json::array();
      for (const auto& a : spec.atoms) {
        atoms.push_back({{"s", a.point.s}, {"b", a.point.b}, {"weight", a.weight}});
      }
      j["rectangles"] = rects;
      j["atoms"] = atoms;
      if (spec.density_bound) j["M"] = *spec.density_bound;
      break;
    }
    case InstanceKind::kUniform: break;
  }
  return j;
}

LearnerSpec learner_from(Reader r) {
  LearnerSpec spec;
  if (r.has("name")) spec.name = r.text("name");
  if (spec.name == "fbp") {
    if (r.has("initial_price")) spec.initial_price = r.real("initial_price");
  } else if (spec.name == "fixed" || spec.name == "uniform") {
    if (spec.name == "fixed" && r.has("price")) spec.price = r.real("price");
    if (r.has("feedback")) spec.feedback = feedback_from(r.text("feedback"), r.name("feedback"));
  } else if (spec.name == "sb") {
    if (r.has("M")) spec.density_bound = r.real("M");
    if (r.has("epsilon")) spec.epsilon = r.real("epsilon");
    if (r.has("bandit")) spec.bandit = r.text("bandit");
    if (r.has("doubling")) spec.doubling = r.boolean("doubling");
  } else {
    throw ConfigError("key '" + r.name("name") + "': unknown learner '" + spec.name +
                      "' (expected fbp, sb, fixed or uniform)");
  }
  r.finish();
  return spec;
}

json learner_to_json(const LearnerSpec& spec) {
  const LearnerSpec defaults;
  json j;
  j["name"] = spec.name;
  if (spec.name == "fbp") {
    if (spec.initial_price != defaults.initial_price) j["initial_price"] = spec.initial_price;
  } else if (spec.name == "fixed" || spec.name == "uniform") {
    if (spec.name == "fixed" && spec.price != defaults.price) j["price"] = spec.price;
    if (spec.feedback) j["feedback"] = std::string(to_string(*spec.feedback));
  } else if (spec.name == "sb") {
    if (spec.density_bound) j["M"] = *spec.density_bound;
    if (spec.epsilon) j["epsilon"] = *spec.epsilon;
    if (spec.bandit != defaults.bandit) j["bandit"] = spec.bandit;
    if (spec.doubling) j["doubling"] = true;
  }
  return j;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  Reader r(j, "");
  ExperimentConfig config;
  if (r.has("instance")) config.instance = instance_from(r.object("instance"));
  if (r.has("learner")) config.learner = learner_from(r.object("learner"));
  if (r.has("horizon")) config.horizon = r.count("horizon");
  if (r.has("horizons")) {
    const json& arr = r.raw("horizons");
    if (!arr.is_array()) throw ConfigError("key 'horizons' must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      config.horizons.push_back(Reader::as_count(arr[i], "horizons[" + std::to_string(i) + "]"));
    }
  }
  if (r.has("replications")) config.replications = r.count("replications");
  if (r.has("seed")) config.seed = r.count("seed");
  if (r.has("jobs")) config.jobs = static_cast<unsigned>(r.count("jobs"));
  if (r.has("output_dir")) config.output_dir = r.text("output_dir");
  if (r.has("feedback")) config.feedback = feedback_from(r.text("feedback"), "feedback");
  if (r.has("adversary")) {
    Reader a = r.object("adversary");
    if (a.has("epsilon")) config.adversary.epsilon = a.real("epsilon");
    if (a.has("probe_samples")) config.adversary.probe_samples = a.count("probe_samples");
    if (a.has("replay_probe")) config.adversary.replay_probe = a.boolean("replay_probe");
    a.finish();
  }
  if (r.has("oracle")) {
    Reader o = r.object("oracle");
    if (o.has("grid")) config.oracle.grid = o.count("grid");
    o.finish();
  }
  if (r.has("indist")) {
    Reader d = r.object("indist");
    if (d.has("grid")) config.indist.grid = d.count("grid");
    if (d.has("perturb")) config.indist.perturb = d.boolean("perturb");
    d.finish();
  }
  r.finish();
  return config;
}

json to_json(const ExperimentConfig& config) {
  json j;
  if (config.instance) j["instance"] = instance_to_json(*config.instance);
  j["learner"] = learner_to_json(config.learner);
  j["horizon"] = config.horizon;
  j["horizons"] = config.horizons;
  j["replications"] = config.replications;
  j["seed"] = config.seed;
  j["jobs"] = config.jobs;
  if (config.output_dir) j["output_dir"] = *config.output_dir;
  if (config.feedback) j["feedback"] = std::string(to_string(*config.feedback));
  json adversary = {{"epsilon", config.adversary.epsilon}, {"replay_probe", config.adversary.replay_probe}};
  if (config.adversary.probe_samples) adversary["probe_samples"] = *config.adversary.probe_samples;
  j["adversary"] = adversary;
  j["oracle"] = {{"grid", config.oracle.grid}};
  j["indist"] = {{"grid", config.indist.grid}, {"perturb", config.indist.perturb}};
  return j;
}

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return config_from_json(j);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void apply_override(ExperimentConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' must look like key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string value_text(assignment.substr(eq + 1));
  json value = json::parse(value_text, nullptr, false);
  if (value.is_discarded()) value = value_text;

  json j = to_json(config);
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    if (dot == std::string::npos) {
      // A new instance or learner kind starts from its own defaults.
      if (part == "name" && node != &j && node->contains("name") && (*node)["name"] != value) {
        *node = json::object();
      }
      (*node)[part] = value;
      break;
    }
    json& child = (*node)[part];
    if (child.is_null()) child = json::object();
    if (!child.is_object()) throw ConfigError("override key '" + key + "' descends into a non-object");
    node = &child;
    start = dot + 1;
  }
  config = config_from_json(j);
}

const InstanceSpec& require_instance(const ExperimentConfig& config) {
  if (!config.instance) throw ConfigError("missing required key 'instance'");
  return *config.instance;
}

}  // namespace bitrade
