/*
 * Copyright 2026 The PBFL Lab Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pbfl/harness/config.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <utility>

#include "pbfl/common/error.h"
#include "pbfl/fhe/params.h"

#ifndef PBFL_DATA_DIR
#define PBFL_DATA_DIR "data"
#endif

namespace pbfl::harness {

namespace {

using nlohmann::json;

// Walks one JSON object, tracking the field path for error messages and
// rejecting keys nobody asked for.
class Fields {
 public:
  Fields(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) throw InvalidArgument(Where("") + "expected a JSON object");
  }

  std::string Path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  const json* Find(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  template <typename T>
  void Number(const std::string& key, T& out) {
    const json* v = Find(key);
    if (v == nullptr) return;
    if constexpr (std::is_floating_point_v<T>) {
      if (!v->is_number()) Fail(key, "expected a number");
      out = v->get<double>();
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
        Fail(key, "expected a non-negative integer");
      }
      out = static_cast<T>(v->get<std::uint64_t>());
    } else {
      if (!v->is_number_integer()) Fail(key, "expected an integer");
      out = static_cast<T>(v->get<std::int64_t>());
    }
  }

  // A number, or null for "derive from other settings" (stored as -1).
  template <typename T>
  void OptionalNumber(const std::string& key, T& out) {
    const json* v = Find(key);
    if (v == nullptr || v->is_null()) return;
    Number(key, out);
  }

  void Bool(const std::string& key, bool& out) {
    const json* v = Find(key);
    if (v == nullptr) return;
    if (!v->is_boolean()) Fail(key, "expected true or false");
    out = v->get<bool>();
  }

  void String(const std::string& key, std::string& out) {
    const json* v = Find(key);
    if (v == nullptr) return;
    if (!v->is_string()) Fail(key, "expected a string");
    out = v->get<std::string>();
  }

  // Parses a name through `parse`, re-throwing with the field path.
  template <typename Enum, typename ParseFn>
  void Named(const std::string& key, Enum& out, ParseFn parse) {
    std::string name;
    const json* v = Find(key);
    if (v == nullptr) return;
    String(key, name);
    try {
      out = parse(name);
    } catch (const std::exception&) {
      Fail(key, "unknown value \"" + name + "\"");
    }
  }

  const json* Object(const std::string& key) {
    const json* v = Find(key);
    if (v != nullptr && !v->is_object()) Fail(key, "expected a JSON object");
    return v;
  }

  void RejectUnknown() const {
    for (const auto& [key, value] : obj_.items()) {
      if (seen_.count(key) == 0) throw InvalidArgument(Path(key) + ": unknown key");
    }
  }

  [[noreturn]] void Fail(const std::string& key, const std::string& why) const {
    throw InvalidArgument(Path(key) + ": " + why);
  }

 private:
  std::string Where(const std::string& key) const {
    const std::string p = Path(key);
    return p.empty() ? std::string("config: ") : p + ": ";
  }

  const json& obj_;
  std::string prefix_;
  std::set<std::string> seen_;
};

DatasetKind ParseDatasetKind(const std::string& name) {
  if (name == "csv") return DatasetKind::kCsv;
  if (name == "synthetic") return DatasetKind::kSynthetic;
  throw InvalidArgument("unknown dataset kind " + name);
}

const char* DatasetKindName(DatasetKind kind) {
  return kind == DatasetKind::kCsv ? "csv" : "synthetic";
}

void Require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw InvalidArgument(field + ": " + why);
}

}  // namespace

std::string DefaultDatasetPath() { return std::string(PBFL_DATA_DIR) + "/mnist_2k.csv"; }

ExperimentConfig ParseConfig(const json& j, const std::string& base_dir) {
  ExperimentConfig cfg;
  sim::SimConfig& s = cfg.sim;
  Fields top(j, "");
  top.String("preset", s.preset);
  top.Number("clients", s.clients);
  top.Number("rounds", s.rounds);
  top.Number("seed", s.seed);
  top.String("output_dir", cfg.output_dir);
  top.Named("mode", s.mode, sim::ParsePipelineMode);
  top.Named("aggregation", s.aggregation, sim::ParseAggregation);
  top.Bool("emulate_shieldfl", s.emulate_shieldfl);
  top.Bool("mirror_check", s.mirror_check);
  top.Number("workers", s.workers);
  top.Number("alpha_dirichlet", s.alpha_dirichlet);
  top.Number("test_fraction", s.test_fraction);

  if (const json* t = top.Object("training")) {
    Fields f(*t, "training");
    f.Number("eta", s.eta);
    f.Number("eta_decay", s.eta_decay);
    f.Number("batch_size", s.batch_size);
    f.Named("model", s.model, sim::ParseModelKind);
    f.Number("hidden", s.hidden);
    f.RejectUnknown();
  }
  if (const json* a = top.Object("attack")) {
    Fields f(*a, "attack");
    f.Named("kind", s.attack.kind, sim::ParseAttackKind);
    f.Number("ratio", s.attack.ratio);
    f.Number("magnitude", s.attack.magnitude);
    f.Bool("omniscient", s.attack.omniscient);
    f.Bool("normalize", s.attack.normalize);
    f.RejectUnknown();
  }
  if (const json* d = top.Object("defense")) {
    Fields f(*d, "defense");
    f.Number("alpha_credit", s.defense.alpha_credit);
    f.Number("theta", s.defense.theta);
    f.OptionalNumber("delta", s.defense.delta);
    f.Number("gamma1", s.defense.gamma1);
    f.Number("gamma2", s.defense.gamma2);
    f.Number("t_warmup", s.defense.t_warmup);
    f.OptionalNumber("t_total", s.defense.t_total);
    f.RejectUnknown();
  }
  if (const json* d = top.Object("dataset")) {
    Fields f(*d, "dataset");
    f.Named("kind", cfg.dataset.kind, ParseDatasetKind);
    f.String("path", cfg.dataset.path);
    f.Number("feature_scale", cfg.dataset.feature_scale);
    f.Number("examples", cfg.dataset.examples);
    f.Number("features", cfg.dataset.features);
    f.Number("separation", cfg.dataset.separation);
    f.RejectUnknown();
  }
  top.RejectUnknown();

  namespace fs = std::filesystem;
  if (!cfg.dataset.path.empty() && !base_dir.empty() && fs::path(cfg.dataset.path).is_relative()) {
    cfg.dataset.path = (fs::path(base_dir) / cfg.dataset.path).lexically_normal().string();
  }
  ValidateConfig(cfg);
  s.defense = s.defense.Resolved(s.clients, s.rounds);
  return cfg;
}

void ValidateConfig(const ExperimentConfig& cfg) {
  const sim::SimConfig& s = cfg.sim;
  bool known_preset = false;
  for (const auto& name : fhe::PresetNames()) known_preset |= name == s.preset;
  Require(known_preset, "preset", "unknown preset \"" + s.preset + "\"");
  Require(s.clients >= 2, "clients", "need at least 2 clients");
  Require(s.clients <= 1000, "clients", "at most 1000 clients");
  Require(s.rounds >= 0, "rounds", "must be non-negative");
  Require(!cfg.output_dir.empty(), "output_dir", "must not be empty");
  Require(s.alpha_dirichlet > 0, "alpha_dirichlet", "must be positive");
  Require(s.test_fraction > 0 && s.test_fraction < 1, "test_fraction", "must lie in (0, 1)");
  Require(s.eta > 0, "training.eta", "must be positive");
  Require(s.eta_decay >= 0, "training.eta_decay", "must be non-negative");
  Require(s.hidden >= 1, "training.hidden", "must be positive");
  Require(s.attack.ratio >= 0 && s.attack.ratio < 1, "attack.ratio", "must lie in [0, 1)");
  Require(s.attack.magnitude >= 0, "attack.magnitude", "must be non-negative");
  if (s.attack.kind != sim::AttackKind::kNone) {
    Require(static_cast<std::size_t>(s.attack.ratio * static_cast<double>(s.clients)) >= 1, "attack.ratio",
            "selects no attacker for this client count");
  }
  sim::SimConfig probe = s;
  probe.defense.Resolved(s.clients, s.rounds);  // throws "defense.<field>: ..."
  if (s.defense.t_total >= 0) {
    Require(s.defense.t_total >= s.rounds, "defense.t_total", "must be at least the round count");
  }
  const DatasetSpec& d = cfg.dataset;
  Require(d.feature_scale > 0, "dataset.feature_scale", "must be positive");
  if (d.kind == DatasetKind::kSynthetic) {
    Require(d.examples >= 2 * s.clients, "dataset.examples", "need at least two examples per client");
    Require(d.features >= 1, "dataset.features", "must be positive");
    Require(d.separation >= 0, "dataset.separation", "must be non-negative");
  }
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
  return ParseConfig(j, std::filesystem::path(path).parent_path().string());
}

nlohmann::ordered_json ConfigToJson(const ExperimentConfig& cfg) {
  const sim::SimConfig& s = cfg.sim;
  nlohmann::ordered_json j;
  j["preset"] = s.preset;
  j["clients"] = s.clients;
  j["rounds"] = s.rounds;
  j["seed"] = s.seed;
  j["output_dir"] = cfg.output_dir;
  j["mode"] = sim::PipelineModeName(s.mode);
  j["aggregation"] = sim::AggregationName(s.aggregation);
  j["emulate_shieldfl"] = s.emulate_shieldfl;
  j["mirror_check"] = s.mirror_check;
  j["workers"] = s.workers;
  j["alpha_dirichlet"] = s.alpha_dirichlet;
  j["test_fraction"] = s.test_fraction;
  j["training"] = {{"eta", s.eta},
                   {"eta_decay", s.eta_decay},
                   {"batch_size", s.batch_size},
                   {"model", sim::ModelKindName(s.model)},
                   {"hidden", s.hidden}};
  j["attack"] = {{"kind", sim::AttackKindName(s.attack.kind)},
                 {"ratio", s.attack.ratio},
                 {"magnitude", s.attack.magnitude},
                 {"omniscient", s.attack.omniscient},
                 {"normalize", s.attack.normalize}};
  j["defense"] = {{"alpha_credit", s.defense.alpha_credit}, {"theta", s.defense.theta},
                  {"delta", s.defense.delta},               {"gamma1", s.defense.gamma1},
                  {"gamma2", s.defense.gamma2},             {"t_warmup", s.defense.t_warmup},
                  {"t_total", s.defense.t_total}};
  j["dataset"] = {{"kind", DatasetKindName(cfg.dataset.kind)},
                  {"path", cfg.dataset.path},
                  {"feature_scale", cfg.dataset.feature_scale},
                  {"examples", cfg.dataset.examples},
                  {"features", cfg.dataset.features},
                  {"separation", cfg.dataset.separation}};
  return j;
}

sim::Dataset LoadDataset(const DatasetSpec& spec, std::uint64_t seed) {
  if (spec.kind == DatasetKind::kSynthetic) {
    return sim::SyntheticGaussians(spec.examples, spec.features, spec.separation, seed);
  }
  const std::string path = spec.path.empty() ? DefaultDatasetPath() : spec.path;
  return sim::LoadCsv(path, spec.feature_scale);
}

}  // namespace pbfl::harness
