// Copyright 2026 The MVRE Authors.
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


#include "mvre/eval/config.h"

#include <charconv>
#include <fstream>
#include <functional>

#include "CLI11.hpp"
#include "mvre/errors.h"

namespace mvre {

using nlohmann::json;

void ExperimentConfig::Validate() const {
  if (seeds.empty()) throw ConfigError("experiment.seeds must not be empty");
  if (kind == ExperimentKind::kSynthetic) {
    synthetic.Validate();
    if (synthetic_test < 1 || synthetic_test >= synthetic.n_samples) {
      throw ConfigError("synthetic.n_test must lie in [1, n_samples)");
    }
    if (model.encoder.d_model != synthetic.d_view) {
      throw ConfigError("model.d_model must equal synthetic.d_view for feature inputs");
    }
  } else {
    corpus.Validate();
    encoding.Validate();
  }
  subsample.Validate();
  train.Validate();
}

namespace {

struct Binding {
  std::function<void(const std::vector<std::string>&)> set;
  std::function<json()> get;
};

using Bindings = std::map<std::string, Binding>;

const std::string& Single(const std::string& key, const std::vector<std::string>& values) {
  if (values.size() != 1) throw ConfigError(key + ": expected a single value");
  return values[0];
}

template <typename T>
T Number(const std::string& key, const std::string& text) {
  T value{};
  auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw ConfigError(key + ": '" + text + "' is not a valid number");
  }
  return value;
}

template <typename T>
Binding Scalar(const std::string& key, T& field) {
  return {[&field, key](const std::vector<std::string>& v) {
            field = Number<T>(key, Single(key, v));
          },
          [&field]() { return json(field); }};
}

Binding Flag(const std::string& key, bool& field) {
  return {[&field, key](const std::vector<std::string>& v) {
            const std::string& text = Single(key, v);
            if (text == "true") {
              field = true;
            } else if (text == "false") {
              field = false;
            } else {
              throw ConfigError(key + ": expected true or false, got '" + text + "'");
            }
          },
          [&field]() { return json(field); }};
}

Binding Text(const std::string& key, std::string& field) {
  return {[&field, key](const std::vector<std::string>& v) { field = Single(key, v); },
          [&field]() { return json(field); }};
}

template <typename T>
Binding Choice(const std::string& key, T& field, std::function<T(const std::string&)> parse,
               std::function<std::string(T)> name) {
  return {[&field, key, parse](const std::vector<std::string>& v) {
            try {
              field = parse(Single(key, v));
            } catch (const ConfigError& e) {
              throw ConfigError(key + ": " + e.what());
            }
          },
          [&field, name]() { return json(name(field)); }};
}

ExperimentKind ParseKind(const std::string& text) {
  if (text == "synthetic") return ExperimentKind::kSynthetic;
  if (text == "text") return ExperimentKind::kText;
  throw ConfigError("unknown experiment kind '" + text + "' (expected synthetic or text)");
}

std::string KindName(ExperimentKind kind) {
  return kind == ExperimentKind::kSynthetic ? "synthetic" : "text";
}

InferenceQuery ParseQuery(const std::string& text) {
  if (text == "per-relation") return InferenceQuery::kPerRelation;
  if (text == "mean-relation") return InferenceQuery::kMeanRelation;
  throw ConfigError("unknown query '" + text + "' (expected per-relation or mean-relation)");
}

std::string QueryName(InferenceQuery query) {
  return query == InferenceQuery::kPerRelation ? "per-relation" : "mean-relation";
}

Bindings Bind(ExperimentConfig& c) {
  Bindings b;
  b["experiment.kind"] = Choice<ExperimentKind>("experiment.kind", c.kind, ParseKind, KindName);
  b["experiment.seeds"] = {[&c](const std::vector<std::string>& v) {
                             c.seeds.clear();
                             for (const auto& s : v) {
                               c.seeds.push_back(Number<uint64_t>("experiment.seeds", s));
                             }
                           },
                           [&c]() { return json(c.seeds); }};
  b["experiment.data_seed"] = Scalar("experiment.data_seed", c.data_seed);

  SynthConfig& s = c.synthetic;
  b["synthetic.n_samples"] = Scalar("synthetic.n_samples", s.n_samples);
  b["synthetic.n_test"] = Scalar("synthetic.n_test", c.synthetic_test);
  b["synthetic.n_relations"] = Scalar("synthetic.n_relations", s.n_relations);
  b["synthetic.d_latent"] = Scalar("synthetic.d_latent", s.d_x);
  b["synthetic.d_view"] = Scalar("synthetic.d_view", s.d_view);
  b["synthetic.noise"] = {[&s](const std::vector<std::string>& v) {
                            if (v.size() != 3) {
                              throw ConfigError("synthetic.noise: expected three values");
                            }
                            for (int j = 0; j < 3; ++j) {
                              s.noise[j] = Number<double>("synthetic.noise", v[j]);
                            }
                          },
                          [&s]() { return json(s.noise); }};
  b["synthetic.inflate_fraction"] = Scalar("synthetic.inflate_fraction", s.inflate_fraction);
  b["synthetic.inflate_factor"] = Scalar("synthetic.inflate_factor", s.inflate_factor);
  b["synthetic.inflate_view"] = Scalar("synthetic.inflate_view", s.inflate_view);
  b["synthetic.center_scale"] = Scalar("synthetic.center_scale", s.center_scale);
  b["synthetic.spread"] = Scalar("synthetic.spread", s.spread);

  CorpusSynthConfig& k = c.corpus;
  b["corpus.n_relations"] = Scalar("corpus.n_relations", k.n_relations);
  b["corpus.relation_skew"] = Scalar("corpus.relation_skew", k.relation_skew);
  b["corpus.n_classes"] = Scalar("corpus.n_classes", k.n_classes);
  b["corpus.entities_per_class"] = Scalar("corpus.entities_per_class", k.entities_per_class);
  b["corpus.train_facts"] = Scalar("corpus.train_facts", k.train_facts);
  b["corpus.test_facts"] = Scalar("corpus.test_facts", k.test_facts);
  b["corpus.na_ratio"] = Scalar("corpus.na_ratio", k.na_ratio);
  b["corpus.single_sentence"] = Scalar("corpus.single_sentence", k.single_sentence);
  b["corpus.max_bag"] = Scalar("corpus.max_bag", k.max_bag);
  b["corpus.trigger_prob"] = Scalar("corpus.trigger_prob", k.trigger_prob);
  b["corpus.confuse_prob"] = Scalar("corpus.confuse_prob", k.confuse_prob);
  b["corpus.role_type_prob"] = Scalar("corpus.role_type_prob", k.role_type_prob);
  b["corpus.role_desc_prob"] = Scalar("corpus.role_desc_prob", k.role_desc_prob);
  b["corpus.missing_description"] = Scalar("corpus.missing_description", k.missing_description);
  b["corpus.filler_vocab"] = Scalar("corpus.filler_vocab", k.filler_vocab);
  b["corpus.min_sentence"] = Scalar("corpus.min_sentence", k.min_sentence);
  b["corpus.max_sentence"] = Scalar("corpus.max_sentence", k.max_sentence);

  b["data.max_bags"] = Scalar("data.max_bags", c.subsample.max_bags);
  b["data.top_relations"] = Scalar("data.top_relations", c.subsample.top_relations);
  b["data.max_test_pairs"] = Scalar("data.max_test_pairs", c.subsample.max_test_pairs);
  b["data.min_count"] = Scalar("data.min_count", c.min_count);
  b["data.word_vectors"] = Text("data.word_vectors", c.word_vectors);

  EncodingConfig& e = c.encoding;
  b["encoding.seq_len"] = Scalar("encoding.seq_len", e.seq_len);
  b["encoding.type_len"] = Scalar("encoding.type_len", e.type_len);
  b["encoding.max_distance"] = Scalar("encoding.max_distance", e.max_distance);
  b["encoding.bag_cap"] = Scalar("encoding.bag_cap", e.bag_cap);

  ModelConfig& m = c.model;
  b["model.d_model"] = {[&m](const std::vector<std::string>& v) {
                          m.encoder.d_model = Number<int>("model.d_model", Single("model.d_model", v));
                          m.fusion.d_model = m.encoder.d_model;
                        },
                        [&m]() { return json(m.encoder.d_model); }};
  b["model.word_dim"] = Scalar("model.word_dim", m.encoder.word_dim);
  b["model.position_dim"] = Scalar("model.position_dim", m.encoder.position_dim);
  b["model.type_dim"] = Scalar("model.type_dim", m.encoder.type_dim);
  b["model.conv_layers"] = Scalar("model.conv_layers", m.encoder.conv_layers);
  b["model.conv_width"] = Scalar("model.conv_width", m.encoder.conv_width);
  b["model.heads"] = Scalar("model.heads", m.encoder.heads);
  b["model.use_rat"] = Flag("model.use_rat", m.encoder.use_rat);
  b["model.d_x"] = Scalar("model.d_x", m.fusion.d_x);
  b["model.strategy"] = Choice<FusionStrategy>("model.strategy", m.fusion.strategy,
                                               ParseFusionStrategy, FusionStrategyName);
  b["model.form"] =
      Choice<FusionForm>("model.form", m.fusion.form, ParseFusionForm, FusionFormName);
  b["model.ridge"] = Scalar("model.ridge", m.fusion.ridge);
  b["model.lambda"] = Scalar("model.lambda", m.lambda);
  b["model.query"] = Choice<InferenceQuery>("model.query", m.query, ParseQuery, QueryName);
  b["model.views"] = {[&m](const std::vector<std::string>& v) {
                        m.fusion.present = {false, false, false};
                        for (const auto& text : v) {
                          const int j = Number<int>("model.views", text);
                          if (j < 1 || j > 3) throw ConfigError("model.views: views are 1, 2, 3");
                          m.fusion.present[j - 1] = true;
                        }
                      },
                      [&m]() {
                        json views = json::array();
                        for (int j = 0; j < 3; ++j) {
                          if (m.fusion.present[j]) views.push_back(j + 1);
                        }
                        return views;
                      }};
  b["model.share_description_encoder"] =
      Flag("model.share_description_encoder", m.share_description_encoder);
  b["model.share_type_encoder"] = Flag("model.share_type_encoder", m.share_type_encoder);

  TrainConfig& t = c.train;
  b["train.learning_rate"] = Scalar("train.learning_rate", t.learning_rate);
  b["train.batch_size"] = Scalar("train.batch_size", t.batch_size);
  b["train.epochs"] = Scalar("train.epochs", t.epochs);
  b["train.clip_norm"] = Scalar("train.clip_norm", t.clip_norm);
  b["train.keep_all_checkpoints"] = Flag("train.keep_all_checkpoints", t.keep_all_checkpoints);

  b["eval.top_k"] = Scalar("eval.top_k", c.top_k);
  return b;
}

}  // namespace

ConfigEntries ReadConfigEntries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  ConfigEntries entries;
  for (const CLI::ConfigItem& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    entries[item.fullname()] = item.inputs;
  }
  return entries;
}

ExperimentConfig ParseExperimentConfig(const ConfigEntries& entries) {
  ExperimentConfig config;
  Bindings bindings = Bind(config);
  for (const auto& [key, values] : entries) {
    auto it = bindings.find(key);
    if (it == bindings.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second.set(values);
  }
  config.encoding.seed = config.subsample.seed = config.synthetic.seed = config.corpus.seed =
      config.data_seed;
  config.Validate();
  return config;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  return ParseExperimentConfig(ReadConfigEntries(path));
}

json ConfigToJson(const ExperimentConfig& config) {
  ExperimentConfig copy = config;
  json out = json::object();
  for (const auto& [key, binding] : Bind(copy)) {
    const size_t dot = key.find('.');
    out[key.substr(0, dot)][key.substr(dot + 1)] = binding.get();
  }
  return out;
}

ExperimentConfig ConfigFromJson(const json& j) {
  auto text = [](const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  ConfigEntries entries;
  if (!j.is_object()) throw ConfigError("config json: expected an object of sections");
  for (const auto& [section, keys] : j.items()) {
    if (!keys.is_object()) throw ConfigError("config json: section '" + section + "' is not an object");
    for (const auto& [key, value] : keys.items()) {
      std::vector<std::string>& values = entries[section + "." + key];
      if (value.is_array()) {
        for (const json& v : value) values.push_back(text(v));
      } else {
        values.push_back(text(value));
      }
    }
  }
  return ParseExperimentConfig(entries);
}

}  // namespace mvre
