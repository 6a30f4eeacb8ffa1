/*
 * Copyright 2026 The cmdlearn Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cmdlearn/model.hpp"

#include <fstream>
#include <sstream>

#include "cmdlearn/error.hpp"
#include "cmdlearn/stats.hpp"

namespace cmdlearn {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 12> kAlgorithmNames = {
    "ib1", "ib1-ig", "bin-cat", "bin-pro", "bs-tree", "igtree",
    "bd-tree", "c45", "foil", "bin-rules", "c45-rules", "se-tree",
};

constexpr std::size_t kTreeDeviations = 1;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json tree_metrics_json(const TreeMetrics& m) {
  return {{"nodes", m.nodes}, {"leaves", m.leaves}, {"levels", m.levels}};
}

json rule_metrics_json(const RuleMetrics& m) {
  return {{"rules", m.rules}, {"literals", m.literals}, {"max_length", m.max_length}};
}

}  // namespace

std::string_view to_string(AlgorithmId algo) { return kAlgorithmNames[static_cast<std::size_t>(algo)]; }

AlgorithmId parse_algorithm(std::string_view s) {
  for (std::size_t i = 0; i < kAlgorithmNames.size(); ++i) {
    if (kAlgorithmNames[i] == s) return kAllAlgorithms[i];
  }
  throw UsageError("unknown algorithm '" + std::string(s) + "'");
}

std::vector<AlgorithmId> parse_algorithm_list(std::string_view s) {
  if (s == "all") return {kAllAlgorithms.begin(), kAllAlgorithms.end()};
  std::vector<AlgorithmId> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string_view::npos ? s.size() : comma;
    out.push_back(parse_algorithm(s.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw UsageError("empty algorithm list");
  return out;
}

Model::Model(AlgorithmId algo, FeatureDictionary dictionary, json params, Body body)
    : algo_(algo), dictionary_(std::move(dictionary)), dict_hash_(dictionary_.hash()),
      params_(std::move(params)), body_(std::move(body)) {}

void Model::require_dictionary(const FeatureDictionary& dict) const {
  const auto other = dict.hash();
  if (other != dict_hash_) {
    throw DataError("dictionary mismatch: model was trained under " + dict_hash_.substr(0, 12) +
                    ", data is encoded under " + other.substr(0, 12));
  }
}

RankedPrediction Model::rank(const FeatureVector& x, std::size_t k) const {
  require_positive_k(k);
  if (!x.empty() && x.ids().back() >= dictionary_.num_features()) {
    throw DataError("case references a feature outside the model dictionary");
  }
  return std::visit(
      overloaded{
          [&](const InstanceModel& m) { return cmdlearn::rank(m, x, k); },
          [&](const PrototypeModel& m) { return cmdlearn::rank(m, x, k); },
          [&](const DecisionTree& t) { return classify_approx(t, x, kTreeDeviations, k); },
          [&](const RuleBase& rb) { return classify_rules(rb, x, k); },
          [&](const IndexedRules& ir) { return classify_rules(ir.index, x, k); },
      },
      body_);
}

json Model::metrics() const {
  return std::visit(overloaded{
                        [](const InstanceModel& m) { return json{{"instances", m.instances().size()}}; },
                        [](const PrototypeModel& m) { return json{{"prototypes", m.prototypes().size()}}; },
                        [](const DecisionTree& t) { return tree_metrics_json(tree_metrics(t)); },
                        [](const RuleBase& rb) { return rule_metrics_json(rule_metrics(rb)); },
                        [](const IndexedRules& ir) {
                          auto j = tree_metrics_json(se_tree_metrics(ir.index));
                          j.update(rule_metrics_json(rule_metrics(ir.rules)));
                          return j;
                        },
                    },
                    body_);
}

std::string Model::describe() const {
  std::ostringstream out;
  out << "algo: " << to_string(algo_) << "\n";
  out << "dict_hash: " << dict_hash_ << "\n";
  out << "features: " << dictionary_.num_features() << "  classes: " << dictionary_.num_classes()
      << "\n";
  out << "metrics: " << metrics().dump() << "\n";
  if (const auto* rb = std::get_if<RuleBase>(&body_)) {
    out << dump_rules(*rb, dictionary_);
  } else if (const auto* ir = std::get_if<IndexedRules>(&body_)) {
    out << dump_rules(ir->rules, dictionary_);
  }
  return out.str();
}

json Model::to_json() const {
  json payload = {{"dictionary", dictionary_.to_json()}, {"params", params_}};
  std::visit(overloaded{
                 [&](const InstanceModel& m) { payload["instance_model"] = m.to_json(); },
                 [&](const PrototypeModel& m) { payload["prototype_model"] = m.to_json(); },
                 [&](const DecisionTree& t) { payload["tree"] = t.to_json(dictionary_); },
                 [&](const RuleBase& rb) { payload["rule_base"] = rb.to_json(dictionary_); },
                 // The SE-tree is rebuilt from the rule base on load.
                 [&](const IndexedRules& ir) { payload["rule_base"] = ir.rules.to_json(dictionary_); },
             },
             body_);
  return {{"version", 1}, {"algo", to_string(algo_)}, {"dict_hash", dict_hash_}, {"payload", std::move(payload)}};
}

Model Model::from_json(const json& j) {
  try {
    if (j.value("version", 0) != 1) throw DataError("unsupported model version");
    const auto algo = parse_algorithm(j.at("algo").get<std::string>());
    const auto& payload = j.at("payload");
    auto dict = FeatureDictionary::from_json(payload.at("dictionary"));
    if (dict.hash() != j.at("dict_hash").get<std::string>()) {
      throw DataError("model dictionary does not match its recorded hash");
    }
    const json params = payload.value("params", json::object());
    switch (algo) {
      case AlgorithmId::ib1:
      case AlgorithmId::ib1_ig:
      case AlgorithmId::bin_cat:
        return Model(algo, std::move(dict), params, InstanceModel::from_json(payload.at("instance_model")));
      case AlgorithmId::bin_pro:
        return Model(algo, std::move(dict), params, PrototypeModel::from_json(payload.at("prototype_model")));
      case AlgorithmId::bs_tree:
      case AlgorithmId::igtree:
      case AlgorithmId::bd_tree:
      case AlgorithmId::c45: {
        auto tree = DecisionTree::from_json(payload.at("tree"), dict);
        return Model(algo, std::move(dict), params, std::move(tree));
      }
      case AlgorithmId::foil:
      case AlgorithmId::bin_rules:
      case AlgorithmId::c45_rules: {
        auto rb = RuleBase::from_json(payload.at("rule_base"), dict);
        return Model(algo, std::move(dict), params, std::move(rb));
      }
      case AlgorithmId::se_tree: {
        auto rb = RuleBase::from_json(payload.at("rule_base"), dict);
        auto index = build_se_tree(rb);
        return Model(algo, std::move(dict), params, IndexedRules{std::move(rb), std::move(index)});
      }
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("malformed model: ") + e.what());
  }
  throw DataError("malformed model");
}

void Model::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << to_json().dump() << '\n';
}

Model Model::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
  return from_json(j);
}

Model train(AlgorithmId algo, const Dataset& ds) {
  if (ds.empty()) throw DataError("cannot train on an empty dataset");
  ds.validate();
  const auto& dict = ds.dictionary;
  const json tree_params = {{"max_deviations", kTreeDeviations}};
  const json rule_params = {{"max_divergence", 1}};
  switch (algo) {
    case AlgorithmId::ib1:
      return Model(algo, dict, json::object(), InstanceModel::train(InstanceVariant::ib1, ds));
    case AlgorithmId::ib1_ig:
      return Model(algo, dict, json::object(), InstanceModel::train(InstanceVariant::ib1_ig, ds));
    case AlgorithmId::bin_cat:
      return Model(algo, dict, json::object(), InstanceModel::train(InstanceVariant::bin_cat, ds));
    case AlgorithmId::bin_pro:
      return Model(algo, dict, json::object(), PrototypeModel::train(ds));
    case AlgorithmId::bs_tree:
      return Model(algo, dict, tree_params, build_tree(ds, TreeVariant::bs_tree));
    case AlgorithmId::igtree:
      return Model(algo, dict, tree_params, build_tree(ds, TreeVariant::igtree));
    case AlgorithmId::bd_tree:
      return Model(algo, dict, tree_params, build_tree(ds, TreeVariant::bd_tree));
    case AlgorithmId::c45:
      return Model(algo, dict, tree_params, build_tree(ds, TreeVariant::c45));
    case AlgorithmId::foil:
      return Model(algo, dict, rule_params, learn_foil(ds));
    case AlgorithmId::bin_rules:
      return Model(algo, dict, rule_params, learn_bin_rules(ds, compute_stats(ds)));
    case AlgorithmId::c45_rules:
      return Model(algo, dict, rule_params, extract_rules_from_tree(build_tree(ds, TreeVariant::c45), ds));
    case AlgorithmId::se_tree: {
      auto rb = learn_bin_rules(ds, compute_stats(ds));
      auto index = build_se_tree(rb);
      return Model(algo, dict, rule_params, IndexedRules{std::move(rb), std::move(index)});
    }
  }
  throw UsageError("unknown algorithm");
}

}  // namespace cmdlearn
