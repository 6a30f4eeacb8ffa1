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

// cmdlearn command line: synthesize corpora, encode raw cases, train,
// classify, evaluate, compare and inspect models.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cmdlearn/error.hpp"
#include "cmdlearn/harness.hpp"
#include "cmdlearn/synth.hpp"
#include "json.hpp"

using namespace cmdlearn;
using nlohmann::json;

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

void print_summary(const EvalResult& r) {
  std::cout << to_string(r.algo);
  if (r.error) {
    std::cout << "  error: " << *r.error << "\n";
    return;
  }
  std::cout << "  success=" << r.success << "  top3=" << r.top3;
  if (r.k != 3) std::cout << "  top" << r.k << "=" << r.topk;
  std::cout << "  metrics=" << r.metrics.dump() << "  train_ms=" << r.train_ms << "  classify_ms=" << r.classify_ms
            << "\n";
}

struct SynthArgs {
  SynthConfig cfg;
  std::string out_train;
  std::string out_test;
};

void run_synth(const SynthArgs& a) {
  const auto [train_set, test_set] = synthesize(a.cfg);
  save_dataset_file(train_set, a.out_train);
  save_dataset_file(test_set, a.out_test);
  std::cout << "wrote " << train_set.size() << " training and " << test_set.size() << " test instances ("
            << train_set.dictionary.num_features() << " features, " << train_set.dictionary.num_classes()
            << " classes)\n";
}

struct EncodeArgs {
  std::string input;
  std::string dict;
  std::string write_dict;
  std::string output;
};

void run_encode(const EncodeArgs& a) {
  auto in = open_in(a.input);
  const auto cases = read_raw_cases(in);
  FeatureDictionary dict;
  if (!a.dict.empty()) {
    auto din = open_in(a.dict);
    json j;
    try {
      j = json::parse(din);
    } catch (const json::exception& e) {
      throw DataError("dictionary '" + a.dict + "': " + e.what());
    }
    dict = FeatureDictionary::from_json(j);
  } else {
    dict = build_dictionary(cases);
  }
  const auto ds = encode_dataset(cases, dict);
  save_dataset_file(ds, a.output);
  if (!a.write_dict.empty()) open_out(a.write_dict) << dict.to_json().dump() << "\n";
  std::cout << "encoded " << ds.size() << " cases over " << dict.num_features() << " features\n";
}

struct TrainArgs {
  std::string algo;
  std::string data;
  std::string model;
};

void run_train(const TrainArgs& a) {
  const auto algo = parse_algorithm(a.algo);
  const auto ds = load_dataset_file(a.data);
  const auto model = train(algo, ds);
  model.save(a.model);
  std::cout << to_string(algo) << " trained on " << ds.size() << " instances: " << model.metrics().dump() << "\n";
}

struct ClassifyArgs {
  std::string model;
  std::string input;
  std::size_t top = 3;
};

// Accepts raw case lines, encoded instance lines, or an encoded dataset file
// (whose header must match the model dictionary).
void run_classify(const ClassifyArgs& a) {
  require_positive_k(a.top);
  const auto model = Model::load(a.model);
  const auto& dict = model.dictionary();
  auto in = open_in(a.input);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError(where + e.what());
    }
    if (!j.is_object()) throw DataError(where + "expected a JSON object");
    if (j.contains("dictionary")) {
      model.require_dictionary(FeatureDictionary::from_json(j.at("dictionary")));
      continue;
    }
    std::string id = j.value("id", std::string());
    std::optional<std::string> truth;
    if (j.contains("class") && j.at("class").is_string()) truth = j.at("class").get<std::string>();
    FeatureVector x;
    try {
      if (j.contains("features")) {
        std::vector<FeatureId> ids;
        for (const auto& f : j.at("features")) {
          const auto v = f.get<std::int64_t>();
          if (v < 0 || static_cast<std::size_t>(v) >= dict.num_features()) {
            throw DataError("feature id " + std::to_string(v) + " out of range");
          }
          ids.push_back(static_cast<FeatureId>(v));
        }
        x = FeatureVector(std::move(ids));
      } else {
        x = encode_case(raw_case_from_json(j), dict);
      }
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    } catch (const json::exception& e) {
      throw DataError(where + e.what());
    }
    const auto ranked = model.rank(x, a.top);
    json out = {{"id", id}};
    if (truth) out["class"] = *truth;
    json ranking = json::array();
    for (const auto& e : ranked.entries) {
      ranking.push_back({{"class", dict.class_name(e.class_id)}, {"score", e.score}, {"basis", to_string(e.basis)}});
    }
    out["ranking"] = std::move(ranking);
    std::cout << out.dump() << "\n";
  }
}

struct EvalArgs {
  std::string model;
  std::string test;
  std::string report;
  std::size_t top = 3;
};

void run_eval(const EvalArgs& a) {
  const auto model = Model::load(a.model);
  const auto test = load_dataset_file(a.test);
  EvalReport report;
  report.config = {{"model", a.model}, {"test", a.test}, {"k", a.top}, {"test_size", test.size()}};
  report.dictionary = model.dictionary();
  report.results.push_back(evaluate(model, test, a.top));
  print_summary(report.results.back());
  if (!a.report.empty()) write_report(report, a.report);
}

struct CompareArgs {
  std::string algos = "all";
  std::string train;
  std::string test;
  std::string report;
  std::size_t top = 3;
};

void run_compare(const CompareArgs& a) {
  const auto algos = parse_algorithm_list(a.algos);
  const auto train_set = load_dataset_file(a.train);
  const auto test_set = load_dataset_file(a.test);
  const auto report = compare(algos, train_set, test_set, a.top,
                              {{"algos", a.algos}, {"train", a.train}, {"test", a.test}});
  for (const auto& r : report.results) print_summary(r);
  if (!a.report.empty()) write_report(report, a.report);
}

void run_inspect(const std::string& path) { std::cout << Model::load(path).describe(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Command classification learners over sparse binary features"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic train/test corpus");
  s->add_option("--classes", synth.cfg.classes)->capture_default_str();
  s->add_option("--per-class", synth.cfg.per_class)->capture_default_str();
  s->add_option("--features", synth.cfg.features)->capture_default_str();
  s->add_option("--signature", synth.cfg.signature_size)->capture_default_str();
  s->add_option("--drop", synth.cfg.drop_prob)->capture_default_str();
  s->add_option("--noise", synth.cfg.noise_features)->capture_default_str();
  s->add_option("--seed", synth.cfg.seed)->capture_default_str();
  s->add_option("--test-fraction", synth.cfg.test_fraction)->capture_default_str();
  s->add_flag("--disjoint", synth.cfg.disjoint_signatures, "Give every class its own signature features");
  s->add_option("--out-train", synth.out_train)->required();
  s->add_option("--out-test", synth.out_test)->required();

  EncodeArgs encode;
  auto* e = app.add_subcommand("encode", "Encode raw cases into a binary dataset");
  e->add_option("--input", encode.input)->required();
  e->add_option("--dict", encode.dict, "Existing dictionary; built from the input when absent");
  e->add_option("--write-dict", encode.write_dict, "Also write the dictionary here");
  e->add_option("--output", encode.output)->required();

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Train one algorithm");
  t->add_option("--algo", tr.algo)->required();
  t->add_option("--data", tr.data)->required();
  t->add_option("--model", tr.model)->required();

  ClassifyArgs cl;
  auto* c = app.add_subcommand("classify", "Rank classes for raw or encoded cases");
  c->add_option("--model", cl.model)->required();
  c->add_option("--input", cl.input)->required();
  c->add_option("--top", cl.top)->capture_default_str();

  EvalArgs ev;
  auto* v = app.add_subcommand("eval", "Evaluate a model on a test set");
  v->add_option("--model", ev.model)->required();
  v->add_option("--test", ev.test)->required();
  v->add_option("--report", ev.report);
  v->add_option("--top", ev.top)->capture_default_str();

  CompareArgs cmp;
  auto* m = app.add_subcommand("compare", "Train and evaluate several algorithms");
  m->add_option("--algos", cmp.algos)->capture_default_str();
  m->add_option("--train", cmp.train)->required();
  m->add_option("--test", cmp.test)->required();
  m->add_option("--report", cmp.report);
  m->add_option("--top", cmp.top)->capture_default_str();

  std::string inspect_model;
  auto* i = app.add_subcommand("inspect", "Print model shape and rules");
  i->add_option("--model", inspect_model)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*s) run_synth(synth);
    if (*e) run_encode(encode);
    if (*t) run_train(tr);
    if (*c) run_classify(cl);
    if (*v) run_eval(ev);
    if (*m) run_compare(cmp);
    if (*i) run_inspect(inspect_model);
  } catch (const Error& err) {
    std::cerr << "cmdlearn: " << err.what() << "\n";
    return err.exit_code();
  } catch (const json::exception& err) {
    std::cerr << "cmdlearn: malformed input: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "cmdlearn: internal error: " << err.what() << "\n";
    return 3;
  }
  return 0;
}
