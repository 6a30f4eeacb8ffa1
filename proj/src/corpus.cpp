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

#include "cmdlearn/corpus.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_set>

#include "cmdlearn/error.hpp"

namespace cmdlearn {

using nlohmann::json;

std::string_view to_string(UvlKind kind) {
  return kind == UvlKind::entity ? "entity" : "datatype";
}

std::string_view to_string(FeatureSource source) {
  switch (source) {
    case FeatureSource::dfl:
      return "dfl";
    case FeatureSource::uvl_count:
      return "uvl_count";
    case FeatureSource::uvl_type:
      return "uvl_type";
  }
  return "dfl";
}

UvlKind parse_uvl_kind(std::string_view s) {
  if (s == "entity") return UvlKind::entity;
  if (s == "datatype") return UvlKind::datatype;
  throw DataError("unknown uvl kind '" + std::string(s) + "'");
}

FeatureSource parse_feature_source(std::string_view s) {
  if (s == "dfl") return FeatureSource::dfl;
  if (s == "uvl_count") return FeatureSource::uvl_count;
  if (s == "uvl_type") return FeatureSource::uvl_type;
  throw DataError("unknown feature source '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// FeatureDictionary

std::string FeatureDictionary::key(FeatureSource source, std::string_view name) {
  std::string k(to_string(source));
  k += '\x1f';
  k += name;
  return k;
}

std::string FeatureDictionary::count_feature_name(std::size_t bucket) {
  if (bucket + 1 >= kUvlCountBuckets) return "count>=" + std::to_string(kUvlCountBuckets - 1);
  return "count=" + std::to_string(bucket);
}

std::string FeatureDictionary::type_feature_name(const UvlEntry& entry) {
  return std::string(to_string(entry.kind)) + ":" + entry.name;
}

FeatureId FeatureDictionary::add_feature(std::string name, FeatureSource source) {
  auto id = static_cast<FeatureId>(features_.size());
  auto [it, inserted] = feature_index_.emplace(key(source, name), id);
  if (!inserted) {
    throw DataError("duplicate feature '" + name + "' for source " + std::string(to_string(source)));
  }
  features_.push_back({id, std::move(name), source});
  return id;
}

ClassId FeatureDictionary::add_class(std::string name) {
  if (name.empty()) throw DataError("empty class name");
  auto id = static_cast<ClassId>(classes_.size());
  auto [it, inserted] = class_index_.emplace(name, id);
  if (!inserted) throw DataError("duplicate class '" + name + "'");
  classes_.push_back(std::move(name));
  return id;
}

std::optional<FeatureId> FeatureDictionary::find_feature(FeatureSource source,
                                                         std::string_view name) const {
  auto it = feature_index_.find(key(source, name));
  if (it == feature_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ClassId> FeatureDictionary::find_class(std::string_view name) const {
  auto it = class_index_.find(std::string(name));
  if (it == class_index_.end()) return std::nullopt;
  return it->second;
}

json FeatureDictionary::to_json() const {
  json feats = json::array();
  for (const auto& f : features_) {
    feats.push_back({{"id", f.id}, {"name", f.name}, {"source", to_string(f.source)}});
  }
  return {{"version", 1}, {"features", std::move(feats)}, {"classes", classes_}};
}

FeatureDictionary FeatureDictionary::from_json(const json& j) {
  if (!j.is_object()) throw DataError("dictionary must be a JSON object");
  if (j.value("version", 0) != 1) throw DataError("unsupported dictionary version");
  FeatureDictionary dict;
  try {
    for (const auto& f : j.at("features")) {
      auto id = f.at("id").get<std::int64_t>();
      if (id != static_cast<std::int64_t>(dict.num_features())) {
        throw DataError("feature ids must be dense and in order; saw " + std::to_string(id));
      }
      dict.add_feature(f.at("name").get<std::string>(),
                       parse_feature_source(f.at("source").get<std::string>()));
    }
    for (const auto& c : j.at("classes")) dict.add_class(c.get<std::string>());
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed dictionary: ") + e.what());
  }
  return dict;
}

std::string FeatureDictionary::hash() const {
  const std::string canonical = to_json().dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(canonical.data(), canonical.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw_invariant("sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

// ---------------------------------------------------------------------------
// FeatureVector

FeatureVector::FeatureVector(std::vector<FeatureId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool FeatureVector::contains(FeatureId f) const {
  return std::binary_search(ids_.begin(), ids_.end(), f);
}

FeatureVector FeatureVector::flipped(FeatureId f) const {
  FeatureVector out;
  out.ids_ = ids_;
  auto it = std::lower_bound(out.ids_.begin(), out.ids_.end(), f);
  if (it != out.ids_.end() && *it == f) {
    out.ids_.erase(it);
  } else {
    out.ids_.insert(it, f);
  }
  return out;
}

void Dataset::validate() const {
  const auto n = dictionary.num_features();
  const auto c = dictionary.num_classes();
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    if (inst.class_id >= c) {
      throw DataError("instance " + std::to_string(i) + ": class id out of range");
    }
    if (!inst.vector.empty() && inst.vector.ids().back() >= n) {
      throw DataError("instance " + std::to_string(i) + ": feature id out of range");
    }
  }
}

// ---------------------------------------------------------------------------
// Encoding

FeatureDictionary build_dictionary(std::span<const RawCase> cases) {
  if (cases.empty()) throw DataError("cannot build a dictionary from an empty case list");
  FeatureDictionary dict;
  for (const auto& raw : cases) {
    if (!raw.class_label) throw DataError("case '" + raw.id + "' is unlabeled");
    for (const auto& form : raw.dfl) {
      if (!dict.find_feature(FeatureSource::dfl, form)) dict.add_feature(form, FeatureSource::dfl);
    }
  }
  for (std::size_t b = 0; b < kUvlCountBuckets; ++b) {
    dict.add_feature(FeatureDictionary::count_feature_name(b), FeatureSource::uvl_count);
  }
  for (const auto& raw : cases) {
    for (const auto& entry : raw.uvl) {
      auto name = FeatureDictionary::type_feature_name(entry);
      if (!dict.find_feature(FeatureSource::uvl_type, name)) {
        dict.add_feature(std::move(name), FeatureSource::uvl_type);
      }
    }
  }
  for (const auto& raw : cases) {
    if (!dict.find_class(*raw.class_label)) dict.add_class(*raw.class_label);
  }
  return dict;
}

FeatureVector encode_case(const RawCase& raw, const FeatureDictionary& dict) {
  std::vector<FeatureId> ids;
  ids.reserve(raw.dfl.size() + raw.uvl.size() + 1);
  for (const auto& form : raw.dfl) {
    if (auto f = dict.find_feature(FeatureSource::dfl, form)) ids.push_back(*f);
  }
  const auto bucket = std::min(raw.uvl.size(), kUvlCountBuckets - 1);
  if (auto f = dict.find_feature(FeatureSource::uvl_count,
                                 FeatureDictionary::count_feature_name(bucket))) {
    ids.push_back(*f);
  }
  for (const auto& entry : raw.uvl) {
    if (auto f = dict.find_feature(FeatureSource::uvl_type,
                                   FeatureDictionary::type_feature_name(entry))) {
      ids.push_back(*f);
    }
  }
  return FeatureVector(std::move(ids));
}

Dataset encode_dataset(std::span<const RawCase> cases, const FeatureDictionary& dict) {
  Dataset ds{dict, {}};
  ds.instances.reserve(cases.size());
  for (const auto& raw : cases) {
    if (!raw.class_label) throw DataError("case '" + raw.id + "' is unlabeled");
    auto cls = dict.find_class(*raw.class_label);
    if (!cls) throw DataError("case '" + raw.id + "': unknown class '" + *raw.class_label + "'");
    ds.instances.push_back({raw.id, encode_case(raw, dict), *cls});
  }
  return ds;
}

// ---------------------------------------------------------------------------
// JSON lines

RawCase raw_case_from_json(const json& j) {
  RawCase raw;
  try {
    raw.id = j.value("id", std::string());
    if (j.contains("lang") && !j.at("lang").is_null()) raw.language = j.at("lang").get<std::string>();
    for (const auto& d : j.at("dfl")) {
      auto form = d.get<std::string>();
      if (form.empty()) throw DataError("empty deep form");
      raw.dfl.push_back(std::move(form));
    }
    if (j.contains("uvl")) {
      for (const auto& u : j.at("uvl")) {
        UvlEntry entry{parse_uvl_kind(u.at("kind").get<std::string>()), u.at("name").get<std::string>()};
        if (entry.name.empty()) throw DataError("empty uvl name");
        raw.uvl.push_back(std::move(entry));
      }
    }
    if (j.contains("class") && !j.at("class").is_null()) {
      auto label = j.at("class").get<std::string>();
      if (label.empty()) throw DataError("empty class label");
      raw.class_label = std::move(label);
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed raw case: ") + e.what());
  }
  return raw;
}

json raw_case_to_json(const RawCase& raw) {
  json uvl = json::array();
  for (const auto& u : raw.uvl) uvl.push_back({{"kind", to_string(u.kind)}, {"name", u.name}});
  json j = {{"id", raw.id}, {"dfl", raw.dfl}, {"uvl", std::move(uvl)}};
  if (raw.language) j["lang"] = *raw.language;
  if (raw.class_label) j["class"] = *raw.class_label;
  return j;
}

namespace {

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char ch) { return std::isspace(ch); });
}

std::string at_line(std::size_t line_no, const std::string& what) {
  return "line " + std::to_string(line_no) + ": " + what;
}

}  // namespace

std::vector<RawCase> read_raw_cases(std::istream& in) {
  std::vector<RawCase> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    try {
      out.push_back(raw_case_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw DataError(at_line(line_no, e.what()));
    } catch (const DataError& e) {
      throw DataError(at_line(line_no, e.what()));
    }
  }
  return out;
}

Dataset load_dataset(std::istream& in) {
  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError(at_line(line_no, std::string("invalid JSON: ") + e.what()));
    }
    try {
      if (!have_header) {
        if (j.value("version", 0) != 1) throw DataError("unsupported dataset version");
        ds.dictionary = FeatureDictionary::from_json(j.at("dictionary"));
        have_header = true;
        continue;
      }
      Instance inst;
      inst.id = j.value("id", std::string());
      std::vector<FeatureId> ids;
      for (const auto& f : j.at("features")) {
        auto v = f.get<std::int64_t>();
        if (v < 0 || v >= static_cast<std::int64_t>(ds.dictionary.num_features())) {
          throw DataError("feature id " + std::to_string(v) + " out of range");
        }
        ids.push_back(static_cast<FeatureId>(v));
      }
      inst.vector = FeatureVector(std::move(ids));
      const auto label = j.at("class").get<std::string>();
      auto cls = ds.dictionary.find_class(label);
      if (!cls) throw DataError("unknown class '" + label + "'");
      inst.class_id = *cls;
      ds.instances.push_back(std::move(inst));
    } catch (const json::exception& e) {
      throw DataError(at_line(line_no, e.what()));
    } catch (const DataError& e) {
      throw DataError(at_line(line_no, e.what()));
    }
  }
  if (!have_header) throw DataError("dataset has no header line");
  return ds;
}

void save_dataset(const Dataset& ds, std::ostream& out) {
  out << json{{"version", 1}, {"dictionary", ds.dictionary.to_json()}}.dump() << '\n';
  for (const auto& inst : ds.instances) {
    json feats(std::vector<FeatureId>(inst.vector.begin(), inst.vector.end()));
    out << json{{"id", inst.id},
                {"features", std::move(feats)},
                {"class", ds.dictionary.class_name(inst.class_id)}}
               .dump()
        << '\n';
  }
}

Dataset load_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  try {
    return load_dataset(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void save_dataset_file(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  save_dataset(ds, out);
}

// ---------------------------------------------------------------------------
// Holdout split

std::pair<Dataset, Dataset> split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw UsageError("test fraction must lie in (0, 1)");
  }
  if (ds.size() < 2) throw DataError("split needs at least 2 instances");

  std::vector<std::vector<std::size_t>> by_class(ds.dictionary.num_classes());
  for (std::size_t i = 0; i < ds.size(); ++i) by_class[ds.instances[i].class_id].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<char> is_test(ds.size(), 0);
  for (auto& members : by_class) {
    // Tolerance keeps exact products such as 10 * 0.1 from flooring to 0.
    const auto take = static_cast<std::size_t>(
        std::floor(static_cast<double>(members.size()) * test_fraction + 1e-9));
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t t = 0; t < take; ++t) is_test[members[t]] = 1;
  }

  Dataset train{ds.dictionary, {}};
  Dataset test{ds.dictionary, {}};
  for (std::size_t i = 0; i < ds.size(); ++i) {
    (is_test[i] ? test : train).instances.push_back(ds.instances[i]);
  }
  return {std::move(train), std::move(test)};
}

}  // namespace cmdlearn
