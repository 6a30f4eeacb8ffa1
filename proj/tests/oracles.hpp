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

#pragma once

// Naive dense-matrix evaluations of the scoring formulas. These loop over
// every feature and every instance and share no code with the library's
// sparse implementations, so agreement is meaningful.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "cmdlearn/corpus.hpp"

namespace oracle {

using cmdlearn::ClassId;
using cmdlearn::Dataset;
using cmdlearn::FeatureId;

struct Dense {
  std::size_t n = 0;
  std::size_t c = 0;
  std::vector<std::vector<int>> x;  // rows x n, entries 0/1
  std::vector<ClassId> y;

  static Dense from(const Dataset& ds) {
    Dense d;
    d.n = ds.dictionary.num_features();
    d.c = ds.dictionary.num_classes();
    for (const auto& inst : ds.instances) {
      std::vector<int> row(d.n, 0);
      for (FeatureId f : inst.vector) row[f] = 1;
      d.x.push_back(std::move(row));
      d.y.push_back(inst.class_id);
    }
    return d;
  }

  static std::vector<int> dense(const cmdlearn::FeatureVector& v, std::size_t n) {
    std::vector<int> row(n, 0);
    for (FeatureId f : v) row[f] = 1;
    return row;
  }

  // |D_i|
  int d(std::size_t i) const {
    int k = 0;
    for (const auto& row : x) k += row[i];
    return k;
  }
  int d_class(std::size_t i, std::size_t j) const {
    int k = 0;
    for (std::size_t r = 0; r < x.size(); ++r) k += (x[r][i] == 1 && y[r] == j) ? 1 : 0;
    return k;
  }
  int class_size(std::size_t j) const {
    int k = 0;
    for (auto label : y) k += label == j ? 1 : 0;
    return k;
  }
  double p(std::size_t i, std::size_t j) const {
    const int di = d(i);
    return di == 0 ? 0.0 : static_cast<double>(d_class(i, j)) / di;
  }
  double w(std::size_t i) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < c; ++j) sum += 1.0 - 4.0 * p(i, j) * (1.0 - p(i, j));
    return sum / static_cast<double>(c);
  }
};

inline int sigma(int xi, int yi) { return xi == 1 && yi == 1; }
inline int delta_y(int xi, int yi) { return xi == 0 && yi == 1; }
inline int delta_x(int xi, int yi) { return xi == 1 && yi == 0; }

// Three full sums over i = 1..n.
inline double bincat(const Dense& d, const std::vector<int>& xv, std::size_t row) {
  const auto cy = d.y[row];
  const auto& yv = d.x[row];
  double s1 = 0, s2 = 0, s3 = 0;
  for (std::size_t i = 0; i < d.n; ++i) {
    s1 += d.p(i, cy) * d.w(i) * sigma(xv[i], yv[i]);
    s2 += d.p(i, cy) * d.w(i) * delta_y(xv[i], yv[i]);
    s3 += (1.0 - d.p(i, cy)) * d.w(i) * delta_x(xv[i], yv[i]);
  }
  return s1 - s2 - s3;
}

inline double binpro(const Dense& d, const std::vector<int>& xv, std::size_t cls) {
  double present = 0, absent = 0;
  for (std::size_t f = 0; f < d.n; ++f) {
    if (xv[f]) {
      present += d.class_size(cls) * d.p(f, cls) * d.w(f);
    } else {
      absent += d.p(f, cls) * d.w(f);
    }
  }
  return present - absent;
}

inline double entropy(const std::vector<int>& counts) {
  int total = 0;
  for (int k : counts) total += k;
  double h = 0;
  for (int k : counts) {
    if (k > 0) h -= (double)k / total * std::log2((double)k / total);
  }
  return h;
}

inline double info_gain(const Dense& d, std::size_t f) {
  std::vector<int> all(d.c, 0), with(d.c, 0), without(d.c, 0);
  int present = 0;
  for (std::size_t r = 0; r < d.x.size(); ++r) {
    ++all[d.y[r]];
    if (d.x[r][f]) {
      ++with[d.y[r]];
      ++present;
    } else {
      ++without[d.y[r]];
    }
  }
  const double total = static_cast<double>(d.x.size());
  if (present == 0 || present == (int)d.x.size()) return 0.0;
  return entropy(all) - present / total * entropy(with) - (total - present) / total * entropy(without);
}

// Bindings after adding literal (f, positive?) to a rule whose current
// bindings are the given rows.
struct Bindings {
  int plus = 0;
  int minus = 0;
};

inline Bindings bindings_after(const Dense& d, const std::vector<std::uint32_t>& pos,
                               const std::vector<std::uint32_t>& neg, std::size_t f, bool positive) {
  Bindings b;
  for (auto r : pos) b.plus += (d.x[r][f] == (positive ? 1 : 0)) ? 1 : 0;
  for (auto r : neg) b.minus += (d.x[r][f] == (positive ? 1 : 0)) ? 1 : 0;
  return b;
}

inline double bin_rules_w(const Dense& d, std::size_t f, bool positive, std::size_t cls, Bindings after,
                          int minus_before) {
  const double wfsc = positive ? d.w(f) * d.p(f, cls) : d.w(f) * (1.0 - d.p(f, cls));
  return after.plus * double(minus_before - after.minus) * wfsc;
}

// Random dataset: up to max_rows instances over up to max_features features
// and 1..max_classes classes, every declared class non-empty.
inline Dataset random_dataset(std::mt19937_64& rng, std::size_t max_rows, std::size_t max_features,
                              std::size_t max_classes, double density = 0.35) {
  std::uniform_int_distribution<std::size_t> nf(1, max_features);
  std::uniform_int_distribution<std::size_t> nc(1, max_classes);
  const std::size_t n = nf(rng);
  const std::size_t c = nc(rng);
  std::uniform_int_distribution<std::size_t> nr(c, std::max(c, max_rows));
  const std::size_t rows = nr(rng);
  Dataset ds;
  for (std::size_t f = 0; f < n; ++f) {
    ds.dictionary.add_feature("f" + std::to_string(f), cmdlearn::FeatureSource::dfl);
  }
  for (std::size_t j = 0; j < c; ++j) ds.dictionary.add_class("C" + std::to_string(j));
  std::bernoulli_distribution bit(density);
  std::uniform_int_distribution<ClassId> label(0, static_cast<ClassId>(c - 1));
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<FeatureId> ids;
    for (FeatureId f = 0; f < n; ++f) {
      if (bit(rng)) ids.push_back(f);
    }
    const ClassId cls = r < c ? static_cast<ClassId>(r) : label(rng);
    ds.instances.push_back({"r" + std::to_string(r), cmdlearn::FeatureVector(std::move(ids)), cls});
  }
  return ds;
}

inline cmdlearn::FeatureVector random_vector(std::mt19937_64& rng, std::size_t n, double density = 0.35) {
  std::bernoulli_distribution bit(density);
  std::vector<FeatureId> ids;
  for (FeatureId f = 0; f < n; ++f) {
    if (bit(rng)) ids.push_back(f);
  }
  return cmdlearn::FeatureVector(std::move(ids));
}

// Drops instances whose vector duplicates one of another class.
inline Dataset make_separable(Dataset ds) {
  std::vector<cmdlearn::Instance> kept;
  for (const auto& inst : ds.instances) {
    bool clash = false;
    for (const auto& k : kept) clash |= k.vector == inst.vector && k.class_id != inst.class_id;
    if (!clash) kept.push_back(inst);
  }
  ds.instances = std::move(kept);
  return ds;
}

// Dataset with named features f0.. and classes given by label strings.
inline Dataset tiny(std::size_t n, const std::vector<std::pair<std::vector<FeatureId>, std::string>>& rows) {
  Dataset ds;
  for (std::size_t f = 0; f < n; ++f) {
    ds.dictionary.add_feature("f" + std::to_string(f), cmdlearn::FeatureSource::dfl);
  }
  for (const auto& [ids, label] : rows) {
    if (!ds.dictionary.find_class(label)) ds.dictionary.add_class(label);
  }
  std::size_t i = 0;
  for (const auto& [ids, label] : rows) {
    ds.instances.push_back({"i" + std::to_string(i++), cmdlearn::FeatureVector(ids),
                            *ds.dictionary.find_class(label)});
  }
  return ds;
}

}  // namespace oracle
