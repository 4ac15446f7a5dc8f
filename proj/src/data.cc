// Copyright 2026 The fedsim Authors. All Rights Reserved.
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

#include "fedsim/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <string_view>

#include "fedsim/errors.h"
#include "fedsim/random.h"

namespace fedsim {

Dataset::Dataset(std::vector<double> features, std::vector<int> labels,
                 std::size_t n_features, int n_classes)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      n_features_(n_features),
      n_classes_(n_classes) {
  if (features_.size() != labels_.size() * n_features_) {
    throw DimensionError("feature matrix has " +
                         std::to_string(features_.size()) + " entries, expected " +
                         std::to_string(labels_.size() * n_features_));
  }
  for (int y : labels_) {
    if (y < 0 || y >= n_classes_) {
      throw ParameterError("label " + std::to_string(y) + " outside [0, " +
                           std::to_string(n_classes_) + ")");
    }
  }
  for (double x : features_) {
    if (!std::isfinite(x)) throw ParameterError("non-finite feature value");
  }
}

Dataset Dataset::Subset(std::span<const std::size_t> rows) const {
  std::vector<double> feats;
  feats.reserve(rows.size() * n_features_);
  std::vector<int> labs;
  labs.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= n_samples()) throw DimensionError("row index out of range");
    auto x = row(r);
    feats.insert(feats.end(), x.begin(), x.end());
    labs.push_back(labels_[r]);
  }
  return Dataset(std::move(feats), std::move(labs), n_features_, n_classes_);
}

std::vector<std::size_t> Partition::Sizes() const {
  std::vector<std::size_t> sizes;
  sizes.reserve(clients.size());
  for (const auto& c : clients) sizes.push_back(c.size());
  return sizes;
}

std::vector<std::vector<std::size_t>> Partition::ClassCounts(
    std::span<const int> labels, int n_classes) const {
  std::vector<std::vector<std::size_t>> counts(
      clients.size(), std::vector<std::size_t>(static_cast<std::size_t>(n_classes), 0));
  for (std::size_t c = 0; c < clients.size(); ++c) {
    for (std::size_t r : clients[c]) {
      ++counts[c][static_cast<std::size_t>(labels[r])];
    }
  }
  return counts;
}

std::vector<double> SampleDirichlet(double beta, std::size_t k,
                                    std::uint64_t seed) {
  if (!(beta > 0.0)) throw ParameterError("Dirichlet concentration must be > 0");
  if (k < 1) throw ParameterError("Dirichlet needs at least one component");
  Rng rng(seed);
  std::vector<double> logs(k);
  for (auto& l : logs) l = rng.LogGamma(beta);
  // Normalize in log space; tiny shapes routinely underflow exp().
  const double top = *std::max_element(logs.begin(), logs.end());
  std::vector<double> p(k);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    p[i] = std::exp(logs[i] - top);
    total += p[i];
  }
  for (auto& v : p) v /= total;
  return p;
}

namespace {

// Integer counts summing to total, proportional to weights. Remainders are
// handed out largest first, lower index on ties.
std::vector<std::size_t> LargestRemainder(std::span<const double> weights,
                                          std::size_t total) {
  const std::size_t k = weights.size();
  std::vector<std::size_t> counts(k);
  std::vector<double> remainder(k);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double exact = weights[i] * static_cast<double>(total);
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    remainder[i] = exact - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  // Floating error can overshoot by a unit when weights sum slightly above 1.
  while (assigned > total) {
    auto it = std::max_element(counts.begin(), counts.end());
    --*it;
    --assigned;
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  for (std::size_t j = 0; assigned < total; j = (j + 1) % k) {
    ++counts[order[j]];
    ++assigned;
  }
  return counts;
}

}  // namespace

Partition DirichletPartition(std::span<const int> labels, std::size_t n_clients,
                             double beta, std::uint64_t seed) {
  if (n_clients < 1) throw ParameterError("need at least one client");
  if (n_clients > labels.size()) {
    throw ParameterError(std::to_string(n_clients) + " clients but only " +
                         std::to_string(labels.size()) + " samples");
  }
  if (!(beta > 0.0)) throw ParameterError("Dirichlet concentration must be > 0");

  int n_classes = 0;
  for (int y : labels) {
    if (y < 0) throw ParameterError("negative label");
    n_classes = std::max(n_classes, y + 1);
  }
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(n_classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }

  Partition part;
  part.clients.resize(n_clients);
  Rng shuffle_rng = StreamRng(seed, "partition-shuffle");
  for (std::size_t k = 0; k < by_class.size(); ++k) {
    auto& members = by_class[k];
    if (members.empty()) continue;
    shuffle_rng.Shuffle(std::span<std::size_t>(members));
    const auto p = SampleDirichlet(beta, n_clients,
                                   DeriveSeed(seed, "partition-dirichlet", k));
    const auto counts = LargestRemainder(p, members.size());
    std::size_t pos = 0;
    for (std::size_t c = 0; c < n_clients; ++c) {
      for (std::size_t j = 0; j < counts[c]; ++j) {
        part.clients[c].push_back(members[pos++]);
      }
    }
  }

  for (auto& client : part.clients) {
    if (!client.empty()) continue;
    auto largest = std::max_element(
        part.clients.begin(), part.clients.end(),
        [](const auto& a, const auto& b) { return a.size() < b.size(); });
    client.push_back(largest->back());
    largest->pop_back();
  }
  for (auto& client : part.clients) std::sort(client.begin(), client.end());
  return part;
}

Dataset SynthClassification(std::size_t n_samples, std::size_t n_features,
                            int n_classes, double class_sep,
                            std::uint64_t seed) {
  if (n_classes < 2) throw ParameterError("need at least two classes");
  if (n_features < 1) throw ParameterError("need at least one feature");
  if (n_samples < static_cast<std::size_t>(n_classes)) {
    throw ParameterError("fewer samples than classes");
  }
  if (!(class_sep >= 0.0)) throw ParameterError("class_sep must be >= 0");

  const auto c = static_cast<std::size_t>(n_classes);
  std::vector<double> means(c * n_features, 0.0);
  if (n_features >= c) {
    // One-hot directions: every pair of means is exactly class_sep apart.
    const double r = class_sep / std::numbers::sqrt2;
    for (std::size_t k = 0; k < c; ++k) means[k * n_features + k] = r;
  } else if (n_features >= 2) {
    // Regular polygon in the first two coordinates; neighbours class_sep apart.
    const double r = class_sep / (2.0 * std::sin(std::numbers::pi / static_cast<double>(c)));
    for (std::size_t k = 0; k < c; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(c);
      means[k * n_features + 0] = r * std::cos(theta);
      means[k * n_features + 1] = r * std::sin(theta);
    }
  } else {
    for (std::size_t k = 0; k < c; ++k) means[k] = class_sep * static_cast<double>(k);
  }

  std::vector<int> labels(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) labels[i] = static_cast<int>(i % c);
  Rng label_rng = StreamRng(seed, "synth-labels");
  label_rng.Shuffle(std::span<int>(labels));

  Rng noise_rng = StreamRng(seed, "synth-noise");
  std::vector<double> features(n_samples * n_features);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const auto k = static_cast<std::size_t>(labels[i]);
    for (std::size_t j = 0; j < n_features; ++j) {
      features[i * n_features + j] = means[k * n_features + j] + noise_rng.Normal();
    }
  }
  return Dataset(std::move(features), std::move(labels), n_features, n_classes);
}

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
bool ParseNumber(std::string_view field, T& out) {
  field = Trim(field);
  if (field.empty()) return false;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

Dataset LoadCsvDataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset " + path.string());

  std::vector<double> features;
  std::vector<int> labels;
  std::size_t n_columns = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitCommas(line);
    if (n_columns == 0) {
      if (fields.size() < 2) {
        throw SchemaError(path.string() + ": need at least one feature and a label");
      }
      n_columns = fields.size();
    } else if (fields.size() != n_columns) {
      throw SchemaError(path.string() + ": line " + std::to_string(line_no) +
                        " has " + std::to_string(fields.size()) +
                        " columns, expected " + std::to_string(n_columns));
    }
    for (std::size_t j = 0; j + 1 < fields.size(); ++j) {
      double x;
      if (!ParseNumber(fields[j], x) || !std::isfinite(x)) {
        throw ParseError("bad feature value '" + std::string(Trim(fields[j])) + "'",
                         line_no);
      }
      features.push_back(x);
    }
    int y;
    if (!ParseNumber(fields.back(), y) || y < 0) {
      throw ParseError("bad label '" + std::string(Trim(fields.back())) + "'", line_no);
    }
    labels.push_back(y);
  }
  if (labels.empty()) throw SchemaError(path.string() + ": no rows");
  const int n_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  return Dataset(std::move(features), std::move(labels), n_columns - 1, n_classes);
}

void WriteCsvDataset(const Dataset& data, const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) throw IoError("cannot write dataset " + path.string());
  for (std::size_t i = 0; i < data.n_samples(); ++i) {
    for (double x : data.row(i)) std::fprintf(f, "%.17g,", x);
    std::fprintf(f, "%d\n", data.label(i));
  }
  if (std::fclose(f) != 0) throw IoError("failed writing " + path.string());
}

TrainTestSplit SplitTrainTest(const Dataset& data, double test_fraction,
                              std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ParameterError("test fraction must lie in (0, 1)");
  }
  if (data.n_samples() < 2) throw ParameterError("need at least two samples to split");
  std::vector<std::size_t> order(data.n_samples());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.Shuffle(std::span<std::size_t>(order));
  auto n_test = static_cast<std::size_t>(
      std::floor(test_fraction * static_cast<double>(data.n_samples())));
  n_test = std::clamp<std::size_t>(n_test, 1, data.n_samples() - 1);
  std::vector<std::size_t> test_rows(order.begin(), order.begin() + static_cast<long>(n_test));
  std::vector<std::size_t> train_rows(order.begin() + static_cast<long>(n_test), order.end());
  std::sort(test_rows.begin(), test_rows.end());
  std::sort(train_rows.begin(), train_rows.end());
  return {data.Subset(train_rows), data.Subset(test_rows)};
}

std::vector<double> ClientLabelEntropies(const Partition& partition,
                                         std::span<const int> labels,
                                         int n_classes) {
  const auto counts = partition.ClassCounts(labels, n_classes);
  std::vector<double> entropies;
  entropies.reserve(counts.size());
  for (const auto& row : counts) {
    const double total = static_cast<double>(std::accumulate(row.begin(), row.end(), std::size_t{0}));
    double h = 0.0;
    for (std::size_t n : row) {
      if (n == 0) continue;
      const double p = static_cast<double>(n) / total;
      h -= p * std::log(p);
    }
    entropies.push_back(h);
  }
  return entropies;
}

}  // namespace fedsim
