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

#include "fedsim/learner.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fedsim/errors.h"
#include "fedsim/random.h"

namespace fedsim {

Architecture ParseArchitecture(std::string_view name) {
  if (name == "logreg") return Architecture::kLogReg;
  if (name == "mlp") return Architecture::kMlp;
  throw ParameterError("unknown model architecture '" + std::string(name) + "'");
}

std::string_view ArchitectureName(Architecture arch) {
  return arch == Architecture::kLogReg ? "logreg" : "mlp";
}

std::size_t ModelSpec::ParamCount() const {
  const auto f = n_features;
  const auto c = static_cast<std::size_t>(n_classes);
  const auto h = hidden_units;
  if (arch == Architecture::kLogReg) return f * c + c;
  return f * h + h + h * c + c;
}

ParamVector InitParams(const ModelSpec& spec, std::uint64_t seed) {
  ParamVector w(spec.ParamCount());
  if (spec.arch == Architecture::kLogReg) return w;
  Rng rng(seed);
  const std::size_t f = spec.n_features;
  const std::size_t h = spec.hidden_units;
  const auto c = static_cast<std::size_t>(spec.n_classes);
  const double s1 = std::sqrt(2.0 / static_cast<double>(f));
  const double s2 = std::sqrt(2.0 / static_cast<double>(h));
  std::size_t pos = 0;
  for (std::size_t i = 0; i < h * f; ++i) w[pos++] = s1 * rng.Normal();
  pos += h;
  for (std::size_t i = 0; i < c * h; ++i) w[pos++] = s2 * rng.Normal();
  return w;
}

namespace {

void CheckShapes(const ParamVector& params, const ModelSpec& spec,
                 const Dataset& data) {
  if (spec.n_classes < 2) throw ParameterError("model needs at least two classes");
  if (spec.arch == Architecture::kMlp && spec.hidden_units == 0) {
    throw ParameterError("mlp needs hidden_units >= 1");
  }
  if (params.size() != spec.ParamCount()) {
    throw DimensionError("expected " + std::to_string(spec.ParamCount()) +
                         " parameters, got " + std::to_string(params.size()));
  }
  if (data.n_features() != spec.n_features) {
    throw DimensionError("dataset has " + std::to_string(data.n_features()) +
                         " features, model expects " +
                         std::to_string(spec.n_features));
  }
  if (data.n_classes() > spec.n_classes) {
    throw DimensionError("dataset labels exceed model class count");
  }
}

// Views into the flat parameter vector.
struct Layers {
  const double* w1;
  const double* b1;
  const double* w2;
  const double* b2;
};

Layers Slice(const double* base, const ModelSpec& spec) {
  const std::size_t f = spec.n_features;
  const auto c = static_cast<std::size_t>(spec.n_classes);
  if (spec.arch == Architecture::kLogReg) {
    return {base, base + c * f, nullptr, nullptr};
  }
  const std::size_t h = spec.hidden_units;
  const double* w1 = base;
  const double* b1 = w1 + h * f;
  const double* w2 = b1 + h;
  const double* b2 = w2 + c * h;
  return {w1, b1, w2, b2};
}

// out[r] = b[r] + sum_j W[r, j] * x[j]
void Affine(const double* weights, const double* bias, std::span<const double> x,
            std::size_t rows, double* out) {
  const std::size_t cols = x.size();
  for (std::size_t r = 0; r < rows; ++r) {
    double z = bias[r];
    const double* wr = weights + r * cols;
    for (std::size_t j = 0; j < cols; ++j) z += wr[j] * x[j];
    out[r] = z;
  }
}

// Softmax in place; returns -log p[label].
double SoftmaxCrossEntropy(std::span<double> logits, int label) {
  const double top = *std::max_element(logits.begin(), logits.end());
  const double shifted_label = logits[static_cast<std::size_t>(label)] - top;
  double total = 0.0;
  for (double& z : logits) {
    z = std::exp(z - top);
    total += z;
  }
  for (double& z : logits) z /= total;
  // log-sum-exp form stays finite even when p[label] underflows.
  return std::log(total) - shifted_label;
}

class Batch {
 public:
  Batch(const Dataset& data, std::span<const std::size_t> rows)
      : data_(data), rows_(rows) {}
  std::size_t size() const { return rows_.empty() ? data_.n_samples() : rows_.size(); }
  std::size_t row_index(std::size_t i) const { return rows_.empty() ? i : rows_[i]; }

 private:
  const Dataset& data_;
  std::span<const std::size_t> rows_;
};

// Logits (and hidden activations for mlp) for one sample.
void ForwardSample(const Layers& layers, const ModelSpec& spec,
                   std::span<const double> x, std::vector<double>& hidden,
                   std::vector<double>& logits) {
  const auto c = static_cast<std::size_t>(spec.n_classes);
  logits.resize(c);
  if (spec.arch == Architecture::kLogReg) {
    Affine(layers.w1, layers.b1, x, c, logits.data());
    return;
  }
  hidden.resize(spec.hidden_units);
  Affine(layers.w1, layers.b1, x, spec.hidden_units, hidden.data());
  for (double& a : hidden) a = a > 0.0 ? a : 0.0;
  Affine(layers.w2, layers.b2, hidden, c, logits.data());
}

}  // namespace

ForwardResult ForwardLoss(const ParamVector& params, const ModelSpec& spec,
                          const Dataset& data,
                          std::span<const std::size_t> rows) {
  CheckShapes(params, spec, data);
  const Batch batch(data, rows);
  if (batch.size() == 0) throw ParameterError("empty batch");

  const Layers layers = Slice(params.values().data(), spec);
  const auto c = static_cast<std::size_t>(spec.n_classes);
  ForwardResult out;
  out.probabilities.resize(batch.size() * c);
  std::vector<double> hidden, logits;
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const std::size_t r = batch.row_index(i);
    ForwardSample(layers, spec, data.row(r), hidden, logits);
    total += SoftmaxCrossEntropy(logits, data.label(r));
    std::copy(logits.begin(), logits.end(), out.probabilities.begin() + static_cast<long>(i * c));
  }
  out.loss = total / static_cast<double>(batch.size());
  return out;
}

ParamVector Backward(const ParamVector& params, const ModelSpec& spec,
                     const Dataset& data, std::span<const std::size_t> rows) {
  CheckShapes(params, spec, data);
  const Batch batch(data, rows);
  if (batch.size() == 0) throw ParameterError("empty batch");

  const Layers layers = Slice(params.values().data(), spec);
  ParamVector grad(params.size());
  double* g = grad.values().data();
  const std::size_t f = spec.n_features;
  const auto c = static_cast<std::size_t>(spec.n_classes);
  const std::size_t h = spec.hidden_units;
  const double inv_b = 1.0 / static_cast<double>(batch.size());

  std::vector<double> hidden, logits, dhidden;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const std::size_t r = batch.row_index(i);
    const auto x = data.row(r);
    ForwardSample(layers, spec, x, hidden, logits);
    SoftmaxCrossEntropy(logits, data.label(r));
    // logits now holds probabilities; turn them into dL/dz for this sample.
    logits[static_cast<std::size_t>(data.label(r))] -= 1.0;
    for (double& d : logits) d *= inv_b;

    if (spec.arch == Architecture::kLogReg) {
      double* gw = g;
      double* gb = g + c * f;
      for (std::size_t k = 0; k < c; ++k) {
        for (std::size_t j = 0; j < f; ++j) gw[k * f + j] += logits[k] * x[j];
        gb[k] += logits[k];
      }
      continue;
    }

    double* gw1 = g;
    double* gb1 = gw1 + h * f;
    double* gw2 = gb1 + h;
    double* gb2 = gw2 + c * h;
    dhidden.assign(h, 0.0);
    for (std::size_t k = 0; k < c; ++k) {
      const double* w2k = layers.w2 + k * h;
      for (std::size_t u = 0; u < h; ++u) {
        gw2[k * h + u] += logits[k] * hidden[u];
        dhidden[u] += logits[k] * w2k[u];
      }
      gb2[k] += logits[k];
    }
    for (std::size_t u = 0; u < h; ++u) {
      if (!(hidden[u] > 0.0)) continue;
      for (std::size_t j = 0; j < f; ++j) gw1[u * f + j] += dhidden[u] * x[j];
      gb1[u] += dhidden[u];
    }
  }
  return grad;
}

std::vector<std::size_t> EpochOrder(std::size_t n_samples,
                                    std::uint64_t shuffle_seed, int epoch) {
  std::vector<std::size_t> order(n_samples);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = StreamRng(shuffle_seed, "epoch", static_cast<std::uint64_t>(epoch));
  rng.Shuffle(std::span<std::size_t>(order));
  return order;
}

ParamVector LocalTrain(const ParamVector& w_global, const ModelSpec& spec,
                       const Dataset& data, const TrainConfig& cfg) {
  if (data.empty()) throw ParameterError("local dataset is empty");
  if (cfg.epochs < 0) throw ParameterError("epochs must be >= 0");
  if (cfg.batch_size < 1) throw ParameterError("batch size must be >= 1");
  if (!(cfg.lr > 0.0)) throw ParameterError("learning rate must be positive");

  ParamVector w = w_global;
  for (int e = 0; e < cfg.epochs; ++e) {
    const auto order = EpochOrder(data.n_samples(), cfg.shuffle_seed, e);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t len = std::min(cfg.batch_size, order.size() - start);
      const std::span<const std::size_t> rows(order.data() + start, len);
      const ParamVector grad = Backward(w, spec, data, rows);
      for (std::size_t j = 0; j < w.size(); ++j) w[j] -= cfg.lr * grad[j];
    }
  }
  return ComputeUpdate(w_global, w);
}

Evaluation Evaluate(const ParamVector& params, const ModelSpec& spec,
                    const Dataset& data) {
  if (data.empty()) throw ParameterError("cannot evaluate on an empty dataset");
  CheckShapes(params, spec, data);
  const Layers layers = Slice(params.values().data(), spec);
  std::vector<double> hidden, logits;
  std::size_t correct = 0;
  double total_loss = 0.0;
  for (std::size_t i = 0; i < data.n_samples(); ++i) {
    ForwardSample(layers, spec, data.row(i), hidden, logits);
    const auto pred = static_cast<int>(
        std::max_element(logits.begin(), logits.end()) - logits.begin());
    if (pred == data.label(i)) ++correct;
    total_loss += SoftmaxCrossEntropy(logits, data.label(i));
  }
  const double n = static_cast<double>(data.n_samples());
  return {static_cast<double>(correct) / n, total_loss / n};
}

}  // namespace fedsim
