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

#include "fedsim/config.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <type_traits>

#include "fedsim/errors.h"
#include "json.hpp"

namespace fedsim {

using nlohmann::json;

Algorithm ParseAlgorithm(std::string_view name) {
  if (name == "fedavg") return Algorithm::kFedAvg;
  if (name == "topk") return Algorithm::kTopK;
  if (name == "eftopk") return Algorithm::kEfTopK;
  if (name == "bcrs") return Algorithm::kBcrs;
  if (name == "bcrs_opwa") return Algorithm::kBcrsOpwa;
  throw ConfigError("unknown algorithm '" + std::string(name) +
                    "' (expected fedavg|topk|eftopk|bcrs|bcrs_opwa)");
}

std::string_view AlgorithmName(Algorithm algo) {
  switch (algo) {
    case Algorithm::kFedAvg: return "fedavg";
    case Algorithm::kTopK: return "topk";
    case Algorithm::kEfTopK: return "eftopk";
    case Algorithm::kBcrs: return "bcrs";
    case Algorithm::kBcrsOpwa: return "bcrs_opwa";
  }
  return "unknown";
}

std::size_t ExperimentConfig::SelectedPerRound() const {
  return static_cast<std::size_t>(
      std::floor(static_cast<double>(num_clients) * participation));
}

bool ExperimentConfig::ErrorFeedbackEnabled() const {
  return error_feedback.value_or(algorithm == Algorithm::kEfTopK);
}

void ExperimentConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ParameterError(what);
  };
  require(num_clients >= 1, "num_clients must be >= 1");
  require(participation > 0.0 && participation <= 1.0,
          "participation must lie in (0, 1]");
  require(SelectedPerRound() >= 1, "floor(num_clients * participation) must be >= 1");
  require(rounds >= 1, "rounds must be >= 1");
  require(epochs >= 0, "epochs must be >= 0");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(lr > 0.0, "lr must be positive");
  require(alpha > 0.0, "alpha must be positive");
  require(gamma >= 1.0, "gamma must be >= 1");
  require(overlap_degree >= 1, "overlap_degree must be >= 1");
  require(compression_ratio > 0.0 && compression_ratio <= 1.0,
          "compression_ratio must lie in (0, 1]");
  require(beta > 0.0, "beta must be positive");
  require(server_rate > 0.0, "server_rate must be positive");
  require(workers >= 1, "workers must be >= 1");
  require(network.bw_mean > 0.0 && network.bw_std >= 0.0,
          "bandwidth mean must be > 0 and std >= 0");
  require(network.lat_lo > 0.0 && network.lat_lo < network.lat_hi,
          "latency range must satisfy 0 < lat_lo < lat_hi");
  if (data_source == DataSource::kSynthetic) {
    require(n_classes >= 2, "n_classes must be >= 2");
    require(n_features >= 1, "n_features must be >= 1");
    require(n_samples >= num_clients, "n_samples must cover every client");
  } else {
    require(!csv_path.empty(), "csv_path is required for csv data");
  }
  if (model == Architecture::kMlp) require(hidden_units >= 1, "hidden_units must be >= 1");
}

namespace {

using Setter = std::function<void(ExperimentConfig&, const json&)>;

template <typename T>
Setter Field(T ExperimentConfig::*member) {
  return [member](ExperimentConfig& c, const json& v) {
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError("expected an integer");
      if (std::is_unsigned_v<T> && !v.is_number_unsigned()) {
        throw ConfigError("expected a non-negative integer");
      }
    }
    c.*member = v.get<T>();
  };
}

const std::map<std::string, Setter, std::less<>>& Setters() {
  static const auto* setters = new std::map<std::string, Setter, std::less<>>{
      {"algorithm",
       [](ExperimentConfig& c, const json& v) {
         c.algorithm = ParseAlgorithm(v.get<std::string>());
       }},
      {"num_clients", Field(&ExperimentConfig::num_clients)},
      {"participation", Field(&ExperimentConfig::participation)},
      {"rounds", Field(&ExperimentConfig::rounds)},
      {"epochs", Field(&ExperimentConfig::epochs)},
      {"batch_size", Field(&ExperimentConfig::batch_size)},
      {"lr", Field(&ExperimentConfig::lr)},
      {"alpha", Field(&ExperimentConfig::alpha)},
      {"gamma", Field(&ExperimentConfig::gamma)},
      {"overlap_degree", Field(&ExperimentConfig::overlap_degree)},
      {"compression_ratio", Field(&ExperimentConfig::compression_ratio)},
      {"beta", Field(&ExperimentConfig::beta)},
      {"seed", Field(&ExperimentConfig::seed)},
      {"server_rate", Field(&ExperimentConfig::server_rate)},
      {"error_feedback",
       [](ExperimentConfig& c, const json& v) {
         if (v.is_null()) {
           c.error_feedback.reset();
         } else {
           c.error_feedback = v.get<bool>();
         }
       }},
      {"workers", Field(&ExperimentConfig::workers)},
      {"dataset",
       [](ExperimentConfig& c, const json& v) {
         const auto s = v.get<std::string>();
         if (s == "synthetic") {
           c.data_source = DataSource::kSynthetic;
         } else if (s == "csv") {
           c.data_source = DataSource::kCsv;
         } else {
           throw ConfigError("dataset must be 'synthetic' or 'csv', got '" + s + "'");
         }
       }},
      {"csv_path", Field(&ExperimentConfig::csv_path)},
      {"n_samples", Field(&ExperimentConfig::n_samples)},
      {"n_features", Field(&ExperimentConfig::n_features)},
      {"n_classes", Field(&ExperimentConfig::n_classes)},
      {"class_sep", Field(&ExperimentConfig::class_sep)},
      {"model",
       [](ExperimentConfig& c, const json& v) {
         c.model = ParseArchitecture(v.get<std::string>());
       }},
      {"hidden_units", Field(&ExperimentConfig::hidden_units)},
      {"bw_mean", [](ExperimentConfig& c, const json& v) { c.network.bw_mean = v.get<double>(); }},
      {"bw_std", [](ExperimentConfig& c, const json& v) { c.network.bw_std = v.get<double>(); }},
      {"lat_lo", [](ExperimentConfig& c, const json& v) { c.network.lat_lo = v.get<double>(); }},
      {"lat_hi", [](ExperimentConfig& c, const json& v) { c.network.lat_hi = v.get<double>(); }},
      {"metrics_csv", Field(&ExperimentConfig::metrics_csv)},
      {"overlap_csv", Field(&ExperimentConfig::overlap_csv)},
      {"model_out", Field(&ExperimentConfig::model_out)},
  };
  return *setters;
}

}  // namespace

ExperimentConfig ExperimentConfig::FromJsonText(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  ExperimentConfig cfg;
  const auto& setters = Setters();
  for (const auto& [key, value] : doc.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    try {
      it->second(cfg, value);
    } catch (const json::exception& e) {
      throw ConfigError("bad value for '" + key + "': " + e.what());
    } catch (const Error& e) {
      throw ConfigError("bad value for '" + key + "': " + e.what());
    }
  }
  cfg.Validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return FromJsonText(buf.str());
}

std::string ExperimentConfig::ToJsonText() const {
  json doc = {
      {"algorithm", std::string(AlgorithmName(algorithm))},
      {"num_clients", num_clients},
      {"participation", participation},
      {"rounds", rounds},
      {"epochs", epochs},
      {"batch_size", batch_size},
      {"lr", lr},
      {"alpha", alpha},
      {"gamma", gamma},
      {"overlap_degree", overlap_degree},
      {"compression_ratio", compression_ratio},
      {"beta", beta},
      {"seed", seed},
      {"server_rate", server_rate},
      {"workers", workers},
      {"dataset", data_source == DataSource::kSynthetic ? "synthetic" : "csv"},
      {"csv_path", csv_path},
      {"n_samples", n_samples},
      {"n_features", n_features},
      {"n_classes", n_classes},
      {"class_sep", class_sep},
      {"model", std::string(ArchitectureName(model))},
      {"hidden_units", hidden_units},
      {"bw_mean", network.bw_mean},
      {"bw_std", network.bw_std},
      {"lat_lo", network.lat_lo},
      {"lat_hi", network.lat_hi},
      {"metrics_csv", metrics_csv},
      {"overlap_csv", overlap_csv},
      {"model_out", model_out},
  };
  doc["error_feedback"] = error_feedback ? json(*error_feedback) : json(nullptr);
  return doc.dump(2);
}

}  // namespace fedsim
