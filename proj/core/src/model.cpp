// Copyright 2026 The TextAlign Authors. All Rights Reserved.
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

#include "textalign/model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "textalign/digest.hpp"
#include "textalign/error.hpp"
#include "textalign/rng.hpp"
#include "textalign/strings.hpp"

namespace textalign {

using nlohmann::json;

SparseVector featurize(std::string_view text, const FeaturizerConfig& config) {
  if (config.hash_dim < 2) {
    throw Error(Errc::shape_mismatch, "hash_dim must be at least 2");
  }
  SparseVector vector;
  vector.dim = config.hash_dim;
  std::unordered_map<std::uint32_t, double> counts;
  for (const auto& token : word_tokens(text, config.lowercase)) {
    const auto bucket =
        static_cast<std::uint32_t>(fnv1a64(token) % config.hash_dim);
    counts[bucket] += 1.0;
  }
  if (counts.empty()) return vector;
  vector.entries.assign(counts.begin(), counts.end());
  std::sort(vector.entries.begin(), vector.entries.end());
  double norm_sq = 0.0;
  for (const auto& [index, value] : vector.entries) {
    (void)index;
    norm_sq += value * value;
  }
  const double norm = std::sqrt(norm_sq);
  for (auto& [index, value] : vector.entries) {
    (void)index;
    value /= norm;
  }
  return vector;
}

LinearModel zero_model(int k, std::uint32_t dim) {
  LinearModel model;
  model.k = k;
  model.dim = dim;
  model.weights.assign(static_cast<std::size_t>(k) * dim, 0.0);
  model.bias.assign(static_cast<std::size_t>(k), 0.0);
  return model;
}

namespace {

void check_features(const LinearModel& model, const SparseVector& features) {
  if (features.dim != model.dim) {
    throw Error(Errc::shape_mismatch,
                "feature dim " + std::to_string(features.dim) +
                    " does not match model dim " + std::to_string(model.dim));
  }
  for (const auto& [index, value] : features.entries) {
    (void)value;
    if (index >= model.dim) {
      throw Error(Errc::shape_mismatch,
                  "feature index " + std::to_string(index) +
                      " >= dim " + std::to_string(model.dim));
    }
  }
}

// logits -> probabilities, max-subtracted for stability.
std::vector<double> softmax(std::vector<double> logits) {
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& v : logits) {
    v = std::exp(v - max_logit);
    sum += v;
  }
  for (double& v : logits) v /= sum;
  return logits;
}

std::vector<double> logits_of(const LinearModel& model,
                              const SparseVector& features) {
  std::vector<double> logits(model.bias);
  for (int k = 0; k < model.k; ++k) {
    const double* row = model.weights.data() +
                        static_cast<std::size_t>(k) * model.dim;
    double dot = 0.0;
    for (const auto& [index, value] : features.entries) {
      dot += row[index] * value;
    }
    logits[static_cast<std::size_t>(k)] += dot;
  }
  return logits;
}

void check_training_inputs(const std::vector<SparseVector>& features,
                           const std::vector<int>& labels, int k) {
  if (features.size() != labels.size()) {
    throw Error(Errc::shape_mismatch,
                std::to_string(features.size()) + " feature rows vs " +
                    std::to_string(labels.size()) + " labels");
  }
  if (features.empty()) {
    throw Error(Errc::empty_dataset, "no training examples");
  }
  for (int label : labels) {
    if (label < 0 || label >= k) {
      throw Error(Errc::shape_mismatch,
                  "label " + std::to_string(label) + " outside [0, " +
                      std::to_string(k) + ")");
    }
  }
}

}  // namespace

double average_loss(const LinearModel& model,
                    const std::vector<SparseVector>& features,
                    const std::vector<int>& labels, double l2) {
  check_training_inputs(features, labels, model.k);
  double total = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto probs = softmax(logits_of(model, features[i]));
    // Guard the log; saturated wrong predictions otherwise produce -inf.
    total -= std::log(std::max(probs[static_cast<std::size_t>(labels[i])],
                               1e-300));
  }
  total /= static_cast<double>(features.size());
  if (l2 > 0.0) {
    double norm_sq = 0.0;
    for (double w : model.weights) norm_sq += w * w;
    total += 0.5 * l2 * norm_sq;
  }
  return total;
}

TrainResult train(const std::vector<SparseVector>& features,
                  const std::vector<int>& labels, int k,
                  const TrainConfig& config) {
  check_training_inputs(features, labels, k);
  if (features.size() < static_cast<std::size_t>(k)) {
    throw Error(Errc::empty_dataset,
                "need at least K examples to train K classes");
  }
  const std::uint32_t dim = features.front().dim;
  for (const auto& row : features) {
    if (row.dim != dim) {
      throw Error(Errc::shape_mismatch,
                  "inconsistent feature dimensions across rows");
    }
    for (const auto& [index, value] : row.entries) {
      (void)value;
      if (index >= dim) {
        throw Error(Errc::shape_mismatch, "feature index exceeds dimension");
      }
    }
  }
  TrainResult result;
  result.model = zero_model(k, dim);
  LinearModel& model = result.model;

  const std::size_t n = features.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  // Lazy L2 via weight scaling: W = scale * V. Keeps each step O(nnz * K)
  // while matching the exact per-example regularized update.
  double scale = 1.0;
  std::vector<double>& v = model.weights;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle) {
      CounterRng rng = derive_stream(
          config.seed, "epoch." + std::to_string(epoch), "train.shuffle");
      for (std::size_t j = n - 1; j > 0; --j) {
        const auto swap_with = static_cast<std::size_t>(rng.next_below(j + 1));
        std::swap(order[j], order[swap_with]);
      }
    }
    for (std::size_t pos = 0; pos < n; ++pos) {
      const std::size_t i = order[pos];
      const SparseVector& x = features[i];
      const int y = labels[i];

      std::vector<double> logits(model.bias);
      for (int c = 0; c < k; ++c) {
        const double* row = v.data() + static_cast<std::size_t>(c) * dim;
        double dot = 0.0;
        for (const auto& [index, value] : x.entries) {
          dot += row[index] * value;
        }
        logits[static_cast<std::size_t>(c)] += scale * dot;
      }
      const auto probs = softmax(std::move(logits));

      if (config.l2 > 0.0) scale *= 1.0 - config.learning_rate * config.l2;
      for (int c = 0; c < k; ++c) {
        const double g = probs[static_cast<std::size_t>(c)] -
                         (c == y ? 1.0 : 0.0);
        double* row = v.data() + static_cast<std::size_t>(c) * dim;
        for (const auto& [index, value] : x.entries) {
          row[index] -= config.learning_rate * g * value / scale;
        }
        model.bias[static_cast<std::size_t>(c)] -= config.learning_rate * g;
      }
    }
    // Materialize the scale so the recorded loss sees true weights.
    if (scale != 1.0) {
      for (double& w : v) w *= scale;
      scale = 1.0;
    }
    result.epoch_losses.push_back(
        average_loss(model, features, labels, config.l2));
  }
  if (scale != 1.0) {
    for (double& w : v) w *= scale;
  }
  return result;
}

Gradient gradient(const LinearModel& model,
                  const std::vector<SparseVector>& features,
                  const std::vector<int>& labels, double l2) {
  check_training_inputs(features, labels, model.k);
  Gradient grad;
  grad.weights.assign(model.weights.size(), 0.0);
  grad.bias.assign(model.bias.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    check_features(model, features[i]);
    const auto probs = softmax(logits_of(model, features[i]));
    for (int c = 0; c < model.k; ++c) {
      const double g =
          (probs[static_cast<std::size_t>(c)] -
           (c == labels[i] ? 1.0 : 0.0)) *
          inv_n;
      double* row = grad.weights.data() +
                    static_cast<std::size_t>(c) * model.dim;
      for (const auto& [index, value] : features[i].entries) {
        row[index] += g * value;
      }
      grad.bias[static_cast<std::size_t>(c)] += g;
    }
  }
  if (l2 > 0.0) {
    for (std::size_t j = 0; j < grad.weights.size(); ++j) {
      grad.weights[j] += l2 * model.weights[j];
    }
  }
  return grad;
}

Prediction predict(const LinearModel& model, const SparseVector& features) {
  check_features(model, features);
  Prediction prediction;
  prediction.probs = softmax(logits_of(model, features));
  prediction.label = 0;
  for (int c = 1; c < model.k; ++c) {
    if (prediction.probs[static_cast<std::size_t>(c)] >
        prediction.probs[static_cast<std::size_t>(prediction.label)]) {
      prediction.label = c;
    }
  }
  return prediction;
}

double accuracy(const std::vector<int>& predictions,
                const std::vector<int>& labels) {
  if (predictions.size() != labels.size()) {
    throw Error(Errc::length_mismatch,
                std::to_string(predictions.size()) + " predictions vs " +
                    std::to_string(labels.size()) + " labels");
  }
  if (predictions.empty()) {
    throw Error(Errc::empty, "no predictions");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == labels[i]) ++correct;
  }
  return static_cast<double>(correct) /
         static_cast<double>(predictions.size());
}

namespace {

json model_payload(const LinearModel& model,
                   const FeaturizerConfig& featurizer) {
  json weights = json::array();
  for (int c = 0; c < model.k; ++c) {
    const double* row = model.weights.data() +
                        static_cast<std::size_t>(c) * model.dim;
    for (std::uint32_t j = 0; j < model.dim; ++j) {
      if (row[j] != 0.0) {
        weights.push_back({c, j, row[j]});
      }
    }
  }
  return json{{"k", model.k},
              {"dim", model.dim},
              {"weights", weights},
              {"bias", model.bias},
              {"featurizer",
               {{"hash_dim", featurizer.hash_dim},
                {"lowercase", featurizer.lowercase}}}};
}

}  // namespace

std::string model_to_json_text(const LinearModel& model,
                               const FeaturizerConfig& featurizer) {
  json j = model_payload(model, featurizer);
  j["content_hash"] = sha256_hex(j.dump());
  return j.dump(2) + "\n";
}

std::pair<LinearModel, FeaturizerConfig> model_from_json_text(
    std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::io_error, std::string("model JSON: ") + e.what());
  }
  const std::string stored_hash = j.value("content_hash", "");
  j.erase("content_hash");
  if (!stored_hash.empty() && stored_hash != sha256_hex(j.dump())) {
    throw Error(Errc::io_error, "model content hash mismatch");
  }
  LinearModel model;
  FeaturizerConfig featurizer;
  try {
    model = zero_model(j.at("k").get<int>(), j.at("dim").get<std::uint32_t>());
    for (const auto& entry : j.at("weights")) {
      const int c = entry.at(0).get<int>();
      const auto index = entry.at(1).get<std::uint32_t>();
      model.weights[static_cast<std::size_t>(c) * model.dim + index] =
          entry.at(2).get<double>();
    }
    model.bias = j.at("bias").get<std::vector<double>>();
    featurizer.hash_dim = j.at("featurizer").at("hash_dim").get<std::uint32_t>();
    featurizer.lowercase = j.at("featurizer").at("lowercase").get<bool>();
  } catch (const json::exception& e) {
    throw Error(Errc::io_error, std::string("model field error: ") + e.what());
  }
  if (model.bias.size() != static_cast<std::size_t>(model.k)) {
    throw Error(Errc::shape_mismatch, "bias length does not match k");
  }
  return {std::move(model), featurizer};
}

}  // namespace textalign
