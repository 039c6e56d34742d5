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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "textalign/perturb.hpp"

namespace textalign {

// Desk-scale downstream predictor: word tokens -> hashed bag-of-words ->
// multinomial logistic regression trained with per-example SGD. Training is
// single-threaded and bit-deterministic given config and data order;
// featurization and prediction are pure and freely parallel.

struct FeaturizerConfig {
  std::uint32_t hash_dim = 1u << 18;  // power of two, >= 2
  bool lowercase = true;

  bool operator==(const FeaturizerConfig&) const = default;
};

// Sorted unique (index, value) pairs over a fixed dimension.
struct SparseVector {
  std::uint32_t dim = 0;
  std::vector<std::pair<std::uint32_t, double>> entries;

  bool operator==(const SparseVector&) const = default;
};

// Tokens hashed with FNV-1a 64 mod hash_dim, raw counts accumulated, then
// L2-normalized unless all-zero.
SparseVector featurize(std::string_view text, const FeaturizerConfig& config);

struct LinearModel {
  int k = 0;                    // classes
  std::uint32_t dim = 0;        // feature dimension D
  std::vector<double> weights;  // k x dim, row-major
  std::vector<double> bias;     // k

  bool operator==(const LinearModel&) const = default;
};

LinearModel zero_model(int k, std::uint32_t dim);

struct TrainConfig {
  int epochs = 5;
  double learning_rate = 0.5;
  double l2 = 0.0;
  std::uint64_t seed = 0;
  bool shuffle = true;
  // Robust-training baseline: specs applied to training inputs upstream of
  // featurization by the run orchestration. Evaluation inputs are untouched.
  std::vector<PerturbationSpec> train_time_perturbation;
};

struct TrainResult {
  LinearModel model;
  std::vector<double> epoch_losses;  // average regularized loss after each epoch
};

// Minimizes average cross-entropy + (l2/2)*||W||^2 with zero-initialized
// per-example SGD and a seeded shuffle per epoch. Throws ShapeMismatch and
// EmptyDataset.
TrainResult train(const std::vector<SparseVector>& features,
                  const std::vector<int>& labels, int k,
                  const TrainConfig& config);

struct Gradient {
  std::vector<double> weights;  // k x dim
  std::vector<double> bias;     // k
};

// Analytic gradient of the average regularized cross-entropy over the batch;
// the target of the finite-difference verification tests.
Gradient gradient(const LinearModel& model,
                  const std::vector<SparseVector>& features,
                  const std::vector<int>& labels, double l2);

double average_loss(const LinearModel& model,
                    const std::vector<SparseVector>& features,
                    const std::vector<int>& labels, double l2);

struct Prediction {
  int label = 0;
  std::vector<double> probs;
};

// argmax of softmax(Wx + b); ties break to the lowest class index.
Prediction predict(const LinearModel& model, const SparseVector& features);

// Fraction of exact matches. Throws LengthMismatch and Empty.
double accuracy(const std::vector<int>& predictions,
                const std::vector<int>& labels);

// Checkpoint container: {k, dim, sparse weights, bias, featurizer config,
// content hash}. Loading verifies the hash.
std::string model_to_json_text(const LinearModel& model,
                               const FeaturizerConfig& featurizer);
std::pair<LinearModel, FeaturizerConfig> model_from_json_text(
    std::string_view text);

}  // namespace textalign
