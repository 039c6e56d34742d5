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

#include <benchmark/benchmark.h>

#include "textalign/dataset.hpp"
#include "textalign/model.hpp"
#include "textalign/pipeline.hpp"
#include "textalign/textify.hpp"

namespace {

using namespace textalign;

struct BenchContext {
  TabularSchema schema;
  MultimodalRecord record;
  Captioner captioner;
  LlmClient client;
  PipelineConfig config;
  FeaturizerConfig featurizer;

  BenchContext() {
    schema = schema_from_json_text(R"({
      "id_column": "id", "label_column": "label", "text_column": "text",
      "label_cardinality": 2,
      "columns": [
        {"name": "marker", "description": "marker of sample", "kind": "categorical"},
        {"name": "shape", "description": "shape of sample", "kind": "categorical"}
      ]})");
    record.id = "bench-0";
    record.label = 1;
    record.tabular = {{"marker", std::optional<std::string>("positive")},
                      {"shape", std::optional<std::string>("round")}};
    record.text =
        "The panel shows a strong alpha trace near the edge. Inspectors "
        "noted alpha residue on the fine sheet during review.";
    record.caption = "A bright panel with a fine grain behind it.";
    std::vector<MultimodalRecord> records{record};
    captioner = make_precomputed_captioner(records);

    ProviderProfile mock;
    mock.id = "mock";
    mock.kind = ProviderProfile::Kind::mock;
    client.register_profile(mock);

    config.name = "full";
    config.provider_id = "mock";
    config.label_cardinality = 2;
    config.prompts.summarize_system = "Task tag: SUMMARIZE";
    config.prompts.summarize_user = "{SECTIONS}";
    config.prompts.summarize_exemplar_user = "{EXEMPLAR_INPUT}";
    config.prompts.summarize_exemplar_assistant = "{EXEMPLAR_SUMMARY}";
    config.prompts.reason_system = "K={K} Task tag: REASON";
    config.prompts.reason_user = "{SECTIONS}";
  }
};

void BM_RunPipelineMock(benchmark::State& state) {
  BenchContext context;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_pipeline(context.record, context.schema, context.captioner,
                     context.config, context.client));
  }
}
BENCHMARK(BM_RunPipelineMock);

void BM_FeaturizePredict(benchmark::State& state) {
  BenchContext context;
  const AlignedText aligned =
      run_pipeline(context.record, context.schema, context.captioner,
                   context.config, context.client);
  const SparseVector features =
      featurize(aligned.final_text, context.featurizer);
  std::vector<SparseVector> train_features;
  std::vector<int> labels;
  for (int i = 0; i < 64; ++i) {
    train_features.push_back(featurize(
        i % 2 == 0 ? "alpha panel edge" : "omega sheet grain",
        context.featurizer));
    labels.push_back(i % 2);
  }
  TrainConfig train_config;
  train_config.epochs = 2;
  const LinearModel model =
      train(train_features, labels, 2, train_config).model;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        predict(model, featurize(aligned.final_text, context.featurizer)));
  }
}
BENCHMARK(BM_FeaturizePredict);

}  // namespace

BENCHMARK_MAIN();
