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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>

#include <nlohmann/json.hpp>

#include "test_util.hpp"
#include "textalign/dataset.hpp"
#include "textalign/error.hpp"
#include "textalign/eval.hpp"
#include "textalign/rng.hpp"

using namespace textalign;
using textalign::testing::TempDir;
using textalign::testing::data_dir;
using textalign::testing::golden_dir;

TEST_CASE("drop_ratio algebra") {
  CHECK(drop_ratio(0.5, 0.5) == 0.0);
  CHECK(drop_ratio(1.0, 0.887) == doctest::Approx(0.113).epsilon(1e-12));
  CHECK(drop_ratio(0.4038, 0.2) ==
        doctest::Approx(0.5047052996532937).epsilon(1e-12));
  CHECK_THROWS_AS(drop_ratio(0.0, 0.5), Error);

  CounterRng rng = derive_stream(1, "", "drop.prop");
  for (int i = 0; i < 100; ++i) {
    const double a = 0.01 + 0.99 * rng.next_double();
    CHECK(drop_ratio(a, a) == 0.0);
  }
  // Strictly increasing as the perturbed accuracy falls.
  CHECK(drop_ratio(0.8, 0.6) < drop_ratio(0.8, 0.5));
  CHECK(drop_ratio(0.8, 0.9) < 0.0);  // improvement shows as negative
}

namespace {

TabularSchema mini_schema() {
  return schema_from_json_text(R"({
    "id_column": "id", "label_column": "label", "text_column": "text",
    "label_cardinality": 2,
    "columns": [
      {"name": "marker", "description": "marker of sample", "kind": "categorical"},
      {"name": "filler", "description": "filler of sample", "kind": "categorical"}
    ]})");
}

std::vector<MultimodalRecord> mini_records(int n) {
  std::vector<MultimodalRecord> records;
  CounterRng rng = derive_stream(99, "", "mini.records");
  static const char* kFiller[] = {"grain", "edge", "panel", "strip", "tile"};
  for (int i = 0; i < n; ++i) {
    MultimodalRecord record;
    record.id = "m-" + std::to_string(i);
    record.label = i % 2;
    const char* signal = record.label == 1 ? "alpha" : "omega";
    const char* tint = record.label == 1 ? "bright" : "dark";
    record.tabular = {
        {"marker", std::optional<std::string>(record.label == 1 ? "positive"
                                                                : "negative")},
        {"filler", std::optional<std::string>(kFiller[rng.next_below(5)])}};
    record.text = std::string("The sample shows a ") + signal + " trace. " +
                  "A second look confirms the " + signal + " residue.";
    record.caption = std::string("A ") + tint + " object on a plain " +
                     kFiller[rng.next_below(5)] + ".";
    records.push_back(std::move(record));
  }
  return records;
}

struct MiniHarness {
  TabularSchema schema = mini_schema();
  std::vector<MultimodalRecord> records = mini_records(40);
  Captioner captioner;
  LlmClient client;
  TrainArtifacts artifacts;

  MiniHarness() {
    ProviderProfile mock;
    mock.id = "mock";
    mock.kind = ProviderProfile::Kind::mock;
    client.register_profile(mock);
    captioner = make_precomputed_captioner(records);

    PipelineConfig pipeline;
    pipeline.name = "transform-only";
    pipeline.enable_summarization = false;
    pipeline.enable_reasoning = false;
    pipeline.provider_id = "mock";
    pipeline.label_cardinality = 2;

    FeaturizerConfig featurizer{4096, true};
    std::vector<SparseVector> features;
    std::vector<int> labels;
    for (const auto& record : records) {
      const AlignedText aligned =
          run_pipeline(record, schema, captioner, pipeline, client);
      features.push_back(featurize(aligned.final_text, featurizer));
      labels.push_back(record.label);
    }
    TrainConfig config;
    config.epochs = 5;
    config.seed = 3;
    artifacts = TrainArtifacts{
        train(features, labels, 2, config).model, featurizer, pipeline};
  }

  SweepConfig text_sweep(std::vector<double> levels) const {
    SweepConfig sweep;
    sweep.name = "text";
    sweep.target = SweepTarget::text;
    sweep.grids.emplace(Modality::text,
                        make_level_grid(Modality::text, std::move(levels)));
    sweep.base_seed = 11;
    sweep.pipeline = "transform-only";
    return sweep;
  }
};

}  // namespace

TEST_CASE("a single-level grid produces one clean row") {
  MiniHarness h;
  const RobustnessReport report =
      run_sweep(h.records, h.artifacts, h.text_sweep({0.0}), h.schema,
                h.captioner, h.client);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].drop_ratio == 0.0);
  CHECK(report.rows[0].accuracy == report.clean_accuracy);
  CHECK(report.rows[0].n == 40);
  CHECK(!report.surrogate_image);
}

TEST_CASE("level-0 accuracy equals independently computed clean accuracy") {
  MiniHarness h;
  std::vector<int> predictions;
  std::vector<int> labels;
  for (const auto& record : h.records) {
    const AlignedText aligned = run_pipeline(record, h.schema, h.captioner,
                                             h.artifacts.pipeline, h.client);
    predictions.push_back(
        predict(h.artifacts.model,
                featurize(aligned.final_text, h.artifacts.featurizer))
            .label);
    labels.push_back(record.label);
  }
  const double clean = accuracy(predictions, labels);

  const RobustnessReport report =
      run_sweep(h.records, h.artifacts, h.text_sweep({0.0, 0.3}), h.schema,
                h.captioner, h.client);
  CHECK(report.clean_accuracy == clean);  // exact, not approximate
  CHECK(report.rows[0].accuracy == clean);
}

TEST_CASE("text level 1 equals a pipeline fed empty raw text") {
  MiniHarness h;
  const RobustnessReport report =
      run_sweep(h.records, h.artifacts, h.text_sweep({0.0, 1.0}), h.schema,
                h.captioner, h.client);

  std::vector<int> predictions;
  std::vector<int> labels;
  for (MultimodalRecord record : h.records) {
    record.text.clear();
    const AlignedText aligned = run_pipeline(record, h.schema, h.captioner,
                                             h.artifacts.pipeline, h.client);
    predictions.push_back(
        predict(h.artifacts.model,
                featurize(aligned.final_text, h.artifacts.featurizer))
            .label);
    labels.push_back(record.label);
  }
  CHECK(report.rows[1].accuracy == accuracy(predictions, labels));
}

TEST_CASE("reports are identical across worker counts") {
  MiniHarness h;
  const SweepConfig sweep = h.text_sweep({0.0, 0.3, 0.7});
  SweepOptions serial;
  serial.jobs = 1;
  SweepOptions parallel;
  parallel.jobs = 8;
  const auto a = run_sweep(h.records, h.artifacts, sweep, h.schema,
                           h.captioner, h.client, serial);
  const auto b = run_sweep(h.records, h.artifacts, sweep, h.schema,
                           h.captioner, h.client, parallel);
  CHECK(report_to_json_text(a) == report_to_json_text(b));
}

TEST_CASE("repetition accuracy is the mean of per-seed accuracies") {
  MiniHarness h;
  SweepConfig twice = h.text_sweep({0.0, 0.4});
  twice.repetitions = 2;
  const auto combined = run_sweep(h.records, h.artifacts, twice, h.schema,
                                  h.captioner, h.client);

  SweepConfig first = h.text_sweep({0.0, 0.4});
  first.base_seed = twice.base_seed;
  SweepConfig second = h.text_sweep({0.0, 0.4});
  second.base_seed = twice.base_seed + 1;
  const auto rep0 = run_sweep(h.records, h.artifacts, first, h.schema,
                              h.captioner, h.client);
  const auto rep1 = run_sweep(h.records, h.artifacts, second, h.schema,
                              h.captioner, h.client);
  const double mean =
      (rep0.rows[1].accuracy + rep1.rows[1].accuracy) / 2.0;
  CHECK(combined.rows[1].accuracy == doctest::Approx(mean).epsilon(1e-12));
  CHECK(combined.rows[0].drop_ratio == 0.0);
}

TEST_CASE("image levels mark the surrogate channel") {
  MiniHarness h;
  SweepConfig sweep;
  sweep.name = "image";
  sweep.target = SweepTarget::image;
  sweep.grids.emplace(Modality::image,
                      make_level_grid(Modality::image, {0.0, 0.5}));
  sweep.base_seed = 1;
  const auto report = run_sweep(h.records, h.artifacts, sweep, h.schema,
                                h.captioner, h.client);
  CHECK(report.surrogate_image);  // precomputed captioner, nonzero levels
  CHECK(report.target == "image");
}

TEST_CASE("all-modality sweeps pair grids pointwise and stay in range") {
  MiniHarness h;
  SweepConfig sweep;
  sweep.name = "all";
  sweep.target = SweepTarget::all;
  sweep.grids.emplace(Modality::image,
                      make_level_grid(Modality::image, {0.0, 0.5, 0.9}));
  sweep.grids.emplace(Modality::text,
                      make_level_grid(Modality::text, {0.0, 0.3, 0.5}));
  sweep.grids.emplace(Modality::table,
                      make_level_grid(Modality::table, {0.0, 0.5, 0.9}));
  sweep.base_seed = 2;
  const auto report = run_sweep(h.records, h.artifacts, sweep, h.schema,
                                h.captioner, h.client);
  REQUIRE(report.rows.size() == 3);
  CHECK(report.rows[0].drop_ratio == 0.0);
  for (const auto& row : report.rows) {
    CHECK(row.accuracy >= 0.0);
    CHECK(row.accuracy <= 1.0);
  }
  CHECK(report.rows[1].image_level == 0.5);
  CHECK(report.rows[1].text_level == 0.3);
  CHECK(report.rows[1].table_level == 0.5);

  SweepConfig bad = sweep;
  bad.grids.at(Modality::text) =
      make_level_grid(Modality::text, {0.0, 0.3});
  CHECK_THROWS_AS(run_sweep(h.records, h.artifacts, bad, h.schema,
                            h.captioner, h.client),
                  Error);
}

TEST_CASE("report CSV uses the declared header exactly") {
  MiniHarness h;
  const auto report = run_sweep(h.records, h.artifacts,
                                h.text_sweep({0.0, 0.5}), h.schema,
                                h.captioner, h.client);
  const std::string csv = report_to_csv_text(report);
  CHECK(csv.rfind("sweep,target,level_index,image_level,text_level,"
                  "table_level,n,accuracy,drop_ratio\n",
                  0) == 0);
  CHECK(csv.find("text__transform-only,text,0,") != std::string::npos);
}

TEST_CASE("report JSON round trips") {
  MiniHarness h;
  const auto report = run_sweep(h.records, h.artifacts,
                                h.text_sweep({0.0, 0.5}), h.schema,
                                h.captioner, h.client);
  const auto reloaded = report_from_json_text(report_to_json_text(report));
  CHECK(report_to_json_text(reloaded) == report_to_json_text(report));
}

TEST_CASE("provider failures abort with a resumable checkpoint") {
  MiniHarness h;
  std::atomic<int> calls{0};
  const int budget = static_cast<int>(h.records.size()) + 5;
  h.client.register_custom("flaky", [&](const CompletionRequest& request) {
    if (calls.fetch_add(1) >= budget) {
      throw Error(Errc::provider_error, "scripted outage");
    }
    return mock_complete(request);
  });
  TrainArtifacts artifacts = h.artifacts;
  artifacts.pipeline.enable_summarization = true;
  artifacts.pipeline.provider_id = "flaky";
  artifacts.pipeline.prompts.summarize_system = "Task tag: SUMMARIZE";
  artifacts.pipeline.prompts.summarize_user = "{SECTIONS}";

  TempDir tmp("eval_checkpoint");
  SweepOptions options;
  options.jobs = 1;
  options.checkpoint_path = tmp.path() / "checkpoint.json";
  try {
    run_sweep(h.records, artifacts, h.text_sweep({0.0, 0.5, 0.9}), h.schema,
              h.captioner, h.client, options);
    FAIL("expected ProviderError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::provider_error);
  }
  REQUIRE(std::filesystem::exists(options.checkpoint_path));
  const auto checkpoint = nlohmann::json::parse(
      read_text_file(options.checkpoint_path));
  CHECK(checkpoint.at("failed_level_index").get<int>() == 1);
  CHECK(checkpoint.at("completed_rows").size() == 1);
}

TEST_CASE("compare_configs aligns reports and flags the most robust") {
  MiniHarness h;
  const auto report = run_sweep(h.records, h.artifacts,
                                h.text_sweep({0.0, 0.5, 1.0}), h.schema,
                                h.captioner, h.client);
  const ComparisonTable single = compare_configs({report});
  CHECK(single.configs.size() == 1);
  CHECK(single.best_config == "text__transform-only");
  CHECK(single.accuracy[0].size() == report.rows.size());

  const ComparisonTable twin = compare_configs({report, report});
  for (std::size_t i = 0; i < twin.levels.size(); ++i) {
    CHECK(twin.accuracy[0][i] == twin.accuracy[1][i]);
    CHECK(twin.drop[0][i] == twin.drop[1][i]);
  }

  RobustnessReport other = report;
  other.rows.pop_back();
  CHECK_THROWS_AS(compare_configs({report, other}), Error);

  RobustnessReport shifted = report;
  shifted.rows[1].text_level = 0.25;
  CHECK_THROWS_AS(compare_configs({report, shifted}), Error);
}

TEST_CASE("synthetic text sweep matches the recorded golden vector") {
  const auto schema = load_schema(data_dir() / "schemas" / "synthetic.json");
  const auto records = load_dataset(
      data_dir() / "synthetic" / "synthetic.csv", schema,
      data_dir() / "synthetic" / "synthetic_captions.jsonl");
  const DatasetSplit split = split_dataset(records, 0.8, 42);

  LlmClient client;
  ProviderProfile mock;
  mock.id = "mock";
  mock.kind = ProviderProfile::Kind::mock;
  client.register_profile(mock);
  const Captioner captioner = make_precomputed_captioner(records);

  PipelineConfig pipeline;
  pipeline.name = "transform-only";
  pipeline.enable_summarization = false;
  pipeline.enable_reasoning = false;
  pipeline.provider_id = "mock";
  pipeline.label_cardinality = 2;

  FeaturizerConfig featurizer{};
  std::vector<SparseVector> features;
  std::vector<int> labels;
  for (const auto& record : split.train) {
    const AlignedText aligned =
        run_pipeline(record, schema, captioner, pipeline, client);
    features.push_back(featurize(aligned.final_text, featurizer));
    labels.push_back(record.label);
  }
  TrainConfig train_config;
  train_config.epochs = 5;
  train_config.seed = 7;
  const TrainArtifacts artifacts{
      train(features, labels, 2, train_config).model, featurizer, pipeline};

  SweepConfig sweep;
  sweep.name = "text";
  sweep.target = SweepTarget::text;
  sweep.grids.emplace(
      Modality::text,
      make_level_grid(Modality::text, {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}));
  sweep.base_seed = 42;
  sweep.pipeline = "transform-only";
  SweepOptions options;
  options.jobs = 4;
  const auto report = run_sweep(split.test, artifacts, sweep, schema,
                                captioner, client, options);

  const auto golden = nlohmann::json::parse(
      read_text_file(golden_dir() / "sweep_accuracy.json"));
  const auto expected = golden.at("accuracy").get<std::vector<double>>();
  REQUIRE(report.rows.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(report.rows[i].accuracy == expected[i]);
  }
}
