// Copyright 2026 The lingeo Authors
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

#include "lingeo/diffusion.hpp"
#include "lingeo/evaluate.hpp"
#include "lingeo/geometry.hpp"
#include "lingeo/reduce.hpp"
#include "lingeo_synth/synth.hpp"

using namespace lingeo;

namespace {

const corpus::DocumentMatrix& topical_docs() {
  static const corpus::DocumentMatrix docs = [] {
    const auto data = synth::make_topical(synth::TopicalParams{});
    return corpus::build_document_matrix(data.corpus.visualization, corpus::PreprocessConfig{}, {});
  }();
  return docs;
}

void BM_ContextualDistributions(benchmark::State& state) {
  const auto& docs = topical_docs();
  for (auto _ : state) benchmark::DoNotOptimize(diffusion::contextual_distributions(docs.counts));
}
BENCHMARK(BM_ContextualDistributions)->Unit(benchmark::kMillisecond);

void BM_DiffusionKernel(benchmark::State& state) {
  const auto table = diffusion::contextual_distributions(topical_docs().counts);
  for (auto _ : state) benchmark::DoNotOptimize(diffusion::diffusion_kernel(table, {1.0}));
  state.counters["words"] = static_cast<double>(table.size());
}
BENCHMARK(BM_DiffusionKernel)->Unit(benchmark::kMillisecond);

void BM_DiffusionGeometry(benchmark::State& state) {
  const auto table = diffusion::contextual_distributions(topical_docs().counts);
  for (auto _ : state) {
    benchmark::DoNotOptimize(diffusion::diffusion_geometry(table, {1.0}, geometry::Provenance::diffusion));
  }
}
BENCHMARK(BM_DiffusionGeometry)->Unit(benchmark::kMillisecond);

void BM_Transform(benchmark::State& state) {
  const auto& docs = topical_docs();
  const auto H = diffusion::diffusion_geometry(diffusion::contextual_distributions(docs.counts), {1.0},
                                               geometry::Provenance::diffusion);
  for (auto _ : state) benchmark::DoNotOptimize(geometry::transform(H, docs.counts));
}
BENCHMARK(BM_Transform)->Unit(benchmark::kMillisecond);

void BM_Pca(benchmark::State& state) {
  const auto& docs = topical_docs();
  const reduce::PointCloud cloud{geometry::transform(geometry::identity_transform(docs.counts.vocab.size()), docs.counts),
                                 docs.counts.ids};
  for (auto _ : state) benchmark::DoNotOptimize(reduce::pca(cloud));
}
BENCHMARK(BM_Pca)->Unit(benchmark::kMillisecond);

void BM_Tsne(benchmark::State& state) {
  const auto& docs = topical_docs();
  const reduce::PointCloud cloud{geometry::transform(geometry::identity_transform(docs.counts.vocab.size()), docs.counts),
                                 docs.counts.ids};
  reduce::TsneConfig cfg;
  cfg.iterations = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reduce::tsne(cloud, cfg));
}
BENCHMARK(BM_Tsne)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_KnnAccuracy(benchmark::State& state) {
  const auto& docs = topical_docs();
  const reduce::PointCloud cloud{geometry::transform(geometry::identity_transform(docs.counts.vocab.size()), docs.counts),
                                 docs.counts.ids};
  const evaluate::LabeledEmbedding emb(reduce::pca(cloud).coords, *docs.labels);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate::knn_accuracy(emb, 5));
}
BENCHMARK(BM_KnnAccuracy)->Unit(benchmark::kMicrosecond);

}  // namespace
