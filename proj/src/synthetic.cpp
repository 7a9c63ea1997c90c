// Copyright 2026 The ldprepr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ldprepr/synthetic.hpp"

#include <vector>

#include "ldprepr/error.hpp"
#include "ldprepr/rng.hpp"

namespace ldprepr {
namespace {

constexpr std::uint64_t kVocabularyStream = 1;
constexpr std::uint64_t kSentenceStream = 2;
constexpr int kNeutral = -1;

}  // namespace

EmbeddingDataset MakeSyntheticDataset(const SyntheticSpec& spec) {
  if (spec.records == 0 || spec.dim < 2 || spec.classes < 2 ||
      spec.vocabulary < spec.classes || spec.min_words == 0 ||
      spec.max_words < spec.min_words) {
    Fail(ErrorCode::kParameter, "invalid synthetic dataset spec");
  }
  if (spec.own_class_share + spec.other_class_share > 1.0) {
    Fail(ErrorCode::kParameter, "word shares exceed 1");
  }

  Rng vocab_rng(RngSeed{spec.seed, kVocabularyStream});
  // One +-1 direction per class; for two classes the second mirrors the
  // first.
  std::vector<std::vector<double>> directions(spec.classes,
                                              std::vector<double>(spec.dim));
  for (std::size_t c = 0; c < spec.classes; ++c) {
    for (std::size_t d = 0; d < spec.dim; ++d) {
      directions[c][d] = (spec.classes == 2 && c == 1)
                             ? -directions[0][d]
                             : (vocab_rng.Bernoulli(0.5) ? 1.0 : -1.0);
    }
  }

  std::vector<std::vector<double>> words(spec.vocabulary,
                                         std::vector<double>(spec.dim));
  std::vector<int> lean(spec.vocabulary, kNeutral);
  std::vector<std::vector<std::size_t>> by_class(spec.classes);
  std::vector<std::size_t> neutral;
  for (std::size_t w = 0; w < spec.vocabulary; ++w) {
    if (vocab_rng.Bernoulli(spec.polar_fraction)) {
      lean[w] = static_cast<int>(vocab_rng.Below(spec.classes));
      by_class[static_cast<std::size_t>(lean[w])].push_back(w);
    } else {
      neutral.push_back(w);
    }
    for (std::size_t d = 0; d < spec.dim; ++d) {
      words[w][d] = vocab_rng.Normal();
      if (lean[w] != kNeutral) {
        words[w][d] +=
            spec.signal * directions[static_cast<std::size_t>(lean[w])][d];
      }
    }
  }
  for (const auto& pool : by_class) {
    if (pool.empty()) {
      Fail(ErrorCode::kParameter, "vocabulary too small for every class");
    }
  }
  if (neutral.empty()) neutral.push_back(0);

  EmbeddingDataset data;
  data.dim = spec.dim;
  data.classes = spec.classes;
  data.records.reserve(spec.records);
  Rng sentence_rng(RngSeed{spec.seed, kSentenceStream});
  const auto draw = [&sentence_rng](const std::vector<std::size_t>& pool) {
    return pool[sentence_rng.Below(pool.size())];
  };
  for (std::size_t i = 0; i < spec.records; ++i) {
    const std::size_t label = i % spec.classes;
    const std::size_t length =
        spec.min_words +
        sentence_rng.Below(spec.max_words - spec.min_words + 1);
    std::vector<double> pooled(spec.dim, 0.0);
    for (std::size_t k = 0; k < length; ++k) {
      const double u = sentence_rng.Uniform01();
      std::size_t word;
      if (u < spec.own_class_share) {
        word = draw(by_class[label]);
      } else if (u < spec.own_class_share + spec.other_class_share) {
        const std::size_t other =
            (label + 1 + sentence_rng.Below(spec.classes - 1)) % spec.classes;
        word = draw(by_class[other]);
      } else {
        word = draw(neutral);
      }
      for (std::size_t d = 0; d < spec.dim; ++d) pooled[d] += words[word][d];
    }
    for (double& v : pooled) v /= static_cast<double>(length);
    data.records.push_back(EmbeddingVector{static_cast<int>(label), pooled});
  }
  return data;
}

}  // namespace ldprepr
