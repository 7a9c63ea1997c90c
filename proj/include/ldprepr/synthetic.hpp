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

#ifndef LDPREPR_SYNTHETIC_HPP_
#define LDPREPR_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>

#include "ldprepr/pipeline.hpp"

namespace ldprepr {

// Sentence-like synthetic embeddings: a random vocabulary of word vectors,
// some leaning towards one class, and each record the mean of a handful of
// words drawn mostly from its own class's vocabulary. Labels cycle through
// the classes so the set is balanced.
struct SyntheticSpec {
  std::size_t records = 1000;
  std::size_t dim = 50;
  std::size_t classes = 2;
  std::size_t vocabulary = 400;
  std::size_t min_words = 8;
  std::size_t max_words = 20;
  double polar_fraction = 0.5;  // share of the vocabulary with a class lean
  double own_class_share = 0.6;
  double other_class_share = 0.15;  // the rest are neutral words
  double signal = 0.3;  // magnitude of a polar word's class shift
  std::uint64_t seed = 20200725;
};

EmbeddingDataset MakeSyntheticDataset(const SyntheticSpec& spec);

}  // namespace ldprepr

#endif  // LDPREPR_SYNTHETIC_HPP_
