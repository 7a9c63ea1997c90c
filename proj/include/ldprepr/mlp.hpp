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

#ifndef LDPREPR_MLP_HPP_
#define LDPREPR_MLP_HPP_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ldprepr/bit_vector.hpp"
#include "ldprepr/codec.hpp"
#include "ldprepr/rng.hpp"

namespace ldprepr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// What a feature matrix was built from. The pipeline records this for every
// matrix handed to the classifier so the trust boundary can be audited.
enum class Representation { kRealEmbedding, kCleanBits, kPerturbedBits };

std::string_view RepresentationName(Representation kind);

struct LabeledData {
  Matrix features;  // one row per record
  std::vector<int> labels;
  Representation kind = Representation::kRealEmbedding;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t width() const noexcept {
    return static_cast<std::size_t>(features.cols());
  }
};

// Rows are the z-score normalized embedding values.
LabeledData FeaturesFromEmbeddings(std::span<const EmbeddingVector> records);

// Rows are the bits as 0.0 / 1.0. `kind` must be kCleanBits or
// kPerturbedBits and is taken on the caller's word.
LabeledData FeaturesFromBits(std::span<const BitVector> records,
                             Representation kind);

struct MlpConfig {
  std::size_t input_dim = 0;
  std::size_t hidden_units = 128;
  std::size_t num_classes = 2;
  double dropout_rate = 0.5;
  double learning_rate = 0.01;
  double decay = 1e-6;
  double momentum = 0.9;
  std::size_t batch_size = 32;
  std::size_t epochs = 50;

  // Throws kParameter on any count < 1 (epochs may be 0), a rate outside
  // [0, 1) or a non-positive learning rate.
  void Validate() const;
};

struct Gradients {
  Matrix w1;
  RowVector b1;
  Matrix w2;
  RowVector b2;
};

struct LossAndGradients {
  double loss = 0.0;  // mean cross-entropy over the batch
  std::size_t correct = 0;  // rows whose argmax matches the label
  Gradients gradients;
};

// One hidden ReLU layer and a softmax output. Dropout, when active, acts on
// the input representation with inverted scaling.
class MlpModel {
 public:
  // Glorot-uniform weights (bound sqrt(6/(fan_in+fan_out))), zero biases.
  MlpModel(const MlpConfig& config, RngSeed seed);

  const MlpConfig& config() const noexcept { return config_; }

  // Class probabilities for each row of `batch`. With train_mode and a
  // non-zero dropout rate, a fresh input mask is drawn from the model's
  // dropout stream. Throws kShape on a width mismatch.
  Matrix Forward(const Matrix& batch, bool train_mode);
  Matrix Predict(const Matrix& batch) const;

  double Loss(const Matrix& batch, std::span<const int> labels) const;
  LossAndGradients ComputeGradients(const Matrix& batch,
                                    std::span<const int> labels) const;

  // Classical momentum step: v <- momentum*v - rate*g; theta <- theta + v.
  void ApplyUpdate(const Gradients& gradients, double rate, double momentum);

  // Multiplies each entry by keep/(1-rate), keep ~ Bernoulli(1-rate).
  void ApplyDropout(Matrix& batch);

  void ReseedDropout(RngSeed seed) { dropout_rng_ = Rng(seed); }

  std::size_t updates() const noexcept { return updates_; }

  Matrix w1;
  RowVector b1;
  Matrix w2;
  RowVector b2;

 private:
  void CheckWidth(const Matrix& batch) const;

  MlpConfig config_;
  Matrix velocity_w1_;
  RowVector velocity_b1_;
  Matrix velocity_w2_;
  RowVector velocity_b2_;
  Rng dropout_rng_;
  std::size_t updates_ = 0;
};

struct TrainHistory {
  std::vector<double> loss;      // mean training cross-entropy per epoch
  std::vector<double> accuracy;  // training accuracy per epoch
};

// Mini-batch SGD with classical momentum. The rate for update t (counted
// from 0 over the model's lifetime) is learning_rate / (1 + decay * t).
// Records are reshuffled every epoch from `seed`. Throws kParameter on empty
// data, bad labels or a config that does not match the model, and
// kDivergence if the loss stops being finite.
TrainHistory Train(MlpModel& model, const LabeledData& data,
                   const MlpConfig& config, RngSeed seed);

// Top-1 accuracy with dropout disabled. Throws kParameter on empty data.
double Evaluate(const MlpModel& model, const LabeledData& data);

// Fisher-Yates shuffle of 0..n-1 driven by `rng`.
std::vector<std::size_t> ShuffledIndices(std::size_t n, Rng& rng);

}  // namespace ldprepr

#endif  // LDPREPR_MLP_HPP_
