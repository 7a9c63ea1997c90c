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

#include "ldprepr/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ldprepr/error.hpp"

namespace ldprepr {
namespace {

constexpr std::uint64_t kDropoutStream = 0xd0d0;
constexpr std::size_t kPredictChunk = 256;

Matrix GlorotUniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double bound =
      std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Matrix w(fan_in, fan_out);
  // Row-major fill order keeps the stream layout independent of Eigen's
  // storage order.
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      w(i, j) = rng.Uniform(-bound, bound);
    }
  }
  return w;
}

// Row-wise softmax of `logits`, in place, shifted by the row max.
void SoftmaxRows(Matrix& logits) {
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    auto row = logits.row(i);
    row.array() -= row.maxCoeff();
    row = row.array().exp().matrix();
    row /= row.sum();
  }
}

Eigen::Index ArgMax(const Eigen::Ref<const RowVector>& row) {
  Eigen::Index best = 0;
  row.maxCoeff(&best);
  return best;
}

void CheckLabels(std::span<const int> labels, std::size_t num_classes) {
  for (const int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes) {
      Fail(ErrorCode::kParameter,
           "label " + std::to_string(y) + " outside [0, " +
               std::to_string(num_classes) + ")");
    }
  }
}

Matrix GatherRows(const Matrix& source, std::span<const std::size_t> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), source.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) =
        source.row(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

}  // namespace

std::string_view RepresentationName(Representation kind) {
  switch (kind) {
    case Representation::kRealEmbedding:
      return "real_embedding";
    case Representation::kCleanBits:
      return "clean_bits";
    case Representation::kPerturbedBits:
      return "perturbed_bits";
  }
  return "?";
}

LabeledData FeaturesFromEmbeddings(std::span<const EmbeddingVector> records) {
  LabeledData data;
  data.kind = Representation::kRealEmbedding;
  if (records.empty()) return data;
  const std::size_t width = records.front().values.size();
  data.features.resize(static_cast<Eigen::Index>(records.size()),
                       static_cast<Eigen::Index>(width));
  data.labels.reserve(records.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (records[r].values.size() != width) {
      Fail(ErrorCode::kShape, "embedding records have inconsistent widths");
    }
    const std::vector<double> z = ZScoreNormalize(records[r].values);
    for (std::size_t c = 0; c < width; ++c) {
      data.features(static_cast<Eigen::Index>(r),
                    static_cast<Eigen::Index>(c)) = z[c];
    }
    data.labels.push_back(records[r].label);
  }
  return data;
}

LabeledData FeaturesFromBits(std::span<const BitVector> records,
                             Representation kind) {
  if (kind == Representation::kRealEmbedding) {
    Fail(ErrorCode::kParameter, "bit features cannot be tagged as embeddings");
  }
  LabeledData data;
  data.kind = kind;
  if (records.empty()) return data;
  const std::size_t width = records.front().bits.size();
  data.features.resize(static_cast<Eigen::Index>(records.size()),
                       static_cast<Eigen::Index>(width));
  data.labels.reserve(records.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (records[r].bits.size() != width) {
      Fail(ErrorCode::kShape, "bit records have inconsistent lengths");
    }
    for (std::size_t c = 0; c < width; ++c) {
      data.features(static_cast<Eigen::Index>(r),
                    static_cast<Eigen::Index>(c)) =
          records[r].bits.get(c) ? 1.0 : 0.0;
    }
    data.labels.push_back(records[r].label);
  }
  return data;
}

void MlpConfig::Validate() const {
  if (input_dim < 1 || hidden_units < 1 || num_classes < 1 ||
      batch_size < 1) {
    Fail(ErrorCode::kParameter,
         "input_dim, hidden_units, num_classes and batch_size must be >= 1");
  }
  const auto rate_ok = [](double r) { return r >= 0.0 && r < 1.0; };
  if (!rate_ok(dropout_rate) || !rate_ok(momentum) || !rate_ok(decay)) {
    Fail(ErrorCode::kParameter,
         "dropout_rate, momentum and decay must lie in [0, 1)");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    Fail(ErrorCode::kParameter, "learning_rate must be positive");
  }
}

MlpModel::MlpModel(const MlpConfig& config, RngSeed seed)
    : config_(config),
      dropout_rng_(RngSeed{seed.seed, DeriveSeed(seed.stream, kDropoutStream)}) {
  config_.Validate();
  Rng init(seed);
  w1 = GlorotUniform(config_.input_dim, config_.hidden_units, init);
  b1 = RowVector::Zero(static_cast<Eigen::Index>(config_.hidden_units));
  w2 = GlorotUniform(config_.hidden_units, config_.num_classes, init);
  b2 = RowVector::Zero(static_cast<Eigen::Index>(config_.num_classes));
  velocity_w1_ = Matrix::Zero(w1.rows(), w1.cols());
  velocity_b1_ = RowVector::Zero(b1.size());
  velocity_w2_ = Matrix::Zero(w2.rows(), w2.cols());
  velocity_b2_ = RowVector::Zero(b2.size());
}

void MlpModel::CheckWidth(const Matrix& batch) const {
  if (static_cast<std::size_t>(batch.cols()) != config_.input_dim) {
    Fail(ErrorCode::kShape, "batch has " + std::to_string(batch.cols()) +
                                " features, model expects " +
                                std::to_string(config_.input_dim));
  }
}

Matrix MlpModel::Predict(const Matrix& batch) const {
  CheckWidth(batch);
  Matrix hidden = ((batch * w1).rowwise() + b1).cwiseMax(0.0);
  Matrix logits = (hidden * w2).rowwise() + b2;
  SoftmaxRows(logits);
  return logits;
}

Matrix MlpModel::Forward(const Matrix& batch, bool train_mode) {
  if (!train_mode || config_.dropout_rate == 0.0) return Predict(batch);
  CheckWidth(batch);
  Matrix dropped = batch;
  ApplyDropout(dropped);
  return Predict(dropped);
}

void MlpModel::ApplyDropout(Matrix& batch) {
  const double rate = config_.dropout_rate;
  if (rate == 0.0) return;
  const double scale = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < batch.rows(); ++i) {
    for (Eigen::Index j = 0; j < batch.cols(); ++j) {
      batch(i, j) = dropout_rng_.Bernoulli(rate) ? 0.0 : batch(i, j) * scale;
    }
  }
}

double MlpModel::Loss(const Matrix& batch, std::span<const int> labels) const {
  const Matrix probs = Predict(batch);
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    total -= std::log(probs(static_cast<Eigen::Index>(i), labels[i]));
  }
  return total / static_cast<double>(labels.size());
}

LossAndGradients MlpModel::ComputeGradients(const Matrix& batch,
                                            std::span<const int> labels) const {
  CheckWidth(batch);
  if (static_cast<std::size_t>(batch.rows()) != labels.size() ||
      labels.empty()) {
    Fail(ErrorCode::kShape, "batch rows and labels disagree");
  }
  const double n = static_cast<double>(labels.size());
  const Matrix pre = (batch * w1).rowwise() + b1;
  const Matrix hidden = pre.cwiseMax(0.0);
  Matrix probs = (hidden * w2).rowwise() + b2;
  SoftmaxRows(probs);

  LossAndGradients out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    if (ArgMax(probs.row(row)) == labels[i]) ++out.correct;
    out.loss -= std::log(probs(row, labels[i]));
    probs(row, labels[i]) -= 1.0;
  }
  out.loss /= n;
  const Matrix d_logits = probs / n;

  Gradients& g = out.gradients;
  g.w2.noalias() = hidden.transpose() * d_logits;
  g.b2 = d_logits.colwise().sum();
  const Matrix d_hidden =
      (d_logits * w2.transpose()).cwiseProduct(
          (pre.array() > 0.0).cast<double>().matrix());
  g.w1.noalias() = batch.transpose() * d_hidden;
  g.b1 = d_hidden.colwise().sum();
  return out;
}

void MlpModel::ApplyUpdate(const Gradients& g, double rate, double momentum) {
  velocity_w1_ = momentum * velocity_w1_ - rate * g.w1;
  velocity_b1_ = momentum * velocity_b1_ - rate * g.b1;
  velocity_w2_ = momentum * velocity_w2_ - rate * g.w2;
  velocity_b2_ = momentum * velocity_b2_ - rate * g.b2;
  w1 += velocity_w1_;
  b1 += velocity_b1_;
  w2 += velocity_w2_;
  b2 += velocity_b2_;
  ++updates_;
}

std::vector<std::size_t> ShuffledIndices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng.Below(i)]);
  }
  return order;
}

TrainHistory Train(MlpModel& model, const LabeledData& data,
                   const MlpConfig& config, RngSeed seed) {
  config.Validate();
  if (data.size() == 0) Fail(ErrorCode::kParameter, "training data is empty");
  const MlpConfig& shape = model.config();
  if (config.input_dim != shape.input_dim ||
      config.hidden_units != shape.hidden_units ||
      config.num_classes != shape.num_classes) {
    Fail(ErrorCode::kParameter, "training config does not match model shape");
  }
  if (data.width() != shape.input_dim) {
    Fail(ErrorCode::kShape, "training data has " +
                                std::to_string(data.width()) +
                                " features, model expects " +
                                std::to_string(shape.input_dim));
  }
  CheckLabels(data.labels, shape.num_classes);

  model.ReseedDropout(RngSeed{seed.seed, DeriveSeed(seed.stream, kDropoutStream)});
  TrainHistory history;
  const std::size_t n = data.size();
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    Rng shuffle_rng(RngSeed{seed.seed, DeriveSeed(seed.stream, epoch)});
    const std::vector<std::size_t> order = ShuffledIndices(n, shuffle_rng);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t stop = std::min(n, start + config.batch_size);
      const std::span<const std::size_t> rows(order.data() + start,
                                              stop - start);
      Matrix batch = GatherRows(data.features, rows);
      std::vector<int> labels;
      labels.reserve(rows.size());
      for (const std::size_t r : rows) labels.push_back(data.labels[r]);

      if (config.dropout_rate > 0.0) model.ApplyDropout(batch);
      const LossAndGradients step = model.ComputeGradients(batch, labels);
      if (!std::isfinite(step.loss)) {
        Fail(ErrorCode::kDivergence,
             "training loss became non-finite in epoch " +
                 std::to_string(epoch));
      }
      correct += step.correct;
      loss_sum += step.loss * static_cast<double>(rows.size());

      const double rate =
          config.learning_rate /
          (1.0 + config.decay * static_cast<double>(model.updates()));
      model.ApplyUpdate(step.gradients, rate, config.momentum);
    }
    history.loss.push_back(loss_sum / static_cast<double>(n));
    history.accuracy.push_back(static_cast<double>(correct) /
                               static_cast<double>(n));
  }
  return history;
}

double Evaluate(const MlpModel& model, const LabeledData& data) {
  if (data.size() == 0) Fail(ErrorCode::kParameter, "evaluation data is empty");
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  std::size_t correct = 0;
  for (Eigen::Index start = 0; start < n;
       start += static_cast<Eigen::Index>(kPredictChunk)) {
    const Eigen::Index rows =
        std::min<Eigen::Index>(static_cast<Eigen::Index>(kPredictChunk),
                               n - start);
    const Matrix probs = model.Predict(data.features.middleRows(start, rows));
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (ArgMax(probs.row(i)) == data.labels[static_cast<std::size_t>(start + i)]) {
        ++correct;
      }
    }
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

}  // namespace ldprepr
