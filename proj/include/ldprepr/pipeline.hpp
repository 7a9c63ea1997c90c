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

#ifndef LDPREPR_PIPELINE_HPP_
#define LDPREPR_PIPELINE_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ldprepr/bit_vector.hpp"
#include "ldprepr/codec.hpp"
#include "ldprepr/ldp.hpp"
#include "ldprepr/mlp.hpp"
#include "ldprepr/rng.hpp"

namespace ldprepr {

// ---------------------------------------------------------------------------
// File formats
//
// Embedding file:  "#emb dim=<r> classes=<C>" then "<label>\t<v1>,...,<vr>"
// Bit file:        "#bits len=<rl> classes=<C>" then "<label>\t<0101...>"
// Both are UTF-8 with LF line endings; labels lie in [0, C).
// ---------------------------------------------------------------------------

struct EmbeddingDataset {
  std::size_t dim = 0;
  std::size_t classes = 0;
  std::vector<EmbeddingVector> records;
};

struct BitDataset {
  std::size_t length = 0;
  std::size_t classes = 0;
  std::vector<BitVector> records;
};

// Parse errors (kParse) name the source and 1-based line number.
EmbeddingDataset ParseEmbeddings(std::istream& in, std::string_view source);
EmbeddingDataset LoadEmbeddings(const std::string& path);
void WriteEmbeddings(std::ostream& out, const EmbeddingDataset& data);
void SaveEmbeddings(const std::string& path, const EmbeddingDataset& data);

BitDataset ParseBits(std::istream& in, std::string_view source);
BitDataset LoadBits(const std::string& path);
void WriteBits(std::ostream& out, const BitDataset& data);
void SaveBits(const std::string& path, const BitDataset& data);

// Shortest decimal text that parses back to exactly `value`.
std::string FormatDouble(double value);

// ---------------------------------------------------------------------------
// Split
// ---------------------------------------------------------------------------

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Seeded uniform shuffle; the first floor(n * ratio) indices train, the rest
// test. Throws kParameter if n < 2 or ratio is outside (0, 1).
SplitIndices MakeSplit(std::size_t n, double ratio, RngSeed seed);

template <typename Record>
std::pair<std::vector<Record>, std::vector<Record>> Split(
    std::span<const Record> records, double ratio, RngSeed seed) {
  const SplitIndices idx = MakeSplit(records.size(), ratio, seed);
  std::pair<std::vector<Record>, std::vector<Record>> out;
  out.first.reserve(idx.train.size());
  out.second.reserve(idx.test.size());
  for (const std::size_t i : idx.train) out.first.push_back(records[i]);
  for (const std::size_t i : idx.test) out.second.push_back(records[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

enum class Mode { kNpnn, kLdpnn };
// What the non-private baseline consumes.
enum class NpnnInput { kRealEmbedding, kCleanBits };

std::string_view ModeName(Mode mode);
Mode ParseMode(std::string_view text);

struct ExperimentConfig {
  Mode mode = Mode::kLdpnn;
  Protocol protocol = Protocol::kOme;
  NpnnInput npnn_input = NpnnInput::kRealEmbedding;
  double epsilon = 1.0;
  double lambda = 100.0;
  int integer_bits = 4;
  int fraction_bits = 5;
  // Delta f for the SUE/OUE baselines; 0 means 2r.
  std::size_t delta_f = 0;
  // input_dim and num_classes are resolved from the data.
  MlpConfig mlp;
  double split_ratio = 0.8;
  std::size_t runs = 20;
  std::uint64_t base_seed = 0;
  std::size_t threads = 1;
  std::string input_path;
  std::string output_path;

  // Throws kParameter on an invalid field.
  void Validate() const;
};

// Flat "key = value" text; '#' starts a comment. Unknown keys throw kParse.
ExperimentConfig ParseExperimentConfig(std::istream& in,
                                       std::string_view source);
ExperimentConfig LoadExperimentConfig(const std::string& path);
// Applies one key/value pair; the same keys ParseExperimentConfig accepts.
void SetConfigValue(ExperimentConfig& config, std::string_view key,
                    std::string_view value);
// Canonical echo of every field, in a fixed order.
std::vector<std::pair<std::string, std::string>> ConfigEntries(
    const ExperimentConfig& config);

// Resolved randomization probabilities for the chosen protocol.
struct ResolvedProbabilities {
  Protocol protocol = Protocol::kOme;
  std::size_t sensitivity = 0;
  double p1 = 0.0;
  double p2 = 0.0;
  double q = 0.0;
};

struct Report {
  ExperimentConfig config;
  std::size_t dim = 0;
  std::size_t classes = 0;
  std::size_t records = 0;
  std::vector<double> accuracies;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // population standard deviation
  std::optional<ResolvedProbabilities> probabilities;
  // One entry per run: the representations handed to the classifier.
  std::vector<std::string> model_inputs;
  double wall_clock_seconds = 0.0;
};

double Mean(std::span<const double> values);
double PopulationStdDev(std::span<const double> values);

// Per-run representation for both train and test sets. In LDPNN mode the
// clean codes never leave this function.
struct RunData {
  LabeledData train;
  LabeledData test;
};

RunData PrepareRun(const ExperimentConfig& config,
                   const EmbeddingDataset& dataset, std::size_t run);

Report RunExperiment(const ExperimentConfig& config,
                     const EmbeddingDataset& dataset);
// Loads config.input_path and, if config.output_path is set, writes the
// report there.
Report RunExperiment(const ExperimentConfig& config);

// "key = value" lines. The wall clock is the last line.
std::string FormatReport(const Report& report);
void SaveReport(const std::string& path, const Report& report);

// Seeds used inside one run. Each record stream hashes the run seed with the
// record's index in the input file.
std::uint64_t RunSeed(std::uint64_t base_seed, std::size_t run);
RngSeed RecordStream(std::uint64_t run_seed, std::size_t record_index);

// Encodes and perturbs every record with the configured protocol. `run_seed`
// feeds RecordStream.
std::vector<BitVector> RandomizeRecords(std::span<const EmbeddingVector> records,
                                        const std::vector<std::size_t>& indices,
                                        const ExperimentConfig& config,
                                        const CodecLayout& layout,
                                        std::uint64_t run_seed);

ResolvedProbabilities ResolveProbabilities(const ExperimentConfig& config,
                                           const CodecLayout& layout);

// ---------------------------------------------------------------------------
// Probability curves
// ---------------------------------------------------------------------------

struct CurveRow {
  Protocol protocol = Protocol::kOme;
  double epsilon = 0.0;
  std::optional<double> lambda;  // OME only
  double p1 = 0.0;
  double p2 = 0.0;
  double q = 0.0;
};

// OME rows for every (lambda, epsilon) pair with sensitivity r*l; SUE/OUE
// rows for every epsilon with Delta f = 2r (p1 = p2 = p).
std::vector<CurveRow> ProbabilityCurves(std::span<const Protocol> protocols,
                                        std::span<const double> epsilons,
                                        std::span<const double> lambdas,
                                        std::size_t r, std::size_t l);

// Tab-separated, header "protocol\tepsilon\tlambda\tp1\tp2\tq"; lambda is
// "-" on SUE/OUE rows.
void WriteCurves(std::ostream& out, std::span<const CurveRow> rows);
void SaveCurves(const std::string& path, std::span<const CurveRow> rows);

}  // namespace ldprepr

#endif  // LDPREPR_PIPELINE_HPP_
