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

#include "ldprepr/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <string>
#include <thread>

#include "ldprepr/error.hpp"

namespace ldprepr {
namespace {

// Stream indices under a run seed. Record streams use the record index
// directly, so these live far above any realistic dataset size.
constexpr std::uint64_t kSplitStream = 0xffff'0001;
constexpr std::uint64_t kInitStream = 0xffff'0002;
constexpr std::uint64_t kTrainStream = 0xffff'0003;
constexpr std::uint64_t kRecordDomain = 0x7265'636f'7264;  // "record"

std::string Trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  while (end > begin &&
         std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  return std::string(text.substr(begin, end - begin));
}

std::string Lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

double ToDouble(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    Fail(ErrorCode::kParse, "config key '" + std::string(key) +
                                "' expects a number, got '" +
                                std::string(text) + "'");
  }
  return value;
}

std::uint64_t ToUnsigned(std::string_view key, std::string_view text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    Fail(ErrorCode::kParse, "config key '" + std::string(key) +
                                "' expects a non-negative integer, got '" +
                                std::string(text) + "'");
  }
  return value;
}

int ToInt(std::string_view key, std::string_view text) {
  const std::uint64_t value = ToUnsigned(key, text);
  if (value > 64) {
    Fail(ErrorCode::kParse, "config key '" + std::string(key) + "' too large");
  }
  return static_cast<int>(value);
}

std::string_view NpnnInputName(NpnnInput input) {
  return input == NpnnInput::kRealEmbedding ? "real" : "clean_bits";
}

}  // namespace

std::string_view ModeName(Mode mode) {
  return mode == Mode::kNpnn ? "npnn" : "ldpnn";
}

Mode ParseMode(std::string_view text) {
  const std::string lower = Lower(text);
  if (lower == "npnn") return Mode::kNpnn;
  if (lower == "ldpnn") return Mode::kLdpnn;
  Fail(ErrorCode::kParameter,
       "unknown mode '" + std::string(text) + "' (expected npnn or ldpnn)");
}

// ---------------------------------------------------------------------------

SplitIndices MakeSplit(std::size_t n, double ratio, RngSeed seed) {
  if (n < 2) Fail(ErrorCode::kParameter, "split needs at least two records");
  if (!(ratio > 0.0 && ratio < 1.0)) {
    Fail(ErrorCode::kParameter, "split ratio must lie in (0, 1)");
  }
  Rng rng(seed);
  const std::vector<std::size_t> order = ShuffledIndices(n, rng);
  const auto train_size =
      static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio));
  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + train_size);
  out.test.assign(order.begin() + train_size, order.end());
  return out;
}

// ---------------------------------------------------------------------------

void ExperimentConfig::Validate() const {
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
    Fail(ErrorCode::kParameter, "split_ratio must lie in (0, 1)");
  }
  if (runs < 1) Fail(ErrorCode::kParameter, "runs must be >= 1");
  if (threads < 1) Fail(ErrorCode::kParameter, "threads must be >= 1");
  if (mode == Mode::kLdpnn) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
      Fail(ErrorCode::kParameter, "epsilon must be positive");
    }
    if (protocol == Protocol::kOme && !(lambda >= 1.0)) {
      Fail(ErrorCode::kParameter, "lambda must be >= 1");
    }
  }
  // Dimensions are resolved from the data; validate the rest with
  // placeholders.
  MlpConfig probe = mlp;
  probe.input_dim = 1;
  probe.num_classes = 1;
  probe.Validate();
}

void SetConfigValue(ExperimentConfig& config, std::string_view raw_key,
                    std::string_view raw_value) {
  const std::string key = Lower(Trim(raw_key));
  const std::string value = Trim(raw_value);
  if (key == "mode") {
    config.mode = ParseMode(value);
  } else if (key == "protocol") {
    config.protocol = ParseProtocol(value);
  } else if (key == "npnn_input") {
    const std::string lower = Lower(value);
    if (lower == "real") {
      config.npnn_input = NpnnInput::kRealEmbedding;
    } else if (lower == "clean_bits") {
      config.npnn_input = NpnnInput::kCleanBits;
    } else {
      Fail(ErrorCode::kParse, "npnn_input expects 'real' or 'clean_bits'");
    }
  } else if (key == "epsilon") {
    config.epsilon = ToDouble(key, value);
  } else if (key == "lambda") {
    config.lambda = ToDouble(key, value);
  } else if (key == "integer_bits" || key == "m") {
    config.integer_bits = ToInt(key, value);
  } else if (key == "fraction_bits" || key == "n") {
    config.fraction_bits = ToInt(key, value);
  } else if (key == "delta_f") {
    config.delta_f = ToUnsigned(key, value);
  } else if (key == "hidden_units") {
    config.mlp.hidden_units = ToUnsigned(key, value);
  } else if (key == "dropout_rate") {
    config.mlp.dropout_rate = ToDouble(key, value);
  } else if (key == "learning_rate") {
    config.mlp.learning_rate = ToDouble(key, value);
  } else if (key == "decay") {
    config.mlp.decay = ToDouble(key, value);
  } else if (key == "momentum") {
    config.mlp.momentum = ToDouble(key, value);
  } else if (key == "batch_size") {
    config.mlp.batch_size = ToUnsigned(key, value);
  } else if (key == "epochs") {
    config.mlp.epochs = ToUnsigned(key, value);
  } else if (key == "split_ratio") {
    config.split_ratio = ToDouble(key, value);
  } else if (key == "runs") {
    config.runs = ToUnsigned(key, value);
  } else if (key == "base_seed" || key == "seed") {
    config.base_seed = ToUnsigned(key, value);
  } else if (key == "threads") {
    config.threads = ToUnsigned(key, value);
  } else if (key == "input" || key == "input_path") {
    config.input_path = value;
  } else if (key == "output" || key == "output_path") {
    config.output_path = value;
  } else {
    Fail(ErrorCode::kParse, "unknown config key '" + key + "'");
  }
}

ExperimentConfig ParseExperimentConfig(std::istream& in,
                                       std::string_view source) {
  ExperimentConfig config;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const std::size_t hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    if (Trim(line).empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      Fail(ErrorCode::kParse, std::string(source) + ":" +
                                  std::to_string(number) +
                                  ": expected 'key = value'");
    }
    try {
      SetConfigValue(config, std::string_view(line).substr(0, eq),
                     std::string_view(line).substr(eq + 1));
    } catch (const Error& e) {
      Fail(ErrorCode::kParse, std::string(source) + ":" +
                                  std::to_string(number) + ": " + e.what());
    }
  }
  return config;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  return ParseExperimentConfig(in, path);
}

std::vector<std::pair<std::string, std::string>> ConfigEntries(
    const ExperimentConfig& c) {
  return {
      {"mode", std::string(ModeName(c.mode))},
      {"protocol", std::string(ProtocolName(c.protocol))},
      {"npnn_input", std::string(NpnnInputName(c.npnn_input))},
      {"epsilon", FormatDouble(c.epsilon)},
      {"lambda", FormatDouble(c.lambda)},
      {"integer_bits", std::to_string(c.integer_bits)},
      {"fraction_bits", std::to_string(c.fraction_bits)},
      {"delta_f", std::to_string(c.delta_f)},
      {"hidden_units", std::to_string(c.mlp.hidden_units)},
      {"dropout_rate", FormatDouble(c.mlp.dropout_rate)},
      {"learning_rate", FormatDouble(c.mlp.learning_rate)},
      {"decay", FormatDouble(c.mlp.decay)},
      {"momentum", FormatDouble(c.mlp.momentum)},
      {"batch_size", std::to_string(c.mlp.batch_size)},
      {"epochs", std::to_string(c.mlp.epochs)},
      {"split_ratio", FormatDouble(c.split_ratio)},
      {"runs", std::to_string(c.runs)},
      {"base_seed", std::to_string(c.base_seed)},
      {"input", c.input_path},
  };
}

// ---------------------------------------------------------------------------

double Mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double PopulationStdDev(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double mean = Mean(values);
  double squares = 0.0;
  for (const double v : values) squares += (v - mean) * (v - mean);
  return std::sqrt(squares / static_cast<double>(values.size()));
}

std::uint64_t RunSeed(std::uint64_t base_seed, std::size_t run) {
  return DeriveSeed(base_seed, run);
}

RngSeed RecordStream(std::uint64_t run_seed, std::size_t record_index) {
  return RngSeed{run_seed, DeriveSeed(kRecordDomain, record_index)};
}

ResolvedProbabilities ResolveProbabilities(const ExperimentConfig& config,
                                           const CodecLayout& layout) {
  ResolvedProbabilities out;
  out.protocol = config.protocol;
  if (config.protocol == Protocol::kOme) {
    const OmeParams p =
        ComputeOmeParams(config.epsilon, config.lambda, layout.total_bits());
    out.sensitivity = p.sensitivity;
    out.p1 = p.p1;
    out.p2 = p.p2;
    out.q = p.q;
    return out;
  }
  const std::size_t delta_f =
      config.delta_f != 0 ? config.delta_f : 2 * layout.elements();
  const UeParams p = config.protocol == Protocol::kSue
                         ? ComputeSueParams(config.epsilon, delta_f)
                         : ComputeOueParams(config.epsilon, delta_f);
  out.sensitivity = p.sensitivity;
  out.p1 = p.p;
  out.p2 = p.p;
  out.q = p.q;
  return out;
}

std::vector<BitVector> RandomizeRecords(std::span<const EmbeddingVector> records,
                                        const std::vector<std::size_t>& indices,
                                        const ExperimentConfig& config,
                                        const CodecLayout& layout,
                                        std::uint64_t run_seed) {
  std::vector<BitVector> out;
  out.reserve(indices.size());
  if (config.protocol == Protocol::kOme) {
    const OmeParams params =
        ComputeOmeParams(config.epsilon, config.lambda, layout.total_bits());
    for (const std::size_t i : indices) {
      out.push_back(PerturbOme(EncodeVector(records[i], layout), params,
                               RecordStream(run_seed, i)));
    }
    return out;
  }
  const std::size_t delta_f =
      config.delta_f != 0 ? config.delta_f : 2 * layout.elements();
  const UeParams params = config.protocol == Protocol::kSue
                              ? ComputeSueParams(config.epsilon, delta_f)
                              : ComputeOueParams(config.epsilon, delta_f);
  for (const std::size_t i : indices) {
    out.push_back(PerturbUe(EncodeVector(records[i], layout), params,
                            RecordStream(run_seed, i)));
  }
  return out;
}

RunData PrepareRun(const ExperimentConfig& config,
                   const EmbeddingDataset& dataset, std::size_t run) {
  const std::uint64_t run_seed = RunSeed(config.base_seed, run);
  const SplitIndices split = MakeSplit(dataset.records.size(),
                                       config.split_ratio,
                                       RngSeed{run_seed, kSplitStream});
  const std::span<const EmbeddingVector> records(dataset.records);
  const auto pick = [&](const std::vector<std::size_t>& idx) {
    std::vector<EmbeddingVector> out;
    out.reserve(idx.size());
    for (const std::size_t i : idx) out.push_back(records[i]);
    return out;
  };

  RunData data;
  if (config.mode == Mode::kNpnn) {
    if (config.npnn_input == NpnnInput::kRealEmbedding) {
      data.train = FeaturesFromEmbeddings(pick(split.train));
      data.test = FeaturesFromEmbeddings(pick(split.test));
      return data;
    }
    const CodecLayout layout(config.integer_bits, config.fraction_bits,
                             dataset.dim);
    const auto encode = [&](const std::vector<std::size_t>& idx) {
      std::vector<BitVector> bits;
      bits.reserve(idx.size());
      for (const std::size_t i : idx) {
        bits.push_back(EncodeVector(records[i], layout));
      }
      return FeaturesFromBits(bits, Representation::kCleanBits);
    };
    data.train = encode(split.train);
    data.test = encode(split.test);
    return data;
  }

  // Each user encodes and randomizes locally; only the randomized vectors
  // are turned into classifier input.
  const CodecLayout layout(config.integer_bits, config.fraction_bits,
                           dataset.dim);
  data.train = FeaturesFromBits(
      RandomizeRecords(records, split.train, config, layout, run_seed),
      Representation::kPerturbedBits);
  data.test = FeaturesFromBits(
      RandomizeRecords(records, split.test, config, layout, run_seed),
      Representation::kPerturbedBits);
  return data;
}

Report RunExperiment(const ExperimentConfig& config,
                     const EmbeddingDataset& dataset) {
  const auto start = std::chrono::steady_clock::now();
  config.Validate();
  if (dataset.records.empty()) {
    Fail(ErrorCode::kParameter, "dataset is empty");
  }

  Report report;
  report.config = config;
  report.dim = dataset.dim;
  report.classes = dataset.classes;
  report.records = dataset.records.size();
  if (config.mode == Mode::kLdpnn) {
    const CodecLayout layout(config.integer_bits, config.fraction_bits,
                             dataset.dim);
    report.probabilities = ResolveProbabilities(config, layout);
  }

  report.accuracies.assign(config.runs, 0.0);
  report.model_inputs.assign(config.runs, "");

  const auto execute = [&](std::size_t run) {
    try {
      const RunData data = PrepareRun(config, dataset, run);
      const std::uint64_t run_seed = RunSeed(config.base_seed, run);
      MlpConfig mlp = config.mlp;
      mlp.input_dim = data.train.width();
      mlp.num_classes = dataset.classes;
      MlpModel model(mlp, RngSeed{run_seed, kInitStream});
      Train(model, data.train, mlp, RngSeed{run_seed, kTrainStream});
      report.accuracies[run] = Evaluate(model, data.test);
      report.model_inputs[run] =
          "train:" + std::string(RepresentationName(data.train.kind)) +
          " test:" + std::string(RepresentationName(data.test.kind));
    } catch (const Error& e) {
      throw Error(e.code(), "run " + std::to_string(run) + ": " + e.what());
    }
  };

  if (config.threads <= 1 || config.runs == 1) {
    for (std::size_t run = 0; run < config.runs; ++run) execute(run);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> workers;
    const std::size_t count = std::min(config.threads, config.runs);
    for (std::size_t t = 0; t < count; ++t) {
      workers.emplace_back([&] {
        for (std::size_t run = next++; run < config.runs; run = next++) {
          try {
            execute(run);
          } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    workers.clear();
    if (failure) std::rethrow_exception(failure);
  }

  report.mean_accuracy = Mean(report.accuracies);
  report.std_accuracy = PopulationStdDev(report.accuracies);
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

Report RunExperiment(const ExperimentConfig& config) {
  if (config.input_path.empty()) {
    Fail(ErrorCode::kParameter, "experiment config has no input path");
  }
  const EmbeddingDataset dataset = LoadEmbeddings(config.input_path);
  Report report = RunExperiment(config, dataset);
  if (!config.output_path.empty()) SaveReport(config.output_path, report);
  return report;
}

}  // namespace ldprepr
