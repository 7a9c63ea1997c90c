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

#include "ldprepr/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ldprepr/codec.hpp"
#include "ldprepr/error.hpp"
#include "ldprepr/ldp.hpp"
#include "ldprepr/mlp.hpp"
#include "ldprepr/pipeline.hpp"
#include "ldprepr/synthetic.hpp"

namespace ldprepr {
namespace {

constexpr const char* kSeedEnv = "LDPREPR_SEED";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::optional<std::uint64_t> SeedFromEnvironment() {
  const char* text = std::getenv(kSeedEnv);
  if (text == nullptr || *text == '\0') return std::nullopt;
  const std::string_view view(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(view.data(), view.data() + view.size(), value);
  if (ec != std::errc() || ptr != view.data() + view.size()) {
    throw UsageError(std::string(kSeedEnv) +
                     " must be a non-negative integer, got '" + text + "'");
  }
  return value;
}

std::uint64_t ResolveSeed(const std::optional<std::uint64_t>& flag,
                          std::uint64_t fallback) {
  if (flag) return *flag;
  if (const auto env = SeedFromEnvironment()) return *env;
  return fallback;
}

std::size_t ResolveDeltaF(std::size_t delta_f, std::size_t r) {
  if (delta_f != 0) return delta_f;
  if (r != 0) return 2 * r;
  throw UsageError("sue/oue need --delta-f or --r (delta_f = 2r)");
}

void PrintKeyValue(std::ostream& out, std::string_view key,
                   const std::string& value) {
  out << key << " = " << value << '\n';
}

std::string FirstLine(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  std::string line;
  std::getline(in, line);
  return line;
}

// Bit files or embedding files, told apart by their header.
LabeledData LoadFeatures(const std::string& path, std::size_t* classes) {
  const std::string header = FirstLine(path);
  if (header.rfind("#bits", 0) == 0) {
    const BitDataset bits = LoadBits(path);
    *classes = bits.classes;
    // Bit files handed to the trainer are what users released.
    return FeaturesFromBits(bits.records, Representation::kPerturbedBits);
  }
  const EmbeddingDataset emb = LoadEmbeddings(path);
  *classes = emb.classes;
  return FeaturesFromEmbeddings(emb.records);
}

LabeledData TakeRows(const LabeledData& data,
                     const std::vector<std::size_t>& rows) {
  LabeledData out;
  out.kind = data.kind;
  out.features.resize(static_cast<Eigen::Index>(rows.size()),
                      data.features.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) =
        data.features.row(static_cast<Eigen::Index>(rows[i]));
    out.labels.push_back(data.labels[rows[i]]);
  }
  return out;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Local differential privacy for text representations"};
  app.name("ldprepr");
  app.require_subcommand(1);

  // probs / audit
  std::string protocol = "ome";
  double epsilon = 1.0;
  double lambda = 100.0;
  std::size_t r = 0;
  std::size_t l = 0;
  std::size_t delta_f = 0;
  const auto add_protocol_options = [&](CLI::App* sub, bool protocol_required) {
    auto* opt = sub->add_option("--protocol", protocol, "ome, sue or oue")
                    ->check(CLI::IsMember({"ome", "sue", "oue"},
                                          CLI::ignore_case));
    if (protocol_required) opt->required();
    sub->add_option("--epsilon", epsilon, "Privacy budget")->required();
    sub->add_option("--lambda", lambda, "OME randomization factor");
    sub->add_option("--r", r, "Embedding length");
    sub->add_option("--l", l, "Bits per element");
    sub->add_option("--delta-f", delta_f, "SUE/OUE sensitivity (default 2r)");
  };

  CLI::App* probs = app.add_subcommand("probs", "Print randomization probabilities");
  add_protocol_options(probs, true);

  CLI::App* audit = app.add_subcommand(
      "audit", "Privacy identity and worst-case per-bit log ratio");
  add_protocol_options(audit, false);

  // encode
  std::string in_path;
  std::string out_path;
  int integer_bits = 4;
  int fraction_bits = 5;
  CLI::App* encode = app.add_subcommand("encode", "Embedding file to bit file");
  encode->add_option("--in", in_path, "Embedding file")->required();
  encode->add_option("--out", out_path, "Bit file")->required();
  encode->add_option("--m", integer_bits, "Integer-part bits");
  encode->add_option("--n", fraction_bits, "Fraction-part bits");

  // perturb
  std::optional<std::uint64_t> seed;
  CLI::App* perturb = app.add_subcommand("perturb", "Randomize a bit file");
  perturb->add_option("--in", in_path, "Bit file")->required();
  perturb->add_option("--out", out_path, "Randomized bit file")->required();
  add_protocol_options(perturb, true);
  perturb->add_option("--seed", seed, "Base seed (else $LDPREPR_SEED, else 0)");

  // train
  std::string test_path;
  double split_ratio = 0.8;
  MlpConfig mlp;
  CLI::App* train = app.add_subcommand(
      "train", "Train and evaluate the classifier on one file");
  train->add_option("--in", in_path, "Embedding or bit file")->required();
  train->add_option("--test", test_path, "Held-out file (else split --in)");
  train->add_option("--split", split_ratio, "Train fraction when splitting");
  train->add_option("--seed", seed, "Seed (else $LDPREPR_SEED, else 0)");
  train->add_option("--hidden", mlp.hidden_units, "Hidden units");
  train->add_option("--epochs", mlp.epochs, "Epochs");
  train->add_option("--dropout", mlp.dropout_rate, "Input dropout rate");
  train->add_option("--lr", mlp.learning_rate, "Learning rate");
  train->add_option("--decay", mlp.decay, "Learning-rate decay");
  train->add_option("--momentum", mlp.momentum, "Momentum");
  train->add_option("--batch", mlp.batch_size, "Batch size");

  // experiment
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::size_t> runs;
  std::optional<std::size_t> threads;
  CLI::App* experiment =
      app.add_subcommand("experiment", "Run a repeated experiment from a config");
  experiment->add_option("--config", config_path, "key = value config file")
      ->required();
  experiment->add_option("--set", overrides, "Override: key=value");
  experiment->add_option("--out", out_path, "Report file (overrides config)");
  experiment->add_option("--runs", runs, "Override the run count");
  experiment->add_option("--threads", threads, "Parallel runs");

  // curves
  std::vector<double> epsilons{0.5, 1.0, 5.0, 10.0};
  std::vector<double> lambdas{1.0, 10.0, 50.0, 100.0};
  std::vector<std::string> protocols{"ome", "sue", "oue"};
  std::size_t curve_r = 50;
  std::size_t curve_l = 10;
  CLI::App* curves = app.add_subcommand("curves", "Probability curve table");
  curves->add_option("--out", out_path, "TSV file (else stdout)");
  curves->add_option("--r", curve_r, "Embedding length");
  curves->add_option("--l", curve_l, "Bits per element");
  curves->add_option("--epsilons", epsilons, "Epsilon grid")->delimiter(',');
  curves->add_option("--lambdas", lambdas, "Lambda grid")->delimiter(',');
  curves->add_option("--protocols", protocols, "Protocols")
      ->delimiter(',')
      ->check(CLI::IsMember({"ome", "sue", "oue"}, CLI::ignore_case));

  // synth
  SyntheticSpec spec;
  CLI::App* synth =
      app.add_subcommand("synth", "Write the synthetic sentence-embedding set");
  synth->add_option("--out", out_path, "Embedding file")->required();
  synth->add_option("--records", spec.records, "Record count");
  synth->add_option("--dim", spec.dim, "Embedding length");
  synth->add_option("--classes", spec.classes, "Class count");
  synth->add_option("--signal", spec.signal, "Class shift of polar words");
  synth->add_option("--seed", spec.seed, "Generator seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ldprepr: usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (probs->parsed() || audit->parsed()) {
      const Protocol p = ParseProtocol(protocol);
      if (p == Protocol::kOme) {
        if (r == 0 || l == 0) throw UsageError("ome needs --r and --l");
        const OmeParams params = ComputeOmeParams(epsilon, lambda, r, l);
        PrintKeyValue(out, "protocol", "ome");
        PrintKeyValue(out, "epsilon", FormatDouble(epsilon));
        PrintKeyValue(out, "lambda", FormatDouble(lambda));
        PrintKeyValue(out, "sensitivity", std::to_string(params.sensitivity));
        if (probs->parsed()) {
          PrintKeyValue(out, "p1", FormatDouble(params.p1));
          PrintKeyValue(out, "p2", FormatDouble(params.p2));
          PrintKeyValue(out, "q", FormatDouble(params.q));
        } else {
          PrintKeyValue(out, "paired_product_epsilon",
                        FormatDouble(PairedProductEpsilon(params)));
          PrintKeyValue(out, "audit_max_log_ratio",
                        FormatDouble(AuditMaxLogRatio(params)));
        }
      } else {
        const std::size_t df = ResolveDeltaF(delta_f, r);
        const UeParams params = p == Protocol::kSue
                                    ? ComputeSueParams(epsilon, df)
                                    : ComputeOueParams(epsilon, df);
        PrintKeyValue(out, "protocol", std::string(ProtocolName(p)));
        PrintKeyValue(out, "epsilon", FormatDouble(epsilon));
        PrintKeyValue(out, "delta_f", std::to_string(df));
        if (probs->parsed()) {
          PrintKeyValue(out, "p", FormatDouble(params.p));
          PrintKeyValue(out, "q", FormatDouble(params.q));
        } else {
          PrintKeyValue(out, "audit_max_log_ratio",
                        FormatDouble(AuditMaxLogRatio(params)));
        }
      }
      return kExitOk;
    }

    if (encode->parsed()) {
      const EmbeddingDataset emb = LoadEmbeddings(in_path);
      const CodecLayout layout(integer_bits, fraction_bits, emb.dim);
      BitDataset bits;
      bits.length = layout.total_bits();
      bits.classes = emb.classes;
      bits.records.reserve(emb.records.size());
      for (const EmbeddingVector& vec : emb.records) {
        bits.records.push_back(EncodeVector(vec, layout));
      }
      SaveBits(out_path, bits);
      PrintKeyValue(out, "records", std::to_string(bits.records.size()));
      PrintKeyValue(out, "length", std::to_string(bits.length));
      return kExitOk;
    }

    if (perturb->parsed()) {
      const Protocol p = ParseProtocol(protocol);
      // Validate flag combinations before touching the file.
      std::size_t df = 0;
      if (p != Protocol::kOme) df = ResolveDeltaF(delta_f, r);
      const std::uint64_t base = ResolveSeed(seed, 0);
      BitDataset data = LoadBits(in_path);
      if (p == Protocol::kOme) {
        const OmeParams params = ComputeOmeParams(epsilon, lambda, data.length);
        for (std::size_t i = 0; i < data.records.size(); ++i) {
          data.records[i] =
              PerturbOme(data.records[i], params, RecordStream(base, i));
        }
      } else {
        const UeParams params = p == Protocol::kSue
                                    ? ComputeSueParams(epsilon, df)
                                    : ComputeOueParams(epsilon, df);
        for (std::size_t i = 0; i < data.records.size(); ++i) {
          data.records[i] =
              PerturbUe(data.records[i], params, RecordStream(base, i));
        }
      }
      SaveBits(out_path, data);
      PrintKeyValue(out, "records", std::to_string(data.records.size()));
      return kExitOk;
    }

    if (train->parsed()) {
      const std::uint64_t base = ResolveSeed(seed, 0);
      std::size_t classes = 0;
      LabeledData train_data = LoadFeatures(in_path, &classes);
      LabeledData test_data;
      if (!test_path.empty()) {
        std::size_t test_classes = 0;
        test_data = LoadFeatures(test_path, &test_classes);
        if (test_data.width() != train_data.width()) {
          Fail(ErrorCode::kShape, "train and test files differ in width");
        }
      } else {
        const SplitIndices split =
            MakeSplit(train_data.size(), split_ratio, RngSeed{base, 0});
        test_data = TakeRows(train_data, split.test);
        train_data = TakeRows(train_data, split.train);
      }
      mlp.input_dim = train_data.width();
      mlp.num_classes = classes;
      MlpModel model(mlp, RngSeed{base, 1});
      const TrainHistory history =
          Train(model, train_data, mlp, RngSeed{base, 2});
      if (!history.loss.empty()) {
        PrintKeyValue(out, "final_train_loss", FormatDouble(history.loss.back()));
        PrintKeyValue(out, "final_train_accuracy",
                      FormatDouble(history.accuracy.back()));
      }
      PrintKeyValue(out, "test_accuracy",
                    FormatDouble(Evaluate(model, test_data)));
      return kExitOk;
    }

    if (experiment->parsed()) {
      ExperimentConfig config = LoadExperimentConfig(config_path);
      for (const std::string& item : overrides) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) {
          throw UsageError("--set expects key=value, got '" + item + "'");
        }
        SetConfigValue(config, std::string_view(item).substr(0, eq),
                       std::string_view(item).substr(eq + 1));
      }
      if (const auto env = SeedFromEnvironment()) config.base_seed = *env;
      if (!out_path.empty()) config.output_path = out_path;
      if (runs) config.runs = *runs;
      if (threads) config.threads = *threads;
      const Report report = RunExperiment(config);
      if (config.output_path.empty()) {
        out << FormatReport(report);
      } else {
        PrintKeyValue(out, "mean_accuracy", FormatDouble(report.mean_accuracy));
        PrintKeyValue(out, "std_accuracy", FormatDouble(report.std_accuracy));
        PrintKeyValue(out, "report", config.output_path);
      }
      return kExitOk;
    }

    if (curves->parsed()) {
      std::vector<Protocol> parsed;
      for (const std::string& name : protocols) {
        parsed.push_back(ParseProtocol(name));
      }
      const std::vector<CurveRow> rows =
          ProbabilityCurves(parsed, epsilons, lambdas, curve_r, curve_l);
      if (out_path.empty()) {
        WriteCurves(out, rows);
      } else {
        SaveCurves(out_path, rows);
      }
      return kExitOk;
    }

    if (synth->parsed()) {
      SaveEmbeddings(out_path, MakeSyntheticDataset(spec));
      PrintKeyValue(out, "records", std::to_string(spec.records));
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "ldprepr: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "ldprepr: " << ErrorCodeName(e.code()) << ": " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace ldprepr
