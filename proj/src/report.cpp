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

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "ldprepr/error.hpp"
#include "ldprepr/pipeline.hpp"

namespace ldprepr {

std::string FormatReport(const Report& report) {
  std::ostringstream out;
  const auto line = [&out](std::string_view key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  out << "# ldprepr experiment report\n";
  for (const auto& [key, value] : ConfigEntries(report.config)) {
    line(key, value);
  }
  line("dim", std::to_string(report.dim));
  line("classes", std::to_string(report.classes));
  line("records", std::to_string(report.records));
  if (report.probabilities) {
    const ResolvedProbabilities& p = *report.probabilities;
    line("sensitivity", std::to_string(p.sensitivity));
    line("p1", FormatDouble(p.p1));
    line("p2", FormatDouble(p.p2));
    line("q", FormatDouble(p.q));
  }
  line("mean_accuracy", FormatDouble(report.mean_accuracy));
  line("std_accuracy", FormatDouble(report.std_accuracy));
  for (std::size_t k = 0; k < report.accuracies.size(); ++k) {
    line("run_" + std::to_string(k) + "_accuracy",
         FormatDouble(report.accuracies[k]));
  }
  for (std::size_t k = 0; k < report.model_inputs.size(); ++k) {
    line("run_" + std::to_string(k) + "_model_inputs", report.model_inputs[k]);
  }
  line("wall_clock_seconds", FormatDouble(report.wall_clock_seconds));
  return out.str();
}

void SaveReport(const std::string& path, const Report& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << FormatReport(report);
  out.flush();
  if (!out) Fail(ErrorCode::kIo, "failed writing '" + path + "'");
}

std::vector<CurveRow> ProbabilityCurves(std::span<const Protocol> protocols,
                                        std::span<const double> epsilons,
                                        std::span<const double> lambdas,
                                        std::size_t r, std::size_t l) {
  if (protocols.empty() || epsilons.empty()) {
    Fail(ErrorCode::kParameter, "curve grids must be non-empty");
  }
  std::vector<CurveRow> rows;
  for (const Protocol protocol : protocols) {
    if (protocol == Protocol::kOme) {
      if (lambdas.empty()) {
        Fail(ErrorCode::kParameter, "OME curves need a lambda grid");
      }
      for (const double lambda : lambdas) {
        for (const double epsilon : epsilons) {
          const OmeParams p = ComputeOmeParams(epsilon, lambda, r, l);
          rows.push_back({protocol, epsilon, lambda, p.p1, p.p2, p.q});
        }
      }
      continue;
    }
    for (const double epsilon : epsilons) {
      const UeParams p = protocol == Protocol::kSue
                             ? ComputeSueParams(epsilon, 2 * r)
                             : ComputeOueParams(epsilon, 2 * r);
      rows.push_back({protocol, epsilon, std::nullopt, p.p, p.p, p.q});
    }
  }
  return rows;
}

void WriteCurves(std::ostream& out, std::span<const CurveRow> rows) {
  out << "protocol\tepsilon\tlambda\tp1\tp2\tq\n";
  for (const CurveRow& row : rows) {
    out << ProtocolName(row.protocol) << '\t' << FormatDouble(row.epsilon)
        << '\t' << (row.lambda ? FormatDouble(*row.lambda) : "-") << '\t'
        << FormatDouble(row.p1) << '\t' << FormatDouble(row.p2) << '\t'
        << FormatDouble(row.q) << '\n';
  }
}

void SaveCurves(const std::string& path, std::span<const CurveRow> rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  WriteCurves(out, rows);
  out.flush();
  if (!out) Fail(ErrorCode::kIo, "failed writing '" + path + "'");
}

}  // namespace ldprepr
