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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ldprepr/bit_vector.hpp"
#include "ldprepr/codec.hpp"
#include "ldprepr/error.hpp"
#include "ldprepr/ldp.hpp"
#include "ldprepr/pipeline.hpp"

namespace py = pybind11;

namespace ldprepr {
namespace {

std::size_t ElementsIn(std::size_t bit_count, int m, int n) {
  const std::size_t width = 1 + static_cast<std::size_t>(m + n);
  if (bit_count % width != 0) {
    Fail(ErrorCode::kShape, "bit string length " + std::to_string(bit_count) +
                                " is not a multiple of " + std::to_string(width));
  }
  return bit_count / width;
}

py::dict RateDict(const RateEstimate& rate) {
  py::dict d;
  d["trials"] = rate.trials;
  d["successes"] = rate.successes;
  d["value"] = rate.value();
  d["standard_error"] = rate.standard_error();
  return d;
}

py::dict ReportDict(const Report& report) {
  py::dict d;
  d["dim"] = report.dim;
  d["classes"] = report.classes;
  d["records"] = report.records;
  d["accuracies"] = report.accuracies;
  d["mean_accuracy"] = report.mean_accuracy;
  d["std_accuracy"] = report.std_accuracy;
  d["model_inputs"] = report.model_inputs;
  d["wall_clock_seconds"] = report.wall_clock_seconds;
  d["text"] = FormatReport(report);
  return d;
}

}  // namespace
}  // namespace ldprepr

PYBIND11_MODULE(_core, m) {
  using namespace ldprepr;
  m.doc() = "Local differential privacy for fixed-length text representations";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object>
      error_type;
  error_type.call_once_and_store_result([&]() -> py::object {
    return py::exception<Error>(m, "Error", PyExc_RuntimeError);
  });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& type = error_type.get_stored();
      py::object instance = type(e.what());
      instance.attr("code") = std::string(ErrorCodeName(e.code()));
      PyErr_SetObject(type.ptr(), instance.ptr());
    }
  });

  py::class_<OmeParams>(m, "OmeParams")
      .def_readonly("epsilon", &OmeParams::epsilon)
      .def_readonly("lambda_", &OmeParams::lambda)
      .def_readonly("sensitivity", &OmeParams::sensitivity)
      .def_readonly("p1", &OmeParams::p1)
      .def_readonly("p2", &OmeParams::p2)
      .def_readonly("q", &OmeParams::q)
      .def("__repr__", [](const OmeParams& p) {
        return "OmeParams(p1=" + FormatDouble(p.p1) +
               ", p2=" + FormatDouble(p.p2) + ", q=" + FormatDouble(p.q) + ")";
      });

  py::class_<UeParams>(m, "UeParams")
      .def_property_readonly(
          "protocol",
          [](const UeParams& p) { return std::string(ProtocolName(p.variant)); })
      .def_readonly("epsilon", &UeParams::epsilon)
      .def_readonly("delta_f", &UeParams::sensitivity)
      .def_readonly("p", &UeParams::p)
      .def_readonly("q", &UeParams::q)
      .def("__repr__", [](const UeParams& p) {
        return "UeParams(" + std::string(ProtocolName(p.variant)) +
               ", p=" + FormatDouble(p.p) + ", q=" + FormatDouble(p.q) + ")";
      });

  py::class_<FlipRates>(m, "FlipRates")
      .def_property_readonly("keep_one_even",
                             [](const FlipRates& f) { return RateDict(f.keep_one_even); })
      .def_property_readonly("keep_one_odd",
                             [](const FlipRates& f) { return RateDict(f.keep_one_odd); })
      .def_property_readonly("zero_to_one",
                             [](const FlipRates& f) { return RateDict(f.zero_to_one); });

  m.def("ome_params",
        py::overload_cast<double, double, std::size_t>(&ComputeOmeParams),
        py::arg("epsilon"), py::arg("lambda_"), py::arg("sensitivity"));
  m.def("sue_params", &ComputeSueParams, py::arg("epsilon"), py::arg("delta_f"));
  m.def("oue_params", &ComputeOueParams, py::arg("epsilon"), py::arg("delta_f"));

  m.def("paired_product_epsilon", &PairedProductEpsilon, py::arg("params"));
  m.def("audit_max_log_ratio",
        py::overload_cast<const OmeParams&>(&AuditMaxLogRatio),
        py::arg("params"));
  m.def("audit_max_log_ratio",
        py::overload_cast<const UeParams&>(&AuditMaxLogRatio),
        py::arg("params"));

  m.def("zscore",
        [](const std::vector<double>& values) { return ZScoreNormalize(values); },
        py::arg("values"));
  m.def(
      "encode_value",
      [](double x, int m_bits, int n_bits) {
        return EncodeValue(x, CodecLayout(m_bits, n_bits, 2)).to_string();
      },
      py::arg("x"), py::arg("m") = 4, py::arg("n") = 5);
  m.def(
      "decode_value",
      [](const std::string& bits, int m_bits, int n_bits) {
        return DecodeValue(PackedBits::FromString(bits),
                           CodecLayout(m_bits, n_bits, 2));
      },
      py::arg("bits"), py::arg("m") = 4, py::arg("n") = 5);
  m.def(
      "encode_vector",
      [](const std::vector<double>& values, int m_bits, int n_bits) {
        const CodecLayout layout(m_bits, n_bits, values.size());
        return EncodeVector(EmbeddingVector{0, values}, layout).bits.to_string();
      },
      py::arg("values"), py::arg("m") = 4, py::arg("n") = 5,
      "z-score normalizes `values` and returns the concatenated codes.");
  m.def(
      "decode_vector",
      [](const std::string& bits, int m_bits, int n_bits) {
        const PackedBits packed = PackedBits::FromString(bits);
        const CodecLayout layout(m_bits, n_bits,
                                 ElementsIn(packed.size(), m_bits, n_bits));
        return DecodeVector(packed, layout);
      },
      py::arg("bits"), py::arg("m") = 4, py::arg("n") = 5);

  m.def(
      "perturb",
      [](const std::string& bits, const OmeParams& params, std::uint64_t seed,
         std::uint64_t stream) {
        const BitVector in{0, PackedBits::FromString(bits)};
        return PerturbOme(in, params, RngSeed{seed, stream}).bits.to_string();
      },
      py::arg("bits"), py::arg("params"), py::arg("seed"), py::arg("stream") = 0);
  m.def(
      "perturb",
      [](const std::string& bits, const UeParams& params, std::uint64_t seed,
         std::uint64_t stream) {
        const BitVector in{0, PackedBits::FromString(bits)};
        return PerturbUe(in, params, RngSeed{seed, stream}).bits.to_string();
      },
      py::arg("bits"), py::arg("params"), py::arg("seed"), py::arg("stream") = 0);

  m.def(
      "empirical_flip_rates",
      [](const OmeParams& params, std::uint64_t trials, std::uint64_t seed) {
        return EmpiricalFlipRates(params, trials, RngSeed{seed, 0});
      },
      py::arg("params"), py::arg("trials"), py::arg("seed") = 0,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "empirical_flip_rates",
      [](const UeParams& params, std::uint64_t trials, std::uint64_t seed) {
        return EmpiricalFlipRates(params, trials, RngSeed{seed, 0});
      },
      py::arg("params"), py::arg("trials"), py::arg("seed") = 0,
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "load_embeddings",
      [](const std::string& path) {
        const EmbeddingDataset data = LoadEmbeddings(path);
        std::vector<int> labels;
        std::vector<std::vector<double>> values;
        for (const EmbeddingVector& v : data.records) {
          labels.push_back(v.label);
          values.push_back(v.values);
        }
        py::dict d;
        d["dim"] = data.dim;
        d["classes"] = data.classes;
        d["labels"] = labels;
        d["values"] = values;
        return d;
      },
      py::arg("path"));

  m.def(
      "run_experiment",
      [](const std::optional<std::string>& config_path,
         const std::map<std::string, py::object>& overrides) {
        ExperimentConfig config =
            config_path ? LoadExperimentConfig(*config_path) : ExperimentConfig{};
        for (const auto& [key, value] : overrides) {
          SetConfigValue(config, key, py::str(value).cast<std::string>());
        }
        Report report;
        {
          py::gil_scoped_release release;
          report = RunExperiment(config);
        }
        return ReportDict(report);
      },
      py::arg("config") = py::none(),
      py::arg("overrides") = std::map<std::string, py::object>{},
      "Runs a repeated experiment. `overrides` maps config keys to values.");

  m.def(
      "probability_curves",
      [](const std::vector<std::string>& protocols,
         const std::vector<double>& epsilons, const std::vector<double>& lambdas,
         std::size_t r, std::size_t l) {
        std::vector<Protocol> parsed;
        for (const std::string& name : protocols) {
          parsed.push_back(ParseProtocol(name));
        }
        py::list rows;
        for (const CurveRow& row :
             ProbabilityCurves(parsed, epsilons, lambdas, r, l)) {
          py::dict d;
          d["protocol"] = std::string(ProtocolName(row.protocol));
          d["epsilon"] = row.epsilon;
          d["lambda_"] = row.lambda ? py::cast(*row.lambda) : py::none();
          d["p1"] = row.p1;
          d["p2"] = row.p2;
          d["q"] = row.q;
          rows.append(d);
        }
        return rows;
      },
      py::arg("protocols"), py::arg("epsilons"), py::arg("lambdas"),
      py::arg("r") = 50, py::arg("l") = 10);
}
