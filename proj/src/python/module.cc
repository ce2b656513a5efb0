// Copyright 2026 The Glor Authors
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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "glor/core/errors.h"
#include "glor/core/hash.h"
#include "glor/core/manifest.h"
#include "glor/core/version.h"
#include "glor/dedup/containment.h"
#include "glor/stats/agreement.h"
#include "glor/stats/bradley_terry.h"
#include "glor/stats/mann_whitney.h"
#include "glor/texteval/texteval.h"

namespace py = pybind11;

namespace {

py::object ToPy(const glor::Json& j) {
  switch (j.type()) {
    case glor::Json::value_t::null:
      return py::none();
    case glor::Json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case glor::Json::value_t::number_integer:
      return py::int_(j.get<int64_t>());
    case glor::Json::value_t::number_unsigned:
      return py::int_(j.get<uint64_t>());
    case glor::Json::value_t::number_float:
      return py::float_(j.get<double>());
    case glor::Json::value_t::string:
      return py::str(j.get<std::string>());
    case glor::Json::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(ToPy(v));
      return out;
    }
    case glor::Json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = ToPy(v);
      return out;
    }
    default:
      return py::none();
  }
}

glor::stats::WinMatrix MatrixFrom(const std::vector<std::string>& models,
                                  const std::vector<std::vector<uint64_t>>& wins) {
  glor::stats::WinMatrix m{models, wins};
  m.Validate();
  return m;
}

}  // namespace

PYBIND11_MODULE(_glor, m) {
  m.doc() = "Core routines of the glor toolkit";
  m.attr("__version__") = std::string(glor::kVersion);

  py::register_exception<glor::UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<glor::DegenerateError>(m, "DegenerateError", PyExc_ValueError);

  m.def(
      "stable_key",
      [](const std::vector<std::string>& parts) {
        const std::vector<std::string_view> views(parts.begin(), parts.end());
        return glor::StableKey(views);
      },
      py::arg("parts"));

  m.def("normalize", &glor::dedup::Normalize, py::arg("text"));

  m.def(
      "shingle",
      [](const std::string& text, int width) {
        return glor::dedup::Shingle(glor::dedup::Normalize(text), width).hashes;
      },
      py::arg("text"), py::arg("width") = 5);

  m.def(
      "containment",
      [](const std::string& a, const std::string& b, int width) {
        const auto sa = glor::dedup::Shingle(glor::dedup::Normalize(a), width, "a");
        const auto sb = glor::dedup::Shingle(glor::dedup::Normalize(b), width, "b");
        return ToPy(glor::dedup::Containment(sa, sb).ToJson());
      },
      py::arg("a"), py::arg("b"), py::arg("width") = 5);

  m.def(
      "manifest_proportions",
      [](const std::vector<std::pair<std::string, uint64_t>>& counts) {
        std::vector<glor::ManifestEntry> entries;
        for (const auto& [name, count] : counts) {
          glor::ManifestEntry e;
          e.source.name = name;
          e.char_count = count;
          entries.push_back(e);
        }
        return ToPy(glor::SourceManifest::FromCounts(std::move(entries)).ToJson());
      },
      py::arg("counts"));

  m.def(
      "bt_fit",
      [](const std::vector<std::string>& models, const std::vector<std::vector<uint64_t>>& wins,
         double alpha, double tol, int max_iter) {
        glor::stats::BTOptions o;
        o.alpha = alpha;
        o.tol = tol;
        o.max_iter = max_iter;
        return ToPy(glor::stats::FitBradleyTerry(MatrixFrom(models, wins), o).ToJson());
      },
      py::arg("models"), py::arg("wins"), py::arg("alpha") = 0.01, py::arg("tol") = 1e-10,
      py::arg("max_iter") = 10000);

  m.def(
      "rank",
      [](const std::vector<std::string>& models, const std::vector<double>& strengths) {
        return glor::stats::Rank(models, strengths);
      },
      py::arg("models"), py::arg("strengths"));

  m.def(
      "kappa",
      [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        return ToPy(glor::stats::CohenKappa(a, b).ToJson());
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "mode",
      [](const std::vector<std::vector<std::string>>& judges) {
        std::vector<std::vector<glor::stats::Choice>> parsed;
        for (const auto& j : judges) {
          std::vector<glor::stats::Choice> c;
          for (const auto& s : j) c.push_back(glor::stats::ParseChoice(s));
          parsed.push_back(std::move(c));
        }
        std::vector<std::string> out;
        for (auto c : glor::stats::ModeAggregate(parsed)) {
          out.emplace_back(glor::stats::ChoiceName(c));
        }
        return out;
      },
      py::arg("judges"));

  m.def(
      "mwu",
      [](const std::vector<double>& x, const std::vector<double>& y,
         const std::string& alternative) {
        return ToPy(
            glor::stats::MannWhitneyU(x, y, glor::stats::ParseAlternative(alternative)).ToJson());
      },
      py::arg("x"), py::arg("y"), py::arg("alternative") = "greater");

  m.def(
      "bleu",
      [](const std::vector<std::string>& hyp, const std::vector<std::string>& ref, int max_n) {
        return ToPy(glor::texteval::Bleu(hyp, ref, max_n).ToJson());
      },
      py::arg("hypotheses"), py::arg("references"), py::arg("max_n") = 4);

  m.def(
      "exact_match",
      [](const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
        return glor::texteval::ExactMatch(pred, gold);
      },
      py::arg("predictions"), py::arg("golds"));

  m.def(
      "length_stats",
      [](const std::vector<std::string>& texts, uint64_t bin_width) {
        return ToPy(glor::texteval::ComputeLengthStats(texts, bin_width).ToJson());
      },
      py::arg("texts"), py::arg("bin_width") = 10);
}
