// Copyright 2026 The Plumber Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "plumber/cli.h"
#include "plumber/config.h"
#include "plumber/core_model.h"
#include "plumber/error.h"
#include "plumber/evaluation.h"
#include "plumber/feedback.h"
#include "plumber/service.h"

namespace py = pybind11;

namespace {

// JSON crosses the boundary as text; the Python package decodes it.
std::string Dump(const plumber::Json& j) {
  return j.dump(-1, ' ', false, plumber::Json::error_handler_t::replace);
}

plumber::Json Parse(const std::string& s) {
  plumber::Json j = plumber::Json::parse(s, nullptr, false);
  if (j.is_discarded()) {
    throw plumber::Error(plumber::ErrorCode::kInvalidRequest, "argument is not valid JSON");
  }
  return j;
}

plumber::Config MakeConfig(const std::string& data_dir, const std::string& config_json) {
  plumber::Config c =
      config_json.empty() ? plumber::Config{} : plumber::config_from_json(Parse(config_json));
  if (!data_dir.empty()) c.data_dir = data_dir;
  return c;
}

}  // namespace

PYBIND11_MODULE(_plumber, m) {
  m.doc() = "Native core of the plumber IE pipeline framework";

  static py::exception<plumber::Error> error(m, "PlumberError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const plumber::Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
      exc.attr("code") = std::string(e.code_name());
      exc.attr("subject") = e.subject();
      exc.attr("status") = plumber::http_status(e.code());
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<plumber::Service>(m, "Service")
      .def(py::init([](const std::string& data_dir, const std::string& config_json) {
             return std::make_unique<plumber::Service>(MakeConfig(data_dir, config_json));
           }),
           py::arg("data_dir") = "", py::arg("config_json") = "")
      .def("components", [](const plumber::Service& s) { return Dump(s.components()); })
      .def(
          "pipelines",
          [](const plumber::Service& s, std::optional<std::string> kg) {
            return Dump(s.pipelines(kg));
          },
          py::arg("kg") = py::none())
      .def("validate_pipeline",
           [](const plumber::Service& s, const std::string& body) {
             return Dump(s.validate_pipeline(Parse(body)));
           })
      .def("select",
           [](const plumber::Service& s, const std::string& body) {
             plumber::Json j = Parse(body);
             py::gil_scoped_release release;
             return Dump(s.select(j));
           })
      .def("run",
           [](const plumber::Service& s, const std::string& body) {
             plumber::Json j = Parse(body);
             py::gil_scoped_release release;
             return Dump(s.run(j));
           })
      .def("get_run",
           [](const plumber::Service& s, const std::string& id) { return Dump(s.get_run(id)); })
      .def("feedback",
           [](plumber::Service& s, const std::string& body) {
             return Dump(s.feedback(Parse(body)));
           })
      .def("profiles", [](const plumber::Service& s) { return Dump(s.profiles()); })
      .def("health", [](const plumber::Service& s) { return Dump(s.health()); })
      .def(
          "handle",
          [](plumber::Service& s, const std::string& method, const std::string& path,
             const std::string& body, std::map<std::string, std::string> query) {
            plumber::ApiResponse r;
            {
              py::gil_scoped_release release;
              r = s.handle({method, path, std::move(query), body});
            }
            return py::make_tuple(r.status, Dump(r.body));
          },
          py::arg("method"), py::arg("path"), py::arg("body") = "",
          py::arg("query") = std::map<std::string, std::string>{});

  m.def(
      "cli_main",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = plumber::cli_main(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));

  m.def(
      "blend",
      [](double score, std::size_t accepts, std::size_t rejects, double beta) {
        return plumber::blend(score, plumber::FeedbackStats{"", accepts, rejects}, beta);
      },
      py::arg("score"), py::arg("accepts"), py::arg("rejects"),
      py::arg("beta") = plumber::kDefaultBlendWeight);

  m.def("micro_metrics", [](const std::vector<std::tuple<std::size_t, std::size_t,
                                                         std::size_t>>& counts) {
    std::vector<plumber::MatchCounts> per_doc;
    for (const auto& [tp, fp, fn] : counts) per_doc.push_back({tp, fp, fn});
    plumber::EvaluationReport r = plumber::micro_metrics(per_doc);
    return py::dict(py::arg("tp") = r.tp, py::arg("fp") = r.fp, py::arg("fn") = r.fn,
                    py::arg("precision") = r.precision, py::arg("recall") = r.recall,
                    py::arg("f1") = r.f1);
  });

  m.def("normalize_surface",
        [](const std::string& s) { return plumber::normalize_surface(s); });

  m.def("error_codes", [] {
    std::vector<std::pair<std::string, int>> out;
    for (plumber::ErrorCode c : plumber::all_error_codes()) {
      out.emplace_back(std::string(plumber::error_code_name(c)), plumber::http_status(c));
    }
    return out;
  });
}
