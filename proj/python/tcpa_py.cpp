// Copyright 2026 The tcpa-loopctl Authors
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

// Python bindings. Structured results cross the boundary as JSON and are
// handed back as plain dicts and lists.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tcpa/bench.hpp"
#include "tcpa/error.hpp"
#include "tcpa/model.hpp"
#include "tcpa/pipeline.hpp"
#include "tcpa/sim.hpp"

namespace py = pybind11;
using namespace tcpa;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

std::vector<std::tuple<std::string, bool, std::string>> verify(const pipeline::Compiled& c,
                                                               const std::string& delay_model,
                                                               std::size_t fifo_depth, poly::Int horizon) {
  sim::ArrayOptions opt;
  if (delay_model == "fifo") {
    opt.delay = sim::DelayModel::kTimestampFifo;
  } else if (delay_model != "shift") {
    throw Error(ErrorKind::kValidation, "delay_model must be 'shift' or 'fifo'");
  }
  opt.fifo_depth = fifo_depth;
  opt.horizon = horizon;
  std::vector<std::tuple<std::string, bool, std::string>> out;
  for (const auto& chk : pipeline::verify(c, opt).checks) out.emplace_back(chk.name, chk.ok, chk.detail);
  return out;
}

std::vector<std::vector<int>> delay(const std::vector<std::vector<int>>& stream, poly::Int latency,
                                    const std::string& model, std::size_t fifo_depth) {
  const std::size_t width = stream.empty() ? 0 : stream.front().size();
  sim::DelayElement e(model == "fifo" ? sim::DelayModel::kTimestampFifo : sim::DelayModel::kShiftRegister, latency,
                      width, fifo_depth);
  std::vector<std::vector<int>> out;
  for (const auto& row : stream) {
    poly::PointSet in(width);
    if (row.size() != width) throw Error(ErrorKind::kDimensionMismatch, "delay: ragged stream");
    for (std::size_t k = 0; k < width; ++k) in[k] = row[k] != 0;
    const auto o = e.step(in);
    std::vector<int> bits(width);
    for (std::size_t k = 0; k < width; ++k) bits[k] = o.test(k);
    out.push_back(std::move(bits));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_tcpa, m) {
  m.doc() = "Loop-control compilation and simulation for tightly coupled processor arrays";

  static py::handle error = py::exception<Error>(m, "Error", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<model::LoopProgram>(m, "Program")
      .def_property_readonly("dims", [](const model::LoopProgram& p) { return p.dims; })
      .def_property_readonly("ii", [](const model::LoopProgram& p) { return p.ii; })
      .def_property_readonly("grid", [](const model::LoopProgram& p) { return std::make_pair(p.pe_rows, p.pe_cols); })
      .def_property_readonly("equation_count", [](const model::LoopProgram& p) { return p.equations.size(); })
      .def("local_latency", [](const model::LoopProgram& p) { return model::compute_stats(p).local_latency; })
      .def("overlap_depth", [](const model::LoopProgram& p) { return model::compute_stats(p).overlap_depth; })
      .def("to_json", &model::print_program)
      .def("__eq__", [](const model::LoopProgram& a, const model::LoopProgram& b) { return a == b; });

  m.def("parse_program", [](const std::string& text) { return model::parse_program(text); }, py::arg("text"));
  m.def("load_program", &model::load_program, py::arg("path"));
  m.def("helper_schedule", &model::helper_schedule, py::arg("program"));
  m.def("kernel_names", &bench::kernel_names);
  m.def(
      "generate",
      [](const std::string& name, poly::Int n, int rows, int cols, poly::Int ii, const std::string& mode) {
        bench::KernelSpec s{name, n, rows, cols, ii, bench::ScheduleMode::kBuiltin};
        if (mode == "helper") s.mode = bench::ScheduleMode::kHelper;
        else if (mode != "builtin") throw Error(ErrorKind::kValidation, "mode must be 'builtin' or 'helper'");
        return bench::generate(s);
      },
      py::arg("name"), py::arg("n") = 8, py::arg("rows") = 4, py::arg("cols") = 4, py::arg("ii") = 0,
      py::arg("mode") = "builtin");

  py::class_<pipeline::Compiled>(m, "Compiled")
      .def_property_readonly("report", [](const pipeline::Compiled& c) { return to_py(pipeline::to_json(c.report)); })
      .def_property_readonly("gc_config", [](const pipeline::Compiled& c) { return to_py(gcmap::to_json(c.gc)); })
      .def_property_readonly("memories", [](const pipeline::Compiled& c) { return to_py(sim::to_json(c.memories)); })
      .def("report_table", [](const pipeline::Compiled& c, const std::string& name) {
        return pipeline::report_table({{name, c.report}});
      }, py::arg("name") = "program")
      .def("verify", &verify, py::arg("delay_model") = "shift", py::arg("fifo_depth") = sim::kDefaultFifoDepth,
           py::arg("horizon") = 0)
      .def("trace", [](const pipeline::Compiled& c) {
        return sim::dump(sim::run_array(c.program, c.gc, c.memories));
      })
      .def("reference_trace", [](const pipeline::Compiled& c) { return sim::dump(sim::reference_interpret(c.program)); })
      .def("signals_csv", [](const pipeline::Compiled& c) {
        return sim::run_gc(c.gc, sim::default_horizon(c.program)).csv();
      });

  m.def(
      "compile",
      [](const model::LoopProgram& p, int tries, std::uint64_t seed, int flip_condition,
         const std::map<std::string, int>& capacities) {
        pipeline::CompileOptions o;
        for (const auto& [k, v] : capacities) {
          if (k == "lows") o.capacities.lows = v;
          else if (k == "ups") o.capacities.ups = v;
          else if (k == "afs") o.capacities.afs = v;
          else if (k == "conjs") o.capacities.conjs = v;
          else if (k == "disjs") o.capacities.disjs = v;
          else throw Error(ErrorKind::kValidation, "unknown capacity '" + k + "'");
        }
        o.tries = tries;
        o.seed = seed;
        o.flip_condition = flip_condition;
        return pipeline::compile(p, o);
      },
      py::arg("program"), py::arg("tries") = 100, py::arg("seed") = 0, py::arg("flip_condition") = -1,
      py::arg("capacities") = std::map<std::string, int>{});

  m.def("delay", &delay, py::arg("stream"), py::arg("latency"), py::arg("model") = "shift",
        py::arg("fifo_depth") = sim::kDefaultFifoDepth);
}
