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

// tcpactl: generate benchmarks, compile loop programs into GC and
// instruction-memory configurations, verify them, and tabulate reports.
//
// Exit codes: 0 success, 1 a verification check failed, 2 any other error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tcpa/bench.hpp"
#include "tcpa/error.hpp"
#include "tcpa/model.hpp"
#include "tcpa/pipeline.hpp"
#include "tcpa/sim.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace tcpa;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kParse, "cannot write " + path.string());
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kParse, path.string() + ": cannot open");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct CompileFlags {
  pipeline::CompileOptions opt;
  void add(CLI::App* app) {
    app->add_option("--tries", opt.tries, "Randomized unification tries")->check(CLI::PositiveNumber);
    app->add_option("--seed", opt.seed, "Seed for the unification shuffles");
    app->add_option("--capacity-lows", opt.capacities.lows, "LOWER evaluators available");
    app->add_option("--capacity-ups", opt.capacities.ups, "UPPER evaluators available");
    app->add_option("--capacity-afs", opt.capacities.afs, "AFFINE evaluators available");
    app->add_option("--capacity-conjs", opt.capacities.conjs, "Conjunction units available");
    app->add_option("--capacity-disjs", opt.capacities.disjs, "Disjunction units (signals) available");
    app->add_option("--flip-condition", opt.flip_condition,
                    "Fault injection: invert the polarity bound to this condition id");
  }
};

struct SimFlags {
  sim::ArrayOptions opt;
  std::string model = "shift";
  void add(CLI::App* app) {
    app->add_option("--delay-model", model, "Delay element model")->check(CLI::IsMember({"shift", "fifo"}));
    app->add_option("--fifo-depth", opt.fifo_depth, "Transitions per signal the FIFO can hold");
    app->add_option("--horizon", opt.horizon, "Cycles to simulate (0: derived from the program)");
  }
  sim::ArrayOptions get() const {
    sim::ArrayOptions o = opt;
    o.delay = model == "fifo" ? sim::DelayModel::kTimestampFifo : sim::DelayModel::kShiftRegister;
    return o;
  }
};

std::string report_text(const std::string& name, const pipeline::Report& r) {
  return pipeline::report_table({{name, r}});
}

int cmd_gen_bench(const std::string& kernel, const bench::KernelSpec& base, const std::string& mode,
                  const fs::path& out) {
  std::vector<std::string> names = kernel == "all" ? bench::kernel_names() : std::vector<std::string>{kernel};
  for (const auto& name : names) {
    bench::KernelSpec spec = base;
    spec.name = name;
    spec.mode = mode == "helper" ? bench::ScheduleMode::kHelper : bench::ScheduleMode::kBuiltin;
    const fs::path file = out / (name + ".json");
    write_file(file, model::print_program(bench::generate(spec)));
    std::cout << file.string() << "\n";
  }
  return 0;
}

int cmd_compile(const fs::path& input, const pipeline::CompileOptions& opt, const fs::path& out) {
  const auto p = model::load_program(input.string());
  const auto c = pipeline::compile(p, opt);
  write_file(out / "gc-config.json", gcmap::to_json(c.gc).dump(1) + "\n");
  write_file(out / "memories.json", sim::to_json(c.memories).dump(1) + "\n");
  write_file(out / "report.json", pipeline::to_json(c.report).dump(1) + "\n");
  write_file(out / "report.txt", report_text(input.stem().string(), c.report));
  std::cout << report_text(input.stem().string(), c.report);
  return 0;
}

int cmd_verify(const fs::path& input, const pipeline::CompileOptions& copt, const sim::ArrayOptions& sopt,
               const std::string& trace_out, const std::string& signals_out) {
  const auto p = model::load_program(input.string());
  const auto c = pipeline::compile(p, copt);
  const auto result = pipeline::verify(c, sopt);
  for (const auto& chk : result.checks) {
    std::cout << (chk.ok ? "PASS " : "FAIL ") << chk.name;
    if (!chk.ok) std::cout << ": " << chk.detail;
    std::cout << "\n";
  }
  if (!trace_out.empty()) write_file(trace_out, sim::dump(sim::run_array(p, c.gc, c.memories, sopt)));
  if (!signals_out.empty()) {
    const poly::Int horizon = sopt.horizon > 0 ? sopt.horizon : sim::default_horizon(p);
    write_file(signals_out, sim::run_gc(c.gc, horizon).csv());
  }
  return result.ok() ? 0 : 1;
}

// Inputs are either report.json files or programs, which are compiled.
int cmd_report(const std::vector<std::string>& inputs, const pipeline::CompileOptions& opt,
               const std::string& json_out) {
  std::vector<std::pair<std::string, pipeline::Report>> rows;
  json all = json::array();
  for (const auto& in : inputs) {
    const fs::path path(in);
    json j;
    try {
      j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::kParse, in + ": " + e.what());
    }
    std::string name = path.stem().string();
    pipeline::Report r;
    if (j.is_object() && j.contains("C_unified")) {
      r = pipeline::report_from_json(j);
      if (name == "report" && path.has_parent_path()) name = path.parent_path().filename().string();
    } else {
      r = pipeline::compile(model::load_program(in), opt).report;
    }
    json row = pipeline::to_json(r);
    row["name"] = name;
    all.push_back(row);
    rows.emplace_back(name, r);
  }
  std::cout << pipeline::report_table(rows);
  if (!json_out.empty()) write_file(json_out, all.dump(1) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TCPA loop-control compiler and simulator"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-bench", "Write benchmark kernels as loop program files");
  std::string kernel = "all";
  std::string mode = "builtin";
  std::string gen_out = ".";
  bench::KernelSpec spec;
  gen->add_option("--kernel", kernel, "Kernel name or 'all'");
  gen->add_option("-n,--size", spec.n, "Problem size n");
  gen->add_option("--rows", spec.rows, "PE grid rows");
  gen->add_option("--cols", spec.cols, "PE grid columns");
  gen->add_option("--ii", spec.ii, "Initiation interval (0: kernel default)");
  gen->add_option("--mode", mode, "Schedule source")->check(CLI::IsMember({"builtin", "helper"}));
  gen->add_option("-o,--out", gen_out, "Output directory");

  auto* comp = app.add_subcommand("compile", "Compile a loop program");
  std::string comp_in;
  std::string comp_out = ".";
  CompileFlags comp_flags;
  comp->add_option("input", comp_in, "Loop program JSON")->required();
  comp->add_option("-o,--out", comp_out, "Output directory");
  comp_flags.add(comp);

  auto* ver = app.add_subcommand("verify", "Compile and run every check");
  std::string ver_in, trace_out, signals_out;
  CompileFlags ver_flags;
  SimFlags sim_flags;
  ver->add_option("input", ver_in, "Loop program JSON")->required();
  ver->add_option("--trace-out", trace_out, "Write the executed instruction trace");
  ver->add_option("--signals-out", signals_out, "Write the GC signal trace as CSV");
  ver_flags.add(ver);
  sim_flags.add(ver);

  auto* rep = app.add_subcommand("report", "Tabulate reports of several programs");
  std::vector<std::string> rep_in;
  std::string rep_json;
  CompileFlags rep_flags;
  rep->add_option("inputs", rep_in, "Programs or report.json files")->required();
  rep->add_option("--json", rep_json, "Also write all rows as JSON");
  rep_flags.add(rep);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen_bench(kernel, spec, mode, gen_out);
    if (*comp) return cmd_compile(comp_in, comp_flags.opt, comp_out);
    if (*ver) return cmd_verify(ver_in, ver_flags.opt, sim_flags.get(), trace_out, signals_out);
    if (*rep) return cmd_report(rep_in, rep_flags.opt, rep_json);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
