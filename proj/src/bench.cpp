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

#include "tcpa/bench.hpp"

#include <algorithm>
#include <map>

#include "tcpa/error.hpp"

namespace tcpa::bench {

using model::Equation;
using model::LoopProgram;
using model::Tile;
using poly::DomainUnion;
using poly::Int;
using poly::IntVec;
using poly::Polyhedron;

namespace {

// One statement of the untiled kernel; the domain is over global indices.
struct Stmt {
  int fu;
  const char* op;
  Int tau;
  Int latency;
  DomainUnion domain;
};

struct Kernel {
  std::size_t dims;
  Int ii;
  std::vector<Stmt> stmts;
};

Polyhedron all(std::size_t n) { return Polyhedron(n); }

// Unless noted, i, j, k are loop dimensions 0, 1, 2.
Kernel gemm(Int n) {
  // C[i][j] = sum_k A[i][k] * B[k][j]; A moves along j, B along i.
  return {3, 1,
          {{0, "ld_a", 0, 1, all(3).equal(1, 0)},
           {0, "mov_a", 0, 1, all(3).lower(1, 1)},
           {1, "ld_b", 0, 1, all(3).equal(0, 0)},
           {1, "mov_b", 0, 1, all(3).lower(0, 1)},
           {2, "mul", 1, 2, all(3)},
           {3, "init_c", 3, 1, all(3).equal(2, 0)},
           {3, "mac", 3, 1, all(3).lower(2, 1)},
           {4, "st_c", 9, 1, all(3).equal(2, n - 1)}}};
}

Kernel trsm(Int) {
  // L X = B, row i: X[i][j] = (B[i][j] - sum_{k<i} L[i][k] X[k][j]) / L[i][i].
  Polyhedron below = all(3).affine_ge({1, 0, -1}, 1);  // k <= i - 1
  Polyhedron diag = all(3).affine_eq({1, 0, -1}, 0);   // k == i
  return {3, 2,
          {{0, "ld_l", 0, 1, all(3).equal(1, 0)},
           {0, "mov_l", 0, 1, all(3).lower(1, 1)},
           {1, "ld_b", 0, 1, all(3).equal(2, 0)},
           {1, "mov_x", 1, 1, below},
           {2, "mul", 2, 2, below},
           {3, "sub", 4, 1, below},
           {2, "div", 3, 3, diag},
           {4, "st_x", 6, 1, diag}}};
}

Kernel lu(Int) {
  // Doolittle without pivoting. Dimensions are (j, k, i): the PE grid
  // partitions columns and elimination steps, rows stream through a PE.
  Polyhedron below = all(3).affine_ge({0, -1, 1}, 1);  // i >= k + 1
  Polyhedron trailing = Polyhedron(below).affine_ge({1, -1, 0}, 1);
  DomainUnion final_value(3, {all(3).affine_eq({0, -1, 1}, 0).affine_ge({1, 0, -1}, 0),
                              all(3).affine_eq({1, -1, 0}, 0).affine_ge({-1, 0, 1}, 1)});
  return {3, 29,
          {{0, "ld_a", 0, 2, all(3).equal(1, 0)},
           {1, "div", 2, 10, Polyhedron(below).affine_eq({1, -1, 0}, 0)},
           {2, "mul", 12, 6, trailing},
           {3, "sub", 18, 10, trailing},
           {4, "st_a", 28, 1, final_value}}};
}

Kernel atax(Int n) {
  // tmp = A x along j, then y = A^T tmp along i.
  return {2, 2,
          {{0, "ld_x", 0, 1, all(2).equal(0, 0)},
           {0, "mov_x", 0, 1, all(2).lower(0, 1)},
           {1, "mul_ax", 1, 2, all(2)},
           {2, "init_t", 3, 1, all(2).equal(1, 0)},
           {2, "acc_t", 3, 1, all(2).lower(1, 1)},
           {1, "mul_at", 4, 2, all(2)},
           {3, "init_y", 6, 1, all(2).equal(0, 0)},
           {3, "acc_y", 6, 1, all(2).lower(0, 1)},
           {4, "st_y", 7, 1, all(2).equal(0, n - 1)}}};
}

Kernel mvt(Int n) {
  // x1 += A y1 (y1 travels along i), x2 += A^T y2 (y2 travels along j).
  return {2, 1,
          {{0, "ld_y1", 0, 1, all(2).equal(0, 0)},
           {0, "mov_y1", 0, 1, all(2).lower(0, 1)},
           {1, "ld_y2", 0, 1, all(2).equal(1, 0)},
           {1, "mov_y2", 0, 1, all(2).lower(1, 1)},
           {2, "mac_x1", 1, 2, all(2)},
           {3, "mac_x2", 1, 2, all(2)},
           {4, "st_x1", 3, 1, all(2).equal(1, n - 1)},
           {5, "st_x2", 3, 1, all(2).equal(0, n - 1)}}};
}

Kernel gesummv(Int n) {
  // y = alpha A x + beta B x.
  return {2, 2,
          {{0, "ld_x", 0, 1, all(2).equal(0, 0)},
           {0, "mov_x", 0, 1, all(2).lower(0, 1)},
           {1, "mul_a", 1, 2, all(2)},
           {1, "mul_b", 2, 2, all(2)},
           {2, "init_a", 3, 1, all(2).equal(1, 0)},
           {2, "acc_a", 3, 1, all(2).lower(1, 1)},
           {3, "init_b", 4, 1, all(2).equal(1, 0)},
           {3, "acc_b", 4, 1, all(2).lower(1, 1)},
           {4, "axpby", 6, 2, all(2).equal(1, n - 1)},
           {5, "st_y", 8, 1, all(2).equal(1, n - 1)}}};
}

Kernel kernel(const std::string& name, Int n) {
  if (name == "gemm") return gemm(n);
  if (name == "trsm") return trsm(n);
  if (name == "lu") return lu(n);
  if (name == "atax") return atax(n);
  if (name == "mvt") return mvt(n);
  if (name == "gesummv") return gesummv(n);
  throw Error(ErrorKind::kValidation, "unknown kernel '" + name + "'");
}

Int ceil_div(Int a, Int b) { return (a + b - 1) / b; }

}  // namespace

const std::vector<std::string>& kernel_names() {
  static const std::vector<std::string> kNames = {"gemm", "trsm", "lu", "atax", "mvt", "gesummv"};
  return kNames;
}

LoopProgram generate(const KernelSpec& spec) {
  if (spec.n < 1 || spec.rows < 1 || spec.cols < 1)
    throw Error(ErrorKind::kValidation, "kernel size and grid must be positive");
  if (spec.n < spec.rows || spec.n < spec.cols)
    throw Error(ErrorKind::kValidation, "n = " + std::to_string(spec.n) + " is smaller than the " +
                                            std::to_string(spec.rows) + "x" + std::to_string(spec.cols) +
                                            " PE grid");
  const Kernel k = kernel(spec.name, spec.n);

  LoopProgram p;
  p.dims = k.dims;
  p.pe_rows = spec.rows;
  p.pe_cols = spec.cols;
  p.intra_extents.assign(k.dims, spec.n);
  p.intra_extents[0] = ceil_div(spec.n, spec.rows);
  p.intra_extents[1] = ceil_div(spec.n, spec.cols);

  // Bound every statement to the problem; uneven tiles leave the tail idle.
  Polyhedron problem(k.dims);
  for (std::size_t d = 0; d < k.dims; ++d) problem.lower(d, 0).upper(d, spec.n - 1);

  poly::PointSpace space(p.intra_box());
  const Tile origin{};
  std::map<int, poly::PointSet> origin_points;
  for (std::size_t s = 0; s < k.stmts.size(); ++s) {
    const Stmt& st = k.stmts[s];
    const int id = static_cast<int>(s);
    for (const Tile& t : p.tiles()) {
      IntVec off(k.dims, 0);
      off[0] = -t.row * p.intra_extents[0];
      off[1] = -t.col * p.intra_extents[1];
      DomainUnion local(k.dims);
      for (const auto& part : st.domain.parts()) local.add_part(part.intersect(problem).translated(off));
      local = space.simplify(local);
      poly::PointSet pts = space.points(local);
      if (t == origin) {
        p.equations.push_back({id, st.fu, st.op, st.tau, st.latency, local});
        origin_points[id] = pts;
      } else if (pts != origin_points[id]) {
        p.tile_overrides[t][id] = local;
      }
    }
  }

  if (spec.mode == ScheduleMode::kBuiltin) {
    p.ii = spec.ii > 0 ? spec.ii : k.ii;
    if (p.ii != k.ii) {
      // Fold the hand schedule onto another II by keeping the relative
      // order of starts; slot conflicts are reported by validation.
      for (auto& e : p.equations) e.tau = e.tau * p.ii / k.ii;
    }
  } else {
    std::map<int, Int> demand;
    for (const auto& e : p.equations) ++demand[e.fu];
    Int need = 1;
    for (const auto& [fu, c] : demand) need = std::max(need, c);
    p.ii = spec.ii > 0 ? spec.ii : std::max(need, k.ii);
    for (auto& e : p.equations) e.tau = 0;
  }
  p.lambda_inter = {p.ii * p.intra_extents[0], p.ii * p.intra_extents[1]};

  if (spec.mode == ScheduleMode::kHelper) return model::helper_schedule(p);
  model::validate(p);
  return p;
}

}  // namespace tcpa::bench
