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

#include "tcpa/json_io.hpp"

#include "tcpa/error.hpp"

namespace tcpa::io {

using json = nlohmann::json;

json domain_to_json(const poly::DomainUnion& d) {
  json out = json::array();
  for (const auto& part : d.parts()) {
    json rows = json::array();
    for (const auto& r : part.rows()) rows.push_back({{"a", r.a}, {"b", r.b}});
    out.push_back({{"rows", std::move(rows)}});
  }
  return out;
}

poly::DomainUnion domain_from_json(const json& j, std::size_t dim, const std::string& where) {
  auto bad = [&](const std::string& msg) { return Error(ErrorKind::kParse, where + ": " + msg); };
  if (!j.is_array()) throw bad("expected an array of parts");
  poly::DomainUnion d(dim);
  for (const auto& part : j) {
    if (!part.is_object() || part.size() != 1 || !part.contains("rows") || !part["rows"].is_array())
      throw bad("each part must be {\"rows\": [...]}");
    poly::Polyhedron p(dim);
    for (const auto& row : part["rows"]) {
      if (!row.is_object() || row.size() != 2 || !row.contains("a") || !row.contains("b"))
        throw bad("each row must be {\"a\": [...], \"b\": n}");
      poly::Row r;
      try {
        r.a = row["a"].get<poly::IntVec>();
        r.b = row["b"].get<poly::Int>();
      } catch (const json::exception&) {
        throw bad("row coefficients must be integers");
      }
      if (r.a.size() != dim)
        throw Error(ErrorKind::kDimensionMismatch, where + ": row has " + std::to_string(r.a.size()) +
                                                       " coefficients, expected " + std::to_string(dim));
      p.add_row(std::move(r));
    }
    d.add_part(std::move(p));
  }
  return d;
}

json literal_to_json(const poly::Literal& lit) {
  using poly::LiteralKind;
  switch (lit.kind) {
    case LiteralKind::kConstEq:
      return {{"kind", "CONST_EQ"}, {"dim", lit.dim}, {"value", lit.value}};
    case LiteralKind::kConstLower:
      return {{"kind", "CONST_LOWER"}, {"dim", lit.dim}, {"value", lit.value}};
    case LiteralKind::kConstUpper:
      return {{"kind", "CONST_UPPER"}, {"dim", lit.dim}, {"value", lit.value}};
    case LiteralKind::kAffineEq:
      return {{"kind", "AFFINE_EQ"}, {"a", lit.a}, {"b", lit.b}};
    case LiteralKind::kAffineIneq:
      return {{"kind", "AFFINE_INEQ"}, {"a", lit.a}, {"b", lit.b}};
  }
  return {};
}

}  // namespace tcpa::io
