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

// Exact integer polyhedra over a bounded scan box.
//
// Every set in this library lives inside one tile (a rectangular box) that
// is traversed in odometer order with dimension 0 fastest. Optionally the
// scan continues for `epilog` extra positions past the end of the tile; those
// positions are realized by letting the outermost coordinate run past its
// extent. Membership is always "raw rows hold AND the point is one of the
// scanned positions", so set predicates are decided exactly by enumerating
// the scanned points. `PointSpace` caches one bitset per distinct row, which
// turns intersection/containment into word-wise bit operations.

#ifndef TCPA_POLY_HPP_
#define TCPA_POLY_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace tcpa::poly {

using Int = std::int64_t;
using IntVec = std::vector<Int>;
using PointSet = boost::dynamic_bitset<std::uint64_t>;

Int dot(std::span<const Int> a, std::span<const Int> j);

/// One constraint a·j >= b.
struct Row {
  IntVec a;
  Int b = 0;

  bool holds(std::span<const Int> j) const { return dot(a, j) >= b; }
  /// Divides by the gcd of the coefficients and tightens b accordingly.
  Row normalized() const;
  Row negated_complement() const;  // a·j <= b-1, i.e. -a·j >= 1-b

  friend bool operator==(const Row&, const Row&) = default;
  friend auto operator<=>(const Row&, const Row&) = default;
};

struct RowHash {
  std::size_t operator()(const Row& r) const;
};

class Polyhedron {
 public:
  Polyhedron() = default;
  explicit Polyhedron(std::size_t dim) : dim_(dim) {}
  Polyhedron(std::size_t dim, std::vector<Row> rows);

  std::size_t dim() const { return dim_; }
  const std::vector<Row>& rows() const { return rows_; }
  void add_row(Row row);

  bool contains(std::span<const Int> j) const;
  Polyhedron intersect(const Polyhedron& other) const;
  /// Image under j -> j + t.
  Polyhedron translated(std::span<const Int> t) const;

  // Convenience builders used throughout tests and generators.
  Polyhedron& lower(std::size_t d, Int v);  // j_d >= v
  Polyhedron& upper(std::size_t d, Int v);  // j_d <= v
  Polyhedron& equal(std::size_t d, Int v);
  Polyhedron& affine_ge(IntVec a, Int b);
  Polyhedron& affine_eq(IntVec a, Int b);

  friend bool operator==(const Polyhedron&, const Polyhedron&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Row> rows_;
};

/// Finite union of polyhedra; no parts means the empty set.
class DomainUnion {
 public:
  DomainUnion() = default;
  explicit DomainUnion(std::size_t dim) : dim_(dim) {}
  DomainUnion(Polyhedron p);  // NOLINT(google-explicit-constructor)
  DomainUnion(std::size_t dim, std::vector<Polyhedron> parts);

  static DomainUnion empty(std::size_t dim) { return DomainUnion(dim); }
  static DomainUnion universe(std::size_t dim) {
    return DomainUnion(Polyhedron(dim));
  }

  std::size_t dim() const { return dim_; }
  const std::vector<Polyhedron>& parts() const { return parts_; }
  bool has_no_parts() const { return parts_.empty(); }
  void add_part(Polyhedron p);

  bool contains(std::span<const Int> j) const;
  DomainUnion unite(const DomainUnion& other) const;
  /// Pairwise product of parts; callers simplify afterwards.
  DomainUnion intersect(const DomainUnion& other) const;

  friend bool operator==(const DomainUnion&, const DomainUnion&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Polyhedron> parts_;
};

/// Tile extents plus the epilog extension of the scan.
class ScanBox {
 public:
  ScanBox() = default;
  explicit ScanBox(IntVec extents, Int epilog = 0);

  std::size_t dim() const { return extents_.size(); }
  const IntVec& extents() const { return extents_; }
  Int extent(std::size_t d) const { return extents_[d]; }
  Int epilog() const { return epilog_; }
  /// Positions of the tile proper, P = prod(N).
  Int base_positions() const { return base_; }
  /// Scanned positions including the epilog, P + E.
  Int positions() const { return base_ + epilog_; }
  Int last_position() const { return positions() - 1; }
  /// Position increment of a unit step in dimension d.
  Int stride(std::size_t d) const { return strides_[d]; }
  /// Extent of the bounding box of the scanned range; only the outermost
  /// dimension differs from extent().
  Int extended_extent(std::size_t d) const;

  Int position_of(std::span<const Int> j) const;
  IntVec point_at(Int pos) const;
  bool in_base(std::span<const Int> j) const;
  bool in_scan(std::span<const Int> j) const;
  /// Dimension incremented when moving from position pos to pos+1.
  std::size_t step_dimension(Int pos) const;

  ScanBox with_epilog(Int epilog) const { return ScanBox(extents_, epilog); }

  friend bool operator==(const ScanBox& a, const ScanBox& b) {
    return a.extents_ == b.extents_ && a.epilog_ == b.epilog_;
  }

 private:
  IntVec extents_;
  IntVec strides_;
  Int epilog_ = 0;
  Int base_ = 0;
};

enum class LiteralKind { kConstEq, kConstLower, kConstUpper, kAffineEq, kAffineIneq };

std::string to_string(LiteralKind kind);

/// A bound on the loop indices as evaluated by the controller hardware.
/// Constant kinds use (dim, value); affine kinds use (a, b).
struct Literal {
  LiteralKind kind = LiteralKind::kConstLower;
  std::size_t dim = 0;
  Int value = 0;
  IntVec a;
  Int b = 0;

  static Literal const_eq(std::size_t d, Int v) { return {LiteralKind::kConstEq, d, v, {}, 0}; }
  static Literal const_lower(std::size_t d, Int v) { return {LiteralKind::kConstLower, d, v, {}, 0}; }
  static Literal const_upper(std::size_t d, Int v) { return {LiteralKind::kConstUpper, d, v, {}, 0}; }
  static Literal affine_eq(IntVec a, Int b) { return {LiteralKind::kAffineEq, 0, 0, std::move(a), b}; }
  static Literal affine_ineq(IntVec a, Int b) { return {LiteralKind::kAffineIneq, 0, 0, std::move(a), b}; }

  bool is_affine() const {
    return kind == LiteralKind::kAffineEq || kind == LiteralKind::kAffineIneq;
  }
  bool holds(std::span<const Int> j) const;
  std::vector<Row> to_rows(std::size_t dim) const;
  std::string str() const;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// Splits a polyhedron into hardware literals. Opposite row pairs become
/// equalities; per dimension and per affine direction only the tightest
/// bounds survive. The conjunction of the result is set-equal to p.
std::vector<Literal> classify_literals(const Polyhedron& p);

/// Enumeration context for one scan box. Not thread-safe (the row cache is
/// mutated on lookup); use one instance per thread.
class PointSpace {
 public:
  explicit PointSpace(ScanBox box);

  const ScanBox& box() const { return box_; }
  std::size_t dim() const { return box_.dim(); }
  std::size_t size() const { return static_cast<std::size_t>(box_.positions()); }
  std::span<const Int> point(std::size_t pos) const {
    return {coords_.data() + pos * dim(), dim()};
  }

  PointSet none() const { return PointSet(size()); }
  PointSet all() const { return PointSet(size()).set(); }
  /// Positions of the tile proper (no epilog).
  PointSet base() const;

  const PointSet& points(const Row& row);
  PointSet points(const Polyhedron& p);
  PointSet points(const DomainUnion& d);

  /// Drops empty parts, redundant rows, parts covered by other parts, and
  /// merges pairs whose union is exactly described by a common hull.
  DomainUnion simplify(const DomainUnion& d);
  Polyhedron simplify(const Polyhedron& p);

 private:
  void check_dim(std::size_t dim) const;

  ScanBox box_;
  IntVec coords_;
  std::unordered_map<Row, PointSet, RowHash> row_cache_;
};

// Set predicates relative to the scanned points of a box. These construct a
// temporary PointSpace; pipeline code holds a PointSpace and uses the
// overloads below instead.
bool is_empty(const Polyhedron& p, const ScanBox& box);
bool is_subset(const DomainUnion& a, const DomainUnion& b, const ScanBox& box);
bool intersects(const DomainUnion& a, const DomainUnion& b, const ScanBox& box);
DomainUnion scan_shift(const DomainUnion& d, Int m, const ScanBox& box);

bool is_empty(const Polyhedron& p, PointSpace& space);
bool is_empty(const DomainUnion& d, PointSpace& space);
bool is_subset(const DomainUnion& a, const DomainUnion& b, PointSpace& space);
bool intersects(const DomainUnion& a, const DomainUnion& b, PointSpace& space);

/// { succ^m(j) : j in d, j in the tile proper }, m >= 0, where succ is the
/// scan-order successor. Throws kOutOfRange if an image would fall past the
/// last scanned position.
DomainUnion scan_shift(const DomainUnion& d, Int m, PointSpace& space);

/// { j scanned : pos(j) + m <= last, succ^m(j) in d }, m >= 0.
DomainUnion scan_preimage(const DomainUnion& d, Int m, PointSpace& space);

/// Points of a that are not in b, as a union of polyhedra.
DomainUnion subtract(const DomainUnion& a, const DomainUnion& b, PointSpace& space);

/// { j : pos(j) <= max_pos } over the scanned range, using constant bounds
/// only (lexicographic prefix decomposition).
DomainUnion scan_prefix(Int max_pos, const ScanBox& box);

/// d restricted to positions <= max_pos; parts already inside are untouched.
DomainUnion restrict_to_prefix(const DomainUnion& d, Int max_pos, PointSpace& space);

/// The single point j as a conjunction of constant equalities.
Polyhedron point_domain(std::span<const Int> j);

std::ostream& operator<<(std::ostream& os, const Row& r);
std::ostream& operator<<(std::ostream& os, const Polyhedron& p);
std::ostream& operator<<(std::ostream& os, const DomainUnion& d);

}  // namespace tcpa::poly

#endif  // TCPA_POLY_HPP_
