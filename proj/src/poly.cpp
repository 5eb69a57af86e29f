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

#include "tcpa/poly.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include "tcpa/error.hpp"

namespace tcpa::poly {

namespace {

Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Int ceil_div(Int a, Int b) { return -floor_div(-a, b); }

void require_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    std::ostringstream os;
    os << what << ": dimension mismatch (expected " << expected << ", got " << got << ")";
    throw Error(ErrorKind::kDimensionMismatch, os.str());
  }
}

IntVec unit(std::size_t dim, std::size_t d, Int v) {
  IntVec a(dim, 0);
  a[d] = v;
  return a;
}

// Rows bounding 0 <= j_d <= hi_d for every dimension.
std::vector<Row> box_rows(std::span<const Int> hi) {
  std::vector<Row> rows;
  for (std::size_t d = 0; d < hi.size(); ++d) {
    rows.push_back({unit(hi.size(), d, 1), 0});
    rows.push_back({unit(hi.size(), d, -1), -hi[d]});
  }
  return rows;
}

IntVec digits_of(Int m, const ScanBox& box) {
  const std::size_t n = box.dim();
  IntVec digits(n, 0);
  for (std::size_t d = 0; d + 1 < n; ++d) digits[d] = (m / box.stride(d)) % box.extent(d);
  digits[n - 1] = m / box.stride(n - 1);
  return digits;
}

}  // namespace

Int dot(std::span<const Int> a, std::span<const Int> j) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * j[i];
  return s;
}

Row Row::normalized() const {
  Int g = 0;
  for (Int c : a) g = std::gcd(g, c < 0 ? -c : c);
  if (g == 0) return {a, b > 0 ? 1 : 0};
  if (g == 1) return *this;
  Row r{a, ceil_div(b, g)};
  for (Int& c : r.a) c /= g;
  return r;
}

Row Row::negated_complement() const {
  Row r{a, 1 - b};
  for (Int& c : r.a) c = -c;
  return r;
}

std::size_t RowHash::operator()(const Row& r) const {
  std::size_t h = std::hash<Int>{}(r.b);
  for (Int c : r.a) h = h * 1000003u ^ std::hash<Int>{}(c);
  return h;
}

// --- Polyhedron -------------------------------------------------------------

Polyhedron::Polyhedron(std::size_t dim, std::vector<Row> rows) : dim_(dim) {
  for (auto& r : rows) add_row(std::move(r));
}

void Polyhedron::add_row(Row row) {
  require_dim(dim_, row.a.size(), "Polyhedron::add_row");
  rows_.push_back(std::move(row));
}

bool Polyhedron::contains(std::span<const Int> j) const {
  require_dim(dim_, j.size(), "Polyhedron::contains");
  return std::all_of(rows_.begin(), rows_.end(), [&](const Row& r) { return r.holds(j); });
}

Polyhedron Polyhedron::intersect(const Polyhedron& other) const {
  require_dim(dim_, other.dim_, "Polyhedron::intersect");
  Polyhedron p = *this;
  p.rows_.insert(p.rows_.end(), other.rows_.begin(), other.rows_.end());
  return p;
}

Polyhedron Polyhedron::translated(std::span<const Int> t) const {
  require_dim(dim_, t.size(), "Polyhedron::translated");
  Polyhedron p(dim_);
  for (const Row& r : rows_) p.rows_.push_back({r.a, r.b + dot(r.a, t)});
  return p;
}

Polyhedron& Polyhedron::lower(std::size_t d, Int v) {
  add_row({unit(dim_, d, 1), v});
  return *this;
}

Polyhedron& Polyhedron::upper(std::size_t d, Int v) {
  add_row({unit(dim_, d, -1), -v});
  return *this;
}

Polyhedron& Polyhedron::equal(std::size_t d, Int v) { return lower(d, v).upper(d, v); }

Polyhedron& Polyhedron::affine_ge(IntVec a, Int b) {
  add_row({std::move(a), b});
  return *this;
}

Polyhedron& Polyhedron::affine_eq(IntVec a, Int b) {
  Row r{a, b};
  add_row(r);
  add_row({[&] {
             for (Int& c : a) c = -c;
             return a;
           }(),
           -b});
  return *this;
}

// --- DomainUnion ------------------------------------------------------------

DomainUnion::DomainUnion(Polyhedron p) : dim_(p.dim()) { parts_.push_back(std::move(p)); }

DomainUnion::DomainUnion(std::size_t dim, std::vector<Polyhedron> parts) : dim_(dim) {
  for (auto& p : parts) add_part(std::move(p));
}

void DomainUnion::add_part(Polyhedron p) {
  require_dim(dim_, p.dim(), "DomainUnion::add_part");
  parts_.push_back(std::move(p));
}

bool DomainUnion::contains(std::span<const Int> j) const {
  return std::any_of(parts_.begin(), parts_.end(),
                     [&](const Polyhedron& p) { return p.contains(j); });
}

DomainUnion DomainUnion::unite(const DomainUnion& other) const {
  require_dim(dim_, other.dim_, "DomainUnion::unite");
  DomainUnion u = *this;
  for (const auto& p : other.parts_) u.parts_.push_back(p);
  return u;
}

DomainUnion DomainUnion::intersect(const DomainUnion& other) const {
  require_dim(dim_, other.dim_, "DomainUnion::intersect");
  DomainUnion u(dim_);
  for (const auto& p : parts_)
    for (const auto& q : other.parts_) u.parts_.push_back(p.intersect(q));
  return u;
}

// --- ScanBox ----------------------------------------------------------------

ScanBox::ScanBox(IntVec extents, Int epilog) : extents_(std::move(extents)), epilog_(epilog) {
  if (extents_.empty()) throw Error(ErrorKind::kValidation, "scan box needs at least one dimension");
  if (epilog_ < 0) throw Error(ErrorKind::kValidation, "epilog must be >= 0");
  base_ = 1;
  strides_.resize(extents_.size());
  for (std::size_t d = 0; d < extents_.size(); ++d) {
    if (extents_[d] < 1) throw Error(ErrorKind::kValidation, "scan box extents must be >= 1");
    strides_[d] = base_;
    base_ *= extents_[d];
  }
}

Int ScanBox::extended_extent(std::size_t d) const {
  if (d + 1 < dim()) return extents_[d];
  return extents_[d] + ceil_div(epilog_, strides_[d]);
}

Int ScanBox::position_of(std::span<const Int> j) const {
  require_dim(dim(), j.size(), "ScanBox::position_of");
  return dot(strides_, j);
}

IntVec ScanBox::point_at(Int pos) const {
  IntVec j(dim());
  for (std::size_t d = 0; d + 1 < dim(); ++d) {
    j[d] = pos % extents_[d];
    pos /= extents_[d];
  }
  j[dim() - 1] = pos;
  return j;
}

bool ScanBox::in_base(std::span<const Int> j) const {
  require_dim(dim(), j.size(), "ScanBox::in_base");
  for (std::size_t d = 0; d < dim(); ++d)
    if (j[d] < 0 || j[d] >= extents_[d]) return false;
  return true;
}

bool ScanBox::in_scan(std::span<const Int> j) const {
  require_dim(dim(), j.size(), "ScanBox::in_scan");
  for (std::size_t d = 0; d < dim(); ++d)
    if (j[d] < 0 || j[d] >= extended_extent(d)) return false;
  return position_of(j) < positions();
}

std::size_t ScanBox::step_dimension(Int pos) const {
  IntVec j = point_at(pos);
  std::size_t d = 0;
  while (d + 1 < dim() && j[d] == extents_[d] - 1) ++d;
  return d;
}

// --- Literals ---------------------------------------------------------------

std::string to_string(LiteralKind kind) {
  switch (kind) {
    case LiteralKind::kConstEq: return "const_eq";
    case LiteralKind::kConstLower: return "const_lower";
    case LiteralKind::kConstUpper: return "const_upper";
    case LiteralKind::kAffineEq: return "affine_eq";
    case LiteralKind::kAffineIneq: return "affine_ineq";
  }
  return "?";
}

bool Literal::holds(std::span<const Int> j) const {
  switch (kind) {
    case LiteralKind::kConstEq: return j[dim] == value;
    case LiteralKind::kConstLower: return j[dim] >= value;
    case LiteralKind::kConstUpper: return j[dim] <= value;
    case LiteralKind::kAffineEq: return dot(a, j) == b;
    case LiteralKind::kAffineIneq: return dot(a, j) >= b;
  }
  return false;
}

std::vector<Row> Literal::to_rows(std::size_t n) const {
  switch (kind) {
    case LiteralKind::kConstEq: return {{unit(n, dim, 1), value}, {unit(n, dim, -1), -value}};
    case LiteralKind::kConstLower: return {{unit(n, dim, 1), value}};
    case LiteralKind::kConstUpper: return {{unit(n, dim, -1), -value}};
    case LiteralKind::kAffineIneq: return {{a, b}};
    case LiteralKind::kAffineEq: {
      IntVec na = a;
      for (Int& c : na) c = -c;
      return {{a, b}, {std::move(na), -b}};
    }
  }
  return {};
}

std::string Literal::str() const {
  std::ostringstream os;
  switch (kind) {
    case LiteralKind::kConstEq: os << "j" << dim << " = " << value; break;
    case LiteralKind::kConstLower: os << "j" << dim << " >= " << value; break;
    case LiteralKind::kConstUpper: os << "j" << dim << " <= " << value; break;
    case LiteralKind::kAffineEq:
    case LiteralKind::kAffineIneq: {
      bool first = true;
      for (std::size_t d = 0; d < a.size(); ++d) {
        if (a[d] == 0) continue;
        os << (a[d] < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
        if (a[d] != 1 && a[d] != -1) os << (a[d] < 0 ? -a[d] : a[d]) << "*";
        os << "j" << d;
        first = false;
      }
      if (first) os << "0";
      os << (kind == LiteralKind::kAffineEq ? " = " : " >= ") << b;
      break;
    }
  }
  return os.str();
}

std::vector<Literal> classify_literals(const Polyhedron& p) {
  const std::size_t n = p.dim();
  std::map<std::size_t, Int> lo, hi;
  // Canonical direction (first nonzero coefficient positive) -> bounds on a·j.
  std::map<IntVec, std::pair<std::optional<Int>, std::optional<Int>>> affine;
  bool infeasible = false;

  for (const Row& raw : p.rows()) {
    Row r = raw.normalized();
    std::size_t nonzero = 0, where = 0;
    for (std::size_t d = 0; d < n; ++d)
      if (r.a[d] != 0) ++nonzero, where = d;
    if (nonzero == 0) {
      if (r.b > 0) infeasible = true;
      continue;
    }
    if (nonzero == 1) {
      if (r.a[where] > 0) {
        auto [it, fresh] = lo.try_emplace(where, r.b);
        if (!fresh) it->second = std::max(it->second, r.b);
      } else {
        auto [it, fresh] = hi.try_emplace(where, -r.b);
        if (!fresh) it->second = std::min(it->second, -r.b);
      }
      continue;
    }
    auto first = std::find_if(r.a.begin(), r.a.end(), [](Int c) { return c != 0; });
    auto& bounds = [&]() -> auto& {
      if (*first > 0) return affine[r.a];
      IntVec c = r.a;
      for (Int& x : c) x = -x;
      return affine[c];
    }();
    if (*first > 0) {
      bounds.first = bounds.first ? std::max(*bounds.first, r.b) : r.b;
    } else {
      bounds.second = bounds.second ? std::min(*bounds.second, -r.b) : -r.b;
    }
  }

  std::vector<Literal> out;
  if (infeasible) out.push_back(Literal::affine_ineq(IntVec(n, 0), 1));
  for (std::size_t d = 0; d < n; ++d) {
    auto l = lo.find(d);
    auto h = hi.find(d);
    if (l != lo.end() && h != hi.end() && l->second == h->second) {
      out.push_back(Literal::const_eq(d, l->second));
      continue;
    }
    if (l != lo.end()) out.push_back(Literal::const_lower(d, l->second));
    if (h != hi.end()) out.push_back(Literal::const_upper(d, h->second));
  }
  for (const auto& [a, bounds] : affine) {
    const auto& [l, h] = bounds;
    if (l && h && *l == *h) {
      out.push_back(Literal::affine_eq(a, *l));
      continue;
    }
    if (l) out.push_back(Literal::affine_ineq(a, *l));
    if (h) {
      IntVec na = a;
      for (Int& c : na) c = -c;
      out.push_back(Literal::affine_ineq(na, -*h));
    }
  }
  return out;
}

// --- PointSpace -------------------------------------------------------------

PointSpace::PointSpace(ScanBox box) : box_(std::move(box)) {
  const std::size_t n = box_.dim();
  coords_.resize(size() * n);
  IntVec j(n, 0);
  for (std::size_t pos = 0; pos < size(); ++pos) {
    std::copy(j.begin(), j.end(), coords_.begin() + static_cast<std::ptrdiff_t>(pos * n));
    std::size_t d = 0;
    while (d + 1 < n && j[d] == box_.extent(d) - 1) j[d++] = 0;
    ++j[d];
  }
}

void PointSpace::check_dim(std::size_t dim) const { require_dim(box_.dim(), dim, "PointSpace"); }

PointSet PointSpace::base() const {
  PointSet s(size());
  for (std::size_t pos = 0; pos < static_cast<std::size_t>(box_.base_positions()); ++pos) s.set(pos);
  return s;
}

const PointSet& PointSpace::points(const Row& row) {
  check_dim(row.a.size());
  auto it = row_cache_.find(row);
  if (it != row_cache_.end()) return it->second;
  PointSet s(size());
  for (std::size_t pos = 0; pos < size(); ++pos)
    if (row.holds(point(pos))) s.set(pos);
  return row_cache_.emplace(row, std::move(s)).first->second;
}

PointSet PointSpace::points(const Polyhedron& p) {
  check_dim(p.dim());
  PointSet s = all();
  for (const Row& r : p.rows()) {
    s &= points(r);
    if (s.none()) break;
  }
  return s;
}

PointSet PointSpace::points(const DomainUnion& d) {
  check_dim(d.dim());
  PointSet s = none();
  for (const auto& p : d.parts()) s |= points(p);
  return s;
}

Polyhedron PointSpace::simplify(const Polyhedron& p) {
  check_dim(p.dim());
  std::vector<Row> rows;
  for (const Row& r : p.rows()) {
    Row nr = r.normalized();
    if (std::find(rows.begin(), rows.end(), nr) == rows.end()) rows.push_back(std::move(nr));
  }
  const PointSet target = points(Polyhedron(p.dim(), rows));
  if (target.none()) return Polyhedron(p.dim(), std::move(rows));

  const PointSet full = all();
  std::erase_if(rows, [&](const Row& r) { return points(r) == full; });
  for (std::size_t i = rows.size(); i-- > 0;) {
    PointSet s = full;
    for (std::size_t k = 0; k < rows.size(); ++k)
      if (k != i) s &= points(rows[k]);
    if (s == target) rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(i));
  }
  return Polyhedron(p.dim(), std::move(rows));
}

DomainUnion PointSpace::simplify(const DomainUnion& d) {
  check_dim(d.dim());
  std::vector<Polyhedron> parts;
  std::vector<PointSet> sets;
  for (const auto& p : d.parts()) {
    Polyhedron s = simplify(p);
    PointSet pts = points(s);
    if (pts.none()) continue;
    parts.push_back(std::move(s));
    sets.push_back(std::move(pts));
  }

  // Parts covered by the rest.
  for (std::size_t i = parts.size(); i-- > 0;) {
    PointSet others = none();
    for (std::size_t k = 0; k < parts.size(); ++k)
      if (k != i) others |= sets[k];
    if (sets[i].is_subset_of(others)) {
      parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(i));
      sets.erase(sets.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }

  // Pairwise hull merges: keep the rows of either part that hold on the
  // other part; accept when that hull adds no points.
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < parts.size() && !merged; ++i) {
      for (std::size_t k = i + 1; k < parts.size() && !merged; ++k) {
        Polyhedron hull(d.dim());
        for (const Row& r : parts[i].rows())
          if (sets[k].is_subset_of(points(r))) hull.add_row(r);
        for (const Row& r : parts[k].rows())
          if (sets[i].is_subset_of(points(r))) hull.add_row(r);
        PointSet both = sets[i] | sets[k];
        if (points(hull) != both) continue;
        parts[i] = simplify(hull);
        sets[i] = std::move(both);
        parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(k));
        sets.erase(sets.begin() + static_cast<std::ptrdiff_t>(k));
        merged = true;
      }
    }
  }
  return DomainUnion(d.dim(), std::move(parts));
}

// --- Set predicates ---------------------------------------------------------

bool is_empty(const Polyhedron& p, PointSpace& space) { return space.points(p).none(); }
bool is_empty(const DomainUnion& d, PointSpace& space) { return space.points(d).none(); }

bool is_subset(const DomainUnion& a, const DomainUnion& b, PointSpace& space) {
  require_dim(a.dim(), b.dim(), "is_subset");
  return space.points(a).is_subset_of(space.points(b));
}

bool intersects(const DomainUnion& a, const DomainUnion& b, PointSpace& space) {
  require_dim(a.dim(), b.dim(), "intersects");
  return space.points(a).intersects(space.points(b));
}

bool is_empty(const Polyhedron& p, const ScanBox& box) {
  require_dim(box.dim(), p.dim(), "is_empty");
  PointSpace space(box);
  return is_empty(p, space);
}

bool is_subset(const DomainUnion& a, const DomainUnion& b, const ScanBox& box) {
  require_dim(a.dim(), b.dim(), "is_subset");
  require_dim(box.dim(), a.dim(), "is_subset");
  PointSpace space(box);
  return is_subset(a, b, space);
}

bool intersects(const DomainUnion& a, const DomainUnion& b, const ScanBox& box) {
  require_dim(a.dim(), b.dim(), "intersects");
  require_dim(box.dim(), a.dim(), "intersects");
  PointSpace space(box);
  return intersects(a, b, space);
}

DomainUnion scan_shift(const DomainUnion& d, Int m, const ScanBox& box) {
  require_dim(box.dim(), d.dim(), "scan_shift");
  PointSpace space(box);
  return scan_shift(d, m, space);
}

// --- Scan-order shifts ------------------------------------------------------

DomainUnion scan_shift(const DomainUnion& d, Int m, PointSpace& space) {
  const ScanBox& box = space.box();
  const std::size_t n = box.dim();
  require_dim(n, d.dim(), "scan_shift");
  if (m < 0) throw Error(ErrorKind::kOutOfRange, "scan_shift: negative shift");
  if (m == 0) return d;

  PointSet src = space.points(d) & space.base();
  if (src.none()) return DomainUnion::empty(n);
  Int last_src = 0;
  for (auto pos = src.find_first(); pos != PointSet::npos; pos = src.find_next(pos))
    last_src = static_cast<Int>(pos);
  if (last_src + m > box.last_position()) {
    std::ostringstream os;
    os << "scan_shift: image of position " << last_src << " by " << m
       << " exceeds the scanned range (" << box.positions() << " positions); enlarge the epilog";
    throw Error(ErrorKind::kOutOfRange, os.str());
  }

  const IntVec digits = digits_of(m, box);
  IntVec hi = box.extents();
  for (Int& h : hi) h -= 1;
  const std::vector<Row> source = box_rows(hi);
  DomainUnion out(n);
  const std::size_t combos = std::size_t{1} << (n - 1);
  for (std::size_t mask = 0; mask < combos; ++mask) {
    // Bit d-1 of mask is the carry into dimension d.
    auto carry = [&](std::size_t d) -> Int { return d == 0 ? 0 : Int((mask >> (d - 1)) & 1u); };
    Polyhedron guard(n);
    IntVec t(n, 0);
    bool feasible = true;
    for (std::size_t d = 0; d + 1 < n; ++d) {
      const Int in = digits[d] + carry(d);
      const Int N = box.extent(d);
      if (carry(d + 1)) {
        if (N - in > N - 1) feasible = false;
        guard.lower(d, N - in);
        t[d] = in - N;
      } else {
        if (N - 1 - in < 0) feasible = false;
        guard.upper(d, N - 1 - in);
        t[d] = in;
      }
    }
    if (!feasible) continue;
    t[n - 1] = digits[n - 1] + carry(n - 1);
    for (const auto& part : d.parts()) {
      Polyhedron q = part.intersect(guard).intersect(Polyhedron(n, source));
      Polyhedron img = q.translated(t);
      if (!is_empty(img, space)) out.add_part(std::move(img));
    }
  }
  return space.simplify(out);
}

DomainUnion scan_preimage(const DomainUnion& d, Int m, PointSpace& space) {
  const ScanBox& box = space.box();
  const std::size_t n = box.dim();
  require_dim(n, d.dim(), "scan_preimage");
  if (m < 0) throw Error(ErrorKind::kOutOfRange, "scan_preimage: negative shift");
  if (m == 0) return d;
  if (m > box.last_position()) return DomainUnion::empty(n);

  const IntVec digits = digits_of(m, box);
  IntVec hi(n);
  for (std::size_t k = 0; k < n; ++k) hi[k] = box.extended_extent(k) - 1;
  const std::vector<Row> source = box_rows(hi);

  DomainUnion out(n);
  const std::size_t combos = std::size_t{1} << (n - 1);
  for (std::size_t mask = 0; mask < combos; ++mask) {
    // Bit d-1 of mask is the borrow into dimension d.
    auto borrow = [&](std::size_t k) -> Int { return k == 0 ? 0 : Int((mask >> (k - 1)) & 1u); };
    Polyhedron guard(n);
    IntVec t(n, 0);
    bool feasible = true;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const Int in = digits[k] + borrow(k);
      const Int N = box.extent(k);
      if (borrow(k + 1)) {
        if (in - 1 < 0) feasible = false;
        guard.upper(k, in - 1);
        t[k] = N - in;
      } else {
        if (in > N - 1) feasible = false;
        guard.lower(k, in);
        t[k] = -in;
      }
    }
    if (!feasible) continue;
    const Int in_top = digits[n - 1] + borrow(n - 1);
    guard.lower(n - 1, in_top);
    t[n - 1] = -in_top;
    for (const auto& part : d.parts()) {
      Polyhedron q = part.intersect(guard).intersect(Polyhedron(n, source));
      Polyhedron img = q.translated(t);
      if (!is_empty(img, space)) out.add_part(std::move(img));
    }
  }
  // Sources past the last scanned position land on the tail of the range.
  return space.simplify(restrict_to_prefix(out, box.last_position() - m, space));
}

DomainUnion subtract(const DomainUnion& a, const DomainUnion& b, PointSpace& space) {
  require_dim(a.dim(), b.dim(), "subtract");
  const std::size_t n = a.dim();
  DomainUnion result = a;
  for (const auto& q : b.parts()) {
    const PointSet qpts = space.points(q);
    DomainUnion next(n);
    for (const auto& r : result.parts()) {
      const PointSet rpts = space.points(r);
      if (!rpts.intersects(qpts)) {
        next.add_part(r);
        continue;
      }
      // r \ q = U_i ( r  AND  q_0..q_{i-1}  AND  not q_i )
      Polyhedron prefix = r;
      for (const Row& row : q.rows()) {
        Polyhedron piece = prefix;
        piece.add_row(row.negated_complement());
        if (!is_empty(piece, space)) next.add_part(space.simplify(piece));
        prefix.add_row(row);
      }
    }
    result = std::move(next);
  }
  return result;
}

DomainUnion scan_prefix(Int max_pos, const ScanBox& box) {
  const std::size_t n = box.dim();
  DomainUnion out(n);
  if (max_pos < 0) return out;
  const IntVec p = box.point_at(max_pos);
  // Lexicographic "j <= p" with the outermost dimension most significant.
  for (std::size_t d = n; d-- > 0;) {
    if (p[d] >= 1) {
      Polyhedron piece(n);
      for (std::size_t e = d + 1; e < n; ++e) piece.equal(e, p[e]);
      piece.upper(d, p[d] - 1);
      out.add_part(std::move(piece));
    }
  }
  out.add_part(point_domain(p));
  return out;
}

DomainUnion restrict_to_prefix(const DomainUnion& d, Int max_pos, PointSpace& space) {
  const std::size_t n = d.dim();
  DomainUnion out(n);
  if (max_pos < 0) return out;
  std::optional<DomainUnion> prefix;
  for (const auto& part : d.parts()) {
    const PointSet pts = space.points(part);
    if (pts.find_next(static_cast<std::size_t>(max_pos)) == PointSet::npos) {
      out.add_part(part);
      continue;
    }
    if (!prefix) prefix = scan_prefix(max_pos, space.box());
    for (const auto& piece : prefix->parts()) {
      Polyhedron q = part.intersect(piece);
      if (!is_empty(q, space)) out.add_part(std::move(q));
    }
  }
  return out;
}

Polyhedron point_domain(std::span<const Int> j) {
  Polyhedron p(j.size());
  for (std::size_t d = 0; d < j.size(); ++d) p.equal(d, j[d]);
  return p;
}

std::ostream& operator<<(std::ostream& os, const Row& r) {
  os << "[";
  for (std::size_t d = 0; d < r.a.size(); ++d) os << (d ? "," : "") << r.a[d];
  return os << "]>=" << r.b;
}

std::ostream& operator<<(std::ostream& os, const Polyhedron& p) {
  os << "{";
  for (std::size_t i = 0; i < p.rows().size(); ++i) os << (i ? ", " : "") << p.rows()[i];
  return os << "}";
}

std::ostream& operator<<(std::ostream& os, const DomainUnion& d) {
  if (d.parts().empty()) return os << "{}";
  for (std::size_t i = 0; i < d.parts().size(); ++i) os << (i ? " | " : "") << d.parts()[i];
  return os;
}

}  // namespace tcpa::poly
