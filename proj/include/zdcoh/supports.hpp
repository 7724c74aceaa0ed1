#pragma once

#include <algorithm>
#include <vector>

#include "space.hpp"

namespace zdcoh {

/// Per-coordinate constraint of a product shape: either everything or an
/// explicit finite value set (sorted, duplicate-free).
struct CoordConstraint {
  bool all = false;
  std::vector<long long> values;

  friend bool operator==(const CoordConstraint&, const CoordConstraint&) = default;
};

inline CoordConstraint coord_all() { return {true, {}}; }

inline CoordConstraint coord_finite(std::vector<long long> vs) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return {false, std::move(vs)};
}

inline CoordConstraint coord_point(long long v) { return {false, {v}}; }

inline bool constraint_empty(const CoordConstraint& c) { return !c.all && c.values.empty(); }

inline bool constraint_contains(const CoordConstraint& c, long long v) {
  return c.all || std::binary_search(c.values.begin(), c.values.end(), v);
}

inline bool constraint_superset(const CoordConstraint& a, const CoordConstraint& b) {
  if (a.all) return true;
  if (b.all) return false;
  return std::includes(a.values.begin(), a.values.end(), b.values.begin(), b.values.end());
}

inline bool constraint_intersects(const CoordConstraint& a, const CoordConstraint& b) {
  if (constraint_empty(a) || constraint_empty(b)) return false;
  if (a.all || b.all) return true;
  size_t i = 0, j = 0;
  while (i < a.values.size() && j < b.values.size()) {
    if (a.values[i] == b.values[j]) return true;
    if (a.values[i] < b.values[j]) ++i;
    else ++j;
  }
  return false;
}

/// Product subset of X: a label subset and one constraint per coordinate
/// (m lattice constraints first, then d acting constraints).
struct ShapeDescriptor {
  std::vector<int> labels;               // sorted label indices
  std::vector<CoordConstraint> coords;   // size m + d

  friend bool operator==(const ShapeDescriptor&, const ShapeDescriptor&) = default;
};

inline void validate_shape(const DiscreteSpace& sp, const ShapeDescriptor& s) {
  for (int l : s.labels)
    require(l >= 0 && l < static_cast<int>(sp.labels.size()), "shape label out of range");
  require(std::is_sorted(s.labels.begin(), s.labels.end()), "shape labels must be sorted");
  require(static_cast<int>(s.coords.size()) == sp.m + sp.d, "shape needs m+d constraints");
}

inline bool shape_empty(const ShapeDescriptor& s) {
  if (s.labels.empty()) return true;
  for (const auto& c : s.coords)
    if (constraint_empty(c)) return true;
  return false;
}

inline bool shape_finite(const ShapeDescriptor& s) {
  if (shape_empty(s)) return true;
  for (const auto& c : s.coords)
    if (c.all) return false;
  return true;
}

inline bool shape_contains_point(const ShapeDescriptor& s, const Point& p) {
  if (!std::binary_search(s.labels.begin(), s.labels.end(), p.label)) return false;
  size_t m = p.lattice.size();
  for (size_t i = 0; i < m; ++i)
    if (!constraint_contains(s.coords[i], p.lattice[i])) return false;
  for (size_t i = 0; i < p.position.size(); ++i)
    if (!constraint_contains(s.coords[m + i], p.position[i])) return false;
  return true;
}

inline bool shape_intersects(const ShapeDescriptor& a, const ShapeDescriptor& b) {
  if (shape_empty(a) || shape_empty(b)) return false;
  std::vector<int> common;
  std::set_intersection(a.labels.begin(), a.labels.end(), b.labels.begin(), b.labels.end(),
                        std::back_inserter(common));
  if (common.empty()) return false;
  for (size_t i = 0; i < a.coords.size(); ++i)
    if (!constraint_intersects(a.coords[i], b.coords[i])) return false;
  return true;
}

inline bool shape_superset(const ShapeDescriptor& a, const ShapeDescriptor& b) {
  if (shape_empty(b)) return true;
  if (!std::includes(a.labels.begin(), a.labels.end(), b.labels.begin(), b.labels.end())) return false;
  for (size_t i = 0; i < a.coords.size(); ++i)
    if (!constraint_superset(a.coords[i], b.coords[i])) return false;
  return true;
}

inline ShapeDescriptor window_to_shape(const DiscreteSpace& sp, const FiniteWindow& w) {
  validate_window(sp, w);
  ShapeDescriptor s;
  s.labels = w.labels;
  for (auto& [lo, hi] : w.intervals) {
    std::vector<long long> vs;
    for (long long v = lo; v <= hi; ++v) vs.push_back(v);
    s.coords.push_back(coord_finite(std::move(vs)));
  }
  return s;
}

/// Support family, kept intensional: a kind tag plus (for the generated kind)
/// an explicit finite generator list.  `orbit_finite` is the closure of the
/// finite sets under translation orbits: finite extent along every non-acting
/// coordinate, arbitrary extent along the acting ones.
enum class FamilyKind { finite_sets, all_sets, generated, orbit_finite };

struct SupportFamily {
  FamilyKind kind = FamilyKind::finite_sets;
  std::vector<ShapeDescriptor> generators;

  friend bool operator==(const SupportFamily&, const SupportFamily&) = default;
};

inline SupportFamily family_finite() { return {FamilyKind::finite_sets, {}}; }
inline SupportFamily family_all() { return {FamilyKind::all_sets, {}}; }
inline SupportFamily family_orbit_finite() { return {FamilyKind::orbit_finite, {}}; }
inline SupportFamily family_generated(std::vector<ShapeDescriptor> gens) {
  return {FamilyKind::generated, std::move(gens)};
}

inline void validate_family(const DiscreteSpace& sp, const SupportFamily& f) {
  for (const auto& g : f.generators) validate_shape(sp, g);
}

namespace detail {

/// Decides S subset-of union(gens) for product shapes whose constraints are
/// finite-or-all.  Splits finite coordinates to singletons; at a leaf, a union
/// of product sets covers a product set iff a single one contains it (every
/// generator missing an unbounded coordinate misses a deep witness point).
inline bool cover_rec(const ShapeDescriptor& S, const std::vector<ShapeDescriptor>& gens) {
  if (shape_empty(S)) return true;
  std::vector<ShapeDescriptor> live;
  for (const auto& g : gens)
    if (shape_intersects(g, S)) live.push_back(g);
  for (const auto& g : live)
    if (shape_superset(g, S)) return true;
  if (S.labels.size() > 1) {
    for (int l : S.labels) {
      ShapeDescriptor part = S;
      part.labels = {l};
      if (!cover_rec(part, live)) return false;
    }
    return true;
  }
  for (size_t i = 0; i < S.coords.size(); ++i) {
    if (S.coords[i].all || S.coords[i].values.size() < 2) continue;
    for (long long v : S.coords[i].values) {
      ShapeDescriptor part = S;
      part.coords[i] = coord_point(v);
      if (!cover_rec(part, live)) return false;
    }
    return true;
  }
  return false;  // leaf: single label, singleton-or-all coordinates, no single cover
}

}  // namespace detail

/// Membership test: is the set described by `shape` a member of the family?
inline bool contains(const DiscreteSpace& sp, const SupportFamily& fam, const ShapeDescriptor& shape) {
  validate_shape(sp, shape);
  validate_family(sp, fam);
  if (shape_empty(shape)) return true;
  switch (fam.kind) {
    case FamilyKind::all_sets: return true;
    case FamilyKind::finite_sets: return shape_finite(shape);
    case FamilyKind::orbit_finite:
      for (int i = 0; i < sp.m; ++i)
        if (shape.coords[i].all) return false;
      return true;
    case FamilyKind::generated: return detail::cover_rec(shape, fam.generators);
  }
  throw parse_error("unknown family kind");
}

/// Saturation by the acting group: every member may be thickened by the whole
/// orbit of each of its points.
inline SupportFamily saturate(const DiscreteSpace& sp, const SupportFamily& fam) {
  validate_family(sp, fam);
  switch (fam.kind) {
    case FamilyKind::all_sets: return family_all();
    case FamilyKind::orbit_finite: return family_orbit_finite();
    case FamilyKind::finite_sets: return family_orbit_finite();
    case FamilyKind::generated: {
      SupportFamily out = fam;
      for (auto& g : out.generators)
        for (int i = 0; i < sp.d; ++i) g.coords[sp.m + i] = coord_all();
      return out;
    }
  }
  throw parse_error("unknown family kind");
}

inline ShapeDescriptor project_shape(const QuotientMap& q, const ShapeDescriptor& s) {
  validate_shape(q.source, s);
  ShapeDescriptor out;
  out.labels = s.labels;
  for (int i = 0; i < q.source.m; ++i) out.coords.push_back(s.coords[i]);
  for (int i = 1; i <= q.source.d; ++i)
    if (!std::binary_search(q.removed.begin(), q.removed.end(), i))
      out.coords.push_back(s.coords[q.source.m + i - 1]);
  return out;
}

/// Image family on the quotient, generated by the images of the members.
inline SupportFamily pushforward(const SupportFamily& fam, const QuotientMap& q) {
  validate_family(q.source, fam);
  switch (fam.kind) {
    case FamilyKind::all_sets: return family_all();
    case FamilyKind::finite_sets: return family_finite();
    case FamilyKind::orbit_finite: return family_orbit_finite();
    case FamilyKind::generated: {
      SupportFamily out;
      out.kind = FamilyKind::generated;
      for (const auto& g : fam.generators) out.generators.push_back(project_shape(q, g));
      return out;
    }
  }
  throw parse_error("unknown family kind");
}

/// F-properness of one set: the transporter of F against any point (hence any
/// finite window) is finite iff F projects finitely to the acting coordinates.
inline bool check_F_proper(const DiscreteSpace& sp, const ShapeDescriptor& F) {
  validate_shape(sp, F);
  if (shape_empty(F)) return true;
  for (int i = 0; i < sp.d; ++i)
    if (F.coords[sp.m + i].all) return false;
  return true;
}

struct PhiProperness {
  bool proper = false;
  std::string reason;
};

/// A family is proper when each member transports finitely against points.
/// Families containing a full orbit force a compact acting group, i.e. d = 0.
inline PhiProperness check_phi_proper(const DiscreteSpace& sp, const SupportFamily& fam) {
  validate_family(sp, fam);
  switch (fam.kind) {
    case FamilyKind::finite_sets: return {true, ""};
    case FamilyKind::all_sets:
      if (sp.d == 0) return {true, ""};
      return {false, "family contains invariant sets but the acting group is not compact"};
    case FamilyKind::orbit_finite:
      if (sp.d == 0) return {true, ""};
      return {false, "orbit-saturated family is not proper for a noncompact acting group"};
    case FamilyKind::generated:
      for (const auto& g : fam.generators)
        if (!check_F_proper(sp, g))
          return {false, "a generator has infinite extent along an acting coordinate"};
      return {true, ""};
  }
  throw parse_error("unknown family kind");
}

}  // namespace zdcoh
