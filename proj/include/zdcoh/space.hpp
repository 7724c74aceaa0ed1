#pragma once

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "ring.hpp"

namespace zdcoh {

/// Element of the acting group Z^d.
struct GroupVector {
  std::vector<long long> e;

  friend bool operator==(const GroupVector&, const GroupVector&) = default;
  friend bool operator<(const GroupVector& a, const GroupVector& b) { return a.e < b.e; }
};

inline GroupVector gv_zero(int d) { return {std::vector<long long>(static_cast<size_t>(d), 0)}; }

inline GroupVector operator+(const GroupVector& a, const GroupVector& b) {
  require(a.e.size() == b.e.size(), "group vector rank mismatch");
  GroupVector r = a;
  for (size_t i = 0; i < r.e.size(); ++i) r.e[i] = checked_add(r.e[i], b.e[i]);
  return r;
}

inline GroupVector operator-(const GroupVector& a) {
  GroupVector r = a;
  for (auto& x : r.e) x = checked_neg(x);
  return r;
}

inline GroupVector operator-(const GroupVector& a, const GroupVector& b) { return a + (-b); }

/// X = Q x Z^m x Z^d with Z^d acting by translation on the last d coordinates.
/// Labels are the finite set Q; the middle Z^m block is inert under the action.
struct DiscreteSpace {
  int d = 0;
  int m = 0;
  std::vector<std::string> labels;
  RingDesc ring;

  friend bool operator==(const DiscreteSpace&, const DiscreteSpace&) = default;

  int label_index(const std::string& name) const {
    for (size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == name) return static_cast<int>(i);
    throw parse_error("unknown label '" + name + "'");
  }
};

inline void validate_space(const DiscreteSpace& sp) {
  require(sp.d >= 0 && sp.m >= 0, "ranks must be nonnegative");
  require(!sp.labels.empty(), "label set must be nonempty");
  std::set<std::string> seen(sp.labels.begin(), sp.labels.end());
  require(seen.size() == sp.labels.size(), "duplicate labels");
  if (sp.ring.kind == RingKind::modular) require(sp.ring.modulus >= 2, "modulus must be >= 2");
}

/// A point (q, u, v) of X.
struct Point {
  int label = 0;
  std::vector<long long> lattice;
  std::vector<long long> position;

  friend bool operator==(const Point&, const Point&) = default;
  friend bool operator<(const Point& a, const Point& b) {
    return std::tie(a.label, a.lattice, a.position) < std::tie(b.label, b.lattice, b.position);
  }
};

inline void validate_point(const DiscreteSpace& sp, const Point& p) {
  require(p.label >= 0 && p.label < static_cast<int>(sp.labels.size()), "label index out of range");
  require(static_cast<int>(p.lattice.size()) == sp.m, "lattice rank mismatch");
  require(static_cast<int>(p.position.size()) == sp.d, "position rank mismatch");
}

/// The (free) translation action: (q, u, v) . g = (q, u, v + g).
inline Point act(const DiscreteSpace& sp, const Point& p, const GroupVector& g) {
  validate_point(sp, p);
  require(static_cast<int>(g.e.size()) == sp.d, "group vector rank mismatch");
  Point r = p;
  for (int i = 0; i < sp.d; ++i) r.position[i] = checked_add(r.position[i], g.e[i]);
  return r;
}

/// Finite product window: a label subset and one integer interval per coordinate
/// (m lattice intervals first, then d acting intervals).
struct FiniteWindow {
  std::vector<int> labels;                                  // sorted label indices
  std::vector<std::pair<long long, long long>> intervals;   // inclusive [lo, hi]
};

inline void validate_window(const DiscreteSpace& sp, const FiniteWindow& w) {
  require(!w.labels.empty(), "window needs at least one label");
  for (int l : w.labels)
    require(l >= 0 && l < static_cast<int>(sp.labels.size()), "window label out of range");
  require(static_cast<int>(w.intervals.size()) == sp.m + sp.d, "window needs m+d intervals");
  for (auto& [lo, hi] : w.intervals) require(lo <= hi, "empty window interval");
}

inline std::vector<Point> enumerate_window(const DiscreteSpace& sp, const FiniteWindow& w) {
  validate_window(sp, w);
  std::vector<Point> out;
  std::vector<long long> coord(w.intervals.size());
  auto emit = [&](auto&& self, size_t i) -> void {
    if (i == coord.size()) {
      for (int l : w.labels) {
        Point p;
        p.label = l;
        p.lattice.assign(coord.begin(), coord.begin() + sp.m);
        p.position.assign(coord.begin() + sp.m, coord.end());
        out.push_back(p);
      }
      return;
    }
    for (long long v = w.intervals[i].first; v <= w.intervals[i].second; ++v) {
      coord[i] = v;
      self(self, i + 1);
    }
  };
  emit(emit, 0);
  std::sort(out.begin(), out.end());
  return out;
}

/// Transporter set <A : B> = { g : B.g meets A }, by exact enumeration of pairs.
inline std::vector<GroupVector> transporter(const DiscreteSpace& sp, const std::vector<Point>& A,
                                            const std::vector<Point>& B) {
  std::set<GroupVector> out;
  for (const Point& a : A) validate_point(sp, a);
  for (const Point& b : B) validate_point(sp, b);
  for (const Point& a : A)
    for (const Point& b : B) {
      if (a.label != b.label || a.lattice != b.lattice) continue;
      GroupVector g;
      g.e.resize(sp.d);
      for (int i = 0; i < sp.d; ++i) g.e[i] = checked_sub(a.position[i], b.position[i]);
      out.insert(g);
    }
  return {out.begin(), out.end()};
}

inline std::vector<GroupVector> transporter(const DiscreteSpace& sp, const FiniteWindow& A,
                                            const FiniteWindow& B) {
  return transporter(sp, enumerate_window(sp, A), enumerate_window(sp, B));
}

/// Point-properness certificate: finite windows always transport finitely,
/// and the certificate is the exact transporter of the window against itself.
struct PropernessCertificate {
  bool proper = true;
  std::vector<GroupVector> transporter;
};

inline PropernessCertificate check_bourbaki_proper(const DiscreteSpace& sp, const FiniteWindow& w) {
  return {true, transporter(sp, w, w)};
}

/// Re-encoding of X as a free space for the finite-index subgroup
/// n_1 Z x ... x n_d Z: residues move into the label set.
struct IndexRestriction {
  DiscreteSpace original;
  DiscreteSpace space;          // same d and m, |Q'| = |Q| * prod(n_i)
  std::vector<long long> index; // n, one entry >= 1 per acting coordinate
};

inline IndexRestriction restrict_finite_index(const DiscreteSpace& sp, const std::vector<long long>& n) {
  validate_space(sp);
  require(static_cast<int>(n.size()) == sp.d, "index vector needs d entries");
  for (long long k : n) require(k >= 1, "index entries must be >= 1");
  IndexRestriction r;
  r.original = sp;
  r.index = n;
  r.space.d = sp.d;
  r.space.m = sp.m;
  r.space.ring = sp.ring;
  std::vector<long long> res(n.size(), 0);
  auto emit = [&](auto&& self, size_t i, const std::string& base) -> void {
    if (i == res.size()) {
      std::string name = base;
      if (!res.empty()) {
        name += "@";
        for (size_t k = 0; k < res.size(); ++k) {
          if (k) name += ",";
          name += std::to_string(res[k]);
        }
      }
      r.space.labels.push_back(name);
      return;
    }
    for (long long v = 0; v < n[i]; ++v) {
      res[i] = v;
      self(self, i + 1, base);
    }
  };
  for (const std::string& q : sp.labels) emit(emit, 0, q);
  return r;
}

/// The equivariant bijection: (q, u, v) -> ((q, v mod n), u, v div n);
/// translation by g in the restricted space matches translation by n*g upstairs.
inline Point reencode_point(const IndexRestriction& r, const Point& p) {
  validate_point(r.original, p);
  long long stride = 1;
  for (long long k : r.index) stride = checked_mul(stride, k);
  long long off = 0;
  Point out;
  out.lattice = p.lattice;
  out.position.resize(r.index.size());
  long long scale = stride;
  for (size_t i = 0; i < r.index.size(); ++i) {
    scale /= r.index[i];
    out.position[i] = floor_div(p.position[i], r.index[i]);
    off += floor_mod(p.position[i], r.index[i]) * scale;
  }
  out.label = static_cast<int>(p.label * stride + off);
  return out;
}

inline Point decode_point(const IndexRestriction& r, const Point& p) {
  validate_point(r.space, p);
  long long stride = 1;
  for (long long k : r.index) stride = checked_mul(stride, k);
  Point out;
  out.label = static_cast<int>(p.label / stride);
  out.lattice = p.lattice;
  long long off = p.label % stride;
  out.position.resize(r.index.size());
  long long scale = stride;
  for (size_t i = 0; i < r.index.size(); ++i) {
    scale /= r.index[i];
    long long res = off / scale;
    off %= scale;
    out.position[i] = checked_add(checked_mul(p.position[i], r.index[i]), res);
  }
  return out;
}

/// Quotient of X by a subset of the acting generators (coordinate deletion).
/// `removed` holds 1-based generator indices of the source space, sorted.
struct QuotientMap {
  DiscreteSpace source;
  std::vector<int> removed;

  DiscreteSpace target() const {
    DiscreteSpace t = source;
    t.d = source.d - static_cast<int>(removed.size());
    return t;
  }

  /// Source generator index of the j-th (1-based) surviving generator.
  int source_index(int j) const {
    int seen = 0;
    for (int i = 1; i <= source.d; ++i) {
      if (std::binary_search(removed.begin(), removed.end(), i)) continue;
      if (++seen == j) return i;
    }
    throw parse_error("quotient generator index out of range");
  }
};

inline QuotientMap identity_quotient(const DiscreteSpace& sp) { return {sp, {}}; }

inline QuotientMap one_generator_quotient(const DiscreteSpace& sp, int i) {
  require(i >= 1 && i <= sp.d, "generator index out of range");
  return {sp, {i}};
}

inline QuotientMap full_quotient_map(const DiscreteSpace& sp) {
  QuotientMap q{sp, {}};
  for (int i = 1; i <= sp.d; ++i) q.removed.push_back(i);
  return q;
}

inline DiscreteSpace quotient_one_generator(const DiscreteSpace& sp, int i) {
  return one_generator_quotient(sp, i).target();
}

inline DiscreteSpace full_quotient_space(const DiscreteSpace& sp) { return full_quotient_map(sp).target(); }

/// Composite of `first : X -> Y` and `then : Y -> Z` as a single map X -> Z.
inline QuotientMap compose_quotients(const QuotientMap& first, const QuotientMap& then) {
  require(then.source == first.target(), "quotient maps do not compose");
  QuotientMap out{first.source, first.removed};
  for (int j : then.removed) out.removed.push_back(first.source_index(j));
  std::sort(out.removed.begin(), out.removed.end());
  return out;
}

inline Point project_point(const QuotientMap& q, const Point& p) {
  validate_point(q.source, p);
  Point out;
  out.label = p.label;
  out.lattice = p.lattice;
  for (int i = 1; i <= q.source.d; ++i)
    if (!std::binary_search(q.removed.begin(), q.removed.end(), i))
      out.position.push_back(p.position[i - 1]);
  return out;
}

}  // namespace zdcoh
