#pragma once

#include <map>
#include <vector>

#include "supports.hpp"

namespace zdcoh {

/// Stalk rank per label; the sheaf is constant along each orbit.
struct StalkProfile {
  std::vector<int> ranks;  // indexed like DiscreteSpace::labels

  friend bool operator==(const StalkProfile&, const StalkProfile&) = default;
};

inline StalkProfile uniform_stalk(const DiscreteSpace& sp, int rank = 1) {
  require(rank >= 1, "stalk rank must be >= 1");
  return {std::vector<int>(sp.labels.size(), rank)};
}

inline void validate_stalk(const DiscreteSpace& sp, const StalkProfile& st) {
  require(st.ranks.size() == sp.labels.size(), "stalk profile must cover every label");
  for (int r : st.ranks) require(r >= 1, "stalk rank must be >= 1");
}

/// One exact building block: the constant `value` on the product box whose
/// acting coordinate i is {anchor_i} when i is not a ray, and the descending
/// half-line (-inf, anchor_i] when i is a ray (bit i-1 of `rays`).
template <class R>
struct ElementaryTerm {
  Point anchor;
  std::uint32_t rays = 0;
  std::vector<R> value;

  friend bool operator==(const ElementaryTerm&, const ElementaryTerm&) = default;
};

namespace detail {

template <class R>
bool vec_zero(const std::vector<R>& v) {
  for (const R& x : v)
    if (!is_zero(x)) return false;
  return true;
}

template <class R>
void vec_acc(std::vector<R>& a, const std::vector<R>& b, bool negate) {
  require(a.size() == b.size(), "value rank mismatch");
  for (size_t i = 0; i < a.size(); ++i) a[i] = negate ? a[i] - b[i] : a[i] + b[i];
}

template <class R>
std::vector<R> vec_neg(std::vector<R> v) {
  for (R& x : v) x = -x;
  return v;
}

/// Working shape during canonicalization: coordinates 1..c of one
/// (label, lattice) group, values attached.
template <class R>
struct Proto {
  std::vector<long long> pos;  // length == current level c
  std::uint32_t rays = 0;      // bits within 1..c
  std::vector<R> value;
};

/// Finite-difference transform over coordinates 1..c: rays become point
/// masses, points split with alternating signs one step up each non-ray
/// coordinate.  Two term lists describe the same function iff the transforms
/// of their difference cancel, since the transform inverts by full-ray sums.
template <class R>
std::map<std::vector<long long>, std::vector<R>> delta_transform(const std::vector<Proto<R>>& protos,
                                                                 int c) {
  std::map<std::vector<long long>, std::vector<R>> acc;
  for (const Proto<R>& t : protos) {
    std::vector<int> free_coords;
    for (int j = 0; j < c; ++j)
      if (!(t.rays >> j & 1u)) free_coords.push_back(j);
    for (std::uint32_t sub = 0; sub < (1u << free_coords.size()); ++sub) {
      std::vector<long long> pos = t.pos;
      bool neg = false;
      for (size_t k = 0; k < free_coords.size(); ++k)
        if (sub >> k & 1u) {
          pos[free_coords[k]] = checked_add(pos[free_coords[k]], 1);
          neg = !neg;
        }
      auto it = acc.find(pos);
      if (it == acc.end())
        acc.emplace(std::move(pos), neg ? vec_neg(t.value) : t.value);
      else
        vec_acc(it->second, t.value, neg);
    }
  }
  for (auto it = acc.begin(); it != acc.end();)
    it = vec_zero(it->second) ? acc.erase(it) : std::next(it);
  return acc;
}

template <class R>
bool fn_equal(const std::vector<Proto<R>>& a, const std::vector<Proto<R>>& b, int c) {
  std::vector<Proto<R>> diff = a;
  for (Proto<R> t : b) {
    t.value = vec_neg(std::move(t.value));
    diff.push_back(std::move(t));
  }
  return delta_transform(diff, c).empty();
}

/// Restriction to the hyperplane coordinate c == t, a function of c-1 coords.
template <class R>
std::vector<Proto<R>> slice_at(const std::vector<Proto<R>>& F, int c, long long t) {
  std::vector<Proto<R>> out;
  for (const Proto<R>& p : F) {
    bool rayed = p.rays >> (c - 1) & 1u;
    if (rayed ? p.pos[c - 1] >= t : p.pos[c - 1] == t) {
      Proto<R> q = p;
      q.pos.pop_back();
      q.rays &= ~(1u << (c - 1));
      out.push_back(std::move(q));
    }
  }
  return out;
}

/// The stabilized limit slice as coordinate c goes to minus infinity.
template <class R>
std::vector<Proto<R>> deep_slice(const std::vector<Proto<R>>& F, int c) {
  std::vector<Proto<R>> out;
  for (const Proto<R>& p : F)
    if (p.rays >> (c - 1) & 1u) {
      Proto<R> q = p;
      q.pos.pop_back();
      q.rays &= ~(1u << (c - 1));
      out.push_back(std::move(q));
    }
  return out;
}

/// Unique normal form over coordinates 1..c: write F as
///   deep (x) ray(A)  +  sum over t in (A, max] of slice_t (x) point(t),
/// where deep is the limit slice and A is the largest anchor so that every
/// slice at or below A equals deep.  Both pieces recurse on c-1 coordinates,
/// so rays appear exactly where the function has genuinely infinite extent.
template <class R>
std::vector<Proto<R>> canon_axis(std::vector<Proto<R>> F, int c) {
  if (F.empty()) return {};
  if (c == 0) {
    std::vector<R> sum = F.front().value;
    for (size_t i = 1; i < F.size(); ++i) vec_acc(sum, F[i].value, false);
    if (vec_zero(sum)) return {};
    return {Proto<R>{{}, 0, std::move(sum)}};
  }
  std::vector<long long> anchors;
  for (const Proto<R>& p : F) anchors.push_back(p.pos[c - 1]);
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());

  std::vector<Proto<R>> deep = deep_slice(F, c);
  bool has_deep = !delta_transform(deep, c - 1).empty();
  long long A = anchors.front() - 1;
  if (has_deep) {
    // Slices are constant strictly between anchors, so testing at each anchor
    // and each anchor+1 locates the exact stabilization boundary.
    std::vector<long long> cand;
    for (long long v : anchors) {
      cand.push_back(v);
      cand.push_back(checked_add(v, 1));
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    for (long long t : cand) {
      if (t <= A) continue;
      if (!fn_equal(slice_at(F, c, t), deep, c - 1)) {
        A = t - 1;
        break;
      }
      A = t;
    }
  }

  std::vector<Proto<R>> out;
  for (Proto<R>& p : canon_axis(std::move(deep), c - 1)) {
    p.pos.push_back(A);
    p.rays |= 1u << (c - 1);
    out.push_back(std::move(p));
  }
  if (checked_sub(anchors.back(), A) > 2000000)
    throw arithmetic_error("canonical form would enumerate too wide a coordinate range");
  for (long long t = checked_add(A, 1); t <= anchors.back(); ++t)
    for (Proto<R>& p : canon_axis(slice_at(F, c, t), c - 1)) {
      p.pos.push_back(t);
      out.push_back(std::move(p));
    }
  return out;
}

}  // namespace detail

/// A finitely supported-or-rayed exact section: canonical list of elementary
/// terms.  Canonical means: minimal ray sets, fully merged, zero-free, sorted.
/// Equal functions have identical term lists.
template <class R>
struct Section {
  DiscreteSpace space;
  StalkProfile stalk;
  std::vector<ElementaryTerm<R>> terms;

  friend bool operator==(const Section&, const Section&) = default;
};

template <class R>
bool is_zero(const Section<R>& s) {
  return s.terms.empty();
}

namespace detail {

template <class R>
bool term_order(const ElementaryTerm<R>& a, const ElementaryTerm<R>& b) {
  return std::tie(a.anchor.label, a.anchor.lattice, a.anchor.position, a.rays) <
         std::tie(b.anchor.label, b.anchor.lattice, b.anchor.position, b.rays);
}

template <class R>
std::vector<ElementaryTerm<R>> canonicalize_terms(const DiscreteSpace& sp, const StalkProfile& st,
                                                  std::vector<ElementaryTerm<R>> in) {
  std::map<std::pair<int, std::vector<long long>>, std::vector<Proto<R>>> groups;
  for (ElementaryTerm<R>& t : in) {
    validate_point(sp, t.anchor);
    require(sp.d >= 32 || (t.rays >> sp.d) == 0, "ray outside acting generators");
    require(static_cast<int>(t.value.size()) == st.ranks[t.anchor.label], "value rank mismatch");
    for (R& x : t.value) x = ring_traits<R>::conform(x, sp.ring);
    groups[{t.anchor.label, t.anchor.lattice}].push_back(
        Proto<R>{t.anchor.position, t.rays, std::move(t.value)});
  }
  std::vector<ElementaryTerm<R>> out;
  for (auto& [key, protos] : groups)
    for (Proto<R>& p : canon_axis(std::move(protos), sp.d)) {
      ElementaryTerm<R> t;
      t.anchor.label = key.first;
      t.anchor.lattice = key.second;
      t.anchor.position = std::move(p.pos);
      t.rays = p.rays;
      t.value = std::move(p.value);
      out.push_back(std::move(t));
    }
  std::sort(out.begin(), out.end(), term_order<R>);
  return out;
}

}  // namespace detail

template <class R>
Section<R> make_section(const DiscreteSpace& sp, const StalkProfile& st,
                        std::vector<ElementaryTerm<R>> terms) {
  validate_space(sp);
  validate_stalk(sp, st);
  require(ring_traits<R>::kind == sp.ring.kind, "ring element type does not match the space ring");
  Section<R> s;
  s.space = sp;
  s.stalk = st;
  s.terms = detail::canonicalize_terms(sp, st, std::move(terms));
  return s;
}

template <class R>
Section<R> zero_section(const DiscreteSpace& sp, const StalkProfile& st) {
  return make_section<R>(sp, st, {});
}

template <class R>
bool term_covers(const DiscreteSpace& sp, const ElementaryTerm<R>& t, const Point& p) {
  if (t.anchor.label != p.label || t.anchor.lattice != p.lattice) return false;
  for (int i = 0; i < sp.d; ++i) {
    if (t.rays >> i & 1u) {
      if (p.position[i] > t.anchor.position[i]) return false;
    } else if (p.position[i] != t.anchor.position[i]) {
      return false;
    }
  }
  return true;
}

/// Exact pointwise value, a vector of length rank(label of p).
template <class R>
std::vector<R> evaluate(const Section<R>& s, const Point& p) {
  validate_point(s.space, p);
  std::vector<R> out(static_cast<size_t>(s.stalk.ranks[p.label]),
                     ring_traits<R>::zero(s.space.ring));
  for (const ElementaryTerm<R>& t : s.terms)
    if (term_covers(s.space, t, p)) detail::vec_acc(out, t.value, false);
  return out;
}

/// Translate: (g |> s)(x) = s(x . (-g)); anchors move by +g.
template <class R>
Section<R> shift(const Section<R>& s, const GroupVector& g) {
  require(static_cast<int>(g.e.size()) == s.space.d, "group vector rank mismatch");
  std::vector<ElementaryTerm<R>> terms = s.terms;
  for (auto& t : terms)
    for (int i = 0; i < s.space.d; ++i)
      t.anchor.position[i] = checked_add(t.anchor.position[i], g.e[i]);
  return make_section(s.space, s.stalk, std::move(terms));
}

template <class R>
Section<R> negate(const Section<R>& s) {
  Section<R> out = s;
  for (auto& t : out.terms) t.value = detail::vec_neg(std::move(t.value));
  return out;
}

template <class R>
Section<R> add(const Section<R>& a, const Section<R>& b) {
  require(a.space == b.space && a.stalk == b.stalk, "sections live on different spaces");
  std::vector<ElementaryTerm<R>> terms = a.terms;
  terms.insert(terms.end(), b.terms.begin(), b.terms.end());
  return make_section(a.space, a.stalk, std::move(terms));
}

template <class R>
Section<R> sub(const Section<R>& a, const Section<R>& b) {
  return add(a, negate(b));
}

inline GroupVector unit_vector(const DiscreteSpace& sp, int i) {
  require(i >= 1 && i <= sp.d, "generator index out of range");
  GroupVector g = gv_zero(sp.d);
  g.e[i - 1] = 1;
  return g;
}

/// (sigma_i - 1) s; ray terms along i telescope to point masses exactly.
template <class R>
Section<R> sigma_minus_one(const Section<R>& s, int i) {
  return sub(shift(s, unit_vector(s.space, i)), s);
}

/// True when no term extends infinitely along generator i.
template <class R>
bool finite_along(const Section<R>& s, int i) {
  require(i >= 1 && i <= s.space.d, "generator index out of range");
  for (const auto& t : s.terms)
    if (t.rays >> (i - 1) & 1u) return false;
  return true;
}

/// The backward orbit sum along generator i: the unique u with
/// (sigma_i - 1) u = s and support bounded above along i.  Each anchor drops
/// one step and grows a ray along i.
template <class R>
Section<R> ray_primitive(const Section<R>& s, int i) {
  require(i >= 1 && i <= s.space.d, "generator index out of range");
  if (!finite_along(s, i))
    throw support_error("section already has infinite extent along that generator");
  std::vector<ElementaryTerm<R>> terms = s.terms;
  for (auto& t : terms) {
    t.anchor.position[i - 1] = checked_sub(t.anchor.position[i - 1], 1);
    t.rays |= 1u << (i - 1);
  }
  return make_section(s.space, s.stalk, std::move(terms));
}

/// Orbit sum along generator i (requires finite extent along i); lands on the
/// quotient with generator i deleted.
template <class R>
Section<R> orbit_sum(const Section<R>& s, int i) {
  require(i >= 1 && i <= s.space.d, "generator index out of range");
  if (!finite_along(s, i)) throw support_error("orbit sum needs finite extent along the generator");
  DiscreteSpace target = quotient_one_generator(s.space, i);
  std::uint32_t low = (1u << (i - 1)) - 1;
  std::vector<ElementaryTerm<R>> terms;
  for (ElementaryTerm<R> t : s.terms) {
    t.anchor.position.erase(t.anchor.position.begin() + (i - 1));
    t.rays = (t.rays & low) | ((t.rays >> 1) & ~low);
    terms.push_back(std::move(t));
  }
  return make_section(target, s.stalk, std::move(terms));
}

/// Lift from the quotient with generator i deleted, placing the new
/// coordinate on the fundamental slice {0}: orbit_sum(lift_one(s), i) == s.
template <class R>
Section<R> lift_one(const Section<R>& s, const DiscreteSpace& sp, int i) {
  require(s.space == quotient_one_generator(sp, i), "section does not live on that quotient");
  std::uint32_t low = (1u << (i - 1)) - 1;
  std::vector<ElementaryTerm<R>> terms;
  for (ElementaryTerm<R> t : s.terms) {
    t.anchor.position.insert(t.anchor.position.begin() + (i - 1), 0);
    t.rays = (t.rays & low) | ((t.rays & ~low) << 1);
    terms.push_back(std::move(t));
  }
  return make_section(sp, s.stalk, std::move(terms));
}

/// Product boxes covering the support, one per canonical term.  A rayed
/// acting coordinate reports as unbounded, which is equivalent for membership
/// in any representable family.
template <class R>
std::vector<ShapeDescriptor> support_shapes(const Section<R>& s) {
  std::vector<ShapeDescriptor> out;
  for (const auto& t : s.terms) {
    ShapeDescriptor sh;
    sh.labels = {t.anchor.label};
    for (int j = 0; j < s.space.m; ++j) sh.coords.push_back(coord_point(t.anchor.lattice[j]));
    for (int i = 0; i < s.space.d; ++i)
      sh.coords.push_back((t.rays >> i & 1u) ? coord_all() : coord_point(t.anchor.position[i]));
    out.push_back(std::move(sh));
  }
  return out;
}

/// Support membership: families are closed under finite unions, so the
/// section lies in the family iff every term box does.
template <class R>
bool in_family(const Section<R>& s, const SupportFamily& fam) {
  for (const auto& sh : support_shapes(s))
    if (!contains(s.space, fam, sh)) return false;
  return true;
}

}  // namespace zdcoh
