#pragma once

#include <optional>

#include "koszul.hpp"

namespace zdcoh {

namespace detail {

template <class R>
void require_finite_components(const Cochain<R>& w) {
  for (const auto& [mask, s] : w.comps)
    for (const auto& t : s.terms)
      if (t.rays)
        throw support_error("cochain components must have finite extent along the acting coordinates");
}

/// Lift every component from the quotient by the last generator back to sp,
/// placing the restored coordinate on the fundamental slice {0}.
template <class R>
Cochain<R> lift_last_cochain(const Cochain<R>& c, const DiscreteSpace& sp) {
  Cochain<R> out;
  out.space = sp;
  out.stalk = c.stalk;
  out.degree = c.degree;
  for (const auto& [mask, s] : c.comps) out.comps.emplace(mask, lift_one(s, sp, sp.d));
  return out;
}

/// Differential of the first d-1 generators only, evaluated at subset `mask`
/// (a subset of {1..d-1}) on components of `b` indexed by subsets of {1..d-1}.
template <class R>
Section<R> partial_differential_at(const Cochain<R>& b, std::uint32_t mask) {
  Section<R> acc = zero_section<R>(b.space, b.stalk);
  for (int i : mask_members(mask)) {
    Section<R> piece = sigma_minus_one(b.at(mask & ~(1u << (i - 1))), i);
    if (mask_pos(mask, i) % 2) piece = negate(piece);
    acc = add(acc, piece);
  }
  return acc;
}

/// Below-top primitive by descent on the last generator.  Writing
/// w = (alpha, beta ^ e_d), the orbit sums of beta along e_d form a cocycle
/// on the quotient; a recursive primitive of it lifts to a correction after
/// which beta has vanishing orbit sums, so the backward orbit sum inverts
/// (sigma_d - 1) inside the finite class.  The cocycle identity then forces
/// the alpha equation automatically.
template <class R>
Cochain<R> solve_below_top(const Cochain<R>& w) {
  const DiscreteSpace& sp = w.space;
  const int d = sp.d;
  const int p = w.degree;
  const std::uint32_t bit_d = 1u << (d - 1);

  DiscreteSpace q = quotient_one_generator(sp, d);
  Cochain<R> beta_bar;
  beta_bar.space = q;
  beta_bar.stalk = w.stalk;
  beta_bar.degree = p - 1;
  for (std::uint32_t u : subsets_of_rank(d - 1, p - 1))
    beta_bar.comps.emplace(u, orbit_sum(w.at(u | bit_d), d));

  std::optional<Cochain<R>> lifted;  // the components of eta that contain e_d
  if (p == 1) {
    if (!is_zero(beta_bar.at(0)))
      throw cocycle_error("orbit sums of a coboundary candidate do not vanish");
  } else {
    lifted = lift_last_cochain(solve_below_top(beta_bar), sp);
  }

  Cochain<R> eta = zero_cochain<R>(sp, w.stalk, p - 1);
  for (std::uint32_t u : subsets_of_rank(d - 1, p - 1)) {
    Section<R> beta = w.at(u | bit_d);
    if (lifted) beta = sub(beta, partial_differential_at(*lifted, u));
    Section<R> a = ray_primitive(beta, d);
    for (const auto& t : a.terms)
      if (t.rays)
        throw cocycle_error("input is not a cocycle: descent left infinite tails");
    if (p % 2 == 0) a = negate(a);
    eta.comps[u] = std::move(a);
  }
  if (lifted)
    for (auto& [mask, s] : lifted->comps) eta.comps[mask | bit_d] = std::move(s);
  return eta;
}

}  // namespace detail

/// Primitive of a cocycle of degree 1 <= p < d inside the finitely supported
/// class: returns eta with differential(eta) == w.
template <class R>
Cochain<R> solve_primitive(const Cochain<R>& w) {
  require(w.degree >= 1 && w.degree < w.space.d,
          "solvable degrees are 1 <= p < d; top degree has an obstruction instead");
  detail::require_finite_components(w);
  if (!is_cocycle(w)) throw cocycle_error("input is not a cocycle");
  return detail::solve_below_top(w);
}

/// Primitive of any positive-degree cocycle once all supports are allowed:
/// contract with the backward orbit sum along the last generator.  Components
/// acquire rays; no obstruction survives.
template <class R>
Cochain<R> full_support_primitive(const Cochain<R>& w) {
  const DiscreteSpace& sp = w.space;
  const int d = sp.d;
  const int p = w.degree;
  require(p >= 1 && p <= d, "degree must be between 1 and d");
  detail::require_finite_components(w);
  if (!is_cocycle(w)) throw cocycle_error("input is not a cocycle");
  const std::uint32_t bit_d = 1u << (d - 1);
  Cochain<R> eta = zero_cochain<R>(sp, w.stalk, p - 1);
  for (std::uint32_t u : subsets_of_rank(d - 1, p - 1)) {
    Section<R> a = ray_primitive(w.at(u | bit_d), d);
    if (p % 2 == 0) a = negate(a);
    eta.comps[u] = std::move(a);
  }
  return eta;
}

/// Class of a top-degree cocycle together with an exact primitive witness
/// when the class vanishes.
template <class R>
struct TopClass {
  Section<R> value;                     // section on the full quotient
  std::optional<Cochain<R>> primitive;  // degree d-1, present iff value == 0
};

namespace detail {

template <class R>
TopClass<R> top_class_rec(const Section<R>& s) {
  const DiscreteSpace& sp = s.space;
  const int d = sp.d;
  if (d == 0) return {s, std::nullopt};

  Section<R> sbar = orbit_sum(s, d);
  TopClass<R> below = top_class_rec(sbar);
  if (!is_zero(below.value)) return {below.value, std::nullopt};

  // Vanishing class: rebuild a primitive.  s minus the lift of its orbit sum
  // has vanishing orbit sums along e_d, hence an exact finite preimage under
  // (sigma_d - 1); the lifted quotient primitive supplies the rest.
  const std::uint32_t bit_d = 1u << (d - 1);
  const std::uint32_t full = (1u << d) - 1;
  Cochain<R> eta = zero_cochain<R>(sp, s.stalk, d - 1);

  Section<R> rest = sub(s, lift_one(sbar, sp, d));
  Section<R> a = ray_primitive(rest, d);
  for (const auto& t : a.terms)
    if (t.rays) throw cocycle_error("orbit-sum decomposition left infinite tails");
  if (d % 2 == 0) a = negate(a);
  eta.comps[full & ~bit_d] = std::move(a);

  if (d >= 2) {
    const Cochain<R>& qprim = *below.primitive;  // degree d-2 on the quotient
    for (const auto& [mask, comp] : qprim.comps)
      eta.comps[mask | bit_d] = lift_one(comp, sp, d);
  }
  return {below.value, std::move(eta)};
}

}  // namespace detail

/// Top class with witness: iterated orbit sums down to the full quotient; the
/// class vanishes exactly when the cocycle bounds within the family, and then
/// a primitive is produced.
template <class R>
TopClass<R> top_class_with_witness(const Cochain<R>& w, const SupportFamily& fam) {
  require(w.degree == w.space.d, "top class is defined for top-degree cochains");
  detail::require_finite_components(w);
  const std::uint32_t full = w.space.d ? (1u << w.space.d) - 1 : 0;
  for (const auto& [mask, s] : w.comps)
    if (!in_family(s, fam)) throw support_error("cochain support lies outside the family");
  return detail::top_class_rec(w.at(full));
}

template <class R>
Section<R> top_class(const Cochain<R>& w, const SupportFamily& fam) {
  return top_class_with_witness(w, fam).value;
}

/// Iterated one-generator descent in an arbitrary generator order; the result
/// does not depend on the order.
template <class R>
Section<R> staged_descent(const Cochain<R>& w, const std::vector<int>& order) {
  require(w.degree == w.space.d, "staged descent applies to top-degree cochains");
  detail::require_finite_components(w);
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < w.space.d; ++i) require(sorted[i] == i + 1, "order must permute the generators");
  const std::uint32_t full = w.space.d ? (1u << w.space.d) - 1 : 0;
  Section<R> s = w.at(full);
  std::vector<int> removed;
  for (int original : order) {
    int current = original;
    for (int r : removed)
      if (r < original) --current;
    s = orbit_sum(s, current);
    removed.push_back(original);
  }
  return s;
}

/// Inverse of the top isomorphism: place the quotient target on the
/// fundamental slice {0}^d; its iterated orbit sums give back the target.
template <class R>
Cochain<R> lift_class(const Section<R>& t, const DiscreteSpace& sp) {
  require(t.space == full_quotient_space(sp), "target does not live on the full quotient");
  std::vector<ElementaryTerm<R>> terms = t.terms;
  for (auto& term : terms) term.anchor.position.assign(static_cast<size_t>(sp.d), 0);
  Section<R> comp = make_section(sp, t.stalk, std::move(terms));
  const std::uint32_t full = sp.d ? (1u << sp.d) - 1 : 0;
  std::map<std::uint32_t, Section<R>> comps;
  comps.emplace(full, std::move(comp));
  return make_cochain(sp, t.stalk, sp.d, std::move(comps));
}

/// Indicator partition subordinate to the orbit covering by translates of the
/// fundamental slice D = Q x Z^m x {0}^d: phi_g = 1 on D.g, and for every
/// point exactly one phi_g is nonzero, so they sum to one without division.
template <class R>
struct PartitionOfUnity {
  DiscreteSpace space;
  ShapeDescriptor domain;  // D, the fundamental slice

  R value(const GroupVector& g, const Point& p) const {
    validate_point(space, p);
    require(static_cast<int>(g.e.size()) == space.d, "group vector rank mismatch");
    bool hit = p.position == g.e;
    return hit ? ring_traits<R>::one(space.ring) : ring_traits<R>::zero(space.ring);
  }
};

template <class R>
PartitionOfUnity<R> build_partition(const DiscreteSpace& sp) {
  validate_space(sp);
  ShapeDescriptor D;
  for (size_t i = 0; i < sp.labels.size(); ++i) D.labels.push_back(static_cast<int>(i));
  for (int j = 0; j < sp.m; ++j) D.coords.push_back(coord_all());
  for (int i = 0; i < sp.d; ++i) D.coords.push_back(coord_point(0));
  return {sp, std::move(D)};
}

enum class ReportMode { concentrated, acyclic };

template <class R>
struct ProbeOutcome {
  int degree = 0;
  std::string kind;                      // "zero-section" | "primitive" | "class"
  std::optional<Cochain<R>> primitive;   // present for "primitive"
  std::optional<Section<R>> class_section;  // present for "class"
};

/// Verdict per degree plus re-checkable witnesses for the probe cocycles.
/// In the proper case cohomology vanishes except in the top degree, where it
/// is the family-supported sections of the full quotient.  When the family
/// fails properness because it admits invariant members, every positive
/// degree dies after allowing all supports and degree zero is the invariants.
template <class R>
struct CohomologyReport {
  ReportMode mode = ReportMode::concentrated;
  std::string reason;
  DiscreteSpace space;
  SupportFamily family;
  DiscreteSpace quotient;
  SupportFamily pushed;
  std::vector<ProbeOutcome<R>> probes;
};

template <class R>
CohomologyReport<R> cohomology_report(const DiscreteSpace& sp, const StalkProfile& st,
                                      const SupportFamily& fam,
                                      const std::vector<Cochain<R>>& probes = {}) {
  validate_space(sp);
  validate_stalk(sp, st);
  CohomologyReport<R> rep;
  rep.space = sp;
  rep.family = fam;
  rep.quotient = full_quotient_space(sp);
  rep.pushed = pushforward(fam, full_quotient_map(sp));
  PhiProperness prop = check_phi_proper(sp, fam);
  if (!prop.proper) {
    rep.mode = ReportMode::acyclic;
    rep.reason = "hypotheses fail: " + prop.reason;
  }
  for (const Cochain<R>& w : probes) {
    require(w.space == sp && w.stalk == st, "probe lives on the wrong space");
    if (!is_cocycle(w)) throw cocycle_error("probe is not a cocycle");
    ProbeOutcome<R> out;
    out.degree = w.degree;
    if (sp.d == 0) {
      // degree 0 is already the top degree: the class is the section itself
      const Section<R>& s = w.at(0);
      if (is_zero(s)) {
        out.kind = "zero-section";
      } else {
        out.kind = "class";
        out.class_section = s;
      }
    } else if (w.degree == 0) {
      // a finitely supported invariant section is zero once d >= 1
      require(is_zero(w.at(0)), "nonzero invariant section cannot be finitely supported");
      out.kind = "zero-section";
    } else if (rep.mode == ReportMode::acyclic) {
      out.kind = "primitive";
      out.primitive = full_support_primitive(w);
    } else if (w.degree < sp.d) {
      out.kind = "primitive";
      out.primitive = solve_primitive(w);
    } else {
      TopClass<R> tc = top_class_with_witness(w, fam);
      if (is_zero(tc.value)) {
        out.kind = "primitive";
        out.primitive = std::move(tc.primitive);
      } else {
        out.kind = "class";
        out.class_section = std::move(tc.value);
      }
    }
    rep.probes.push_back(std::move(out));
  }
  return rep;
}

}  // namespace zdcoh
