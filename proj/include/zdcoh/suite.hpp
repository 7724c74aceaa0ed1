#pragma once

// Randomized self-check suite.  Each runner exercises one advertised
// guarantee of the workbench on randomly generated inputs and validates the
// outcome by independent recomputation (exact differential checks, pointwise
// oracles, brute-force enumeration) -- never by re-running the solver under
// test.  All checks are exact; there are no tolerances anywhere.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <random>
#include <set>
#include <cstdio>
#include <string>
#include <vector>

#include "cohomology.hpp"
#include "common.hpp"
#include "flows.hpp"
#include "koszul.hpp"
#include "ring.hpp"
#include "section.hpp"
#include "space.hpp"
#include "supports.hpp"

namespace zdcoh {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  long long below(long long n) {
    require(n > 0, "empty random range");
    return static_cast<long long>(gen() % static_cast<unsigned long long>(n));
  }
  long long range(long long lo, long long hi) { return lo + below(hi - lo + 1); }
  bool coin() { return below(2) == 1; }
};

struct SuiteResult {
  std::string name;
  long long cases = 0;
  long long failures = 0;
  double seconds = 0.0;
  double budget = 0.0;  // wall-clock limit in seconds; 0 = none
  std::string notes;

  bool passed() const {
    return failures == 0 && (budget == 0.0 || seconds <= budget);
  }
};

namespace suite_detail {

class Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

struct Checker {
  SuiteResult res;
  explicit Checker(std::string name, double budget = 0.0) {
    res.name = std::move(name);
    res.budget = budget;
  }
  void check(bool ok, const std::string& what) {
    ++res.cases;
    if (!ok) {
      ++res.failures;
      if (res.notes.empty()) res.notes = what;
    }
  }
  void note(const std::string& s) {
    if (res.notes.empty()) res.notes = s;
  }
};

inline DiscreteSpace make_space(int d, int m, int nlabels, const RingDesc& ring) {
  DiscreteSpace sp;
  sp.d = d;
  sp.m = m;
  for (int i = 0; i < nlabels; ++i) sp.labels.push_back("q" + std::to_string(i));
  sp.ring = ring;
  validate_space(sp);
  return sp;
}

inline std::vector<RingDesc> ring_cycle() { return {ring_Z(), ring_Q(), ring_Zmod(5)}; }

inline Point random_point(Rng& rng, const DiscreteSpace& sp, long long span) {
  Point p;
  p.label = static_cast<int>(rng.below(static_cast<long long>(sp.labels.size())));
  for (int i = 0; i < sp.m; ++i) p.lattice.push_back(rng.range(-span, span));
  for (int i = 0; i < sp.d; ++i) p.position.push_back(rng.range(-span, span));
  return p;
}

template <class R>
R random_scalar(Rng& rng, const RingDesc& ring) {
  return ring_traits<R>::from_int(rng.range(-4, 4), ring);
}

template <class R>
Section<R> random_section(Rng& rng, const DiscreteSpace& sp, const StalkProfile& st,
                          int max_terms, long long span) {
  std::vector<ElementaryTerm<R>> terms;
  int n = static_cast<int>(rng.range(1, max_terms));
  for (int k = 0; k < n; ++k) {
    ElementaryTerm<R> t;
    t.anchor = random_point(rng, sp, span);
    int rank = st.ranks[static_cast<std::size_t>(t.anchor.label)];
    for (int r = 0; r < rank; ++r) t.value.push_back(random_scalar<R>(rng, sp.ring));
    terms.push_back(std::move(t));
  }
  return make_section(sp, st, std::move(terms));
}

template <class R>
Section<R> random_nonzero_section(Rng& rng, const DiscreteSpace& sp, const StalkProfile& st,
                                  int max_terms, long long span) {
  for (int tries = 0; tries < 64; ++tries) {
    Section<R> s = random_section<R>(rng, sp, st, max_terms, span);
    if (!is_zero(s)) return s;
  }
  ElementaryTerm<R> t;
  t.anchor.label = 0;
  t.anchor.lattice.assign(static_cast<std::size_t>(sp.m), 0);
  t.anchor.position.assign(static_cast<std::size_t>(sp.d), 0);
  t.value.assign(static_cast<std::size_t>(st.ranks[0]), ring_traits<R>::one(sp.ring));
  return make_section(sp, st, std::vector<ElementaryTerm<R>>{t});
}

template <class R>
Cochain<R> random_cochain(Rng& rng, const DiscreteSpace& sp, const StalkProfile& st, int degree,
                          int max_terms, long long span) {
  std::map<std::uint32_t, Section<R>> comps;
  for (std::uint32_t mask : subsets_of_rank(sp.d, degree))
    comps.emplace(mask, random_section<R>(rng, sp, st, max_terms, span));
  return make_cochain(sp, st, degree, std::move(comps));
}

inline StalkProfile random_stalk(Rng& rng, const DiscreteSpace& sp) {
  StalkProfile st;
  for (std::size_t i = 0; i < sp.labels.size(); ++i)
    st.ranks.push_back(static_cast<int>(rng.range(1, 2)));
  return st;
}

// Exact verification that eta is a primitive of omega.
template <class R>
bool verifies_primitive(const Cochain<R>& omega, const Cochain<R>& eta) {
  return is_zero(sub(differential(eta), omega));
}

template <class R>
bool cochain_has_rays(const Cochain<R>& w) {
  for (const auto& [mask, sec] : w.comps)
    for (const auto& t : sec.terms)
      if (t.rays != 0) return true;
  return false;
}

template <class R>
bool cochain_is_finite(const Cochain<R>& w) {
  return !cochain_has_rays(w);
}

inline ShapeDescriptor random_shape(Rng& rng, const DiscreteSpace& sp) {
  ShapeDescriptor s;
  for (std::size_t l = 0; l < sp.labels.size(); ++l)
    if (rng.coin()) s.labels.push_back(static_cast<int>(l));
  if (s.labels.empty()) s.labels.push_back(0);
  for (int c = 0; c < sp.m + sp.d; ++c) {
    if (rng.below(4) == 0) {
      s.coords.push_back(coord_all());
    } else {
      std::vector<long long> vs;
      int n = static_cast<int>(rng.range(1, 3));
      for (int k = 0; k < n; ++k) vs.push_back(rng.range(-2, 2));
      s.coords.push_back(coord_finite(std::move(vs)));
    }
  }
  return s;
}

inline SupportFamily random_family(Rng& rng, const DiscreteSpace& sp) {
  switch (rng.below(4)) {
    case 0: return family_finite();
    case 1: return family_all();
    case 2: return family_orbit_finite();
    default: {
      std::vector<ShapeDescriptor> gens;
      int n = static_cast<int>(rng.range(1, 3));
      for (int k = 0; k < n; ++k) gens.push_back(random_shape(rng, sp));
      return family_generated(std::move(gens));
    }
  }
}

inline FiniteWindow random_window(Rng& rng, const DiscreteSpace& sp, long long span) {
  FiniteWindow w;
  for (std::size_t l = 0; l < sp.labels.size(); ++l)
    if (rng.coin()) w.labels.push_back(static_cast<int>(l));
  if (w.labels.empty()) w.labels.push_back(0);
  for (int c = 0; c < sp.m + sp.d; ++c) {
    long long lo = rng.range(-span, span);
    long long hi = lo + rng.range(0, 2);
    w.intervals.emplace_back(lo, hi);
  }
  return w;
}

inline Rational random_rational(Rng& rng, long long num_span, long long max_den) {
  return Rational(rng.range(-num_span, num_span), rng.range(1, max_den));
}

inline PiecewiseLinear random_pl(Rng& rng) {
  int n = static_cast<int>(rng.range(2, 5));
  std::set<Rational> xset;
  while (static_cast<int>(xset.size()) < n)
    xset.insert(Rational(rng.range(-8, 8), rng.coin() ? 1 : 2));
  std::vector<Rational> xs(xset.begin(), xset.end());
  std::vector<Rational> ys(xs.size());
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) ys[i] = random_rational(rng, 3, 2);
  return pl_from_points(std::move(xs), std::move(ys));
}

}  // namespace suite_detail

// ---------------------------------------------------------------------------
// 01. Below the top degree every cocycle has an exactly verified primitive.
// ---------------------------------------------------------------------------
inline SuiteResult criterion_concentration_below_top(std::uint64_t seed, int base,
    const std::vector<RingDesc>& rings = suite_detail::ring_cycle(), int max_d = 3) {
  using namespace suite_detail;
  Checker c("concentration-below-top", 60.0);
  Stopwatch clock;
  Rng rng(seed);
  const std::vector<int> label_counts = {1, 2, 4};
  const std::vector<int> ms = {0, 1};
  int grid = 0;
  for (int d = 1; d <= max_d; ++d) {
    for (int p = 1; p < d; ++p) {
      for (int i = 0; i < base; ++i, ++grid) {
        RingDesc ring = rings[static_cast<std::size_t>(grid) % rings.size()];
        int nl = label_counts[static_cast<std::size_t>(grid / 3) % label_counts.size()];
        int m = ms[static_cast<std::size_t>(grid / 9) % ms.size()];
        DiscreteSpace sp = make_space(d, m, nl, ring);
        with_ring(ring, [&](auto tag) {
          using R = std::decay_t<decltype(tag)>;
          StalkProfile st = random_stalk(rng, sp);
          Cochain<R> eta = random_cochain<R>(rng, sp, st, p - 1, 3, 3);
          Cochain<R> omega = differential(eta);
          Cochain<R> prim = solve_primitive(omega);
          c.check(prim.degree == p - 1 && cochain_is_finite(prim) &&
                      verifies_primitive(omega, prim),
                  "primitive fails exact differential check (d=" + std::to_string(d) +
                      ", p=" + std::to_string(p) + ")");
        });
      }
    }
  }
  if (c.res.cases == 0) c.note("degree range below the top is empty for d=1");
  c.res.seconds = clock.seconds();
  return c.res;
}

// ---------------------------------------------------------------------------
// 02. Top degree: descent detects coboundaries with verified witnesses and is
//     inverse to lifting quotient sections.
// ---------------------------------------------------------------------------
inline SuiteResult criterion_top_degree_isomorphism(std::uint64_t seed, int base,
    const std::vector<RingDesc>& rings = suite_detail::ring_cycle(), int max_d = 3) {
  using namespace suite_detail;
  Checker c("top-degree-isomorphism", 60.0);
  Stopwatch clock;
  Rng rng(seed + 1);
  for (int d = 1; d <= max_d; ++d) {
    for (int i = 0; i < base; ++i) {
      RingDesc ring = rings[static_cast<std::size_t>(i) % rings.size()];
      DiscreteSpace sp = make_space(d, i % 2, 1 + (i % 2), ring);
      with_ring(ring, [&](auto tag) {
        using R = std::decay_t<decltype(tag)>;
        StalkProfile st = random_stalk(rng, sp);

        // Coboundaries descend to zero, with an exactly verified witness.
        Cochain<R> eta = random_cochain<R>(rng, sp, st, d - 1, 3, 3);
        Cochain<R> omega = differential(eta);
        TopClass<R> tc = top_class_with_witness(omega, family_finite());
        c.check(is_zero(tc.value), "coboundary has nonzero descent value");
        c.check(tc.primitive.has_value() && verifies_primitive(omega, *tc.primitive),
                "descent witness fails exact differential check");

        // Lifting a quotient section and descending returns it unchanged.
        DiscreteSpace q = full_quotient_space(sp);
        Section<R> t = random_section<R>(rng, q, st, 3, 3);
        Cochain<R> lifted = lift_class(t, sp);
        c.check(top_class(lifted, family_finite()) == t, "descend(lift(t)) differs from t");

        // The descent value is unchanged by adding a coboundary.
        Cochain<R> moved = add(lifted, omega);
        c.check(top_class(moved, family_finite()) == t,
                "descent value changes under adding a coboundary");
      });
    }
  }
  c.res.seconds = clock.seconds();
  return c.res;
}

// ---------------------------------------------------------------------------
// 03. Support contrast: the same top cocycle is essential for finite supports
//     but bounds exactly once arbitrary supports are allowed.
// ---------------------------------------------------------------------------
inline SuiteResult criterion_support_contrast(std::uint64_t seed, int base,
    const std::vector<RingDesc>& rings = suite_detail::ring_cycle(), int max_d = 3) {
  using namespace suite_detail;
  Checker c("support-contrast", 0.0);
  Stopwatch clock;
  Rng rng(seed + 2);
  for (int d = 1; d <= std::min(2, max_d); ++d) {
    for (int i = 0; i < base / 2; ++i) {
      RingDesc ring = rings[static_cast<std::size_t>(i) % rings.size()];
      DiscreteSpace sp = make_space(d, 0, 1, ring);
      with_ring(ring, [&](auto tag) {
        using R = std::decay_t<decltype(tag)>;
        StalkProfile st = uniform_stalk(sp, 1);
        const std::uint32_t full = (1u << d) - 1;

        // Build a top cocycle whose iterated orbit sums are nonzero.
        Section<R> s = zero_section<R>(sp, st);
        Cochain<R> w = zero_cochain<R>(sp, st, d);
        bool found = false;
        for (int tries = 0; tries < 64 && !found; ++tries) {
          s = random_nonzero_section<R>(rng, sp, st, 3, 2);
          w = make_cochain<R>(sp, st, d, {{full, s}});
          std::vector<int> order(static_cast<std::size_t>(d));
          for (int k = 0; k < d; ++k) order[static_cast<std::size_t>(k)] = k + 1;
          if (!is_zero(staged_descent(w, order))) found = true;
        }
        if (!found) {
          ElementaryTerm<R> t;
          t.anchor.position.assign(static_cast<std::size_t>(d), 0);
          t.value = {ring_traits<R>::one(ring)};
          s = make_section(sp, st, std::vector<ElementaryTerm<R>>{t});
          w = make_cochain<R>(sp, st, d, {{full, s}});
        }

        // With finite supports the class is essential: nonzero, no witness.
        TopClass<R> tc = top_class_with_witness(w, family_finite());
        c.check(!is_zero(tc.value) && !tc.primitive.has_value(),
                "essential top cocycle was not detected as nonzero");

        // With arbitrary supports the same cocycle bounds; the witness must
        // genuinely use infinite tails and must verify exactly.
        Cochain<R> prim = full_support_primitive(w);
        c.check(verifies_primitive(w, prim),
                "arbitrary-support primitive fails exact differential check");
        c.check(cochain_has_rays(prim),
                "arbitrary-support witness unexpectedly has finite support");
      });
    }
  }
  c.res.seconds = clock.seconds();
  return c.res;
}

// ---------------------------------------------------------------------------
// 04. Staged descent is independent of the removal order of the generators.
// ---------------------------------------------------------------------------
inline SuiteResult criterion_staging_order_independence(std::uint64_t seed, int base,
    const std::vector<RingDesc>& rings = suite_detail::ring_cycle(), int max_d = 3) {
  using namespace suite_detail;
  Checker c("staging-order-independence", 0.0);
  Stopwatch clock;
  Rng rng(seed + 3);
  const int d = 3;
  if (max_d < 3) {
    c.note("skipped: staging needs three acting generators");
    c.res.seconds = clock.seconds();
    return c.res;
  }
  std::vector<std::vector<int>> orders;
  {
    std::vector<int> perm = {1, 2, 3};
    do {
      orders.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  for (int i = 0; i < base / 2; ++i) {
    RingDesc ring = rings[static_cast<std::size_t>(i) % rings.size()];
    DiscreteSpace sp = make_space(d, i % 2, 1 + (i % 2), ring);
    with_ring(ring, [&](auto tag) {
      using R = std::decay_t<decltype(tag)>;
      StalkProfile st = random_stalk(rng, sp);
      Section<R> s = random_section<R>(rng, sp, st, 4, 3);
      Cochain<R> w = make_cochain<R>(sp, st, d, {{(1u << d) - 1, s}});
      Section<R> reference = staged_descent(w, orders.front());
      bool all_equal = true;
      for (const auto& order : orders)
        if (!(staged_descent(w, order) == reference)) all_equal = false;
      c.check(all_equal, "staged descent differs between generator orders");
      c.check(top_class(w, family_finite()) == reference,
              "staged descent differs from the direct descent value");
    });
  }
  c.res.seconds = clock.seconds();
  return c.res;
}

// ---------------------------------------------------------------------------
// 05. Finite-index restriction: relabelled space, point bijection,
//     equivariance, and concentration carried over.
// ---------------------------------------------------------------------------
inline SuiteResult criterion_finite_index_restriction(std::uint64_t seed, int base,
    const std::vector<RingDesc>& rings = suite_detail::ring_cycle(), int max_d = 3) {
  using namespace suite_detail;
  Checker c("finite-index-restriction", 0.0);
  Stopwatch clock;
  Rng rng(seed + 4);
  struct Config {
    int d;
    std::vector<long long> n;
  };
  std::vector<Config> configs = {{1, {2}}, {1, {3}}, {2, {2, 2}}};
  std::erase_if(configs, [&](const Config& cfg) { return cfg.d > max_d; });
  for (const auto& cfg : configs) {
    for (int i = 0; i < std::max(1, base / 2); ++i) {
      RingDesc ring = rings[static_cast<std::size_t>(i) % rings.size()];
      int m = i % 2;
      int nl = 1 + (i % 2);
      DiscreteSpace sp = make_space(cfg.d, m, nl, ring);
      IndexRestriction r = restrict_finite_index(sp, cfg.n);
      long long expect = static_cast<long long>(sp.labels.size());
      for (long long k : cfg.n) expect *= k;
      c.check(static_cast<long long>(r.space.labels.size()) == expect,
              "restricted label count differs from |Q| * prod(n)");

      // Enumerating one fundamental window must hit every restricted label
      // exactly once per original label/lattice choice.
      {
        FiniteWindow w;
        for (std::size_t l = 0; l < sp.labels.size(); ++l) w.labels.push_back(static_cast<int>(l));
        for (int k = 0; k < sp.m; ++k) w.intervals.emplace_back(0, 0);
        for (int k = 0; k < sp.d; ++k) w.intervals.emplace_back(0, cfg.n[static_cast<std::size_t>(k)] - 1);
        std::set<int> seen;
        for (const Point& p : enumerate_window(sp, w)) seen.insert(reencode_point(r, p).label);
        c.check(static_cast<long long>(seen.size()) == expect,
                "fundamental window does not enumerate every restricted label");
      }

      // Bijection and equivariance on random points.
      bool bij = true, equi = true;
      for (int k = 0; k < 8; ++k) {
        Point p = random_point(rng, sp, 6);
        Point q = reencode_point(r, p);
        if (!(decode_point(r, q) == p)) bij = false;
        for (int g = 1; g <= sp.d; ++g) {
          GroupVector step = gv_zero(sp.d);
          step.e[static_cast<std::size_t>(g - 1)] = cfg.n[static_cast<std::size_t>(g - 1)];
          Point moved = reencode_point(r, act(sp, p, step));
          GroupVector unit = gv_zero(sp.d);
          unit.e[static_cast<std::size_t>(g - 1)] = 1;
          if (!(moved == act(r.space, q, unit))) equi = false;
        }
        Point q2 = random_point(rng, r.space, 4);
        if (!(reencode_point(r, decode_point(r, q2)) == q2)) bij = false;
      }
      c.check(bij, "restriction is not a bijection on points");
      c.check(equi, "restriction does not intertwine the subgroup action");

      // Concentration carries over to the restricted space.
      with_ring(ring, [&](auto tag) {
        using R = std::decay_t<decltype(tag)>;
        StalkProfile st = uniform_stalk(r.space, 1);
        if (cfg.d >= 2) {
          Cochain<R> eta = random_cochain<R>(rng, r.space, st, 0, 3, 2);
          Cochain<R> omega = differential(eta);
          if (omega.degree < cfg.d) {
            Cochain<R> prim = solve_primitive(omega);
            c.check(verifies_primitive(omega, prim),
                    "restricted-space primitive fails exact differential check");
          }
        } else {
          DiscreteSpace q = full_quotient_space(r.space);
          Section<R> t = random_section<R>(rng, q, st, 3, 3);
          c.check(top_class(lift_class(t, r.space), family_finite()) == t,
                  "restricted-space descent is not inverse to lifting");
        }
      });
    }
  }
  c.res.seconds = clock.seconds();
  return c.res;
}

// ---------------------------------------------------------------------------
// 06. Degree zero: no nonzero finitely supported section is invariant.
// ---------------------------------------------------------------------------
inline SuiteResult criterion_invariant_section_vanishing(std::uint64_t seed, int base,
    const std::vector<RingDesc>& rings = suite_detail::ring_cycle(), int max_d = 3) {
  using namespace suite_detail;
  Checker c("invariant-section-vanishing", 0.0);
  Stopwatch clock;
  Rng rng(seed + 5);
  for (int d = 1; d <= max_d; ++d) {
    for (int i = 0; i < base / 3; ++i) {
      RingDesc ring = rings[static_cast<std::size_t>(i) % rings.size()];
      DiscreteSpace sp = make_space(d, i % 2, 1 + (i % 2), ring);
      with_ring(ring, [&](auto tag) {
        using R = std::decay_t<decltype(tag)>;
        StalkProfile st = random_stalk(rng, sp);
        Section<R> s = random_nonzero_section<R>(rng, sp, st, 4, 3);
        Cochain<R> w = make_cochain<R>(sp, st, 0, {{0u, s}});
        c.check(!is_cocycle(w), "nonzero finitely supported section claims invariance");

        Cochain<R> z = zero_cochain<R>(sp, st, 0);
        c.check(is_cocycle(z), "zero section is not invariant");
        CohomologyReport<R> rep = cohomology_report<R>(sp, st, family_finite(), {z});
        c.check(rep.probes.size() == 1 && rep.probes[0].kind == "zero-section",
                "zero degree-0 probe not reported as the zero section");
      });
    }
  }
  c.res.seconds = clock.seconds();
  return c.res;
}

// ---------------------------------------------------------------------------
// 07. Complex identities: d(d(w)) = 0 and the one-generator telescopes.
// ---------------------------------------------------------------------------
inline SuiteResult criterion_koszul_identities(std::uint64_t seed, int base,
    const std::vector<RingDesc>& rings = suite_detail::ring_cycle(), int max_d = 3) {
  using namespace suite_detail;
  Checker c("koszul-identities", 0.0);
  Stopwatch clock;
  Rng rng(seed + 6);
  for (int d = 1; d <= max_d; ++d) {
    for (int p = 0; p + 2 <= d; ++p) {
      for (int i = 0; i < base; ++i) {
        RingDesc ring = rings[static_cast<std::size_t>(i) % rings.size()];
        DiscreteSpace sp = make_space(d, i % 2, 1 + (i % 2), ring);
        with_ring(ring, [&](auto tag) {
          using R = std::decay_t<decltype(tag)>;
          StalkProfile st = random_stalk(rng, sp);
          Cochain<R> w = random_cochain<R>(rng, sp, st, p, 3, 3);
          c.check(is_zero(differential(differential(w))),
                  "d(d(w)) is nonzero (d=" + std::to_string(d) + ", p=" + std::to_string(p) + ")");
        });
      }
    }
    for (int i = 0; i < base; ++i) {
      RingDesc ring = rings[static_cast<std::size_t>(i) % rings.size()];
      DiscreteSpace sp = make_space(d, i % 2, 1 + (i % 2), ring);
      with_ring(ring, [&](auto tag) {
        using R = std::decay_t<decltype(tag)>;
        StalkProfile st = random_stalk(rng, sp);
        Section<R> s = random_section<R>(rng, sp, st, 3, 3);
        int gen = static_cast<int>(rng.range(1, d));
        c.check(sigma_minus_one(ray_primitive(s, gen), gen) == s,
                "difference of the one-sided sum does not return the section");
        c.check(ray_primitive(sigma_minus_one(s, gen), gen) == s,
                "one-sided sum of the difference does not return the section");
      });
    }
  }
  c.res.seconds = clock.seconds();
  return c.res;
}

// ---------------------------------------------------------------------------
// 08. Pushforward of support families is functorial in the quotient map.
// ---------------------------------------------------------------------------
inline SuiteResult criterion_pushforward_functoriality(std::uint64_t seed, int base,
    const std::vector<RingDesc>& rings = suite_detail::ring_cycle(), int max_d = 3) {
  using namespace suite_detail;
  Checker c("pushforward-functoriality", 0.0);
  Stopwatch clock;
  Rng rng(seed + 7);
  for (int i = 0; i < base; ++i) {
    int d = static_cast<int>(rng.range(std::min(2, max_d), std::min(3, max_d)));
    RingDesc ring = rings[static_cast<std::size_t>(i) % rings.size()];
    DiscreteSpace sp = make_space(d, static_cast<int>(rng.range(0, 1)),
                                  static_cast<int>(rng.range(1, 2)), ring);
    SupportFamily fam = random_family(rng, sp);

    // Random two-stage quotient versus its composition.
    std::vector<int> first_removed;
    for (int g = 1; g <= d; ++g)
      if (rng.coin()) first_removed.push_back(g);
    if (first_removed.empty()) first_removed.push_back(static_cast<int>(rng.range(1, d)));
    QuotientMap q1{sp, first_removed};
    DiscreteSpace mid = q1.target();
    std::vector<int> second_removed;
    for (int g = 1; g <= mid.d; ++g)
      if (rng.coin()) second_removed.push_back(g);
    QuotientMap q2{mid, second_removed};
    QuotientMap composed = compose_quotients(q1, q2);
    DiscreteSpace tsp = q2.target();

    SupportFamily via_stages = pushforward(pushforward(fam, q1), q2);
    SupportFamily via_composition = pushforward(fam, composed);
    bool agree = true;
    for (int k = 0; k < 4; ++k) {
      ShapeDescriptor probe = random_shape(rng, tsp);
      if (contains(tsp, via_stages, probe) != contains(tsp, via_composition, probe)) agree = false;
    }
    c.check(agree, "two-stage and composed pushforwards disagree on membership");

    // Identity map acts as the identity on membership.
    SupportFamily via_identity = pushforward(fam, identity_quotient(sp));
    bool idem = true;
    for (int k = 0; k < 2; ++k) {
      ShapeDescriptor probe = random_shape(rng, sp);
      if (contains(sp, via_identity, probe) != contains(sp, fam, probe)) idem = false;
    }
    c.check(idem, "pushforward along the identity changes membership");
  }
  c.res.seconds = clock.seconds();
  return c.res;
}

// ---------------------------------------------------------------------------
// 09. Flow solver: exact primitives, obstructions, and the discrete bridge.
// ---------------------------------------------------------------------------
inline SuiteResult criterion_flow_solver(std::uint64_t seed, int base,
    const std::vector<RingDesc>& rings = suite_detail::ring_cycle(), int max_d = 3) {
  using namespace suite_detail;
  Checker c("flow-solver", 30.0);
  Stopwatch clock;
  Rng rng(seed + 8);
  (void)rings;
  (void)max_d;
  const Rational one(1);
  const PiecewiseLinear hat =
      pl_from_points({Rational(0), Rational(1), Rational(2)}, {Rational(0), Rational(1), Rational(0)});

  // Frozen example: the one-sided primitive of the unit hat ramps up and
  // settles at the constant 1.
  {
    EventuallyPeriodic F = flow_primitive(hat, one);
    bool ok = ep_eval(F, Rational(-5)) == Rational(0) && ep_eval(F, Rational(1)) == Rational(0) &&
              ep_eval(F, Rational(3, 2)) == Rational(1, 2) && ep_eval(F, Rational(2)) == Rational(1) &&
              ep_eval(F, Rational(7, 2)) == Rational(1) && ep_eval(F, Rational(1000)) == Rational(1);
    c.check(ok, "one-sided primitive of the unit hat has wrong values");
    c.check(verify_flow_identity(hat, one, F), "one-sided primitive of the hat fails the identity");
    PeriodicProfile p = periodization(hat, one);
    c.check(profile_eval(p, Rational(0)) == Rational(1) &&
                profile_eval(p, Rational(1, 3)) == Rational(1) &&
                profile_eval(p, Rational(7, 5)) == Rational(1),
            "periodization of the unit hat is not the constant 1");
    CompactPrimitive cp = compact_primitive(hat, one);
    c.check(!cp.exists && !profile_is_zero(cp.obstruction),
            "unit hat wrongly admits a compactly supported primitive");
  }

  // Frozen example: hat(x) - hat(x-1) telescopes to the shifted hat.
  {
    PiecewiseLinear f = pl_sub(hat, pl_shift(hat, one));
    CompactPrimitive cp = compact_primitive(f, one);
    c.check(cp.exists && cp.primitive == pl_shift(hat, one),
            "telescope of two hats does not recover the shifted hat");
  }

  const std::vector<Rational> shifts = {Rational(1), Rational(1, 2), Rational(3, 2), Rational(2, 3)};

  // Round trips: differences of compact functions are solved back exactly.
  for (int i = 0; i < base / 2; ++i) {
    PiecewiseLinear g = random_pl(rng);
    Rational s = shifts[static_cast<std::size_t>(i) % shifts.size()];
    PiecewiseLinear f = flow_coboundary(g, s);
    CompactPrimitive cp = compact_primitive(f, s);
    c.check(cp.exists && cp.primitive == g, "difference of a compact function is not solved back");
    EventuallyPeriodic F = flow_primitive(f, s);
    c.check(verify_flow_identity(f, s, F), "one-sided primitive fails the identity on a difference");
  }

  // Obstructions: nonzero periodization blocks compact primitives, and the
  // folded profile matches direct summation at sample points.
  long long obstruction_cases = 0;
  for (int i = 0; i < base && obstruction_cases < base / 2; ++i) {
    PiecewiseLinear f = random_pl(rng);
    Rational s = shifts[static_cast<std::size_t>(i) % shifts.size()];
    PeriodicProfile p = periodization(f, s);
    if (profile_is_zero(p)) continue;
    ++obstruction_cases;
    CompactPrimitive cp = compact_primitive(f, s);
    c.check(!cp.exists && !profile_is_zero(cp.obstruction),
            "nonzero periodization did not block the compact primitive");
    c.check(verify_flow_identity(f, s, flow_primitive(f, s)),
            "one-sided primitive fails the identity on an obstructed input");
    bool fold_ok = true;
    for (int k = 0; k < 4; ++k) {
      Rational x = random_rational(rng, 6, 3);
      Rational direct;
      if (!pl_is_zero(f)) {
        long long jlo = rat_ceil((f.xs.front() - x) / s);
        long long jhi = rat_floor((f.xs.back() - x) / s);
        for (long long j = jlo; j <= jhi; ++j) direct = direct + pl_eval(f, x + Rational(j) * s);
      }
      if (!(profile_eval(p, x) == direct)) fold_ok = false;
    }
    c.check(fold_ok, "periodization disagrees with direct summation");
  }

  // Bridge: integer hat combinations obstruct exactly when the matching
  // integer section has a nonzero descent value.
  for (int i = 0; i < base / 4; ++i) {
    int n = static_cast<int>(rng.range(2, 5));
    std::vector<long long> coeff;
    PiecewiseLinear f;
    for (int j = 0; j < n; ++j) {
      coeff.push_back(rng.range(-3, 3));
      f = pl_add(f, pl_scale(Rational(coeff.back()), pl_shift(hat, Rational(j))));
    }
    CompactPrimitive cp = compact_primitive(f, one);

    DiscreteSpace sp = make_space(1, 0, 1, ring_Z());
    StalkProfile st = uniform_stalk(sp, 1);
    std::vector<ElementaryTerm<Zint>> terms;
    for (int j = 0; j < n; ++j) {
      ElementaryTerm<Zint> t;
      t.anchor.position = {j};
      t.value = {Zint{coeff[static_cast<std::size_t>(j)]}};
      terms.push_back(std::move(t));
    }
    Section<Zint> s = make_section(sp, st, std::move(terms));
    Cochain<Zint> w = make_cochain<Zint>(sp, st, 1, {{1u, s}});
    TopClass<Zint> tc = top_class_with_witness(w, family_finite());
    c.check(cp.exists == is_zero(tc.value),
            "flow obstruction disagrees with the discrete descent value");
    if (cp.exists) {
      c.check(tc.primitive.has_value() && verifies_primitive(w, *tc.primitive),
              "discrete witness fails exact differential check on a bridge case");
      c.check(flow_coboundary(cp.primitive, one) == f,
              "flow primitive fails the exact difference check on a bridge case");
    }
  }
  c.res.seconds = clock.seconds();
  return c.res;
}

// ---------------------------------------------------------------------------
// 10. Properness certificates: exact transporters against brute force.
// ---------------------------------------------------------------------------
inline SuiteResult criterion_properness_certificates(std::uint64_t seed, int base,
    const std::vector<RingDesc>& rings = suite_detail::ring_cycle(), int max_d = 3) {
  using namespace suite_detail;
  Checker c("properness-certificates", 0.0);
  Stopwatch clock;
  Rng rng(seed + 9);
  (void)rings;

  // Frozen transporter on the line: [0,3] against [-3,3] meets in [-3,6].
  {
    DiscreteSpace sp = make_space(1, 0, 1, ring_Z());
    FiniteWindow a{{0}, {{0, 3}}};
    FiniteWindow b{{0}, {{-3, 3}}};
    std::vector<GroupVector> got = transporter(sp, a, b);
    std::vector<GroupVector> want;
    for (long long g = -3; g <= 6; ++g) want.push_back(GroupVector{{g}});
    c.check(got == want, "frozen line transporter differs from [-3,6]");
  }

  // Frozen self-transporter of the 3x3 square: the 5x5 difference square.
  {
    DiscreteSpace sp = make_space(2, 0, 1, ring_Z());
    FiniteWindow w{{0}, {{-1, 1}, {-1, 1}}};
    PropernessCertificate cert = check_bourbaki_proper(sp, w);
    std::vector<GroupVector> want;
    for (long long x = -2; x <= 2; ++x)
      for (long long y = -2; y <= 2; ++y) want.push_back(GroupVector{{x, y}});
    std::sort(want.begin(), want.end());
    c.check(cert.proper && cert.transporter == want,
            "frozen square self-transporter differs from the 5x5 square");
  }

  // Random windows against a brute-force scan over the difference box.
  for (int i = 0; i < base; ++i) {
    int d = static_cast<int>(rng.range(1, std::min(2, max_d)));
    DiscreteSpace sp = make_space(d, static_cast<int>(rng.range(0, 1)),
                                  static_cast<int>(rng.range(1, 2)), ring_Z());
    FiniteWindow wa = random_window(rng, sp, 3);
    FiniteWindow wb = random_window(rng, sp, 3);
    std::vector<GroupVector> got = transporter(sp, wa, wb);

    std::vector<Point> pa = enumerate_window(sp, wa);
    std::vector<Point> pb = enumerate_window(sp, wb);
    std::set<Point> in_a(pa.begin(), pa.end());
    std::vector<GroupVector> want;
    std::vector<long long> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      const auto& ia = wa.intervals[static_cast<std::size_t>(sp.m + k)];
      const auto& ib = wb.intervals[static_cast<std::size_t>(sp.m + k)];
      lo[static_cast<std::size_t>(k)] = ia.first - ib.second;
      hi[static_cast<std::size_t>(k)] = ia.second - ib.first;
    }
    std::vector<long long> g(static_cast<std::size_t>(d));
    auto scan = [&](auto&& self, int k) -> void {
      if (k == d) {
        GroupVector gv{g};
        for (const Point& p : pb) {
          if (in_a.count(act(sp, p, gv))) {
            want.push_back(gv);
            return;
          }
        }
        return;
      }
      for (long long v = lo[static_cast<std::size_t>(k)]; v <= hi[static_cast<std::size_t>(k)]; ++v) {
        g[static_cast<std::size_t>(k)] = v;
        self(self, k + 1);
      }
    };
    scan(scan, 0);
    std::sort(want.begin(), want.end());
    c.check(got == want, "transporter differs from the brute-force difference scan");
  }

  // Properness decisions across the family zoo.
  for (int i = 0; i < base / 4; ++i) {
    int d = static_cast<int>(rng.range(1, std::min(2, max_d)));
    DiscreteSpace sp = make_space(d, static_cast<int>(rng.range(0, 1)), 1, ring_Z());
    c.check(check_phi_proper(sp, family_finite()).proper, "finite family not proper");
    c.check(!check_phi_proper(sp, family_all()).proper, "all-sets family proper despite d >= 1");
    c.check(!check_phi_proper(sp, family_orbit_finite()).proper,
            "saturated family proper despite d >= 1");
    ShapeDescriptor bounded = random_shape(rng, sp);
    for (int k = 0; k < sp.d; ++k) bounded.coords[static_cast<std::size_t>(sp.m + k)] = coord_point(0);
    c.check(check_phi_proper(sp, family_generated({bounded})).proper,
            "family with bounded acting extent not proper");
    ShapeDescriptor unbounded = bounded;
    unbounded.coords[static_cast<std::size_t>(sp.m)] = coord_all();
    c.check(!check_phi_proper(sp, family_generated({unbounded})).proper,
            "family with unbounded acting extent proper despite d >= 1");

    DiscreteSpace pt = make_space(0, sp.m, 1, ring_Z());
    c.check(check_phi_proper(pt, family_all()).proper, "all-sets family not proper when d = 0");
  }
  c.res.seconds = clock.seconds();
  return c.res;
}

inline std::vector<SuiteResult> run_all(std::uint64_t seed, int base,
                                        const std::vector<RingDesc>& rings = suite_detail::ring_cycle(),
                                        int max_d = 3) {
  require(base >= 1, "case count must be positive");
  require(1 <= max_d && max_d <= 4, "acting rank for the suite must be between 1 and 4");
  require(!rings.empty(), "at least one coefficient ring is needed");
  return {
      criterion_concentration_below_top(seed, base, rings, max_d),
      criterion_top_degree_isomorphism(seed, base, rings, max_d),
      criterion_support_contrast(seed, base, rings, max_d),
      criterion_staging_order_independence(seed, base, rings, max_d),
      criterion_finite_index_restriction(seed, base, rings, max_d),
      criterion_invariant_section_vanishing(seed, base, rings, max_d),
      criterion_koszul_identities(seed, base, rings, max_d),
      criterion_pushforward_functoriality(seed, base, rings, max_d),
      criterion_flow_solver(seed, base, rings, max_d),
      criterion_properness_certificates(seed, base, rings, max_d),
  };
}

inline std::string format_result(int index, const SuiteResult& r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", r.seconds);
  std::string line = "criterion ";
  if (index < 10) line += '0';
  line += std::to_string(index);
  line += ' ' + r.name + ": ";
  line += r.passed() ? "PASS" : "FAIL";
  line += " (" + std::to_string(r.cases) + " cases, " + buf + " s)";
  if (!r.passed() && !r.notes.empty()) line += " -- " + r.notes;
  return line;
}

}  // namespace zdcoh
