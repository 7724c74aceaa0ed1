#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <vector>

#include <zdcoh/zdcoh.hpp>

using namespace zdcoh;

namespace {

PiecewiseLinear pl(std::vector<Rational> xs, std::vector<Rational> ys) {
  return pl_from_points(std::move(xs), std::move(ys));
}

const PiecewiseLinear kHat = pl({Rational(0), Rational(1), Rational(2)},
                                {Rational(0), Rational(1), Rational(0)});

PiecewiseLinear random_compact(std::mt19937_64& rng) {
  std::set<Rational> grid;
  int n = 3 + static_cast<int>(rng() % 4);
  while (static_cast<int>(grid.size()) < n)
    grid.insert(Rational(static_cast<long long>(rng() % 33) - 16, 2));
  std::vector<Rational> xs(grid.begin(), grid.end());
  std::vector<Rational> ys(xs.size(), Rational(0));
  for (std::size_t i = 1; i + 1 < ys.size(); ++i)
    ys[i] = Rational(static_cast<long long>(rng() % 13) - 6,
                     1 + static_cast<long long>(rng() % 3));
  return pl(std::move(xs), std::move(ys));
}

Rational random_shift(std::mt19937_64& rng) {
  static const Rational choices[] = {Rational(1, 2), Rational(1), Rational(3, 2), Rational(2),
                                     Rational(1, 3)};
  return choices[rng() % 5];
}

std::vector<Rational> sample_grid(const Rational& lo, const Rational& hi) {
  std::vector<Rational> out;
  for (Rational x = lo; x <= hi; x = x + Rational(1, 6)) out.push_back(x);
  return out;
}

}  // namespace

TEST_CASE("piecewise linear canonical form") {
  SECTION("construction validates its input") {
    CHECK_THROWS_AS(pl({Rational(0)}, {Rational(0)}), parse_error);
    CHECK_THROWS_AS(pl({Rational(0), Rational(0)}, {Rational(0), Rational(0)}), parse_error);
    CHECK_THROWS_AS(pl({Rational(0), Rational(1)}, {Rational(1), Rational(0)}), parse_error);
    CHECK_THROWS_AS(pl({Rational(0), Rational(1)}, {Rational(0), Rational(1)}), parse_error);
    CHECK_THROWS_AS(pl({Rational(0), Rational(1)}, {Rational(0)}), parse_error);
  }

  SECTION("collinear interior points are removed") {
    PiecewiseLinear f = pl({Rational(0), Rational(1), Rational(2), Rational(3)},
                           {Rational(0), Rational(1), Rational(2), Rational(0)});
    CHECK(f.xs == std::vector<Rational>{Rational(0), Rational(2), Rational(3)});
    CHECK(f.ys == std::vector<Rational>{Rational(0), Rational(2), Rational(0)});
  }

  SECTION("zero end segments are trimmed") {
    PiecewiseLinear f = pl({Rational(-2), Rational(-1), Rational(0), Rational(1), Rational(2)},
                           {Rational(0), Rational(0), Rational(1), Rational(0), Rational(0)});
    CHECK(f.xs == std::vector<Rational>{Rational(-1), Rational(0), Rational(1)});
    CHECK(pl_eval(f, Rational(-3, 2)) == Rational(0));
  }

  SECTION("the zero function has the empty representation") {
    PiecewiseLinear z = pl({Rational(0), Rational(1), Rational(2)},
                           {Rational(0), Rational(0), Rational(0)});
    CHECK(pl_is_zero(z));
    CHECK(z == PiecewiseLinear{});
    CHECK(pl_is_zero(pl_sub(kHat, kHat)));
  }

  SECTION("equal functions built differently compare equal") {
    PiecewiseLinear direct = pl({Rational(0), Rational(2)}, {Rational(0), Rational(0)});
    CHECK(pl_is_zero(direct));
    PiecewiseLinear sum = pl_add(pl({Rational(0), Rational(1), Rational(2)},
                                    {Rational(0), Rational(1), Rational(0)}),
                                 pl({Rational(0), Rational(1), Rational(2)},
                                    {Rational(0), Rational(-1), Rational(0)}));
    CHECK(pl_is_zero(sum));
    CHECK(pl_add(kHat, pl_neg(kHat)) == PiecewiseLinear{});
  }
}

TEST_CASE("pointwise algebra of piecewise linear functions") {
  CHECK(pl_eval(kHat, Rational(1, 3)) == Rational(1, 3));
  CHECK(pl_eval(kHat, Rational(3, 2)) == Rational(1, 2));
  CHECK(pl_eval(kHat, Rational(-1)) == Rational(0));
  CHECK(pl_eval(kHat, Rational(5)) == Rational(0));

  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 25; ++trial) {
    PiecewiseLinear f = random_compact(rng);
    PiecewiseLinear g = random_compact(rng);
    Rational t = random_shift(rng);
    for (const Rational& x : sample_grid(Rational(-10), Rational(10))) {
      CHECK(pl_eval(pl_add(f, g), x) == pl_eval(f, x) + pl_eval(g, x));
      CHECK(pl_eval(pl_sub(f, g), x) == pl_eval(f, x) - pl_eval(g, x));
      CHECK(pl_eval(pl_neg(f), x) == -pl_eval(f, x));
      CHECK(pl_eval(pl_scale(Rational(-3, 2), f), x) == Rational(-3, 2) * pl_eval(f, x));
      CHECK(pl_eval(pl_shift(f, t), x) == pl_eval(f, x - t));
    }
  }
}

TEST_CASE("the shift-difference operator evaluates pointwise") {
  PiecewiseLinear d = flow_coboundary(kHat, Rational(1, 2));
  for (const Rational& x : sample_grid(Rational(-3), Rational(4)))
    CHECK(pl_eval(d, x) == pl_eval(kHat, x + Rational(1, 2)) - pl_eval(kHat, x));
  CHECK_THROWS_AS(flow_coboundary(kHat, Rational(0)), parse_error);
  CHECK_THROWS_AS(flow_coboundary(kHat, Rational(-1)), parse_error);
}

TEST_CASE("one-sided primitive of the unit triangle") {
  EventuallyPeriodic F = flow_primitive(kHat, Rational(1));
  CHECK(F.period == Rational(1));
  CHECK(F.xs == std::vector<Rational>{Rational(1), Rational(2), Rational(3)});
  CHECK(F.ys == std::vector<Rational>{Rational(0), Rational(1), Rational(1)});

  CHECK(ep_eval(F, Rational(0)) == Rational(0));
  CHECK(ep_eval(F, Rational(1, 2)) == Rational(0));
  CHECK(ep_eval(F, Rational(3, 2)) == Rational(1, 2));
  CHECK(ep_eval(F, Rational(2)) == Rational(1));
  CHECK(ep_eval(F, Rational(301, 3)) == Rational(1));
  CHECK(verify_flow_identity(kHat, Rational(1), F));

  SECTION("direct summation oracle") {
    for (const Rational& x : sample_grid(Rational(-2), Rational(8))) {
      Rational direct;
      for (long long k = 1; k <= 40; ++k) direct = direct + pl_eval(kHat, x - Rational(k));
      CHECK(ep_eval(F, x) == direct);
    }
  }
}

TEST_CASE("the one-sided primitive always satisfies the flow equation") {
  std::mt19937_64 rng(5678);
  for (int trial = 0; trial < 40; ++trial) {
    PiecewiseLinear f = random_compact(rng);
    Rational s = random_shift(rng);
    EventuallyPeriodic F = flow_primitive(f, s);
    CHECK(verify_flow_identity(f, s, F));

    // Direct summation oracle on a grid around and beyond the core.
    for (const Rational& x : sample_grid(Rational(-12), Rational(14))) {
      Rational direct;
      for (long long k = 1; k <= 80; ++k) direct = direct + pl_eval(f, x - Rational(k) * s);
      CHECK(ep_eval(F, x) == direct);
    }
  }
}

TEST_CASE("identity checking rejects wrong candidates") {
  EventuallyPeriodic F = flow_primitive(kHat, Rational(1));

  SECTION("wrong period") {
    EventuallyPeriodic wrong = F;
    wrong.period = Rational(2);
    CHECK_FALSE(verify_flow_identity(kHat, Rational(1), wrong));
  }

  SECTION("perturbed core value") {
    EventuallyPeriodic wrong = F;
    wrong.ys[1] = Rational(2);
    CHECK_FALSE(verify_flow_identity(kHat, Rational(1), wrong));
  }

  SECTION("zero candidate against a nonzero input") {
    EventuallyPeriodic zero;
    zero.period = Rational(1);
    CHECK_FALSE(verify_flow_identity(kHat, Rational(1), zero));
    CHECK(verify_flow_identity(PiecewiseLinear{}, Rational(1), zero));
  }

  SECTION("a candidate with the right restriction but broken periodic tail") {
    EventuallyPeriodic wrong = F;
    wrong.xs.push_back(Rational(4));
    wrong.ys.push_back(Rational(0));
    CHECK_FALSE(verify_flow_identity(kHat, Rational(1), wrong));
  }
}

TEST_CASE("periodization folds the translates onto one window") {
  PeriodicProfile P = periodization(kHat, Rational(1));
  CHECK(P.period == Rational(1));
  CHECK(P.xs == std::vector<Rational>{Rational(0), Rational(1)});
  CHECK(P.ys == std::vector<Rational>{Rational(1), Rational(1)});
  CHECK(profile_eval(P, Rational(-17, 3)) == Rational(1));

  std::mt19937_64 rng(91011);
  for (int trial = 0; trial < 30; ++trial) {
    PiecewiseLinear f = random_compact(rng);
    Rational s = random_shift(rng);
    PeriodicProfile prof = periodization(f, s);
    for (const Rational& x : sample_grid(Rational(-5), Rational(5))) {
      Rational direct;
      for (long long j = -90; j <= 90; ++j) direct = direct + pl_eval(f, x + Rational(j) * s);
      CHECK(profile_eval(prof, x) == direct);
    }
  }
}

TEST_CASE("compact primitives exist exactly when the periodization vanishes") {
  SECTION("the frozen difference example") {
    PiecewiseLinear f = pl_sub(kHat, pl_shift(kHat, Rational(1)));
    CompactPrimitive cp = compact_primitive(f, Rational(1));
    REQUIRE(cp.exists);
    CHECK(cp.primitive == pl_shift(kHat, Rational(1)));
    CHECK(pl_eval(cp.primitive, Rational(2)) == Rational(1));
  }

  SECTION("the triangle itself is obstructed") {
    CompactPrimitive cp = compact_primitive(kHat, Rational(1));
    CHECK_FALSE(cp.exists);
    CHECK(cp.obstruction == periodization(kHat, Rational(1)));
    CHECK_FALSE(profile_is_zero(cp.obstruction));
  }

  SECTION("coboundaries round-trip to their unique compact primitive") {
    std::mt19937_64 rng(121314);
    for (int trial = 0; trial < 40; ++trial) {
      PiecewiseLinear g = random_compact(rng);
      Rational s = random_shift(rng);
      PiecewiseLinear f = flow_coboundary(g, s);
      CompactPrimitive cp = compact_primitive(f, s);
      REQUIRE(cp.exists);
      CHECK(cp.primitive == g);
      CHECK(profile_is_zero(periodization(f, s)));
    }
  }

  SECTION("scaled triangles cancel only when the coefficients sum to zero") {
    PiecewiseLinear mix = pl_add(kHat, pl_neg(pl_shift(kHat, Rational(5))));
    CHECK(compact_primitive(mix, Rational(1)).exists);
    PiecewiseLinear unbalanced = pl_add(kHat, pl_shift(kHat, Rational(5)));
    CompactPrimitive cp = compact_primitive(unbalanced, Rational(1));
    CHECK_FALSE(cp.exists);
    CHECK(profile_eval(cp.obstruction, Rational(1, 2)) == Rational(2));
  }

  SECTION("the zero input has the zero compact primitive") {
    CompactPrimitive cp = compact_primitive(PiecewiseLinear{}, Rational(2));
    CHECK(cp.exists);
    CHECK(pl_is_zero(cp.primitive));
  }
}

TEST_CASE("discretization bridge: triangle combinations against lattice masses") {
  // f = sum_j c_j hat(. - j) has a compact primitive for shift 1 exactly when
  // the matching lattice section sum_j c_j delta_j has vanishing top class.
  DiscreteSpace sp{1, 0, {"q0"}, ring_Q()};
  StalkProfile st = uniform_stalk(sp, 1);

  std::mt19937_64 rng(151617);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 2 + static_cast<int>(rng() % 3);
    std::vector<long long> offsets;
    std::vector<long long> coeffs;
    for (int i = 0; i < n; ++i) {
      offsets.push_back(static_cast<long long>(rng() % 11) - 5);
      coeffs.push_back(static_cast<long long>(rng() % 9) - 4);
    }

    PiecewiseLinear f;
    std::vector<ElementaryTerm<Rational>> terms;
    for (int i = 0; i < n; ++i) {
      f = pl_add(f, pl_scale(Rational(coeffs[i]), pl_shift(kHat, Rational(offsets[i]))));
      ElementaryTerm<Rational> t;
      t.anchor.label = 0;
      t.anchor.position = {offsets[i]};
      t.value = {Rational(coeffs[i])};
      terms.push_back(t);
    }
    Section<Rational> sec = make_section(sp, st, std::move(terms));
    Cochain<Rational> w = make_cochain(
        sp, st, 1, std::map<std::uint32_t, Section<Rational>>{{0b1u, sec}});

    bool discrete_bounds = is_zero(top_class(w, family_finite()));
    CompactPrimitive cp = compact_primitive(f, Rational(1));
    CHECK(cp.exists == discrete_bounds);

    long long total = 0;
    for (long long c : coeffs) total += c;
    CHECK(cp.exists == (total == 0));
  }
}
