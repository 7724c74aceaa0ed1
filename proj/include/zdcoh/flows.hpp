#pragma once

// Exact piecewise-linear calculus for the continuum shift equation
// F(x + s) - F(x) = f(x) on the real line (one acting translation, shift s > 0).
//
// All data is rational and all decisions are exact:
//   * PiecewiseLinear    -- continuous, compactly supported PL function in a
//                           unique minimal-breakpoint normal form.
//   * EventuallyPeriodic -- the canonical one-sided primitive: zero far to the
//                           left, explicit on a core window, s-periodic to the
//                           right of the core.
//   * PeriodicProfile    -- an s-periodic PL function on [0, s], used as the
//                           obstruction to compactly supported primitives.
//
// flow_primitive(f, s) returns the unique primitive vanishing at -infinity;
// compact_primitive(f, s) decides whether a compactly supported primitive
// exists (iff the periodization of f vanishes) and returns it when it does.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "common.hpp"
#include "ring.hpp"

namespace zdcoh {

// ---------------------------------------------------------------------------
// PiecewiseLinear: continuous PL function, zero outside [xs.front(), xs.back()]
// ---------------------------------------------------------------------------

struct PiecewiseLinear {
  std::vector<Rational> xs;  // strictly increasing breakpoints
  std::vector<Rational> ys;  // values at the breakpoints

  friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;
};

inline bool pl_is_zero(const PiecewiseLinear& f) { return f.xs.empty(); }

namespace detail {

// Collinearity of (x0,y0),(x1,y1),(x2,y2) without division:
// (y1-y0)*(x2-x1) == (y2-y1)*(x1-x0).
inline bool pl_collinear(const Rational& x0, const Rational& y0, const Rational& x1,
                         const Rational& y1, const Rational& x2, const Rational& y2) {
  return (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0);
}

// Drop interior breakpoints where the slope does not change.
inline void pl_strip_collinear(std::vector<Rational>& xs, std::vector<Rational>& ys) {
  if (xs.size() < 3) return;
  std::vector<Rational> kx, ky;
  kx.push_back(xs[0]);
  ky.push_back(ys[0]);
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    if (!pl_collinear(kx.back(), ky.back(), xs[i], ys[i], xs[i + 1], ys[i + 1])) {
      kx.push_back(xs[i]);
      ky.push_back(ys[i]);
    }
  }
  kx.push_back(xs.back());
  ky.push_back(ys.back());
  xs = std::move(kx);
  ys = std::move(ky);
}

// Drop redundant zero breakpoints at either end (segments identical to the
// ambient zero function).
inline void pl_trim_zero_ends(std::vector<Rational>& xs, std::vector<Rational>& ys) {
  std::size_t lo = 0, hi = xs.size();
  while (hi - lo >= 2 && is_zero(ys[lo]) && is_zero(ys[lo + 1])) ++lo;
  while (hi - lo >= 2 && is_zero(ys[hi - 1]) && is_zero(ys[hi - 2])) --hi;
  if (lo > 0 || hi < xs.size()) {
    xs = std::vector<Rational>(xs.begin() + static_cast<std::ptrdiff_t>(lo),
                               xs.begin() + static_cast<std::ptrdiff_t>(hi));
    ys = std::vector<Rational>(ys.begin() + static_cast<std::ptrdiff_t>(lo),
                               ys.begin() + static_cast<std::ptrdiff_t>(hi));
  }
}

}  // namespace detail

// Build a canonical PL function from sampled breakpoints.  The data must be a
// continuous compactly supported function: strictly increasing xs, zero value
// at the first and last breakpoint.
inline PiecewiseLinear pl_from_points(std::vector<Rational> xs, std::vector<Rational> ys) {
  require(xs.size() == ys.size(), "breakpoint and value lists differ in length");
  if (xs.empty()) return {};
  require(xs.size() >= 2, "a nonzero piecewise-linear function needs at least two breakpoints");
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    require(xs[i] < xs[i + 1], "breakpoints must be strictly increasing");
  require(is_zero(ys.front()) && is_zero(ys.back()),
          "piecewise-linear functions must vanish at their first and last breakpoints");
  detail::pl_trim_zero_ends(xs, ys);
  detail::pl_strip_collinear(xs, ys);
  detail::pl_trim_zero_ends(xs, ys);
  bool all_zero = true;
  for (const auto& y : ys)
    if (!is_zero(y)) all_zero = false;
  if (all_zero) return {};
  return {std::move(xs), std::move(ys)};
}

namespace detail {

// Interpolate a breakpoint table at x; zero outside [xs.front(), xs.back()].
inline Rational table_eval(const std::vector<Rational>& xs, const std::vector<Rational>& ys,
                           const Rational& x) {
  if (xs.empty() || x < xs.front() || x > xs.back()) return {};
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs.begin());
  if (i == xs.size()) return ys.back();
  // xs[i-1] <= x < xs[i]
  const Rational& x0 = xs[i - 1];
  const Rational& x1 = xs[i];
  const Rational& y0 = ys[i - 1];
  const Rational& y1 = ys[i];
  return y0 + (y1 - y0) * ((x - x0) / (x1 - x0));
}

}  // namespace detail

inline Rational pl_eval(const PiecewiseLinear& f, const Rational& x) {
  return detail::table_eval(f.xs, f.ys, x);
}

inline PiecewiseLinear pl_neg(const PiecewiseLinear& f) {
  PiecewiseLinear r = f;
  for (auto& y : r.ys) y = -y;
  return r;
}

inline PiecewiseLinear pl_scale(const Rational& c, const PiecewiseLinear& f) {
  if (is_zero(c)) return {};
  PiecewiseLinear r = f;
  for (auto& y : r.ys) y = c * y;
  return r;
}

// (pl_shift(f, t))(x) = f(x - t).
inline PiecewiseLinear pl_shift(const PiecewiseLinear& f, const Rational& t) {
  PiecewiseLinear r = f;
  for (auto& x : r.xs) x = x + t;
  return r;
}

inline PiecewiseLinear pl_add(const PiecewiseLinear& f, const PiecewiseLinear& g) {
  if (pl_is_zero(f)) return g;
  if (pl_is_zero(g)) return f;
  std::vector<Rational> xs;
  xs.reserve(f.xs.size() + g.xs.size());
  xs.insert(xs.end(), f.xs.begin(), f.xs.end());
  xs.insert(xs.end(), g.xs.begin(), g.xs.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Rational> ys;
  ys.reserve(xs.size());
  for (const auto& x : xs) ys.push_back(pl_eval(f, x) + pl_eval(g, x));
  return pl_from_points(std::move(xs), std::move(ys));
}

inline PiecewiseLinear pl_sub(const PiecewiseLinear& f, const PiecewiseLinear& g) {
  return pl_add(f, pl_neg(g));
}

// The shift-difference operator: (flow_coboundary(G, s))(x) = G(x + s) - G(x).
inline PiecewiseLinear flow_coboundary(const PiecewiseLinear& g, const Rational& s) {
  require(Rational{} < s, "shift must be positive");
  return pl_sub(pl_shift(g, -s), g);
}

// ---------------------------------------------------------------------------
// EventuallyPeriodic: zero left of the core, explicit on the core, periodic
// to the right of it.
// ---------------------------------------------------------------------------

struct EventuallyPeriodic {
  Rational period;           // s > 0
  std::vector<Rational> xs;  // core breakpoints (empty means the zero function)
  std::vector<Rational> ys;  // core values; F(x) = F(x - period) for x > xs.back()

  friend bool operator==(const EventuallyPeriodic&, const EventuallyPeriodic&) = default;
};

inline bool ep_is_zero(const EventuallyPeriodic& f) { return f.xs.empty(); }

inline Rational ep_eval(const EventuallyPeriodic& f, const Rational& x) {
  if (f.xs.empty()) return {};
  Rational t = x;
  const Rational& hi = f.xs.back();
  if (t > hi) {
    long long j = rat_ceil((t - hi) / f.period);
    t = t - Rational(j) * f.period;  // lands in (hi - period, hi]
  }
  if (t < f.xs.front()) return {};
  return detail::table_eval(f.xs, f.ys, t);
}

// The unique primitive of f for shift s that vanishes at -infinity:
//   F(x) = sum_{k >= 1} f(x - k s),   so   F(x + s) - F(x) = f(x).
// F is zero below a + s, explicit on the core [a + s, b + s] (where f is
// supported on [a, b]) and s-periodic above b.
inline EventuallyPeriodic flow_primitive(const PiecewiseLinear& f, const Rational& s) {
  require(Rational{} < s, "shift must be positive");
  EventuallyPeriodic out;
  out.period = s;
  if (pl_is_zero(f)) return out;
  const Rational a = f.xs.front();
  const Rational b = f.xs.back();
  const Rational lo = a + s;
  const Rational hi = b + s;
  long long copies = rat_floor((b - a) / s) + 1;
  std::vector<Rational> xs;
  xs.push_back(lo);
  xs.push_back(hi);
  for (long long k = 1; k <= copies; ++k) {
    Rational off = Rational(k) * s;
    for (const auto& x : f.xs) {
      Rational y = x + off;
      if (lo <= y && y <= hi) xs.push_back(y);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Rational> ys;
  ys.reserve(xs.size());
  for (const auto& x : xs) {
    Rational v;
    for (long long k = 1; k <= copies; ++k) v = v + pl_eval(f, x - Rational(k) * s);
    ys.push_back(v);
  }
  detail::pl_strip_collinear(xs, ys);
  // Drop a leading run of zero segments; the right end carries the periodic
  // junction and is kept as computed.
  {
    std::size_t lo_i = 0;
    while (xs.size() - lo_i >= 2 && is_zero(ys[lo_i]) && is_zero(ys[lo_i + 1])) ++lo_i;
    if (lo_i > 0) {
      xs.erase(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(lo_i));
      ys.erase(ys.begin(), ys.begin() + static_cast<std::ptrdiff_t>(lo_i));
    }
  }
  bool all_zero = true;
  for (const auto& y : ys)
    if (!is_zero(y)) all_zero = false;
  if (all_zero) return out;
  out.xs = std::move(xs);
  out.ys = std::move(ys);
  return out;
}

// Exact check that F(x + s) - F(x) = f(x) everywhere.  Both sides are
// piecewise linear with an explicitly computable kink set, so agreement on
// that finite set decides equality on the whole line.
inline bool verify_flow_identity(const PiecewiseLinear& f, const Rational& s,
                                 const EventuallyPeriodic& F) {
  require(Rational{} < s, "shift must be positive");
  if (!(F.period == s)) return false;
  if (ep_is_zero(F)) return pl_is_zero(f);
  std::vector<Rational> pts;
  Rational lo = F.xs.front() - s;
  Rational hi = F.xs.back() + s;
  if (!pl_is_zero(f)) {
    lo = std::min(lo, f.xs.front());
    hi = std::max(hi, f.xs.back() + s);
    for (const auto& x : f.xs) pts.push_back(x);
  }
  pts.push_back(lo - Rational(1));
  pts.push_back(hi);
  // Kinks of x -> F(x) and x -> F(x + s) inside the window: the core kinks
  // shifted by j*s for every j >= -1 that stays below the window top.
  for (const auto& x : F.xs) {
    for (long long j = -1;; ++j) {
      Rational y = x + Rational(j) * s;
      if (y > hi) break;
      if (y >= lo - Rational(1)) pts.push_back(y);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (const auto& x : pts) {
    Rational lhs = ep_eval(F, x + s) - ep_eval(F, x);
    if (!(lhs == pl_eval(f, x))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// PeriodicProfile: an s-periodic function recorded on the window [0, s].
// ---------------------------------------------------------------------------

struct PeriodicProfile {
  Rational period;           // s > 0
  std::vector<Rational> xs;  // breakpoints from 0 to s inclusive (empty = zero)
  std::vector<Rational> ys;

  friend bool operator==(const PeriodicProfile&, const PeriodicProfile&) = default;
};

inline bool profile_is_zero(const PeriodicProfile& p) { return p.xs.empty(); }

inline Rational profile_eval(const PeriodicProfile& p, const Rational& x) {
  if (p.xs.empty()) return {};
  long long j = rat_floor(x / p.period);
  Rational t = x - Rational(j) * p.period;  // lands in [0, period)
  return detail::table_eval(p.xs, p.ys, t);
}

// Fold all translates of f by multiples of s onto one period window:
//   P(x) = sum_{j in Z} f(x + j s)  on  [0, s].
inline PeriodicProfile periodization(const PiecewiseLinear& f, const Rational& s) {
  require(Rational{} < s, "shift must be positive");
  PeriodicProfile out;
  out.period = s;
  if (pl_is_zero(f)) return out;
  const Rational a = f.xs.front();
  const Rational b = f.xs.back();
  long long jlo = rat_ceil(a / s) - 1;
  long long jhi = rat_floor(b / s);
  std::vector<Rational> xs;
  xs.push_back(Rational(0));
  xs.push_back(s);
  for (long long j = jlo; j <= jhi; ++j) {
    Rational off = Rational(j) * s;
    for (const auto& x : f.xs) {
      Rational y = x - off;
      if (Rational(0) <= y && y <= s) xs.push_back(y);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Rational> ys;
  ys.reserve(xs.size());
  for (const auto& x : xs) {
    Rational v;
    for (long long j = jlo; j <= jhi; ++j) v = v + pl_eval(f, x + Rational(j) * s);
    ys.push_back(v);
  }
  detail::pl_strip_collinear(xs, ys);
  bool all_zero = true;
  for (const auto& y : ys)
    if (!is_zero(y)) all_zero = false;
  if (all_zero) return out;
  out.xs = std::move(xs);
  out.ys = std::move(ys);
  return out;
}

// ---------------------------------------------------------------------------
// Compactly supported primitives
// ---------------------------------------------------------------------------

struct CompactPrimitive {
  bool exists = false;
  PiecewiseLinear primitive;    // set when exists
  PeriodicProfile obstruction;  // set (nonzero) when !exists
};

// A compactly supported G with G(x + s) - G(x) = f(x) exists iff the
// periodization of f vanishes; it is then unique and equals the one-sided
// primitive, which vanishes above the support of f in that case.
inline CompactPrimitive compact_primitive(const PiecewiseLinear& f, const Rational& s) {
  require(Rational{} < s, "shift must be positive");
  CompactPrimitive out;
  PeriodicProfile p = periodization(f, s);
  if (!profile_is_zero(p)) {
    out.exists = false;
    out.obstruction = std::move(p);
    return out;
  }
  out.exists = true;
  out.obstruction.period = s;
  if (pl_is_zero(f)) return out;
  EventuallyPeriodic F = flow_primitive(f, s);
  if (ep_is_zero(F)) return out;
  const Rational b = f.xs.back();
  std::vector<Rational> xs, ys;
  for (std::size_t i = 0; i < F.xs.size(); ++i) {
    if (F.xs[i] <= b) {
      xs.push_back(F.xs[i]);
      ys.push_back(F.ys[i]);
    }
  }
  if (xs.empty() || xs.back() < b) {
    xs.push_back(b);
    ys.push_back(ep_eval(F, b));
  }
  if (xs.size() < 2) return out;  // support degenerates to a point: zero function
  out.primitive = pl_from_points(std::move(xs), std::move(ys));
  return out;
}

}  // namespace zdcoh
