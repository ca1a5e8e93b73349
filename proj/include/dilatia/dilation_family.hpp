#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dilatia/error.hpp"
#include "dilatia/index_set.hpp"
#include "dilatia/report.hpp"
#include "dilatia/space.hpp"
#include "dilatia/tolerance.hpp"

namespace dilatia {

/// Indexed maps T_a : X -> X about the space's basepoint.
template <class P>
struct DilationFamily {
  std::string name;
  Space<P> space;
  IndexSet index = IndexSet::interval_01();
  std::function<P(double, const P&)> map;
  /// Scale identity holds analytically; checked at exact_tol instead of abs_tol.
  bool exact = false;

  /// T_a(x). Throws when the image leaves the space.
  P apply(double a, const P& x) const {
    P y = map(a, x);
    if (!space.contains(y))
      throw DomainError("family '" + name + "' maps (alpha=" + std::to_string(a) + ", x=" +
                        point_json(x).dump() + ") outside space '" + space.id + "'");
    return y;
  }
};

namespace detail {

template <class P>
std::vector<P> sample_points(const Space<P>& space, std::size_t n, Rng& rng) {
  std::vector<P> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(space.sample(rng));
  return pts;
}

}  // namespace detail

/// Sampled check of the four family conditions plus T_1 = Id, T_0 = const
/// (when 0 is in I) and the limit at 1 being the identity.
template <class P>
VerificationReport verify_dilation_family(const DilationFamily<P>& fam, const ToleranceConfig& cfg) {
  cfg.validate();
  const auto& X = fam.space;
  const P& x0 = X.center();
  const IndexSet& I = fam.index;
  VerificationReport rep;
  rep.subject = fam.name;

  Rng rng = Rng::derive(cfg.seed, "dilation_family:" + fam.name + ":" + X.id);
  const std::size_t n = static_cast<std::size_t>(cfg.sample_pairs);
  const double scale_tol = fam.exact ? cfg.exact_tol : cfg.abs_tol;
  const std::vector<double> special = I.sample(2, rng);
  auto draw_alpha = [&](std::size_t i) { return i < special.size() ? special[i] : I.draw(rng); };

  CheckAccumulator scale("scale", "d(T_a x, T_a y) = a d(x,y)", scale_tol);
  scale.set_note("violation normalised by 1 + a d(x,y)");
  CheckAccumulator center("center", "T_a(x0) = x0", scale_tol);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = draw_alpha(i);
    const P x = X.sample(rng), y = X.sample(rng);
    const double d = X.distance(x, y);
    const double dd = X.distance(fam.apply(a, x), fam.apply(a, y));
    scale.observe(std::abs(dd - a * d) / (1.0 + a * d), [&] {
      return Json{{"alpha", a}, {"x", point_json(x)}, {"y", point_json(y)}, {"d", d}, {"d_image", dd}};
    });
    const double dc = X.coincidence(fam.apply(a, x0), x0);
    center.observe(dc, [&] { return Json{{"alpha", a}, {"distance", dc}}; });
  }
  if (I.contains(0.5))
    rep.data["center_probe"] = Json{{"alpha", 0.5}, {"distance", X.coincidence(fam.apply(0.5, x0), x0)}};

  CheckAccumulator comp("composition", "T_a(T_b x) = T_ab x", cfg.abs_tol);
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = draw_alpha(i), b = I.draw(rng);
    if (!I.contains(a * b)) {
      ++skipped;
      continue;
    }
    const P x = X.sample(rng);
    const double v = X.coincidence(fam.apply(a, fam.apply(b, x)), fam.apply(a * b, x));
    comp.observe(v, [&] { return Json{{"alpha", a}, {"beta", b}, {"x", point_json(x)}}; });
  }
  if (skipped) comp.set_note(std::to_string(skipped) + " pairs skipped: product outside I");

  const std::size_t m = std::min<std::size_t>(n, 256);
  const std::vector<P> xs = detail::sample_points(X, m, rng);
  if (I.contains(1.0)) {
    CheckAccumulator id("identity_at_one", "T_1 = Id", cfg.exact_tol);
    for (const P& x : xs)
      id.observe(X.coincidence(fam.apply(1.0, x), x), [&] { return Json{{"x", point_json(x)}}; });
    rep.add(id.finish());
  }
  if (I.contains_zero()) {
    CheckAccumulator zero("zero_is_constant", "T_0 = const x0", cfg.exact_tol);
    for (const P& x : xs)
      zero.observe(X.coincidence(fam.apply(0.0, x), x0), [&] { return Json{{"x", point_json(x)}}; });
    rep.add(zero.finish());
  }

  // Limit at 1, witnessed on a geometric grid a_k -> 1.
  CheckAccumulator exists("limit_exists", "T_a x converges as a -> 1", cfg.abs_tol);
  CheckAccumulator ident("limit_is_identity", "lim_{a->1} T_a x = x", cfg.abs_tol);
  const std::vector<double> grid = I.approach(1.0, 12, 10.0);
  if (grid.size() < 2) {
    exists.set_note("1 is isolated in I; the limit is T_1");
    ident.set_note("1 is isolated in I; the limit is T_1");
    for (const P& x : xs) {
      exists.observe(0.0);
      ident.observe(X.coincidence(fam.apply(1.0, x), x), [&] { return Json{{"x", point_json(x)}}; });
    }
  } else {
    std::vector<double> sup_by_level(grid.size(), 0.0);
    for (const P& x : xs) {
      P prev = fam.apply(grid[0], x);
      sup_by_level[0] = std::max(sup_by_level[0], X.coincidence(prev, x));
      double last_step = 0.0;
      for (std::size_t k = 1; k < grid.size(); ++k) {
        P cur = fam.apply(grid[k], x);
        last_step = X.coincidence(prev, cur);
        sup_by_level[k] = std::max(sup_by_level[k], X.coincidence(cur, x));
        prev = std::move(cur);
      }
      exists.observe(last_step, [&] { return Json{{"x", point_json(x)}, {"alpha", grid.back()}}; });
      ident.observe(X.coincidence(prev, x), [&] { return Json{{"x", point_json(x)}, {"alpha", grid.back()}}; });
    }
    rep.data["limit_grid"] = grid;
    rep.data["limit_sup_by_level"] = sup_by_level;
  }

  rep.add(scale.finish());
  rep.add(center.finish());
  rep.add(comp.finish());
  rep.add(exists.finish());
  rep.add(ident.finish());
  rep.sort_by_name();
  return rep;
}

/// Radial additivity d(T_a x, T_c x) = d(T_a x, T_b x) + d(T_b x, T_c x) for a <= b <= c.
template <class P>
VerificationReport verify_linearity(const DilationFamily<P>& fam, const ToleranceConfig& cfg) {
  cfg.validate();
  const auto& X = fam.space;
  VerificationReport rep;
  rep.subject = fam.name;
  Rng rng = Rng::derive(cfg.seed, "linearity:" + fam.name + ":" + X.id);
  CheckAccumulator lin("linearity", "d(T_a x, T_c x) = d(T_a x, T_b x) + d(T_b x, T_c x)",
                       cfg.abs_tol);
  for (int i = 0; i < cfg.sample_pairs; ++i) {
    double t[3] = {fam.index.draw(rng), fam.index.draw(rng), fam.index.draw(rng)};
    std::sort(t, t + 3);
    const P x = X.sample(rng);
    const P pa = fam.apply(t[0], x), pb = fam.apply(t[1], x), pc = fam.apply(t[2], x);
    const double r = std::abs(X.distance(pa, pc) - X.distance(pa, pb) - X.distance(pb, pc));
    lin.observe(r, [&] {
      return Json{{"alpha", t[0]}, {"beta", t[1]}, {"gamma", t[2]}, {"x", point_json(x)}};
    });
  }
  rep.add(lin.finish());
  return rep;
}

/// Family over I u {0} with T_0 the constant map to x0.
template <class P>
DilationFamily<P> adjoin_zero(const DilationFamily<P>& fam) {
  if (fam.index.contains_zero()) return fam;
  if (!fam.index.meets_below_one())
    throw PreconditionError("cannot adjoin 0 to family '" + fam.name +
                            "': its index set has no member below 1");
  DilationFamily<P> out = fam;
  out.index = fam.index.with_zero();
  const P x0 = fam.space.center();
  auto inner = fam.map;
  out.map = [inner, x0](double a, const P& x) { return a == 0.0 ? x0 : inner(a, x); };
  return out;
}

/// T_a(x) for a in the closure of I, as the limit of T_b(x) over members
/// b -> a. Successive values must settle within abs_tol.
template <class P>
P extend_to_closure(const DilationFamily<P>& fam, double a, const P& x, const ToleranceConfig& cfg,
                    int max_levels = 60) {
  if (!fam.index.in_closure(a))
    throw DomainError("scale " + std::to_string(a) + " is outside the closure of the index set");
  if (fam.index.contains(a)) return fam.apply(a, x);
  const std::vector<double> seq = fam.index.approach(a, max_levels, 2.0);
  if (seq.empty())
    throw NonConvergenceError("no members of I approach " + std::to_string(a),
                              std::numeric_limits<double>::infinity());
  P prev = fam.apply(seq[0], x);
  double residual = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < seq.size(); ++k) {
    P cur = fam.apply(seq[k], x);
    residual = fam.space.coincidence(prev, cur);
    if (residual <= cfg.abs_tol) return cur;
    prev = std::move(cur);
  }
  throw NonConvergenceError("Cauchy criterion not met approaching scale " + std::to_string(a),
                            residual);
}

struct ModulusEstimate {
  std::vector<double> epsilon;
  std::vector<double> delta;  // delta[i] belongs to epsilon[i]
  double grid_step = 0.0;
  Json joint = Json::array();  // sampled sup d(T_a x, T_b y) per perturbation size
};

/// Empirical modulus of a -> T_a(x) on [a,b] cap I: for each eps the largest
/// grid gap g with d(T_s x, T_t x) <= eps whenever |s - t| <= g.
template <class P>
ModulusEstimate continuity_modulus(const DilationFamily<P>& fam, const P& x, double a, double b,
                                   const ToleranceConfig& cfg, std::vector<double> eps = {}) {
  cfg.validate();
  const std::vector<double> grid = fam.index.grid(a, b, static_cast<std::size_t>(cfg.grid_size));
  if (grid.empty())
    throw DomainError("[" + std::to_string(a) + ", " + std::to_string(b) +
                      "] does not meet the index set");
  if (eps.empty())
    for (int k = 0; k <= 10; ++k) eps.push_back(std::ldexp(1.0, -k));

  std::vector<P> img;
  img.reserve(grid.size());
  for (double s : grid) img.push_back(fam.apply(s, x));
  std::vector<std::pair<double, double>> pairs;  // (gap, distance)
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j)
      pairs.emplace_back(grid[j] - grid[i], fam.space.distance(img[i], img[j]));
  std::sort(pairs.begin(), pairs.end());

  ModulusEstimate est;
  est.grid_step = grid.size() > 1 ? grid[1] - grid[0] : 0.0;
  const double span = grid.back() - grid.front();
  for (double e : eps) {
    double delta = pairs.empty() ? span : 0.0;
    double running = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      running = std::max(running, pairs[k].second);
      if (running > e) break;
      // Only accept a gap once every pair with the same gap was seen.
      if (k + 1 == pairs.size() || pairs[k + 1].first != pairs[k].first) delta = pairs[k].first;
    }
    est.epsilon.push_back(e);
    est.delta.push_back(delta);
  }

  Rng rng = Rng::derive(cfg.seed, "joint_continuity:" + fam.name);
  for (double h : {1e-1, 1e-2, 1e-3, 1e-4}) {
    double sup = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double s = grid[rng.index(grid.size())];
      double t = std::clamp(s + h * rng.uniform(-1.0, 1.0), grid.front(), grid.back());
      if (!fam.index.contains(t)) t = s;
      const P y = fam.space.nearby ? fam.space.nearby(x, h, rng) : x;
      sup = std::max(sup, fam.space.distance(fam.apply(s, x), fam.apply(t, y)));
    }
    est.joint.push_back(Json{{"perturbation", h}, {"sup_distance", sup}});
  }
  return est;
}

}  // namespace dilatia
