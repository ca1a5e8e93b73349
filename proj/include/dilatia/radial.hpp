#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dilatia/cone.hpp"
#include "dilatia/error.hpp"
#include "dilatia/metric_core.hpp"
#include "dilatia/report.hpp"
#include "dilatia/space.hpp"
#include "dilatia/tolerance.hpp"

namespace dilatia {

enum class RadialVariant { compact, locally_compact };

inline std::string to_string(RadialVariant v) {
  return v == RadialVariant::compact ? "compact" : "locally_compact";
}

/// Monoid action ([0,inf), x) -> X contracting toward the basepoint.
/// `reach` is sup d(x, x0) over the universe for the compact variant and the
/// distance from x0 to the window edge for the locally compact one.
template <class P>
struct RadialAction {
  std::string name;
  Space<P> space;
  std::function<P(double, const P&)> act;
  bool declared_shrinking = true;
  RadialVariant variant = RadialVariant::compact;
  double reach = 1.0;

  P apply(double a, const P& x) const {
    P y = act(a, x);
    if (!space.contains(y))
      throw DomainError("action '" + name + "' maps (alpha=" + std::to_string(a) + ", x=" +
                        point_json(x).dump() + ") outside space '" + space.id + "'");
    return y;
  }
};

/// The whole compact space, or a 10% margin inside the window otherwise.
template <class P>
double default_epsilon(const RadialAction<P>& action) {
  return action.variant == RadialVariant::compact ? action.reach : 0.9 * action.reach;
}

template <class P>
VerificationReport verify_action(const RadialAction<P>& action, const ToleranceConfig& cfg) {
  cfg.validate();
  const auto& X = action.space;
  const P& x0 = X.center();
  VerificationReport rep;
  rep.subject = action.name;
  Rng rng = Rng::derive(cfg.seed, "radial_action:" + action.name);
  CheckAccumulator zero("zero_collapses", "F(0) x = x0", cfg.exact_tol);
  CheckAccumulator one("identity_at_one", "F(1) x = x", cfg.exact_tol);
  CheckAccumulator comp("composition", "F(a) F(b) x = F(ab) x", cfg.abs_tol);
  CheckAccumulator shrink("shrinking", "d(F(a)x, x0) < d(x, x0) for a < 1, x != x0", 0.0);
  shrink.set_note("indicator: 1 when the strict inequality fails");
  for (int i = 0; i < cfg.sample_pairs; ++i) {
    const P x = X.sample(rng);
    auto wx = [&] { return Json{{"x", point_json(x)}}; };
    zero.observe(X.distance(action.apply(0.0, x), x0), wx);
    one.observe(X.distance(action.apply(1.0, x), x), wx);
    const double a = rng.uniform(), b = rng.uniform();
    const double v = X.distance(action.apply(a, action.apply(b, x)), action.apply(a * b, x));
    comp.observe(v, [&] { return Json{{"alpha", a}, {"beta", b}, {"x", point_json(x)}}; });
    if (action.declared_shrinking) {
      const double dx = X.distance(x, x0);
      if (dx > 0.0) {
        const double s = 0.999 * rng.uniform();
        const double ds = X.distance(action.apply(s, x), x0);
        shrink.observe(ds < dx ? 0.0 : 1.0, [&] {
          return Json{{"alpha", s}, {"x", point_json(x)}, {"d_x", dx}, {"d_image", ds}};
        });
      }
    }
  }
  rep.add(comp.finish());
  rep.add(one.finish());
  if (action.declared_shrinking) rep.add(shrink.finish());
  rep.add(zero.finish());
  return rep;
}

/// Crossing scale of x: the G with d(F(1/G) x, x0) = eps, so that x lies at
/// level G of the cone over the eps-sphere. Bisection runs on G with a
/// tolerance one decade below abs_tol (relative below G = 1); images that
/// leave the window count as beyond the sphere.
template <class P>
double gamma(const RadialAction<P>& action, const P& x, double eps, const ToleranceConfig& cfg,
             int max_iter = 80) {
  if (!(eps > 0.0)) throw DomainError("epsilon must be positive");
  const auto& X = action.space;
  const P& x0 = X.center();
  const double d1 = X.distance(x, x0);
  if (d1 == 0.0) return 0.0;
  if (d1 == eps) return 1.0;
  const double inf = std::numeric_limits<double>::infinity();
  auto rho_at = [&](double g) {
    const P y = action.act(1.0 / g, x);
    return X.contains(y) ? X.metric(y, x0) : inf;
  };

  // Invariant: rho(1/lo) >= eps > rho(1/hi).
  double lo = 1.0, hi = 1.0;
  if (d1 < eps) {
    for (int k = 0; rho_at(lo) < eps; ++k) {
      if (k > 1100) throw DecompositionError("orbit of " + point_json(x).dump() + " never reaches the eps-sphere");
      hi = lo;
      lo *= 0.5;
    }
  } else {
    for (int k = 0; rho_at(hi) >= eps; ++k) {
      if (k > 1100) throw DecompositionError("orbit of " + point_json(x).dump() + " does not return inside the eps-sphere");
      lo = hi;
      hi *= 2.0;
    }
  }
  const double tol = 0.1 * cfg.abs_tol;
  for (int it = 0; it < max_iter && hi - lo > tol * std::min(1.0, lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    (rho_at(mid) >= eps ? lo : hi) = mid;
  }
  const double r = rho_at(hi);
  if (!(std::abs(r - eps) <= 10.0 * cfg.abs_tol * std::max(1.0, eps)))
    throw DecompositionError("rho does not bracket eps along the orbit of " + point_json(x).dump() +
                             " (rho = " + std::to_string(r) + ")");
  return hi;
}

template <class P>
struct ConeCoordinates {
  double alpha = 0.0;
  std::optional<P> base;  // empty at x0, where the base point is arbitrary
  bool base_arbitrary = false;
  double residual = 0.0;
};

template <class P>
ConeCoordinates<P> cone_coordinates(const RadialAction<P>& action, const P& x, double eps,
                                    const ToleranceConfig& cfg) {
  ConeCoordinates<P> cc;
  const double g = gamma(action, x, eps, cfg);
  if (g == 0.0) {
    cc.base_arbitrary = true;
    return cc;
  }
  cc.alpha = g;
  cc.base = action.apply(1.0 / g, x);
  cc.residual = action.space.distance(action.apply(g, *cc.base), x);
  if (cc.residual > 10.0 * cfg.abs_tol)
    throw DecompositionError("no cone coordinates for " + point_json(x).dump() +
                             " (best residual " + std::to_string(cc.residual) + ")");
  return cc;
}

/// Sample of the eps-sphere obtained by pushing sampled points along their
/// orbits to the crossing scale.
template <class P>
std::vector<P> boundary_set(const RadialAction<P>& action, double eps, const ToleranceConfig& cfg,
                            std::size_t count = 256) {
  const auto& X = action.space;
  const P& x0 = X.center();
  Rng rng = Rng::derive(cfg.seed, "boundary_set:" + action.name);
  std::vector<P> out;
  for (std::size_t attempt = 0; attempt < 8 * count && out.size() < count; ++attempt) {
    const P x = X.sample(rng);
    if (X.distance(x, x0) == 0.0) continue;
    const P c = action.apply(1.0 / gamma(action, x, eps, cfg), x);
    if (std::abs(X.distance(c, x0) - eps) <= cfg.abs_tol * std::max(1.0, eps)) out.push_back(c);
  }
  if (out.empty())
    throw DecompositionError("no point of '" + X.id + "' other than x0 reaches the eps-sphere");
  return out;
}

namespace detail {

template <class P>
std::vector<P> ball_sample(const RadialAction<P>& action, double eps, std::size_t n, Rng& rng) {
  const auto& X = action.space;
  std::vector<P> out;
  for (std::size_t attempt = 0; attempt < 50 * n && out.size() < n; ++attempt) {
    P x = X.sample(rng);
    if (action.variant == RadialVariant::locally_compact || X.distance(x, X.center()) <= eps)
      out.push_back(std::move(x));
  }
  if (out.empty()) throw DecompositionError("closed eps-ball sample is empty");
  return out;
}

/// Pulled-back cone distance eps |a-b| + min(a,b) d(c1,c2); x0 has a = 0.
template <class P>
double pulled_back(const Space<P>& X, double eps, const ConeCoordinates<P>& u,
                   const ConeCoordinates<P>& v) {
  if (!u.base || !v.base) return eps * std::abs(u.alpha - v.alpha);
  return eps * std::abs(u.alpha - v.alpha) + std::min(u.alpha, v.alpha) * X.metric(*u.base, *v.base);
}

}  // namespace detail

/// Cover, disjointness and radial separation of {F(a)(C)} with C the eps-sphere.
template <class P>
VerificationReport verify_partition(const RadialAction<P>& action, const ToleranceConfig& cfg,
                                    std::optional<double> eps_opt = std::nullopt) {
  cfg.validate();
  const double eps = eps_opt.value_or(default_epsilon(action));
  const auto& X = action.space;
  const P& x0 = X.center();
  VerificationReport rep;
  rep.subject = action.name;
  rep.data["epsilon"] = eps;
  Rng rng = Rng::derive(cfg.seed, "partition:" + action.name);

  CheckAccumulator cover("cover", "x = F(G(x)) c(x)", 10.0 * cfg.abs_tol);
  for (int i = 0; i < cfg.sample_pairs; ++i) {
    const P x = X.sample(rng);
    double r = std::numeric_limits<double>::infinity();
    try {
      r = cone_coordinates(action, x, eps, cfg).residual;
    } catch (const DecompositionError&) {
    }
    cover.observe(r, [&] { return Json{{"x", point_json(x)}}; });
  }

  const std::vector<P> C = boundary_set(action, eps, cfg, 128);
  double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
  for (const P& c : C) {
    cmin = std::min(cmin, X.distance(c, x0));
    cmax = std::max(cmax, X.distance(c, x0));
  }
  rep.data["base_min_distance"] = cmin;
  rep.data["base_max_distance"] = cmax;
  rep.data["base_sample_size"] = C.size();

  CheckAccumulator disjoint("disjointness", "(a,c1) != (b,c2) => F(a)c1 != F(b)c2", 0.0);
  disjoint.set_note("indicator: 1 when distinct cone points share an image");
  CheckAccumulator radial("radial_separation", "d(F(a)c, F(b)c) >= |a-b| eps", cfg.abs_tol);
  double min_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cfg.sample_pairs; ++i) {
    const double a = rng.uniform();
    const double b = rng.bernoulli(0.25) ? a : rng.uniform();
    const P& c1 = C[rng.index(C.size())];
    const P& c2 = rng.bernoulli(0.25) ? c1 : C[rng.index(C.size())];
    const P i1 = action.apply(a, c1), i2 = action.apply(b, c2);
    const double dimg = X.distance(i1, i2);
    const double dcone = eps * std::abs(a - b) + std::min(a, b) * X.distance(c1, c2);
    if (dcone > 1e-9) {
      min_ratio = std::min(min_ratio, dimg / dcone);
      disjoint.observe(dimg > cfg.abs_tol ? 0.0 : 1.0, [&] {
        return Json{{"alpha", a}, {"beta", b}, {"c1", point_json(c1)}, {"c2", point_json(c2)}};
      });
    }
    if (a > 0.0 && b > 0.0) {
      const double ds = X.distance(action.apply(a, c1), action.apply(b, c1));
      radial.observe(std::max(0.0, std::abs(a - b) * eps - ds),
                     [&] { return Json{{"alpha", a}, {"beta", b}, {"c", point_json(c1)}}; });
    }
  }
  rep.data["min_separation_ratio"] = min_ratio;
  rep.add(cover.finish());
  rep.add(disjoint.finish());
  rep.add(radial.finish());
  return rep;
}

/// Round trip x -> (G(x), c(x)) -> F(G) c on the closed eps-ball (compact)
/// or the window (locally compact); injectivity by separation of samples.
template <class P>
VerificationReport verify_cone_homeomorphism(const RadialAction<P>& action, double eps,
                                             const ToleranceConfig& cfg) {
  cfg.validate();
  if (!action.declared_shrinking)
    throw PreconditionError("action '" + action.name + "' is not declared shrinking");
  const VerificationReport pre = verify_action(action, cfg);
  const CheckRecord* shrink = pre.find("shrinking");
  if (!shrink || !shrink->pass)
    throw PreconditionError("action '" + action.name + "' fails the shrinking property, witness " +
                            (shrink ? shrink->witness.dump() : std::string("{}")));

  const auto& X = action.space;
  VerificationReport rep;
  rep.subject = action.name;
  rep.data["epsilon"] = eps;
  rep.data["variant"] = to_string(action.variant);
  Rng rng = Rng::derive(cfg.seed, "cone_homeomorphism:" + action.name);
  const auto xs = detail::ball_sample(action, eps, static_cast<std::size_t>(cfg.sample_pairs), rng);

  std::vector<ConeCoordinates<P>> cc;
  cc.reserve(xs.size());
  CheckAccumulator trip("round_trip", "F(G(x)) c(x) = x", cfg.abs_tol);
  CheckAccumulator equi("gamma_equivariance", "G(F(b) x) = b G(x)", cfg.abs_tol);
  for (const P& x : xs) {
    cc.push_back(cone_coordinates(action, x, eps, cfg));
    trip.observe(cc.back().residual, [&] { return Json{{"x", point_json(x)}}; });
    const double b = rng.uniform();
    const double gb = gamma(action, action.apply(b, x), eps, cfg);
    equi.observe(std::abs(gb - b * cc.back().alpha),
                 [&] { return Json{{"x", point_json(x)}, {"beta", b}}; });
  }

  CheckAccumulator inj("injectivity", "x != y => (G(x), c(x)) != (G(y), c(y))", 0.0);
  inj.set_note("indicator: 1 when distinct samples share cone coordinates");
  double min_sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double d = X.distance(xs[i], xs[i + 1]);
    if (d <= 10.0 * cfg.abs_tol) continue;
    const double dc = detail::pulled_back(X, eps, cc[i], cc[i + 1]);
    min_sep = std::min(min_sep, dc);
    inj.observe(dc > 0.0 ? 0.0 : 1.0,
                [&] { return Json{{"x", point_json(xs[i])}, {"y", point_json(xs[i + 1])}}; });
  }
  rep.data["max_round_trip_residual"] = trip.finish().max_violation;
  rep.data["min_separation"] = min_sep;
  rep.add(equi.finish());
  rep.add(inj.finish());
  rep.add(trip.finish());
  return rep;
}

/// Pulls back the cone metric D over the eps-sphere (distances scaled by
/// 1/eps, so the base diameter is at most 2) and checks that F(a) is an
/// exact dilation of the eps-ball into itself under D.
template <class P>
VerificationReport verify_metric_cone(const RadialAction<P>& action, double eps,
                                      const ToleranceConfig& cfg) {
  cfg.validate();
  const auto& X = action.space;
  const P& x0 = X.center();
  auto sphere = std::make_shared<const std::vector<P>>(boundary_set(action, eps, cfg, 256));

  Space<P> base;
  base.id = X.id + "@sphere(" + std::to_string(eps) + ")";
  auto raw = X.metric;
  base.metric = [raw, eps](const P& p, const P& q) { return raw(p, q) / eps; };
  base.contains = X.contains;
  base.sampler = [sphere](Rng& rng) { return (*sphere)[rng.index(sphere->size())]; };
  const ConeSpace<P> cone = build_cone(base, cfg);
  using CP = ConePoint<P>;

  auto coords = [&](const P& x) {
    const auto c = cone_coordinates(action, x, eps, cfg);
    return c.base ? CP::at(std::min(1.0, c.alpha), *c.base) : CP::make_apex();
  };
  auto D = [&](const CP& u, const CP& v) { return eps * cone_metric(cone.base, u, v); };

  VerificationReport rep;
  rep.subject = action.name;
  rep.data["epsilon"] = eps;
  rep.data["base_diameter"] = cone.base_diameter;
  Rng rng = Rng::derive(cfg.seed, "metric_cone:" + action.name);
  RadialAction<P> ball_action = action;
  ball_action.variant = RadialVariant::compact;
  const auto xs = detail::ball_sample(ball_action, eps, static_cast<std::size_t>(cfg.sample_pairs), rng);

  CheckAccumulator into("into_ball", "d(F(a)x, x0) <= eps", cfg.abs_tol);
  CheckAccumulator scale("dilation_scale", "D(F(a)x, F(a)y) = a D(x,y)", cfg.abs_tol);
  CheckAccumulator tri("triangle", "D(x,z) <= D(x,y) + D(y,z)", cfg.abs_tol);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const P& x = xs[i];
    const P& y = xs[(i + 1) % xs.size()];
    const P& z = xs[(i + 2) % xs.size()];
    const CP ux = coords(x), uy = coords(y), uz = coords(z);
    const double a = 1.0 - rng.uniform();
    const P xa = action.apply(a, x), ya = action.apply(a, y);
    into.observe(std::max(0.0, X.distance(xa, x0) - eps),
                 [&] { return Json{{"alpha", a}, {"x", point_json(x)}}; });
    const double dxy = D(ux, uy);
    const double v = std::abs(D(coords(xa), coords(ya)) - a * dxy);
    scale.observe(v, [&] { return Json{{"alpha", a}, {"x", point_json(x)}, {"y", point_json(y)}}; });
    tri.observe(std::max(0.0, D(ux, uz) - dxy - D(uy, uz)), [&] {
      return Json{{"x", point_json(x)}, {"y", point_json(y)}, {"z", point_json(z)}};
    });
  }
  rep.add(scale.finish());
  rep.add(into.finish());
  rep.add(tri.finish());
  return rep;
}

}  // namespace dilatia
