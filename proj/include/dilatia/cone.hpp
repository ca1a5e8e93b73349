#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>

#include "dilatia/dilation_family.hpp"
#include "dilatia/error.hpp"
#include "dilatia/metric_core.hpp"
#include "dilatia/report.hpp"
#include "dilatia/space.hpp"
#include "dilatia/tolerance.hpp"

namespace dilatia {

/// Apex, or (radius in (0,1], base point). Radius 0 is always the apex.
template <class B>
struct ConePoint {
  bool apex = true;
  double radius = 0.0;
  B base{};

  static ConePoint make_apex() { return ConePoint{}; }

  static ConePoint at(double r, B c) {
    if (!(r >= 0.0) || r > 1.0)
      throw DomainError("cone radius " + std::to_string(r) + " outside [0,1]");
    if (r == 0.0) return make_apex();
    ConePoint p;
    p.apex = false;
    p.radius = r;
    p.base = std::move(c);
    return p;
  }

  bool is_apex() const { return apex; }

  friend bool operator==(const ConePoint& u, const ConePoint& v) {
    if (u.apex || v.apex) return u.apex == v.apex;
    return u.radius == v.radius && u.base == v.base;
  }
};

template <class B>
void to_json(Json& j, const ConePoint<B>& p) {
  if (p.apex)
    j = "apex";
  else
    j = Json{{"r", p.radius}, {"c", p.base}};
}

/// D(u,v) = |a-b| + min(a,b) d(c1,c2), D((a,c), apex) = a.
template <class B>
double cone_metric(const Space<B>& base, const ConePoint<B>& u, const ConePoint<B>& v) {
  if (u.apex && v.apex) return 0.0;
  if (u.apex) return v.radius;
  if (v.apex) return u.radius;
  return std::abs(u.radius - v.radius) + std::min(u.radius, v.radius) * base.metric(u.base, v.base);
}

template <class B>
struct ConeSpace {
  Space<B> base;
  std::string apex_label = "x0";
  Space<ConePoint<B>> view;
  bool guard_bypassed = false;
  double base_diameter = 0.0;
};

template <class B>
double cone_distance(const ConeSpace<B>& cone, const ConePoint<B>& u, const ConePoint<B>& v) {
  return cone.view.distance(u, v);
}

struct ConeOptions {
  /// Skip the diameter <= 2 guard. Only for demonstrating that the guard is needed.
  bool allow_unsafe_diameter = false;
};

/// Cone over `base` with the apex as basepoint. The base must have
/// diameter at most 2.
template <class B>
ConeSpace<B> build_cone(const Space<B>& base, const ToleranceConfig& cfg, ConeOptions opts = {}) {
  cfg.validate();
  const DiameterEstimate<B> diam = diameter(base, cfg);
  if (diam.value > 2.0 + cfg.exact_tol && !opts.allow_unsafe_diameter) {
    std::string pair;
    if (diam.witness)
      pair = " at pair (" + point_json(diam.witness->first).dump() + ", " +
             point_json(diam.witness->second).dump() + ")";
    throw PreconditionError("base '" + base.id + "' has diameter " + std::to_string(diam.value) +
                            " > 2" + pair + "; rescale it first");
  }

  ConeSpace<B> cone;
  cone.base = base;
  cone.base_diameter = diam.value;
  cone.guard_bypassed = diam.value > 2.0 + cfg.exact_tol;
  using CP = ConePoint<B>;
  auto shared = std::make_shared<const Space<B>>(base);
  Space<CP>& v = cone.view;
  v.id = "cone:" + base.id;
  v.metric = [shared](const CP& u, const CP& w) { return cone_metric(*shared, u, w); };
  v.contains = [shared](const CP& u) {
    if (u.apex) return true;
    return u.radius > 0.0 && u.radius <= 1.0 && shared->contains(u.base);
  };
  v.sampler = [shared](Rng& rng) {
    const double t = rng.uniform();
    if (t < 1.0 / 16.0) return CP::make_apex();
    const B c = shared->sample(rng);
    if (t < 2.0 / 16.0) return CP::at(1.0, c);
    return CP::at(1.0 - rng.uniform(), c);
  };
  v.basepoint = CP::make_apex();
  if (diam.exact) v.declared_diameter = std::max(1.0, diam.value);
  if (base.nearby) {
    v.nearby = [shared](const CP& p, double r, Rng& rng) {
      if (p.apex) {
        const double rad = std::min(1.0, r) * rng.uniform();
        return CP::at(rad, shared->sample(rng));
      }
      // |a-b| < r/2 and d(c,c') < r/(2a) keep D below r.
      double b = p.radius + rng.uniform(-0.5, 0.5) * r;
      b = std::clamp(b, 0.0, 1.0);
      const B c = shared->nearby(p.base, r / (2.0 * p.radius), rng);
      return CP::at(b, c);
    };
  }
  return cone;
}

/// F(a)(r,c) = (ar, c) over I = [0,1], F(0) = apex.
template <class B>
DilationFamily<ConePoint<B>> canonical_family(const ConeSpace<B>& cone) {
  using CP = ConePoint<B>;
  DilationFamily<CP> fam;
  fam.name = "cone_canonical";
  fam.space = cone.view;
  fam.index = IndexSet::interval_01();
  fam.exact = true;
  fam.map = [](double a, const CP& u) {
    if (a == 0.0 || u.apex) return CP::make_apex();
    return CP::at(a * u.radius, u.base);
  };
  return fam;
}

/// D((1,c), apex) = 1 and D((r,c), apex) = r < 1 on sampled base points.
template <class B>
VerificationReport unit_sphere_check(const ConeSpace<B>& cone, const ToleranceConfig& cfg) {
  cfg.validate();
  using CP = ConePoint<B>;
  VerificationReport rep;
  rep.subject = cone.view.id;
  Rng rng = Rng::derive(cfg.seed, "unit_sphere:" + cone.view.id);
  const CP apex = CP::make_apex();
  CheckAccumulator unit("unit_level_set", "D((1,c), x0) = 1", cfg.exact_tol);
  CheckAccumulator inner("interior_level_set", "D((r,c), x0) = r < 1", cfg.exact_tol);
  for (int i = 0; i < cfg.sample_pairs; ++i) {
    const B c = cone.base.sample(rng);
    const double du = cone_distance(cone, CP::at(1.0, c), apex);
    unit.observe(std::abs(du - 1.0), [&] { return Json{{"c", point_json(c)}, {"D", du}}; });
    const double r = 1.0 - rng.uniform();
    if (r < 1.0) {
      const double dr = cone_distance(cone, CP::at(r, c), apex);
      const double v = std::abs(dr - r) + (dr < 1.0 ? 0.0 : 1.0);
      inner.observe(v, [&] { return Json{{"r", r}, {"c", point_json(c)}, {"D", dr}}; });
    }
  }
  CheckAccumulator apex_check("apex_distance", "D(x0, x0) = 0", cfg.exact_tol);
  apex_check.observe(cone_distance(cone, apex, apex));
  rep.add(apex_check.finish());
  rep.add(inner.finish());
  rep.add(unit.finish());
  return rep;
}

/// Ball inclusions linking D to the product topology at (a,c), for eps < a/2:
///   B_D((a,c); a eps/2) lies in {|b-a| < eps, d(c,c') < eps}
///   B(a; eps/2) x B_d(c; eps/(2a)) lies in B_D((a,c); eps)
template <class B>
VerificationReport verify_cone_topology(const ConeSpace<B>& cone, const ToleranceConfig& cfg) {
  cfg.validate();
  using CP = ConePoint<B>;
  if (!cone.base.nearby) throw PreconditionError("base space has no neighbourhood sampler");
  VerificationReport rep;
  rep.subject = cone.view.id;
  Rng rng = Rng::derive(cfg.seed, "cone_topology:" + cone.view.id);
  CheckAccumulator fine("ball_inclusion_fine", "D(u,v) < a eps/2 => |b-a| < eps, d(c,c') < eps",
                        cfg.exact_tol);
  CheckAccumulator coarse("ball_inclusion_coarse",
                          "|b-a| < eps/2, d(c,c') < eps/(2a) => D(u,v) < eps", cfg.exact_tol);
  int produced = 0;
  for (int i = 0; i < cfg.sample_pairs; ++i) {
    const CP u = CP::at(1.0 - rng.uniform(), cone.base.sample(rng));
    const double a = u.radius;
    const double eps = 0.5 * a * (1.0 - rng.uniform());

    // Candidate v from the product neighbourhood; feeds both inclusions.
    const double b = std::clamp(a + rng.uniform(-0.5, 0.5) * eps, 0.0, 1.0);
    const B c2 = cone.base.nearby(u.base, eps / (2.0 * a), rng);
    const CP v = CP::at(b, c2);
    const double D = cone_distance(cone, u, v);
    coarse.observe(std::max(0.0, D - eps), [&] {
      return Json{{"u", u}, {"v", v}, {"eps", eps}, {"D", D}};
    });

    // Fine inclusion: |b-a| < a eps/4 and d(c,c') < eps/4 put w inside B_D(u; a eps/2).
    const CP w = CP::at(std::clamp(a + rng.uniform(-0.25, 0.25) * a * eps, 0.0, 1.0),
                        cone.base.nearby(u.base, eps / 4.0, rng));
    const double Dw = cone_distance(cone, u, w);
    if (Dw < a * eps / 2.0) {
      ++produced;
      double viol = 1.0;
      if (!w.apex) {
        const double dr = std::abs(w.radius - a);
        const double dc = cone.base.metric(u.base, w.base);
        viol = std::max(0.0, dr - eps) + std::max(0.0, dc - eps);
      }
      fine.observe(viol, [&] { return Json{{"u", u}, {"v", w}, {"eps", eps}, {"D", Dw}}; });
    }
  }
  rep.data["fine_samples"] = produced;
  rep.add(coarse.finish());
  rep.add(fine.finish());
  return rep;
}

}  // namespace dilatia
