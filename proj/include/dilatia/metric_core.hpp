#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dilatia/report.hpp"
#include "dilatia/space.hpp"
#include "dilatia/tolerance.hpp"

namespace dilatia {

template <class P>
double distance(const Space<P>& space, const P& p, const P& q) {
  return space.distance(p, q);
}

/// Checks symmetry, zero diagonal, nonnegativity and the triangle
/// inequality. Small finite universes (n^3 <= sample_pairs) are enumerated
/// exhaustively; otherwise `sample_pairs` random triples are drawn.
template <class P>
VerificationReport check_metric_axioms(const Space<P>& space, const ToleranceConfig& cfg) {
  cfg.validate();
  if (space.is_finite() && *space.universe_size == 0)
    throw DomainError("space '" + space.id + "' is empty");

  CheckAccumulator symmetry("symmetry", "d(p,q) = d(q,p)", cfg.abs_tol);
  CheckAccumulator diagonal("zero_diagonal", "d(p,p) = 0", cfg.abs_tol);
  CheckAccumulator nonneg("non_negativity", "d(p,q) >= 0", cfg.abs_tol);
  CheckAccumulator triangle("triangle", "d(x,z) <= d(x,y) + d(y,z)", cfg.abs_tol);

  auto visit = [&](const P& x, const P& y, const P& z) {
    const double dxy = space.distance(x, y);
    const double dyx = space.distance(y, x);
    const double dyz = space.distance(y, z);
    const double dxz = space.distance(x, z);
    const double dxx = space.distance(x, x);
    auto pair_witness = [&] { return Json{{"p", point_json(x)}, {"q", point_json(y)}}; };
    symmetry.observe(std::abs(dxy - dyx), pair_witness);
    diagonal.observe(std::abs(dxx), [&] { return Json{{"p", point_json(x)}}; });
    nonneg.observe(std::max(0.0, -dxy), pair_witness);
    const double v = dxz - dxy - dyz;
    triangle.observe(std::max(0.0, v), [&] {
      return Json{{"x", point_json(x)}, {"y", point_json(y)}, {"z", point_json(z)},
                  {"excess", v}};
    });
  };

  VerificationReport rep;
  rep.subject = space.id;
  const std::size_t budget = static_cast<std::size_t>(cfg.sample_pairs);
  if (space.is_finite() && *space.universe_size <= 1024 &&
      *space.universe_size * *space.universe_size * *space.universe_size <= budget) {
    const std::size_t n = *space.universe_size;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          visit(space.point_at(i), space.point_at(j), space.point_at(k));
    rep.data["exhaustive"] = true;
  } else {
    Rng rng = Rng::derive(cfg.seed, "metric_axioms:" + space.id);
    for (std::size_t s = 0; s < budget; ++s) {
      const P x = space.sample(rng);
      const P y = space.sample(rng);
      const P z = space.sample(rng);
      visit(x, y, z);
    }
    rep.data["exhaustive"] = false;
  }
  rep.add(nonneg.finish());
  rep.add(symmetry.finish());
  rep.add(triangle.finish());
  rep.add(diagonal.finish());
  return rep;
}

template <class P>
struct DiameterEstimate {
  double value = 0.0;
  /// False when `value` is only a sampled lower bound.
  bool exact = false;
  std::optional<std::pair<P, P>> witness;
};

/// Largest distance found by sampling: random pairs followed by a few
/// farthest-point sweeps from the best endpoint. Always a lower bound.
template <class P>
DiameterEstimate<P> sampled_diameter(const Space<P>& space, const ToleranceConfig& cfg) {
  Rng rng = Rng::derive(cfg.seed, "diameter:" + space.id);
  const std::size_t m = std::max<std::size_t>(2, std::min<std::size_t>(cfg.sample_pairs, 4096));
  std::vector<P> pts;
  pts.reserve(m);
  for (std::size_t i = 0; i < m; ++i) pts.push_back(space.sample(rng));

  DiameterEstimate<P> best;
  best.witness = std::make_pair(pts[0], pts[1]);
  best.value = space.distance(pts[0], pts[1]);
  std::size_t anchor = 0;
  for (int sweep = 0; sweep < 4; ++sweep) {
    std::size_t far = anchor;
    double far_d = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = space.distance(pts[anchor], pts[i]);
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    if (far_d > best.value) {
      best.value = far_d;
      best.witness = std::make_pair(pts[anchor], pts[far]);
    }
    anchor = far;
  }
  best.exact = false;
  return best;
}

/// Exact for finite universes and for constructions with a closed-form
/// diameter; a sampled lower bound (flagged `exact = false`) otherwise.
template <class P>
DiameterEstimate<P> diameter(const Space<P>& space, const ToleranceConfig& cfg) {
  if (space.is_finite()) {
    const std::size_t n = *space.universe_size;
    if (n == 0) throw DomainError("space '" + space.id + "' is empty");
    DiameterEstimate<P> est;
    est.exact = true;
    est.witness = std::make_pair(space.point_at(0), space.point_at(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = space.distance(space.point_at(i), space.point_at(j));
        if (d > est.value) {
          est.value = d;
          est.witness = std::make_pair(space.point_at(i), space.point_at(j));
        }
      }
    return est;
  }
  if (space.unbounded) throw DomainError("space '" + space.id + "' is unbounded and has no finite diameter");
  if (space.declared_diameter) {
    DiameterEstimate<P> est = sampled_diameter(space, cfg);
    est.value = *space.declared_diameter;
    est.exact = true;
    return est;
  }
  return sampled_diameter(space, cfg);
}

/// Returns the space with distances d' = (d / diam) * target. Writing the
/// factor this way makes the realized maximum of a finite space exactly
/// `target`.
template <class P>
Space<P> rescale_to_diameter(const Space<P>& space, double target,
                             const ToleranceConfig& cfg = {}) {
  if (!(target > 0.0)) throw DomainError("rescale target must be positive");
  const DiameterEstimate<P> diam = diameter(space, cfg);
  if (!(diam.value > 0.0))
    throw DomainError("space '" + space.id + "' has zero diameter and cannot be rescaled");
  Space<P> out = space;
  std::ostringstream id;
  id << space.id << "@diam=" << target;
  out.id = id.str();
  const double from = diam.value;
  auto raw = space.metric;
  out.metric = [raw, from, target](const P& p, const P& q) { return raw(p, q) / from * target; };
  if (space.nearby) {
    auto near = space.nearby;
    out.nearby = [near, from, target](const P& p, double r, Rng& rng) {
      return near(p, r / target * from, rng);
    };
  }
  if (diam.exact)
    out.declared_diameter = target;
  else
    out.declared_diameter.reset();
  return out;
}

}  // namespace dilatia
