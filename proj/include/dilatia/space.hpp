#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dilatia/error.hpp"
#include "dilatia/random.hpp"

namespace dilatia {

using Vec = std::vector<double>;
using Index = std::size_t;

template <class P>
nlohmann::json point_json(const P& p) {
  return nlohmann::json(p);
}

/// A pointed metric space given by oracles.
///
/// `metric` is the raw distance formula and assumes both arguments are in the
/// universe; `distance` is the checked entry point. Finite universes are
/// enumerable through `point_at(0 .. universe_size-1)`. All oracles are pure
/// and the value is immutable once built, so a Space can be shared freely.
template <class P>
struct Space {
  using Point = P;

  std::string id;
  std::function<double(const P&, const P&)> metric;
  std::function<bool(const P&)> contains;
  std::function<P(Rng&)> sampler;
  std::optional<P> basepoint;

  std::optional<std::size_t> universe_size;
  std::function<P(std::size_t)> point_at;

  /// Closed-form diameter, when the construction knows it.
  std::optional<double> declared_diameter;
  // The sampler covers a window only; the space itself has infinite diameter.
  bool unbounded = false;
  /// Random point within distance `r` of `p`, when the universe allows it.
  std::function<P(const P&, double, Rng&)> nearby;
  /// Well-conditioned stand-in for d(p,q) when only p = q is being tested.
  /// Needed where d is not Lipschitz in coordinates near the diagonal.
  std::function<double(const P&, const P&)> discrepancy;

  /// How far p and q are from coinciding; d(p,q) unless `discrepancy` is set.
  double coincidence(const P& p, const P& q) const {
    return discrepancy ? discrepancy(p, q) : distance(p, q);
  }

  bool is_finite() const { return universe_size.has_value(); }

  double distance(const P& p, const P& q) const {
    if (!contains(p))
      throw DomainError("point " + point_json(p).dump() +
                        " is outside the universe of space '" + id + "'");
    if (!contains(q))
      throw DomainError("point " + point_json(q).dump() +
                        " is outside the universe of space '" + id + "'");
    return metric(p, q);
  }

  P sample(Rng& rng) const {
    if (is_finite() && *universe_size == 0)
      throw DomainError("space '" + id + "' is empty");
    return sampler(rng);
  }

  const P& center() const {
    if (!basepoint) throw PreconditionError("space '" + id + "' has no basepoint");
    return *basepoint;
  }
};

// ---------------------------------------------------------------------------
// Analytic spaces: real coordinate vectors with a catalog metric.

enum class MetricKind { euclidean, truncated, sup, circle_arc, koranyi };

inline std::string to_string(MetricKind k) {
  switch (k) {
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::truncated: return "truncated";
    case MetricKind::sup: return "sup";
    case MetricKind::circle_arc: return "circle_arc";
    case MetricKind::koranyi: return "koranyi";
  }
  return "?";
}

inline MetricKind metric_kind_from_string(const std::string& s) {
  if (s == "euclidean") return MetricKind::euclidean;
  if (s == "truncated") return MetricKind::truncated;
  if (s == "sup") return MetricKind::sup;
  if (s == "circle_arc") return MetricKind::circle_arc;
  if (s == "koranyi") return MetricKind::koranyi;
  throw SpecError("unknown catalog metric '" + s + "'");
}

namespace heisenberg {

/// (x,y,z)*(x',y',z') = (x+x', y+y', z+z' + (xy' - yx')/2)
inline Vec multiply(const Vec& p, const Vec& q) {
  return {p[0] + q[0], p[1] + q[1],
          p[2] + q[2] + 0.5 * (p[0] * q[1] - p[1] * q[0])};
}

inline Vec inverse(const Vec& p) { return {-p[0], -p[1], -p[2]}; }

/// Koranyi gauge ((x^2+y^2)^2 + 16 z^2)^(1/4).
inline double gauge(const Vec& p) {
  const double h = p[0] * p[0] + p[1] * p[1];
  return std::sqrt(std::sqrt(h * h + 16.0 * p[2] * p[2]));
}

}  // namespace heisenberg

/// Parameters of a catalog metric.
struct MetricParams {
  MetricKind kind = MetricKind::euclidean;
  double kappa = 1.0;   // truncation level for `truncated`
  double radius = 1.0;  // circle radius for `circle_arc`
};

inline double euclidean_distance(const Vec& p, const Vec& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - q[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double euclidean_norm(const Vec& p) {
  double s = 0.0;
  for (double v : p) s += v * v;
  return std::sqrt(s);
}

inline double sup_distance(const Vec& p, const Vec& q) {
  double m = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) m = std::max(m, std::abs(p[i] - q[i]));
  return m;
}

inline double catalog_distance(const MetricParams& m, const Vec& p, const Vec& q) {
  switch (m.kind) {
    case MetricKind::euclidean: return euclidean_distance(p, q);
    case MetricKind::truncated: return std::min(euclidean_distance(p, q), m.kappa);
    case MetricKind::sup: return sup_distance(p, q);
    case MetricKind::circle_arc: {
      constexpr double two_pi = 2.0 * std::numbers::pi;
      double delta = std::fmod(std::abs(p[0] - q[0]), two_pi);
      return m.radius * std::min(delta, two_pi - delta);
    }
    case MetricKind::koranyi:
      return heisenberg::gauge(heisenberg::multiply(heisenberg::inverse(p), q));
  }
  return 0.0;
}

/// Sampling window of an analytic space. When `bounds_universe` is false the
/// window only shapes the sampler and the universe is all of R^dim.
struct Window {
  enum class Shape { ball, box };
  Shape shape = Shape::ball;
  Vec center;  // ball
  double radius = 1.0;
  Vec lo, hi;  // box
  bool bounds_universe = true;

  static Window ball(std::size_t dim, double r, bool bounds = true) {
    Window w;
    w.shape = Shape::ball;
    w.center = Vec(dim, 0.0);
    w.radius = r;
    w.bounds_universe = bounds;
    return w;
  }

  static Window box(Vec lo, Vec hi, bool bounds = true) {
    Window w;
    w.shape = Shape::box;
    w.lo = std::move(lo);
    w.hi = std::move(hi);
    w.bounds_universe = bounds;
    return w;
  }

  std::size_t dim() const { return shape == Shape::ball ? center.size() : lo.size(); }

  /// Membership with a few ulps of slack so that exact boundary images
  /// (e.g. rescaled to the sphere) are not rejected.
  bool inside(const Vec& p) const {
    if (p.size() != dim()) return false;
    for (double v : p)
      if (!std::isfinite(v)) return false;
    if (!bounds_universe) return true;
    if (shape == Shape::ball) {
      Vec d(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) d[i] = p[i] - center[i];
      return euclidean_norm(d) <= radius * (1.0 + 1e-12);
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double slack = 1e-12 * std::max(1.0, hi[i] - lo[i]);
      if (p[i] < lo[i] - slack || p[i] > hi[i] + slack) return false;
    }
    return true;
  }

  /// Uniform interior sampling; one draw in eight lands on the boundary so
  /// that boundary behaviour (diameters, fixed rings) is exercised.
  Vec sample(Rng& rng) const {
    const bool on_boundary = rng.bernoulli(0.125);
    if (shape == Shape::ball) {
      const std::size_t n = center.size();
      Vec dir(n);
      double norm = 0.0;
      while (norm < 1e-12) {
        for (auto& v : dir) v = rng.normal();
        norm = euclidean_norm(dir);
      }
      const double r =
          on_boundary ? radius : radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
      Vec p(n);
      for (std::size_t i = 0; i < n; ++i) p[i] = center[i] + r * dir[i] / norm;
      return p;
    }
    Vec p(lo.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = rng.uniform(lo[i], hi[i]);
    if (on_boundary) {
      const std::size_t k = rng.index(p.size());
      p[k] = rng.bernoulli(0.5) ? hi[k] : lo[k];
    }
    return p;
  }
};

/// Builds an analytic space from a catalog metric and a window.
inline Space<Vec> analytic_space(std::string id, MetricParams metric, Window window,
                                 std::optional<Vec> basepoint = std::nullopt) {
  if (metric.kind == MetricKind::koranyi && window.dim() != 3)
    throw SpecError("koranyi metric needs dim 3");
  if (metric.kind == MetricKind::circle_arc && window.dim() != 1)
    throw SpecError("circle_arc points are single angles (dim 1)");
  if (metric.kind == MetricKind::truncated && !(metric.kappa > 0.0))
    throw SpecError("truncation level must be positive");
  if (window.shape == Window::Shape::ball && !(window.radius > 0.0))
    throw SpecError("window radius must be positive");
  if (window.shape == Window::Shape::box)
    for (std::size_t i = 0; i < window.lo.size(); ++i)
      if (!(window.hi.at(i) > window.lo[i])) throw SpecError("degenerate window box");

  Space<Vec> s;
  s.id = std::move(id);
  s.metric = [metric](const Vec& p, const Vec& q) { return catalog_distance(metric, p, q); };
  if (metric.kind == MetricKind::circle_arc) {
    s.contains = [](const Vec& p) { return p.size() == 1 && std::isfinite(p[0]); };
    s.sampler = [](Rng& rng) { return Vec{rng.uniform(0.0, 2.0 * std::numbers::pi)}; };
    s.declared_diameter = std::numbers::pi * metric.radius;
    s.nearby = [metric](const Vec& p, double r, Rng& rng) {
      return Vec{p[0] + rng.uniform(-1.0, 1.0) * r / metric.radius};
    };
  } else {
    s.contains = [window](const Vec& p) { return window.inside(p); };
    s.sampler = [window](Rng& rng) { return window.sample(rng); };
    s.nearby = [window, metric](const Vec& p, double r, Rng& rng) {
      // Perturbations are drawn in the sup box of radius r/sqrt(n), which
      // sits inside every catalog ball of radius r except the Koranyi one.
      const double n = static_cast<double>(p.size());
      for (int attempt = 0; attempt < 64; ++attempt) {
        Vec q = p;
        const double h = metric.kind == MetricKind::koranyi ? 0.0 : r / std::sqrt(n);
        for (double& v : q) v += rng.uniform(-1.0, 1.0) * h;
        if (metric.kind == MetricKind::koranyi) {
          // Left-translate a small element: d(p, p*g) = N(g).
          Vec g{rng.uniform(-1.0, 1.0) * r / 2.0, rng.uniform(-1.0, 1.0) * r / 2.0,
                rng.uniform(-1.0, 1.0) * r * r / 8.0};
          q = heisenberg::multiply(p, g);
        }
        if (window.inside(q)) return q;
      }
      return p;
    };
    if (window.bounds_universe) {
      double diam = 0.0;
      if (window.shape == Window::Shape::ball) {
        // Attained on a coordinate axis for both the Euclidean and sup metric.
        diam = 2.0 * window.radius;
      } else {
        Vec side(window.lo.size());
        for (std::size_t i = 0; i < side.size(); ++i) side[i] = window.hi[i] - window.lo[i];
        diam = metric.kind == MetricKind::sup
                   ? *std::max_element(side.begin(), side.end())
                   : euclidean_norm(side);
      }
      if (metric.kind == MetricKind::truncated) diam = std::min(diam, metric.kappa);
      if (metric.kind != MetricKind::koranyi) s.declared_diameter = diam;
    } else if (metric.kind == MetricKind::truncated) {
      s.declared_diameter = metric.kappa;
    } else {
      s.unbounded = true;
    }
  }
  // The gauge grows like sqrt|z| near the diagonal, so rounding of order
  // 1e-16 in z reads as 1e-8 in d. Coincidence is measured in coordinates.
  if (metric.kind == MetricKind::koranyi) s.discrepancy = euclidean_distance;
  if (basepoint) {
    if (!s.contains(*basepoint)) throw SpecError("basepoint outside window of '" + s.id + "'");
    s.basepoint = std::move(basepoint);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Finite spaces: points are indices into a distance matrix.

using Matrix = std::vector<std::vector<double>>;

/// Finite space from an n x n matrix. The matrix must be square, symmetric,
/// zero on the diagonal and nonnegative; the triangle inequality is left to
/// `check_metric_axioms`.
inline Space<Index> finite_space(std::string id, Matrix m,
                                 std::optional<Index> basepoint = std::nullopt) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n)
      throw SpecError("distance matrix is not square (row " + std::to_string(i) + ")");
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(m[i][j]) || m[i][j] < 0.0)
        throw SpecError("distance matrix entry (" + std::to_string(i) + "," +
                        std::to_string(j) + ") is not a nonnegative number");
    }
    if (m[i][i] != 0.0)
      throw SpecError("distance matrix diagonal entry " + std::to_string(i) + " is nonzero");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (m[i][j] != m[j][i])
        throw SpecError("distance matrix is not symmetric at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
  if (basepoint && *basepoint >= n) throw SpecError("basepoint index out of range");

  auto shared = std::make_shared<const Matrix>(std::move(m));
  Space<Index> s;
  s.id = std::move(id);
  s.metric = [shared](Index p, Index q) { return (*shared)[p][q]; };
  s.contains = [n](Index p) { return p < n; };
  s.sampler = [n](Rng& rng) { return static_cast<Index>(rng.index(n)); };
  s.universe_size = n;
  s.point_at = [](std::size_t i) { return static_cast<Index>(i); };
  s.basepoint = basepoint;
  s.nearby = [shared, n](Index p, double r, Rng& rng) {
    std::vector<Index> near;
    for (Index q = 0; q < n; ++q)
      if ((*shared)[p][q] < r) near.push_back(q);
    return near[rng.index(near.size())];
  };
  return s;
}

}  // namespace dilatia
