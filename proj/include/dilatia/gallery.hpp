#pragma once

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "dilatia/derived_metrics.hpp"
#include "dilatia/dilation_family.hpp"
#include "dilatia/error.hpp"
#include "dilatia/radial.hpp"
#include "dilatia/report.hpp"
#include "dilatia/space.hpp"

namespace dilatia {

/// Reads a header-free, row-major CSV distance matrix.
inline Matrix read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open matrix file '" + path + "'");
  Matrix m;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw SpecError("matrix file '" + path + "', row " + std::to_string(m.size()) +
                        ": '" + cell + "' is not a number");
      }
    }
    m.push_back(std::move(row));
  }
  return m;
}

namespace gallery {

// Spaces ---------------------------------------------------------------------

inline Space<Vec> euclidean_ball(int n = 2, double r = 1.0) {
  if (n < 1) throw SpecError("euclidean_ball: n must be positive");
  return analytic_space("euclidean_ball(n=" + std::to_string(n) + ",r=" + Json(r).dump() + ")",
                        {MetricKind::euclidean}, Window::ball(n, r), Vec(n, 0.0));
}

/// All of R^n; the window only shapes sampling.
inline Space<Vec> euclidean_space(int n = 2, double window = 1.0) {
  if (n < 1) throw SpecError("euclidean_space: n must be positive");
  return analytic_space("euclidean_space(n=" + std::to_string(n) + ")", {MetricKind::euclidean},
                        Window::ball(n, window, false), Vec(n, 0.0));
}

inline Space<Vec> circle_arc(double radius = 1.0) {
  MetricParams m{MetricKind::circle_arc};
  m.radius = radius;
  return analytic_space("circle_arc(r=" + Json(radius).dump() + ")", m, Window::box({0.0}, {1.0}), Vec{0.0});
}

/// d = min(|x-y|, kappa) on [-window, window], or on all of R when window
/// is infinite (sampled on +-1e9).
inline Space<Vec> truncated_line(double window = 10.0, double kappa = 1.0) {
  MetricParams m{MetricKind::truncated};
  m.kappa = kappa;
  const bool bounded = std::isfinite(window);
  const double w = bounded ? window : 1e9;
  return analytic_space("truncated_line(window=" + (bounded ? Json(window).dump() : "inf") +
                            ",kappa=" + Json(kappa).dump() + ")",
                        m, Window::box({-w}, {w}, bounded), Vec{0.0});
}

inline Space<Vec> sup_cube(int n = 3) {
  if (n < 1) throw SpecError("sup_cube: n must be positive");
  return analytic_space("sup_cube(n=" + std::to_string(n) + ")", {MetricKind::sup},
                        Window::box(Vec(n, 0.0), Vec(n, 1.0)), Vec(n, 0.0));
}

inline Space<Vec> sup_square(double half = 1.0) {
  return analytic_space("sup_square(half=" + Json(half).dump() + ")", {MetricKind::sup},
                        Window::box({-half, -half}, {half, half}), Vec{0.0, 0.0});
}

/// Heisenberg group with the Koranyi distance; sampled on [-w,w]^3.
inline Space<Vec> heisenberg(double window = 1.0) {
  return analytic_space("heisenberg(window=" + Json(window).dump() + ")", {MetricKind::koranyi},
                        Window::box(Vec(3, -window), Vec(3, window), false), Vec(3, 0.0));
}

inline Space<Index> finite_matrix(Matrix m, std::string id = "finite_matrix") {
  return finite_space(std::move(id), std::move(m), Index{0});
}

// Groups ---------------------------------------------------------------------

inline GroupStructure<Vec> heisenberg_group() {
  return {"heisenberg_group", heisenberg::multiply, heisenberg::inverse, Vec(3, 0.0)};
}

inline GroupStructure<Vec> euclidean_group(int n = 2) {
  GroupStructure<Vec> g;
  g.name = "euclidean_group(n=" + std::to_string(n) + ")";
  g.op = [](const Vec& p, const Vec& q) {
    Vec r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i] + q[i];
    return r;
  };
  g.inverse = [](const Vec& p) {
    Vec r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = -p[i];
    return r;
  };
  g.identity = Vec(n, 0.0);
  return g;
}

// Families -------------------------------------------------------------------

inline Vec scaled(double a, const Vec& x) {
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i];
  return y;
}

/// T_a x = a x on any vector space.
inline DilationFamily<Vec> linear_scale(Space<Vec> space, IndexSet index) {
  DilationFamily<Vec> f;
  f.name = "linear_scale";
  f.space = std::move(space);
  f.index = std::move(index);
  f.map = scaled;
  f.exact = true;
  return f;
}

/// T_a x = a R(a) x, R(a) rotation by angle a. Angles add under composition.
inline DilationFamily<Vec> rotation_scale(Space<Vec> space, IndexSet index) {
  if (space.basepoint && space.basepoint->size() != 2) throw SpecError("rotation_scale needs the plane");
  DilationFamily<Vec> f;
  f.name = "rotation_scale";
  f.space = std::move(space);
  f.index = std::move(index);
  f.map = [](double a, const Vec& x) {
    const double c = std::cos(a), s = std::sin(a);
    return Vec{a * (c * x[0] - s * x[1]), a * (s * x[0] + c * x[1])};
  };
  f.exact = true;
  return f;
}

/// T_a x = a x + (1 - a) v: every T_a fixes v instead of the basepoint.
inline DilationFamily<Vec> offset_scale(Space<Vec> space, IndexSet index, Vec v) {
  DilationFamily<Vec> f;
  f.name = "offset_scale";
  f.space = std::move(space);
  f.index = std::move(index);
  f.map = [v](double a, const Vec& x) {
    Vec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i] + (1.0 - a) * v.at(i);
    return y;
  };
  f.exact = true;
  return f;
}

/// delta_l(x,y,z) = (l x, l y, l^2 z), or (l x, l y, l z) when isotropic.
inline DilationFamily<Vec> heisenberg_dilation(Space<Vec> space, IndexSet index, bool isotropic = false) {
  DilationFamily<Vec> f;
  f.name = isotropic ? "heisenberg_isotropic_dilation" : "heisenberg_dilation";
  f.space = std::move(space);
  f.index = std::move(index);
  if (isotropic)
    f.map = scaled;
  else
    f.map = [](double l, const Vec& p) { return Vec{l * p[0], l * p[1], l * l * p[2]}; };
  f.exact = !isotropic;
  return f;
}

/// Angle scaling on the circle read off [0, 2pi) without wrapping: points
/// past pi travel the long way round.
inline DilationFamily<Vec> circle_long_way(double radius = 1.0) {
  DilationFamily<Vec> f;
  f.name = "circle_long_way";
  f.space = circle_arc(radius);
  f.index = IndexSet::interval_01();
  f.map = [](double a, const Vec& t) {
    double th = std::fmod(t[0], 2.0 * std::numbers::pi);
    if (th < 0.0) th += 2.0 * std::numbers::pi;
    return Vec{a * th};
  };
  return f;
}

// Actions --------------------------------------------------------------------

inline RadialAction<Vec> radial_scale(Space<Vec> space, RadialVariant variant, double reach,
                                      std::string name = "radial_scale") {
  RadialAction<Vec> a;
  a.name = std::move(name);
  a.space = std::move(space);
  a.act = scaled;
  a.variant = variant;
  a.reach = reach;
  return a;
}

inline RadialAction<Vec> disk_radial_action(double r = 1.0) {
  return radial_scale(euclidean_ball(2, r), RadialVariant::compact, r, "disk_radial_action");
}

inline RadialAction<Vec> cube_coordinatewise_action(int n = 3) {
  return radial_scale(sup_cube(n), RadialVariant::compact, 1.0, "cube_coordinatewise_action");
}

inline RadialAction<Vec> plane_radial_action(double window = 10.0) {
  return radial_scale(euclidean_ball(2, window), RadialVariant::locally_compact, window,
                      "plane_radial_action");
}

inline RadialAction<Vec> square_radial_action(double half = 1.0) {
  return radial_scale(sup_square(half), RadialVariant::compact, half, "square_radial_action");
}

/// Closed disk of radius 2 where the ring |x| = 2 is fixed by every F(a):
/// F(a) x = g^-1(a g(|x|)) x/|x| with g(r) = r/(2-r).
inline RadialAction<Vec> fixed_ring_action() {
  RadialAction<Vec> a;
  a.name = "fixed_ring_action";
  a.space = euclidean_ball(2, 2.0);
  a.act = [](double s, const Vec& x) {
    const double r = euclidean_norm(x);
    if (r == 0.0 || s == 1.0) return x;
    if (r >= 2.0) return x;
    const double t = s * r / (2.0 - r);
    const double rr = 2.0 * t / (1.0 + t);
    return scaled(rr / r, x);
  };
  a.variant = RadialVariant::compact;
  a.reach = 2.0;
  return a;
}

/// F(a) x = a x + a(1-a) v on the unit disk. Breaks F(a)F(b) = F(ab).
inline RadialAction<Vec> offset_composition_action(Vec v = {0.25, 0.0}) {
  RadialAction<Vec> a;
  a.name = "offset_composition_action";
  a.space = euclidean_ball(2, 1.0);
  a.act = [v](double s, const Vec& x) {
    return Vec{s * x[0] + s * (1.0 - s) * v.at(0), s * x[1] + s * (1.0 - s) * v.at(1)};
  };
  a.declared_shrinking = false;
  a.reach = 1.0;
  return a;
}

// Catalog --------------------------------------------------------------------

enum class EntryKind { space, action, group, family };

inline std::string to_string(EntryKind k) {
  switch (k) {
    case EntryKind::space: return "space";
    case EntryKind::action: return "action";
    case EntryKind::group: return "group";
    case EntryKind::family: return "family";
  }
  return "?";
}

struct Entry {
  std::string name;
  EntryKind kind;
  Json defaults;
  std::string doc;
  bool negative = false;
  std::vector<std::string> fails;  // checks failing under `command`, as reported
  std::string command = {};        // CLI command the entry is built for
  std::string group = {};          // --group for group-norm entries
};

inline const std::vector<Entry>& entries() {
  static const std::vector<Entry> all = {
      {"euclidean_ball", EntryKind::space, {{"n", 2}, {"r", 1.0}},
       "closed Euclidean ball about the origin", false, {}},
      {"euclidean_space", EntryKind::space, {{"n", 2}, {"window", 1.0}},
       "R^n with the Euclidean metric, sampled in a ball", false, {}},
      {"circle_arc", EntryKind::space, {{"radius", 1.0}},
       "circle with the arc-length metric, diameter pi r; points are angles", false, {}},
      {"truncated_line", EntryKind::space, {{"window", 10.0}, {"kappa", 1.0}},
       "line with d = min(|x-y|, kappa); window \"inf\" gives all of R", false, {}},
      {"sup_cube", EntryKind::space, {{"n", 3}},
       "[0,1]^n with the sup metric; finite-dimensional slice of the infinite cube", false, {}},
      {"sup_square", EntryKind::space, {{"half", 1.0}}, "[-h,h]^2 with the sup metric", false, {}},
      {"heisenberg", EntryKind::space, {{"window", 1.0}},
       "Heisenberg group with the Koranyi distance ((x^2+y^2)^2 + 16 z^2)^(1/4)", false, {}},
      {"finite_matrix", EntryKind::space, {{"file", ""}},
       "finite space from a CSV distance matrix (or inline \"matrix\"); default: 4-cycle graph metric", false, {}},
      {"heisenberg_group", EntryKind::group, Json::object(),
       "(x,y,z)(x',y',z') = (x+x', y+y', z+z' + (xy'-yx')/2)", false, {}},
      {"euclidean_group", EntryKind::group, {{"n", 2}}, "(R^n, +)", false, {}},
      {"linear_scale_family", EntryKind::family, {{"n", 2}},
       "T_a x = a x on R^n, a in [0,inf)", false, {}, "verify-family"},
      {"rational_scale_family", EntryKind::family, Json::object(),
       "T_a x = a x on the unit disk, a in Q cap (0,1]", false, {}, "verify-family"},
      {"truncated_line_family", EntryKind::family, {{"window", 10.0}, {"kappa", 1.0}},
       "F(b) x = b x on the truncated line, b in [0,1]; not a dilation family for d, "
       "its limsup metric D is", false, {}, "derive-metric"},
      {"heisenberg_dilation_family", EntryKind::family, {{"window", 1.0}},
       "delta_l(x,y,z) = (l x, l y, l^2 z), l in [0,inf)", false, {}, "group-norm", "heisenberg_group"},
      {"rotation_scale_family", EntryKind::family, Json::object(),
       "T_a x = a R(a) x; rotation angles add, so T_a T_b != T_ab (and T_1 is a rotation)",
       true, {"composition", "identity_at_one", "limit_is_identity"}, "verify-family"},
      {"offset_scale_family", EntryKind::family, {{"v", {1.0, 0.0}}},
       "T_a x = a x + (1-a) v, a in (0,1]; fixes v, not the origin", true, {"center"}, "verify-family"},
      {"circle_long_way_family", EntryKind::family, {{"radius", 1.0}},
       "angle scaling that takes the long way round the circle", true, {"linearity"}, "verify-linear"},
      {"unbounded_truncated_family", EntryKind::family, {{"kappa", 1.0}},
       "F(b) x = b x on the truncated line over all of R; no finite bi-Lipschitz constant",
       true, {"hypothesis"}, "derive-metric"},
      {"heisenberg_isotropic_family", EntryKind::family, {{"window", 1.0}},
       "(l x, l y, l z) on the Heisenberg group; not homogeneous for the gauge", true,
       {"dilation_scale", "homogeneity", "homomorphism"}, "group-norm", "heisenberg_group"},
      {"disk_radial_action", EntryKind::action, {{"r", 1.0}}, "F(a) x = a x on the closed disk",
       false, {}, "decompose"},
      {"cube_coordinatewise_action", EntryKind::action, {{"n", 3}},
       "coordinatewise scaling on [0,1]^n with the sup metric; base set {max coordinate = 1}",
       false, {}, "decompose"},
      {"plane_radial_action", EntryKind::action, {{"window", 10.0}},
       "F(a) x = a x on the plane, locally compact variant on |x| <= window", false, {}, "decompose"},
      {"square_radial_action", EntryKind::action, {{"half", 1.0}},
       "F(a) x = a x on [-h,h]^2 with the sup metric", false, {}, "decompose"},
      {"fixed_ring_action", EntryKind::action, Json::object(),
       "disk of radius 2 whose boundary ring is fixed by every F(a)", true, {"action.shrinking", "action.zero_collapses", "homeomorphism", "metric_cone", "partition"}, "decompose"},
      {"offset_composition_action", EntryKind::action, {{"v", {0.25, 0.0}}},
       "F(a) x = a x + a(1-a) v; breaks the monoid law", true, {"action.composition", "homeomorphism", "metric_cone", "partition"}, "decompose"},
  };
  return all;
}

inline const Entry& find_entry(const std::string& name) {
  for (const auto& e : entries())
    if (e.name == name) return e;
  throw SpecError("unknown gallery entry '" + name + "'");
}

/// Entry defaults overridden by `params`; unknown keys are rejected.
inline Json resolve_params(const Entry& e, const Json& params) {
  Json p = e.defaults;
  if (params.is_null()) return p;
  if (!params.is_object()) throw SpecError(e.name + ": params must be an object");
  for (auto it = params.begin(); it != params.end(); ++it) {
    if (!p.contains(it.key()) && !(e.name == "finite_matrix" && it.key() == "matrix"))
      throw SpecError(e.name + ": unknown parameter '" + it.key() + "'");
    p[it.key()] = it.value();
  }
  return p;
}

namespace detail {

inline double num(const Json& p, const std::string& entry, const std::string& key) {
  const Json& v = p.at(key);
  if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  if (!v.is_number()) throw SpecError(entry + ": parameter '" + key + "' must be a number");
  return v.get<double>();
}

inline int integer(const Json& p, const std::string& entry, const std::string& key) {
  const Json& v = p.at(key);
  if (!v.is_number_integer()) throw SpecError(entry + ": parameter '" + key + "' must be an integer");
  return v.get<int>();
}

inline Vec vec(const Json& p, const std::string& entry, const std::string& key) {
  const Json& v = p.at(key);
  if (!v.is_array()) throw SpecError(entry + ": parameter '" + key + "' must be an array");
  try {
    return v.get<Vec>();
  } catch (const Json::exception&) {
    throw SpecError(entry + ": parameter '" + key + "' must be an array of numbers");
  }
}

}  // namespace detail

using Object = std::variant<Space<Vec>, Space<Index>, RadialAction<Vec>, GroupStructure<Vec>,
                            DilationFamily<Vec>>;

/// Constructs a catalog entry by name.
inline Object build(const std::string& name, const Json& params = Json::object()) {
  const Entry& e = find_entry(name);
  const Json p = resolve_params(e, params);
  using detail::integer;
  using detail::num;
  using detail::vec;
  if (name == "euclidean_ball") return euclidean_ball(integer(p, name, "n"), num(p, name, "r"));
  if (name == "euclidean_space") return euclidean_space(integer(p, name, "n"), num(p, name, "window"));
  if (name == "circle_arc") return circle_arc(num(p, name, "radius"));
  if (name == "truncated_line") return truncated_line(num(p, name, "window"), num(p, name, "kappa"));
  if (name == "sup_cube") return sup_cube(integer(p, name, "n"));
  if (name == "sup_square") return sup_square(num(p, name, "half"));
  if (name == "heisenberg") return heisenberg(num(p, name, "window"));
  if (name == "finite_matrix") {
    if (p.contains("matrix")) {
      try {
        return finite_matrix(p["matrix"].get<Matrix>());
      } catch (const Json::exception&) {
        throw SpecError("finite_matrix: parameter 'matrix' must be an array of numeric rows");
      }
    }
    const std::string file = p.value("file", "");
    if (file.empty()) return finite_matrix({{0, 1, 2, 1}, {1, 0, 1, 2}, {2, 1, 0, 1}, {1, 2, 1, 0}}, "four_cycle");
    return finite_matrix(read_csv_matrix(file), file);
  }
  if (name == "heisenberg_group") return heisenberg_group();
  if (name == "euclidean_group") return euclidean_group(integer(p, name, "n"));
  if (name == "linear_scale_family") {
    auto f = linear_scale(euclidean_space(integer(p, name, "n")), IndexSet::full_ray());
    f.name = name;
    return f;
  }
  if (name == "rational_scale_family") {
    auto f = linear_scale(euclidean_ball(2, 1.0), IndexSet::rationals_01());
    f.name = name;
    return f;
  }
  if (name == "truncated_line_family" || name == "unbounded_truncated_family") {
    const double w = name == "truncated_line_family" ? num(p, name, "window")
                                                     : std::numeric_limits<double>::infinity();
    auto f = linear_scale(truncated_line(w, num(p, name, "kappa")), IndexSet::interval_01());
    f.name = name;
    f.exact = false;
    return f;
  }
  if (name == "heisenberg_dilation_family" || name == "heisenberg_isotropic_family") {
    auto f = heisenberg_dilation(heisenberg(num(p, name, "window")), IndexSet::full_ray(),
                                 name == "heisenberg_isotropic_family");
    f.name = name;
    return f;
  }
  if (name == "rotation_scale_family") {
    auto f = rotation_scale(euclidean_space(2), IndexSet::full_ray());
    f.name = name;
    return f;
  }
  if (name == "offset_scale_family") {
    const Vec v = vec(p, name, "v");
    if (v.size() != 2) throw SpecError(name + ": parameter 'v' must have 2 entries");
    auto f = offset_scale(euclidean_space(2), IndexSet::interval_01_open_zero(), v);
    f.name = name;
    return f;
  }
  if (name == "circle_long_way_family") {
    auto f = circle_long_way(num(p, name, "radius"));
    f.name = name;
    return f;
  }
  if (name == "disk_radial_action") return disk_radial_action(num(p, name, "r"));
  if (name == "cube_coordinatewise_action") return cube_coordinatewise_action(integer(p, name, "n"));
  if (name == "plane_radial_action") return plane_radial_action(num(p, name, "window"));
  if (name == "square_radial_action") return square_radial_action(num(p, name, "half"));
  if (name == "fixed_ring_action") return fixed_ring_action();
  if (name == "offset_composition_action") {
    const Vec v = vec(p, name, "v");
    if (v.size() != 2) throw SpecError(name + ": parameter 'v' must have 2 entries");
    return offset_composition_action(v);
  }
  throw SpecError("gallery entry '" + name + "' has no constructor");
}

template <class T>
T build_as(const std::string& name, const Json& params = Json::object()) {
  Object o = build(name, params);
  if (auto* t = std::get_if<T>(&o)) return std::move(*t);
  throw SpecError("gallery entry '" + name + "' is a " + to_string(find_entry(name).kind) +
                  " of a different point type than requested");
}

}  // namespace gallery
}  // namespace dilatia
