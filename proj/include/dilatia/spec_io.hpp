#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "dilatia/error.hpp"
#include "dilatia/gallery.hpp"
#include "dilatia/index_set.hpp"
#include "dilatia/space.hpp"

namespace dilatia {

using AnySpace = std::variant<Space<Vec>, Space<Index>>;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw SpecError("spec file '" + path + "' is not valid JSON: " + e.what());
  }
}

namespace detail {

inline const Json& require(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw SpecError(where + ": missing key '" + key + "'");
  return j[key];
}

inline double number_at(const Json& j, const std::string& key, const std::string& where) {
  const Json& v = require(j, key, where);
  if (!v.is_number()) throw SpecError(where + ": key '" + key + "' must be a number");
  return v.get<double>();
}

inline Vec vector_at(const Json& j, const std::string& key, const std::string& where) {
  const Json& v = require(j, key, where);
  try {
    return v.get<Vec>();
  } catch (const Json::exception&) {
    throw SpecError(where + ": key '" + key + "' must be an array of numbers");
  }
}

inline std::string resolve_path(const std::string& path, const std::string& base_dir) {
  std::filesystem::path p(path);
  if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
  return p.string();
}

}  // namespace detail

/// Space from a JSON spec object. Recognised forms:
///   {"gallery": name, "params": {...}}
///   {"id", "kind": "finite", "matrix": [[...]] | "file.csv", "basepoint": i}
///   {"id", "kind": "analytic", "catalog": metric, "dim", "window": {...},
///    "params": {"kappa", "radius"}, "basepoint": [...]}
inline AnySpace space_from_json(const Json& j, const std::string& base_dir = {}) {
  using namespace detail;
  if (!j.is_object()) throw SpecError("space spec must be a JSON object");
  if (j.contains("gallery")) {
    if (!j["gallery"].is_string()) throw SpecError("space spec: key 'gallery' must be a string");
    auto o = gallery::build(j["gallery"], j.value("params", Json::object()));
    if (auto* s = std::get_if<Space<Vec>>(&o)) return *s;
    if (auto* s = std::get_if<Space<Index>>(&o)) return *s;
    throw SpecError("space spec: gallery entry '" + j["gallery"].get<std::string>() + "' is not a space");
  }
  const Json& kind = require(j, "kind", "space spec");
  if (!kind.is_string()) throw SpecError("space spec: key 'kind' must be a string");
  const std::string id = j.value("id", std::string("space"));
  if (kind == "finite") {
    const Json& m = require(j, "matrix", "space spec");
    Matrix mat;
    if (m.is_string()) {
      mat = read_csv_matrix(resolve_path(m.get<std::string>(), base_dir));
    } else {
      try {
        mat = m.get<Matrix>();
      } catch (const Json::exception&) {
        throw SpecError("space spec: key 'matrix' must be an array of numeric rows or a CSV path");
      }
    }
    std::optional<Index> bp;
    if (j.contains("basepoint")) {
      if (!j["basepoint"].is_number_unsigned())
        throw SpecError("space spec: key 'basepoint' must be a point index");
      bp = j["basepoint"].get<Index>();
    }
    return finite_space(id, std::move(mat), bp);
  }
  if (kind != "analytic") throw SpecError("space spec: key 'kind' must be \"finite\" or \"analytic\"");
  const Json& a = j.contains("analytic") ? j["analytic"] : j;
  const Json& cat = require(a, "catalog", "space spec");
  if (!cat.is_string()) throw SpecError("space spec: key 'catalog' must be a string");
  MetricParams mp;
  mp.kind = metric_kind_from_string(cat);
  if (a.contains("params")) {
    const Json& p = a["params"];
    if (!p.is_object()) throw SpecError("space spec: key 'params' must be an object");
    for (auto it = p.begin(); it != p.end(); ++it) {
      if (it.key() == "kappa")
        mp.kappa = number_at(p, "kappa", "space spec params");
      else if (it.key() == "radius")
        mp.radius = number_at(p, "radius", "space spec params");
      else
        throw SpecError("space spec params: unknown key '" + it.key() + "'");
    }
  }
  const Json& dimj = require(a, "dim", "space spec");
  if (!dimj.is_number_unsigned() || dimj.get<std::size_t>() == 0)
    throw SpecError("space spec: key 'dim' must be a positive integer");
  const std::size_t dim = dimj.get<std::size_t>();
  const Json& w = require(a, "window", "space spec");
  if (!w.is_object()) throw SpecError("space spec: key 'window' must be an object");
  const bool bounded = w.value("bounded", true);
  const std::string shape = w.value("shape", std::string("ball"));
  Window win;
  if (shape == "ball") {
    win = Window::ball(dim, number_at(w, "radius", "space spec window"), bounded);
    if (w.contains("center")) win.center = vector_at(w, "center", "space spec window");
  } else if (shape == "box") {
    win = Window::box(vector_at(w, "lo", "space spec window"), vector_at(w, "hi", "space spec window"), bounded);
  } else {
    throw SpecError("space spec window: key 'shape' must be \"ball\" or \"box\"");
  }
  if (win.dim() != dim) throw SpecError("space spec: window dimension does not match key 'dim'");
  std::optional<Vec> bp;
  if (j.contains("basepoint")) bp = vector_at(j, "basepoint", "space spec");
  else bp = Vec(dim, 0.0);
  return analytic_space(id, mp, win, bp);
}

/// "gallery:<name>", a .csv distance matrix, or a .json space spec.
inline AnySpace load_space(const std::string& ref) {
  if (ref.rfind("gallery:", 0) == 0) return space_from_json(Json{{"gallery", ref.substr(8)}});
  const std::filesystem::path p(ref);
  if (p.extension() == ".csv") return gallery::finite_matrix(read_csv_matrix(ref), p.stem().string());
  return space_from_json(read_json_file(ref), p.parent_path().string());
}

/// [0,1] on spaces with a known bounded extent, [0,inf) otherwise.
template <class P>
IndexSet default_index(const Space<P>& s) {
  return s.declared_diameter || s.is_finite() ? IndexSet::interval_01() : IndexSet::full_ray();
}

inline bool is_catalog_map(const std::string& name) {
  return name == "linear_scale" || name == "rotation_scale" || name == "offset_scale" ||
         name == "heisenberg_dilation" || name == "cone_canonical";
}

/// Family from a catalog map over a vector space.
inline DilationFamily<Vec> catalog_family(const std::string& map, const Json& params, Space<Vec> space,
                                          std::optional<IndexSet> index) {
  const IndexSet I = index.value_or(default_index(space));
  const Json p = params.is_null() ? Json::object() : params;
  if (!p.is_object()) throw SpecError("map: key 'params' must be an object");
  if (map == "linear_scale") return gallery::linear_scale(std::move(space), I);
  if (map == "rotation_scale") return gallery::rotation_scale(std::move(space), I);
  if (map == "offset_scale") {
    const Vec v = detail::vector_at(p, "v", "map.params");
    if (space.basepoint && v.size() != space.basepoint->size())
      throw SpecError("map.params: key 'v' has the wrong dimension");
    return gallery::offset_scale(std::move(space), I, v);
  }
  if (map == "heisenberg_dilation") {
    if (space.basepoint && space.basepoint->size() != 3)
      throw SpecError("map: heisenberg_dilation needs a 3-dimensional space");
    return gallery::heisenberg_dilation(std::move(space), I, p.value("isotropic", false));
  }
  if (map == "cone_canonical") throw SpecError("map: cone_canonical needs a cone space (\"cone:<base>\")");
  throw SpecError("map: unknown catalog map '" + map + "'");
}

struct FamilySpec {
  std::optional<std::string> space_ref;
  std::optional<Json> space_inline;
  std::optional<IndexSet> index;
  std::string map;
  Json params = Json::object();
  std::string base_dir;
};

inline FamilySpec family_spec_from_json(const Json& j, const std::string& base_dir = {}) {
  using namespace detail;
  if (!j.is_object()) throw SpecError("family spec must be a JSON object");
  FamilySpec fs;
  fs.base_dir = base_dir;
  if (j.contains("space")) {
    if (j["space"].is_string())
      fs.space_ref = j["space"].get<std::string>();
    else if (j["space"].is_object())
      fs.space_inline = j["space"];
    else
      throw SpecError("family spec: key 'space' must be a reference string or a space object");
  }
  if (j.contains("index")) fs.index = IndexSet::from_json(j["index"]);
  const Json& m = require(j, "map", "family spec");
  if (!m.is_object()) throw SpecError("family spec: key 'map' must be an object");
  const Json& cat = require(m, "catalog", "family spec map");
  if (!cat.is_string()) throw SpecError("family spec map: key 'catalog' must be a string");
  fs.map = cat.get<std::string>();
  if (!is_catalog_map(fs.map)) throw SpecError("family spec map: unknown catalog '" + fs.map + "'");
  fs.params = m.value("params", Json::object());
  return fs;
}

}  // namespace dilatia
