#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <variant>

#include "dilatia/cone.hpp"
#include "dilatia/derived_metrics.hpp"
#include "dilatia/dilation_family.hpp"
#include "dilatia/error.hpp"
#include "dilatia/gallery.hpp"
#include "dilatia/metric_core.hpp"
#include "dilatia/radial.hpp"
#include "dilatia/report.hpp"
#include "dilatia/spec_io.hpp"

namespace dilatia::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchema = "dilatia/1";

struct RunConfig {
  std::string command;     // verify-family, verify-linear, build-cone, decompose,
                           // derive-metric, group-norm, gallery
  std::string subcommand;  // "list" for gallery
  std::optional<std::string> space, family, action, group;
  std::optional<double> epsilon;
  std::optional<int> pairs, grid;
  std::optional<double> tol, exact_tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool rescale = false;
  bool allow_unsafe_diameter = false;
};

/// Seed: --seed, then DILATIA_SEED, then the library default.
inline ToleranceConfig resolve_tolerances(const RunConfig& rc) {
  ToleranceConfig cfg;
  if (rc.seed) {
    cfg.seed = *rc.seed;
  } else if (const char* env = std::getenv("DILATIA_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw SpecError(std::string("DILATIA_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  if (rc.tol) cfg.abs_tol = *rc.tol;
  if (rc.exact_tol) cfg.exact_tol = *rc.exact_tol;
  if (rc.pairs) cfg.sample_pairs = *rc.pairs;
  if (rc.grid) cfg.grid_size = *rc.grid;
  cfg.validate();
  return cfg;
}

using AnyFamily = std::variant<DilationFamily<Vec>, DilationFamily<ConePoint<Vec>>,
                               DilationFamily<ConePoint<Index>>>;
using AnyCone = std::variant<ConeSpace<Vec>, ConeSpace<Index>>;

namespace detail {

inline const std::string& need(const std::optional<std::string>& v, const char* flag) {
  if (!v || v->empty()) throw SpecError(std::string("missing required option ") + flag);
  return *v;
}

inline AnySpace base_space(const std::string& ref, bool rescale, const ToleranceConfig& cfg) {
  AnySpace s = load_space(ref);
  if (rescale) std::visit([&](auto& sp) { sp = rescale_to_diameter(sp, 2.0, cfg); }, s);
  return s;
}

inline AnyCone cone_of(const std::string& base_ref, const RunConfig& rc, const ToleranceConfig& cfg) {
  const AnySpace base = base_space(base_ref, rc.rescale, cfg);
  ConeOptions opts;
  opts.allow_unsafe_diameter = rc.allow_unsafe_diameter;
  return std::visit([&](const auto& sp) -> AnyCone { return build_cone(sp, cfg, opts); }, base);
}

inline bool is_cone_ref(const std::string& ref) { return ref.rfind("cone:", 0) == 0; }

inline Space<Vec> vector_space(const std::string& ref, const RunConfig& rc, const ToleranceConfig& cfg) {
  AnySpace s = base_space(ref, rc.rescale, cfg);
  if (auto* v = std::get_if<Space<Vec>>(&s)) return *v;
  throw SpecError("space '" + ref + "' is finite; this command needs coordinate points");
}

inline AnyFamily family_over(const std::string& map, const Json& params, const std::string& space_ref,
                             std::optional<IndexSet> index, const RunConfig& rc, const ToleranceConfig& cfg) {
  if (is_cone_ref(space_ref)) {
    if (map != "cone_canonical")
      throw SpecError("map '" + map + "' is not defined on cone spaces; use cone_canonical");
    const AnyCone cone = cone_of(space_ref.substr(5), rc, cfg);
    return std::visit([](const auto& c) -> AnyFamily { return canonical_family(c); }, cone);
  }
  return catalog_family(map, params, vector_space(space_ref, rc, cfg), std::move(index));
}

/// A gallery family, a catalog map over --space, or a JSON family spec.
/// --space replaces the space of a gallery family.
inline AnyFamily resolve_family(const RunConfig& rc, const ToleranceConfig& cfg) {
  const std::string& f = need(rc.family, "--family");
  if (is_catalog_map(f)) return family_over(f, Json::object(), need(rc.space, "--space"), std::nullopt, rc, cfg);
  bool in_gallery = false;
  for (const auto& e : gallery::entries()) in_gallery |= e.name == f && e.kind == gallery::EntryKind::family;
  if (in_gallery) {
    auto fam = gallery::build_as<DilationFamily<Vec>>(f);
    if (rc.space) fam.space = vector_space(*rc.space, rc, cfg);
    return fam;
  }
  const std::filesystem::path p(f);
  if (p.extension() != ".json") throw SpecError("unknown family '" + f + "'");
  const FamilySpec fs = family_spec_from_json(read_json_file(f), p.parent_path().string());
  if (fs.space_inline) {
    if (fs.map == "cone_canonical") throw SpecError("family spec: cone_canonical needs a \"cone:<base>\" space reference");
    AnySpace s = space_from_json(*fs.space_inline, fs.base_dir);
    auto* v = std::get_if<Space<Vec>>(&s);
    if (!v) throw SpecError("family spec: key 'space' names a finite space; catalog maps need coordinates");
    return catalog_family(fs.map, fs.params, *v, fs.index);
  }
  std::string ref = fs.space_ref ? *fs.space_ref : need(rc.space, "--space");
  if (fs.space_ref) {
    const std::string prefix = is_cone_ref(ref) ? "cone:" : "";
    const std::string inner = ref.substr(prefix.size());
    if (!inner.starts_with("gallery:")) ref = prefix + dilatia::detail::resolve_path(inner, fs.base_dir);
  }
  return family_over(fs.map, fs.params, ref, fs.index, rc, cfg);
}

inline RadialAction<Vec> resolve_action(const RunConfig& rc, const ToleranceConfig& cfg) {
  const std::string& a = need(rc.action, "--action");
  if (a == "radial_scale") {
    const Space<Vec> X = vector_space(need(rc.space, "--space"), rc, cfg);
    const RadialVariant variant = X.declared_diameter ? RadialVariant::compact : RadialVariant::locally_compact;
    // Sampled reach: boundary draws make this exact for balls and sup boxes.
    Rng rng = Rng::derive(cfg.seed, "reach:" + X.id);
    double reach = 0.0;
    for (int i = 0; i < 4096; ++i) reach = std::max(reach, X.distance(X.sample(rng), X.center()));
    return gallery::radial_scale(X, variant, reach);
  }
  if (rc.space) throw SpecError("gallery action '" + a + "' carries its own space; drop --space or use radial_scale");
  bool found = false;
  for (const auto& e : gallery::entries()) found |= e.name == a && e.kind == gallery::EntryKind::action;
  if (!found) throw SpecError("unknown action '" + a + "'");
  return gallery::build_as<RadialAction<Vec>>(a);
}

inline GroupStructure<Vec> resolve_group(const RunConfig& rc) {
  const std::string& g = need(rc.group, "--group");
  bool found = false;
  for (const auto& e : gallery::entries()) found |= e.name == g && e.kind == gallery::EntryKind::group;
  if (!found) throw SpecError("unknown group '" + g + "'");
  return gallery::build_as<GroupStructure<Vec>>(g);
}

inline Json histogram(const std::vector<double>& v, int bins) {
  double hi = 0.0;
  for (double x : v) hi = std::max(hi, x);
  std::vector<int> counts(bins, 0);
  for (double x : v) {
    int b = hi > 0.0 ? static_cast<int>(x / hi * bins) : 0;
    counts[std::min(b, bins - 1)]++;
  }
  return Json{{"max", hi}, {"bins", bins}, {"counts", counts}};
}

}  // namespace detail

// Commands -------------------------------------------------------------------

inline VerificationReport cmd_verify_family(const RunConfig& rc, const ToleranceConfig& cfg, bool linear) {
  const AnyFamily fam = detail::resolve_family(rc, cfg);
  return std::visit(
      [&](const auto& f) {
        VerificationReport rep;
        rep.subject = f.name + " on " + f.space.id;
        if (linear) {
          rep.merge(verify_linearity(f, cfg));
        } else {
          rep.merge(check_pure_set(f.index, cfg), "index.");
          rep.merge(verify_dilation_family(f, cfg));
        }
        rep.data["family"] = f.name;
        rep.data["space"] = f.space.id;
        rep.data["index"] = f.index.to_json();
        return rep;
      },
      fam);
}

inline VerificationReport cmd_build_cone(const RunConfig& rc, const ToleranceConfig& cfg) {
  std::string ref = detail::need(rc.space, "--space");
  if (detail::is_cone_ref(ref)) ref = ref.substr(5);
  const AnyCone cone = detail::cone_of(ref, rc, cfg);
  return std::visit(
      [&](const auto& c) {
        VerificationReport rep;
        rep.subject = c.view.id;
        rep.merge(check_metric_axioms(c.view, cfg), "metric.");
        const auto fam = canonical_family(c);
        rep.merge(verify_dilation_family(fam, cfg), "family.");
        rep.merge(verify_linearity(fam, cfg), "linearity.");
        rep.merge(unit_sphere_check(c, cfg), "sphere.");
        rep.merge(verify_cone_topology(c, cfg), "topology.");
        rep.data["cone"] = c.view.id;
        rep.data["base"] = c.base.id;
        rep.data["base_diameter"] = c.base_diameter;
        rep.data["rescaled"] = rc.rescale;
        rep.data["guard_bypassed"] = c.guard_bypassed;
        return rep;
      },
      cone);
}

inline VerificationReport cmd_decompose(const RunConfig& rc, const ToleranceConfig& cfg) {
  const RadialAction<Vec> action = detail::resolve_action(rc, cfg);
  const double eps = rc.epsilon.value_or(default_epsilon(action));
  if (!(eps > 0.0)) throw SpecError("--epsilon must be positive");
  VerificationReport rep;
  rep.subject = action.name + " on " + action.space.id;
  rep.data["epsilon"] = eps;
  rep.data["variant"] = to_string(action.variant);
  const VerificationReport act = verify_action(action, cfg);
  rep.merge(act, "action.");
  if (!act.passed()) {
    std::string failed;
    for (const auto& c : act.checks)
      if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
    const std::string note = "skipped: action fails " + failed;
    rep.add_blocked("partition", "{F(a)(C)} partitions X", note);
    rep.add_blocked("homeomorphism", "cone over the eps-sphere = closed eps-ball", note);
    rep.add_blocked("metric_cone", "F(a) is a dilation of scale a under the cone metric", note);
    return rep;
  }
  rep.merge(verify_partition(action, cfg, eps), "partition.");
  rep.merge(verify_cone_homeomorphism(action, eps, cfg), "homeomorphism.");
  rep.merge(verify_metric_cone(action, eps, cfg), "metric_cone.");

  Rng rng = Rng::derive(cfg.seed, "decompose_summary:" + action.name);
  std::vector<double> gammas, residuals;
  for (int i = 0; i < cfg.sample_pairs; ++i) {
    const auto cc = cone_coordinates(action, action.space.sample(rng), eps, cfg);
    gammas.push_back(cc.alpha);
    residuals.push_back(cc.residual);
  }
  double rmax = 0.0, rsum = 0.0;
  for (double r : residuals) {
    rmax = std::max(rmax, r);
    rsum += r;
  }
  rep.data["gamma_histogram"] = detail::histogram(gammas, 16);
  rep.data["residuals"] = Json{{"max", rmax}, {"mean", rsum / static_cast<double>(residuals.size())}};
  const auto base = boundary_set(action, eps, cfg, 16);
  rep.data["base_sample"] = base;
  return rep;
}

inline VerificationReport cmd_derive_metric(const RunConfig& rc, const ToleranceConfig& cfg) {
  const AnyFamily fam = detail::resolve_family(rc, cfg);
  const auto* f = std::get_if<DilationFamily<Vec>>(&fam);
  if (!f) throw SpecError("derive-metric needs a family on a coordinate space");
  VerificationReport rep = verify_limsup_metric(f->space, *f, cfg);
  rep.subject = f->name + " on " + f->space.id;
  return rep;
}

inline VerificationReport cmd_group_norm(const RunConfig& rc, const ToleranceConfig& cfg) {
  const GroupStructure<Vec> g = detail::resolve_group(rc);
  const AnyFamily fam = detail::resolve_family(rc, cfg);
  const auto* f = std::get_if<DilationFamily<Vec>>(&fam);
  if (!f) throw SpecError("group-norm needs a family on a coordinate space");
  if (f->space.basepoint && f->space.basepoint->size() != g.identity.size())
    throw SpecError("group '" + g.name + "' does not act on space '" + f->space.id + "'");
  VerificationReport rep;
  rep.subject = g.name + " on " + f->space.id;
  rep.merge(verify_group(f->space, g, cfg), "group.");
  rep.merge(verify_conical_group(f->space, g, *f, cfg));
  return rep;
}

inline Json gallery_listing() {
  Json list = Json::array();
  for (const auto& e : gallery::entries()) {
    Json j{{"name", e.name}, {"kind", gallery::to_string(e.kind)}, {"defaults", e.defaults},
           {"doc", e.doc}, {"negative", e.negative}};
    if (e.negative) j["fails"] = e.fails;
    list.push_back(std::move(j));
  }
  return list;
}

inline Json envelope(const RunConfig& rc, const ToleranceConfig& cfg, VerificationReport rep) {
  rep.sort_by_name();
  Json inputs = Json::object();
  if (rc.space) inputs["space"] = *rc.space;
  if (rc.family) inputs["family"] = *rc.family;
  if (rc.action) inputs["action"] = *rc.action;
  if (rc.group) inputs["group"] = *rc.group;
  if (rc.epsilon) inputs["epsilon"] = *rc.epsilon;
  if (rc.rescale) inputs["rescale"] = true;
  if (rc.allow_unsafe_diameter) inputs["allow_unsafe_diameter"] = true;
  Json j{{"schema", kSchema},
         {"tool_version", kToolVersion},
         {"command", rc.command},
         {"seed", cfg.seed},
         {"tolerances",
          {{"abs_tol", cfg.abs_tol},
           {"exact_tol", cfg.exact_tol},
           {"grid_size", cfg.grid_size},
           {"sample_pairs", cfg.sample_pairs}}},
         {"inputs", inputs},
         {"subject", rep.subject},
         {"checks", rep.checks},
         {"pass", rep.passed()}};
  if (!rep.data.empty()) j["data"] = rep.data;
  return j;
}

/// Runs one command. Exit codes: 0 every check passed, 1 some check
/// failed, 2 the inputs were unusable (spec, domain or precondition error).
inline int run(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  try {
    const ToleranceConfig cfg = resolve_tolerances(rc);
    Json doc;
    bool pass = true;
    if (rc.command == "gallery") {
      if (rc.subcommand != "list") throw SpecError("gallery: expected subcommand 'list'");
      doc = Json{{"schema", kSchema}, {"tool_version", kToolVersion}, {"command", "gallery list"},
                 {"entries", gallery_listing()}};
    } else {
      VerificationReport rep;
      if (rc.command == "verify-family") rep = cmd_verify_family(rc, cfg, false);
      else if (rc.command == "verify-linear") rep = cmd_verify_family(rc, cfg, true);
      else if (rc.command == "build-cone") rep = cmd_build_cone(rc, cfg);
      else if (rc.command == "decompose") rep = cmd_decompose(rc, cfg);
      else if (rc.command == "derive-metric") rep = cmd_derive_metric(rc, cfg);
      else if (rc.command == "group-norm") rep = cmd_group_norm(rc, cfg);
      else throw SpecError("unknown command '" + rc.command + "'");
      pass = rep.passed();
      doc = envelope(rc, cfg, std::move(rep));
    }
    const std::string text = doc.dump(2) + "\n";
    if (rc.out) {
      std::ofstream f(*rc.out, std::ios::binary);
      if (!f) throw SpecError("cannot write report to '" + *rc.out + "'");
      f << text;
    } else {
      out << text;
    }
    return pass ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace dilatia::cli
