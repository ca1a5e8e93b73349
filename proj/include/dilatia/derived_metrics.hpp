#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dilatia/dilation_family.hpp"
#include "dilatia/error.hpp"
#include "dilatia/report.hpp"
#include "dilatia/space.hpp"
#include "dilatia/tolerance.hpp"

namespace dilatia {

template <class P>
struct GroupStructure {
  std::string name;
  std::function<P(const P&, const P&)> op;
  std::function<P(const P&)> inverse;
  P identity{};
};

/// Associativity, identity and inverse laws on samples. Points of a group
/// may leave the sampling window, so the raw metric is used throughout.
template <class P>
VerificationReport verify_group(const Space<P>& X, const GroupStructure<P>& g, const ToleranceConfig& cfg) {
  cfg.validate();
  VerificationReport rep;
  rep.subject = g.name;
  auto same = [&](const P& p, const P& q) { return X.discrepancy ? X.discrepancy(p, q) : X.metric(p, q); };
  Rng rng = Rng::derive(cfg.seed, "group:" + g.name);
  CheckAccumulator assoc("associativity", "(pq)r = p(qr)", cfg.abs_tol);
  CheckAccumulator ident("identity", "ep = pe = p", cfg.exact_tol);
  CheckAccumulator inv("inverse", "p p^-1 = p^-1 p = e", cfg.abs_tol);
  for (int i = 0; i < cfg.sample_pairs; ++i) {
    const P p = X.sample(rng), q = X.sample(rng), r = X.sample(rng);
    assoc.observe(same(g.op(g.op(p, q), r), g.op(p, g.op(q, r))),
                  [&] { return Json{{"p", point_json(p)}, {"q", point_json(q)}, {"r", point_json(r)}}; });
    ident.observe(std::max(same(g.op(g.identity, p), p), same(g.op(p, g.identity), p)),
                  [&] { return Json{{"p", point_json(p)}}; });
    inv.observe(std::max(same(g.op(p, g.inverse(p)), g.identity), same(g.op(g.inverse(p), p), g.identity)),
                [&] { return Json{{"p", point_json(p)}}; });
  }
  rep.add(assoc.finish());
  rep.add(ident.finish());
  rep.add(inv.finish());
  return rep;
}

// ---------------------------------------------------------------------------
// Limsup metric D(x,y) = limsup_{b->0} d(F(b)x, F(b)y) / b.

struct BiLipschitzEstimate {
  double alpha_x = 0.0;  // bounds verified for sampled b <= alpha_x
  double A_x = 1.0;
  Json diagnostics = Json::object();
};

/// Largest power-of-two scale at or below the top of I, restricted to I.
inline std::vector<double> scale_ladder(const IndexSet& I, double start, double floor) {
  std::vector<double> out;
  for (double b = start; b >= floor; b *= 0.5)
    if (I.contains(b)) out.push_back(b);
  return out;
}

/// Smallest A with b d(x,y)/A <= d(F(b)x, F(b)y) <= A b d(x,y) on sampled
/// (y, b), and the largest ladder scale alpha_x up to which that A works.
template <class P>
BiLipschitzEstimate estimate_local_bilipschitz(const Space<P>& X, const DilationFamily<P>& fam,
                                               const P& x, const ToleranceConfig& cfg,
                                               double cap = 1e6, double floor = 1e-8) {
  cfg.validate();
  const std::vector<double> ladder = scale_ladder(fam.index, std::min(1.0, fam.index.upper()), floor);
  if (ladder.empty()) throw HypothesisViolation("index set has no scales in (0, 1]");
  Rng rng = Rng::derive(cfg.seed, "bilipschitz:" + fam.name + ":" + point_json(x).dump());
  const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(cfg.sample_pairs), 200);

  // need[k] = worst max(r, 1/r) over sampled y at ladder[k].
  std::vector<double> need(ladder.size(), 1.0);
  std::vector<Json> worst(ladder.size());
  for (std::size_t i = 0; i < m; ++i) {
    const P y = X.sample(rng);
    const double d = X.distance(x, y);
    if (d == 0.0) continue;
    for (std::size_t k = 0; k < ladder.size(); ++k) {
      const double b = ladder[k];
      const double r = X.distance(fam.apply(b, x), fam.apply(b, y)) / (b * d);
      const double w = r > 0.0 ? std::max(r, 1.0 / r) : std::numeric_limits<double>::infinity();
      if (w > need[k]) {
        need[k] = w;
        worst[k] = Json{{"y", point_json(y)}, {"beta", b}, {"ratio", r}};
      }
    }
  }
  // Suffix maxima: A must hold for every scale below the threshold.
  std::vector<double> suffix(need);
  for (std::size_t k = suffix.size() - 1; k-- > 0;) suffix[k] = std::max(suffix[k], suffix[k + 1]);
  const double A = suffix.back();
  if (!(A <= cap)) {
    std::size_t kw = ladder.size() - 1;
    throw HypothesisViolation("no bi-Lipschitz constant up to " + std::to_string(cap) + " at x = " +
                              point_json(x).dump() + ", witness " + worst[kw].dump());
  }
  BiLipschitzEstimate est;
  est.A_x = A;
  std::size_t k = 0;
  while (suffix[k] > A * (1.0 + 1e-9)) ++k;
  est.alpha_x = ladder[k];
  est.diagnostics = Json{{"scales", ladder.size()}, {"floor", ladder.back()}, {"need_at_top", need.front()}};
  return est;
}

/// Tail sup of d(F(b)x, F(b)y)/b over b = start 2^-k down to `floor`;
/// the last two tails must agree within abs_tol.
template <class P>
double limsup_metric_from(const Space<P>& X, const DilationFamily<P>& fam, const P& x, const P& y,
                          double start, const ToleranceConfig& cfg, double floor = 1e-8) {
  const std::vector<double> ladder = scale_ladder(fam.index, start, floor);
  if (ladder.size() < 3) throw NonConvergenceError("scale grid too short for a limsup", 0.0);
  std::vector<double> q;
  q.reserve(ladder.size());
  for (double b : ladder) q.push_back(X.distance(fam.apply(b, x), fam.apply(b, y)) / b);
  const std::size_t K = q.size() - 1;
  const double tail_last = std::max(q[K], q[K - 1]);
  const double tail_prev = std::max(tail_last, q[K - 2]);
  if (std::abs(tail_prev - tail_last) > cfg.abs_tol)
    throw NonConvergenceError("limsup tail did not stabilise: " + std::to_string(tail_prev) + " vs " +
                                  std::to_string(tail_last),
                              std::abs(tail_prev - tail_last));
  return tail_last;
}

template <class P>
double limsup_metric(const Space<P>& X, const DilationFamily<P>& fam, const P& x, const P& y,
                     const ToleranceConfig& cfg, double floor = 1e-8) {
  const double ax = estimate_local_bilipschitz(X, fam, x, cfg, 1e6, floor).alpha_x;
  const double ay = estimate_local_bilipschitz(X, fam, y, cfg, 1e6, floor).alpha_x;
  return limsup_metric_from(X, fam, x, y, std::min(ax, ay), cfg, floor);
}

/// Metric axioms of D, the sandwich d/A <= D <= A d, exact dilation under D
/// and the two ball inclusions. A failed bi-Lipschitz hypothesis blocks
/// the metric checks.
template <class P>
VerificationReport verify_limsup_metric(const Space<P>& X, const DilationFamily<P>& fam,
                                        const ToleranceConfig& cfg, double floor = 1e-8) {
  cfg.validate();
  VerificationReport rep;
  rep.subject = fam.name;
  Rng rng = Rng::derive(cfg.seed, "limsup_metric:" + fam.name);

  // One scale threshold and constant for the whole sample.
  CheckAccumulator hyp("hypothesis", "b d/A <= d(F(b)x, F(b)y) <= A b d", 1e6);
  double A = 1.0, start = 1.0;
  std::vector<P> probes;
  if (X.basepoint) probes.push_back(*X.basepoint);
  while (probes.size() < 16) probes.push_back(X.sample(rng));
  try {
    for (const P& p : probes) {
      const auto est = estimate_local_bilipschitz(X, fam, p, cfg, 1e6, floor);
      hyp.observe(est.A_x, [&] { return Json{{"x", point_json(p)}, {"alpha_x", est.alpha_x}}; });
      A = std::max(A, est.A_x);
      start = std::min(start, est.alpha_x);
    }
  } catch (const HypothesisViolation& e) {
    rep.add_blocked("hypothesis", "b d/A <= d(F(b)x, F(b)y) <= A b d", e.what());
    rep.data["hypothesis_failed"] = true;
    return rep;
  }
  rep.add(hyp.finish());
  rep.data["A"] = A;
  rep.data["alpha"] = start;
  rep.data["floor"] = floor;

  auto D = [&](const P& p, const P& q) { return limsup_metric_from(X, fam, p, q, start, cfg, floor); };
  const double tol = cfg.abs_tol;
  CheckAccumulator diag("zero_diagonal", "D(x,x) = 0", tol);
  CheckAccumulator sym("symmetry", "D(x,y) = D(y,x)", tol);
  CheckAccumulator tri("triangle", "D(x,z) <= D(x,y) + D(y,z)", tol);
  CheckAccumulator sand("sandwich", "d/A <= D <= A d", tol);
  CheckAccumulator dil("dilation_scale", "D(F(g)x, F(g)y) = g D(x,y)", tol);
  CheckAccumulator in_d("ball_inclusion_d_in_D", "d(x,y) < eps/(2A) => D(x,y) < eps", tol);
  CheckAccumulator in_D("ball_inclusion_D_in_d", "D(x,y) < eps/A => d(x,y) < eps", tol);
  Json pairs = Json::array();
  for (int i = 0; i < cfg.sample_pairs; ++i) {
    const P x = X.sample(rng), y = X.sample(rng), z = X.sample(rng);
    const double dxy = D(x, y), dyz = D(y, z), dxz = D(x, z);
    const double d = X.distance(x, y);
    auto wxy = [&] { return Json{{"x", point_json(x)}, {"y", point_json(y)}, {"D", dxy}, {"d", d}}; };
    diag.observe(D(x, x), [&] { return Json{{"x", point_json(x)}}; });
    sym.observe(std::abs(dxy - D(y, x)), wxy);
    tri.observe(std::max(0.0, dxz - dxy - dyz),
                [&] { return Json{{"x", point_json(x)}, {"y", point_json(y)}, {"z", point_json(z)}}; });
    sand.observe(std::max({0.0, d / A - dxy, dxy - A * d}), wxy);
    const double g = fam.index.draw(rng);
    if (g > 0.0) {
      const double v = std::abs(D(fam.apply(g, x), fam.apply(g, y)) - g * dxy);
      dil.observe(v, [&] { return Json{{"gamma", g}, {"x", point_json(x)}, {"y", point_json(y)}}; });
    }
    if (X.nearby) {
      const double eps = 1.0 - rng.uniform();
      const P y1 = X.nearby(x, eps / (2.0 * A), rng);
      const double D1 = D(x, y1);
      in_d.observe(std::max(0.0, D1 - eps), [&] { return Json{{"x", point_json(x)}, {"y", point_json(y1)}, {"eps", eps}}; });
      const P y2 = X.nearby(x, eps, rng);
      if (D(x, y2) < eps / A) {
        const double d2 = X.distance(x, y2);
        in_D.observe(std::max(0.0, d2 - eps), [&] { return Json{{"x", point_json(x)}, {"y", point_json(y2)}, {"eps", eps}}; });
      }
    }
    if (pairs.size() < 8) pairs.push_back(Json{{"x", point_json(x)}, {"y", point_json(y)}, {"d", d}, {"D", dxy}});
  }
  rep.data["pairs"] = pairs;
  for (auto* acc : {&diag, &sym, &tri, &sand, &dil, &in_d, &in_D}) rep.add(acc->finish());
  rep.sort_by_name();
  return rep;
}

// ---------------------------------------------------------------------------
// Sup metric D(x,y) = sup_c d(c x, c y) and homogeneous norm ||x|| = D(x, e).

/// Sup over a fixed translation set: the whole universe when finite,
/// otherwise the identity plus seeded samples of the window. Because the set
/// is fixed, the sampled D is itself a pseudometric.
template <class P>
class SupMetric {
 public:
  SupMetric(Space<P> X, GroupStructure<P> g, const ToleranceConfig& cfg, std::size_t translations = 10000)
      : X_(std::move(X)), g_(std::move(g)), tol_(cfg.abs_tol) {
    if (X_.is_finite()) {
      for (std::size_t i = 0; i < *X_.universe_size; ++i) cs_.push_back(X_.point_at(i));
      exact_ = true;
    } else {
      cs_.push_back(g_.identity);
      Rng rng = Rng::derive(cfg.seed, "translations:" + g_.name);
      for (std::size_t i = 0; i < translations; ++i) cs_.push_back(X_.sample(rng));
    }
  }

  bool exact() const { return exact_; }
  std::size_t translations() const { return cs_.size(); }
  const Space<P>& space() const { return X_; }
  const GroupStructure<P>& group() const { return g_; }

  /// Throws HypothesisViolation when the sup keeps doubling as the
  /// translation sample grows (no shared modulus in sight).
  double operator()(const P& x, const P& y) const {
    const std::size_t n = cs_.size();
    double sup = 0.0, at_quarter = 0.0, at_half = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sup = std::max(sup, X_.metric(g_.op(cs_[i], x), g_.op(cs_[i], y)));
      if (i + 1 == n / 4) at_quarter = sup;
      if (i + 1 == n / 2) at_half = sup;
    }
    if (!exact_ && n >= 8 && sup > 2.0 * at_half + tol_ && at_half > 2.0 * at_quarter + tol_)
      throw HypothesisViolation("translations not equicontinuous: sup grows " + std::to_string(at_quarter) +
                                " -> " + std::to_string(at_half) + " -> " + std::to_string(sup));
    return sup;
  }

 private:
  Space<P> X_;
  GroupStructure<P> g_;
  double tol_;
  std::vector<P> cs_;
  bool exact_ = false;
};

template <class P>
double sup_metric(const Space<P>& X, const GroupStructure<P>& g, const P& x, const P& y,
                  const ToleranceConfig& cfg, std::size_t translations = 10000) {
  return SupMetric<P>(X, g, cfg, translations)(x, y);
}

/// Sampled T_a(pq) = T_a(p) T_a(q).
template <class P>
CheckRecord check_homomorphism(const Space<P>& X, const GroupStructure<P>& g, const DilationFamily<P>& fam,
                               const ToleranceConfig& cfg) {
  Rng rng = Rng::derive(cfg.seed, "homomorphism:" + fam.name);
  auto same = [&](const P& p, const P& q) { return X.discrepancy ? X.discrepancy(p, q) : X.metric(p, q); };
  CheckAccumulator hom("homomorphism", "T_a(pq) = T_a(p) T_a(q)", cfg.abs_tol);
  for (int i = 0; i < std::min(cfg.sample_pairs, 256); ++i) {
    const double a = fam.index.draw(rng);
    const P p = X.sample(rng), q = X.sample(rng);
    const double v = same(fam.map(a, g.op(p, q)), g.op(fam.map(a, p), fam.map(a, q)));
    hom.observe(v, [&] { return Json{{"alpha", a}, {"p", point_json(p)}, {"q", point_json(q)}}; });
  }
  return hom.finish();
}

template <class P>
double homogeneous_norm(const Space<P>& X, const GroupStructure<P>& g, const DilationFamily<P>& fam,
                        const P& x, const ToleranceConfig& cfg) {
  const CheckRecord hom = check_homomorphism(X, g, fam, cfg);
  if (!hom.pass)
    throw HypothesisViolation("family '" + fam.name + "' is not a group homomorphism, witness " +
                              hom.witness.dump());
  return SupMetric<P>(X, g, cfg)(x, g.identity);
}

/// Left invariance, norm laws and the dilation property under the sup
/// metric. A failed homomorphism check is recorded, not thrown.
template <class P>
VerificationReport verify_conical_group(const Space<P>& X, const GroupStructure<P>& g,
                                        const DilationFamily<P>& fam, const ToleranceConfig& cfg,
                                        std::size_t translations = 10000) {
  cfg.validate();
  VerificationReport rep;
  rep.subject = g.name + "/" + fam.name;
  rep.add(check_homomorphism(X, g, fam, cfg));
  const SupMetric<P> D(X, g, cfg, translations);
  rep.data["translations"] = D.translations();
  rep.data["sup_exact"] = D.exact();
  auto norm = [&](const P& p) { return D(p, g.identity); };

  Rng rng = Rng::derive(cfg.seed, "conical_group:" + g.name + ":" + fam.name);
  const double tol = cfg.abs_tol;
  CheckAccumulator left("left_invariance", "D(zx, zy) = D(x,y)", tol);
  CheckAccumulator inv("inverse_symmetry", "||x^-1|| = ||x||", tol);
  CheckAccumulator sub("subadditivity", "||xy|| <= ||x|| + ||y||", tol);
  CheckAccumulator hom("homogeneity", "||T_a x|| = a ||x||", tol);
  CheckAccumulator dil("dilation_scale", "D(T_a x, T_a y) = a D(x,y)", tol);
  CheckAccumulator dom("sup_dominance", "D(x,y) >= d(x,y)", cfg.exact_tol);
  const int n = std::min(cfg.sample_pairs, 256);
  for (int i = 0; i < n; ++i) {
    const P x = X.sample(rng), y = X.sample(rng), z = X.sample(rng);
    const double a = fam.index.draw(rng);
    auto wx = [&] { return Json{{"x", point_json(x)}, {"y", point_json(y)}}; };
    const double dxy = D(x, y);
    left.observe(std::abs(D(g.op(z, x), g.op(z, y)) - dxy),
                 [&] { return Json{{"x", point_json(x)}, {"y", point_json(y)}, {"z", point_json(z)}}; });
    const double nx = norm(x);
    inv.observe(std::abs(norm(g.inverse(x)) - nx), [&] { return Json{{"x", point_json(x)}}; });
    sub.observe(std::max(0.0, norm(g.op(x, y)) - nx - norm(y)), wx);
    hom.observe(std::abs(norm(fam.map(a, x)) - a * nx),
                [&] { return Json{{"alpha", a}, {"x", point_json(x)}, {"norm", nx}}; });
    dil.observe(std::abs(D(fam.map(a, x), fam.map(a, y)) - a * dxy),
                [&] { return Json{{"alpha", a}, {"x", point_json(x)}, {"y", point_json(y)}}; });
    dom.observe(std::max(0.0, X.metric(x, y) - dxy), wx);
  }
  for (auto* acc : {&left, &inv, &sub, &hom, &dil, &dom}) rep.add(acc->finish());
  rep.sort_by_name();
  return rep;
}

}  // namespace dilatia
