#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dilatia/error.hpp"
#include "dilatia/random.hpp"
#include "dilatia/report.hpp"
#include "dilatia/tolerance.hpp"

namespace dilatia {

/// Symbolic index set I in R>=0. Membership of floating values is decided
/// from the descriptor, never from a sampled float set.
///
/// `rationals_01` decides membership with a denominator budget: a double is
/// a member when it is within a few ulps of some p/q with q <= 10^6. Member
/// sequences produced by `approach` are members by construction and may use
/// larger denominators.
class IndexSet {
 public:
  enum class Kind {
    interval_01,            // [0,1]
    interval_01_open_zero,  // (0,1]
    ray_1,                  // [1,inf)
    full_ray,               // [0,inf)
    positive_ray,           // (0,inf)
    geometric,              // {q^n : n in Z}
    rationals_01,           // Q cap (0,1]
    explicit_list,
  };

  static constexpr double kRationalDenominatorBudget = 1e6;

  static IndexSet interval_01() { return IndexSet(Kind::interval_01); }
  static IndexSet interval_01_open_zero() { return IndexSet(Kind::interval_01_open_zero); }
  static IndexSet ray_1() { return IndexSet(Kind::ray_1); }
  static IndexSet full_ray() { return IndexSet(Kind::full_ray); }
  static IndexSet positive_ray() { return IndexSet(Kind::positive_ray); }
  static IndexSet rationals_01() { return IndexSet(Kind::rationals_01); }
  static IndexSet geometric(double q) {
    if (!(q > 0.0) || q == 1.0 || !std::isfinite(q))
      throw SpecError("geometric index set needs q > 0, q != 1");
    IndexSet s(Kind::geometric);
    s.q_ = q;
    return s;
  }
  static IndexSet explicit_list(std::vector<double> values) {
    for (double v : values)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw SpecError("explicit index values must be finite and nonnegative");
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.empty()) throw SpecError("explicit index set is empty");
    IndexSet s(Kind::explicit_list);
    s.values_ = std::move(values);
    return s;
  }

  Kind kind() const { return kind_; }
  double ratio() const { return q_; }
  const std::vector<double>& values() const { return values_; }

  /// Copy with 0 adjoined.
  IndexSet with_zero() const {
    IndexSet s = *this;
    s.zero_adjoined_ = true;
    return s;
  }

  bool contains_zero() const {
    if (zero_adjoined_) return true;
    switch (kind_) {
      case Kind::interval_01:
      case Kind::full_ray: return true;
      case Kind::explicit_list: return values_.front() == 0.0;
      default: return false;
    }
  }

  bool contains(double a) const {
    if (!std::isfinite(a) || a < 0.0) return false;
    if (a == 0.0) return contains_zero();
    switch (kind_) {
      case Kind::interval_01:
      case Kind::interval_01_open_zero: return a <= 1.0;
      case Kind::ray_1: return a >= 1.0;
      case Kind::full_ray:
      case Kind::positive_ray: return true;
      case Kind::geometric: {
        const double n = std::round(std::log(a) / std::log(q_));
        return std::abs(std::pow(q_, n) - a) <= 1e-12 * a;
      }
      case Kind::rationals_01: return a <= 1.0 && is_budget_rational(a);
      case Kind::explicit_list:
        return std::any_of(values_.begin(), values_.end(), [a](double v) {
          return std::abs(v - a) <= 1e-12 * std::max(1.0, v);
        });
    }
    return false;
  }

  /// Infimum and supremum of I.
  double lower() const {
    if (contains_zero()) return 0.0;
    switch (kind_) {
      case Kind::ray_1: return 1.0;
      case Kind::explicit_list: return values_.front();
      default: return 0.0;
    }
  }
  double upper() const {
    switch (kind_) {
      case Kind::interval_01:
      case Kind::interval_01_open_zero:
      case Kind::rationals_01: return 1.0;
      case Kind::explicit_list: return values_.back();
      default: return std::numeric_limits<double>::infinity();
    }
  }

  /// I cap [0,1) is nonempty.
  bool meets_below_one() const { return contains_zero() || lower() < 1.0; }

  /// Membership in the closure of I taken in R>=0.
  bool in_closure(double a) const {
    if (!std::isfinite(a) || a < 0.0) return false;
    switch (kind_) {
      case Kind::interval_01:
      case Kind::interval_01_open_zero:
      case Kind::rationals_01: return a <= 1.0;
      case Kind::ray_1: return a >= 1.0 || (zero_adjoined_ && a == 0.0);
      case Kind::full_ray:
      case Kind::positive_ray: return true;
      case Kind::geometric: return a == 0.0 || contains(a);
      case Kind::explicit_list: return contains(a);
    }
    return false;
  }

  /// Representative members: always 1 first, then 0 when present, then
  /// random draws.
  std::vector<double> sample(std::size_t k, Rng& rng) const {
    std::vector<double> out;
    out.reserve(k + 2);
    out.push_back(1.0);
    if (contains_zero()) out.push_back(0.0);
    while (out.size() < k) out.push_back(draw(rng));
    out.resize(std::max<std::size_t>(k, 1));
    return out;
  }

  /// One random member.
  double draw(Rng& rng) const {
    if (contains_zero() && rng.bernoulli(1.0 / 32.0)) return 0.0;
    switch (kind_) {
      case Kind::interval_01: return rng.uniform();
      case Kind::interval_01_open_zero: return 1.0 - rng.uniform();
      case Kind::ray_1: return std::exp(rng.uniform(0.0, std::log(100.0)));
      case Kind::full_ray:
      case Kind::positive_ray:
        return rng.bernoulli(0.5) ? 1.0 - rng.uniform()
                                  : std::exp(rng.uniform(0.0, std::log(10.0)));
      case Kind::geometric: {
        const int n = static_cast<int>(rng.index(17)) - 8;
        return std::pow(q_, n);
      }
      case Kind::rationals_01: {
        const double den = static_cast<double>(1 + rng.index(1000));
        const double num = static_cast<double>(1 + rng.index(static_cast<std::size_t>(den)));
        return num / den;
      }
      case Kind::explicit_list: return values_[rng.index(values_.size())];
    }
    return 1.0;
  }

  /// Up to n members of I in [a, b], increasing.
  std::vector<double> grid(double a, double b, std::size_t n) const {
    std::vector<double> out;
    if (!(b >= a) || n == 0) return out;
    auto uniform_in = [&](double lo, double hi) {
      if (lo > hi) return;
      if (n == 1 || lo == hi) {
        out.push_back(lo);
        return;
      }
      for (std::size_t i = 0; i < n; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    };
    switch (kind_) {
      case Kind::interval_01:
        uniform_in(std::max(a, 0.0), std::min(b, 1.0));
        break;
      case Kind::interval_01_open_zero:
      case Kind::rationals_01: {
        const double lo = std::max(a, 0.0), hi = std::min(b, 1.0);
        uniform_in(lo, hi);
        out.erase(std::remove(out.begin(), out.end(), 0.0), out.end());
        if (zero_adjoined_ && a <= 0.0) out.insert(out.begin(), 0.0);
        break;
      }
      case Kind::ray_1:
        uniform_in(std::max(a, 1.0), b);
        if (zero_adjoined_ && a <= 0.0) out.insert(out.begin(), 0.0);
        break;
      case Kind::full_ray:
        uniform_in(std::max(a, 0.0), b);
        break;
      case Kind::positive_ray:
        uniform_in(std::max(a, 0.0), b);
        out.erase(std::remove(out.begin(), out.end(), 0.0), out.end());
        if (zero_adjoined_ && a <= 0.0) out.insert(out.begin(), 0.0);
        break;
      case Kind::geometric: {
        if (zero_adjoined_ && a <= 0.0) out.push_back(0.0);
        if (b <= 0.0) break;
        const double lq = std::log(q_);
        const double e1 = std::log(std::max(a, 1e-300)) / lq, e2 = std::log(b) / lq;
        const long lo = static_cast<long>(std::ceil(std::min(e1, e2) - 1e-9));
        const long hi = static_cast<long>(std::floor(std::max(e1, e2) + 1e-9));
        for (long e = lo; e <= hi && out.size() < n + 1; ++e) {
          const double v = std::pow(q_, static_cast<double>(e));
          if (v >= a * (1 - 1e-12) && v <= b * (1 + 1e-12)) out.push_back(v);
        }
        std::sort(out.begin(), out.end());
        break;
      }
      case Kind::explicit_list:
        if (zero_adjoined_ && a <= 0.0) out.push_back(0.0);
        for (double v : values_)
          if (v >= a && v <= b) out.push_back(v);
        break;
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Members of I converging to `target`, excluding `target` itself,
  /// ordered by decreasing distance. Interval-like sets step by powers of
  /// `ratio`; rationals use continued-fraction convergents for targets
  /// outside the denominator budget. Empty when `target` is isolated in I.
  std::vector<double> approach(double target, int levels, double ratio = 10.0) const {
    if (!in_closure(target))
      throw DomainError("scale " + std::to_string(target) + " is not in the closure of the index set");
    std::vector<double> out;
    if (kind_ == Kind::geometric || kind_ == Kind::explicit_list) {
      if (target == 0.0 && kind_ == Kind::geometric) {
        const double small = q_ < 1.0 ? q_ : 1.0 / q_;
        for (int n = 1; n <= levels; ++n) out.push_back(std::pow(small, n));
      }
      return out;
    }
    if (kind_ == Kind::rationals_01 && !(target == 0.0 || is_budget_rational(target))) {
      for (const auto& [num, den] : convergents(target, 1e12)) {
        const double v = num / den;
        if (v > 0.0 && v <= 1.0 && v != target) out.push_back(v);
        if (static_cast<int>(out.size()) >= levels) break;
      }
      return out;
    }
    for (int n = 1; n <= levels; ++n) {
      const double step = std::pow(ratio, -n);
      const double below = target - step * std::max(1.0, target);
      const double above = target + step * std::max(1.0, target);
      // Prefer the side that lies in the interval hull of I.
      if (above <= upper() && (n % 2 == 0 || below < lower_open_bound()))
        out.push_back(above);
      else if (below >= lower_open_bound() && below > 0.0)
        out.push_back(below);
      else if (above <= upper())
        out.push_back(above);
    }
    return out;
  }

  /// Purity case: 1 when I in [1,inf), 2 when I in [0,1], 3 otherwise
  /// (closed under nonzero division).
  int purity_case() const {
    if (upper() <= 1.0) return 2;
    if (!contains_zero() && lower() >= 1.0) return 1;
    return 3;
  }

  std::string name() const {
    std::string n;
    switch (kind_) {
      case Kind::interval_01: n = "interval_01"; break;
      case Kind::interval_01_open_zero: n = "interval_01_open_zero"; break;
      case Kind::ray_1: n = "ray_1"; break;
      case Kind::full_ray: n = "full_ray"; break;
      case Kind::positive_ray: n = "positive_ray"; break;
      case Kind::geometric: n = "geometric"; break;
      case Kind::rationals_01: n = "rationals_01"; break;
      case Kind::explicit_list: n = "explicit"; break;
    }
    return n;
  }

  Json to_json() const {
    Json j{{"kind", name()}, {"contains_zero", contains_zero()}};
    if (kind_ == Kind::geometric) j["params"] = Json{{"q", q_}};
    if (kind_ == Kind::explicit_list) j["params"] = Json{{"values", values_}};
    if (zero_adjoined_) j["zero_adjoined"] = true;
    return j;
  }

  static IndexSet from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
      throw SpecError("index: missing string key 'kind'");
    const std::string k = j["kind"];
    const Json params = j.value("params", Json::object());
    IndexSet s(Kind::interval_01);
    if (k == "interval_01") s = interval_01();
    else if (k == "interval_01_open_zero") s = interval_01_open_zero();
    else if (k == "ray_1") s = ray_1();
    else if (k == "full_ray") s = full_ray();
    else if (k == "positive_ray") s = positive_ray();
    else if (k == "rationals_01") s = rationals_01();
    else if (k == "geometric") {
      if (!params.contains("q") || !params["q"].is_number())
        throw SpecError("index.params: missing numeric key 'q'");
      s = geometric(params["q"].get<double>());
    } else if (k == "explicit") {
      if (!params.contains("values") || !params["values"].is_array())
        throw SpecError("index.params: missing array key 'values'");
      s = explicit_list(params["values"].get<std::vector<double>>());
    } else {
      throw SpecError("index.kind: unknown index set '" + k + "'");
    }
    if (j.value("contains_zero", false) && !s.contains_zero()) s = s.with_zero();
    return s;
  }

  /// Continued-fraction convergents (p, q) of x with q <= max_den.
  static std::vector<std::pair<double, double>> convergents(double x, double max_den) {
    std::vector<std::pair<double, double>> out;
    double h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
    double r = x;
    for (int i = 0; i < 64; ++i) {
      const double a = std::floor(r);
      const double h = a * h_prev + h_prev2;
      const double k = a * k_prev + k_prev2;
      if (k > max_den) break;
      out.emplace_back(h, k);
      const double frac = r - a;
      if (frac < 1e-15) break;
      r = 1.0 / frac;
      h_prev2 = h_prev;
      h_prev = h;
      k_prev2 = k_prev;
      k_prev = k;
    }
    return out;
  }

  static bool is_budget_rational(double a) {
    for (const auto& [num, den] : convergents(a, kRationalDenominatorBudget))
      if (std::abs(num / den - a) <= 4.0 * std::numeric_limits<double>::epsilon() * a)
        return true;
    return false;
  }

 private:
  explicit IndexSet(Kind k) : kind_(k) {}

  // Smallest member usable when approaching from below (0 only if present).
  double lower_open_bound() const { return contains_zero() ? 0.0 : lower(); }

  Kind kind_;
  double q_ = 2.0;
  std::vector<double> values_;
  bool zero_adjoined_ = false;
};

/// Verifies 1 in I, multiplicative closure and the case-appropriate
/// quotient closure on sampled pairs (all pairs for explicit lists).
inline VerificationReport check_pure_set(const IndexSet& idx, const ToleranceConfig& cfg) {
  cfg.validate();
  VerificationReport rep;
  rep.subject = idx.name();
  const int pcase = idx.purity_case();
  rep.data["purity_case"] = pcase;
  rep.data["index"] = idx.to_json();

  CheckAccumulator one("contains_one", "1 in I", 0.0);
  one.observe(idx.contains(1.0) ? 0.0 : 1.0);

  CheckAccumulator mult("multiplicative_closure", "a, b in I => ab in I", 0.0);
  std::string qanchor = pcase == 1   ? "a < b in I => b/a in I"
                        : pcase == 2 ? "a < b in I => a/b in I"
                                     : "a in I, b in I \\ {0} => a/b in I";
  CheckAccumulator quot("quotient_closure", qanchor, 0.0);

  auto visit = [&](double a, double b) {
    const double prod = a * b;
    mult.observe(idx.contains(prod) ? 0.0 : 1.0,
                 [&] { return Json{{"a", a}, {"b", b}, {"product", prod}}; });
    double q = std::numeric_limits<double>::quiet_NaN();
    bool applicable = false;
    if (pcase == 1 && a < b) {
      q = b / a;
      applicable = true;
    } else if (pcase == 2 && a < b) {
      q = a / b;
      applicable = true;
    } else if (pcase == 3 && b != 0.0) {
      q = a / b;
      applicable = true;
    }
    if (applicable)
      quot.observe(idx.contains(q) ? 0.0 : 1.0,
                   [&] { return Json{{"a", a}, {"b", b}, {"quotient", q}}; });
  };

  if (idx.kind() == IndexSet::Kind::explicit_list) {
    std::vector<double> members = idx.values();
    if (idx.contains_zero() && members.front() != 0.0) members.insert(members.begin(), 0.0);
    for (double a : members)
      for (double b : members) visit(a, b);
  } else {
    Rng rng = Rng::derive(cfg.seed, "pure_set:" + idx.name());
    const auto special = idx.sample(2, rng);
    for (double a : special)
      for (double b : special) visit(a, b);
    for (int i = 0; i < cfg.sample_pairs; ++i) visit(idx.draw(rng), idx.draw(rng));
  }
  rep.add(one.finish());
  rep.add(mult.finish());
  rep.add(quot.finish());
  return rep;
}

}  // namespace dilatia
