#pragma once

// Technique choice seen in the space of real factor prices instead of the
// interest rate. A group of inputs whose quantity ratio is the same in every
// technique that uses it admits a price aggregate F; relative to the rental
// of the remaining input, F traces a curve along which the cost ratio of the
// two techniques is single valued, so the two switch points on the interest
// axis collapse into one.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reswitch/error.hpp"
#include "reswitch/exactmath.hpp"
#include "reswitch/switching.hpp"
#include "reswitch/technology.hpp"

namespace reswitch {

/// A set of input lags (1 = current labor, t >= 2 = capital good of age t-1).
class FactorGroup {
 public:
  explicit FactorGroup(std::vector<std::size_t> lags) : lags_(std::move(lags)) {
    std::sort(lags_.begin(), lags_.end());
    lags_.erase(std::unique(lags_.begin(), lags_.end()), lags_.end());
    if (lags_.empty()) throw InvalidModel("factor group must not be empty");
    if (lags_.front() == 0) throw InvalidModel("factor group lags start at 1");
  }

  const std::vector<std::size_t>& lags() const { return lags_; }
  bool contains(std::size_t lag) const { return std::binary_search(lags_.begin(), lags_.end(), lag); }

  /// Throws unless the group is a nonempty proper subset of 1..horizon.
  void validate(std::size_t horizon) const {
    if (lags_.back() > horizon)
      throw InvalidModel("factor group lag " + std::to_string(lags_.back()) + " exceeds horizon " +
                         std::to_string(horizon));
    if (lags_.size() >= horizon) throw InvalidModel("factor group must be a proper subset of the inputs");
  }

  std::vector<std::size_t> complement(std::size_t horizon) const {
    std::vector<std::size_t> out;
    for (std::size_t t = 1; t <= horizon; ++t)
      if (!contains(t)) out.push_back(t);
    return out;
  }

  std::string to_string() const {
    std::string s;
    for (auto t : lags_) s += (s.empty() ? "" : ",") + std::to_string(t);
    return s;
  }

  friend bool operator==(const FactorGroup&, const FactorGroup&) = default;

 private:
  std::vector<std::size_t> lags_;
};

namespace detail {

inline std::vector<Rational> sub_vector(const Technique& t, const std::vector<std::size_t>& lags) {
  std::vector<Rational> v;
  v.reserve(lags.size());
  for (auto lag : lags) v.push_back(t.labor_at(lag));
  return v;
}

inline bool is_zero_vector(const std::vector<Rational>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& r) { return r.sign() == 0; });
}

// Rank <= 1 test: u and v are proportional (a zero vector is compatible with anything).
inline bool proportional(const std::vector<Rational>& u, const std::vector<Rational>& v) {
  for (std::size_t a = 0; a < u.size(); ++a)
    for (std::size_t b = a + 1; b < u.size(); ++b)
      if (u[a] * v[b] != u[b] * v[a]) return false;
  return true;
}

inline Polynomial bundle_polynomial(const std::vector<std::size_t>& lags, const std::vector<Rational>& bundle,
                                    const Rational& wage) {
  std::vector<Rational> c(lags.empty() ? 1 : lags.back() + 1);
  for (std::size_t k = 0; k < lags.size(); ++k) c[lags[k]] = bundle[k] * wage;
  return Polynomial(std::move(c));
}

}  // namespace detail

/// Discrete Leontief-Sono condition: every technique's within-group input
/// vector is proportional to every other's, so prices outside the group
/// cannot change the group's internal quantity ratio.
inline bool leontief_sono_check(const TechnologySet& ts, const FactorGroup& g) {
  g.validate(ts.horizon());
  for (std::size_t a = 0; a < ts.size(); ++a)
    for (std::size_t b = a + 1; b < ts.size(); ++b)
      if (!detail::proportional(detail::sub_vector(ts[a], g.lags()), detail::sub_vector(ts[b], g.lags())))
        return false;
  return true;
}

/// Index of the first technique with a nonzero input in the group; its
/// within-group vector is the reference bundle priced by F.
inline std::size_t reference_technique(const TechnologySet& ts, const FactorGroup& g) {
  for (std::size_t k = 0; k < ts.size(); ++k)
    if (!detail::is_zero_vector(detail::sub_vector(ts[k], g.lags()))) return k;
  throw NotAggregable("no technique uses factor group {" + g.to_string() + "}");
}

/// First technique whose profile differs from the reference one; the
/// reference itself when there is no other.
inline std::size_t comparison_technique(const TechnologySet& ts, std::size_t reference) {
  for (std::size_t k = 0; k < ts.size(); ++k)
    if (k != reference && !ts[k].same_profile(ts[reference])) return k;
  return reference;
}

inline void require_aggregable(const TechnologySet& ts, const FactorGroup& g) {
  if (!leontief_sono_check(ts, g))
    throw NotAggregable("factor group {" + g.to_string() +
                        "} fails the Leontief-Sono condition: within-group input ratios differ across techniques");
}

/// F as a polynomial in x = 1+i (wage included).
inline Polynomial aggregate_price_polynomial(const TechnologySet& ts, const FactorGroup& g) {
  require_aggregable(ts, g);
  const auto bundle = detail::sub_vector(ts[reference_technique(ts, g)], g.lags());
  return detail::bundle_polynomial(g.lags(), bundle, ts.wage());
}

/// F = sum over the group of reference bundle times input price.
inline Rational aggregate_price(const TechnologySet& ts, const FactorGroup& g, const FactorPricePoint& fp) {
  require_aggregable(ts, g);
  if (fp.horizon() != ts.horizon())
    throw HorizonMismatch("factor prices cover horizon " + std::to_string(fp.horizon()) + ", technology has " +
                          std::to_string(ts.horizon()));
  const auto bundle = detail::sub_vector(ts[reference_technique(ts, g)], g.lags());
  Rational f = 0;
  for (std::size_t k = 0; k < bundle.size(); ++k) f += bundle[k] * fp.input_price(g.lags()[k]);
  return f;
}

/// The single complement lag with positive labor somewhere; its price
/// normalizes F.
inline std::size_t scalar_complement(const TechnologySet& ts, const FactorGroup& g) {
  std::vector<std::size_t> used;
  for (auto lag : g.complement(ts.horizon())) {
    const bool positive =
        std::any_of(ts.techniques().begin(), ts.techniques().end(), [&](const Technique& t) { return t.labor_at(lag).sign() > 0; });
    if (positive) used.push_back(lag);
  }
  if (used.size() != 1)
    throw NonScalarComplement("complement of group {" + g.to_string() + "} holds " + std::to_string(used.size()) +
                              " inputs in use; a scalar relative price needs exactly one");
  return used.front();
}

/// Relative price F / R_c and cost ratio C_ref / C_cmp as polynomial pairs in x.
struct RelativePriceModel {
  Polynomial aggregate;   // F
  Polynomial normalizer;  // price of the complement input
  Polynomial reference_cost;
  Polynomial comparison_cost;
  std::string reference_name;
  std::string comparison_name;

  Rational relative_price(const Rational& x) const { return aggregate(x) / normalizer(x); }
  Rational cost_ratio(const Rational& x) const { return reference_cost(x) / comparison_cost(x); }
};

inline RelativePriceModel relative_price_model(const TechnologySet& ts, const FactorGroup& g) {
  RelativePriceModel m;
  m.aggregate = aggregate_price_polynomial(ts, g);
  m.normalizer = Polynomial::monomial(ts.wage(), scalar_complement(ts, g));
  const std::size_t ref = reference_technique(ts, g);
  const std::size_t cmp = comparison_technique(ts, ref);
  m.reference_cost = cost_polynomial(ts[ref], ts.wage());
  m.comparison_cost = cost_polynomial(ts[cmp], ts.wage());
  m.reference_name = ts[ref].name();
  m.comparison_name = ts[cmp].name();
  return m;
}

struct AggregateCurvePoint {
  Rational interest;
  Rational relative_price;
  Rational cost_ratio;
};

inline std::vector<AggregateCurvePoint> relative_price_curve(const TechnologySet& ts, const FactorGroup& g,
                                                             const std::vector<Rational>& interest_grid) {
  const auto m = relative_price_model(ts, g);
  std::vector<AggregateCurvePoint> out;
  out.reserve(interest_grid.size());
  for (const auto& i : interest_grid) {
    require_admissible_interest(i);
    const Rational x = growth_factor(i);
    out.push_back({i, m.relative_price(x), m.cost_ratio(x)});
  }
  return out;
}

/// Every interest rate in the domain at which F / R_c equals target: the
/// roots of F(x) - target * R_c(x).
inline std::vector<RootInterval> interest_rates_for_relative_price(const TechnologySet& ts, const FactorGroup& g,
                                                                   const Rational& target,
                                                                   const Interval& domain = default_interest_domain()) {
  const auto m = relative_price_model(ts, g);
  const Polynomial level = m.aggregate - m.normalizer.scaled(target);
  std::vector<RootInterval> out;
  for (const auto& r : isolate_real_roots(level, growth_domain(domain))) out.push_back(r.shifted(Rational(-1)));
  if (out.empty())
    throw NoRoot("relative price " + to_string(target) + " is not attained on the interest domain");
  return out;
}

/// Interior minimum of the relative-price curve.
struct CurveMinimum {
  RootInterval interest;  // certificate for the minimizing interest rate
  Rational interest_value;
  Rational relative_price;
  Rational cost_ratio;
};

/// Interior local minimum of F / R_c with the smallest value, if it is also
/// below both domain edges. Non-exact values are evaluated at a root
/// refined to within 1e-12.
inline std::optional<CurveMinimum> relative_price_minimum(const TechnologySet& ts, const FactorGroup& g,
                                                          const Interval& domain = default_interest_domain()) {
  const auto m = relative_price_model(ts, g);
  const Interval xdomain = growth_domain(domain);
  const std::size_t c = m.normalizer.degree_or_zero();
  // sign of d/dx (F / x^c) on x > 0 is the sign of x F' - c F.
  const Polynomial slope = Polynomial::monomial(Rational(1), 1) * m.aggregate.derivative() -
                           m.aggregate.scaled(Rational(static_cast<long>(c)));
  if (slope.is_zero()) return std::nullopt;

  std::optional<CurveMinimum> best;
  for (const auto& r : isolate_real_roots(slope, xdomain)) {
    if (r.parity != Parity::odd) continue;
    const int left = r.exact() ? sign_beside(slope, r.lo, -1) : slope(r.lo).sign();
    if (left >= 0) continue;
    if (r.lo == xdomain.lo || (xdomain.hi && r.hi == *xdomain.hi)) continue;
    const Rational x = r.exact() ? r.lo : refine_root(r, slope, reporting_tolerance());
    CurveMinimum cm{tighten(r, slope, reporting_tolerance()).shifted(Rational(-1)), x - 1, m.relative_price(x),
                    m.cost_ratio(x)};
    if (!best || cm.relative_price < best->relative_price) best = std::move(cm);
  }
  if (!best) return std::nullopt;
  if (m.relative_price(xdomain.lo) < best->relative_price) return std::nullopt;
  if (xdomain.hi && m.relative_price(*xdomain.hi) < best->relative_price) return std::nullopt;
  return best;
}

// ---------------------------------------------------------------------------
// Single-switch verification
// ---------------------------------------------------------------------------

struct Crossing {
  Rational relative_price;
  std::vector<RootInterval> interest_preimages;
};

struct TheoremVerdict {
  std::pair<std::string, std::string> pair;
  std::string group_owner;
  std::optional<FactorGroup> group;
  bool aggregable = false;
  std::optional<bool> single_switch;  // set only when aggregable
  std::optional<Crossing> crossing;
  std::optional<std::string> counterexample;
  std::optional<std::string> precondition_unmet;

  // Evidence
  bool collapse_identity = false;  // ratio == slope * relative_price as polynomials
  Rational ratio_per_relative_price;
  int direction = 0;  // +1 ratio increasing in relative price, -1 decreasing
  std::size_t grid_points = 0;
  std::size_t equal_price_pairs = 0;
  std::size_t preimages_certified = 0;
};

struct VerifyOptions {
  std::size_t grid_points = 3000;
  std::size_t preimage_checks = 64;
};

/// The group whose price aggregate the verification uses when none is
/// given: the larger support of a disjoint pair (the later technique on a tie).
inline FactorGroup default_group(const TechnologySet& ts) {
  if (ts.size() != 2) throw PreconditionUnmet("a default factor group needs exactly two techniques");
  const auto s0 = ts[0].support();
  const auto s1 = ts[1].support();
  return FactorGroup(s0.size() > s1.size() ? s0 : s1);
}

namespace detail {

inline bool disjoint(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> both;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
  return both.empty();
}

inline std::vector<Rational> uniform_grid(const Rational& lo, const Rational& hi, std::size_t points) {
  std::vector<Rational> out;
  if (points == 1) return {lo};
  out.reserve(points);
  const Rational step = (hi - lo) / Rational(static_cast<long>(points - 1));
  for (std::size_t k = 0; k < points; ++k) out.push_back(lo + step * Rational(static_cast<long>(k)));
  return out;
}

}  // namespace detail

/// Checks, for a pair of techniques with disjoint input supports where g is
/// the support of one of them, that in factor-price space the cost ratio is a
/// single-valued, strictly monotone function of the relative price that
/// crosses 1 at most once. Refuses with PreconditionUnmet outside that class.
inline TheoremVerdict verify_single_switch(const TechnologySet& ts, const FactorGroup& g,
                                           const Interval& domain = default_interest_domain(),
                                           const VerifyOptions& options = {}) {
  if (ts.size() != 2) throw PreconditionUnmet("verification needs exactly two techniques");
  const auto s0 = ts[0].support();
  const auto s1 = ts[1].support();
  if (!detail::disjoint(s0, s1))
    throw PreconditionUnmet("techniques '" + ts[0].name() + "' and '" + ts[1].name() + "' share an input");
  std::size_t owner;
  if (g.lags() == s0)
    owner = 0;
  else if (g.lags() == s1)
    owner = 1;
  else
    throw PreconditionUnmet("factor group {" + g.to_string() + "} is not the input support of either technique");
  g.validate(ts.horizon());
  if (!domain.hi) throw DomainError("single-switch verification needs a bounded interest domain");
  if (options.grid_points < 2) throw DomainError("verification grid needs at least two points");

  const Technique& own = ts[owner];
  const Technique& oth = ts[1 - owner];
  TheoremVerdict v;
  v.pair = {ts[0].name(), ts[1].name()};
  v.group_owner = own.name();
  v.group = g;
  v.aggregable = leontief_sono_check(ts, g);
  if (!v.aggregable) return v;

  const Interval xdomain = growth_domain(domain);
  const auto other_lags = oth.support();
  auto other_bundle = detail::sub_vector(oth, other_lags);
  const Rational first = other_bundle.front();
  for (auto& b : other_bundle) b /= first;

  const Polynomial f = detail::bundle_polynomial(g.lags(), detail::sub_vector(own, g.lags()), ts.wage());
  const Polynomial norm = detail::bundle_polynomial(other_lags, other_bundle, ts.wage());
  const Polynomial c_own = cost_polynomial(own, ts.wage());
  const Polynomial c_oth = cost_polynomial(oth, ts.wage());

  const auto fail = [&v](std::string why) {
    if (!v.counterexample) v.counterexample = std::move(why);
  };

  // Collapse identity: C_own * norm == k * F * C_oth for one constant k.
  const Polynomial lhs = c_own * norm;
  const Polynomial rhs = f * c_oth;
  v.ratio_per_relative_price = lhs.leading() / rhs.leading();
  v.collapse_identity = lhs == rhs.scaled(v.ratio_per_relative_price);
  if (!v.collapse_identity) fail("cost ratio is not proportional to the relative factor price");

  // Exact grid: ratio must be a strictly monotone function of relative price.
  struct Sample {
    Rational x, rho, ratio;
  };
  std::vector<Sample> samples;
  for (const auto& x : detail::uniform_grid(xdomain.lo, *xdomain.hi, options.grid_points))
    samples.push_back({x, f(x) / norm(x), c_own(x) / c_oth(x)});
  v.grid_points = samples.size();
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return samples[a].rho < samples[b].rho; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const Sample& a = samples[order[k - 1]];
    const Sample& b = samples[order[k]];
    if (a.rho == b.rho) {
      ++v.equal_price_pairs;
      if (a.ratio != b.ratio)
        fail("relative price " + to_string(a.rho) + " at x = " + to_string(a.x) + " and x = " + to_string(b.x) +
             " gives cost ratios " + to_string(a.ratio) + " and " + to_string(b.ratio));
      continue;
    }
    const int dir = (b.ratio > a.ratio) - (b.ratio < a.ratio);
    if (dir == 0 || (v.direction != 0 && dir != v.direction))
      fail("cost ratio not strictly monotone in relative price between x = " + to_string(a.x) + " and x = " +
           to_string(b.x));
    if (v.direction == 0) v.direction = dir;
  }

  // Every other interest rate sharing a sampled relative price must share its cost ratio.
  const std::size_t stride = std::max<std::size_t>(1, samples.size() / std::max<std::size_t>(1, options.preimage_checks));
  for (std::size_t k = 0; k < samples.size() && options.preimage_checks > 0; k += stride) {
    const Sample& s = samples[k];
    const Polynomial level = f - norm.scaled(s.rho);
    const Polynomial same_ratio = c_own - c_oth.scaled(s.ratio);
    for (const auto& r : isolate_real_roots(level, xdomain)) {
      if (r.exact() && r.lo == s.x) continue;
      if (!r.exact() && r.lo <= s.x && s.x <= r.hi) continue;
      if (vanishes_at(same_ratio, level, r))
        ++v.preimages_certified;
      else
        fail("relative price " + to_string(s.rho) + " is reached near x = " + to_decimal(r.midpoint(), 9) +
             " with a cost ratio different from " + to_string(s.ratio));
    }
  }

  // Crossing of ratio 1: every interest switch point must map to one relative price.
  const Polynomial tie = c_own - c_oth;
  const auto switches = isolate_real_roots(tie, xdomain);
  if (!switches.empty() && v.collapse_identity) {
    Crossing cross{Rational(1) / v.ratio_per_relative_price, {}};
    const Polynomial level = f - norm.scaled(cross.relative_price);
    for (const auto& r : switches) {
      if (!vanishes_at(level, tie, r))
        fail("switch point near i = " + to_decimal(r.midpoint() - 1, 9) + " maps to a relative price other than " +
             to_string(cross.relative_price));
      cross.interest_preimages.push_back(r.shifted(Rational(-1)));
    }
    v.crossing = std::move(cross);
  }

  v.single_switch = !v.counterexample.has_value();
  return v;
}

}  // namespace reswitch
