#pragma once

// Switch points between techniques, the cost-minimizing dominance map over
// the interest axis, and reswitching detection.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reswitch/error.hpp"
#include "reswitch/exactmath.hpp"
#include "reswitch/technology.hpp"

namespace reswitch {

/// i in [0, 2]: every rate in the champagne tables (0% to 200%).
inline Interval default_interest_domain() { return Interval{Rational(0), Rational(2)}; }

/// Maps an interest-rate domain onto the x = 1+i axis.
inline Interval growth_domain(const Interval& interest_domain) {
  require_admissible_interest(interest_domain.lo);
  if (interest_domain.hi && *interest_domain.hi < interest_domain.lo)
    throw DomainError("empty interest domain [" + to_string(interest_domain.lo) + ", " +
                      to_string(*interest_domain.hi) + "]");
  return interest_domain.shifted(Rational(1));
}

/// Rational used when an irrational switch point has to be priced.
inline Rational reporting_tolerance() { return Rational(1, 1000000000000LL); }

struct SwitchPoint {
  RootInterval interest;  // certificate on the interest axis
  std::vector<std::string> cheaper_below;
  std::vector<std::string> cheaper_above;
  std::vector<std::string> tied;
  Rational tie_cost;  // exact when interest.exact(), else evaluated at a refined root

  bool exact() const { return interest.exact(); }
};

/// Odd-parity roots of c_a - c_b inside the interest domain. The difference
/// is homogeneous in the wage, so the result does not depend on it.
inline std::vector<SwitchPoint> pairwise_switch_points(const Technique& a, const Technique& b,
                                                       const Interval& domain = default_interest_domain()) {
  const std::size_t horizon = std::max(a.horizon(), b.horizon());
  const Polynomial ca = cost_polynomial(a.padded(horizon));
  const Polynomial diff = ca - cost_polynomial(b.padded(horizon));
  if (diff.is_zero())
    throw IdenticalTechniques("techniques '" + a.name() + "' and '" + b.name() + "' have identical costs");

  std::vector<SwitchPoint> out;
  for (const auto& root : isolate_real_roots(diff, growth_domain(domain))) {
    if (root.parity != Parity::odd) continue;
    const int below = root.exact() ? sign_beside(diff, root.lo, -1) : diff(root.lo).sign();
    const Rational at = root.exact() ? root.lo : refine_root(root, diff, reporting_tolerance());
    SwitchPoint sp;
    sp.interest = root.shifted(Rational(-1));
    sp.cheaper_below = {below < 0 ? a.name() : b.name()};
    sp.cheaper_above = {below < 0 ? b.name() : a.name()};
    sp.tied = {a.name(), b.name()};
    sp.tie_cost = ca(at);
    out.push_back(std::move(sp));
  }
  return out;
}

struct Segment {
  RootInterval lower;                 // exact at the domain edge
  std::optional<RootInterval> upper;  // empty for an unbounded domain
  std::vector<std::string> winners;   // several names only for identical techniques
};

/// A point where the cost-minimizing technique touches another one without
/// being displaced.
struct Tangency {
  RootInterval interest;
  std::vector<std::string> techniques;
};

struct DominanceMap {
  Interval domain;
  std::vector<Segment> segments;
  std::vector<SwitchPoint> switches;  // switches[k] separates segments[k] and segments[k+1]
  std::vector<Tangency> tangencies;

  /// Winners at an interest rate that lies strictly inside a segment, or
  /// nullopt when it falls in a boundary certificate or outside the domain.
  std::optional<std::vector<std::string>> winners_at(const Rational& interest) const {
    if (!domain.contains(interest)) return std::nullopt;
    for (std::size_t k = 0; k < segments.size(); ++k) {
      const auto& s = segments[k];
      const bool after_lower = k == 0 ? interest >= s.lower.lo : interest > s.lower.hi;
      const bool before_upper = !s.upper || (k + 1 == segments.size() ? interest <= s.upper->hi : interest < s.upper->lo);
      if (after_lower && before_upper) return s.winners;
    }
    return std::nullopt;
  }
};

namespace detail {

struct CostClass {
  std::vector<std::string> names;
  Polynomial cost;
};

inline std::vector<CostClass> cost_classes(const TechnologySet& ts) {
  std::vector<CostClass> classes;
  std::vector<const Technique*> reps;
  for (const auto& t : ts.techniques()) {
    bool merged = false;
    for (std::size_t k = 0; k < reps.size() && !merged; ++k) {
      if (reps[k]->same_profile(t)) {
        classes[k].names.push_back(t.name());
        merged = true;
      }
    }
    if (!merged) {
      reps.push_back(&t);
      classes.push_back({{t.name()}, cost_polynomial(t)});
    }
  }
  return classes;
}

inline std::size_t cheapest(const std::vector<CostClass>& classes, const Rational& x) {
  std::size_t best = 0;
  Rational best_cost = classes[0].cost(x);
  for (std::size_t k = 1; k < classes.size(); ++k) {
    Rational c = classes[k].cost(x);
    if (c < best_cost) {
      best = k;
      best_cost = std::move(c);
    }
  }
  return best;
}

inline Rational sample_between(const Rational& left, const Rational& right) {
  return left == right ? left : (left + right) / 2;
}

}  // namespace detail

/// Partition of the interest domain by cost-minimizing technique. Switch
/// candidates are the roots of every pairwise cost difference; winners are
/// decided by exact evaluation at a rational point inside each gap.
inline DominanceMap dominance_map(const TechnologySet& ts, const Interval& domain = default_interest_domain()) {
  const Interval xdomain = growth_domain(domain);
  const auto classes = detail::cost_classes(ts);
  const Rational minus_one(-1);

  DominanceMap map;
  map.domain = domain;
  const RootInterval lower_edge{domain.lo, domain.lo, Parity::odd};
  std::optional<RootInterval> upper_edge;
  if (domain.hi) upper_edge = RootInterval{*domain.hi, *domain.hi, Parity::odd};

  if (classes.size() == 1) {
    map.segments.push_back({lower_edge, upper_edge, classes[0].names});
    return map;
  }

  Polynomial product = Polynomial::constant(1);
  for (std::size_t a = 0; a < classes.size(); ++a)
    for (std::size_t b = a + 1; b < classes.size(); ++b)
      product = product * square_free_part(classes[a].cost - classes[b].cost);
  const Polynomial candidates = square_free_part(product);
  const auto roots = isolate_real_roots(candidates, xdomain);

  // Gap g lies between roots[g-1] and roots[g]; gaps 0 and roots.size() touch the domain edges.
  std::vector<std::pair<std::size_t, std::size_t>> gap_winner;  // (gap index, class)
  for (std::size_t g = 0; g <= roots.size(); ++g) {
    const Rational left = g == 0 ? xdomain.lo : roots[g - 1].hi;
    std::optional<Rational> right;
    if (g < roots.size())
      right = roots[g].lo;
    else if (xdomain.hi)
      right = *xdomain.hi;
    if (g == 0 && !roots.empty() && roots[0].exact() && roots[0].lo == xdomain.lo) continue;
    if (g == roots.size() && g > 0 && right && roots[g - 1].exact() && roots[g - 1].lo == *right) continue;
    const Rational sample = right ? detail::sample_between(left, *right) : Rational(left + 1);
    gap_winner.emplace_back(g, detail::cheapest(classes, sample));
  }

  const auto tied_at = [&](const RootInterval& root, std::size_t winner) {
    std::vector<std::string> tied;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const bool same = c == winner || vanishes_at(classes[c].cost - classes[winner].cost, candidates, root);
      if (same) tied.insert(tied.end(), classes[c].names.begin(), classes[c].names.end());
    }
    return tied;
  };

  Segment current{lower_edge, std::nullopt, classes[gap_winner.front().second].names};
  std::size_t current_class = gap_winner.front().second;
  for (std::size_t k = 1; k < gap_winner.size(); ++k) {
    const auto [gap, winner] = gap_winner[k];
    const RootInterval& root = roots[gap - 1];
    auto tied = tied_at(root, current_class);
    if (winner == current_class) {
      if (tied.size() > classes[current_class].names.size())
        map.tangencies.push_back({root.shifted(minus_one), std::move(tied)});
      continue;
    }
    const Rational at = root.exact() ? root.lo : refine_root(root, candidates, reporting_tolerance());
    SwitchPoint sp;
    sp.interest = root.shifted(minus_one);
    sp.interest.parity = Parity::odd;
    sp.cheaper_below = classes[current_class].names;
    sp.cheaper_above = classes[winner].names;
    sp.tied = std::move(tied);
    sp.tie_cost = classes[current_class].cost(at) * ts.wage();
    current.upper = sp.interest;
    map.segments.push_back(std::move(current));
    current = Segment{sp.interest, std::nullopt, classes[winner].names};
    current_class = winner;
    map.switches.push_back(std::move(sp));
  }
  current.upper = upper_edge;
  map.segments.push_back(std::move(current));
  return map;
}

struct ReswitchReport {
  bool reswitching = false;
  std::optional<std::string> recurring_technique;
  DominanceMap evidence;
  std::vector<std::string> notes;
};

/// A technique reswitches when it wins on two segments that are not adjacent.
inline ReswitchReport detect_reswitching(const TechnologySet& ts, const Interval& domain = default_interest_domain()) {
  ReswitchReport report;
  report.evidence = dominance_map(ts, domain);
  const auto& segs = report.evidence.segments;
  for (std::size_t a = 0; a < segs.size() && !report.reswitching; ++a) {
    for (std::size_t b = a + 2; b < segs.size() && !report.reswitching; ++b) {
      for (const auto& name : segs[a].winners) {
        if (std::find(segs[b].winners.begin(), segs[b].winners.end(), name) != segs[b].winners.end()) {
          report.reswitching = true;
          report.recurring_technique = name;
          break;
        }
      }
    }
  }
  for (const auto& t : report.evidence.tangencies) {
    std::string who;
    for (const auto& n : t.techniques) who += (who.empty() ? "" : ",") + n;
    report.notes.push_back("tangency without switch near i = " + to_decimal(t.interest.midpoint(), 6) + " among {" +
                           who + "}");
  }
  return report;
}

struct RatioPoint {
  Rational interest;
  Rational ratio;
};

/// cost(num) / cost(den) at each interest rate, with unit wage.
inline std::vector<RatioPoint> cost_ratio_curve(const Technique& num, const Technique& den,
                                                const std::vector<Rational>& interest_grid) {
  const Polynomial cn = cost_polynomial(num);
  const Polynomial cd = cost_polynomial(den);
  std::vector<RatioPoint> out;
  out.reserve(interest_grid.size());
  for (const auto& i : interest_grid) {
    require_admissible_interest(i);
    const Rational x = growth_factor(i);
    const Rational d = cd(x);
    if (d.sign() == 0) throw DivisionByZero("cost of '" + den.name() + "' vanishes at i = " + to_string(i));
    out.push_back({i, cn(x) / d});
  }
  return out;
}

}  // namespace reswitch
