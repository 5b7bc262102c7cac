#pragma once

// Complementary input pairs in a discrete technology. Prices here are free
// positive numbers per input lag, not tied to the (1+i)^t path: raising one
// price alone and watching the cost-minimizing input vector is what detects
// complementarity.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reswitch/error.hpp"
#include "reswitch/exactmath.hpp"
#include "reswitch/technology.hpp"

namespace reswitch {

/// Positive price per input lag; index 0 is lag 1.
class PriceVector {
 public:
  explicit PriceVector(std::vector<Rational> prices) : prices_(std::move(prices)) {
    for (std::size_t k = 0; k < prices_.size(); ++k)
      if (prices_[k].sign() <= 0) throw DomainError("price of input " + std::to_string(k + 1) + " must be positive");
  }

  const std::vector<Rational>& values() const { return prices_; }
  std::size_t size() const { return prices_.size(); }
  const Rational& at(std::size_t lag) const { return prices_.at(lag - 1); }

  PriceVector with(std::size_t lag, const Rational& price) const {
    std::vector<Rational> v = prices_;
    v.at(lag - 1) = price;
    return PriceVector(std::move(v));
  }

  PriceVector scaled(const Rational& factor) const {
    std::vector<Rational> v = prices_;
    for (auto& p : v) p *= factor;
    return PriceVector(std::move(v));
  }

 private:
  std::vector<Rational> prices_;
};

inline Rational input_cost(const Technique& t, const PriceVector& p) {
  Rational c = 0;
  for (std::size_t lag = 1; lag <= t.horizon(); ++lag) c += t.labor_at(lag) * p.at(lag);
  return c;
}

struct Choice {
  std::string technique;
  std::vector<Rational> inputs;
  Rational cost;
  std::vector<std::string> tied;  // every technique at the minimum (size 1 when strict)

  bool tie() const { return tied.size() > 1; }
};

/// Cost-minimizing input vector at prices p. Ties go to the
/// lexicographically first name and are reported in `tied`.
inline Choice chosen_input_vector(const TechnologySet& ts, const PriceVector& p) {
  if (p.size() != ts.horizon())
    throw HorizonMismatch("price vector has " + std::to_string(p.size()) + " entries, technology horizon is " +
                          std::to_string(ts.horizon()));
  std::optional<Choice> best;
  for (const auto& t : ts.techniques()) {
    Rational c = input_cost(t, p);
    if (!best || c < best->cost) {
      best = Choice{t.name(), t.labor(), std::move(c), {t.name()}};
    } else if (c == best->cost) {
      best->tied.push_back(t.name());
      if (t.name() < best->technique) {
        best->technique = t.name();
        best->inputs = t.labor();
      }
    }
  }
  std::sort(best->tied.begin(), best->tied.end());
  return *best;
}

/// Raising the price of input `raised` from base to raised_price moves the
/// chosen technique to one that uses strictly less of input `reduced`.
struct ComplementarityWitness {
  std::size_t raised = 0;   // j, 1-based lag
  std::size_t reduced = 0;  // k, 1-based lag
  PriceVector base_prices{{}};
  Rational raised_price;
  std::string technique_before;
  std::string technique_after;
  std::vector<Rational> demand_before;
  std::vector<Rational> demand_after;
};

struct PriceGrid {
  std::size_t points_per_axis = 50;
  double lo = 0.1;
  double hi = 10.0;

  /// Log-spaced values, each rounded to 6 decimals and held exactly.
  std::vector<Rational> values() const {
    std::vector<Rational> v;
    v.reserve(points_per_axis);
    for (std::size_t s = 0; s < points_per_axis; ++s) {
      const double frac = points_per_axis == 1 ? 0.0 : static_cast<double>(s) / static_cast<double>(points_per_axis - 1);
      const double value = lo * std::pow(hi / lo, frac);
      v.emplace_back(static_cast<long long>(std::llround(value * 1e6)), 1000000LL);
    }
    return v;
  }

  std::string describe(std::size_t dims) const {
    return std::to_string(points_per_axis) + "^" + std::to_string(dims) + " log-spaced grid on [" +
           to_decimal(Rational(static_cast<long long>(std::llround(lo * 1e6)), 1000000LL), 6) + ", " +
           to_decimal(Rational(static_cast<long long>(std::llround(hi * 1e6)), 1000000LL), 6) + "]";
  }
};

struct WitnessSearch {
  std::optional<ComplementarityWitness> witness;
  std::string region;  // what was searched
};

namespace detail {

// Techniques with distinct input vectors, first name kept.
inline std::vector<const Technique*> distinct_profiles(const TechnologySet& ts) {
  std::vector<const Technique*> out;
  for (const auto& t : ts.techniques()) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const Technique* o) { return o->same_profile(t); });
    if (!seen) out.push_back(&t);
  }
  return out;
}

inline std::optional<ComplementarityWitness> confirm(const TechnologySet& ts, std::size_t j, std::size_t k,
                                                     const PriceVector& base, const Rational& raised_price) {
  const Choice before = chosen_input_vector(ts, base);
  const Choice after = chosen_input_vector(ts, base.with(j, raised_price));
  if (before.tie() || after.tie()) return std::nullopt;
  if (!(raised_price > base.at(j))) return std::nullopt;
  if (!(after.inputs[k - 1] < before.inputs[k - 1])) return std::nullopt;
  return ComplementarityWitness{j,           k,          base,          raised_price, before.technique,
                                after.technique, before.inputs, after.inputs};
}

// Two techniques: the switch locus is the hyperplane p . (h - l) = 0.
inline WitnessSearch analytic_witness(const TechnologySet& ts, const Technique& first, const Technique& second,
                                      std::size_t j, std::size_t k) {
  WitnessSearch out;
  out.region = "analytic: switch hyperplane between '" + first.name() + "' and '" + second.name() + "'";
  const Rational dk = first.labor_at(k) - second.labor_at(k);
  if (dk.sign() == 0) return out;
  const Technique& heavy = dk.sign() > 0 ? first : second;  // more of input k
  const Technique& light = dk.sign() > 0 ? second : first;
  const std::size_t n = ts.horizon();
  std::vector<Rational> d(n);
  Rational pos = 0;
  Rational neg = 0;
  for (std::size_t t = 1; t <= n; ++t) {
    d[t - 1] = heavy.labor_at(t) - light.labor_at(t);
    if (d[t - 1].sign() > 0) pos += d[t - 1];
    if (d[t - 1].sign() < 0) neg -= d[t - 1];
  }
  // Raising p_j must make the heavy technique relatively dearer, and the
  // heavy technique must win strictly somewhere to start from.
  if (d[j - 1].sign() <= 0 || neg.sign() == 0) return out;

  // Unit prices on inputs where light uses more, a common small price on
  // the rest, chosen so heavy is strictly cheaper.
  const Rational eps = std::min(Rational(1), neg / (2 * pos));
  std::vector<Rational> p(n);
  for (std::size_t t = 0; t < n; ++t) p[t] = d[t].sign() > 0 ? eps : Rational(1);
  Rational gap = 0;  // cost(heavy) - cost(light) < 0
  for (std::size_t t = 0; t < n; ++t) gap += p[t] * d[t];
  const PriceVector base(std::move(p));
  // Cross the hyperplane by the same distance again on the far side.
  const Rational raised = base.at(j) - 2 * gap / d[j - 1];
  out.witness = confirm(ts, j, k, base, raised);
  return out;
}

}  // namespace detail

/// Searches for a price vector and a rise in p_j alone that lowers the
/// chosen demand for input k. Exact for two distinct techniques; with three
/// or more, scans the price grid: for each setting of the other prices, p_j
/// is swept upward and a witness is any drop below the largest k-demand seen.
inline WitnessSearch complementarity_witness(const TechnologySet& ts, std::size_t j, std::size_t k,
                                             const PriceGrid& grid = {}) {
  if (j == k) throw DomainError("complementarity needs two different inputs");
  if (j == 0 || k == 0 || j > ts.horizon() || k > ts.horizon())
    throw DomainError("input lag outside the technology horizon");
  const auto distinct = detail::distinct_profiles(ts);
  if (distinct.size() == 1) return {std::nullopt, "single technique: demand does not respond to prices"};
  if (distinct.size() == 2) return detail::analytic_witness(ts, *distinct[0], *distinct[1], j, k);

  WitnessSearch out;
  const std::size_t n = ts.horizon();
  out.region = grid.describe(n);
  const auto values = grid.values();
  const std::size_t m = values.size();
  std::vector<std::size_t> others;
  for (std::size_t t = 1; t <= n; ++t)
    if (t != j) others.push_back(t);

  std::vector<std::size_t> idx(others.size(), 0);
  while (true) {
    std::vector<Rational> p(n);
    for (std::size_t a = 0; a < others.size(); ++a) p[others[a] - 1] = values[idx[a]];
    // Costs are affine in p_j: fixed part plus slope * p_j.
    std::vector<Rational> fixed;
    for (const auto* t : distinct) {
      Rational c = 0;
      for (auto lag : others) c += t->labor_at(lag) * p[lag - 1];
      fixed.push_back(std::move(c));
    }
    std::optional<std::size_t> peak_step;  // step of the largest strict k-demand so far
    Rational peak_demand = -1;
    for (std::size_t s = 0; s < m; ++s) {
      std::size_t best = 0;
      Rational best_cost = fixed[0] + distinct[0]->labor_at(j) * values[s];
      bool strict = true;
      for (std::size_t q = 1; q < distinct.size(); ++q) {
        const Rational c = fixed[q] + distinct[q]->labor_at(j) * values[s];
        if (c < best_cost) {
          best = q;
          best_cost = c;
          strict = true;
        } else if (c == best_cost) {
          strict = false;
        }
      }
      if (!strict) continue;
      const Rational demand = distinct[best]->labor_at(k);
      if (peak_step && demand < peak_demand) {
        p[j - 1] = values[*peak_step];
        out.witness = detail::confirm(ts, j, k, PriceVector(p), values[s]);
        if (out.witness) return out;
      }
      if (demand > peak_demand) {
        peak_demand = demand;
        peak_step = s;
      }
    }
    std::size_t a = 0;
    while (a < idx.size() && ++idx[a] == m) idx[a++] = 0;
    if (a == idx.size()) break;
  }
  return out;
}

struct ComplementaryPair {
  std::size_t raised;
  std::size_t reduced;
  ComplementarityWitness witness;
};

/// Every ordered input pair (j, k) with a witness.
inline std::vector<ComplementaryPair> complementary_pairs(const TechnologySet& ts, const PriceGrid& grid = {}) {
  std::vector<ComplementaryPair> out;
  for (std::size_t j = 1; j <= ts.horizon(); ++j)
    for (std::size_t k = 1; k <= ts.horizon(); ++k) {
      if (j == k) continue;
      auto search = complementarity_witness(ts, j, k, grid);
      if (search.witness) out.push_back({j, k, std::move(*search.witness)});
    }
  return out;
}

}  // namespace reswitch
