#pragma once

// Dated-labor production model. A technique is the labor it applies t periods
// before one unit of output is finished; its unit cost at interest i
// compounds each dated input by (1+i)^t. All polynomials here are in the
// variable x = 1+i.

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "reswitch/error.hpp"
#include "reswitch/exactmath.hpp"

namespace reswitch {

inline Rational growth_factor(const Rational& interest) { return interest + 1; }

inline void require_admissible_interest(const Rational& interest) {
  if (interest <= -1)
    throw DomainError("interest rate " + to_string(interest) + " is at or below -100%");
}

class Technique {
 public:
  /// labor[t-1] is the labor applied t periods before completion, t = 1..T.
  Technique(std::string name, std::vector<Rational> labor) : name_(std::move(name)), labor_(std::move(labor)) {
    if (name_.empty()) throw InvalidModel("technique name must not be empty");
    if (labor_.empty()) throw InvalidModel("technique '" + name_ + "' has an empty labor profile");
    bool any_positive = false;
    for (std::size_t t = 0; t < labor_.size(); ++t) {
      if (labor_[t].sign() < 0)
        throw InvalidModel("technique '" + name_ + "' has negative labor at lag " + std::to_string(t + 1));
      any_positive = any_positive || labor_[t].sign() > 0;
    }
    if (!any_positive) throw InvalidModel("technique '" + name_ + "' uses no labor at all");
  }

  const std::string& name() const { return name_; }
  std::size_t horizon() const { return labor_.size(); }
  const std::vector<Rational>& labor() const { return labor_; }

  /// L_t for t >= 1; zero past the horizon.
  Rational labor_at(std::size_t lag) const {
    if (lag == 0 || lag > labor_.size()) return 0;
    return labor_[lag - 1];
  }

  /// Lags carrying positive labor, ascending.
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (std::size_t t = 0; t < labor_.size(); ++t)
      if (labor_[t].sign() > 0) s.push_back(t + 1);
    return s;
  }

  Technique padded(std::size_t horizon) const {
    if (horizon < labor_.size()) {
      for (std::size_t t = horizon; t < labor_.size(); ++t)
        if (labor_[t].sign() != 0)
          throw HorizonMismatch("cannot truncate technique '" + name_ + "' to horizon " + std::to_string(horizon));
    }
    std::vector<Rational> v = labor_;
    v.resize(horizon);
    return Technique(name_, std::move(v));
  }

  /// Same labor profile after padding both to a common horizon.
  bool same_profile(const Technique& other) const {
    const std::size_t n = std::max(horizon(), other.horizon());
    for (std::size_t t = 1; t <= n; ++t)
      if (labor_at(t) != other.labor_at(t)) return false;
    return true;
  }

 private:
  std::string name_;
  std::vector<Rational> labor_;
};

/// A finite menu of techniques for the same output, padded to a common
/// horizon, with the ante-factum wage and the output price (numeraire).
class TechnologySet {
 public:
  explicit TechnologySet(std::vector<Technique> techniques, Rational wage = 1, Rational output_price = 1)
      : wage_(std::move(wage)), output_price_(std::move(output_price)) {
    if (techniques.empty()) throw InvalidModel("technology set needs at least one technique");
    if (wage_.sign() <= 0) throw InvalidModel("wage must be positive");
    if (output_price_.sign() <= 0) throw InvalidModel("output price must be positive");
    std::set<std::string> names;
    for (const auto& t : techniques) {
      if (!names.insert(t.name()).second) throw InvalidModel("duplicate technique name '" + t.name() + "'");
      horizon_ = std::max(horizon_, t.horizon());
    }
    techniques_.reserve(techniques.size());
    for (const auto& t : techniques) techniques_.push_back(t.padded(horizon_));
  }

  const std::vector<Technique>& techniques() const { return techniques_; }
  std::size_t size() const { return techniques_.size(); }
  const Technique& operator[](std::size_t k) const { return techniques_[k]; }
  std::size_t horizon() const { return horizon_; }
  const Rational& wage() const { return wage_; }
  const Rational& output_price() const { return output_price_; }

  const Technique& find(const std::string& name) const {
    for (const auto& t : techniques_)
      if (t.name() == name) return t;
    throw InvalidModel("no technique named '" + name + "'");
  }

 private:
  std::vector<Technique> techniques_;
  std::size_t horizon_ = 0;
  Rational wage_;
  Rational output_price_;
};

/// Prices of every input at one interest rate: the post-factum wage
/// w_L = w(1+i), and for the capital good of age t (t = 1..T-1) its asset
/// price p_Kt = w(1+i)^t and rental R_t = p_Kt (1+i) = w(1+i)^(t+1).
struct FactorPricePoint {
  Rational interest;
  Rational post_factum_wage;
  std::vector<Rational> asset_prices;  // [t-1] holds p_Kt
  std::vector<Rational> rentals;       // [t-1] holds R_t

  std::size_t horizon() const { return rentals.size() + 1; }
  const Rational& rental(std::size_t age) const { return rentals.at(age - 1); }
  const Rational& asset_price(std::size_t age) const { return asset_prices.at(age - 1); }

  /// Price of the input applied `lag` periods back: w_L for lag 1, R_{lag-1} otherwise.
  const Rational& input_price(std::size_t lag) const { return lag == 1 ? post_factum_wage : rental(lag - 1); }
};

/// c(w, i) = sum_t w (1+i)^t L_t as a polynomial in x = 1+i.
inline Polynomial cost_polynomial(const Technique& t, const Rational& wage = 1) {
  std::vector<Rational> c(t.horizon() + 1);
  for (std::size_t lag = 1; lag <= t.horizon(); ++lag) c[lag] = wage * t.labor_at(lag);
  return Polynomial(std::move(c));
}

inline Rational cost_at(const Technique& t, const Rational& wage, const Rational& interest) {
  require_admissible_interest(interest);
  return cost_polynomial(t, wage)(growth_factor(interest));
}

inline FactorPricePoint factor_prices(std::size_t horizon, const Rational& wage, const Rational& interest) {
  require_admissible_interest(interest);
  if (horizon == 0) throw HorizonMismatch("factor prices need a horizon of at least 1");
  const Rational x = growth_factor(interest);
  FactorPricePoint fp;
  fp.interest = interest;
  fp.post_factum_wage = wage * x;
  Rational asset = wage * x;
  for (std::size_t age = 1; age < horizon; ++age) {
    fp.asset_prices.push_back(asset);
    fp.rentals.push_back(asset * x);
    asset *= x;
  }
  return fp;
}

/// Unit cost in structural form: w_L a_L + sum_t R_t a_Kt, where a_L = L_1
/// and the capital good of age t embodies a_Kt = L_{t+1}.
inline Rational structural_cost(const Technique& t, const FactorPricePoint& fp) {
  if (fp.horizon() != t.horizon())
    throw HorizonMismatch("technique '" + t.name() + "' has horizon " + std::to_string(t.horizon()) +
                          " but factor prices cover " + std::to_string(fp.horizon()));
  Rational cost = fp.post_factum_wage * t.labor_at(1);
  for (std::size_t age = 1; age < t.horizon(); ++age) cost += fp.rental(age) * t.labor_at(age + 1);
  return cost;
}

struct WagePoint {
  Rational interest;
  Rational real_wage;
};

/// Real wage that makes unit cost equal the output price at each interest rate.
inline std::vector<WagePoint> wage_interest_curve(const Technique& t, const Rational& output_price,
                                                  const std::vector<Rational>& interest_grid) {
  const Polynomial unit = cost_polynomial(t);
  std::vector<WagePoint> out;
  out.reserve(interest_grid.size());
  for (const auto& i : interest_grid) {
    require_admissible_interest(i);
    out.push_back({i, output_price / unit(growth_factor(i))});
  }
  return out;
}

}  // namespace reswitch
