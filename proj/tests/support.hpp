#pragma once

// Hand-rolled generators and independent oracles shared by the test suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "reswitch/reswitch.hpp"

namespace testing_support {

using reswitch::Polynomial;
using reswitch::Rational;
using reswitch::Technique;
using reswitch::TechnologySet;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(engine_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine_); }

  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(integer(0, static_cast<long>(items.size()) - 1))];
  }

  /// num / den with num in [lo, hi] and den drawn from dens.
  Rational rational(long lo, long hi, const std::vector<long>& dens = {1, 2, 3, 4, 5, 8}) {
    return Rational(integer(lo, hi), pick(dens));
  }

  Polynomial polynomial(std::size_t max_degree, long bound) {
    std::vector<Rational> c(static_cast<std::size_t>(integer(0, static_cast<long>(max_degree))) + 1);
    for (auto& v : c) v = rational(-bound, bound, {1, 2, 3});
    if (c.back() == 0) c.back() = 1;
    return Polynomial(c);
  }

  /// Nonnegative labor profile with at least one positive entry.
  std::vector<Rational> labor(std::size_t horizon, long max_numerator = 10) {
    std::vector<Rational> v(horizon);
    for (auto& x : v) x = coin(0.3) ? Rational(0) : rational(0, max_numerator, {1, 2, 4});
    if (std::all_of(v.begin(), v.end(), [](const Rational& r) { return r == 0; }))
      v[static_cast<std::size_t>(integer(0, static_cast<long>(horizon) - 1))] = rational(1, max_numerator, {1, 2, 4});
    return v;
  }

  Technique technique(const std::string& name, std::size_t horizon) { return Technique(name, labor(horizon)); }

  /// Two techniques on disjoint, jointly exhaustive supports.
  TechnologySet disjoint_pair(std::size_t horizon) {
    std::vector<Rational> a(horizon);
    std::vector<Rational> b(horizon);
    const std::size_t first = static_cast<std::size_t>(integer(0, static_cast<long>(horizon) - 1));
    std::size_t second = static_cast<std::size_t>(integer(0, static_cast<long>(horizon) - 2));
    if (second >= first) ++second;
    a[first] = rational(1, 12, {1, 2, 4});
    b[second] = rational(1, 12, {1, 2, 4});
    for (std::size_t t = 0; t < horizon; ++t) {
      if (t == first || t == second) continue;
      auto& side = coin() ? a : b;
      side[t] = coin(0.25) ? Rational(0) : rational(1, 12, {1, 2, 4});
    }
    return TechnologySet({Technique("a", a), Technique("b", b)});
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// A root found by the sign-scan oracle: exact when it sits on a grid point.
struct ScannedRoot {
  bool on_grid = false;
  Rational exact;     // valid when on_grid
  double approx = 0;  // bisection estimate otherwise
  bool odd = true;
};

/// Dense exact sign scan on lo, lo+h, ..., hi followed by exact bisection
/// down to width 2^-40. Sees every odd-multiplicity root and every root that falls on a
/// grid point, provided no two roots share a cell.
inline std::vector<ScannedRoot> sign_scan_roots(const Polynomial& p, const Rational& lo, const Rational& hi,
                                                const Rational& h) {
  std::vector<ScannedRoot> out;
  const Rational width(1, 1LL << 40);
  Rational prev_x = lo;
  int prev_s = p(lo).sign();
  if (prev_s == 0) {
    const int left = p(lo - h).sign();
    const int right = p(lo + h).sign();
    out.push_back({true, lo, to_double(lo), left != right});
  }
  for (Rational x = lo + h; x <= hi; x += h) {
    const int s = p(x).sign();
    if (s == 0) {
      const int left = p(x - h).sign();
      const int right = p(x + h).sign();
      out.push_back({true, x, to_double(x), left != right});
    } else if (prev_s != 0 && s != prev_s) {
      Rational a = prev_x;
      Rational b = x;
      while (b - a > width) {
        const Rational m = (a + b) / 2;
        const int sm = p(m).sign();
        if (sm == 0) {
          a = b = m;
        } else if (sm == s) {
          b = m;
        } else {
          a = m;
        }
      }
      out.push_back({false, Rational(0), to_double((a + b) / 2), true});
    }
    prev_x = x;
    prev_s = s;
  }
  return out;
}

/// Polynomial with a known root structure for the isolation oracle: rational
/// roots with odd or even multiplicity (even only on grid points), square-root
/// pairs and root-free quadratic factors. Roots are at least `gap` apart.
struct PlantedPolynomial {
  Polynomial p;
  std::size_t distinct_real_roots = 0;
};

inline PlantedPolynomial planted_polynomial(Gen& gen, std::size_t max_degree, const Rational& grid_step) {
  PlantedPolynomial out{Polynomial::constant(gen.rational(1, 9, {1, 2, 3}) * (gen.coin() ? 1 : -1)), 0};
  std::vector<double> used;
  const double gap = 4 * to_double(grid_step);
  const auto far = [&](double r) {
    return std::all_of(used.begin(), used.end(), [&](double u) { return std::abs(u - r) >= gap; });
  };
  std::size_t degree = 0;
  const std::size_t target = static_cast<std::size_t>(gen.integer(1, static_cast<long>(max_degree)));
  for (int attempt = 0; attempt < 40 && degree < target; ++attempt) {
    const long kind = gen.integer(0, 3);
    if (kind <= 1) {
      // rational root; off-grid denominators only with odd multiplicity
      const bool on_grid = gen.coin();
      const Rational r = on_grid ? gen.rational(-32, 32, {8}) : gen.rational(-12, 12, {3, 5, 7});
      const std::size_t mult = on_grid ? static_cast<std::size_t>(gen.integer(1, 3)) : (gen.coin(0.7) ? 1 : 3);
      if (degree + mult > target || !far(to_double(r))) continue;
      for (std::size_t m = 0; m < mult; ++m) out.p = out.p * Polynomial::linear_factor(r);
      used.push_back(to_double(r));
      degree += mult;
      ++out.distinct_real_roots;
    } else if (kind == 2) {
      // x^2 - q with q not a perfect square: roots +-sqrt(q)
      const long q = gen.pick(std::vector<long>{2, 3, 5, 6, 7, 10, 11});
      const double s = std::sqrt(static_cast<double>(q));
      if (degree + 2 > target || !far(s) || !far(-s)) continue;
      out.p = out.p * Polynomial({Rational(-q), Rational(0), Rational(1)});
      used.push_back(s);
      used.push_back(-s);
      degree += 2;
      out.distinct_real_roots += 2;
    } else {
      // (x - c)^2 + d with d > 0: no real roots
      if (degree + 2 > target) continue;
      const Rational c = gen.rational(-4, 4, {1, 2});
      const Rational d = gen.rational(1, 6, {1, 2, 4});
      out.p = out.p * Polynomial({c * c + d, -2 * c, Rational(1)});
      degree += 2;
    }
  }
  return out;
}

/// Empty when isolate_real_roots on [lo, hi] agrees with the sign-scan
/// oracle root for root; otherwise a description of the first mismatch.
inline std::string isolation_discrepancy(const Polynomial& p, const Rational& lo, const Rational& hi,
                                         const Rational& h) {
  const auto scanned = sign_scan_roots(p, lo, hi, h);
  const auto isolated = reswitch::isolate_real_roots(p, reswitch::Interval{lo, hi});
  const std::string where = " for p = " + p.to_string();
  if (scanned.size() != isolated.size())
    return "oracle found " + std::to_string(scanned.size()) + " roots, isolation " + std::to_string(isolated.size()) +
           where;
  for (std::size_t k = 0; k < scanned.size(); ++k) {
    const auto& o = scanned[k];
    const auto& r = isolated[k];
    const bool odd = r.parity == reswitch::Parity::odd;
    if (odd != o.odd) return "parity mismatch at root " + std::to_string(k) + where;
    if (o.on_grid) {
      if (!r.exact() || r.lo != o.exact)
        return "grid root " + reswitch::to_string(o.exact) + " not returned exactly" + where;
    } else {
      const double v = to_double(reswitch::refine_root(r, p, Rational(1, 10000000000LL)));
      if (std::abs(v - o.approx) > 1e-6)
        return "root " + std::to_string(o.approx) + " isolated near " + std::to_string(v) + where;
    }
  }
  return {};
}

}  // namespace testing_support
