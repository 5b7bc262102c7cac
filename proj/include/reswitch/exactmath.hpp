#pragma once

// Exact rational arithmetic, dense polynomials over Q, and certified real-root
// isolation (Sturm sequences plus bisection).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "reswitch/error.hpp"

namespace reswitch {

namespace mp = boost::multiprecision;

using BigInt = mp::number<mp::gmp_int, mp::et_off>;
using Rational = mp::number<mp::gmp_rational, mp::et_off>;

// ---------------------------------------------------------------------------
// Rational helpers
// ---------------------------------------------------------------------------

inline int sign(const Rational& r) { return r.sign(); }

inline Rational abs(const Rational& r) { return r.sign() < 0 ? Rational(-r) : r; }

inline BigInt floor_int(const Rational& r) {
  BigInt n = mp::numerator(r);
  const BigInt d = mp::denominator(r);
  BigInt q = n / d;  // truncates toward zero
  if (n.sign() < 0 && q * d != n) q -= 1;
  return q;
}

inline Rational pow(const Rational& base, std::size_t exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

/// "p/q" in lowest terms, or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  const BigInt den = mp::denominator(r);
  if (den == 1) return mp::numerator(r).str();
  return mp::numerator(r).str() + "/" + den.str();
}

/// Fixed-point rendering with `places` decimals, rounding half away from zero.
inline std::string to_decimal(const Rational& r, int places) {
  if (places < 0) places = 0;
  BigInt scale = 1;
  for (int k = 0; k < places; ++k) scale *= 10;
  const Rational scaled = r * Rational(scale);
  BigInt n = mp::numerator(scaled);
  const BigInt d = mp::denominator(scaled);
  const bool negative = n.sign() < 0;
  if (negative) n = -n;
  BigInt q = n / d;
  const BigInt rem = n - q * d;
  if (2 * rem >= d) q += 1;

  std::string digits = q.str();
  if (places > 0) {
    if (digits.size() <= static_cast<std::size_t>(places)) {
      digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  }
  if (negative && q != 0) digits.insert(0, "-");
  return digits;
}

namespace detail {

inline bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace detail

/// Parses "p/q", integers and plain decimals ("0.25", "-1.5", ".5"). Decimals
/// are converted exactly.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  const auto fail = [&]() -> ParseError {
    return ParseError("invalid rational '" + std::string(text) + "'");
  };
  if (s.empty()) throw fail();

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational value;
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = s.substr(0, slash);
    const auto den = s.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den)) throw fail();
    const BigInt d{std::string(den)};
    if (d == 0) throw fail();
    value = Rational(BigInt{std::string(num)}, d);
  } else if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const auto whole = s.substr(0, dot);
    const auto frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw fail();
    if (!whole.empty() && !detail::all_digits(whole)) throw fail();
    if (!frac.empty() && !detail::all_digits(frac)) throw fail();
    BigInt scale = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
    const BigInt w = whole.empty() ? BigInt(0) : BigInt{std::string(whole)};
    const BigInt f = frac.empty() ? BigInt(0) : BigInt{std::string(frac)};
    value = Rational(w * scale + f, scale);
  } else {
    if (!detail::all_digits(s)) throw fail();
    value = Rational(BigInt{std::string(s)});
  }
  return negative ? Rational(-value) : value;
}

/// The rational with the smallest denominator (then smallest magnitude) in
/// the closed interval [lo, hi]. Stern-Brocot descent.
inline Rational simplest_between(const Rational& lo, const Rational& hi) {
  if (lo > hi) return simplest_between(hi, lo);
  if (lo.sign() <= 0 && hi.sign() >= 0) return Rational(0);
  if (hi.sign() < 0) return -simplest_between(-hi, -lo);
  const Rational fl{floor_int(lo)};
  if (fl == lo) return lo;
  if (fl + 1 <= hi) return fl + 1;
  return fl + Rational(1) / simplest_between(Rational(1) / (hi - fl), Rational(1) / (lo - fl));
}

// ---------------------------------------------------------------------------
// Polynomial
// ---------------------------------------------------------------------------

/// Dense polynomial over Q. Coefficient k multiplies x^k. Trailing zeros are
/// stripped, so the zero polynomial has no coefficients and no degree.
class Polynomial {
 public:
  Polynomial() = default;

  explicit Polynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {
    normalize();
  }

  Polynomial(std::initializer_list<Rational> coefficients)
      : Polynomial(std::vector<Rational>(coefficients)) {}

  static Polynomial constant(const Rational& c) { return Polynomial(std::vector<Rational>{c}); }

  static Polynomial monomial(const Rational& c, std::size_t power) {
    std::vector<Rational> v(power + 1);
    v[power] = c;
    return Polynomial(std::move(v));
  }

  /// x - r
  static Polynomial linear_factor(const Rational& r) { return Polynomial({-r, Rational(1)}); }

  const std::vector<Rational>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  std::optional<std::size_t> degree() const {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.size() - 1;
  }
  /// Degree, treating the zero polynomial as degree 0.
  std::size_t degree_or_zero() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

  Rational coefficient(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }
  const Rational& leading() const { return coeffs_.back(); }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      acc *= x;
      acc += *it;
    }
    return acc;
  }

  Polynomial derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<Rational> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<long>(k);
    return Polynomial(std::move(d));
  }

  Polynomial scaled(const Rational& c) const {
    std::vector<Rational> v = coeffs_;
    for (auto& a : v) a *= c;
    return Polynomial(std::move(v));
  }

  /// Same roots, leading coefficient 1. The zero polynomial stays zero.
  Polynomial monic() const {
    if (is_zero()) return {};
    return scaled(Rational(1) / leading());
  }

  Polynomial& operator+=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
    for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
    normalize();
    return *this;
  }

  Polynomial& operator-=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
    for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
    normalize();
    return *this;
  }

  friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
  friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
  friend Polynomial operator-(const Polynomial& p) { return p.scaled(Rational(-1)); }

  friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
    if (lhs.is_zero() || rhs.is_zero()) return {};
    std::vector<Rational> v(lhs.coeffs_.size() + rhs.coeffs_.size() - 1);
    for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i) {
      if (lhs.coeffs_[i].sign() == 0) continue;
      for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) v[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
    }
    return Polynomial(std::move(v));
  }

  friend bool operator==(const Polynomial& lhs, const Polynomial& rhs) { return lhs.coeffs_ == rhs.coeffs_; }

  /// Human-readable form in descending powers, e.g. "2x^3 + 6x".
  std::string to_string(char var = 'x') const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
      const Rational& c = coeffs_[k];
      if (c.sign() == 0) continue;
      const Rational mag = abs(c);
      if (out.empty()) {
        if (c.sign() < 0) out += "-";
      } else {
        out += c.sign() < 0 ? " - " : " + ";
      }
      const bool unit = mag == 1 && k > 0;
      if (!unit) out += reswitch::to_string(mag);
      if (k >= 1) out += var;
      if (k >= 2) out += "^" + std::to_string(k);
    }
    return out;
  }

 private:
  void normalize() {
    while (!coeffs_.empty() && coeffs_.back().sign() == 0) coeffs_.pop_back();
  }

  std::vector<Rational> coeffs_;
};

/// Euclidean division: returns (quotient, remainder). Throws on a zero divisor.
inline std::pair<Polynomial, Polynomial> divmod(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw DivisionByZero("polynomial division by zero");
  std::vector<Rational> rem = num.coefficients();
  const auto& d = den.coefficients();
  if (rem.size() < d.size()) return {Polynomial{}, num};
  std::vector<Rational> quot(rem.size() - d.size() + 1);
  const Rational inv_lead = Rational(1) / d.back();
  for (std::size_t k = quot.size(); k-- > 0;) {
    const Rational c = rem[k + d.size() - 1] * inv_lead;
    quot[k] = c;
    if (c.sign() == 0) continue;
    for (std::size_t j = 0; j < d.size(); ++j) rem[k + j] -= c * d[j];
  }
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

/// Monic greatest common divisor; gcd(0, 0) is 0.
inline Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// p / gcd(p, p'), monic: one simple root per distinct root of p.
inline Polynomial square_free_part(const Polynomial& p) {
  if (p.is_zero()) throw ZeroPolynomial("square-free part of the zero polynomial");
  if (p.degree_or_zero() == 0) return Polynomial::constant(1);
  const Polynomial g = gcd(p, p.derivative());
  return divmod(p, g).first.monic();
}

/// Multiplicity of x = r as a root of p (0 when p(r) != 0). p must be nonzero.
inline std::size_t multiplicity_at(const Polynomial& p, const Rational& r) {
  if (p.is_zero()) throw ZeroPolynomial("multiplicity in the zero polynomial");
  std::size_t m = 0;
  Polynomial d = p;
  while (!d.is_zero() && d(r).sign() == 0) {
    ++m;
    d = d.derivative();
  }
  return m;
}

/// Sign of p immediately to the right (side = +1) or left (side = -1) of r.
inline int sign_beside(const Polynomial& p, const Rational& r, int side) {
  if (p.is_zero()) return 0;
  std::size_t k = 0;
  Polynomial d = p;
  while (d(r).sign() == 0) {
    ++k;
    d = d.derivative();
  }
  const int s = d(r).sign();
  return (side < 0 && (k % 2 == 1)) ? -s : s;
}

// ---------------------------------------------------------------------------
// Root isolation
// ---------------------------------------------------------------------------

enum class Parity { odd, even };

inline const char* to_string(Parity p) { return p == Parity::odd ? "odd" : "even"; }

/// Closed interval [lo, hi] holding exactly one distinct real root of its
/// source polynomial. lo == hi means the root is that exact rational.
struct RootInterval {
  Rational lo;
  Rational hi;
  Parity parity = Parity::odd;

  bool exact() const { return lo == hi; }
  Rational midpoint() const { return (lo + hi) / 2; }

  RootInterval shifted(const Rational& delta) const { return {lo + delta, hi + delta, parity}; }
};

/// Closed real interval [lo, hi], or [lo, +inf) when hi is empty.
struct Interval {
  Rational lo;
  std::optional<Rational> hi;

  bool contains(const Rational& x) const { return x >= lo && (!hi || x <= *hi); }
  Interval shifted(const Rational& delta) const {
    Interval out{lo + delta, std::nullopt};
    if (hi) out.hi = *hi + delta;
    return out;
  }
};

/// Sturm chain of p: p, p', then negated remainders. Each member is scaled
/// by a positive constant so its leading coefficient is +-1.
inline std::vector<Polynomial> sturm_sequence(const Polynomial& p) {
  if (p.is_zero()) throw ZeroPolynomial("Sturm sequence of the zero polynomial");
  const auto unit_lead = [](const Polynomial& q) { return q.scaled(Rational(1) / abs(q.leading())); };
  std::vector<Polynomial> chain{unit_lead(p)};
  Polynomial next = p.derivative();
  while (!next.is_zero()) {
    chain.push_back(unit_lead(next));
    next = -divmod(chain[chain.size() - 2], chain.back()).second;
  }
  return chain;
}

inline int sign_variations(const std::vector<Polynomial>& chain, const Rational& x) {
  int count = 0;
  int last = 0;
  for (const auto& q : chain) {
    const int s = q(x).sign();
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

/// Every real root of p has magnitude strictly below this bound.
inline Rational cauchy_bound(const Polynomial& p) {
  Rational m = 0;
  const auto& c = p.coefficients();
  for (std::size_t k = 0; k + 1 < c.size(); ++k) m = std::max(m, abs(c[k] / c.back()));
  return m + 1;
}

namespace detail {

inline Rational upper_end(const Polynomial& p, const Interval& domain) {
  if (domain.hi) return *domain.hi;
  return std::max(domain.lo, cauchy_bound(p)) + 1;
}

// Integer polynomial with content 1, same roots as p.
inline std::vector<BigInt> primitive_integer_form(const Polynomial& p) {
  BigInt l = 1;
  for (const auto& c : p.coefficients()) l = mp::lcm(l, BigInt(mp::denominator(c)));
  std::vector<BigInt> ints;
  BigInt g = 0;
  for (const auto& c : p.coefficients()) {
    ints.push_back(BigInt(mp::numerator(c)) * (l / BigInt(mp::denominator(c))));
    g = mp::gcd(g, ints.back());
  }
  if (g != 0 && g != 1)
    for (auto& v : ints) v /= g;
  return ints;
}

struct Isolator {
  const Polynomial& q;  // square-free
  std::vector<Polynomial> chain;
  std::vector<RootInterval> out;

  // Roots in the half-open interval (a, b].
  void run(const Rational& a, const Rational& b) {
    const int n = sign_variations(chain, a) - sign_variations(chain, b);
    if (n <= 0) return;
    if (n == 1) {
      single(a, b);
      return;
    }
    const Rational m = (a + b) / 2;
    run(a, m);
    run(m, b);
  }

  void single(Rational a, Rational b) {
    if (q(b).sign() == 0) {
      out.push_back({b, b, Parity::odd});
      return;
    }
    // Move a off any root so [a, b] isolates with nonzero endpoints.
    while (q(a).sign() == 0) {
      const Rational m = (a + b) / 2;
      if (q(m).sign() == 0) {
        out.push_back({m, m, Parity::odd});
        return;
      }
      if (sign_variations(chain, m) - sign_variations(chain, b) == 1)
        a = m;
      else
        b = m;
    }
    out.push_back({a, b, Parity::odd});
  }
};

// Shrinks an isolating interval until at most one fraction with denominator
// dividing the leading coefficient fits, then tests the simplest fraction.
inline void snap_rational(const Polynomial& q, const BigInt& lead, RootInterval& r) {
  const Rational bound = Rational(1) / Rational(lead * lead);
  Rational a = r.lo;
  Rational b = r.hi;
  const int sa = q(a).sign();
  while (b - a >= bound) {
    const Rational m = (a + b) / 2;
    const int sm = q(m).sign();
    if (sm == 0) {
      r.lo = r.hi = m;
      return;
    }
    if (sm == sa)
      a = m;
    else
      b = m;
  }
  const Rational candidate = simplest_between(a, b);
  if (q(candidate).sign() == 0) {
    r.lo = r.hi = candidate;
    return;
  }
  r.lo = a;
  r.hi = b;
}

}  // namespace detail

/// Number of distinct real roots of p in the closed domain.
inline std::size_t count_distinct_roots(const Polynomial& p, const Interval& domain) {
  if (p.is_zero()) throw ZeroPolynomial("counting roots of the zero polynomial");
  const Polynomial q = square_free_part(p);
  if (q.degree_or_zero() == 0) return 0;
  const Rational hi = detail::upper_end(q, domain);
  if (hi < domain.lo) return 0;
  const auto chain = sturm_sequence(q);
  std::size_t n = q(domain.lo).sign() == 0 ? 1 : 0;
  n += static_cast<std::size_t>(sign_variations(chain, domain.lo) - sign_variations(chain, hi));
  return n;
}

/// One certified interval per distinct real root of p inside the closed
/// domain, in increasing order. Rational roots come back exact (lo == hi);
/// parity records whether p changes sign across the root.
inline std::vector<RootInterval> isolate_real_roots(const Polynomial& p, const Interval& domain) {
  if (p.is_zero())
    throw ZeroPolynomial("root locus of the zero polynomial is the whole domain");
  const Polynomial q = square_free_part(p);
  if (q.degree_or_zero() == 0) return {};
  const Rational hi = detail::upper_end(q, domain);
  if (hi < domain.lo) return {};

  detail::Isolator iso{q, sturm_sequence(q), {}};
  if (q(domain.lo).sign() == 0) iso.out.push_back({domain.lo, domain.lo, Parity::odd});
  if (hi > domain.lo) iso.run(domain.lo, hi);

  const auto ints = detail::primitive_integer_form(q);
  const BigInt lead = mp::abs(ints.back());
  for (auto& r : iso.out) {
    if (!r.exact()) detail::snap_rational(q, lead, r);
    if (r.exact()) {
      r.parity = multiplicity_at(p, r.lo) % 2 == 1 ? Parity::odd : Parity::even;
    } else {
      r.parity = p(r.lo).sign() != p(r.hi).sign() ? Parity::odd : Parity::even;
    }
  }
  return iso.out;
}

/// Bisects an isolating interval of p down to a rational within tol of the
/// root. Exact roots are returned unchanged.
inline Rational refine_root(const RootInterval& r, const Polynomial& p, const Rational& tol) {
  if (r.exact()) return r.lo;
  if (tol.sign() <= 0) throw DomainError("refinement tolerance must be positive");
  const Polynomial q = square_free_part(p);
  Rational a = r.lo;
  Rational b = r.hi;
  if (q(a).sign() == 0) return a;
  if (q(b).sign() == 0) return b;
  const int sa = q(a).sign();
  while (b - a > 2 * tol) {
    const Rational m = (a + b) / 2;
    const int sm = q(m).sign();
    if (sm == 0) return m;
    if (sm == sa)
      a = m;
    else
      b = m;
  }
  return (a + b) / 2;
}

/// Same as refine_root but returns the shrunken certificate.
inline RootInterval tighten(const RootInterval& r, const Polynomial& p, const Rational& width) {
  if (r.exact()) return r;
  const Polynomial q = square_free_part(p);
  RootInterval out = r;
  const int sa = q(out.lo).sign();
  while (out.hi - out.lo > width) {
    const Rational m = out.midpoint();
    const int sm = q(m).sign();
    if (sm == 0) {
      out.lo = out.hi = m;
      return out;
    }
    if (sm == sa)
      out.lo = m;
    else
      out.hi = m;
  }
  return out;
}

/// True iff q vanishes at the root of p certified by r.
inline bool vanishes_at(const Polynomial& q, const Polynomial& p, const RootInterval& r) {
  if (q.is_zero()) return true;
  if (r.exact()) return q(r.lo).sign() == 0;
  const Polynomial g = gcd(p, q);
  if (g.degree_or_zero() == 0) return false;
  return count_distinct_roots(g, Interval{r.lo, r.hi}) > 0;
}

}  // namespace reswitch
