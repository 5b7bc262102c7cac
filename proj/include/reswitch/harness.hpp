#pragma once

// Randomized falsification of single switching in factor-price space.
// Each trial draws a technology from a seed-derived stream, looks for
// reswitching on the interest axis, and checks that (a) the factor-space
// verification holds wherever its preconditions do, (b) every reswitching
// technology has a complementary input pair, and (c) on a sample of trials
// the dominance map agrees with a brute-force grid scan.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "reswitch/complementarity.hpp"
#include "reswitch/error.hpp"
#include "reswitch/exactmath.hpp"
#include "reswitch/factorspace.hpp"
#include "reswitch/switching.hpp"
#include "reswitch/technology.hpp"

namespace reswitch {

/// The champagne example: a = {0, 7, 0}, b = {6, 0, 2}, unit wage.
inline TechnologySet samuelson_champagne() {
  return TechnologySet({Technique("a", {Rational(0), Rational(7), Rational(0)}),
                        Technique("b", {Rational(6), Rational(0), Rational(2)})});
}

enum class SupportStructure { disjoint, free };

inline const char* to_string(SupportStructure s) { return s == SupportStructure::disjoint ? "disjoint" : "free"; }

struct GeneratorConfig {
  std::uint64_t seed = 1;
  std::size_t trials = 1000;
  std::int64_t first_trial = 0;  // trial -1 is the champagne fixture
  std::size_t min_horizon = 2;
  std::size_t max_horizon = 6;
  unsigned max_numerator = 12;
  std::vector<unsigned> denominators{1, 2, 4};
  SupportStructure support = SupportStructure::disjoint;
  Interval domain = default_interest_domain();
  std::size_t theorem_grid = 200;
  std::size_t preimage_checks = 8;
  std::size_t crosscheck_every = 100;
  std::size_t crosscheck_points = 3000;

  void validate() const {
    if (trials < 1) throw PreconditionUnmet("falsification needs at least one trial");
    if (min_horizon < 2 || max_horizon < min_horizon) throw PreconditionUnmet("horizon range must satisfy 2 <= min <= max");
    if (max_numerator < 1) throw PreconditionUnmet("coefficient numerators need a positive upper bound");
    if (denominators.empty() || std::find(denominators.begin(), denominators.end(), 0U) != denominators.end())
      throw PreconditionUnmet("coefficient denominators must be positive");
    if (crosscheck_every == 0) throw PreconditionUnmet("cross-check sampling period must be positive");
  }
};

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31U);
}

/// Per-trial stream seed: mix64(seed XOR mix64(trial_index)).
inline std::uint64_t trial_seed(std::uint64_t seed, std::int64_t trial_index) {
  return mix64(seed ^ mix64(static_cast<std::uint64_t>(trial_index)));
}

namespace detail {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}
  // Modulo reduction keeps the stream identical across standard libraries.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

  Rational coefficient(const GeneratorConfig& cfg) {
    const auto num = static_cast<long>(1 + below(cfg.max_numerator));
    const auto den = static_cast<long>(cfg.denominators[below(cfg.denominators.size())]);
    return Rational(num, den);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace detail

/// Deterministic in (seed, trial_index). Two techniques, "a" and "b".
inline TechnologySet generate_technology(const GeneratorConfig& cfg, std::int64_t trial_index) {
  if (trial_index == -1) return samuelson_champagne();
  detail::Draw draw(trial_seed(cfg.seed, trial_index));
  const std::size_t horizon = cfg.min_horizon + draw.below(cfg.max_horizon - cfg.min_horizon + 1);
  std::vector<Rational> a(horizon);
  std::vector<Rational> b(horizon);
  const auto nonzero = [](const std::vector<Rational>& v) {
    return std::any_of(v.begin(), v.end(), [](const Rational& r) { return r.sign() != 0; });
  };
  while (!nonzero(a) || !nonzero(b) || a == b) {
    for (std::size_t t = 0; t < horizon; ++t) {
      if (cfg.support == SupportStructure::disjoint) {
        const auto owner = draw.below(3);
        a[t] = owner == 0 ? draw.coefficient(cfg) : Rational(0);
        b[t] = owner == 1 ? draw.coefficient(cfg) : Rational(0);
      } else {
        a[t] = draw.below(3) == 0 ? Rational(0) : draw.coefficient(cfg);
        b[t] = draw.below(3) == 0 ? Rational(0) : draw.coefficient(cfg);
      }
    }
  }
  return TechnologySet({Technique("a", std::move(a)), Technique("b", std::move(b))});
}

/// Compares the dominance map with the cheapest technique found by direct
/// evaluation at `points` evenly spaced interest rates, skipping rates that
/// fall inside a switch-point certificate. Returns the first disagreement.
inline std::optional<std::string> grid_crosscheck(const TechnologySet& ts, const DominanceMap& map, std::size_t points) {
  if (!map.domain.hi || points < 2) return std::nullopt;
  const Rational step = (*map.domain.hi - map.domain.lo) / Rational(static_cast<long>(points - 1));
  for (std::size_t k = 0; k < points; ++k) {
    const Rational i = map.domain.lo + step * Rational(static_cast<long>(k));
    auto winners = map.winners_at(i);
    if (!winners) continue;
    Rational best;
    std::vector<std::string> cheapest;
    for (const auto& t : ts.techniques()) {
      const Rational c = cost_at(t, ts.wage(), i);
      if (cheapest.empty() || c < best) {
        best = c;
        cheapest = {t.name()};
      } else if (c == best) {
        cheapest.push_back(t.name());
      }
    }
    std::sort(cheapest.begin(), cheapest.end());
    std::sort(winners->begin(), winners->end());
    if (cheapest != *winners) return "grid point i = " + to_string(i) + " disagrees with the dominance map";
  }
  return std::nullopt;
}

struct Counterexample {
  std::int64_t trial = 0;
  std::string kind;  // "theorem", "hatta", "necessary-condition", "dominance-grid"
  std::vector<std::pair<std::string, std::vector<Rational>>> technology;
  std::string detail;
};

struct FalsificationReport {
  GeneratorConfig config;
  std::size_t trials_run = 0;
  std::size_t reswitching_instances = 0;
  std::vector<std::int64_t> reswitching_trials;  // first few, for inspection
  std::size_t theorem_verified = 0;
  std::size_t theorem_precondition_unmet = 0;
  std::size_t theorem_failed = 0;
  std::size_t reswitching_theorem_verified = 0;
  std::size_t complementarity_checked = 0;
  std::size_t complementarity_confirmed = 0;
  std::size_t crosscheck_sampled = 0;
  std::size_t crosscheck_agreed = 0;
  std::vector<Counterexample> counterexamples;
};

namespace detail {

inline std::size_t inputs_in_use(const TechnologySet& ts) {
  std::size_t n = 0;
  for (std::size_t lag = 1; lag <= ts.horizon(); ++lag)
    if (std::any_of(ts.techniques().begin(), ts.techniques().end(),
                    [&](const Technique& t) { return t.labor_at(lag).sign() > 0; }))
      ++n;
  return n;
}

inline Counterexample make_counterexample(std::int64_t trial, std::string kind, const TechnologySet& ts,
                                          std::string detail) {
  Counterexample c{trial, std::move(kind), {}, std::move(detail)};
  for (const auto& t : ts.techniques()) c.technology.emplace_back(t.name(), t.labor());
  return c;
}

// Runs one check on a technology; returns a failure description or nothing.
inline std::optional<std::string> check(const std::string& kind, const TechnologySet& ts, const GeneratorConfig& cfg) {
  if (kind == "theorem") {
    try {
      const auto v = verify_single_switch(ts, default_group(ts), cfg.domain, {cfg.theorem_grid, cfg.preimage_checks});
      if (v.single_switch && *v.single_switch) return std::nullopt;
      return v.counterexample.value_or("verification did not establish a single switch");
    } catch (const PreconditionUnmet&) {
      return std::nullopt;
    }
  }
  if (kind == "hatta") {
    if (!complementary_pairs(ts).empty()) return std::nullopt;
    return "reswitching technology without a complementary input pair";
  }
  if (kind == "necessary-condition") {
    if (inputs_in_use(ts) > ts.size()) return std::nullopt;
    return "reswitching with no more inputs than techniques";
  }
  if (kind == "dominance-grid") return grid_crosscheck(ts, dominance_map(ts, cfg.domain), cfg.crosscheck_points);
  throw PreconditionUnmet("unknown check '" + kind + "'");
}

}  // namespace detail

/// Re-runs the failed check from scratch on the recorded technology; true
/// when the failure reproduces under exact arithmetic.
inline bool replay(const Counterexample& c, const GeneratorConfig& cfg) {
  std::vector<Technique> techniques;
  for (const auto& [name, labor] : c.technology) techniques.emplace_back(name, labor);
  const TechnologySet ts(std::move(techniques));
  return detail::check(c.kind, ts, cfg).has_value();
}

inline FalsificationReport run_falsification(const GeneratorConfig& cfg) {
  cfg.validate();
  FalsificationReport report;
  report.config = cfg;
  const auto record = [&](std::int64_t trial, const std::string& kind, const TechnologySet& ts, std::string why) {
    report.counterexamples.push_back(detail::make_counterexample(trial, kind, ts, std::move(why)));
  };

  for (std::size_t n = 0; n < cfg.trials; ++n) {
    const std::int64_t trial = cfg.first_trial + static_cast<std::int64_t>(n);
    const TechnologySet ts = generate_technology(cfg, trial);
    ++report.trials_run;

    const auto rr = detect_reswitching(ts, cfg.domain);

    bool verified = false;
    try {
      const auto v = verify_single_switch(ts, default_group(ts), cfg.domain, {cfg.theorem_grid, cfg.preimage_checks});
      if (v.single_switch && *v.single_switch) {
        ++report.theorem_verified;
        verified = true;
      } else {
        ++report.theorem_failed;
        record(trial, "theorem", ts, v.counterexample.value_or("no single switch"));
      }
    } catch (const PreconditionUnmet&) {
      ++report.theorem_precondition_unmet;
    }

    if (rr.reswitching) {
      ++report.reswitching_instances;
      if (report.reswitching_trials.size() < 10) report.reswitching_trials.push_back(trial);
      if (verified) ++report.reswitching_theorem_verified;
      if (auto why = detail::check("necessary-condition", ts, cfg)) record(trial, "necessary-condition", ts, *why);
      ++report.complementarity_checked;
      if (auto why = detail::check("hatta", ts, cfg))
        record(trial, "hatta", ts, *why);
      else
        ++report.complementarity_confirmed;
    }

    if (n % cfg.crosscheck_every == 0) {
      ++report.crosscheck_sampled;
      if (auto why = grid_crosscheck(ts, rr.evidence, cfg.crosscheck_points))
        record(trial, "dominance-grid", ts, *why);
      else
        ++report.crosscheck_agreed;
    }
  }
  return report;
}

inline nlohmann::ordered_json to_json(const FalsificationReport& r) {
  using nlohmann::ordered_json;
  const auto& c = r.config;
  ordered_json gen;
  gen["seed"] = c.seed;
  gen["trials"] = c.trials;
  gen["first_trial"] = c.first_trial;
  gen["horizon"] = {c.min_horizon, c.max_horizon};
  gen["max_numerator"] = c.max_numerator;
  gen["denominators"] = c.denominators;
  gen["support"] = to_string(c.support);
  gen["interest_domain"] = {to_string(c.domain.lo), c.domain.hi ? to_string(*c.domain.hi) : std::string("inf")};
  gen["seed_mixing"] = "mix64(seed ^ mix64(trial)), mix64 = splitmix64 finalizer; mt19937_64 stream";
  gen["theorem_grid"] = c.theorem_grid;
  gen["preimage_checks"] = c.preimage_checks;
  gen["crosscheck_every"] = c.crosscheck_every;
  gen["crosscheck_points"] = c.crosscheck_points;

  ordered_json out;
  out["generator"] = gen;
  out["trials_run"] = r.trials_run;
  out["reswitching_instances"] = r.reswitching_instances;
  out["reswitching_trials_sample"] = r.reswitching_trials;
  out["theorem"] = {{"verified", r.theorem_verified},
                    {"precondition_unmet", r.theorem_precondition_unmet},
                    {"failed", r.theorem_failed},
                    {"verified_on_reswitching", r.reswitching_theorem_verified}};
  out["complementarity"] = {{"checked", r.complementarity_checked}, {"confirmed", r.complementarity_confirmed}};
  out["grid_crosscheck"] = {{"sampled", r.crosscheck_sampled}, {"agreed", r.crosscheck_agreed}};
  ordered_json ces = ordered_json::array();
  for (const auto& ce : r.counterexamples) {
    ordered_json techs = ordered_json::array();
    for (const auto& [name, labor] : ce.technology) {
      ordered_json l = ordered_json::array();
      for (const auto& v : labor) l.push_back(to_string(v));
      techs.push_back({{"name", name}, {"labor", l}});
    }
    ces.push_back({{"trial", ce.trial}, {"kind", ce.kind}, {"techniques", techs}, {"detail", ce.detail}});
  }
  out["counterexamples"] = ces;
  return out;
}

}  // namespace reswitch
