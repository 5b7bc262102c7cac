#pragma once

// Command-line surface: model files, rate lists and grids, CSV tables and the
// JSON analysis report. Every command is a pure function of its inputs and
// returns the text it would print.

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "reswitch/complementarity.hpp"
#include "reswitch/error.hpp"
#include "reswitch/exactmath.hpp"
#include "reswitch/factorspace.hpp"
#include "reswitch/harness.hpp"
#include "reswitch/switching.hpp"
#include "reswitch/technology.hpp"

namespace reswitch::cli {

/// Bad flags or flag values; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RateUnit { percent, fraction };

// ---------------------------------------------------------------------------
// Model files
//
//   {"wage": "1", "output_price": "1",
//    "techniques": [{"name": "a", "labor": ["0", "7", "0"]}, ...]}
//
// Rationals are strings ("3/4", "0.25", "7"); integer JSON numbers are also
// accepted. wage and output_price default to "1".
// ---------------------------------------------------------------------------

namespace detail {

inline Rational rational_field(const nlohmann::json& node, const std::string& where) {
  if (node.is_string()) {
    try {
      return parse_rational(node.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  if (node.is_number_integer()) return Rational(BigInt(node.dump()));
  throw ParseError(where + ": expected a rational string such as \"3/4\", got " + node.dump());
}

}  // namespace detail

inline TechnologySet parse_model(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("model file: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("model file: top level must be an object");
  const Rational wage = doc.contains("wage") ? detail::rational_field(doc["wage"], "wage") : Rational(1);
  const Rational price =
      doc.contains("output_price") ? detail::rational_field(doc["output_price"], "output_price") : Rational(1);
  if (!doc.contains("techniques") || !doc["techniques"].is_array())
    throw ParseError("techniques: missing or not an array");
  std::vector<Technique> techniques;
  const auto& list = doc["techniques"];
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string where = "techniques[" + std::to_string(k) + "]";
    const auto& node = list[k];
    if (!node.is_object()) throw ParseError(where + ": expected an object");
    if (!node.contains("name") || !node["name"].is_string()) throw ParseError(where + ".name: missing or not a string");
    if (!node.contains("labor") || !node["labor"].is_array()) throw ParseError(where + ".labor: missing or not an array");
    std::vector<Rational> labor;
    for (std::size_t t = 0; t < node["labor"].size(); ++t)
      labor.push_back(detail::rational_field(node["labor"][t], where + ".labor[" + std::to_string(t) + "]"));
    try {
      techniques.emplace_back(node["name"].get<std::string>(), std::move(labor));
    } catch (const InvalidModel& e) {
      throw InvalidModel(where + ": " + e.what());
    }
  }
  return TechnologySet(std::move(techniques), wage, price);
}

inline TechnologySet load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

// ---------------------------------------------------------------------------
// Flag values
// ---------------------------------------------------------------------------

inline Rational parse_rate(std::string_view text, RateUnit unit) {
  Rational r;
  try {
    r = parse_rational(text);
  } catch (const ParseError&) {
    throw UsageError("invalid interest rate '" + std::string(text) + "'");
  }
  return unit == RateUnit::percent ? Rational(r / 100) : r;
}

inline std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  if (text.find_first_not_of(" \t") == std::string_view::npos) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Comma-separated interest rates; an empty string is an empty list.
inline std::vector<Rational> parse_rate_list(std::string_view text, RateUnit unit) {
  std::vector<Rational> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_rate(item, unit));
  return out;
}

/// "LO:HI:STEP", inclusive of both ends when STEP divides the span.
inline std::vector<Rational> parse_grid(std::string_view text, RateUnit unit) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw UsageError("grid must be LO:HI:STEP, got '" + std::string(text) + "'");
  const Rational lo = parse_rate(parts[0], unit);
  const Rational hi = parse_rate(parts[1], unit);
  const Rational step = parse_rate(parts[2], unit);
  if (step.sign() <= 0) throw UsageError("grid step must be positive, got '" + parts[2] + "'");
  if (hi < lo) throw UsageError("grid upper end below lower end");
  std::vector<Rational> out;
  for (Rational i = lo; i <= hi; i += step) out.push_back(i);
  return out;
}

inline FactorGroup parse_group(std::string_view text) {
  std::vector<std::size_t> lags;
  for (const auto& item : split(text, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      lags.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw UsageError("invalid factor group entry '" + item + "'");
    }
  }
  if (lags.empty()) throw UsageError("factor group must list at least one input lag");
  return FactorGroup(std::move(lags));
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

/// 100 * fraction at `places` decimals with trailing zeros dropped: "50", "33.33".
inline std::string percent_label(const Rational& fraction, int places = 2) {
  std::string s = to_decimal(fraction * 100, places);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

inline std::string root_exact_label(const RootInterval& r) {
  if (r.exact()) return to_string(r.lo);
  return "[" + to_string(r.lo) + " .. " + to_string(r.hi) + "]";
}

struct TableOptions {
  std::optional<int> precision;  // overrides every rendered decimal count
  bool exact = false;            // append exact-rational columns
};

namespace detail {

inline std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) out += (k == 0 ? "" : sep) + items[k];
  return out;
}

inline std::string csv_line(const std::vector<std::string>& cells) { return join(cells, ",") + "\n"; }

// True when some pair of techniques crosses (odd multiplicity) at x.
inline bool is_switch_point(const TechnologySet& ts, const Rational& x) {
  for (std::size_t a = 0; a < ts.size(); ++a)
    for (std::size_t b = a + 1; b < ts.size(); ++b) {
      const Polynomial d = cost_polynomial(ts[a]) - cost_polynomial(ts[b]);
      if (d.is_zero()) continue;
      const auto m = multiplicity_at(d, x);
      if (m % 2 == 1) return true;
    }
  return false;
}

}  // namespace detail

/// Unit cost of every technique at each rate, with "*" on switch points.
inline std::string cmd_table1(const TechnologySet& ts, const std::vector<Rational>& rates, const TableOptions& opt = {}) {
  const int places = opt.precision.value_or(2);
  std::vector<std::string> header{"interest_pct"};
  for (const auto& t : ts.techniques()) header.push_back("cost_" + t.name());
  header.emplace_back("switch_marker");
  if (opt.exact)
    for (const auto& t : ts.techniques()) header.push_back("exact_cost_" + t.name());
  std::string out = detail::csv_line(header);

  for (const auto& i : rates) {
    if (i <= -1) throw DomainError("interest rate " + percent_label(i) + "% is at or below -100%");
    std::vector<std::string> row{percent_label(i)};
    std::vector<std::string> exact;
    for (const auto& t : ts.techniques()) {
      const Rational c = cost_at(t, ts.wage(), i);
      row.push_back(to_decimal(c, places));
      exact.push_back(to_string(c));
    }
    row.emplace_back(detail::is_switch_point(ts, growth_factor(i)) ? "*" : "");
    if (opt.exact) row.insert(row.end(), exact.begin(), exact.end());
    out += detail::csv_line(row);
  }
  return out;
}

/// Cost ratio against the relative factor price F / R_c: one row per
/// distinct relative price reached by the given rates, every interest rate
/// in the domain mapping to it, and a "*" row for the curve minimum. "**"
/// marks the row where the techniques tie.
inline std::string cmd_table2(const TechnologySet& ts, const std::optional<FactorGroup>& group,
                              const std::vector<Rational>& rates, const TableOptions& opt = {}) {
  std::vector<std::string> header{"relative_price", "interest_preimages", "cost_ratio_pct", "marker"};
  if (opt.exact) {
    header.emplace_back("relative_price_exact");
    header.emplace_back("interest_preimages_exact");
    header.emplace_back("cost_ratio_exact");
  }
  std::string out = detail::csv_line(header);
  const int price_places = opt.precision.value_or(2);
  const int min_price_places = opt.precision.value_or(4);
  const int places = opt.precision.value_or(2);

  for (const auto& i : rates)
    if (i <= -1) throw DomainError("interest rate " + percent_label(i) + "% is at or below -100%");

  if (ts.size() == 1) {
    if (group) group->validate(ts.horizon());
    std::vector<std::string> row{"", "all", to_decimal(Rational(100), places), "degenerate"};
    if (opt.exact) row.insert(row.end(), {"", "all", "1"});
    return out + detail::csv_line(row);
  }

  const FactorGroup g = group ? *group : default_group(ts);
  const auto model = relative_price_model(ts, g);
  Interval domain = default_interest_domain();
  for (const auto& i : rates) {
    domain.lo = std::min(domain.lo, i);
    domain.hi = std::max(*domain.hi, i);
  }
  const Interval xdomain = growth_domain(domain);

  struct Row {
    Rational price;
    std::vector<std::string> cells;
  };
  std::vector<Row> rows;
  std::vector<Rational> seen;

  const auto minimum = relative_price_minimum(ts, g, domain);
  for (const auto& i : rates) {
    const Rational x = growth_factor(i);
    const Rational rho = model.relative_price(x);
    if (std::find(seen.begin(), seen.end(), rho) != seen.end()) continue;
    seen.push_back(rho);
    const Rational ratio = model.cost_ratio(x);
    const Polynomial level = model.aggregate - model.normalizer.scaled(rho);
    std::vector<std::string> pre;
    std::vector<std::string> pre_exact;
    for (const auto& r : isolate_real_roots(level, xdomain)) {
      pre.push_back(r.exact() ? percent_label(r.lo - 1, places)
                              : percent_label(refine_root(r, level, reporting_tolerance()) - 1, places));
      pre_exact.push_back(root_exact_label(r.shifted(Rational(-1))));
    }
    std::string marker = ratio == 1 ? "**" : "";
    if (minimum && minimum->relative_price == rho && marker.empty()) marker = "*";
    std::vector<std::string> cells{to_decimal(rho, price_places), detail::join(pre, " and "),
                                   to_decimal(ratio * 100, places), marker};
    if (opt.exact) {
      cells.push_back(to_string(rho));
      cells.push_back(detail::join(pre_exact, " and "));
      cells.push_back(to_string(ratio));
    }
    rows.push_back({rho, std::move(cells)});
  }

  if (minimum && std::find(seen.begin(), seen.end(), minimum->relative_price) == seen.end()) {
    std::vector<std::string> cells{to_decimal(minimum->relative_price, min_price_places),
                                   percent_label(minimum->interest_value, places),
                                   to_decimal(minimum->cost_ratio * 100, places), "*"};
    if (opt.exact) {
      const bool exact = minimum->interest.exact();
      cells.push_back(exact ? to_string(minimum->relative_price) : std::string());
      cells.push_back(root_exact_label(minimum->interest));
      cells.push_back(exact ? to_string(minimum->cost_ratio) : std::string());
    }
    rows.push_back({minimum->relative_price, std::move(cells)});
  }

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.price < b.price; });
  for (const auto& r : rows) out += detail::csv_line(r.cells);
  return out;
}

enum class Figure { figure2, figure3 };

/// figure2: cost ratio of the second technique to the first over the
/// interest grid. figure3: the same ratio against the relative factor price,
/// sorted by relative price; equal relative prices must carry equal ratios.
inline std::string cmd_curves(const TechnologySet& ts, Figure which, const std::vector<Rational>& grid,
                              const std::optional<FactorGroup>& group, const TableOptions& opt = {}) {
  const int places = opt.precision.value_or(6);
  const int rate_places = std::max(4, places);
  if (ts.size() < 2) throw InvalidModel("curves need at least two techniques");
  std::string out;
  if (which == Figure::figure2) {
    std::vector<std::string> header{"interest", "cost_ratio"};
    if (opt.exact) header.insert(header.end(), {"interest_exact", "cost_ratio_exact"});
    out = detail::csv_line(header);
    for (const auto& p : cost_ratio_curve(ts[1], ts[0], grid)) {
      std::vector<std::string> row{to_decimal(p.interest, rate_places), to_decimal(p.ratio, places)};
      if (opt.exact) row.insert(row.end(), {to_string(p.interest), to_string(p.ratio)});
      out += detail::csv_line(row);
    }
    return out;
  }

  const FactorGroup g = group ? *group : default_group(ts);
  auto points = relative_price_curve(ts, g, grid);
  std::stable_sort(points.begin(), points.end(), [](const AggregateCurvePoint& a, const AggregateCurvePoint& b) {
    return a.relative_price < b.relative_price || (a.relative_price == b.relative_price && a.interest < b.interest);
  });
  for (std::size_t k = 1; k < points.size(); ++k) {
    if (points[k].relative_price == points[k - 1].relative_price && points[k].cost_ratio != points[k - 1].cost_ratio)
      throw Error("relative price " + to_string(points[k].relative_price) + " carries two cost ratios (i = " +
                  to_string(points[k - 1].interest) + " and i = " + to_string(points[k].interest) + ")");
  }
  std::vector<std::string> header{"relative_price", "cost_ratio", "interest"};
  if (opt.exact) header.insert(header.end(), {"relative_price_exact", "cost_ratio_exact", "interest_exact"});
  out = detail::csv_line(header);
  for (const auto& p : points) {
    std::vector<std::string> row{to_decimal(p.relative_price, places), to_decimal(p.cost_ratio, places),
                                 to_decimal(p.interest, rate_places)};
    if (opt.exact) row.insert(row.end(), {to_string(p.relative_price), to_string(p.cost_ratio), to_string(p.interest)});
    out += detail::csv_line(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::ordered_json root_json(const RootInterval& r) {
  nlohmann::ordered_json j;
  j["exact"] = r.exact();
  if (r.exact()) {
    j["value"] = to_string(r.lo);
  } else {
    j["lo"] = to_string(r.lo);
    j["hi"] = to_string(r.hi);
  }
  j["decimal"] = to_decimal(r.midpoint(), 6);
  return j;
}

inline nlohmann::ordered_json rationals_json(const std::vector<Rational>& v) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (const auto& r : v) a.push_back(to_string(r));
  return a;
}

inline PriceGrid analysis_grid(std::size_t horizon) {
  PriceGrid g;
  if (horizon > 3) g.points_per_axis = horizon <= 5 ? 12 : 6;
  return g;
}

}  // namespace detail

/// Whole-model report: dominance map, switch points, reswitching verdict,
/// factor-space verdict and complementary input pairs.
inline nlohmann::ordered_json cmd_analyze(const TechnologySet& ts, const std::optional<FactorGroup>& group = std::nullopt,
                                          const Interval& domain = default_interest_domain()) {
  using nlohmann::ordered_json;
  ordered_json out;
  out["wage"] = to_string(ts.wage());
  out["output_price"] = to_string(ts.output_price());
  ordered_json techs = ordered_json::array();
  for (const auto& t : ts.techniques())
    techs.push_back({{"name", t.name()},
                     {"labor", detail::rationals_json(t.labor())},
                     {"cost_polynomial", cost_polynomial(t, ts.wage()).to_string('x')}});
  out["techniques"] = techs;
  out["variable"] = "x = 1 + i";
  out["interest_domain"] = {to_string(domain.lo), domain.hi ? to_string(*domain.hi) : std::string("inf")};

  const auto report = detect_reswitching(ts, domain);
  ordered_json switches = ordered_json::array();
  for (std::size_t a = 0; a < ts.size(); ++a)
    for (std::size_t b = a + 1; b < ts.size(); ++b) {
      if (ts[a].same_profile(ts[b])) continue;
      for (const auto& sp : pairwise_switch_points(ts[a], ts[b], domain)) {
        ordered_json j;
        j["techniques"] = {ts[a].name(), ts[b].name()};
        j["interest"] = detail::root_json(sp.interest);
        j["cheaper_below"] = sp.cheaper_below;
        j["cheaper_above"] = sp.cheaper_above;
        j["tie_cost"] = sp.exact() ? to_string(sp.tie_cost * ts.wage()) : std::string();
        j["tie_cost_decimal"] = to_decimal(sp.tie_cost * ts.wage(), 6);
        switches.push_back(j);
      }
    }
  out["switch_points"] = switches;

  ordered_json segs = ordered_json::array();
  for (const auto& s : report.evidence.segments) {
    ordered_json j;
    j["from"] = detail::root_json(s.lower);
    j["to"] = s.upper ? detail::root_json(*s.upper) : ordered_json("inf");
    j["winners"] = s.winners;
    segs.push_back(j);
  }
  ordered_json boundaries = ordered_json::array();
  for (const auto& sp : report.evidence.switches)
    boundaries.push_back({{"interest", detail::root_json(sp.interest)}, {"tied", sp.tied}});
  out["dominance_map"] = {{"segments", segs}, {"boundaries", boundaries}};
  out["reswitching"] = {{"detected", report.reswitching},
                        {"recurring_technique", report.recurring_technique ? ordered_json(*report.recurring_technique)
                                                                           : ordered_json(nullptr)},
                        {"notes", report.notes}};

  ordered_json theorem;
  try {
    const FactorGroup g = group ? *group : default_group(ts);
    const auto v = verify_single_switch(ts, g, domain);
    theorem["group"] = g.to_string();
    theorem["group_owner"] = v.group_owner;
    theorem["aggregable"] = v.aggregable;
    theorem["single_switch"] = v.single_switch ? ordered_json(*v.single_switch) : ordered_json(nullptr);
    if (v.crossing) {
      ordered_json pre = ordered_json::array();
      for (const auto& r : v.crossing->interest_preimages) pre.push_back(detail::root_json(r));
      theorem["crossing"] = {{"relative_price", to_string(v.crossing->relative_price)},
                             {"relative_price_decimal", to_decimal(v.crossing->relative_price, 6)},
                             {"interest_preimages", pre}};
    } else {
      theorem["crossing"] = nullptr;
    }
    theorem["cost_ratio_per_relative_price"] = to_string(v.ratio_per_relative_price);
    theorem["grid_points"] = v.grid_points;
    theorem["equal_price_pairs"] = v.equal_price_pairs;
    theorem["preimages_certified"] = v.preimages_certified;
    theorem["counterexample"] = v.counterexample ? ordered_json(*v.counterexample) : ordered_json(nullptr);
  } catch (const PreconditionUnmet& e) {
    theorem["aggregable"] = false;
    theorem["single_switch"] = nullptr;
    theorem["crossing"] = nullptr;
    theorem["precondition_unmet"] = e.what();
  }
  out["theorem"] = theorem;

  ordered_json pairs = ordered_json::array();
  for (const auto& p : complementary_pairs(ts, detail::analysis_grid(ts.horizon()))) {
    const auto& w = p.witness;
    pairs.push_back({{"pair", {p.raised, p.reduced}},
                     {"base_prices", detail::rationals_json(w.base_prices.values())},
                     {"raised_price", to_string(w.raised_price)},
                     {"technique_before", w.technique_before},
                     {"technique_after", w.technique_after},
                     {"demand_before", detail::rationals_json(w.demand_before)},
                     {"demand_after", detail::rationals_json(w.demand_after)}});
  }
  out["complementary_pairs"] = pairs;
  return out;
}

/// Default rate lists for the two tables, in percent.
inline std::string default_table1_rates() { return "150,125,100,75,50,25,0"; }
inline std::string default_table2_rates() { return "50,100/3,25,20,0"; }

}  // namespace reswitch::cli
