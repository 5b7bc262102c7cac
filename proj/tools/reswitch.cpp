// reswitch: tables, curves, analysis and falsification runs for discrete
// technologies.
//
//   reswitch table1  [--model FILE] [--rates LIST] [--unit percent|fraction] [--exact] [--precision N]
//   reswitch table2  [--model FILE] [--rates LIST] [--group LAGS] [--exact] [--precision N]
//   reswitch curves  figure2|figure3 [--model FILE] [--grid LO:HI:STEP] [--group LAGS]
//   reswitch analyze [--model FILE] [--group LAGS]
//   reswitch falsify [--seed N] [--trials N] [--support disjoint|free]
//
// Exit codes: 0 success, 1 model or analysis error, 2 usage error.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "reswitch/cli.hpp"
#include "reswitch/reswitch.hpp"

namespace {

using namespace reswitch;

struct Flags {
  std::string model;
  std::optional<std::string> rates;
  std::string unit = "percent";
  std::optional<std::string> group;
  std::string grid;
  std::optional<int> precision;
  bool exact = false;
  std::string figure;
  std::uint64_t seed = 1;
  long long trials = 1000;
  std::string support = "disjoint";
};

TechnologySet model_of(const Flags& f) { return f.model.empty() ? samuelson_champagne() : cli::load_model(f.model); }

cli::RateUnit unit_of(const Flags& f) { return f.unit == "fraction" ? cli::RateUnit::fraction : cli::RateUnit::percent; }

std::optional<FactorGroup> group_of(const Flags& f) {
  if (!f.group) return std::nullopt;
  return cli::parse_group(*f.group);
}

cli::TableOptions options_of(const Flags& f) {
  if (f.precision && (*f.precision < 0 || *f.precision > 30)) throw cli::UsageError("--precision must be in 0..30");
  return {f.precision, f.exact};
}

void add_model(CLI::App* cmd, Flags& f) {
  cmd->add_option("--model", f.model, "JSON model file (default: the champagne example)");
}

void add_rates(CLI::App* cmd, Flags& f) {
  cmd->add_option("--rates", f.rates, "comma-separated interest rates, e.g. 50,100/3,0");
  cmd->add_option("--unit", f.unit, "unit of --rates and --grid")->check(CLI::IsMember({"percent", "fraction"}));
}

void add_rendering(CLI::App* cmd, Flags& f) {
  cmd->add_option("--precision", f.precision, "decimal places in rendered values");
  cmd->add_flag("--exact", f.exact, "append exact rational columns");
}

int run(CLI::App& app, const Flags& f) {
  if (app.got_subcommand("table1")) {
    const auto ts = model_of(f);
    const auto rates = cli::parse_rate_list(f.rates.value_or(cli::default_table1_rates()), unit_of(f));
    std::cout << cli::cmd_table1(ts, rates, options_of(f));
  } else if (app.got_subcommand("table2")) {
    const auto ts = model_of(f);
    const auto rates = cli::parse_rate_list(f.rates.value_or(cli::default_table2_rates()), unit_of(f));
    std::cout << cli::cmd_table2(ts, group_of(f), rates, options_of(f));
  } else if (app.got_subcommand("curves")) {
    const auto ts = model_of(f);
    const std::string spec = f.grid.empty() ? (f.unit == "fraction" ? "0:2:1/100" : "0:200:1") : f.grid;
    const auto grid = cli::parse_grid(spec, unit_of(f));
    const auto figure = f.figure == "figure2" ? cli::Figure::figure2 : cli::Figure::figure3;
    std::cout << cli::cmd_curves(ts, figure, grid, group_of(f), options_of(f));
  } else if (app.got_subcommand("analyze")) {
    std::cout << cli::cmd_analyze(model_of(f), group_of(f)).dump(2) << "\n";
  } else if (app.got_subcommand("falsify")) {
    if (f.trials < 1) throw cli::UsageError("--trials must be at least 1");
    GeneratorConfig cfg;
    cfg.seed = f.seed;
    cfg.trials = static_cast<std::size_t>(f.trials);
    cfg.support = f.support == "free" ? SupportStructure::free : SupportStructure::disjoint;
    const auto report = run_falsification(cfg);
    std::cout << to_json(report).dump(2) << "\n";
    return report.counterexamples.empty() ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reswitching analysis for discrete technologies"};
  app.require_subcommand(1);
  Flags f;

  auto* t1 = app.add_subcommand("table1", "unit cost of each technique at given interest rates");
  add_model(t1, f);
  add_rates(t1, f);
  add_rendering(t1, f);

  auto* t2 = app.add_subcommand("table2", "cost ratio against the relative factor price");
  add_model(t2, f);
  add_rates(t2, f);
  add_rendering(t2, f);
  t2->add_option("--group", f.group, "input lags forming the aggregate, e.g. 1,3");

  auto* curves = app.add_subcommand("curves", "sampled cost-ratio curves as CSV");
  curves->add_option("figure", f.figure, "figure2 or figure3")->required()->check(CLI::IsMember({"figure2", "figure3"}));
  add_model(curves, f);
  curves->add_option("--grid", f.grid, "interest grid LO:HI:STEP (default 0:200:1 percent)");
  curves->add_option("--unit", f.unit, "unit of --grid")->check(CLI::IsMember({"percent", "fraction"}));
  curves->add_option("--group", f.group, "input lags forming the aggregate");
  add_rendering(curves, f);

  auto* analyze = app.add_subcommand("analyze", "full analysis report as JSON");
  add_model(analyze, f);
  analyze->add_option("--group", f.group, "input lags forming the aggregate");

  auto* falsify = app.add_subcommand("falsify", "seeded randomized search for counterexamples");
  falsify->add_option("--seed", f.seed, "base seed");
  falsify->add_option("--trials", f.trials, "number of generated technologies");
  falsify->add_option("--support", f.support, "support structure of generated pairs")
      ->check(CLI::IsMember({"disjoint", "free"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return run(app, f);
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
