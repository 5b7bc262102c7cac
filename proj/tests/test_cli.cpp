#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "reswitch/cli.hpp"
#include "support.hpp"

using namespace reswitch;
using namespace reswitch::cli;

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

struct Run {
  int status;
  std::string out;
};

// Runs the built binary with stderr discarded.
Run run(const std::string& args) {
  const std::string cmd = std::string(RESWITCH_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = std::string(TEST_TMP_DIR) + "/" + name;
  std::ofstream(path) << content;
  return path;
}

const char* kTable1 =
    "interest_pct,cost_a,cost_b,switch_marker\n"
    "150,43.75,46.25,\n"
    "125,35.44,36.28,\n"
    "100,28.00,28.00,*\n"
    "75,21.44,21.22,\n"
    "50,15.75,15.75,*\n"
    "25,10.94,11.41,\n"
    "0,7.00,8.00,\n";

const char* kTable2 =
    "relative_price,interest_preimages,cost_ratio_pct,marker\n"
    "6.9282,73.21,98.97,*\n"
    "7.00,50 and 100,100.00,**\n"
    "7.17,33.33 and 125,102.38,\n"
    "7.30,25 and 140,104.29,\n"
    "7.40,20 and 150,105.71,\n"
    "8.00,0 and 200,114.29,\n";

}  // namespace

TEST(ModelFile, ParsesAndReportsFields) {
  const auto ts = parse_model(R"({"wage": "2", "techniques": [{"name": "a", "labor": ["0", "7/2", 1]}]})");
  EXPECT_EQ(ts.wage(), q(2));
  EXPECT_EQ(ts[0].labor_at(2), q(7, 2));
  EXPECT_EQ(ts[0].labor_at(3), q(1));
  try {
    parse_model(R"({"techniques": [{"name": "a", "labor": ["1", "x"]}]})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("techniques[0].labor[1]"), std::string::npos);
  }
  EXPECT_THROW(parse_model("{"), ParseError);
  EXPECT_THROW(parse_model(R"({"techniques": [{"name": "a", "labor": [0.5]}]})"), ParseError);
  EXPECT_THROW(parse_model(R"({"techniques": [{"name": "a", "labor": ["-1"]}]})"), InvalidModel);
  EXPECT_THROW(parse_model(R"({"techniques": []})"), InvalidModel);
}

TEST(Flags, RatesGridsGroups) {
  EXPECT_EQ(parse_rate_list("50,100/3,0", RateUnit::percent), (std::vector<Rational>{q(1, 2), q(1, 3), q(0)}));
  EXPECT_EQ(parse_rate_list("0.5", RateUnit::fraction), std::vector<Rational>{q(1, 2)});
  EXPECT_TRUE(parse_rate_list("", RateUnit::percent).empty());
  EXPECT_THROW(parse_rate_list("5x", RateUnit::percent), UsageError);
  EXPECT_EQ(parse_grid("0:100:25", RateUnit::percent).size(), 5U);
  EXPECT_THROW(parse_grid("0:100:0", RateUnit::percent), UsageError);
  EXPECT_THROW(parse_grid("0:100", RateUnit::percent), UsageError);
  EXPECT_EQ(parse_group("3,1"), FactorGroup({1, 3}));
  EXPECT_THROW(parse_group("a"), UsageError);
  EXPECT_EQ(percent_label(q(1, 3)), "33.33");
  EXPECT_EQ(percent_label(q(3, 2)), "150");
}

TEST(Table1, ChampagneDefaults) {
  const auto rates = parse_rate_list(default_table1_rates(), RateUnit::percent);
  EXPECT_EQ(cmd_table1(samuelson_champagne(), rates), kTable1);
}

TEST(Table1, ExactColumnsAndErrors) {
  const auto ts = samuelson_champagne();
  EXPECT_EQ(cmd_table1(ts, {q(1, 2)}, {std::nullopt, true}),
            "interest_pct,cost_a,cost_b,switch_marker,exact_cost_a,exact_cost_b\n50,15.75,15.75,*,63/4,63/4\n");
  EXPECT_EQ(cmd_table1(ts, {}), "interest_pct,cost_a,cost_b,switch_marker\n");
  EXPECT_EQ(cmd_table1(ts, {q(5, 4)}, {4, false}), "interest_pct,cost_a,cost_b,switch_marker\n125,35.4375,36.2813,\n");
  try {
    cmd_table1(ts, {q(-3, 2)});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("-150"), std::string::npos);
  }
}

TEST(Table2, ChampagneDefaults) {
  const auto rates = parse_rate_list(default_table2_rates(), RateUnit::percent);
  EXPECT_EQ(cmd_table2(samuelson_champagne(), std::nullopt, rates), kTable2);
}

TEST(Table2, GroupsAndDegenerateModel) {
  const auto ts = samuelson_champagne();
  EXPECT_THROW(cmd_table2(ts, FactorGroup({1, 2}), {q(0)}), NotAggregable);
  const TechnologySet one({Technique("a", {q(1), q(2)})});
  EXPECT_EQ(cmd_table2(one, std::nullopt, {q(0)}),
            "relative_price,interest_preimages,cost_ratio_pct,marker\n,all,100.00,degenerate\n");
}

TEST(Curves, Figure2AndFigure3) {
  const auto ts = samuelson_champagne();
  const auto grid = parse_grid("0:200:50", RateUnit::percent);
  EXPECT_EQ(cmd_curves(ts, Figure::figure2, grid, std::nullopt, {3, false}),
            "interest,cost_ratio\n0.0000,1.143\n0.5000,1.000\n1.0000,1.000\n1.5000,1.057\n2.0000,1.143\n");
  const auto fig3 = cmd_curves(ts, Figure::figure3, grid, std::nullopt);
  EXPECT_EQ(fig3.substr(0, fig3.find('\n')), "relative_price,cost_ratio,interest");
  EXPECT_NE(fig3.find("7.000000,1.000000,0.500000\n7.000000,1.000000,1.000000\n"), std::string::npos);
  EXPECT_THROW(cmd_curves(TechnologySet({ts[0]}), Figure::figure2, grid, std::nullopt), InvalidModel);
}

TEST(Analyze, ChampagneReport) {
  const auto j = cmd_analyze(samuelson_champagne());
  EXPECT_TRUE(j["reswitching"]["detected"].get<bool>());
  EXPECT_EQ(j["reswitching"]["recurring_technique"], "a");
  ASSERT_EQ(j["switch_points"].size(), 2U);
  EXPECT_EQ(j["switch_points"][0]["interest"]["value"], "1/2");
  EXPECT_EQ(j["switch_points"][1]["tie_cost"], "28");
  EXPECT_TRUE(j["theorem"]["single_switch"].get<bool>());
  EXPECT_EQ(j["theorem"]["crossing"]["relative_price"], "7");
  bool found = false;
  for (const auto& p : j["complementary_pairs"]) found = found || (p["pair"][0] == 1 && p["pair"][1] == 3);
  EXPECT_TRUE(found);
}

TEST(Analyze, SharedSupportsReportPrecondition) {
  const TechnologySet ts({Technique("a", {q(1), q(7), q(0)}), Technique("b", {q(6), q(0), q(2)})});
  const auto j = cmd_analyze(ts);
  EXPECT_FALSE(j["theorem"]["aggregable"].get<bool>());
  EXPECT_TRUE(j["theorem"].contains("precondition_unmet"));
}

TEST(Analyze, SingleTechniqueIsAllNegative) {
  const auto j = cmd_analyze(parse_model(R"({"wage": "1.5", "techniques": [{"name": "a", "labor": ["0.25", "7"]}]})"));
  EXPECT_EQ(j["wage"], "3/2");
  EXPECT_EQ(j["techniques"][0]["labor"][0], "1/4");
  EXPECT_TRUE(j["switch_points"].empty());
  EXPECT_FALSE(j["reswitching"]["detected"].get<bool>());
  EXPECT_FALSE(j["theorem"]["aggregable"].get<bool>());
  EXPECT_TRUE(j["complementary_pairs"].empty());
}

TEST(Binary, TablesMatchFunctions) {
  const auto t1 = run("table1");
  EXPECT_EQ(t1.status, 0);
  EXPECT_EQ(t1.out, kTable1);
  const auto t2 = run("table2");
  EXPECT_EQ(t2.status, 0);
  EXPECT_EQ(t2.out, kTable2);
  const auto model = write_temp("champagne.json", R"({"techniques": [{"name": "a", "labor": ["0","7","0"]},
                                                                     {"name": "b", "labor": ["6","0","2"]}]})");
  EXPECT_EQ(run("table1 --model " + model).out, kTable1);
  EXPECT_EQ(run("table1 --rates 0.5 --unit fraction").out, "interest_pct,cost_a,cost_b,switch_marker\n50,15.75,15.75,*\n");
}

TEST(Binary, ExitCodes) {
  EXPECT_EQ(run("table1 --rates -150").status, 1);
  EXPECT_EQ(run("table1 --rates abc").status, 2);
  EXPECT_EQ(run("table1 --bogus").status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("table2 --group 1,2").status, 1);
  EXPECT_EQ(run("curves figure2 --grid 0:100:0").status, 2);
  EXPECT_EQ(run("curves figure4").status, 2);
  EXPECT_EQ(run("falsify --trials 0").status, 2);
  EXPECT_EQ(run("table1 --model /nonexistent/model.json").status, 2);
  const auto bad = write_temp("bad.json", "{\"techniques\": [");
  EXPECT_EQ(run("table1 --model " + bad).status, 1);
  const auto neg = write_temp("neg.json", R"({"techniques": [{"name": "a", "labor": ["-1"]}]})");
  EXPECT_EQ(run("analyze --model " + neg).status, 1);
}

TEST(Binary, FalsifyIsDeterministic) {
  const auto first = run("falsify --trials 40 --seed 9");
  const auto second = run("falsify --trials 40 --seed 9");
  EXPECT_EQ(first.status, 0);
  EXPECT_EQ(first.out, second.out);
  EXPECT_NE(first.out.find("\"trials_run\": 40"), std::string::npos);
}
