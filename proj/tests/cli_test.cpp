#include <gtest/gtest.h>

#include <cstdio>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"
#include "volterra/cli.hpp"
#include "volterra/subfamilies.hpp"

using namespace volterra;
using namespace volterra::cli;
using nlohmann::json;

namespace {

RunConfig config(double a, double b, double al, double be) {
  RunConfig cfg;
  cfg.params = ParamSet(a, b, al, be);
  return cfg;
}

std::vector<json> json_lines(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(json::parse(line));
  return out;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    out.push_back(cells);
  }
  return out;
}

template <typename F>
std::string capture(F cmd, const RunConfig& cfg) {
  std::ostringstream os;
  EXPECT_EQ(cmd(cfg, os), kExitOk);
  return os.str();
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(VOLTERRA_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string binary_output(const std::string& args) {
  const std::string cmd = std::string(VOLTERRA_CLI_PATH) + " " + args;
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  pclose(pipe);
  return out;
}

}  // namespace

TEST(FormatNumber, RoundTrips) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.3), "0.3");
  EXPECT_EQ(format_number(1.0), "1");
  const double v = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(Step, Examples) {
  auto cfg = config(1, 1, 0, 0);
  cfg.initial = State2(0.3, 0.7);
  EXPECT_EQ(capture(cmd_step, cfg), "0.3 0.7\n");
  cfg = config(0, 0, 1, 1);
  cfg.initial = State2(0.3, 0.7);
  EXPECT_EQ(capture(cmd_step, cfg), "0.7 0.3\n");
  cfg = config(0.4, 0.9, 0.1, 0.2);
  cfg.initial = State2(0, 0);
  EXPECT_EQ(capture(cmd_step, cfg), "0 0\n");
}

TEST(Step, NeedsInitialPoint) {
  std::ostringstream os;
  EXPECT_THROW(cmd_step(config(0.5, 0.5, 0.5, 0.5), os), UsageError);
}

TEST(Trajectory, SwapReportsCycle) {
  auto cfg = config(0, 0, 1, 1);
  cfg.initial = State2(0.3, 0.7);
  const auto lines = json_lines(capture(cmd_trajectory, cfg));
  ASSERT_GE(lines.size(), 2u);
  EXPECT_EQ(lines.front()["n"], 0);
  EXPECT_EQ(lines.front()["x"], 0.3);
  EXPECT_EQ(lines.back()["outcome"], "cycle");
  EXPECT_EQ(lines.back()["period"], 2);
}

TEST(Trajectory, ConvergedTerminalRecord) {
  auto cfg = config(0.8, 0.8, 0.3, 0.3);
  cfg.initial = State2(1, 0);
  const auto lines = json_lines(capture(cmd_trajectory, cfg));
  const json& term = lines.back();
  EXPECT_EQ(term["outcome"], "converged");
  EXPECT_NEAR(term["x"].get<double>(), 0.6, 1e-10);
  EXPECT_NEAR(term["y"].get<double>(), 0.6, 1e-10);
  EXPECT_EQ(term["steps"].get<std::size_t>() + 2, lines.size());
  EXPECT_FALSE(term.contains("period"));
}

TEST(Trajectory, IdentityStopsImmediately) {
  auto cfg = config(1, 1, 0, 0);
  cfg.initial = State2(0.3, 0.7);
  const auto lines = json_lines(capture(cmd_trajectory, cfg));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines.back()["steps"], 0);
}

TEST(Trajectory, MaxIter) {
  auto cfg = config(0.9, 0.9, 0.05, 0.05);
  cfg.initial = State2(1, 0);
  cfg.max_iter = 3;
  const auto lines = json_lines(capture(cmd_trajectory, cfg));
  EXPECT_EQ(lines.back()["outcome"], "max-iter");
  EXPECT_EQ(lines.back()["steps"], 3);
}

TEST(FixedPoints, LocusAndCorners) {
  auto cfg = config(0.5, 0.5, 0.2, 0.2);
  const auto lines = json_lines(capture(cmd_fixed_points, cfg));
  ASSERT_GE(lines.size(), 3u);
  EXPECT_EQ(lines[0]["record"], "locus");
  EXPECT_EQ(lines[0]["kind"], "CurveContinuum");
  std::size_t witnesses = 0, stability = 0;
  for (const json& l : lines) {
    if (l["record"] == "witness") {
      ++witnesses;
      EXPECT_LT(l["residual"].get<double>(), 1e-12);
    }
    if (l["record"] == "stability") ++stability;
  }
  EXPECT_GT(witnesses, 0u);
  EXPECT_EQ(stability, 2u);
}

TEST(FixedPoints, PublishedTableFlagsMismatches) {
  RunConfig cfg;
  cfg.paper_table = true;
  const std::string text = capture(cmd_fixed_points, cfg);
  std::istringstream in(text);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_NE(lines[5].find("origin-mismatch"), std::string::npos);
  EXPECT_EQ(lines[1].find("origin-mismatch"), std::string::npos);
  EXPECT_NE(lines[1].find("(0.713, 0.049)"), std::string::npos);
}

TEST(Portrait, CornerGrid) {
  auto cfg = config(0.5, 1, 0, 0.5);
  cfg.grid = Grid{3, 3};
  const auto lines = json_lines(capture(cmd_portrait, cfg));
  ASSERT_EQ(lines.size(), 9u);
  EXPECT_EQ(lines[1]["x0"], 0.5);
  EXPECT_EQ(lines[1]["y0"], 0);
  EXPECT_EQ(lines[3]["x0"], 0);
  EXPECT_EQ(lines[3]["y0"], 0.5);
  for (std::size_t k = 0; k + 1 < lines.size(); ++k) {
    EXPECT_EQ(lines[k]["outcome"], "converged");
    EXPECT_EQ(lines[k]["subfamily"], "Corner");
    EXPECT_LT(lines[k]["x_lim"].get<double>(), 1e-10);
    EXPECT_LT(lines[k]["y_lim"].get<double>(), 1e-10);
  }
  EXPECT_EQ(lines[8]["x_lim"], 1);  // (1,1) is fixed
}

TEST(Portrait, IdentityNeedsNoSteps) {
  auto cfg = config(1, 1, 0, 0);
  cfg.grid = Grid{4, 5};
  const auto lines = json_lines(capture(cmd_portrait, cfg));
  ASSERT_EQ(lines.size(), 20u);
  for (const json& l : lines) {
    EXPECT_EQ(l["steps"], 0);
    EXPECT_EQ(l["x_lim"], l["x0"]);
    EXPECT_EQ(l["y_lim"], l["y0"]);
  }
}

TEST(Portrait, LinearMatchesClosedForm) {
  const ParamSet p(0.8, 0.8, 0.3, 0.3);
  for (const PortraitRecord& r : portrait(p, Grid{2, 2}, kDefaultMaxIter, kDefaultTol, 2)) {
    const State2 lim = linear_limit(p, State2(r.x0, r.y0)).limit;
    ASSERT_TRUE(r.x_lim && r.y_lim);
    EXPECT_NEAR(*r.x_lim, lim.x, 1e-10);
    EXPECT_NEAR(*r.y_lim, lim.y, 1e-10);
  }
}

TEST(Portrait, SwapHasNullLimits) {
  auto cfg = config(0, 0, 1, 1);
  cfg.grid = Grid{2, 2};
  const auto lines = json_lines(capture(cmd_portrait, cfg));
  EXPECT_EQ(lines[1]["outcome"], "cycle");
  EXPECT_TRUE(lines[1]["x_lim"].is_null());
}

TEST(Portrait, ThreadCountDoesNotChangeOutput) {
  const ParamSet p(0.3, 0.6, 0.2, 0.9);
  const auto one = portrait(p, Grid{7, 9}, kDefaultMaxIter, kDefaultTol, 1);
  const auto many = portrait(p, Grid{7, 9}, kDefaultMaxIter, kDefaultTol, 4);
  ASSERT_EQ(one.size(), many.size());
  for (std::size_t k = 0; k < one.size(); ++k) {
    EXPECT_EQ(one[k].x_lim, many[k].x_lim);
    EXPECT_EQ(one[k].steps, many[k].steps);
  }
}

TEST(Subfamily, Reports) {
  auto cfg = config(0.3, 0.7, 0.3, 0.7);
  auto r = json::parse(capture(cmd_subfamily, cfg));
  EXPECT_EQ(r["subfamily"], "Diagonal");
  EXPECT_DOUBLE_EQ(r["mu"].get<double>(), 0.6);
  EXPECT_EQ(r["limit_x"], 0);
  EXPECT_LT(r["conjugacy_max_defect"].get<double>(), 1e-12);
  EXPECT_EQ(r["absorbed_in_one_step"], true);
  EXPECT_EQ(r["verdict"], "regular");

  cfg = config(0.8, 0.8, 0.3, 0.3);
  cfg.initial = State2(1, 0);
  r = json::parse(capture(cmd_subfamily, cfg));
  EXPECT_EQ(r["subfamily"], "Linear");
  EXPECT_EQ(r["closed_form"], "linear");
  EXPECT_NEAR(r["limit_x"].get<double>(), 0.6, 1e-15);
  EXPECT_NEAR(r["iterated_x"].get<double>(), 0.6, 1e-10);
  EXPECT_EQ(r["lyapunov_ok"], true);
  EXPECT_LT(r["closed_form_max_error"].get<double>(), 1e-8);

  r = json::parse(capture(cmd_subfamily, config(0, 0, 1, 1)));
  EXPECT_EQ(r["verdict"], "period-2");
  EXPECT_EQ(r["sweep_cycles"], r["sweep_samples"]);

  r = json::parse(capture(cmd_subfamily, config(0.2, 0.8, 0, 0)));
  EXPECT_EQ(r["subfamily"], "YInvariant");
  EXPECT_EQ(r["invariant_coordinate_exact"], true);
  EXPECT_EQ(r["sweep_max_iter"], 0);
}

TEST(Subfamily, SeedControlsSweep) {
  auto cfg = config(0.4, 0.9, 0.1, 0.2);
  cfg.seed = 7;
  EXPECT_EQ(capture(cmd_subfamily, cfg), capture(cmd_subfamily, cfg));
}

TEST(Formats, CsvAndJsonCarryTheSameNumbers) {
  auto cfg = config(0.3, 0.6, 0.2, 0.9);
  cfg.initial = State2(0.1, 0.95);
  const auto js = json_lines(capture(cmd_trajectory, cfg));
  cfg.format = Format::Csv;
  const auto rows = csv_rows(capture(cmd_trajectory, cfg));
  ASSERT_EQ(rows.size(), js.size() + 1);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "x", "y", "outcome", "period", "steps"}));
  for (std::size_t k = 0; k < js.size(); ++k) {
    EXPECT_EQ(std::stod(rows[k + 1][1]), js[k]["x"].get<double>());
    EXPECT_EQ(std::stod(rows[k + 1][2]), js[k]["y"].get<double>());
  }
}

TEST(Formats, PortraitCsv) {
  auto cfg = config(0, 0, 1, 1);
  cfg.grid = Grid{2, 2};
  cfg.format = Format::Csv;
  const auto rows = csv_rows(capture(cmd_portrait, cfg));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[2][2], "cycle");
  EXPECT_EQ(rows[2][3], "");
}

TEST(Formats, Deterministic) {
  auto cfg = config(0.3, 0.6, 0.2, 0.9);
  cfg.grid = Grid{6, 6};
  EXPECT_EQ(capture(cmd_portrait, cfg), capture(cmd_portrait, cfg));
}

TEST(RunConfig, Validation) {
  auto cfg = config(0.5, 0.5, 0.5, 0.5);
  cfg.tol = 0;
  EXPECT_THROW(cfg.validate(), UsageError);
  cfg.tol = 1e-12;
  cfg.grid = Grid{1, 4};
  EXPECT_THROW(cfg.validate(), UsageError);
}

TEST(Binary, ExitCodes) {
  EXPECT_EQ(run_binary("step --a 1 --b 1 --alpha 0 --beta 0 --x0 0.3 --y0 0.7"), 0);
  EXPECT_EQ(run_binary("fixed-points --paper-table"), 0);
  EXPECT_EQ(run_binary("portrait --a 0.5 --b 1 --alpha 0 --beta 0.5 --nx 3 --ny 3 --format csv"), 0);
  EXPECT_EQ(run_binary("step --a 1.5 --b 1 --alpha 0 --beta 0 --x0 0.3 --y0 0.7"), 2);
  EXPECT_EQ(run_binary("step --a 1 --b 1 --alpha 0 --beta 0"), 2);
  EXPECT_EQ(run_binary("trajectory --a 1 --b 1 --alpha 0 --beta 0 --x0 0.3 --y0 0.7 --tol 0"), 2);
  EXPECT_EQ(run_binary("portrait --a 1 --b 1 --alpha 0 --beta 0 --nx 1 --ny 3"), 2);
  EXPECT_EQ(run_binary("trajectory --a 1 --b 1 --alpha 0 --beta 0 --x0 0.3 --y0 0.7 --format xml"), 2);
  EXPECT_EQ(run_binary("bogus"), 2);
  EXPECT_EQ(run_binary(""), 2);
}

TEST(Binary, StepOutput) {
  EXPECT_EQ(binary_output("step --a 0 --b 0 --alpha 1 --beta 1 --x0 0.3 --y0 0.7"), "0.7 0.3\n");
}
