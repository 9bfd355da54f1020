// volterra: command-line front end for the two-sex Volterra operator family.
//
//   volterra step        --a A --b B --alpha AL --beta BE --x0 X --y0 Y
//   volterra trajectory  ... --x0 X --y0 Y [--max-iter N] [--tol T]
//   volterra fixed-points ... [--x0 X --y0 Y] | --paper-table
//   volterra portrait    ... --nx NX --ny NY
//   volterra subfamily   ... [--x0 X --y0 Y] [--seed S]
//
// Shared: --format {jsonl,csv} --output PATH. Exit status 0 on success,
// 2 on usage errors, 1 on internal-consistency failures.

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "volterra/cli.hpp"

namespace {

using volterra::cli::RunConfig;

struct RawOptions {
  std::optional<double> a, b, alpha, beta, x0, y0;
  std::optional<std::size_t> nx, ny;
  std::size_t max_iter = volterra::kDefaultMaxIter;
  double tol = volterra::kDefaultTol;
  std::optional<std::uint64_t> seed;
  std::string format = "jsonl";
  std::string output;
  bool paper_table = false;
};

void add_shared_options(CLI::App& sub, RawOptions& o) {
  sub.add_option("--a", o.a, "heredity parameter a in [0,1]");
  sub.add_option("--b", o.b, "heredity parameter b in [0,1]");
  sub.add_option("--alpha", o.alpha, "heredity parameter alpha in [0,1]");
  sub.add_option("--beta", o.beta, "heredity parameter beta in [0,1]");
  sub.add_option("--x0", o.x0, "initial female type-1 frequency");
  sub.add_option("--y0", o.y0, "initial male type-1 frequency");
  sub.add_option("--nx", o.nx, "portrait grid nodes along x");
  sub.add_option("--ny", o.ny, "portrait grid nodes along y");
  sub.add_option("--max-iter", o.max_iter, "iteration cap")->capture_default_str();
  sub.add_option("--tol", o.tol, "convergence tolerance on the step size")->capture_default_str();
  sub.add_option("--seed", o.seed, "seed for random sweeps");
  sub.add_option("--format", o.format, "output encoding")->check(CLI::IsMember({"jsonl", "csv"}))->capture_default_str();
  sub.add_option("--output", o.output, "output file (default: standard output)");
}

RunConfig to_config(const RawOptions& o, bool needs_params) {
  RunConfig cfg;
  if (o.a && o.b && o.alpha && o.beta) {
    try {
      cfg.params = volterra::ParamSet(*o.a, *o.b, *o.alpha, *o.beta);
    } catch (const volterra::ArgumentError& e) {
      throw volterra::cli::UsageError(e.what());
    }
  } else if (needs_params) {
    throw volterra::cli::UsageError("--a, --b, --alpha and --beta are required");
  }
  if (o.x0.has_value() != o.y0.has_value()) throw volterra::cli::UsageError("--x0 and --y0 go together");
  if (o.x0) {
    try {
      cfg.initial = volterra::State2(*o.x0, *o.y0);
    } catch (const volterra::ArgumentError& e) {
      throw volterra::cli::UsageError(e.what());
    }
  }
  if (o.nx.has_value() != o.ny.has_value()) throw volterra::cli::UsageError("--nx and --ny go together");
  if (o.nx) cfg.grid = volterra::cli::Grid{*o.nx, *o.ny};
  cfg.max_iter = o.max_iter;
  cfg.tol = o.tol;
  cfg.seed = o.seed;
  cfg.format = o.format == "csv" ? volterra::cli::Format::Csv : volterra::cli::Format::JsonLines;
  cfg.output = o.output;
  cfg.paper_table = o.paper_table;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  namespace vc = volterra::cli;
  CLI::App app{"Iterate and analyse Volterra operators of a two-sex population on S1 x S1"};
  app.require_subcommand(1);

  RawOptions opts;
  using Command = std::function<int(const RunConfig&, std::ostream&)>;
  std::map<CLI::App*, Command> commands;

  auto* step = app.add_subcommand("step", "apply the operator once");
  auto* traj = app.add_subcommand("trajectory", "iterate until convergence, a cycle, or the iteration cap");
  auto* fixed = app.add_subcommand("fixed-points", "fixed-point locus and corner stability");
  auto* port = app.add_subcommand("portrait", "outcomes from a grid of initial points");
  auto* fam = app.add_subcommand("subfamily", "subfamily detection, closed forms and a regularity sweep");
  for (auto* sub : {step, traj, fixed, port, fam}) add_shared_options(*sub, opts);
  fixed->add_flag("--paper-table", opts.paper_table, "compare with the published five-row stability table");

  commands[step] = vc::cmd_step;
  commands[traj] = vc::cmd_trajectory;
  commands[fixed] = vc::cmd_fixed_points;
  commands[port] = vc::cmd_portrait;
  commands[fam] = vc::cmd_subfamily;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return vc::kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    const RunConfig cfg = to_config(opts, !(chosen == fixed && opts.paper_table));
    if (cfg.output.empty()) {
      return commands.at(chosen)(cfg, std::cout);
    }
    std::ofstream out(cfg.output);
    if (!out) throw vc::UsageError("cannot open " + cfg.output + " for writing");
    return commands.at(chosen)(cfg, out);
  } catch (const vc::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return vc::kExitUsage;
  } catch (const volterra::ArgumentError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return vc::kExitUsage;
  } catch (const volterra::ConsistencyError& e) {
    std::cerr << "internal consistency failure: " << e.what() << '\n';
    return vc::kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return vc::kExitInternal;
  }
}
