#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "stoken/commands.hpp"
#include "stoken/errors.hpp"

namespace {

using namespace stoken;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format;
  std::string counts_path;
  std::string optics_path;
  std::optional<int> m;
  std::optional<std::int64_t> trials;
  unsigned threads = 0;
};

RunConfig load(const Options& o, bool required) {
  RunConfig c;
  if (!o.config_path.empty()) {
    c = load_config(o.config_path);
  } else if (required) {
    throw ConfigError("--config is required for this command");
  }
  if (o.seed) c.seed = *o.seed;
  if (!o.format.empty()) c.output_format = o.format;
  if (!o.out_dir.empty()) c.output_dir = o.out_dir;
  return c;
}

void emit(const Report& r, const RunConfig& c) {
  if (!c.output_dir.empty()) {
    write_report(r, c.output_dir, c.output_format);
    return;
  }
  if (c.output_format == "csv") {
    for (const auto& t : r.tables) std::cout << "# table: " << t.name << "\n" << render_csv(t);
  } else {
    std::cout << render_json(r);
  }
}

int run(const std::string& cmd, const Options& o) {
  if (cmd == "estimate") {
    RunConfig c = load(o, false);
    std::string counts = o.counts_path, optics = o.optics_path;
    if (counts.empty() && optics.empty() && c.estimation_inputs) {
      counts = c.estimation_inputs->counts_file;
      optics = c.estimation_inputs->optics_file;
    }
    Report r = cmd_estimate(counts, optics);
    r.seed = c.seed;
    emit(r, c);
    return 0;
  }
  if (cmd == "check") {
    const RunConfig c = load(o, false);
    const CheckOutcome out = cmd_check(c);
    emit(out.report, c);
    if (!out.passed) std::cerr << "golden check: mismatches present\n";
    return out.passed ? 0 : 4;
  }
  RunConfig c = load(o, true);
  if (cmd == "bounds") {
    emit(cmd_bounds(c), c);
  } else if (cmd == "simulate") {
    if (o.trials) {
      if (*o.trials < 1) throw ConfigError("at least one trial required");
      c.simulation.trials = static_cast<std::size_t>(*o.trials);
    }
    emit(cmd_simulate(c), c);
  } else if (cmd == "forge") {
    if (o.trials) {
      if (*o.trials < 1) throw ConfigError("at least one trial required");
      if (!c.adversary) throw ConfigError("config lacks the 'adversary' section");
      c.adversary->trials = static_cast<std::uint64_t>(*o.trials);
    }
    emit(cmd_forge(c, o.threads), c);
  } else if (cmd == "advantage") {
    emit(cmd_advantage(c), c);
  } else if (cmd == "multinode") {
    emit(cmd_multinode(c, o.m), c);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum token security bounds, simulation and estimation"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "JSON run configuration");
  app.add_option("--seed", o.seed, "64-bit seed overriding the config");
  app.add_option("--out", o.out_dir, "directory for report files (stdout when absent)");
  app.add_option("--format", o.format, "report format")->check(CLI::IsMember({"csv", "json"}));

  app.add_subcommand("bounds", "security bounds for the scheme section");
  auto* sim = app.add_subcommand("simulate", "seeded honest token transactions");
  sim->add_option("--trials", o.trials, "number of transactions");
  auto* est = app.add_subcommand("estimate", "parameter estimation from count and optics records");
  est->add_option("--counts", o.counts_path, "count record file");
  est->add_option("--optics", o.optics_path, "optics record file");
  auto* forge = app.add_subcommand("forge", "Monte-Carlo forging against the unforgeability bound");
  forge->add_option("--trials", o.trials, "trials per grid cell");
  forge->add_option("--threads", o.threads, "worker threads (0 = hardware)");
  app.add_subcommand("advantage", "transaction times and advantages for the topology");
  auto* mn = app.add_subcommand("multinode", "multi-node extension of the bounds");
  mn->add_option("--m", o.m, "number of nodes M");
  app.add_subcommand("check", "golden-value suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return run(cmd, o);
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
