#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cli/commands.hpp"
#include "subtag/error.hpp"

namespace subtag::cli {

namespace {

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("subtag");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("SUBTAG_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

void emit(const Json& report, const std::string& out) {
  const auto text = report.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
}

}  // namespace

int run(int argc, char** argv) {
  if (!spdlog::get("subtag")) configure_logging();

  CLI::App app{"Multi-receiver authentication for network-coded subspace transmission"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  app.add_option("--out", out, "Write the JSON report here instead of stdout");

  SetupOptions setup;
  std::string setup_points;
  auto* s = app.add_subcommand("setup", "Generate a public parameter file");
  s->add_option("--q", setup.q, "Base field order (prime power)")->required();
  s->add_option("--l", setup.l, "Extension degree")->required();
  s->add_option("--n", setup.n, "Subspace dimension")->required();
  s->add_option("--M", setup.M, "Tag rows (default n)");
  s->add_option("--code", setup.code, "Code family: rs, parity or ec")->required();
  s->add_option("--V", setup.V, "Code length (rs, ec)");
  s->add_option("--k", setup.k, "Code dimension (rs, parity) or divisor degree (ec)")->required();
  s->add_option("--curve-a", setup.curve_a, "EC coefficient a");
  s->add_option("--curve-b", setup.curve_b, "EC coefficient b");
  s->add_option("--points", setup_points, "EC: 1-based affine point indices, e.g. 1,2,3");
  s->add_option("--params", setup.params_out, "Parameter file to write")->required();

  SimulateOptions sim;
  auto* m = app.add_subcommand("simulate", "Tag, propagate and verify over a network");
  m->add_option("--params", sim.params)->required();
  m->add_option("--topology", sim.topology, "butterfly, random:<nodes> or a topology file");
  m->add_option("--seed", sim.seed)->required();
  m->add_option("--inject", sim.inject, "Node that replaces its output with a random packet");

  AttackOptions atk;
  std::string coalition;
  auto* a = app.add_subcommand("attack", "Run a coalition substitution attack");
  a->add_option("--params", atk.params)->required();
  a->add_option("--topology", atk.topology, "Give the coalition only what its nodes receive");
  a->add_option("--seed", atk.seed)->required();
  a->add_option("--coalition", coalition, "1-based verifier indices, e.g. 1,2,3")->required();
  a->add_option("--target", atk.target, "1-based target verifier")->required();
  a->add_option("--mode", atk.mode)->check(CLI::IsMember({"deterministic", "guess", "histogram"}));
  a->add_option("--trials", atk.trials, "Guess-mode trials");
  a->add_option("--threads", atk.threads, "Guess-mode worker threads (0: auto)");

  AnalyzeOptions an;
  auto* z = app.add_subcommand("analyze", "Distances, minimal codewords and access structure");
  z->add_option("--params", an.params)->required();
  z->add_option("--target", an.target, "1-based coordinate")->required();

  EcCodeOptions ecopt;
  std::string ec_points;
  auto* e = app.add_subcommand("ec-code", "Elliptic-curve code construction and classification table");
  e->add_option("--q", ecopt.q)->required();
  e->add_option("--a", ecopt.a)->required();
  e->add_option("--b", ecopt.b)->required();
  e->add_option("--deg", ecopt.degree)->required();
  e->add_option("--points", ec_points, "1-based affine point indices (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  }

  try {
    Json report;
    if (*s) {
      if (!setup_points.empty()) setup.points = parse_index_list(setup_points);
      if (setup.code == "ec" && setup.points) setup.V = setup.points->size();
      report = cmd_setup(setup);
    } else if (*m) {
      report = cmd_simulate(sim);
    } else if (*a) {
      atk.coalition = parse_index_list(coalition);
      report = cmd_attack(atk);
    } else if (*z) {
      report = cmd_analyze(an);
    } else if (*e) {
      if (!ec_points.empty()) ecopt.points = parse_index_list(ec_points);
      report = cmd_ec_code(ecopt);
    }
    emit(report, out);
    return 0;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  }
}

}  // namespace subtag::cli
