#include <CLI11.hpp>

#include "cli.hpp"

namespace {

void common_options(CLI::App* sub, hvt::cli::RunConfig& c) {
  sub->add_option("--theory", c.theory, "pt, dt, ft or st");
  sub->add_option("--tol", c.tol, "Schrödinger scaling tolerance");
  sub->add_option("--max-iter", c.max_iter, "Schrödinger scaling step cap");
  sub->add_option("--ft-mode", c.ft_mode, "exact or sampled:M");
  sub->add_option("--seed", c.seed, "seed for every random choice");
  sub->add_option("--zero-tol", c.zero_tol, "entries at or below this are zero");
  sub->add_option("--format", c.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
  sub->add_option("--out", c.out, "write output here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hidden-variable theories for finite-dimensional quantum systems"};
  app.require_subcommand(1);
  hvt::cli::RunConfig c;

  auto* map = app.add_subcommand("map", "evaluate a theory on (rho, U)");
  common_options(map, c);
  map->add_option("--rho", c.rho, "state file or mnemonic")->required();
  map->add_option("--u", c.u, "unitary file or mnemonic")->required();

  auto* blocks = app.add_subcommand("blocks", "minimal blocks of a unitary");
  common_options(blocks, c);
  blocks->add_option("--u", c.u, "unitary file or mnemonic")->required();

  auto* check = app.add_subcommand("check", "run an axiom checker");
  common_options(check, c);
  check->add_option("--axiom", c.axiom, "axiom name, e.g. indifference")->required();
  check->add_option("--witness", c.witness, "reference, tensor, sc, bell, flow, schrodinger, st, or suite");
  check->add_option("--rho", c.rho, "state file or mnemonic");
  check->add_option("--u", c.u, "unitary file or mnemonic (repeatable)");
  check->add_option("--state-a", c.state_a, "first pure state");
  check->add_option("--state-b", c.state_b, "second pure state");
  check->add_option("--delta", c.delta, "perturbation size for robustness probes");
  check->add_option("--trials", c.trials, "perturbations per robustness probe");
  check->add_option("--perms", c.perms, "relabellings for symmetry");
  check->add_option("--suite-size", c.suite_size, "random instances per suite");

  auto* repro = app.add_subcommand("repro", "reproduce the counterexamples and the axiom table");
  common_options(repro, c);
  repro->add_option("target", c.target, "nogo, decomp, strong-continuity, table or all")
      ->check(CLI::IsMember({"nogo", "decomp", "strong-continuity", "table", "all"}));
  repro->add_option("--suite-size", c.suite_size, "random instances per table cell");
  repro->add_option("--delta", c.delta, "perturbation size for robustness cells");

  auto* sample = app.add_subcommand("sample", "sample hidden-variable trajectories");
  common_options(sample, c);
  sample->add_option("--rho", c.rho, "initial state")->required();
  sample->add_option("--u", c.u, "one unitary per time step (repeatable)")->required();
  sample->add_option("--n-traj", c.n_traj, "number of trajectories");
  sample->add_option("--keep", c.keep, "trajectories to print verbatim");

  std::string replay_path;
  auto* replay = app.add_subcommand("replay", "re-run a structured output document and compare");
  replay->add_option("document", replay_path, "structured output file")->required();
  replay->add_option("--format", c.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hvt::cli::kValidation;
  }

  if (replay->parsed()) return hvt::cli::execute_replay(replay_path, c.format);
  c.command = app.get_subcommands().front()->get_name();
  return hvt::cli::execute(c);
}
