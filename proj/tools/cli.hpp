#pragma once

// Command orchestration behind the hvt executable. A RunConfig plus the
// resolved input matrices fully determine the output document, which
// embeds both so it can be replayed.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hvt/qcore.hpp"
#include "hvt/theories.hpp"

namespace hvt::cli {

enum ExitCode { kOk = 0, kValidation = 1, kNonConvergence = 2, kMismatch = 3 };

struct RunConfig {
  std::string command;  // map, blocks, check, repro, sample
  std::string theory = "pt";
  std::string rho;
  std::vector<std::string> u;
  double tol = 1e-10;
  long max_iter = 100000;
  std::string ft_mode = "exact";  // exact | sampled:M
  std::uint64_t seed = 0;
  double zero_tol = 1e-12;
  std::string format = "text";  // text | structured
  std::string out;

  // check
  std::string axiom;
  std::string witness;  // named witness, "suite", or empty for --rho/--u
  std::string state_a, state_b;
  double delta = 1e-3;
  int trials = 50;
  std::size_t perms = 6;
  int suite_size = 50;

  // repro
  std::string target = "all";

  // sample
  std::size_t n_traj = 1000;
  std::size_t keep = 0;
};

nlohmann::json to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& doc);

struct Inputs {
  std::optional<DensityMatrix> rho;
  std::vector<Unitary> u;
  std::optional<ComplexVector> state_a, state_b;
};

/// Resolves mnemonics and files named in the config.
Inputs resolve_inputs(const RunConfig& c);
nlohmann::json to_json(const Inputs& in);
Inputs inputs_from_json(const nlohmann::json& doc);

struct Outcome {
  nlohmann::json result;
  std::string text;
  int exit_code = kOk;
};

TheoryOptions theory_options(const RunConfig& c);

/// Runs a command. Throws ValidationError / ConvergenceError on bad input.
Outcome run(const RunConfig& c, const Inputs& in);

/// {"config": ..., "inputs": ..., "result": ..., "exit_code": ...}
nlohmann::json document(const RunConfig& c, const Inputs& in, const Outcome& o);

/// Re-runs the embedded config on the embedded inputs; exit kOk iff the
/// result is identical to the stored one.
Outcome replay(const nlohmann::json& doc);

/// Full command line behaviour after parsing: runs, writes output, maps
/// exceptions to exit codes.
int execute(const RunConfig& c);
int execute_replay(const std::string& path, const std::string& format);

}  // namespace hvt::cli
