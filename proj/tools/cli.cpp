#include "cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "hvt/axioms.hpp"
#include "hvt/blocks.hpp"
#include "hvt/matrix_io.hpp"
#include "hvt/mnemonics.hpp"
#include "hvt/reports.hpp"
#include "hvt/sampling.hpp"

namespace hvt::cli {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

FtMode parse_ft_mode(const std::string& s, std::uint64_t seed) {
  if (s == "exact") return FtMode::exact();
  if (s.rfind("sampled:", 0) == 0) {
    const std::string m = s.substr(8);
    std::size_t samples = 0;
    auto [ptr, ec] = std::from_chars(m.data(), m.data() + m.size(), samples);
    if (ec == std::errc() && ptr == m.data() + m.size() && samples > 0) return FtMode::sampled(samples, seed);
  }
  throw ValidationError("--ft-mode: expected 'exact' or 'sampled:M', got '" + s + "'");
}

const DensityMatrix& need_rho(const Inputs& in, const char* cmd) {
  if (!in.rho) throw ValidationError(std::string(cmd) + ": --rho is required");
  return *in.rho;
}

void need_unitaries(const Inputs& in, std::size_t n, const char* cmd) {
  if (in.u.size() != n) {
    std::ostringstream os;
    os << cmd << ": expected " << n << " --u argument" << (n == 1 ? "" : "s") << ", got " << in.u.size();
    throw ValidationError(os.str());
  }
}

const ComplexVector& need_state(const std::optional<ComplexVector>& v, const char* flag, const char* cmd) {
  if (!v) throw ValidationError(std::string(cmd) + ": " + flag + " is required");
  return *v;
}

// Pure state vector of a rank-one density matrix (its top eigenvector).
ComplexVector pure_vector(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix());
  const Index top = rho.dim() - 1;
  if (es.eigenvalues()(top) < 1.0 - 1e-9) throw ValidationError("state is not pure");
  return es.eigenvectors().col(top);
}

json vector_json(const ComplexVector& v) {
  json e = json::array();
  for (Index k = 0; k < v.size(); ++k) e.push_back({v(k).real(), v(k).imag()});
  return e;
}

ComplexVector vector_from_json(const json& e) {
  ComplexVector v(static_cast<Index>(e.size()));
  for (std::size_t k = 0; k < e.size(); ++k)
    v(static_cast<Index>(k)) = Complex(e.at(k).at(0).get<double>(), e.at(k).at(1).get<double>());
  return v;
}

std::string header(const RunConfig& c) {
  std::ostringstream os;
  os << "# hvt " << c.command;
  if (c.command == "repro") os << " " << c.target;
  if (c.command != "blocks" && c.command != "repro") os << " theory=" << c.theory;
  if (c.command == "check") {
    os << " axiom=" << c.axiom;
    if (!c.witness.empty()) os << " witness=" << c.witness;
  }
  if (!c.rho.empty()) os << " rho=" << c.rho;
  for (const auto& u : c.u) os << " u=" << u;
  if (c.command == "blocks") {
    os << " zero-tol=" << c.zero_tol << "\n";
    return os.str();
  }
  os << " tol=" << c.tol << " max-iter=" << c.max_iter << " ft-mode=" << c.ft_mode << " seed=" << c.seed << "\n";
  return os.str();
}

struct NamedCheck {
  AxiomReport report;
  bool hard = false;
};

NamedCheck named_witness(Axiom axiom, Theory theory, const std::string& name, const RunConfig& c,
                         const TheoryOptions& to) {
  const Unitary u_sc = strong_continuity_unitary();
  auto unknown = [&]() -> NamedCheck {
    throw ValidationError("check: no witness '" + name + "' for axiom " + std::string(to_string(axiom)));
  };
  const bool reference = name == "reference";
  switch (axiom) {
    case Axiom::Symmetry:
      if (!reference) return unknown();
      return {check_symmetry(theory, maximally_mixed(2), rotation(kPi / 4.0), 2, c.seed, kEqualityTol, to), true};
    case Axiom::Indifference:
      if (name == "tensor" || reference)
        return {check_indifference(theory, maximally_mixed(4), kron(rotation(kPi / 8.0), Unitary::identity(2)),
                                   kEqualityTol, to),
                true};
      if (name == "sc")
        return {check_indifference(theory, pure_state(strong_continuity_state(0.1, 1.0)), u_sc, kEqualityTol, to),
                true};
      return unknown();
    case Axiom::Robustness:
      if (reference)
        return {probe_robustness(theory, maximally_mixed(2), rotation(kPi / 4.0), c.delta, c.trials, c.seed, to),
                true};
      if (name == "sc")
        return {probe_robustness(theory, maximally_mixed(3), u_sc, c.delta, c.trials, c.seed, to), true};
      return unknown();
    case Axiom::BlockRobustness:
      if (reference || name == "sc")
        return {check_block_robustness(theory, maximally_mixed(3), u_sc, c.delta, c.trials, c.seed, to), true};
      return unknown();
    case Axiom::Commutativity: {
      if (!(reference || name == "bell")) return unknown();
      ComplexVector bell = ComplexVector::Zero(4);
      bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
      return {check_commutativity(theory, pure_state(bell), rotation(kPi / 8.0), rotation(-kPi / 8.0),
                                  kEqualityTol, to),
              true};
    }
    case Axiom::ProductCommutativity:
      if (!reference) return unknown();
      return {check_product_commutativity(theory, phi_state(kPi / 4.0), phi_state(-kPi / 8.0), rotation(kPi / 4.0),
                                          rotation(kPi / 4.0), kEqualityTol, to),
              true};
    case Axiom::DecompositionInvariance: {
      const Decomposition dec = {{0.5, phi_state(kPi / 8.0)}, {0.5, phi_state(5.0 * kPi / 8.0)}};
      double angle = 0.0;
      if (name == "flow" || (reference && theory != Theory::Schrodinger))
        angle = kPi / 4.0;
      else if (name == "schrodinger" || reference)
        angle = kPi / 8.0;
      else
        return unknown();
      return {check_decomposition_invariance(theory, dec, rotation(angle), kEqualityTol, to), true};
    }
    case Axiom::TimeSlicing: {
      ComplexVector plus(2);
      plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
      if (reference)
        return {check_time_slicing(theory, plus, rotation(kPi / 4.0), rotation(-kPi / 4.0), kEqualityTol, to), false};
      if (name == "st")
        return {check_time_slicing(theory, phi_state(kPi / 8.0), rotation(kPi / 16.0), rotation(kPi / 16.0),
                                   kEqualityTol, to),
                false};
      return unknown();
    }
    case Axiom::Marginalization:
      break;
  }
  return unknown();
}

AxiomReport instance_check(Axiom axiom, Theory theory, const RunConfig& c, const Inputs& in, const TheoryOptions& to) {
  switch (axiom) {
    case Axiom::Marginalization:
      need_unitaries(in, 1, "check");
      return check_marginalization(theory, need_rho(in, "check"), in.u[0], 1e-9, to);
    case Axiom::Symmetry:
      need_unitaries(in, 1, "check");
      return check_symmetry(theory, need_rho(in, "check"), in.u[0], c.perms, c.seed, kEqualityTol, to);
    case Axiom::Indifference:
      need_unitaries(in, 1, "check");
      return check_indifference(theory, need_rho(in, "check"), in.u[0], kEqualityTol, to);
    case Axiom::Robustness:
      need_unitaries(in, 1, "check");
      return probe_robustness(theory, need_rho(in, "check"), in.u[0], c.delta, c.trials, c.seed, to);
    case Axiom::BlockRobustness:
      need_unitaries(in, 1, "check");
      return check_block_robustness(theory, need_rho(in, "check"), in.u[0], c.delta, c.trials, c.seed, to);
    case Axiom::Commutativity:
      need_unitaries(in, 2, "check");
      return check_commutativity(theory, need_rho(in, "check"), in.u[0], in.u[1], kEqualityTol, to);
    case Axiom::ProductCommutativity:
      need_unitaries(in, 2, "check");
      return check_product_commutativity(theory, need_state(in.state_a, "--state-a", "check"),
                                         need_state(in.state_b, "--state-b", "check"), in.u[0], in.u[1],
                                         kEqualityTol, to);
    case Axiom::DecompositionInvariance: {
      need_unitaries(in, 1, "check");
      const Decomposition dec = {{0.5, need_state(in.state_a, "--state-a", "check")},
                                 {0.5, need_state(in.state_b, "--state-b", "check")}};
      return check_decomposition_invariance(theory, dec, in.u[0], kEqualityTol, to);
    }
    case Axiom::TimeSlicing: {
      need_unitaries(in, 2, "check");
      const ComplexVector psi = in.state_a ? *in.state_a : pure_vector(need_rho(in, "check"));
      return check_time_slicing(theory, psi, in.u[0], in.u[1], kEqualityTol, to);
    }
  }
  throw ValidationError("check: unknown axiom");
}

Outcome run_check(const RunConfig& c, const Inputs& in, const TheoryOptions& to) {
  if (c.axiom.empty()) throw ValidationError("check: --axiom is required");
  const Axiom axiom = parse_axiom(c.axiom);
  const Theory theory = parse_theory(c.theory);
  Outcome o;
  AxiomReport report;
  bool hard = false;
  if (c.witness == "suite") {
    TableOptions topt;
    topt.seed = c.seed;
    topt.suite_size = c.suite_size;
    topt.delta = c.delta;
    topt.symmetry_perms = c.perms;
    topt.theory = to;
    const TableCell cell = table_cell(axiom, theory, topt);
    report = cell.report;
    hard = cell.hard;
  } else if (!c.witness.empty()) {
    NamedCheck nc = named_witness(axiom, theory, c.witness, c, to);
    report = std::move(nc.report);
    hard = nc.hard && expected_cell(axiom, theory) != Expected::Open;
  } else {
    report = instance_check(axiom, theory, c, in, to);
  }
  o.result = hvt::to_json(report);
  o.text = to_text(report);
  if (hard) {
    const Expected e = expected_cell(axiom, theory);
    const bool match = (e == Expected::Yes && report.verdict == Verdict::Holds) ||
                       (e == Expected::No && report.verdict == Verdict::Violated);
    o.result["expected"] = to_string(e);
    o.result["matches"] = match;
    o.text += std::string("expected ") + std::string(to_string(e)) + (match ? ": match\n" : ": MISMATCH\n");
    if (!match) o.exit_code = kMismatch;
  }
  return o;
}

Outcome run_repro(const RunConfig& c, const TheoryOptions& to) {
  Outcome o;
  o.result = json::object();
  const bool all = c.target == "all";
  bool ok = true, known = false;
  if (all || c.target == "nogo") {
    known = true;
    const NogoReport r = repro_nogo(to);
    o.result["nogo"] = hvt::to_json(r);
    o.text += "== no-go (indifference vs commutativity)\n" + to_text(r);
    ok = ok && r.ok;
  }
  if (all || c.target == "decomp") {
    known = true;
    const DecompReport r = repro_decomp(to);
    o.result["decomp"] = hvt::to_json(r);
    o.text += "== decomposition invariance\n" + to_text(r);
    ok = ok && r.ok;
  }
  if (all || c.target == "strong-continuity") {
    known = true;
    const StrongContinuityReport r = repro_strong_continuity({0.1, 0.01, 0.001}, to);
    o.result["strong_continuity"] = hvt::to_json(r);
    o.text += "== strong continuity\n" + to_text(r);
    ok = ok && r.ok;
  }
  if (all || c.target == "table") {
    known = true;
    TableOptions topt;
    topt.seed = c.seed;
    topt.suite_size = c.suite_size;
    topt.delta = c.delta;
    topt.symmetry_perms = c.perms;
    topt.theory = to;
    const AxiomTable t = axiom_table(topt);
    o.result["table"] = hvt::to_json(t);
    o.text += "== axiom table\n" + to_text(t);
    ok = ok && t.all_hard_match;
  }
  if (!known) throw ValidationError("repro: unknown target '" + c.target + "' (nogo, decomp, strong-continuity, table, all)");
  o.result["ok"] = ok;
  o.exit_code = ok ? kOk : kMismatch;
  return o;
}

}  // namespace

json to_json(const RunConfig& c) {
  return {{"command", c.command}, {"theory", c.theory},     {"rho", c.rho},
          {"u", c.u},             {"tol", c.tol},           {"max_iter", c.max_iter},
          {"ft_mode", c.ft_mode}, {"seed", c.seed},         {"zero_tol", c.zero_tol},
          {"format", c.format},   {"axiom", c.axiom},       {"witness", c.witness},
          {"state_a", c.state_a}, {"state_b", c.state_b},   {"delta", c.delta},
          {"trials", c.trials},   {"perms", c.perms},       {"suite_size", c.suite_size},
          {"target", c.target},   {"n_traj", c.n_traj},     {"keep", c.keep}};
}

RunConfig config_from_json(const json& d) {
  try {
    RunConfig c;
    c.command = d.at("command").get<std::string>();
    c.theory = d.at("theory").get<std::string>();
    c.rho = d.at("rho").get<std::string>();
    c.u = d.at("u").get<std::vector<std::string>>();
    c.tol = d.at("tol").get<double>();
    c.max_iter = d.at("max_iter").get<long>();
    c.ft_mode = d.at("ft_mode").get<std::string>();
    c.seed = d.at("seed").get<std::uint64_t>();
    c.zero_tol = d.at("zero_tol").get<double>();
    c.format = d.at("format").get<std::string>();
    c.axiom = d.at("axiom").get<std::string>();
    c.witness = d.at("witness").get<std::string>();
    c.state_a = d.at("state_a").get<std::string>();
    c.state_b = d.at("state_b").get<std::string>();
    c.delta = d.at("delta").get<double>();
    c.trials = d.at("trials").get<int>();
    c.perms = d.at("perms").get<std::size_t>();
    c.suite_size = d.at("suite_size").get<int>();
    c.target = d.at("target").get<std::string>();
    c.n_traj = d.at("n_traj").get<std::size_t>();
    c.keep = d.at("keep").get<std::size_t>();
    return c;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

Inputs resolve_inputs(const RunConfig& c) {
  Inputs in;
  if (!c.rho.empty()) in.rho = load_state_spec(c.rho);
  for (const auto& spec : c.u) in.u.push_back(load_unitary_spec(spec));
  if (!c.state_a.empty()) in.state_a = pure_vector(load_state_spec(c.state_a));
  if (!c.state_b.empty()) in.state_b = pure_vector(load_state_spec(c.state_b));
  return in;
}

json to_json(const Inputs& in) {
  json d;
  d["rho"] = in.rho ? matrix_to_json(in.rho->matrix()) : json(nullptr);
  d["u"] = json::array();
  for (const auto& u : in.u) d["u"].push_back(matrix_to_json(u.matrix()));
  d["state_a"] = in.state_a ? vector_json(*in.state_a) : json(nullptr);
  d["state_b"] = in.state_b ? vector_json(*in.state_b) : json(nullptr);
  return d;
}

Inputs inputs_from_json(const json& d) {
  try {
    Inputs in;
    if (!d.at("rho").is_null()) in.rho = DensityMatrix::validated(matrix_from_json(d.at("rho")));
    for (const auto& u : d.at("u")) in.u.push_back(Unitary::validated(matrix_from_json(u)));
    if (!d.at("state_a").is_null()) in.state_a = vector_from_json(d.at("state_a"));
    if (!d.at("state_b").is_null()) in.state_b = vector_from_json(d.at("state_b"));
    return in;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("inputs: ") + e.what());
  }
}

TheoryOptions theory_options(const RunConfig& c) {
  TheoryOptions to;
  to.zero_tol = c.zero_tol;
  to.st_tol = c.tol;
  to.st_max_iter = c.max_iter;
  to.ft_mode = parse_ft_mode(c.ft_mode, c.seed);
  return to;
}

Outcome run(const RunConfig& c, const Inputs& in) {
  const TheoryOptions to = theory_options(c);
  Outcome o;
  if (c.command == "map") {
    need_unitaries(in, 1, "map");
    const TheoryResult r = apply_theory(parse_theory(c.theory), need_rho(in, "map"), in.u[0], to);
    o.result = hvt::to_json(r);
    o.text = to_text(r);
  } else if (c.command == "blocks") {
    need_unitaries(in, 1, "blocks");
    const BlockPartition p = minimal_blocks(in.u[0], c.zero_tol);
    o.result = hvt::to_json(p);
    o.text = to_text(p);
  } else if (c.command == "check") {
    o = run_check(c, in, to);
  } else if (c.command == "repro") {
    o = run_repro(c, to);
  } else if (c.command == "sample") {
    if (in.u.empty()) throw ValidationError("sample: at least one --u is required");
    SampleOptions so;
    so.theory = parse_theory(c.theory);
    so.n_traj = c.n_traj;
    so.seed = c.seed;
    so.keep = c.keep;
    so.theory_options = to;
    const SampleReport r = sample_trajectories(need_rho(in, "sample"), in.u, so);
    o.result = hvt::to_json(r);
    o.text = to_text(r);
  } else {
    throw ValidationError("unknown command '" + c.command + "'");
  }
  o.text = header(c) + o.text;
  return o;
}

json document(const RunConfig& c, const Inputs& in, const Outcome& o) {
  return {{"config", to_json(c)}, {"inputs", to_json(in)}, {"result", o.result}, {"exit_code", o.exit_code}};
}

Outcome replay(const json& doc) {
  RunConfig c;
  Inputs in;
  try {
    c = config_from_json(doc.at("config"));
    in = inputs_from_json(doc.at("inputs"));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("replay: ") + e.what());
  }
  const Outcome fresh = run(c, in);
  Outcome o;
  const bool same = doc.contains("result") && doc.at("result") == fresh.result;
  o.result = {{"identical", same}, {"command", c.command}};
  o.text = same ? "replay: identical result\n" : "replay: results differ\n";
  o.exit_code = same ? kOk : kMismatch;
  return o;
}

namespace {

int emit(const std::string& format, const std::string& out, const std::string& text, const json& doc) {
  const std::string body = format == "structured" ? doc.dump(2) + "\n" : text;
  if (out.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(out);
    if (!f) throw ValidationError("cannot write '" + out + "'");
    f << body;
  }
  return 0;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    const auto& h = e.residual_history();
    std::cerr << "residual history (" << h.size() << " entries, last 10):";
    for (std::size_t k = h.size() > 10 ? h.size() - 10 : 0; k < h.size(); ++k) std::cerr << " " << h[k];
    std::cerr << "\n";
    return kNonConvergence;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const BlockStructureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
}

}  // namespace

int execute(const RunConfig& c) {
  return guarded([&] {
    if (c.format != "text" && c.format != "structured")
      throw ValidationError("--format: expected 'text' or 'structured', got '" + c.format + "'");
    const Inputs in = resolve_inputs(c);
    const Outcome o = run(c, in);
    emit(c.format, c.out, o.text, document(c, in, o));
    return o.exit_code;
  });
}

int execute_replay(const std::string& path, const std::string& format) {
  return guarded([&] {
    const Outcome o = replay(load_json(path));
    emit(format, "", o.text, o.result);
    return o.exit_code;
  });
}

}  // namespace hvt::cli
