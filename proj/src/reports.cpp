#include "hvt/reports.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

#include "hvt/matrix_io.hpp"

namespace hvt {

using nlohmann::json;

namespace {

json vector_json(const RealVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json counts_json(const CountMatrix& c) {
  json rows = json::array();
  for (Index r = 0; r < c.rows(); ++r) {
    json row = json::array();
    for (Index k = 0; k < c.cols(); ++k) row.push_back(c(r, k));
    rows.push_back(row);
  }
  return rows;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string cell_symbol(const TableCell& c) {
  std::string s;
  switch (c.report.verdict) {
    case Verdict::Holds: s = "Yes"; break;
    case Verdict::Violated: s = "No"; break;
    case Verdict::ProbeOnly: s = "?"; break;
    case Verdict::Inconclusive: s = "~"; break;
  }
  if (!c.matches) s += "!";
  return s;
}

}  // namespace

json to_json(const TheoryResult& r) {
  json d;
  d["theory"] = to_string(r.theory);
  d["N"] = r.P.rows();
  d["P"] = matrix_to_json(r.P);
  d["S"] = matrix_to_json(r.S.S);
  d["undefined_columns"] = r.S.undefined_columns;
  const Diagnostics& g = r.diagnostics;
  d["diagnostics"] = {{"st_iterations", optional_json(g.st_iterations)},
                      {"st_residual", optional_json(g.st_residual)},
                      {"flow_value", optional_json(g.flow_value)},
                      {"permutations", optional_json(g.permutations)},
                      {"approximate", g.approximate},
                      {"monte_carlo_stderr", optional_json(g.monte_carlo_stderr)},
                      {"zero_mass_blocks", optional_json(g.zero_mass_blocks)},
                      {"limit_columns", g.limit_columns}};
  return d;
}

json to_json(const BlockPartition& p) {
  json blocks = json::array();
  for (const auto& b : p.blocks) blocks.push_back({{"inputs", b.inputs}, {"outputs", b.outputs}});
  return {{"zero_tol", p.zero_tol}, {"count", p.size()}, {"blocks", blocks}};
}

json to_json(const Witness& w) {
  json inputs = json::object();
  for (const auto& [k, m] : w.inputs) {
    // Vectors and non-square inputs are stored with explicit shape.
    json e = json::array();
    for (Index r = 0; r < m.rows(); ++r)
      for (Index c = 0; c < m.cols(); ++c) e.push_back({m(r, c).real(), m(r, c).imag()});
    inputs[k] = {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", e}};
  }
  return {{"label", w.label}, {"inputs", inputs}, {"params", w.params}, {"deviation", w.deviation}};
}

Witness witness_from_json(const json& doc) {
  try {
    Witness w;
    w.label = doc.at("label").get<std::string>();
    w.deviation = doc.at("deviation").get<double>();
    w.params = doc.at("params").get<std::map<std::string, double>>();
    for (const auto& [k, v] : doc.at("inputs").items()) {
      const Index rows = v.at("rows").get<Index>(), cols = v.at("cols").get<Index>();
      const json& e = v.at("entries");
      if (static_cast<Index>(e.size()) != rows * cols)
        throw ValidationError("witness input '" + k + "': entry count does not match its shape");
      ComplexMatrix m(rows, cols);
      for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) {
          const json& z = e.at(static_cast<std::size_t>(r * cols + c));
          m(r, c) = Complex(z.at(0).get<double>(), z.at(1).get<double>());
        }
      w.inputs.emplace(k, std::move(m));
    }
    return w;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("witness: ") + e.what());
  }
}

json to_json(const AxiomReport& r) {
  json ws = json::array();
  for (const auto& w : r.witnesses) ws.push_back(to_json(w));
  return {{"axiom", to_string(r.axiom)},
          {"theory", to_string(r.theory)},
          {"verdict", to_string(r.verdict)},
          {"max_deviation", r.max_deviation},
          {"trials", r.trials},
          {"tolerance", r.tolerance},
          {"violation_threshold", r.violation_threshold},
          {"measurements", r.measurements},
          {"witnesses", ws}};
}

json to_json(const AxiomTable& t) {
  json cells = json::array();
  for (const auto& c : t.cells) {
    json d = to_json(c.report);
    d["expected"] = to_string(c.expected);
    d["hard"] = c.hard;
    d["matches"] = c.matches;
    cells.push_back(std::move(d));
  }
  return {{"all_hard_match", t.all_hard_match}, {"cells", cells}};
}

json to_json(const NogoReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"theory", to_string(row.theory)},
                    {"pr_E_a_first", row.pr_a_first},
                    {"pr_E_b_first", row.pr_b_first},
                    {"pr_v2_10_a_first", row.pr_v2_10_a_first},
                    {"pr_v2_10_b_first", row.pr_v2_10_b_first},
                    {"commutativity_deviation", row.commutativity_deviation},
                    {"bounds_hold", row.bounds_hold}});
  return {{"upper_bound", r.upper_bound}, {"lower_bound", r.lower_bound},
          {"v0_marginal", vector_json(r.v0_marginal)}, {"rows", rows}, {"ok", r.ok}};
}

json to_json(const DecompReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"theory", to_string(row.theory)},
                    {"S_minus", matrix_to_json(row.s_minus)},
                    {"S_plus", matrix_to_json(row.s_plus)},
                    {"forced_deviation", row.forced_deviation},
                    {"S_mixed", matrix_to_json(row.s_mixed)},
                    {"deviation_from_uniform", row.deviation_from_uniform},
                    {"p01_basis_mixture", row.p01_basis_mixture},
                    {"p01_phi_mixture", row.p01_phi_mixture},
                    {"p01_actual", row.p01_actual}});
  return {{"theta", r.theta}, {"lhs", r.lhs}, {"rhs_bound", r.rhs_bound},
          {"ft_S_mixed_quarter", matrix_to_json(r.ft_s_mixed_quarter)}, {"rows", rows}, {"ok", r.ok}};
}

json to_json(const StrongContinuityReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"delta", row.delta},
                    {"theory", to_string(row.theory)},
                    {"S_rho", matrix_to_json(row.s_rho)},
                    {"S_rho_tilde", matrix_to_json(row.s_rho_tilde)},
                    {"S_jump", row.s_jump},
                    {"rho_distance", row.rho_distance},
                    {"P_distance", row.p_distance},
                    {"matches_expected", row.matches_expected}});
  return {{"rows", rows}, {"ok", r.ok}};
}

json to_json(const SampleReport& r) {
  json steps = json::array();
  for (std::size_t t = 0; t < r.empirical_marginals.size(); ++t) {
    json s = {{"t", t},
              {"empirical", vector_json(r.empirical_marginals[t])},
              {"exact", vector_json(r.exact_marginals[t])},
              {"born", vector_json(r.born_marginals[t])}};
    if (t > 0) {
      s["S"] = matrix_to_json(r.transitions[t - 1]);
      s["transition_counts"] = counts_json(r.transition_counts[t - 1]);
    }
    steps.push_back(std::move(s));
  }
  return {{"theory", to_string(r.theory)},
          {"seed", r.seed},
          {"n_traj", r.n_traj},
          {"steps", steps},
          {"endpoint_counts", counts_json(r.endpoint_counts)},
          {"trajectories", r.trajectories}};
}

std::string format_matrix(const RealMatrix& m, int digits, const std::string& indent) {
  std::ostringstream os;
  for (Index r = 0; r < m.rows(); ++r) {
    os << indent << "[";
    for (Index c = 0; c < m.cols(); ++c) os << (c ? " " : "") << std::setw(digits + 3) << fixed(m(r, c), digits);
    os << " ]\n";
  }
  return os.str();
}

std::string to_text(const TheoryResult& r) {
  std::ostringstream os;
  os << "theory " << to_string(r.theory) << ", N = " << r.P.rows() << "\n";
  os << "P (row = output, column = input)\n" << format_matrix(r.P, 6);
  os << "S\n" << format_matrix(r.S.S, 6);
  if (!r.S.undefined_columns.empty()) {
    os << "undefined columns:";
    for (Index c : r.S.undefined_columns) os << " " << c;
    os << "\n";
  }
  const Diagnostics& g = r.diagnostics;
  if (g.st_iterations) os << "scaling steps: " << *g.st_iterations << ", residual " << sci(*g.st_residual) << "\n";
  if (g.flow_value) os << "max-flow value: " << fixed(*g.flow_value, 12) << "\n";
  if (g.permutations) os << "relabellings: " << *g.permutations << (g.approximate ? " (sampled)" : "") << "\n";
  if (g.monte_carlo_stderr) os << "monte-carlo stderr: " << sci(*g.monte_carlo_stderr) << "\n";
  if (g.zero_mass_blocks && *g.zero_mass_blocks) os << "zero-mass blocks: " << *g.zero_mass_blocks << "\n";
  if (g.limit_columns) os << "columns from the eps-limit: " << g.limit_columns << "\n";
  return os.str();
}

std::string to_text(const BlockPartition& p) {
  std::ostringstream os;
  os << p.size() << " minimal block" << (p.size() == 1 ? "" : "s") << "\n";
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    os << "  block " << k << ": I = {";
    for (std::size_t a = 0; a < p.blocks[k].inputs.size(); ++a) os << (a ? "," : "") << p.blocks[k].inputs[a];
    os << "}  J = {";
    for (std::size_t a = 0; a < p.blocks[k].outputs.size(); ++a) os << (a ? "," : "") << p.blocks[k].outputs[a];
    os << "}\n";
  }
  return os.str();
}

std::string to_text(const AxiomReport& r) {
  std::ostringstream os;
  os << display_name(r.axiom) << " / " << to_string(r.theory) << ": " << to_string(r.verdict)
     << "  (max deviation " << sci(r.max_deviation) << ", tolerance " << sci(r.tolerance) << ", " << r.trials
     << " trial" << (r.trials == 1 ? "" : "s") << ")\n";
  for (const auto& w : r.witnesses) os << "  witness '" << w.label << "': deviation " << sci(w.deviation) << "\n";
  for (const auto& [k, v] : r.measurements) os << "  " << k << " = " << sci(v) << "\n";
  return os.str();
}

std::string to_text(const AxiomTable& t) {
  std::ostringstream os;
  os << std::left << std::setw(26) << "";
  for (Theory th : kAllTheories) os << std::setw(6) << to_string(th);
  os << "\n";
  for (Axiom a : kTableAxioms) {
    os << std::setw(26) << display_name(a);
    for (Theory th : kAllTheories) os << std::setw(6) << cell_symbol(t.cell(a, th));
    os << "\n";
  }
  os << "\n";
  for (const auto& c : t.cells) {
    os << std::setw(26) << display_name(c.axiom) << std::setw(4) << to_string(c.theory) << std::setw(16)
       << to_string(c.report.verdict) << "expected " << std::setw(4) << to_string(c.expected) << "max dev "
       << sci(c.report.max_deviation) << (c.matches ? "" : "  MISMATCH") << "\n";
  }
  os << (t.all_hard_match ? "all Yes/No cells match\n" : "some Yes/No cells do not match\n");
  return os.str();
}

std::string to_text(const NogoReport& r) {
  std::ostringstream os;
  os << "Bell state, U_A = R(pi/8) (x) I, U_B = I (x) R(-pi/8); E = {v0 = |00>, v2 = |10>}\n";
  os << "v0 marginal: " << vector_json(r.v0_marginal).dump() << "\n";
  os << "bounds: Pr[E | A first] <= " << fixed(r.upper_bound, 10) << ", Pr[E | B first] >= "
     << fixed(r.lower_bound, 10) << "\n";
  for (const auto& row : r.rows)
    os << "  " << to_string(row.theory) << "  A first " << fixed(row.pr_a_first, 10) << "  B first "
       << fixed(row.pr_b_first, 10) << "  Pr[v2=|10>] " << fixed(row.pr_v2_10_a_first, 6) << " / "
       << fixed(row.pr_v2_10_b_first, 6) << "  " << (row.bounds_hold ? "ok" : "FAIL") << "\n";
  return os.str();
}

std::string to_text(const DecompReport& r) {
  std::ostringstream os;
  os << "theta = pi/8; forced matrices, S(I/2, R) and the P(1,0) inequality "
     << fixed(r.lhs, 6) << " < " << fixed(r.rhs_bound, 6) << "\n";
  for (const auto& row : r.rows) {
    os << to_string(row.theory) << ": forced deviation " << sci(row.forced_deviation) << ", S(I/2, R) =\n"
       << format_matrix(row.s_mixed) << "  distance from uniform " << fixed(row.deviation_from_uniform, 6)
       << "; P(1,0) basis mixture " << fixed(row.p01_basis_mixture, 6) << ", phi mixture "
       << fixed(row.p01_phi_mixture, 6) << ", actual " << fixed(row.p01_actual, 6) << "\n";
  }
  os << "FT: S(I/2, R(pi/4)) =\n" << format_matrix(r.ft_s_mixed_quarter);
  os << (r.ok ? "ok\n" : "FAIL\n");
  return os.str();
}

std::string to_text(const StrongContinuityReport& r) {
  std::ostringstream os;
  for (const auto& row : r.rows) {
    os << "delta = " << row.delta << "  " << to_string(row.theory) << "  |S~ - S| = " << fixed(row.s_jump, 6)
       << "  |rho~ - rho| = " << sci(row.rho_distance) << "  |P~ - P| = " << sci(row.p_distance) << "  "
       << (row.matches_expected ? "ok" : "FAIL") << "\n";
  }
  if (!r.rows.empty()) {
    os << "S(rho, U)\n" << format_matrix(r.rows.front().s_rho, 3);
    os << "S(rho~, U)\n" << format_matrix(r.rows.front().s_rho_tilde, 3);
  }
  return os.str();
}

std::string to_text(const SampleReport& r) {
  std::ostringstream os;
  os << r.n_traj << " trajectories, theory " << to_string(r.theory) << ", seed " << r.seed << "\n";
  for (std::size_t t = 0; t < r.empirical_marginals.size(); ++t) {
    os << "t = " << t << "  empirical " << vector_json(r.empirical_marginals[t]).dump() << "\n";
    os << "        exact     " << vector_json(r.exact_marginals[t]).dump() << "\n";
  }
  for (std::size_t t = 0; t < r.transition_counts.size(); ++t)
    os << "counts " << t << " -> " << t + 1 << ": " << counts_json(r.transition_counts[t]).dump() << "\n";
  return os.str();
}

}  // namespace hvt
