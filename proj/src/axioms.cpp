#include "hvt/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace hvt {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t k) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ComplexMatrix as_column(const ComplexVector& v) { return v; }

ComplexMatrix permutation_matrix(const Permutation& perm) {
  const Index n = static_cast<Index>(perm.size());
  ComplexMatrix q = ComplexMatrix::Zero(n, n);
  for (Index a = 0; a < n; ++a) q(perm[static_cast<std::size_t>(a)], a) = 1.0;
  return q;
}

Permutation permutation_from_matrix(const ComplexMatrix& q) {
  Permutation perm(static_cast<std::size_t>(q.cols()));
  for (Index a = 0; a < q.cols(); ++a) {
    Index row = 0;
    q.col(a).cwiseAbs().maxCoeff(&row);
    perm[static_cast<std::size_t>(a)] = row;
  }
  return perm;
}

int severity(Verdict v) {
  switch (v) {
    case Verdict::Holds: return 0;
    case Verdict::Inconclusive: return 1;
    case Verdict::Violated: return 2;
    case Verdict::ProbeOnly: return 3;
  }
  return 0;
}

AxiomReport single(Axiom axiom, Theory theory, Witness w, double tol, Verdict verdict,
                   double threshold = kViolationThreshold) {
  AxiomReport r;
  r.axiom = axiom;
  r.theory = theory;
  r.verdict = verdict;
  r.max_deviation = w.deviation;
  r.trials = 1;
  r.tolerance = tol;
  r.violation_threshold = threshold;
  r.witnesses.push_back(std::move(w));
  return r;
}

AxiomReport empty_report(Axiom axiom, Theory theory, double tol) {
  AxiomReport r;
  r.axiom = axiom;
  r.theory = theory;
  r.tolerance = tol;
  return r;
}

// S with undefined columns left at zero; the comparisons below treat them
// like any other column.
RealMatrix S_of(Theory theory, const DensityMatrix& rho, const Unitary& u, const TheoryOptions& opts) {
  return transition(theory, rho, u, opts);
}

double symmetry_deviation(Theory theory, const DensityMatrix& rho, const Unitary& u, const Permutation& perm,
                          const TheoryOptions& opts) {
  const RealMatrix s = S_of(theory, rho, u, opts);
  const RealMatrix s_perm = S_of(theory, relabel(rho, perm), relabel(u, perm), opts);
  return max_entry_norm(relabel(s, perm) - s_perm);
}

double indifference_deviation(Theory theory, const DensityMatrix& rho, const Unitary& u,
                              const TheoryOptions& opts) {
  const RealMatrix s = S_of(theory, rho, u, opts);
  const BlockPartition part = minimal_blocks(u, opts.zero_tol);
  const auto bin = part.block_of_input();
  const auto bout = part.block_of_output();
  double dev = 0.0;
  for (Index i = 0; i < u.dim(); ++i)
    for (Index j = 0; j < u.dim(); ++j)
      if (bin[static_cast<std::size_t>(i)] != bout[static_cast<std::size_t>(j)]) dev = std::max(dev, s(j, i));
  return dev;
}

double commutativity_deviation(Theory theory, const DensityMatrix& rho, const Unitary& u_a, const Unitary& u_b,
                               const TheoryOptions& opts) {
  const Index da = u_a.dim(), db = u_b.dim();
  if (rho.dim() != da * db) {
    std::ostringstream os;
    os << "commutativity: rho has dimension " << rho.dim() << " but U_A (x) U_B acts on " << da * db;
    throw ValidationError(os.str());
  }
  const Unitary a = kron(u_a, Unitary::identity(db));
  const Unitary b = kron(Unitary::identity(da), u_b);
  const RealMatrix a_first = S_of(theory, evolve(rho, a), b, opts) * S_of(theory, rho, a, opts);
  const RealMatrix b_first = S_of(theory, evolve(rho, b), a, opts) * S_of(theory, rho, b, opts);
  return max_entry_norm(a_first - b_first);
}

DensityMatrix mixture(const Decomposition& dec) {
  if (dec.empty()) throw ValidationError("decomposition: empty");
  const Index n = dec.front().second.size();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (const auto& [p, psi] : dec) {
    if (psi.size() != n) throw ValidationError("decomposition: components differ in dimension");
    if (p < 0.0) throw ValidationError("decomposition: negative weight");
    m += p * pure_state(psi).matrix();
  }
  return DensityMatrix::validated(0.5 * (m + m.adjoint()));
}

double decomposition_deviation(Theory theory, const Decomposition& dec, const Unitary& u,
                               const TheoryOptions& opts) {
  const DensityMatrix rho = mixture(dec);
  RealMatrix mix = RealMatrix::Zero(u.dim(), u.dim());
  for (const auto& [p, psi] : dec) mix += p * S_of(theory, pure_state(psi), u, opts);
  return max_entry_norm(S_of(theory, rho, u, opts) - mix);
}

double joint_deviation(Theory theory, const DensityMatrix& rho, const Unitary& u, const DensityMatrix& rho_t,
                       const Unitary& u_t, const TheoryOptions& opts) {
  return max_entry_norm(joint(theory, rho_t, u_t, opts) - joint(theory, rho, u, opts));
}

Verdict robustness_verdict(Theory theory, double deviation, double bound) {
  if (theory == Theory::Schrodinger) return Verdict::ProbeOnly;
  return deviation > bound ? Verdict::Violated : Verdict::Holds;
}

template <typename Perturb>
AxiomReport robustness_probe(Axiom axiom, Theory theory, const DensityMatrix& rho, const Unitary& u,
                             double delta, int trials, std::uint64_t seed, const TheoryOptions& opts,
                             Perturb perturb) {
  const Index n = u.dim();
  const double bound = robustness_bound(n, delta);
  AxiomReport rep = empty_report(axiom, theory, bound);
  rep.violation_threshold = bound;
  rep.verdict = theory == Theory::Schrodinger ? Verdict::ProbeOnly : Verdict::Holds;
  const JointMatrix P = joint(theory, rho, u, opts);
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(t));
    const Unitary u_t = perturb(u, delta, mix_seed(s, 1));
    const DensityMatrix sigma = random_density(n, mix_seed(s, 2), n);
    const DensityMatrix rho_t = DensityMatrix::unchecked((1.0 - delta) * rho.matrix() + delta * sigma.matrix());
    double dev = 0.0;
    try {
      dev = max_entry_norm(joint(theory, rho_t, u_t, opts) - P);
    } catch (const ConvergenceError&) {
      // Nearly decoupled blocks make scaling arbitrarily slow; the probe
      // counts these instead of measuring them.
      if (theory != Theory::Schrodinger) throw;
      rep.measurements["nonconverged_trials"] += 1.0;
      continue;
    }
    Witness w;
    w.label = "trial " + std::to_string(t);
    w.inputs = {{"rho", rho.matrix()}, {"U", u.matrix()}, {"rho_tilde", rho_t.matrix()}, {"U_tilde", u_t.matrix()}};
    w.params = {{"delta", delta}, {"bound", bound}};
    w.deviation = dev;
    AxiomReport one = single(axiom, theory, std::move(w), bound, robustness_verdict(theory, dev, bound), bound);
    rep.absorb(one);
  }
  return rep;
}

}  // namespace

std::string_view to_string(Axiom a) {
  switch (a) {
    case Axiom::Marginalization: return "marginalization";
    case Axiom::Symmetry: return "symmetry";
    case Axiom::Indifference: return "indifference";
    case Axiom::Robustness: return "robustness";
    case Axiom::BlockRobustness: return "block-robustness";
    case Axiom::Commutativity: return "commutativity";
    case Axiom::ProductCommutativity: return "product-commutativity";
    case Axiom::DecompositionInvariance: return "decomposition-invariance";
    case Axiom::TimeSlicing: return "time-slicing";
  }
  return "?";
}

std::string_view display_name(Axiom a) {
  switch (a) {
    case Axiom::Marginalization: return "Marginalization";
    case Axiom::Symmetry: return "Symmetry";
    case Axiom::Indifference: return "Indifference";
    case Axiom::Robustness: return "Robustness";
    case Axiom::BlockRobustness: return "Block Robustness";
    case Axiom::Commutativity: return "Commutativity";
    case Axiom::ProductCommutativity: return "Product Commutativity";
    case Axiom::DecompositionInvariance: return "Decomposition Invariance";
    case Axiom::TimeSlicing: return "Time Slicing";
  }
  return "?";
}

Axiom parse_axiom(std::string_view name) {
  std::string s(name);
  for (auto& ch : s) {
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (ch == '_' || ch == ' ') ch = '-';
  }
  for (Axiom a : {Axiom::Marginalization, Axiom::Symmetry, Axiom::Indifference, Axiom::Robustness,
                  Axiom::BlockRobustness, Axiom::Commutativity, Axiom::ProductCommutativity,
                  Axiom::DecompositionInvariance, Axiom::TimeSlicing})
    if (s == to_string(a)) return a;
  throw ValidationError("unknown axiom '" + std::string(name) + "'");
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds-on-suite";
    case Verdict::Violated: return "violated";
    case Verdict::ProbeOnly: return "probe-only";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string_view to_string(Expected e) {
  switch (e) {
    case Expected::Yes: return "Yes";
    case Expected::No: return "No";
    case Expected::Open: return "?";
  }
  return "?";
}

Verdict equality_verdict(double deviation, double tol, double violation_threshold) {
  if (deviation <= tol) return Verdict::Holds;
  if (deviation > violation_threshold) return Verdict::Violated;
  return Verdict::Inconclusive;
}

void AxiomReport::absorb(const AxiomReport& other) {
  if (other.trials == 0) {
    for (const auto& [k, v] : other.measurements)
      if (k.ends_with("_trials")) measurements[k] += v;
    return;
  }
  const int mine = severity(verdict), theirs = severity(other.verdict);
  const bool take = trials == 0 || theirs > mine || (theirs == mine && other.max_deviation > max_deviation);
  const double worst = std::max(max_deviation, other.max_deviation);
  if (take) {
    verdict = other.verdict;
    witnesses = other.witnesses;
    tolerance = other.tolerance;
    violation_threshold = other.violation_threshold;
  }
  max_deviation = trials == 0 ? other.max_deviation : worst;
  trials += other.trials;
  for (const auto& [k, v] : other.measurements) {
    auto it = measurements.find(k);
    if (k.ends_with("_trials"))
      measurements[k] += v;
    else if (it == measurements.end() || v > it->second)
      measurements[k] = v;
  }
}

double joint_marginal_deviation(const JointMatrix& P, const DensityMatrix& rho, const Unitary& u) {
  const ProbVector p = born_vector(rho);
  const ProbVector q = output_born_vector(rho, u);
  const double cols = (P.colwise().sum().transpose() - p).cwiseAbs().maxCoeff();
  const double rows = (P.rowwise().sum() - q).cwiseAbs().maxCoeff();
  return std::max(cols, rows);
}

AxiomReport check_marginalization(Theory theory, const DensityMatrix& rho, const Unitary& u, double tol,
                                  const TheoryOptions& opts) {
  const RealMatrix s = S_of(theory, rho, u, opts);
  const double dev = (s * born_vector(rho) - output_born_vector(rho, u)).cwiseAbs().maxCoeff();
  Witness w{"instance", {{"rho", rho.matrix()}, {"U", u.matrix()}}, {}, dev};
  return single(Axiom::Marginalization, theory, std::move(w), tol, equality_verdict(dev, tol));
}

AxiomReport check_symmetry(Theory theory, const DensityMatrix& rho, const Unitary& u, std::size_t n_perms,
                           std::uint64_t seed, double tol, const TheoryOptions& opts) {
  const Index n = u.dim();
  std::vector<Permutation> perms;
  double fact = 1.0;
  for (Index k = 2; k <= n; ++k) fact *= static_cast<double>(k);
  if (fact <= static_cast<double>(n_perms)) {
    Permutation p = identity_permutation(n);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < n_perms; ++k) {
      Permutation p = identity_permutation(n);
      std::shuffle(p.begin(), p.end(), rng);
      perms.push_back(std::move(p));
    }
  }
  AxiomReport rep = empty_report(Axiom::Symmetry, theory, tol);
  for (const auto& perm : perms) {
    const double dev = symmetry_deviation(theory, rho, u, perm, opts);
    Witness w{"relabelling", {{"rho", rho.matrix()}, {"U", u.matrix()}, {"Q", permutation_matrix(perm)}}, {}, dev};
    rep.absorb(single(Axiom::Symmetry, theory, std::move(w), tol, equality_verdict(dev, tol)));
  }
  return rep;
}

AxiomReport check_indifference(Theory theory, const DensityMatrix& rho, const Unitary& u, double tol,
                               const TheoryOptions& opts) {
  const double dev = indifference_deviation(theory, rho, u, opts);
  Witness w{"instance", {{"rho", rho.matrix()}, {"U", u.matrix()}}, {}, dev};
  return single(Axiom::Indifference, theory, std::move(w), tol, equality_verdict(dev, tol));
}

double robustness_bound(Index n, double delta) {
  const double nn = static_cast<double>(n);
  return 4.0 * nn * nn * (nn * delta) * 1.1;
}

AxiomReport probe_robustness(Theory theory, const DensityMatrix& rho, const Unitary& u, double delta, int trials,
                             std::uint64_t seed, const TheoryOptions& opts) {
  return robustness_probe(Axiom::Robustness, theory, rho, u, delta, trials, seed, opts,
                          [](const Unitary& v, double d, std::uint64_t s) { return perturb_unitary(v, d, s); });
}

AxiomReport check_block_robustness(Theory theory, const DensityMatrix& rho, const Unitary& u, double delta,
                                   int trials, std::uint64_t seed, const TheoryOptions& opts) {
  const auto groups = minimal_blocks(u, opts.zero_tol).input_groups();
  return robustness_probe(Axiom::BlockRobustness, theory, rho, u, delta, trials, seed, opts,
                          [&](const Unitary& v, double d, std::uint64_t s) {
                            Unitary out = perturb_unitary_within(v, groups, d, s);
                            if (!same_blocks(v, out, opts.zero_tol))
                              throw std::logic_error("block robustness: perturbation changed the block structure");
                            return out;
                          });
}

AxiomReport check_commutativity(Theory theory, const DensityMatrix& rho_ab, const Unitary& u_a,
                                const Unitary& u_b, double tol, const TheoryOptions& opts) {
  const double dev = commutativity_deviation(theory, rho_ab, u_a, u_b, opts);
  Witness w{"instance", {{"rho", rho_ab.matrix()}, {"U_A", u_a.matrix()}, {"U_B", u_b.matrix()}}, {}, dev};
  return single(Axiom::Commutativity, theory, std::move(w), tol, equality_verdict(dev, tol));
}

AxiomReport check_product_commutativity(Theory theory, const ComplexVector& psi_a, const ComplexVector& psi_b,
                                        const Unitary& u_a, const Unitary& u_b, double tol,
                                        const TheoryOptions& opts) {
  if (psi_a.size() != u_a.dim() || psi_b.size() != u_b.dim())
    throw ValidationError("product commutativity: state and unitary dimensions differ");
  const DensityMatrix rho = pure_state(kron(psi_a.normalized(), psi_b.normalized()));
  const double dev = commutativity_deviation(theory, rho, u_a, u_b, opts);
  Witness w{"instance",
            {{"psi_A", as_column(psi_a)}, {"psi_B", as_column(psi_b)}, {"U_A", u_a.matrix()}, {"U_B", u_b.matrix()}},
            {},
            dev};
  return single(Axiom::ProductCommutativity, theory, std::move(w), tol, equality_verdict(dev, tol));
}

AxiomReport check_decomposition_invariance(Theory theory, const Decomposition& decomposition, const Unitary& u,
                                           double tol, const TheoryOptions& opts,
                                           const std::optional<DensityMatrix>& expected) {
  const DensityMatrix rho = mixture(decomposition);
  if (expected) {
    const double gap = max_entry_norm(rho.matrix() - expected->matrix());
    if (gap > 1e-9) {
      std::ostringstream os;
      os << "decomposition: mixture differs from rho by " << gap << " (max entry)";
      throw ValidationError(os.str());
    }
  }
  const double dev = decomposition_deviation(theory, decomposition, u, opts);
  ComplexMatrix psis(u.dim(), static_cast<Index>(decomposition.size()));
  std::map<std::string, double> params;
  for (std::size_t k = 0; k < decomposition.size(); ++k) {
    psis.col(static_cast<Index>(k)) = decomposition[k].second;
    params["p" + std::to_string(k)] = decomposition[k].first;
  }
  Witness w{"decomposition", {{"psi", psis}, {"U", u.matrix()}}, std::move(params), dev};
  return single(Axiom::DecompositionInvariance, theory, std::move(w), tol, equality_verdict(dev, tol));
}

AxiomReport check_time_slicing(Theory theory, const ComplexVector& psi, const Unitary& v, const Unitary& w,
                               double tol, const TheoryOptions& opts) {
  const DensityMatrix rho = pure_state(psi);
  const DensityMatrix mid = evolve(rho, v);
  const RealMatrix whole = S_of(theory, rho, w * v, opts);
  const RealMatrix sliced = S_of(theory, mid, w, opts) * S_of(theory, rho, v, opts);
  const double dev = max_entry_norm(whole - sliced);
  Witness wit{"instance", {{"psi", as_column(psi)}, {"V", v.matrix()}, {"W", w.matrix()}}, {}, dev};
  AxiomReport rep = single(Axiom::TimeSlicing, theory, std::move(wit), tol, equality_verdict(dev, tol));
  if (born_vector(mid).maxCoeff() >= 1.0 - 1e-9) {
    const RealMatrix pt = S_of(Theory::Product, rho, w * v, opts);
    rep.measurements["pt_form_deviation"] = max_entry_norm(sliced - pt);
  }
  return rep;
}

double recheck_witness(Axiom axiom, Theory theory, const Witness& witness, const TheoryOptions& opts) {
  const auto& in = witness.inputs;
  auto mat = [&](const char* key) -> const ComplexMatrix& {
    auto it = in.find(key);
    if (it == in.end()) throw ValidationError(std::string("witness: missing input ") + key);
    return it->second;
  };
  auto rho = [&](const char* key) { return DensityMatrix::unchecked(mat(key)); };
  auto uni = [&](const char* key) { return Unitary::unchecked(mat(key)); };
  switch (axiom) {
    case Axiom::Marginalization:
      return check_marginalization(theory, rho("rho"), uni("U"), 1.0, opts).max_deviation;
    case Axiom::Symmetry:
      return symmetry_deviation(theory, rho("rho"), uni("U"), permutation_from_matrix(mat("Q")), opts);
    case Axiom::Indifference:
      return indifference_deviation(theory, rho("rho"), uni("U"), opts);
    case Axiom::Robustness:
    case Axiom::BlockRobustness:
      return joint_deviation(theory, rho("rho"), uni("U"), rho("rho_tilde"), uni("U_tilde"), opts);
    case Axiom::Commutativity:
      return commutativity_deviation(theory, rho("rho"), uni("U_A"), uni("U_B"), opts);
    case Axiom::ProductCommutativity: {
      const ComplexVector a = mat("psi_A").col(0), b = mat("psi_B").col(0);
      return commutativity_deviation(theory, pure_state(kron(a.normalized(), b.normalized())), uni("U_A"),
                                     uni("U_B"), opts);
    }
    case Axiom::DecompositionInvariance: {
      const ComplexMatrix& psis = mat("psi");
      Decomposition dec;
      for (Index k = 0; k < psis.cols(); ++k) {
        auto it = witness.params.find("p" + std::to_string(k));
        if (it == witness.params.end()) throw ValidationError("witness: missing weight p" + std::to_string(k));
        dec.emplace_back(it->second, psis.col(k));
      }
      return decomposition_deviation(theory, dec, uni("U"), opts);
    }
    case Axiom::TimeSlicing:
      return check_time_slicing(theory, mat("psi").col(0), uni("V"), uni("W"), 1.0, opts).max_deviation;
  }
  throw ValidationError("witness: unknown axiom");
}

// ---------------------------------------------------------------------------

NogoReport repro_nogo(const TheoryOptions& opts) {
  NogoReport rep;
  const double s2 = std::pow(std::sin(kPi / 8.0), 2);
  rep.upper_bound = 0.5 * s2;
  rep.lower_bound = 0.25 - 0.5 * s2;

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix rho = pure_state(bell);
  const Unitary a = kron(rotation(kPi / 8.0), Unitary::identity(2));
  const Unitary b = kron(Unitary::identity(2), rotation(-kPi / 8.0));
  const ProbVector p0 = born_vector(rho);
  rep.v0_marginal = p0;
  constexpr Index k00 = 0, k10 = 2;

  rep.ok = true;
  for (Theory t : {Theory::Dieks, Theory::Flow, Theory::Schrodinger}) {
    NogoRow row;
    row.theory = t;
    const RealMatrix a_first = S_of(t, evolve(rho, a), b, opts) * S_of(t, rho, a, opts);
    const RealMatrix b_first = S_of(t, evolve(rho, b), a, opts) * S_of(t, rho, b, opts);
    row.pr_a_first = a_first(k10, k00) * p0(k00);
    row.pr_b_first = b_first(k10, k00) * p0(k00);
    row.pr_v2_10_a_first = (a_first * p0)(k10);
    row.pr_v2_10_b_first = (b_first * p0)(k10);
    row.commutativity_deviation = max_entry_norm(a_first - b_first);
    row.bounds_hold = row.pr_a_first <= rep.upper_bound + 1e-6 && row.pr_b_first >= rep.lower_bound - 1e-6;
    rep.ok = rep.ok && row.bounds_hold;
    rep.rows.push_back(row);
  }
  return rep;
}

DecompReport repro_decomp(const TheoryOptions& opts) {
  DecompReport rep;
  const double theta = kPi / 8.0;
  rep.theta = theta;
  const double s2 = std::pow(std::sin(theta), 2);
  rep.lhs = 0.5 * s2;
  rep.rhs_bound = 0.5 * (0.5 - s2);
  const Unitary r = rotation(theta);
  RealMatrix forced_minus(2, 2), forced_plus(2, 2);
  forced_minus << 1, 1, 0, 0;
  forced_plus << 0, 0, 1, 1;
  const RealMatrix uniform = RealMatrix::Constant(2, 2, 0.5);
  const ComplexVector minus = phi_state(-theta), plus = phi_state(kPi / 2.0 - theta);
  const DensityMatrix mixed = maximally_mixed(2);

  rep.ok = rep.lhs < rep.rhs_bound;
  for (Theory t : kAllTheories) {
    DecompRow row;
    row.theory = t;
    row.s_minus = S_of(t, pure_state(minus), r, opts);
    row.s_plus = S_of(t, pure_state(plus), r, opts);
    row.forced_deviation =
        std::max(max_entry_norm(row.s_minus - forced_minus), max_entry_norm(row.s_plus - forced_plus));
    row.s_mixed = S_of(t, mixed, r, opts);
    row.deviation_from_uniform = max_entry_norm(row.s_mixed - uniform);
    const JointMatrix basis_mix =
        0.5 * (joint(t, pure_state(basis_state(2, 0)), r, opts) + joint(t, pure_state(basis_state(2, 1)), r, opts));
    const JointMatrix phi_mix = 0.5 * (joint(t, pure_state(phi_state(theta)), r, opts) +
                                       joint(t, pure_state(phi_state(5.0 * theta)), r, opts));
    row.p01_basis_mixture = basis_mix(1, 0);
    row.p01_phi_mixture = phi_mix(1, 0);
    row.p01_actual = joint(t, mixed, r, opts)(1, 0);
    rep.ok = rep.ok && row.forced_deviation <= 1e-7 && row.p01_basis_mixture <= rep.lhs + 1e-9 &&
             row.p01_phi_mixture >= rep.rhs_bound - 1e-9;
    rep.rows.push_back(std::move(row));
  }
  rep.ft_s_mixed_quarter = S_of(Theory::Flow, mixed, rotation(kPi / 4.0), opts);
  rep.ok = rep.ok && max_entry_norm(rep.ft_s_mixed_quarter - RealMatrix::Identity(2, 2)) <= 1e-9;
  return rep;
}

Unitary strong_continuity_unitary() {
  const double h = 1.0 / std::sqrt(2.0);
  ComplexMatrix m(3, 3);
  m << 1, 0, 0, 0, h, -h, 0, h, h;
  return Unitary::unchecked(m);
}

ComplexVector strong_continuity_state(double delta, double sign) {
  ComplexVector v(3);
  v << std::sqrt(1.0 - 2.0 * delta * delta), delta, sign * delta;
  return v;
}

StrongContinuityReport repro_strong_continuity(const std::vector<double>& deltas, const TheoryOptions& opts) {
  StrongContinuityReport rep;
  const Unitary u = strong_continuity_unitary();
  RealMatrix expect(3, 3), expect_tilde(3, 3);
  expect << 1, 0, 0, 0, 0, 0, 0, 1, 1;
  expect_tilde << 1, 0, 0, 0, 1, 1, 0, 0, 0;
  rep.ok = true;
  for (double d : deltas) {
    const DensityMatrix rho = pure_state(strong_continuity_state(d, 1.0));
    const DensityMatrix rho_t = pure_state(strong_continuity_state(d, -1.0));
    for (Theory t : {Theory::Dieks, Theory::Flow, Theory::Schrodinger}) {
      StrongContinuityRow row;
      row.delta = d;
      row.theory = t;
      const TheoryResult a = apply_theory(t, rho, u, opts);
      const TheoryResult b = apply_theory(t, rho_t, u, opts);
      row.s_rho = a.S.S;
      row.s_rho_tilde = b.S.S;
      row.s_jump = max_entry_norm(row.s_rho_tilde - row.s_rho);
      row.rho_distance = max_entry_norm(rho_t.matrix() - rho.matrix());
      row.p_distance = max_entry_norm(b.P - a.P);
      row.matches_expected =
          max_entry_norm(row.s_rho - expect) <= 1e-9 && max_entry_norm(row.s_rho_tilde - expect_tilde) <= 1e-9;
      rep.ok = rep.ok && row.matches_expected;
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

Expected expected_cell(Axiom axiom, Theory theory) {
  using E = Expected;
  // Rows: PT, DT, FT, ST.
  auto pick = [&](E pt, E dt, E ft, E st) {
    switch (theory) {
      case Theory::Product: return pt;
      case Theory::Dieks: return dt;
      case Theory::Flow: return ft;
      case Theory::Schrodinger: return st;
    }
    return pt;
  };
  switch (axiom) {
    case Axiom::Symmetry: return pick(E::Yes, E::Yes, E::Yes, E::Yes);
    case Axiom::Indifference: return pick(E::No, E::Yes, E::Yes, E::Yes);
    case Axiom::Robustness: return pick(E::Yes, E::No, E::Yes, E::Open);
    case Axiom::BlockRobustness: return pick(E::Yes, E::Yes, E::Yes, E::Open);
    case Axiom::Commutativity: return pick(E::Yes, E::No, E::No, E::No);
    case Axiom::ProductCommutativity: return pick(E::Yes, E::Yes, E::No, E::Yes);
    case Axiom::DecompositionInvariance: return pick(E::Yes, E::Yes, E::No, E::No);
    default: break;
  }
  throw ValidationError("axiom '" + std::string(to_string(axiom)) + "' is not a table column");
}

namespace {

struct Instance {
  DensityMatrix rho;
  Unitary u;
};

// A unitary that is a direct sum of Haar blocks, scattered by a random
// relabelling so blocks are not contiguous.
Unitary random_block_unitary(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Unitary> blocks;
  Index left = n, k = 0;
  while (left > 0) {
    const Index size = std::uniform_int_distribution<Index>(1, std::max<Index>(1, std::min<Index>(left, n - 1)))(rng);
    blocks.push_back(random_unitary(size, mix_seed(seed, static_cast<std::uint64_t>(k++))));
    left -= size;
  }
  Permutation perm = identity_permutation(n);
  std::shuffle(perm.begin(), perm.end(), rng);
  return relabel(direct_sum(blocks), perm);
}

Instance random_instance(std::uint64_t base, int k, Index max_dim, bool blocky) {
  const std::uint64_t s = mix_seed(base, static_cast<std::uint64_t>(k));
  const Index n = 2 + static_cast<Index>(k) % (max_dim - 1);
  const Index rank = 1 + static_cast<Index>(mix_seed(s, 7) % static_cast<std::uint64_t>(n));
  const Unitary u = blocky ? random_block_unitary(n, mix_seed(s, 1)) : random_unitary(n, mix_seed(s, 1));
  return {random_density(n, mix_seed(s, 2), rank), u};
}

std::uint64_t cell_seed(const TableOptions& opts, Axiom axiom) {
  return mix_seed(opts.seed, static_cast<std::uint64_t>(axiom));
}

ComplexVector random_pure(Index n, std::uint64_t seed) { return random_unitary(n, seed).matrix().col(0); }

Verdict verdict_for_cell(const AxiomReport& r) { return r.verdict; }

}  // namespace

TableCell table_cell(Axiom axiom, Theory theory, const TableOptions& opts) {
  const TheoryOptions& to = opts.theory;
  const std::uint64_t base = cell_seed(opts, axiom);
  const Unitary u_sc = strong_continuity_unitary();
  const DensityMatrix rho_sc = pure_state(strong_continuity_state(0.1, 1.0));
  AxiomReport rep = empty_report(axiom, theory, kEqualityTol);

  switch (axiom) {
    case Axiom::Symmetry: {
      rep.absorb(check_symmetry(theory, maximally_mixed(2), rotation(kPi / 4.0), opts.symmetry_perms, base, kEqualityTol, to));
      for (int k = 0; k < opts.suite_size; ++k) {
        const Instance in = random_instance(base, k, opts.max_dim, k % 2 == 1);
        rep.absorb(check_symmetry(theory, in.rho, in.u, opts.symmetry_perms, mix_seed(base, 1000 + k), kEqualityTol, to));
      }
      break;
    }
    case Axiom::Indifference: {
      rep.absorb(check_indifference(theory, maximally_mixed(4), kron(rotation(kPi / 8.0), Unitary::identity(2)),
                                    kEqualityTol, to));
      rep.absorb(check_indifference(theory, rho_sc, u_sc, kEqualityTol, to));
      for (int k = 0; k < opts.suite_size; ++k) {
        const Instance in = random_instance(base, k, opts.max_dim, true);
        rep.absorb(check_indifference(theory, in.rho, in.u, kEqualityTol, to));
      }
      break;
    }
    case Axiom::Robustness:
    case Axiom::BlockRobustness: {
      auto probe = [&](const DensityMatrix& rho, const Unitary& u, int trials, std::uint64_t seed) {
        return axiom == Axiom::Robustness ? probe_robustness(theory, rho, u, opts.delta, trials, seed, to)
                                          : check_block_robustness(theory, rho, u, opts.delta, trials, seed, to);
      };
      rep = probe(maximally_mixed(3), u_sc, opts.robustness_trials, mix_seed(base, 1));
      rep.absorb(probe(rho_sc, u_sc, opts.robustness_trials, mix_seed(base, 2)));
      rep.absorb(probe(maximally_mixed(2), rotation(kPi / 4.0), opts.robustness_trials, mix_seed(base, 3)));
      for (int k = 0; k < opts.suite_size; ++k) {
        const Instance in = random_instance(base, k, opts.max_dim, k % 2 == 1 || axiom == Axiom::BlockRobustness);
        rep.absorb(probe(in.rho, in.u, opts.robustness_trials, mix_seed(base, 100 + k)));
      }
      break;
    }
    case Axiom::Commutativity: {
      ComplexVector bell = ComplexVector::Zero(4);
      bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
      rep.absorb(check_commutativity(theory, pure_state(bell), rotation(kPi / 8.0), rotation(-kPi / 8.0),
                                     kEqualityTol, to));
      for (int k = 0; k < opts.suite_size; ++k) {
        const std::uint64_t s = mix_seed(base, static_cast<std::uint64_t>(k));
        const Index rank = 1 + static_cast<Index>(mix_seed(s, 7) % 4);
        rep.absorb(check_commutativity(theory, random_density(4, mix_seed(s, 1), rank), random_unitary(2, mix_seed(s, 2)),
                                       random_unitary(2, mix_seed(s, 3)), kEqualityTol, to));
      }
      break;
    }
    case Axiom::ProductCommutativity: {
      rep.absorb(check_product_commutativity(theory, phi_state(kPi / 4.0), phi_state(-kPi / 8.0), rotation(kPi / 4.0),
                                             rotation(kPi / 4.0), kEqualityTol, to));
      for (int k = 0; k < opts.suite_size; ++k) {
        const std::uint64_t s = mix_seed(base, static_cast<std::uint64_t>(k));
        rep.absorb(check_product_commutativity(theory, random_pure(2, mix_seed(s, 1)), random_pure(2, mix_seed(s, 2)),
                                               random_unitary(2, mix_seed(s, 3)), random_unitary(2, mix_seed(s, 4)),
                                               kEqualityTol, to));
      }
      break;
    }
    case Axiom::DecompositionInvariance: {
      const Decomposition phi_pair = {{0.5, phi_state(kPi / 8.0)}, {0.5, phi_state(5.0 * kPi / 8.0)}};
      rep.absorb(check_decomposition_invariance(theory, phi_pair, rotation(kPi / 4.0), kEqualityTol, to));
      rep.absorb(check_decomposition_invariance(theory, phi_pair, rotation(kPi / 8.0), kEqualityTol, to));
      for (int k = 0; k < opts.suite_size; ++k) {
        const std::uint64_t s = mix_seed(base, static_cast<std::uint64_t>(k));
        const Index n = 2 + static_cast<Index>(k) % (opts.max_dim - 1);
        std::mt19937_64 rng(mix_seed(s, 9));
        std::exponential_distribution<double> expo(1.0);
        Decomposition dec;
        double total = 0.0;
        for (Index c = 0; c < n; ++c) {
          dec.emplace_back(expo(rng), random_pure(n, mix_seed(s, 10 + static_cast<std::uint64_t>(c))));
          total += dec.back().first;
        }
        for (auto& [p, psi] : dec) p /= total;
        rep.absorb(check_decomposition_invariance(theory, dec, random_unitary(n, mix_seed(s, 1)), kEqualityTol, to));
      }
      break;
    }
    default:
      throw ValidationError("axiom '" + std::string(to_string(axiom)) + "' is not a table column");
  }

  TableCell cell;
  cell.axiom = axiom;
  cell.theory = theory;
  cell.expected = expected_cell(axiom, theory);
  cell.report = std::move(rep);
  cell.hard = cell.expected != Expected::Open;
  const Verdict v = verdict_for_cell(cell.report);
  switch (cell.expected) {
    case Expected::Yes: cell.matches = v == Verdict::Holds; break;
    case Expected::No: cell.matches = v == Verdict::Violated; break;
    case Expected::Open: cell.matches = true; break;
  }
  return cell;
}

const TableCell& AxiomTable::cell(Axiom a, Theory t) const {
  for (const auto& c : cells)
    if (c.axiom == a && c.theory == t) return c;
  throw std::out_of_range("axiom table: no such cell");
}

AxiomTable axiom_table(const TableOptions& opts) {
  AxiomTable table;
  for (Axiom a : kTableAxioms)
    for (Theory t : kAllTheories) {
      table.cells.push_back(table_cell(a, t, opts));
      table.all_hard_match = table.all_hard_match && table.cells.back().matches;
    }
  return table;
}

}  // namespace hvt
