#include "hvt/theories.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace hvt {

namespace {

constexpr double kZeroMass = 1e-12;

void require_same_dim(const DensityMatrix& rho, const Unitary& u, const char* who) {
  if (rho.dim() != u.dim()) {
    std::ostringstream os;
    os << who << ": dimension mismatch, rho is " << rho.dim() << ", U is " << u.dim();
    throw ValidationError(os.str());
  }
}

}  // namespace

std::string_view to_string(Theory t) {
  switch (t) {
    case Theory::Product: return "PT";
    case Theory::Dieks: return "DT";
    case Theory::Flow: return "FT";
    case Theory::Schrodinger: return "ST";
  }
  return "?";
}

Theory parse_theory(std::string_view name) {
  std::string s(name);
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (s == "pt" || s == "product") return Theory::Product;
  if (s == "dt" || s == "dieks") return Theory::Dieks;
  if (s == "ft" || s == "flow") return Theory::Flow;
  if (s == "st" || s == "schrodinger") return Theory::Schrodinger;
  throw ValidationError("unknown theory '" + std::string(name) + "' (expected pt, dt, ft or st)");
}

bool StochasticMatrix::defined(Index column) const {
  return std::find(undefined_columns.begin(), undefined_columns.end(), column) == undefined_columns.end();
}

JointMatrix pt_joint(const DensityMatrix& rho, const Unitary& u) {
  require_same_dim(rho, u, "pt_joint");
  return output_born_vector(rho, u) * born_vector(rho).transpose();
}

JointMatrix dt_joint(const DensityMatrix& rho, const Unitary& u, double zero_tol) {
  require_same_dim(rho, u, "dt_joint");
  const ProbVector p = born_vector(rho);
  const ProbVector q = output_born_vector(rho, u);
  const BlockPartition part = minimal_blocks(u, zero_tol);
  JointMatrix P = JointMatrix::Zero(u.dim(), u.dim());
  for (const auto& b : part.blocks) {
    double mass = 0.0;
    for (Index j : b.outputs) mass += q(j);
    for (Index i : b.inputs)
      for (Index j : b.outputs) {
        const double s = mass > kZeroMass ? q(j) / mass : 1.0 / static_cast<double>(b.outputs.size());
        P(j, i) = s * p(i);
      }
  }
  return P;
}

FlowJoint ft_joint_detailed(const DensityMatrix& rho, const Unitary& u, const FtMode& mode) {
  require_same_dim(rho, u, "ft_joint");
  const Index n = u.dim();
  const FlowNetwork net = build_network(rho, u);
  FlowJoint out;
  out.P = JointMatrix::Zero(n, n);

  if (mode.kind == FtMode::Kind::Exact) {
    if (n > kFtExactMaxDim) {
      std::ostringstream os;
      os << "ft_joint: exact mode enumerates N! relabellings and is limited to N <= " << kFtExactMaxDim
         << " (got N = " << n << "); use sampled mode, e.g. --ft-mode sampled:10000";
      throw ValidationError(os.str());
    }
    // Fixed enumeration order keeps the sum bit-stable.
    Permutation perm = identity_permutation(n);
    do {
      out.P += unrelabel(lex_max_flow(relabel(net, perm)), perm);
      ++out.permutations;
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.P /= static_cast<double>(out.permutations);
    return out;
  }

  if (mode.samples == 0) throw ValidationError("ft_joint: sampled mode needs at least one sample");
  std::mt19937_64 rng(mode.seed);
  Permutation perm = identity_permutation(n);
  RealMatrix mean = RealMatrix::Zero(n, n);
  RealMatrix m2 = RealMatrix::Zero(n, n);
  for (std::size_t k = 1; k <= mode.samples; ++k) {
    std::shuffle(perm.begin(), perm.end(), rng);
    const RealMatrix x = unrelabel(lex_max_flow(relabel(net, perm)), perm);
    const RealMatrix d = x - mean;
    mean += d / static_cast<double>(k);
    m2 += d.cwiseProduct(x - mean);
  }
  out.P = mean;
  out.permutations = mode.samples;
  out.approximate = true;
  if (mode.samples > 1) {
    const double m = static_cast<double>(mode.samples);
    out.monte_carlo_stderr = std::sqrt(m2.maxCoeff() / (m - 1.0) / m);
  }
  return out;
}

JointMatrix ft_joint(const DensityMatrix& rho, const Unitary& u, const FtMode& mode) {
  return ft_joint_detailed(rho, u, mode).P;
}

ScalingResult st_scale(const DensityMatrix& rho, const Unitary& u, const TheoryOptions& opts) {
  require_same_dim(rho, u, "st_joint");
  if (!(opts.st_tol > 0.0)) throw ValidationError("st_joint: tolerance must be positive");
  const Index n = u.dim();
  ProbVector p = born_vector(rho);
  ProbVector q = output_born_vector(rho, u);
  for (Index k = 0; k < n; ++k) {
    if (p(k) <= kZeroMass) p(k) = 0.0;
    if (q(k) <= kZeroMass) q(k) = 0.0;
  }
  // Equal totals make exact relative convergence reachable after small
  // targets were dropped.
  if (q.sum() > 0.0) q *= p.sum() / q.sum();

  RealMatrix m = u.matrix().cwiseAbs();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (m(j, i) <= opts.zero_tol || p(i) == 0.0 || q(j) == 0.0) m(j, i) = 0.0;

  auto deviation = [&](double& rel, double& abs_dev) {
    rel = 0.0;
    abs_dev = 0.0;
    const RealVector cs = m.colwise().sum().transpose();
    const RealVector rs = m.rowwise().sum();
    for (Index k = 0; k < n; ++k) {
      abs_dev = std::max({abs_dev, std::abs(cs(k) - p(k)), std::abs(rs(k) - q(k))});
      if (p(k) > 0.0) rel = std::max(rel, std::abs(cs(k) / p(k) - 1.0));
      if (q(k) > 0.0) rel = std::max(rel, std::abs(rs(k) / q(k) - 1.0));
    }
  };

  ScalingResult res;
  if (opts.st_observer) opts.st_observer(0, m);
  for (long t = 1; t <= opts.st_max_iter; ++t) {
    const bool column_step = (t % 2) == 1;
    for (Index k = 0; k < n; ++k) {
      const double target = column_step ? p(k) : q(k);
      if (target == 0.0) continue;
      const double sum = column_step ? m.col(k).sum() : m.row(k).sum();
      if (!(sum > 1e-300)) {
        std::ostringstream os;
        os << "st_joint: " << (column_step ? "column " : "row ") << k
           << " has no support left but needs mass " << target;
        throw ConvergenceError(os.str(), m, res.residual_history);
      }
      if (column_step)
        m.col(k) *= target / sum;
      else
        m.row(k) *= target / sum;
    }
    if (opts.st_observer) opts.st_observer(t, m);
    double rel = 0.0, abs_dev = 0.0;
    deviation(rel, abs_dev);
    res.residual_history.push_back(rel);
    if (rel <= opts.st_tol) {
      res.P = m;
      res.iterations = t;
      res.residual = rel;
      res.absolute_residual = abs_dev;
      return res;
    }
  }
  std::ostringstream os;
  os << "st_joint: no convergence to " << opts.st_tol << " within " << opts.st_max_iter
     << " scaling steps (last residual " << res.residual_history.back() << ")";
  throw ConvergenceError(os.str(), m, res.residual_history);
}

JointMatrix st_joint(const DensityMatrix& rho, const Unitary& u, double tol, long max_iter) {
  TheoryOptions opts;
  opts.st_tol = tol;
  opts.st_max_iter = max_iter;
  return st_scale(rho, u, opts).P;
}

double sinkhorn_log_progress(const RealMatrix& iterate, const FlowMatrix& f) {
  if (iterate.rows() != f.rows() || iterate.cols() != f.cols())
    throw ValidationError("sinkhorn_progress: shape mismatch");
  double log_z = 0.0;
  for (Index i = 0; i < f.cols(); ++i)
    for (Index j = 0; j < f.rows(); ++j) {
      const double w = f(j, i);
      if (w < 0.0) throw ValidationError("sinkhorn_progress: negative flow");
      if (w == 0.0) continue;
      if (iterate(j, i) <= 0.0) return -std::numeric_limits<double>::infinity();
      log_z += w * std::log(iterate(j, i));
    }
  return log_z;
}

double sinkhorn_progress(const RealMatrix& iterate, const FlowMatrix& f) {
  return std::exp(sinkhorn_log_progress(iterate, f));
}

void require_support(const FlowMatrix& f, const Unitary& u, double zero_tol) {
  for (Index i = 0; i < f.cols(); ++i)
    for (Index j = 0; j < f.rows(); ++j)
      if (f(j, i) > kFlowFloor && std::abs(u.matrix()(j, i)) <= zero_tol) {
        std::ostringstream os;
        os << "flow " << f(j, i) << " on edge (input " << i << ", output " << j
           << ") where |U| <= " << zero_tol;
        throw ValidationError(os.str());
      }
}

StochasticMatrix stochastic_from_joint(const JointMatrix& P, const DensityMatrix& rho,
                                       const JointFunction& recompute, const EpsilonLimitOptions& eps,
                                       std::size_t* limit_columns) {
  const Index n = P.cols();
  StochasticMatrix out;
  out.S = RealMatrix::Zero(P.rows(), n);
  std::vector<Index> pending;
  for (Index i = 0; i < n; ++i) {
    const double mass = rho.population(i);
    if (mass > eps.defined_threshold)
      out.S.col(i) = P.col(i) / mass;
    else
      pending.push_back(i);
  }
  if (limit_columns) *limit_columns = pending.size();
  if (pending.empty()) return out;

  std::vector<RealMatrix> ladder;
  for (double e : eps.schedule) {
    const DensityMatrix reg = regularize(rho, e);
    RealMatrix s = recompute(reg);
    for (Index i : pending) s.col(i) /= reg.population(i);
    ladder.push_back(std::move(s));
  }
  for (Index i : pending) {
    bool settled = true;
    for (std::size_t k = 1; k < ladder.size(); ++k)
      if (max_entry_norm(ladder[k].col(i) - ladder[k - 1].col(i)) > eps.stabilization) settled = false;
    if (settled)
      out.S.col(i) = ladder.back().col(i);
    else
      out.undefined_columns.push_back(i);
  }
  return out;
}

JointMatrix joint(Theory theory, const DensityMatrix& rho, const Unitary& u, const TheoryOptions& opts) {
  switch (theory) {
    case Theory::Product: return pt_joint(rho, u);
    case Theory::Dieks: return dt_joint(rho, u, opts.zero_tol);
    case Theory::Flow: return ft_joint(rho, u, opts.ft_mode);
    case Theory::Schrodinger: {
      TheoryOptions quiet = opts;
      quiet.st_observer = nullptr;
      return st_scale(rho, u, quiet).P;
    }
  }
  throw ValidationError("joint: unknown theory");
}

TheoryResult apply_theory(Theory theory, const DensityMatrix& rho, const Unitary& u, const TheoryOptions& opts) {
  require_same_dim(rho, u, "apply_theory");
  TheoryResult res;
  res.theory = theory;
  switch (theory) {
    case Theory::Product:
      res.P = pt_joint(rho, u);
      break;
    case Theory::Dieks: {
      res.P = dt_joint(rho, u, opts.zero_tol);
      const ProbVector q = output_born_vector(rho, u);
      std::size_t zero_mass = 0;
      for (const auto& b : minimal_blocks(u, opts.zero_tol).blocks) {
        double mass = 0.0;
        for (Index j : b.outputs) mass += q(j);
        if (mass <= kZeroMass) ++zero_mass;
      }
      res.diagnostics.zero_mass_blocks = zero_mass;
      break;
    }
    case Theory::Flow: {
      const FlowJoint fj = ft_joint_detailed(rho, u, opts.ft_mode);
      res.P = fj.P;
      res.diagnostics.permutations = fj.permutations;
      res.diagnostics.approximate = fj.approximate;
      if (fj.approximate) res.diagnostics.monte_carlo_stderr = fj.monte_carlo_stderr;
      res.diagnostics.flow_value = max_flow(build_network(rho, u)).value;
      break;
    }
    case Theory::Schrodinger: {
      const ScalingResult sr = st_scale(rho, u, opts);
      res.P = sr.P;
      res.diagnostics.st_iterations = sr.iterations;
      res.diagnostics.st_residual = sr.residual;
      break;
    }
  }
  const JointFunction recompute = [&](const DensityMatrix& r) { return joint(theory, r, u, opts); };
  res.S = stochastic_from_joint(res.P, rho, recompute, EpsilonLimitOptions{}, &res.diagnostics.limit_columns);
  return res;
}

RealMatrix transition(Theory theory, const DensityMatrix& rho, const Unitary& u, const TheoryOptions& opts) {
  return apply_theory(theory, rho, u, opts).S.S;
}

}  // namespace hvt
