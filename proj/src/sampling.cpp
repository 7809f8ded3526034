#include "hvt/sampling.hpp"

#include <random>
#include <sstream>

namespace hvt {

namespace {

struct Chain {
  std::vector<DensityMatrix> states;  // rho_0 .. rho_T
  std::vector<StochasticMatrix> S;    // S_1 .. S_T
};

Chain build_chain(const DensityMatrix& rho, const std::vector<Unitary>& steps, Theory theory,
                  const TheoryOptions& opts) {
  Chain c;
  c.states.push_back(rho);
  for (std::size_t t = 0; t < steps.size(); ++t) {
    if (steps[t].dim() != rho.dim()) {
      std::ostringstream os;
      os << "sample: unitary " << t + 1 << " has dimension " << steps[t].dim() << ", state has " << rho.dim();
      throw ValidationError(os.str());
    }
    c.S.push_back(apply_theory(theory, c.states.back(), steps[t], opts).S);
    c.states.push_back(evolve(c.states.back(), steps[t]));
  }
  return c;
}

}  // namespace

RealMatrix chained_endpoint_distribution(const DensityMatrix& rho, const std::vector<Unitary>& steps,
                                         Theory theory, const TheoryOptions& opts) {
  const Chain c = build_chain(rho, steps, theory, opts);
  RealMatrix prod = RealMatrix::Identity(rho.dim(), rho.dim());
  for (const auto& s : c.S) prod = s.S * prod;
  return prod * born_vector(rho).asDiagonal();
}

SampleReport sample_trajectories(const DensityMatrix& rho, const std::vector<Unitary>& steps,
                                 const SampleOptions& opts) {
  if (opts.n_traj == 0) throw ValidationError("sample: number of trajectories must be positive");
  const Index n = rho.dim();
  const Chain chain = build_chain(rho, steps, opts.theory, opts.theory_options);

  SampleReport rep;
  rep.theory = opts.theory;
  rep.seed = opts.seed;
  rep.n_traj = opts.n_traj;
  ProbVector exact = born_vector(rho);
  rep.exact_marginals.push_back(exact);
  rep.born_marginals.push_back(born_vector(rho));
  for (std::size_t t = 0; t < chain.S.size(); ++t) {
    const StochasticMatrix& s = chain.S[t];
    for (Index col : s.undefined_columns)
      if (exact(col) > 1e-12) {
        std::ostringstream os;
        os << "sample: step " << t + 1 << " reaches undefined column " << col << " of S with probability "
           << exact(col);
        throw UndefinedTransitionError(os.str(), t + 1, col);
      }
    rep.transitions.push_back(s.S);
    exact = s.S * exact;
    rep.exact_marginals.push_back(exact);
    rep.born_marginals.push_back(born_vector(chain.states[t + 1]));
  }

  auto distribution = [](const RealVector& w) {
    std::vector<double> weights(w.data(), w.data() + w.size());
    for (auto& x : weights) x = std::max(x, 0.0);
    return std::discrete_distribution<Index>(weights.begin(), weights.end());
  };
  auto initial = distribution(born_vector(rho));
  std::vector<std::vector<std::discrete_distribution<Index>>> columns(chain.S.size());
  for (std::size_t t = 0; t < chain.S.size(); ++t)
    for (Index i = 0; i < n; ++i) columns[t].push_back(distribution(chain.S[t].S.col(i)));

  CountMatrix visits = CountMatrix::Zero(n, static_cast<Index>(chain.S.size() + 1));
  rep.transition_counts.assign(chain.S.size(), CountMatrix::Zero(n, n));
  rep.endpoint_counts = CountMatrix::Zero(n, n);

  std::mt19937_64 rng(opts.seed);
  std::vector<Index> path(chain.S.size() + 1);
  for (std::size_t k = 0; k < opts.n_traj; ++k) {
    path[0] = initial(rng);
    for (std::size_t t = 0; t < chain.S.size(); ++t) {
      path[t + 1] = columns[t][static_cast<std::size_t>(path[t])](rng);
      ++rep.transition_counts[t](path[t + 1], path[t]);
    }
    for (std::size_t t = 0; t < path.size(); ++t) ++visits(path[t], static_cast<Index>(t));
    ++rep.endpoint_counts(path.back(), path.front());
    if (k < opts.keep) rep.trajectories.push_back(path);
  }
  for (Index t = 0; t < visits.cols(); ++t)
    rep.empirical_marginals.push_back(visits.col(t).cast<double>() / static_cast<double>(opts.n_traj));
  return rep;
}

}  // namespace hvt
