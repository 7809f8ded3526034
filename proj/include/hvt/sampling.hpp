#pragma once

// Hidden-variable trajectories: v_0 is drawn from the Born vector of rho and
// v_{t+1} from column v_t of S(rho_t, U_{t+1}), where rho_t is the state
// after the first t unitaries. Each listed unitary is one transition step.

#include <cstdint>
#include <vector>

#include "hvt/errors.hpp"
#include "hvt/theories.hpp"

namespace hvt {

// A trajectory can reach a column of S whose eps-limit is undefined.
class UndefinedTransitionError : public ValidationError {
 public:
  UndefinedTransitionError(const std::string& what, std::size_t step, Index column)
      : ValidationError(what), step_(step), column_(column) {}
  std::size_t step() const { return step_; }
  Index column() const { return column_; }

 private:
  std::size_t step_;
  Index column_;
};

using CountMatrix = Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>;

struct SampleOptions {
  Theory theory = Theory::Product;
  std::size_t n_traj = 1000;
  std::uint64_t seed = 0;
  std::size_t keep = 0;  // trajectories retained verbatim
  TheoryOptions theory_options;
};

struct SampleReport {
  Theory theory = Theory::Product;
  std::uint64_t seed = 0;
  std::size_t n_traj = 0;
  std::vector<RealMatrix> transitions;           // S(rho_t, U_{t+1})
  std::vector<ProbVector> exact_marginals;       // chained S applied to the Born vector
  std::vector<ProbVector> born_marginals;        // born_vector(rho_t)
  std::vector<ProbVector> empirical_marginals;   // t = 0..T
  std::vector<CountMatrix> transition_counts;    // counts(j, i) for v_t = i, v_{t+1} = j
  std::vector<std::vector<Index>> trajectories;  // first `keep`
  // Empirical frequency of (v_0 = a, v_T = b) as counts(b, a).
  CountMatrix endpoint_counts;
};

/// Exact Pr[v_0 = a, v_T = b] = (S_T ... S_1)(b, a) (rho)_aa.
RealMatrix chained_endpoint_distribution(const DensityMatrix& rho, const std::vector<Unitary>& steps,
                                         Theory theory, const TheoryOptions& opts = {});

/// Throws UndefinedTransitionError naming the step when a trajectory reaches
/// an undefined column with chained probability above 1e-12.
SampleReport sample_trajectories(const DensityMatrix& rho, const std::vector<Unitary>& steps,
                                 const SampleOptions& opts);

}  // namespace hvt
