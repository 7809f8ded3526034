#pragma once

// The four hidden-variable theories behind one interface. Each maps
// (rho, U) to a joint matrix P with P(j, i) = Pr[input |i>, output |j>];
// columns sum to (rho)_ii and rows to (U rho U^dagger)_jj. The transition
// matrix S divides column i by (rho)_ii, or takes the eps -> 0+ limit along
// (1 - eps) rho + eps I/N when (rho)_ii vanishes.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hvt/blocks.hpp"
#include "hvt/flows.hpp"
#include "hvt/qcore.hpp"

namespace hvt {

enum class Theory { Product, Dieks, Flow, Schrodinger };

inline constexpr std::array<Theory, 4> kAllTheories = {Theory::Product, Theory::Dieks, Theory::Flow,
                                                       Theory::Schrodinger};

/// "PT", "DT", "FT", "ST".
std::string_view to_string(Theory t);
/// Accepts pt/dt/ft/st in either case; throws ValidationError otherwise.
Theory parse_theory(std::string_view name);

using JointMatrix = RealMatrix;

struct StochasticMatrix {
  RealMatrix S;
  // Columns whose eps-limit did not settle; their entries are zero.
  std::vector<Index> undefined_columns;

  bool defined(Index column) const;
};

struct FtMode {
  enum class Kind { Exact, Sampled };
  Kind kind = Kind::Exact;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;

  static FtMode exact() { return {}; }
  static FtMode sampled(std::size_t samples, std::uint64_t seed) { return {Kind::Sampled, samples, seed}; }
};

/// Largest dimension for which the flow theory enumerates all N! relabellings.
inline constexpr Index kFtExactMaxDim = 7;

/// Observer for Schrödinger scaling: called with the step counter t and the
/// iterate U^(t) for t = 0, 1, 2, ... (odd t after column steps, even t > 0
/// after row steps).
using ScalingObserver = std::function<void(long, const RealMatrix&)>;

struct TheoryOptions {
  double zero_tol = kZeroTol;
  double st_tol = 1e-10;
  long st_max_iter = 100000;
  FtMode ft_mode = FtMode::exact();
  ScalingObserver st_observer;
};

struct EpsilonLimitOptions {
  std::array<double, 3> schedule = {1e-4, 1e-5, 1e-6};
  double stabilization = 1e-4;
  // Columns with (rho)_ii above this are divided directly.
  double defined_threshold = 1e-12;
};

struct Diagnostics {
  std::optional<long> st_iterations;
  std::optional<double> st_residual;
  std::optional<double> flow_value;
  std::optional<std::size_t> permutations;
  bool approximate = false;
  std::optional<double> monte_carlo_stderr;
  std::optional<std::size_t> zero_mass_blocks;
  std::size_t limit_columns = 0;  // columns resolved through the eps-limit
};

struct TheoryResult {
  Theory theory = Theory::Product;
  JointMatrix P;
  StochasticMatrix S;
  Diagnostics diagnostics;
};

/// Product theory: P = q p^T.
JointMatrix pt_joint(const DensityMatrix& rho, const Unitary& u);

/// Product theory inside each minimal block, zero across blocks. A block
/// with output mass below 1e-12 spreads uniformly over its outputs.
JointMatrix dt_joint(const DensityMatrix& rho, const Unitary& u, double zero_tol = kZeroTol);

struct FlowJoint {
  JointMatrix P;
  std::size_t permutations = 0;
  bool approximate = false;
  double monte_carlo_stderr = 0.0;
};

/// Flow theory: lex-max flow averaged over basis relabellings, all N! of
/// them in exact mode (N <= 7, else ValidationError), or `samples` seeded
/// uniform ones in sampled mode.
FlowJoint ft_joint_detailed(const DensityMatrix& rho, const Unitary& u, const FtMode& mode);
JointMatrix ft_joint(const DensityMatrix& rho, const Unitary& u, const FtMode& mode = FtMode::exact());

struct ScalingResult {
  JointMatrix P;
  long iterations = 0;
  double residual = 0.0;           // max relative marginal deviation
  double absolute_residual = 0.0;  // max absolute marginal deviation
  std::vector<double> residual_history;
};

/// Schrödinger theory: alternately rescale |U| (entries <= zero_tol
/// dropped) so columns sum to (rho)_ii and rows to (U rho U^dagger)_jj.
/// Targets at or below 1e-12 are zeroed and skipped. Stops at the first
/// iterate whose column and row sums are all within `tol` relative to their
/// targets; throws ConvergenceError after `max_iter` scaling steps.
ScalingResult st_scale(const DensityMatrix& rho, const Unitary& u, const TheoryOptions& opts = {});
JointMatrix st_joint(const DensityMatrix& rho, const Unitary& u, double tol = 1e-10,
                     long max_iter = 100000);

/// log Z = sum_ij f(j,i) log iterate(j,i) with 0 log 0 = 0; -inf when
/// positive flow meets a zero iterate entry. Throws ValidationError if f is
/// negative or the shapes differ.
double sinkhorn_log_progress(const RealMatrix& iterate, const FlowMatrix& f);
/// Z = exp(log Z), in [0, 1] for iterates after the first scaling step.
double sinkhorn_progress(const RealMatrix& iterate, const FlowMatrix& f);

/// Support check for progress measures: throws ValidationError when f
/// carries flow (> kFlowFloor) on an entry where |U| <= zero_tol.
void require_support(const FlowMatrix& f, const Unitary& u, double zero_tol = kZeroTol);

using JointFunction = std::function<JointMatrix(const DensityMatrix&)>;

/// S from P: defined columns divide by (rho)_ii, the rest are evaluated via
/// `recompute` at regularize(rho, eps) over the schedule and accepted when
/// successive values agree to `stabilization` (last value kept), else
/// flagged undefined.
StochasticMatrix stochastic_from_joint(const JointMatrix& P, const DensityMatrix& rho,
                                       const JointFunction& recompute,
                                       const EpsilonLimitOptions& eps = {},
                                       std::size_t* limit_columns = nullptr);

/// P of `theory` at (rho, U), without S.
JointMatrix joint(Theory theory, const DensityMatrix& rho, const Unitary& u,
                  const TheoryOptions& opts = {});

TheoryResult apply_theory(Theory theory, const DensityMatrix& rho, const Unitary& u,
                          const TheoryOptions& opts = {});

/// Convenience: apply_theory(...).S.S
RealMatrix transition(Theory theory, const DensityMatrix& rho, const Unitary& u,
                      const TheoryOptions& opts = {});

}  // namespace hvt
