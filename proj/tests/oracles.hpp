#pragma once

// Independent reference implementations used only by the tests. None of
// them share code with the library beyond the basic matrix types.

#include <optional>
#include <vector>

#include "hvt/qcore.hpp"

namespace oracle {

using hvt::Index;
using hvt::RealMatrix;
using hvt::RealVector;

enum class Sense { Le, Ge, Eq };

struct Constraint {
  RealVector a;
  Sense sense;
  double b;
};

struct LpResult {
  double value = 0.0;
  RealVector x;
};

/// max c.x subject to the constraints and x >= 0; dense two-phase simplex
/// with Bland's rule. nullopt when infeasible or unbounded.
std::optional<LpResult> simplex_max(const RealVector& c, const std::vector<Constraint>& constraints);

/// Capacities of the three-layer network, recomputed from scratch.
struct Network {
  RealVector p;    // source -> input i
  RealMatrix cap;  // (j, i): input i -> output j
  RealVector q;    // output j -> sink
};

Network network(const hvt::DensityMatrix& rho, const hvt::Unitary& u, double exponent = 1.0);

/// Maximum flow value via the LP.
double lp_max_flow(const Network& net);

/// Minimum s-t cut by enumerating all 2^(2N) cuts.
double min_cut(const Network& net);

/// Lexicographically maximal flow by one LP per edge, input-major order.
RealMatrix lp_lex_max_flow(const Network& net);

/// FT joint matrix: lex-max flows averaged over all N! relabellings.
RealMatrix ft_joint(const hvt::DensityMatrix& rho, const hvt::Unitary& u);

/// DT joint matrix from a union-find over the support of U.
RealMatrix dt_joint(const hvt::DensityMatrix& rho, const hvt::Unitary& u, double zero_tol = 1e-12);

/// 2x2 Schrödinger scaling in closed form: the limit keeps the cross ratio
/// a d / (b c) of |U| and has the prescribed marginals, which leaves a
/// quadratic in one entry. Requires every |U| entry and marginal positive.
RealMatrix st_joint_2x2(const hvt::DensityMatrix& rho, const hvt::Unitary& u);

}  // namespace oracle
