#pragma once

// Three-layer capacity network built from (rho, U):
//
//   s --(rho)_ii--> |i>_in --|U(j,i)|--> |j>_out --(U rho U^dagger)_jj--> t
//
// and the flows on it. Flow matrices use the joint-matrix layout: f(j, i) is
// the mass routed from input |i> to output |j>. The lexicographic order that
// determinises the maximal flow visits edges input-major, (i, j) =
// (0,0), (0,1), ..., (0,N-1), (1,0), ... which is the storage order of a
// column-major Eigen matrix.

#include "hvt/qcore.hpp"

namespace hvt {

struct FlowNetwork {
  RealVector source_caps;  // (rho)_ii
  RealMatrix middle_caps;  // (j, i) -> |U(j, i)|^exponent
  RealVector sink_caps;    // (U rho U^dagger)_jj

  Index dim() const { return source_caps.size(); }
};

using FlowMatrix = RealMatrix;

struct MaxFlowResult {
  FlowMatrix flow;
  double value = 0.0;
};

/// Flows below this are reported as exactly zero.
inline constexpr double kFlowFloor = 1e-12;

/// `capacity_exponent` = 1 gives the network used by the flow theory; other
/// exponents (e.g. 2) build the variants for which one unit of flow need not
/// fit.
FlowNetwork build_network(const DensityMatrix& rho, const Unitary& u,
                          double capacity_exponent = 1.0);

/// The network of the relabelled system: vertex a of the result is vertex
/// perm[a] of the input.
FlowNetwork relabel(const FlowNetwork& net, const Permutation& perm);

/// Shortest-augmenting-path (Edmonds-Karp) maximum flow.
MaxFlowResult max_flow(const FlowNetwork& net);

/// Lexicographically maximal flow f*: f*(0,0) is maximal over all maximum
/// flows, then f*(1,0) (input 0 -> output 1) given f*(0,0), and so on in
/// input-major order. Each step maximises one edge with augmenting cycles in
/// the residual network while the total value and earlier edges stay fixed.
FlowMatrix lex_max_flow(const FlowNetwork& net);
FlowMatrix lex_max_flow(const DensityMatrix& rho, const Unitary& u);

}  // namespace hvt
