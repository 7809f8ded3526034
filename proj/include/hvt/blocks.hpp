#pragma once

// Minimal blocks of a unitary: connected components of the bipartite
// support graph (input i -- output j whenever |U(j, i)| > zero_tol).

#include <vector>

#include "hvt/qcore.hpp"

namespace hvt {

inline constexpr double kZeroTol = 1e-12;

struct Block {
  std::vector<Index> inputs;   // I, ascending
  std::vector<Index> outputs;  // J, ascending

  friend bool operator==(const Block&, const Block&) = default;
};

struct BlockPartition {
  // Ordered by smallest input index.
  std::vector<Block> blocks;
  double zero_tol = kZeroTol;

  std::size_t size() const { return blocks.size(); }
  /// block_of_input[i] / block_of_output[j] give the owning block index.
  std::vector<std::size_t> block_of_input() const;
  std::vector<std::size_t> block_of_output() const;
  /// The I-sets, in block order.
  std::vector<std::vector<Index>> input_groups() const;
};

/// Throws BlockStructureError if a component has |I| != |J|.
BlockPartition minimal_blocks(const Unitary& u, double zero_tol = kZeroTol);

bool same_blocks(const Unitary& a, const Unitary& b, double zero_tol = kZeroTol);

}  // namespace hvt
