#include "hvt/blocks.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace hvt {

std::vector<std::size_t> BlockPartition::block_of_input() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.inputs.size();
  std::vector<std::size_t> owner(n);
  for (std::size_t k = 0; k < blocks.size(); ++k)
    for (Index i : blocks[k].inputs) owner[static_cast<std::size_t>(i)] = k;
  return owner;
}

std::vector<std::size_t> BlockPartition::block_of_output() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.outputs.size();
  std::vector<std::size_t> owner(n);
  for (std::size_t k = 0; k < blocks.size(); ++k)
    for (Index j : blocks[k].outputs) owner[static_cast<std::size_t>(j)] = k;
  return owner;
}

std::vector<std::vector<Index>> BlockPartition::input_groups() const {
  std::vector<std::vector<Index>> groups;
  groups.reserve(blocks.size());
  for (const auto& b : blocks) groups.push_back(b.inputs);
  return groups;
}

BlockPartition minimal_blocks(const Unitary& u, double zero_tol) {
  const Index n = u.dim();
  const auto& m = u.matrix();
  // Vertices 0..n-1 are inputs, n..2n-1 outputs.
  std::vector<bool> seen(static_cast<std::size_t>(2 * n), false);
  BlockPartition part;
  part.zero_tol = zero_tol;

  for (Index start = 0; start < n; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    Block blk;
    std::queue<Index> frontier;
    frontier.push(start);
    seen[static_cast<std::size_t>(start)] = true;
    while (!frontier.empty()) {
      const Index v = frontier.front();
      frontier.pop();
      if (v < n) {
        blk.inputs.push_back(v);
        for (Index j = 0; j < n; ++j)
          if (!seen[static_cast<std::size_t>(n + j)] && std::abs(m(j, v)) > zero_tol) {
            seen[static_cast<std::size_t>(n + j)] = true;
            frontier.push(n + j);
          }
      } else {
        const Index j = v - n;
        blk.outputs.push_back(j);
        for (Index i = 0; i < n; ++i)
          if (!seen[static_cast<std::size_t>(i)] && std::abs(m(j, i)) > zero_tol) {
            seen[static_cast<std::size_t>(i)] = true;
            frontier.push(i);
          }
      }
    }
    std::sort(blk.inputs.begin(), blk.inputs.end());
    std::sort(blk.outputs.begin(), blk.outputs.end());
    part.blocks.push_back(std::move(blk));
  }

  // Outputs with no support at all would form components with no inputs.
  for (Index j = 0; j < n; ++j)
    if (!seen[static_cast<std::size_t>(n + j)]) part.blocks.push_back(Block{{}, {j}});

  for (std::size_t k = 0; k < part.blocks.size(); ++k) {
    const auto& b = part.blocks[k];
    if (b.inputs.size() != b.outputs.size()) {
      std::ostringstream os;
      os << "minimal_blocks: component " << k << " has " << b.inputs.size() << " inputs {";
      for (Index i : b.inputs) os << ' ' << i;
      os << " } but " << b.outputs.size() << " outputs {";
      for (Index j : b.outputs) os << ' ' << j;
      os << " }; zero_tol " << zero_tol << " misclassifies an entry";
      throw BlockStructureError(os.str());
    }
  }
  return part;
}

bool same_blocks(const Unitary& a, const Unitary& b, double zero_tol) {
  if (a.dim() != b.dim()) throw ValidationError("same_blocks: dimension mismatch");
  return minimal_blocks(a, zero_tol).blocks == minimal_blocks(b, zero_tol).blocks;
}

}  // namespace hvt
