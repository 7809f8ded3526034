#include <gtest/gtest.h>

#include <numbers>

#include "hvt/axioms.hpp"
#include "hvt/blocks.hpp"

using namespace hvt;

TEST(Blocks, DiagonalHasSingletons) {
  const BlockPartition p = minimal_blocks(Unitary::identity(4));
  ASSERT_EQ(p.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(p.blocks[k].inputs, std::vector<Index>{static_cast<Index>(k)});
    EXPECT_EQ(p.blocks[k].outputs, std::vector<Index>{static_cast<Index>(k)});
  }
}

TEST(Blocks, FullUnitaryIsOneBlock) {
  EXPECT_EQ(minimal_blocks(random_unitary(5, 2)).size(), 1u);
}

TEST(Blocks, StrongContinuityUnitary) {
  const BlockPartition p = minimal_blocks(strong_continuity_unitary());
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.blocks[0].inputs, std::vector<Index>{0});
  EXPECT_EQ(p.blocks[1].inputs, (std::vector<Index>{1, 2}));
  EXPECT_EQ(p.blocks[1].outputs, (std::vector<Index>{1, 2}));
}

TEST(Blocks, PermutedDirectSum) {
  // Blocks {0,1} and {2}, relabelled so the block {0,1} sits on {1,2}.
  const Unitary u = relabel(direct_sum({rotation(0.3), Unitary::identity(1)}), Permutation{2, 0, 1});
  const BlockPartition p = minimal_blocks(u);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.blocks[0].inputs, std::vector<Index>{0});
  EXPECT_EQ(p.blocks[1].inputs, (std::vector<Index>{1, 2}));
  EXPECT_EQ(p.block_of_output()[2], 1u);
  EXPECT_EQ(p.input_groups()[1], (std::vector<Index>{1, 2}));
}

TEST(Blocks, PermutationMatrixCrossesLabels) {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(1, 0) = m(2, 1) = m(0, 2) = 1.0;
  const BlockPartition p = minimal_blocks(Unitary::validated(m));
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p.blocks[0].outputs, std::vector<Index>{1});
}

TEST(Blocks, ZeroTolControlsSupport) {
  ComplexMatrix m = rotation(1e-9).matrix();
  const Unitary u = Unitary::validated(m);
  EXPECT_EQ(minimal_blocks(u).size(), 1u);
  EXPECT_EQ(minimal_blocks(u, 1e-6).size(), 2u);
}

TEST(Blocks, UnbalancedComponentThrows) {
  // A tolerance above every entry leaves inputs without outputs.
  EXPECT_THROW(minimal_blocks(rotation(0.3), 0.99), BlockStructureError);
}

TEST(Blocks, SameBlocks) {
  EXPECT_TRUE(same_blocks(rotation(0.2), rotation(1.1)));
  EXPECT_FALSE(same_blocks(rotation(0.2), Unitary::identity(2)));
}
