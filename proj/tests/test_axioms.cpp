#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hvt/axioms.hpp"

using namespace hvt;
constexpr double kPi = std::numbers::pi;

namespace {

const double kSin2 = std::pow(std::sin(kPi / 8), 2);

DensityMatrix sc_rho(double delta) { return pure_state(strong_continuity_state(delta, 1.0)); }

void expect_recheck(const AxiomReport& r, Axiom a, Theory t) {
  ASSERT_FALSE(r.witnesses.empty());
  const Witness& w = r.witnesses.front();
  EXPECT_NEAR(recheck_witness(a, t, w), w.deviation, 1e-12);
}

}  // namespace

TEST(Names, RoundTrip) {
  for (Axiom a : kTableAxioms) EXPECT_EQ(parse_axiom(to_string(a)), a);
  EXPECT_EQ(to_string(Axiom::BlockRobustness), "block-robustness");
  EXPECT_EQ(display_name(Axiom::BlockRobustness), "Block Robustness");
  EXPECT_THROW(parse_axiom("nope"), ValidationError);
}

TEST(Verdicts, Bands) {
  EXPECT_EQ(equality_verdict(0.0), Verdict::Holds);
  EXPECT_EQ(equality_verdict(1e-7), Verdict::Holds);
  EXPECT_EQ(equality_verdict(1e-5), Verdict::Inconclusive);
  EXPECT_EQ(equality_verdict(0.01), Verdict::Violated);
}

TEST(Absorb, KeepsWorst) {
  AxiomReport a, b;
  a.verdict = Verdict::Holds;
  a.max_deviation = 1e-9;
  a.trials = 2;
  a.measurements["nonconverged_trials"] = 1;
  b.verdict = Verdict::Violated;
  b.max_deviation = 0.5;
  b.trials = 3;
  b.witnesses.push_back({"w", {}, {}, 0.5});
  b.measurements["nonconverged_trials"] = 2;
  a.absorb(b);
  EXPECT_EQ(a.verdict, Verdict::Violated);
  EXPECT_EQ(a.trials, 5);
  EXPECT_DOUBLE_EQ(a.max_deviation, 0.5);
  EXPECT_EQ(a.witnesses.front().label, "w");
  EXPECT_DOUBLE_EQ(a.measurements["nonconverged_trials"], 3);
}

TEST(Marginalization, Examples) {
  const auto pt = check_marginalization(Theory::Product, maximally_mixed(2), rotation(kPi / 8), 1e-9);
  EXPECT_LE(pt.max_deviation, 1e-12);
  EXPECT_EQ(pt.verdict, Verdict::Holds);
  const auto st = check_marginalization(Theory::Schrodinger, maximally_mixed(2), rotation(kPi / 8), 1e-8);
  EXPECT_LE(st.max_deviation, 1e-8);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Index n = 2 + static_cast<Index>(s % 4);
    const auto ft = check_marginalization(Theory::Flow, random_density(n, s, 1 + static_cast<Index>(s % n)),
                                          random_unitary(n, s + 5000), 1e-7);
    ASSERT_EQ(ft.verdict, Verdict::Holds) << "seed " << s;
  }
}

TEST(Symmetry, Examples) {
  for (Theory t : kAllTheories) {
    const auto r = check_symmetry(t, random_density(3, 1, 3), random_unitary(3, 2), 6, 0);
    EXPECT_EQ(r.verdict, Verdict::Holds) << to_string(t) << " " << r.max_deviation;
  }
  const auto ft = check_symmetry(Theory::Flow, maximally_mixed(2), rotation(kPi / 4), 2, 0, 1e-9);
  EXPECT_EQ(ft.verdict, Verdict::Holds);
  EXPECT_EQ(ft.trials, 2);
  expect_recheck(ft, Axiom::Symmetry, Theory::Flow);
}

TEST(Indifference, Examples) {
  const Unitary tensor = kron(rotation(kPi / 8), Unitary::identity(2));
  const auto dt = check_indifference(Theory::Dieks, sc_rho(0.1), strong_continuity_unitary());
  EXPECT_EQ(dt.max_deviation, 0.0);
  const auto pt = check_indifference(Theory::Product, maximally_mixed(4), tensor);
  EXPECT_EQ(pt.verdict, Verdict::Violated);
  EXPECT_GE(pt.witnesses.front().deviation, 0.1);
  expect_recheck(pt, Axiom::Indifference, Theory::Product);
  const auto ft = check_indifference(Theory::Flow, maximally_mixed(4), tensor);
  EXPECT_LE(ft.max_deviation, 1e-9);
}

TEST(Robustness, ZeroDeltaAndFtBound) {
  const auto zero = probe_robustness(Theory::Flow, maximally_mixed(2), rotation(kPi / 4), 0.0, 5, 1);
  EXPECT_EQ(zero.max_deviation, 0.0);
  const auto ft = probe_robustness(Theory::Flow, maximally_mixed(2), rotation(kPi / 4), 1e-3, 50, 1);
  EXPECT_NEAR(robustness_bound(2, 1e-3), 0.0352, 1e-12);
  EXPECT_LE(ft.max_deviation, 0.032);
  EXPECT_EQ(ft.verdict, Verdict::Holds);
  EXPECT_EQ(ft.trials, 50);
  expect_recheck(ft, Axiom::Robustness, Theory::Flow);
}

TEST(Robustness, DieksJumpsAcrossBlocks) {
  const auto dt = probe_robustness(Theory::Dieks, maximally_mixed(3), strong_continuity_unitary(), 1e-3, 5, 2);
  EXPECT_EQ(dt.verdict, Verdict::Violated);
  EXPECT_GT(dt.max_deviation, 0.2);
  expect_recheck(dt, Axiom::Robustness, Theory::Dieks);
}

TEST(Robustness, SchrodingerIsProbeOnly) {
  const auto st = probe_robustness(Theory::Schrodinger, maximally_mixed(2), rotation(kPi / 4), 1e-3, 10, 1);
  EXPECT_EQ(st.verdict, Verdict::ProbeOnly);
  EXPECT_GT(st.max_deviation, 0.0);
}

TEST(BlockRobustness, Examples) {
  const Unitary u = strong_continuity_unitary();
  const auto dt = check_block_robustness(Theory::Dieks, sc_rho(0.1), u, 1e-3, 50, 3);
  EXPECT_EQ(dt.verdict, Verdict::Holds);
  EXPECT_LT(dt.max_deviation, robustness_bound(3, 1e-3));
  const auto zero = check_block_robustness(Theory::Dieks, sc_rho(0.1), u, 0.0, 3, 3);
  EXPECT_EQ(zero.max_deviation, 0.0);
  const auto st = check_block_robustness(Theory::Schrodinger, sc_rho(0.1), u, 1e-3, 50, 3);
  EXPECT_EQ(st.verdict, Verdict::ProbeOnly);
  expect_recheck(dt, Axiom::BlockRobustness, Theory::Dieks);
}

TEST(Commutativity, Examples) {
  const DensityMatrix bell = pure_state((basis_state(4, 0) + basis_state(4, 3)) / std::sqrt(2.0));
  const Unitary ua = rotation(kPi / 8), ub = rotation(-kPi / 8);
  EXPECT_LE(check_commutativity(Theory::Product, random_density(4, 3, 4), random_unitary(2, 1), random_unitary(2, 2))
                .max_deviation,
            1e-9);
  const auto ft = check_commutativity(Theory::Flow, bell, ua, ub);
  EXPECT_EQ(ft.verdict, Verdict::Violated);
  expect_recheck(ft, Axiom::Commutativity, Theory::Flow);
  EXPECT_EQ(check_commutativity(Theory::Schrodinger, bell, ua, ub).verdict, Verdict::Violated);
  EXPECT_EQ(check_commutativity(Theory::Dieks, bell, ua, ub).verdict, Verdict::Violated);
  EXPECT_THROW(check_commutativity(Theory::Product, maximally_mixed(3), ua, ub), ValidationError);
}

TEST(ProductCommutativity, Examples) {
  const ComplexVector a = phi_state(kPi / 4), b = phi_state(-kPi / 8);
  const Unitary r = rotation(kPi / 4);
  const auto st = check_product_commutativity(Theory::Schrodinger, a, b, r, r);
  EXPECT_EQ(st.verdict, Verdict::Holds) << st.max_deviation;
  const auto ft = check_product_commutativity(Theory::Flow, a, b, r, r);
  EXPECT_EQ(ft.verdict, Verdict::Violated);
  expect_recheck(ft, Axiom::ProductCommutativity, Theory::Flow);
  EXPECT_EQ(check_product_commutativity(Theory::Product, a, b, r, rotation(0.3)).verdict, Verdict::Holds);
}

TEST(DecompositionInvariance, Examples) {
  const Decomposition dec = {{0.5, phi_state(kPi / 8)}, {0.5, phi_state(5 * kPi / 8)}};
  const auto ft = check_decomposition_invariance(Theory::Flow, dec, rotation(kPi / 4), kEqualityTol, {},
                                                 maximally_mixed(2));
  EXPECT_EQ(ft.verdict, Verdict::Violated);
  expect_recheck(ft, Axiom::DecompositionInvariance, Theory::Flow);
  // Mixture of the two pure-state matrices against S(I/2, R_{pi/8}).
  const auto st = check_decomposition_invariance(Theory::Schrodinger, dec, rotation(kPi / 8));
  EXPECT_EQ(st.verdict, Verdict::Violated);
  RealMatrix mixed = 0.5 * transition(Theory::Schrodinger, pure_state(phi_state(kPi / 8)), rotation(kPi / 8)) +
                     0.5 * transition(Theory::Schrodinger, pure_state(phi_state(5 * kPi / 8)), rotation(kPi / 8));
  RealMatrix want(2, 2);
  want << 0.689469, 0.310531, 0.310531, 0.689469;
  EXPECT_LT((mixed - want).cwiseAbs().maxCoeff(), 1e-6) << mixed;
  EXPECT_NEAR(st.max_deviation, 0.707107 - 0.689469, 1e-6);
  const auto single = check_decomposition_invariance(Theory::Product, {{1.0, phi_state(0.4)}}, rotation(0.9));
  EXPECT_EQ(single.max_deviation, 0.0);
  EXPECT_THROW(check_decomposition_invariance(Theory::Product, dec, rotation(0.1), kEqualityTol, {},
                                              pure_state(phi_state(0.1))),
               ValidationError);
}

TEST(DecompositionInvariance, DieksAcrossBlocks) {
  // Inside one block DT is PT, which is linear in rho.
  const Decomposition split = {{0.5, phi_state(kPi / 8)}, {0.5, phi_state(5 * kPi / 8)}};
  EXPECT_EQ(check_decomposition_invariance(Theory::Dieks, split, rotation(kPi / 8)).verdict, Verdict::Holds);
  // Across blocks the per-block normalisation is not: column 0 is
  // (0.618, 0.382) against the mixture's (1/2, 1/2).
  const Unitary u = direct_sum({rotation(kPi / 8), Unitary::identity(1)});
  const Decomposition mixed = {{0.5, basis_state(3, 0)}, {0.5, (basis_state(3, 1) + basis_state(3, 2)) / std::sqrt(2.0)}};
  const auto dt = check_decomposition_invariance(Theory::Dieks, mixed, u);
  EXPECT_EQ(dt.verdict, Verdict::Violated);
  expect_recheck(dt, Axiom::DecompositionInvariance, Theory::Dieks);
}

TEST(TimeSlicing, Examples) {
  EXPECT_LE(check_time_slicing(Theory::Product, phi_state(0.3), rotation(0.2), rotation(0.7)).max_deviation, 1e-9);
  const ComplexVector plus = phi_state(kPi / 4);
  const auto ft = check_time_slicing(Theory::Flow, plus, rotation(kPi / 4), rotation(-kPi / 4));
  ASSERT_TRUE(ft.measurements.count("pt_form_deviation"));
  EXPECT_LE(ft.measurements.at("pt_form_deviation"), 1e-9);
  const auto st = check_time_slicing(Theory::Schrodinger, phi_state(kPi / 8), rotation(kPi / 16), rotation(kPi / 16));
  EXPECT_GT(st.max_deviation, 1e-6);
}

TEST(ReproNogo, Bounds) {
  const NogoReport r = repro_nogo();
  EXPECT_NEAR(r.upper_bound, kSin2 / 2, 1e-15);
  EXPECT_NEAR(r.upper_bound, 0.0732233, 1e-7);
  EXPECT_NEAR(r.lower_bound, 0.1767767, 1e-7);
  EXPECT_NEAR(r.v0_marginal(0), 0.5, 1e-15);
  EXPECT_NEAR(r.v0_marginal(3), 0.5, 1e-15);
  ASSERT_EQ(r.rows.size(), 3u);
  for (const NogoRow& row : r.rows) {
    EXPECT_LE(row.pr_a_first, r.upper_bound + 1e-9) << to_string(row.theory);
    EXPECT_GE(row.pr_b_first, r.lower_bound - 1e-9) << to_string(row.theory);
    EXPECT_NEAR(row.pr_v2_10_a_first, 0.25, 1e-9);
    EXPECT_NEAR(row.pr_v2_10_b_first, 0.25, 1e-9);
    EXPECT_GT(row.commutativity_deviation, 1e-3);
  }
  EXPECT_TRUE(r.ok);
}

TEST(ReproDecomp, ForcedMatrices) {
  const DecompReport r = repro_decomp();
  EXPECT_NEAR(r.lhs, 0.0732233, 1e-7);
  EXPECT_NEAR(r.rhs_bound, 0.1767767, 1e-7);
  RealMatrix top(2, 2);
  top << 1, 1, 0, 0;
  for (const DecompRow& row : r.rows) {
    EXPECT_LT((row.s_minus - top).cwiseAbs().maxCoeff(), 1e-6) << to_string(row.theory);
    EXPECT_LE(row.forced_deviation, 1e-6);
    EXPECT_NEAR(row.p01_basis_mixture, kSin2 / 2, 1e-9);
    EXPECT_GE(row.p01_phi_mixture, r.rhs_bound - 1e-9);
  }
  EXPECT_LT((r.ft_s_mixed_quarter - RealMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_TRUE(r.ok);
}

TEST(ReproStrongContinuity, Matrices) {
  const StrongContinuityReport r = repro_strong_continuity();
  RealMatrix s(3, 3), st(3, 3);
  s << 1, 0, 0, 0, 0, 0, 0, 1, 1;
  st << 1, 0, 0, 0, 1, 1, 0, 0, 0;
  for (const StrongContinuityRow& row : r.rows) {
    EXPECT_LT((row.s_rho - s).cwiseAbs().maxCoeff(), 1e-6) << to_string(row.theory) << " " << row.delta;
    EXPECT_LT((row.s_rho_tilde - st).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_NEAR(row.s_jump, 1.0, 1e-6);
    // rho and rho~ differ by 2 delta sqrt(1 - 2 delta^2) in the (0, 2) entry.
    EXPECT_NEAR(row.rho_distance, 2 * row.delta * std::sqrt(1 - 2 * row.delta * row.delta), 1e-12);
  }
  EXPECT_TRUE(r.ok);
}

TEST(Table, MatchesPublished) {
  const AxiomTable t = axiom_table();
  EXPECT_EQ(t.cells.size(), 28u);
  EXPECT_TRUE(t.all_hard_match);
  for (const TableCell& c : t.cells) EXPECT_TRUE(c.matches) << to_string(c.axiom) << " " << to_string(c.theory);
  EXPECT_EQ(t.cell(Axiom::Robustness, Theory::Flow).report.verdict, Verdict::Holds);
  EXPECT_EQ(t.cell(Axiom::Robustness, Theory::Dieks).report.verdict, Verdict::Violated);
  EXPECT_EQ(t.cell(Axiom::Robustness, Theory::Schrodinger).report.verdict, Verdict::ProbeOnly);
  EXPECT_EQ(expected_cell(Axiom::Indifference, Theory::Product), Expected::No);
  EXPECT_EQ(expected_cell(Axiom::BlockRobustness, Theory::Schrodinger), Expected::Open);
}

TEST(Table, Deterministic) {
  TableOptions opts;
  opts.suite_size = 8;
  const TableCell a = table_cell(Axiom::Symmetry, Theory::Schrodinger, opts);
  const TableCell b = table_cell(Axiom::Symmetry, Theory::Schrodinger, opts);
  EXPECT_EQ(a.report.max_deviation, b.report.max_deviation);
  EXPECT_EQ(a.report.trials, b.report.trials);
}

TEST(Table, OtherSeedsAgree) {
  for (std::uint64_t seed : {1u, 2u}) {
    TableOptions opts;
    opts.seed = seed;
    opts.suite_size = 20;
    EXPECT_TRUE(axiom_table(opts).all_hard_match) << "seed " << seed;
  }
}
