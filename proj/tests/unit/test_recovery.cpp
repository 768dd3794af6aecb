#include <gtest/gtest.h>

#include <cmath>

#include "lostructure/config.hpp"
#include "lostructure/errors.hpp"
#include "lostructure/harness.hpp"
#include "lostructure/recovery.hpp"
#include "oracles.hpp"

using namespace lostructure;
using oracle::q;

namespace {

RecoveryParams manual(const Rational& qv, const Rational& p, std::size_t n_prime, int r,
                      const Rational& tau = q(1), const Rational& kappa = q(1), const Rational& delta = q(1)) {
  RecoveryParams P;
  P.q = qv;
  P.p_val = p;
  P.n_prime = n_prime;
  P.r = r;
  P.tau = tau;
  P.kappa = kappa;
  P.delta = delta;
  return P;
}

const Config& calibrated() {
  static Config cfg = load_config(LOSTRUCTURE_CALIBRATED_CONFIG);
  return cfg;
}

std::vector<Rational> scalars(const WeightVector& a) { return a.scalar_entries(); }

std::set<Rational> scaled(const std::set<Rational>& s, const Rational& l) {
  std::set<Rational> out;
  for (const auto& x : s) out.insert(x * l);
  return out;
}

}  // namespace

TEST(SelectM, PositiveTauExample) {
  auto P = manual(q(1, 2), q(1, 2), 64, 0);
  EXPECT_NEAR(window_lower(P), 32.0, 1e-9);
  EXPECT_EQ(select_m(P, 200), 1u);
}

TEST(SelectM, GrowsLikeInverseQ) {
  std::vector<std::size_t> ms;
  for (long k : {4096, 8192, 16384}) ms.push_back(select_m(manual(q(1, k), q(1), 200'000, 1), 1'000'000));
  EXPECT_NEAR(static_cast<double>(ms[1]) / ms[0], 2.0, 0.1);
  EXPECT_NEAR(static_cast<double>(ms[2]) / ms[1], 2.0, 0.1);
}

TEST(SelectM, ZeroTauBranch) {
  auto P = manual(q(1), q(1), 4, 0, q(0), q(1), q(0));
  // floor(2 / sqrt(4)) + 1
  EXPECT_EQ(select_m(P, 10), 2u);
  P.n_prime = 5;
  EXPECT_EQ(select_m(P, 10), 1u);
  P.n_prime = 400;
  EXPECT_EQ(select_m(P, 1000), 1u);
}

TEST(SelectM, OutsideWindowThrows) {
  EXPECT_THROW(select_m(manual(q(1, 2), q(1, 2), 16, 0), 200), InvalidWindow);
  EXPECT_THROW(select_m(manual(q(1, 2), q(1, 2), 64, 0), 50), InvalidWindow);
}

TEST(MagnitudeOrder, TiesByIndex) {
  EXPECT_EQ(magnitude_order({q(1), q(-3), q(3), q(0)}), (std::vector<std::size_t>{1, 2, 0, 3}));
}

TEST(Recover, PlantedOutliersAreExcluded) {
  for (std::size_t i : {0u, 3u, 6u}) {
    auto c = thm4_case(i, calibrated().seed);
    const auto& a = c.inst.weight;
    auto params = make_recovery_params(a, c.inst.law, c.tau, c.kappa, c.delta, c.r, calibrated().constants);
    auto rep = recover(a, c.inst.law, params);
    auto img = oracle::cgap_image(rep.K_star, 200);
    auto av = scalars(a);
    EXPECT_EQ(rep.coverage.at("K_star"), oracle::coverage(img, c.delta, av));
    EXPECT_GE(static_cast<long>(rep.coverage.at("K_star")), static_cast<long>(av.size()) - 2 * static_cast<long>(params.n_prime));
    for (auto k : c.inst.planted->outliers) EXPECT_FALSE(oracle::near(img, c.delta, av[k])) << "outlier " << k;
    EXPECT_TRUE(oracle::subset(img, oracle::line_image(rep.bar_P)));
    EXPECT_TRUE(oracle::subset(img, oracle::line_image(rep.barbar_P)));
    EXPECT_TRUE(oracle::gap_proper(rep.barbar_P));
    EXPECT_TRUE(oracle::gap_proper(rep.tilde_P));
    EXPECT_TRUE(oracle::subset(oracle::cgap_image(rep.K_star_star, 200), oracle::line_image(rep.tilde_P)));
    for (const auto& g : rep.bar_P.generators()) EXPECT_LE(g[0] * g[0], rep.generator_bound_sq);
    for (const auto& g : rep.tilde_P.generators()) EXPECT_LE(g[0] * g[0], rep.generator_bound_sq);
  }
}

TEST(Recover, ArithmeticProgressionIsFullyCovered) {
  GenParams p;
  p.n = 600;
  p.g = q(3, 2);
  p.L = 1;
  p.zero_prob = 0.05;
  p.law = "uniform:0:4";
  auto inst = gen_planted("ap", p, 11);
  auto params = make_recovery_params(inst.weight, inst.law, q(3, 4), q(3, 2), q(3, 8), 1, calibrated().constants);
  auto rep = recover(inst.weight, inst.law, params);
  EXPECT_EQ(rep.coverage.at("K_star"), 600u);
  auto img = oracle::cgap_image(rep.K_star, 200);
  auto planted = oracle::line_image(inst.planted->gap);
  for (const auto& x : img) EXPECT_TRUE(oracle::near(planted, q(3, 8), x));
}

TEST(Recover, DegenerateBranchUsesZero) {
  std::vector<Rational> a(90, q(1, 100));
  for (int i = 0; i < 10; ++i) a.push_back(q(3));
  auto w = WeightVector::scalars(a);
  auto F = DiscreteDistribution::uniform_range(0, 4);
  RecoveryParams P;
  ASSERT_NO_THROW(P = make_recovery_params(w, F, q(1), q(2), q(2), 1, calibrated().constants, 30));
  auto rep = recover(w, F, P);
  if (rep.has_flag("NoInformation") || rep.has_flag("TrivialCase")) GTEST_SKIP() << "window not met";
  EXPECT_TRUE(rep.degenerate_zero);
  EXPECT_EQ(oracle::cgap_image(rep.K_star, 10), std::set<Rational>{q(0)});
  EXPECT_EQ(rep.coverage.at("K_star"), 90u);
}

TEST(Recover, ScalingEquivariance) {
  auto c = thm4_case(1, calibrated().seed);
  const auto& a = c.inst.weight;
  auto base = recover(a, c.inst.law,
                      make_recovery_params(a, c.inst.law, c.tau, c.kappa, c.delta, c.r, calibrated().constants));
  for (const Rational& l : {q(2), q(1, 3)}) {
    auto b = a.scaled(l);
    auto rep = recover(b, c.inst.law,
                       make_recovery_params(b, c.inst.law, c.tau * l, c.kappa * l, c.delta * l, c.r,
                                            calibrated().constants, base.params.n_prime));
    EXPECT_EQ(rep.coverage, base.coverage);
    EXPECT_EQ(oracle::cgap_image(rep.K_star, 200), scaled(oracle::cgap_image(base.K_star, 200), l));
    EXPECT_EQ(oracle::line_image(rep.tilde_P), scaled(oracle::line_image(base.tilde_P), l));
  }
}

TEST(RecoverMultid, BlockStructureAndJointCoverage) {
  auto c = thm5_case(0, calibrated().seed);
  const auto& a = c.inst.weight;
  std::vector<RecoveryParams> ps;
  for (std::size_t j = 0; j < a.dim(); ++j)
    ps.push_back(make_recovery_params(a.projection(j), c.inst.law, c.tau, c.kappa, c.delta, c.r,
                                      calibrated().constants));
  auto pr = recover_multid(a, c.inst.law, ps);
  std::size_t rank_sum = 0;
  for (const auto& rep : pr.coordinates) rank_sum += rep.bar_P.rank();
  EXPECT_EQ(pr.bar_P.rank(), rank_sum);
  for (const auto& g : pr.bar_P.generators()) {
    int nz = 0;
    for (const auto& x : g) nz += x != 0;
    EXPECT_EQ(nz, 1);
  }
  std::vector<std::set<Rational>> imgs;
  for (const auto& K : pr.K_star) imgs.push_back(oracle::cgap_image(K, 200));
  std::size_t joint = 0;
  for (const auto& e : a.entries()) {
    bool ok = true;
    for (std::size_t j = 0; j < a.dim(); ++j) ok = ok && oracle::near(imgs[j], c.delta, e[j]);
    joint += ok;
  }
  EXPECT_EQ(pr.joint_coverage.at("K_star"), joint);
  EXPECT_GE(static_cast<long>(joint), pr.guarantee);
  Integer prod = 1;
  for (const auto& rep : pr.coordinates) prod *= oracle::gap_vol(rep.bar_P);
  EXPECT_EQ(oracle::gap_vol(pr.bar_P), prod);
}

TEST(BlockProduct, GeneratorsInOwnCoordinate) {
  Gap A(1, {q(2)}, {{q(3)}});
  Gap B(1, {q(1), q(1)}, {{q(1)}, {q(5)}});
  auto P = block_product({A, B});
  EXPECT_EQ(P.dim(), 2u);
  EXPECT_EQ(P.generators(), (std::vector<RatVec>{{q(3), q(0)}, {q(0), q(1)}, {q(0), q(5)}}));
  EXPECT_EQ(size(P), 5u * 9u);
}

TEST(Schedules, Ranks) {
  EXPECT_EQ(schedule_rank_thm16(1.0, 1.0), 2);
  EXPECT_EQ(schedule_rank_thm16(0.4, 1.0), 0);
  EXPECT_EQ(schedule_rank_thm19(1.0, 1.0, 1.0, 3.0), 2);
  EXPECT_EQ(schedule_rank_thm19(1.0, 0.0, 0.0, 1.0), schedule_rank_thm16(1.0, 1.0));
  EXPECT_THROW(schedule_rank_thm19(1.0, 1.0, 2.0, 2.0), InvalidSchedule);
}

TEST(Schedules, FallbackGap) {
  auto a = WeightVector::scalars({q(9), q(-8), q(7), q(6), q(2), q(-1)});
  auto P = fallback_gap(a, 4);
  EXPECT_EQ(P.rank(), 2u);
  EXPECT_LE(size(P), 9u);
  auto img = oracle::line_image(P);
  EXPECT_TRUE(img.count(q(2)) && img.count(q(-1)));
}

TEST(Schedules, WindowFailureReturnsFallback) {
  Thm16Inputs in;
  in.A = 1;
  in.theta = 1;
  in.q = {1e-6};
  auto a = WeightVector::scalars({q(1), q(2), q(3), q(4), q(5), q(6)});
  auto s = schedule_thm16(in, a);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_FALSE(s[0].window_ok);
  ASSERT_TRUE(s[0].fallback.has_value());
  EXPECT_EQ(s[0].fallback->rank(), 6 - s[0].n_prime);
}

TEST(LogRank, SignSumsRecoverPlantedRank) {
  GenParams p;
  p.n = 40;
  p.rank = 2;
  p.g = q(1);
  auto inst = gen_planted("signsum", p, 5);
  auto rep = lograank_construct(inst.weight, inst.law, q(0), q(1), q(0), calibrated().constants.c8);
  EXPECT_EQ(rep.r, 2);
  EXPECT_EQ(rep.n_prime, 0u);
  auto img = oracle::line_image(rep.gap);
  EXPECT_EQ(oracle::coverage(img, q(0), scalars(inst.weight)), 40u);
  for (const auto& L : rep.gap.dims()) EXPECT_EQ(L, 1);
}

TEST(LogRank, PointMassNeedsNothing) {
  auto a = WeightVector::scalars({q(1, 10), q(-1, 10), q(0)});
  auto rep = lograank_construct(a, DiscreteDistribution::point_mass({q(2)}), q(1, 2), q(1), q(1, 2), 1.0);
  EXPECT_EQ(rep.q, 1);
  EXPECT_EQ(rep.r, 0);
  EXPECT_EQ(rep.n_prime, 0u);
}

TEST(LogRank, CoverageHistoryMonotone) {
  for (std::size_t i = 0; i < 6; ++i) {
    auto c = lograank_case(i, 3);
    auto rep = lograank_construct(c.inst.weight, c.inst.law, c.tau, c.kappa, c.delta, 1.0);
    for (std::size_t k = 1; k < rep.coverage_history.size(); ++k)
      EXPECT_GE(rep.coverage_history[k], rep.coverage_history[k - 1]);
  }
}

TEST(LogRank, ProductBlocks) {
  GenParams p;
  p.n = 30;
  p.d = 2;
  p.g = q(2);
  p.L = 1;
  auto inst = gen_planted("product_d", p, 9);
  auto pr = lograank_multid(inst.weight, inst.law, {q(0), q(0)}, {q(1), q(1)}, {q(0), q(0)}, 1.0);
  EXPECT_EQ(pr.total_rank, pr.gap.rank());
  for (const auto& g : pr.gap.generators()) {
    int nz = 0;
    for (const auto& x : g) nz += x != 0;
    EXPECT_EQ(nz, 1);
  }
  EXPECT_EQ(pr.blocks.back(), pr.total_rank);
}
