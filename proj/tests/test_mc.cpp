#include <gtest/gtest.h>

#include <cmath>

#include "mc_kernel.hpp"
#include "tailscale/errors.hpp"
#include "tailscale/models.hpp"
#include "tailscale/oracle.hpp"

using namespace tailscale;

namespace {

double se(const OracleResult& r) { return std::get<StatisticalError>(r.error).std_error; }

const ModelPair kPg = WorkedModel::poisson_gamma(1, 1, 3).pair();
const ModelPair kGp = WorkedModel::gamma_poisson(1, 3, 1).pair();
const PowerScaling kScaling(1.5);

}  // namespace

TEST(McKernel, SubstreamSplitCoversBudget) {
  for (unsigned w : {1u, 3u, 7u}) {
    std::uint64_t total = 0;
    for (unsigned i = 0; i < w; ++i) total += detail::substream_samples(1001, w, i);
    EXPECT_EQ(total, 1001u);
  }
}

TEST(McKernel, MergeMatchesSinglePass) {
  detail::Moments all, a, b;
  for (int i = 0; i < 100; ++i) {
    const double x = std::sin(i * 0.37) + 0.1 * i;
    all.add(x);
    (i < 37 ? a : b).add(x);
  }
  const auto m = detail::Moments::merge(a, b);
  EXPECT_EQ(m.count, all.count);
  EXPECT_NEAR(m.mean, all.mean, 1e-14);
  EXPECT_NEAR(m.m2, all.m2, 1e-10);
}

TEST(McKernel, SubstreamsDiffer) {
  auto a = detail::substream(7, 0), b = detail::substream(7, 1), c = detail::substream(8, 0);
  const auto x = a(), y = b(), z = c();
  EXPECT_NE(x, y);
  EXPECT_NE(x, z);
  EXPECT_EQ(detail::substream(7, 0)(), x);
}

TEST(ImportanceSampling, AgreesWithNegBin) {
  const double n = 400, u = 1.0;
  const auto exact = exact_tail(WorkedModel::poisson_gamma(1, 1, 3), kScaling, n, u).probability;
  const auto r = is_tail(kPg, kScaling, n, u, 100000, 11);
  EXPECT_EQ(r.method, OracleMethod::ImportanceSampling);
  EXPECT_LE(std::abs(r.probability - exact), 3 * se(r)) << r.probability << " vs " << exact;
}

TEST(ImportanceSampling, AgreesWithCompoundSeries) {
  const double n = 400, u = 1.0;
  const auto exact = exact_tail(WorkedModel::gamma_poisson(1, 3, 1), kScaling, n, u).probability;
  const auto r = is_tail(kGp, kScaling, n, u, 100000, 12);
  EXPECT_LE(std::abs(r.probability - exact), 3 * se(r)) << r.probability << " vs " << exact;
}

TEST(ImportanceSampling, SeedDeterminism) {
  const auto a = is_tail(kPg, kScaling, 400, 1.0, 20000, 5);
  const auto b = is_tail(kPg, kScaling, 400, 1.0, 20000, 5);
  const auto c = is_tail(kPg, kScaling, 400, 1.0, 20000, 6);
  EXPECT_EQ(a.probability, b.probability);
  EXPECT_EQ(se(a), se(b));
  EXPECT_NE(a.probability, c.probability);
}

TEST(ImportanceSampling, ParallelMatchesSerialBitwise) {
  for (unsigned w : {1u, 2u, 4u, 8u}) {
    const McConfig cfg{20000, 99, w};
    for (const auto* m : {&kPg, &kGp}) {
      const auto p = is_tail(*m, kScaling, 400, 1.0, cfg);
      const auto s = serial::is_tail(*m, kScaling, 400, 1.0, cfg);
      EXPECT_EQ(p.probability, s.probability) << w;
      EXPECT_EQ(se(p), se(s)) << w;
      EXPECT_EQ(std::get<StatisticalError>(p.error).workers, w);
    }
    const auto pp = plain_mc_tail(kPg, kScaling, 50, 1.01 / 3, cfg);
    const auto ps = serial::plain_mc_tail(kPg, kScaling, 50, 1.01 / 3, cfg);
    EXPECT_EQ(pp.probability, ps.probability);
  }
}

TEST(ImportanceSampling, CoverageAcrossSeeds) {
  const double n = 400, u = 1.0;
  const auto exact = exact_tail(WorkedModel::poisson_gamma(1, 1, 3), kScaling, n, u).probability;
  int inside = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto r = is_tail(kPg, kScaling, n, u, 100000, seed);
    if (std::abs(r.probability - exact) <= 2.5758 * se(r)) ++inside;
  }
  EXPECT_GE(inside, 27);
}

TEST(ImportanceSampling, RelativeErrorAtOneInAMillion) {
  const double n = 400, u = 0.48;
  const auto exact = exact_tail(WorkedModel::poisson_gamma(1, 1, 3), kScaling, n, u).probability;
  ASSERT_GT(exact, 5e-7);
  ASSERT_LT(exact, 2e-6);
  const auto r = is_tail(kPg, kScaling, n, u, 100000, 3);
  EXPECT_LE(se(r) / r.probability, 0.05);
}

TEST(PlainMc, AgreesWithImportanceSamplingNearMean) {
  for (const auto* m : {&kPg, &kGp}) {
    const double u = 1.01 * m->a() * m->b();
    const auto p = plain_mc_tail(*m, kScaling, 50, u, 100000, 21);
    const auto q = is_tail(*m, kScaling, 50, u, 100000, 22);
    EXPECT_EQ(p.method, OracleMethod::PlainMC);
    EXPECT_LE(std::abs(p.probability - q.probability), 3 * std::hypot(se(p), se(q)));
  }
}

TEST(PlainMc, EstimateIsAProbability) {
  for (double u : {0.05, 1.0 / 3, 0.5, 2.0}) {
    const auto r = plain_mc_tail(kPg, kScaling, 20, u, 5000, 1);
    EXPECT_GE(r.probability, 0.0);
    EXPECT_LE(r.probability, 1.0);
  }
  // below the mean rate: no NotRareError, the event is likely
  EXPECT_GT(plain_mc_tail(kPg, kScaling, 100, 0.1, 5000, 1).probability, 0.5);
}

TEST(MonteCarlo, Errors) {
  EXPECT_THROW(is_tail(kPg, kScaling, 400, 0.2, 1000, 1), NotRareError);
  ModelPair custom(CharExponent::poisson(2.0), CharExponent::poisson(1.0));
  EXPECT_THROW(is_tail(custom, kScaling, 400, 5.0, 1000, 1), ParamError);
  EXPECT_THROW(is_tail(kPg, kScaling, 400, 1.0, McConfig{1000, 1, 0}), ParamError);
  EXPECT_THROW(is_tail(kPg, kScaling, 0.5, 1.0, 1000, 1), ParamError);
}
