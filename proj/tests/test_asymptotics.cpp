#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tailscale/asymptotics.hpp"
#include "tailscale/errors.hpp"
#include "tailscale/models.hpp"
#include "tailscale/oracle.hpp"
#include "tailscale/twist.hpp"

using namespace tailscale;

namespace {

ModelPair pg(double lam, double r, double mu) { return WorkedModel::poisson_gamma(lam, r, mu).pair(); }
ModelPair gp(double r, double mu, double lam) { return WorkedModel::gamma_poisson(r, mu, lam).pair(); }

double exact(const ModelPair& m, const PowerScaling& s, double n, double u) {
  return exact_tail(*WorkedModel::from_pair(m), s, n, u).log_probability;
}

}  // namespace

TEST(Classify, Examples) {
  const auto a = classify(PowerScaling(3.0));
  EXPECT_EQ(a.regime, Regime::Fast);
  EXPECT_EQ(*a.m_plus, 1);
  EXPECT_EQ(*a.k_plus, 0);
  const auto b = classify(PowerScaling(1.5));
  EXPECT_EQ(*b.m_plus, 3);
  EXPECT_EQ(*b.k_plus, 1);
  EXPECT_FALSE(b.m_minus);
  const auto c = classify(PowerScaling(0.5));
  EXPECT_EQ(c.regime, Regime::Slow);
  EXPECT_EQ(*c.m_minus, 1);
  EXPECT_EQ(*c.k_minus, 0);
  EXPECT_EQ(classify(PowerScaling(1.0)).regime, Regime::SingleTimescale);
  EXPECT_EQ(*classify(PowerScaling(2.0)).m_plus, 2);
  EXPECT_EQ(*classify(PowerScaling(0.75)).m_minus, 3);
  EXPECT_EQ(*classify(PowerScaling(0.75)).k_minus, 1);
  EXPECT_EQ(*classify(PowerScaling(0.4)).m_minus, 0);
}

TEST(Classify, IndicesMatchDefinitions) {
  for (double f = 1.05; f < 4.0; f += 0.05) {
    const auto info = classify(PowerScaling(f));
    const int m = *info.m_plus;
    EXPECT_GE(f + m * (1 - f), -1e-9);
    EXPECT_LT(f + (m + 1) * (1 - f), 0.0);
  }
  for (double f = 0.05; f < 0.96; f += 0.05) {
    const auto info = classify(PowerScaling(f));
    const int m = *info.m_minus, k = *info.k_minus;
    EXPECT_GE(f - m * (1 - f), -1e-9);
    EXPECT_LT(f - (m + 1) * (1 - f), 0.0);
    EXPECT_LE(k * (1 - f), f / 2 + 1e-9);
    EXPECT_GT((k + 1) * (1 - f), f / 2);
  }
}

TEST(LatticeFactor, ContinuousLimit) {
  const double t = 0.7;
  EXPECT_NEAR(lattice_factor(t, 0.0), 1 / t, 1e-15);
  for (double d : {1e-2, 1e-3, 1e-4, 1e-6}) {
    const double ratio = lattice_factor(t, d) * t;
    EXPECT_NEAR(ratio - 1.0, t * d / 2, 2 * t * t * d * d);
  }
}

TEST(ApproxFast, EmptySeriesMatchesDisplayedFormula) {
  const double lam = 1, r = 1, mu = 3, u = 1, n = 400;
  const auto est = approx_fast(pg(lam, r, mu), PowerScaling(3.0), n, u, EvalMode::series(), true);
  const double rho = lam * r / (mu * u);
  const double expected = std::log(1 / (1 - rho)) - 0.5 * std::log(2 * std::numbers::pi * u * n) +
                          (1 - rho + std::log(rho)) * u * n;
  EXPECT_EQ(est.exponent_terms.size(), 1u);
  EXPECT_NEAR(est.log_value, expected, 1e-10 * std::abs(expected));
  EXPECT_NEAR(est.sigma, std::sqrt(u), 1e-14);
  EXPECT_TRUE(est.lattice_adjusted);
  EXPECT_LT(est.exponent_terms[0].value, 0.0);
}

TEST(ApproxFast, Errors) {
  const auto m = pg(1, 1, 3);
  EXPECT_THROW(approx_fast(m, PowerScaling(0.8), 100, 1), RegimeError);
  EXPECT_THROW(approx_fast(m, PowerScaling(1.0), 100, 1), RegimeError);
  EXPECT_THROW(approx_fast(gp(1, 3, 1), PowerScaling(1.5), 100, 1, EvalMode::direct(), true), LatticeError);
  auto cubic = CharExponent::custom([](double t, int k) {
    switch (k) {
      case 0: return t + 0.5 * t * t;
      case 1: return 1.0 + t;
      case 2: return 1.0;
      default: return 0.0;
    }
  });
  ModelPair custom(cubic, CharExponent::gamma(1.0, 2.0));
  EXPECT_THROW(approx_fast(custom, PowerScaling(1.5), 100, 1.0, EvalMode::series()), SeriesUnavailable);
  EXPECT_NO_THROW(approx_fast(custom, PowerScaling(1.5), 100, 1.0));
  EXPECT_THROW(approx_fast(m, PowerScaling(1.5), 100, 0.2), NotRareError);
}

TEST(ApproxFast, DirectEqualsSolvedExponent) {
  const auto m = pg(1, 1, 3);
  const PowerScaling s(1.5);
  const auto est = approx_fast(m, s, 1e4, 1.0);
  const double sum = est.exponent_terms[0].value + est.exponent_terms[1].value;
  EXPECT_NEAR(sum, direct_exponent(m, s, 1e4, 1.0), 1e-9 * std::abs(sum));
  EXPECT_NEAR(est.log_value, std::log(est.prefactor) + sum, 1e-9 * std::abs(sum));
}

TEST(ApproxFast, DirectAgreesWithSeriesFromOrderFour) {
  const auto m = pg(1, 1, 3);
  const PowerScaling s(1.5);
  const double n = 1e4, u = 1.0;
  const double direct = approx_fast(m, s, n, u, EvalMode::direct(), true).log_value;
  for (int M : {4, 5, 8})
    EXPECT_LE(std::abs(approx_fast(m, s, n, u, EvalMode::series(M), true).log_value - direct), 1e-3) << M;
}

TEST(ApproxFast, SeriesErrorDecreasesWithOrder) {
  for (const auto& m : {pg(1, 1, 3), gp(1, 3, 1)}) {
    const PowerScaling s(1.5);
    const double n = 1e4, u = 1.0;
    const double direct = approx_fast(m, s, n, u).log_value;
    double prev = INFINITY;
    for (int M = 1; M <= 10; ++M) {
      const double err = std::abs(approx_fast(m, s, n, u, EvalMode::series(M)).log_value - direct);
      EXPECT_LE(err, prev * (1 + 1e-12) + 1e-9) << M;
      prev = err;
    }
    EXPECT_LT(prev, 1e-8);
  }
}

TEST(ApproxFast, DefaultSeriesOrderIsMPlus) {
  const auto est = approx_fast(pg(1, 1, 3), PowerScaling(1.5), 1e4, 1.0, EvalMode::series());
  ASSERT_EQ(est.exponent_terms.size(), 3u);
  EXPECT_EQ(est.exponent_terms[1].label, "k=2");
  EXPECT_EQ(est.exponent_terms[2].label, "k=3");
}

TEST(ApproxFast, AdaptiveSeriesConvergesToDirect) {
  const auto m = gp(1, 2, 1);
  const PowerScaling s(1.8);
  const double direct = approx_fast(m, s, 500, 1.0).log_value;
  const auto est = approx_fast(m, s, 500, 1.0, EvalMode::series(EvalMode::kAdaptive));
  EXPECT_NEAR(est.log_value, direct, 1e-9 * std::abs(direct));
  EXPECT_LT(est.exponent_terms.size(), 51u);
}

TEST(ApproxFast, SublinearRemainderSmallBeyondTwo) {
  for (const auto& [m, u] : {std::pair{pg(1, 1, 3), 1.0}, std::pair{pg(1, 1, 1), 2.0}}) {
    const auto est = approx_fast(m, PowerScaling(2.5), 1e4, u);
    EXPECT_LE(std::abs(est.exponent_terms[1].value), 1e-2);
  }
}

TEST(ApproxFast, BoundaryFTwoRemainderVanishes) {
  const auto m = pg(1, 1, 3);
  const PowerScaling s(2.0);
  double prev = INFINITY;
  for (double n : {1e2, 1e3, 1e4, 1e5}) {
    const double gap = std::abs(approx_fast(m, s, n, 1.0, EvalMode::series(2)).log_value -
                                approx_fast(m, s, n, 1.0).log_value);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(ApproxFast, RatioToExactApproachesOne) {
  const auto m = pg(1, 1, 1);
  const PowerScaling s(1.5);
  const double u = 2.0;
  double prev = INFINITY;
  for (double n : {1e2, 1e3, 1e4}) {
    const double lr = exact(m, s, n, u) - approx_fast(m, s, n, u, EvalMode::direct(), true).log_value;
    const double dist = std::abs(std::exp(lr) - 1);
    EXPECT_LT(dist, prev) << n;
    prev = dist;
  }
  EXPECT_LT(prev, 0.05);
}

TEST(ApproxSlow, PoissonGammaSeriesMatchesDisplay) {
  const double lam = 1, r = 1.5, mu = 3, u = 1, n = 1e4;
  const PowerScaling s(0.6);
  const auto est = approx_slow(pg(lam, r, mu), s, n, u, EvalMode::series());
  const double rho = lam * r / (mu * u), phi = s.phi(n), psi = s.psi(n);
  const auto ss = slow_series_coeffs(WorkedModel::poisson_gamma(lam, r, mu), u, 3);
  double sum = 0.0;
  for (int k = 1; k <= *classify(s).m_minus; ++k) sum += ss.wbar[k] * phi * std::pow(psi, -k);
  const double expected = -std::log(1 / rho - 1) - 0.5 * std::log(2 * std::numbers::pi * r * phi) +
                          (1 - 1 / rho + std::log(1 / rho)) * r * phi + sum;
  EXPECT_NEAR(est.log_value, expected, 1e-10 * std::abs(expected));
}

TEST(ApproxSlow, GammaPoissonLatticeSigma) {
  const double r = 2, mu = 3, lam = 1, u = 2;
  const auto est = approx_slow(gp(r, mu, lam), PowerScaling(0.5), 1e4, u, EvalMode::direct(), true);
  EXPECT_NEAR(est.sigma * est.sigma, r * u / mu, 1e-12);
  // lattice factor d/(1 - e^{-a tau}) with a tau = log(1/rho)
  const double rho = lam * r / (mu * u);
  const auto plain = approx_slow(gp(r, mu, lam), PowerScaling(0.5), 1e4, u);
  EXPECT_NEAR(est.prefactor / plain.prefactor, std::log(1 / rho) / (1 - rho), 1e-12);
}

TEST(ApproxSlow, Errors) {
  EXPECT_THROW(approx_slow(pg(1, 1, 3), PowerScaling(1.5), 100, 1), RegimeError);
  EXPECT_THROW(approx_slow(pg(1, 1, 3), PowerScaling(0.5), 100, 1, EvalMode::direct(), true), LatticeError);
  auto neg = CharExponent::custom([](double t, int k) {
    switch (k) {
      case 0: return -t + 0.5 * t * t;
      case 1: return -1.0 + t;
      case 2: return 1.0;
      default: return 0.0;
    }
  });
  EXPECT_THROW(approx_slow(ModelPair(neg, CharExponent::gamma(1, 2)), PowerScaling(0.5), 100, 1),
               UnsupportedSignError);
}

TEST(ApproxSlow, RatioToExactApproachesOne) {
  const auto m = pg(1, 1, 1);
  const PowerScaling s(0.5);
  double prev = INFINITY;
  for (double n : {1e2, 1e3, 1e4}) {
    const double lr = exact(m, s, n, 2.0) - approx_slow(m, s, n, 2.0).log_value;
    const double dist = std::abs(std::exp(lr) - 1);
    EXPECT_LT(dist, prev);
    prev = dist;
  }
  EXPECT_LT(prev, 0.05);
}

TEST(ApproxSlow, SeriesConvergesToDirect) {
  for (const auto& m : {pg(1, 1, 3), gp(1, 3, 1)}) {
    const PowerScaling s(0.5);
    const double direct = approx_slow(m, s, 1e4, 1.0).log_value;
    const auto est = approx_slow(m, s, 1e4, 1.0, EvalMode::series(30));
    EXPECT_NEAR(est.log_value, direct, 1e-9 * std::abs(direct));
  }
}

TEST(LogAsymptote, Rates) {
  const double lam = 1, r = 2, mu = 3, u = 2, rho = lam * r / (mu * u);
  const auto a = log_asymptote(pg(lam, r, mu), PowerScaling(1.5), u);
  EXPECT_NEAR(*a.rate_fast, (1 - rho + std::log(rho)) * u, 1e-12);
  EXPECT_FALSE(a.rate_slow);
  const auto b = log_asymptote(gp(r, mu, lam), PowerScaling(1.5), u);
  EXPECT_NEAR(*b.rate_fast, (1 - 1 / rho + std::log(1 / rho)) * lam * r, 1e-12);
  for (double k : {1.001, 1.5, 3.0, 10.0}) {
    const auto m = gp(r, mu, lam);
    const double uu = k * m.a() * m.b();
    EXPECT_LT(*log_asymptote(m, PowerScaling(1.5), uu).rate_fast, 0.0);
    EXPECT_LT(*log_asymptote(m, PowerScaling(0.5), uu).rate_slow, 0.0);
  }
}

TEST(SingleTimescale, MatchesDirectExponentAtFOne) {
  const auto m = pg(1, 1, 3);
  const double n = 200, u = 1;
  const auto est = approx_single_timescale(m, n, u);
  const double de = direct_exponent(m, PowerScaling(1.0), n, u);
  EXPECT_NEAR(est.exponent_terms[0].value, de, 1e-9 * std::abs(de));
  EXPECT_GT(est.sigma, 0.0);
  EXPECT_LE(solve_tilt(m, 1.0, u).residual, 1e-10);
  EXPECT_THROW(approx_single_timescale(m, n, 0.2), NotRareError);
  EXPECT_EQ(approx(m, PowerScaling(1.0), n, u).regime, Regime::SingleTimescale);
}

TEST(SingleTimescale, ExactRatioNearOne) {
  const auto m = pg(1, 1, 1);
  const double n = 1e4, u = 2;
  const double lr = exact(m, PowerScaling(1.0), n, u) - approx_single_timescale(m, n, u, true).log_value;
  EXPECT_NEAR(std::exp(lr), 1.0, 0.02);
}

TEST(Estimate, UnderflowReportsZeroValue) {
  const auto est = approx_fast(pg(1, 1, 3), PowerScaling(1.5), 1e6, 1.0);
  EXPECT_EQ(est.value, 0.0);
  EXPECT_LT(est.log_value, -1e5);
}
