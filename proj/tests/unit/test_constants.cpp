#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "steinlab/constants.hpp"
#include "steinlab/covariance.hpp"
#include "steinlab/errors.hpp"

using namespace steinlab;

namespace {

double c_beta_quadrature(double beta) {
  const auto f = [beta](double y) { return std::pow(y, -beta) * std::pow(1.0 + y, -beta); };
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  return ts.integrate(f, 0.0, 1.0) + es.integrate(f, 1.0, std::numeric_limits<double>::infinity());
}

std::vector<ModelParams> nclt_grid() {
  std::vector<ModelParams> out;
  for (int q : {1, 2, 3, 4}) {
    for (double beta : {0.52, 0.55, 0.58, 0.6, 0.62, 0.65, 0.7, 0.8, 0.9}) {
      const ModelParams p{q, beta, true};
      if (p.regime_index() < 1.0) out.push_back(p);
    }
  }
  return out;
}

}  // namespace

TEST(ModelParams, Validation) {
  EXPECT_NO_THROW((ModelParams{2, 0.7}.validate()));
  EXPECT_THROW((ModelParams{0, 0.7}.validate()), DomainError);
  EXPECT_THROW((ModelParams{2, 0.5}.validate()), DomainError);
  EXPECT_THROW((ModelParams{2, 1.0}.validate()), DomainError);
  EXPECT_THROW((ModelParams{2, 0.4}.validate()), DomainError);
}

TEST(Zeta2Beta, MatchesBoostWithinCertificate) {
  for (double beta : {0.51, 0.6, 0.75, 0.9, 0.99}) {
    const Estimate z = zeta_2beta(beta);
    EXPECT_LE(z.error, 1e-10);
    EXPECT_NEAR(z.value, boost::math::zeta(2.0 * beta), z.error + 1e-14) << beta;
    EXPECT_GT(z.value, 1.0);
  }
  EXPECT_NEAR(zeta_2beta(0.75).value, 2.612375348685488, 1e-12);
  EXPECT_THROW(zeta_2beta(0.5), DomainError);
}

TEST(CBeta, QuadratureOracle) {
  for (double beta : {0.6, 0.75, 0.9}) {
    EXPECT_NEAR(c_beta(beta) / c_beta_quadrature(beta), 1.0, 1e-10) << beta;
    EXPECT_EQ(c_beta(beta), beta_fn(2.0 * beta - 1.0, 1.0 - beta));
  }
  EXPECT_NEAR(c_beta(0.75), 5.2441151085842, 1e-12);
  EXPECT_THROW(c_beta(1.0), DomainError);
}

TEST(CovConstant, FollowsNormalizationPolicy) {
  EXPECT_DOUBLE_EQ(cov_constant({2, 0.7, false}), c_beta(0.7));
  EXPECT_DOUBLE_EQ(cov_constant({2, 0.7, true}), c_beta(0.7) / zeta_2beta(0.7).value);
}

TEST(Regime, Examples) {
  const RegimeInfo a = classify_regime({2, 0.9});
  EXPECT_EQ(a.regime, Regime::clt);
  EXPECT_NEAR(*a.clt_exponent, -0.3, 1e-15);
  EXPECT_EQ(*a.clt_branch, CltBranch::low_beta);
  EXPECT_DOUBLE_EQ(*a.branch_threshold, 1.0);
  EXPECT_FALSE(a.nclt_exponent.has_value());

  const RegimeInfo b = classify_regime({2, 0.7});
  EXPECT_EQ(b.regime, Regime::nclt);
  EXPECT_NEAR(*b.nclt_exponent, -0.2, 1e-15);
  EXPECT_FALSE(b.clt_exponent.has_value());

  const RegimeInfo c = classify_regime({5, 0.75});
  EXPECT_EQ(c.regime, Regime::clt);
  EXPECT_EQ(*c.clt_branch, CltBranch::high_beta);
  EXPECT_DOUBLE_EQ(*c.branch_threshold, 0.625);
  EXPECT_NEAR(*c.clt_exponent, -0.25, 1e-15);

  EXPECT_FALSE(classify_regime({1, 0.7}).branch_threshold.has_value());
  EXPECT_THROW(classify_regime({2, 0.75}), BoundaryError);
}

TEST(Regime, ExponentsHaveTheRightSign) {
  for (int q = 1; q <= 6; ++q) {
    for (double beta = 0.51; beta < 1.0; beta += 0.01) {
      const ModelParams p{q, beta};
      if (std::abs(p.regime_index() - 1.0) < 1e-9) continue;
      const RegimeInfo info = classify_regime(p);
      if (info.regime == Regime::clt) {
        EXPECT_LT(*info.clt_exponent, 0.0);
      } else {
        EXPECT_LT(*info.nclt_exponent, 0.0);
      }
      EXPECT_EQ(info.regime == Regime::clt, q > info.threshold_q_inverse);
    }
  }
}

TEST(Regime, ExponentContinuousAcrossBranchThreshold) {
  for (int q : {3, 4, 5, 8}) {
    const double t = q / (2.0 * q - 2.0);
    const double low = q / 2.0 + 0.5 - q * t;
    const double high = 0.5 - t;
    EXPECT_NEAR(low, high, 1e-14);
    const auto below = classify_regime({q, t - 1e-10});
    const auto above = classify_regime({q, t + 1e-10});
    EXPECT_EQ(*below.clt_branch, CltBranch::low_beta);
    EXPECT_EQ(*above.clt_branch, CltBranch::high_beta);
    EXPECT_NEAR(*below.clt_exponent, *above.clt_exponent, 1e-9);
  }
}

TEST(NcltConstants, ArithmeticInstances) {
  const double c = 3.7;
  const double d = d_qbeta({2, 0.7}, c);
  EXPECT_NEAR(d * d * 2.0 * 2.0 * c * c, 0.24, 1e-14);
  const double h = h_qbeta({2, 0.7}, c);
  EXPECT_NEAR(h * h, c * c / 0.24, 1e-12);
  const double h1 = h_qbeta({1, 0.7}, c);
  EXPECT_NEAR(h1 * h1, 2.0 * c / (0.6 * 1.6), 1e-13);
  EXPECT_THROW(d_qbeta({2, 0.9}, c), RegimeError);
  EXPECT_THROW(h_qbeta({2, 0.9}, c), RegimeError);
}

TEST(NcltConstants, ProductIdentityOnTwentyPairs) {
  const auto grid = nclt_grid();
  ASSERT_GE(grid.size(), 20u);
  for (const auto& p : grid) {
    for (double c : {cov_constant(p), c_beta(p.beta)}) {
      const double prod = d_qbeta(p, c) * h_qbeta(p, c) * factorial(p.q);
      EXPECT_NEAR(prod, 1.0, 1e-12) << p.q << " " << p.beta;
    }
  }
}

TEST(SigmaQBeta, ExactOnFullTruncatedTable) {
  const ModelParams p{3, 0.9, true};
  const std::size_t M = 4096;
  const auto cov = CovarianceTable::build(p, M, M - 1);
  const Estimate s = sigma_qbeta(p, cov, 1e-10);
  long double ref = std::pow(static_cast<long double>(oracle::truncated_rho(0.9, M, 0, true)), 3);
  for (std::size_t m = 1; m < M; ++m) {
    ref += 2.0L * std::pow(static_cast<long double>(oracle::truncated_rho(0.9, M, m, true)), 3);
  }
  ref /= 6.0L;
  EXPECT_GT(s.value, 0.0);
  EXPECT_LE(s.error, 1e-10);
  EXPECT_NEAR(s.value, static_cast<double>(ref), s.error + 1e-13);
}

TEST(SigmaQBeta, PartialTableBoundCoversTheRest) {
  const ModelParams p{3, 0.9, true};
  const std::size_t M = 4096;
  const auto full = CovarianceTable::build(p, M, M - 1);
  const auto part = CovarianceTable::build(p, M, 300);
  const Estimate exact = sigma_qbeta(p, full);
  const Estimate cut = sigma_qbeta(p, part, 1.0);
  EXPECT_GT(cut.error, 0.0);
  EXPECT_LE(std::abs(cut.value - exact.value), cut.error);
  EXPECT_THROW(sigma_qbeta(p, part, 1e-12), NumericError);
}

TEST(SigmaQBeta, RegimeAndPartition) {
  const auto cov = CovarianceTable::build({2, 0.7}, 256, 255);
  EXPECT_THROW(sigma_qbeta({2, 0.7}, cov, 1e-10), RegimeError);
  // away from the boundary exactly one of sigma / d is defined
  for (int q = 1; q <= 5; ++q) {
    for (double beta = 0.53; beta < 1.0; beta += 0.04) {
      const ModelParams p{q, beta};
      if (std::abs(p.regime_index() - 1.0) < 1e-9) continue;
      const auto table = CovarianceTable::build(p, 512, 511);
      bool sigma_ok = true, d_ok = true;
      try {
        sigma_qbeta(p, table, 1.0);
      } catch (const RegimeError&) {
        sigma_ok = false;
      }
      try {
        d_qbeta(p, cov_constant(p));
      } catch (const RegimeError&) {
        d_ok = false;
      }
      EXPECT_NE(sigma_ok, d_ok) << q << " " << beta;
    }
  }
}

TEST(SigmaQBeta, DecreasesWithBeta) {
  double prev = INFINITY;
  for (double beta : {0.7, 0.75, 0.8, 0.85, 0.9, 0.95}) {
    const ModelParams p{3, beta, true};
    const std::size_t M = 1 << 14;
    const auto cov = CovarianceTable::build(p, M, M - 1);
    const double s = sigma_qbeta(p, cov, 1e-8).value;
    EXPECT_LT(s, prev) << beta;
    prev = s;
  }
}

TEST(ConstantSet, FilledPerRegime) {
  const ConstantSet n = compute_constants({2, 0.7});
  EXPECT_TRUE(n.d_q_beta && n.h_q_beta);
  EXPECT_FALSE(n.sigma_sq);
  EXPECT_NEAR(*n.d_q_beta * *n.h_q_beta * 2.0, 1.0, 1e-12);
  const ModelParams clt{2, 0.9};
  const auto cov = CovarianceTable::build(clt, 1024, 1023);
  const ConstantSet c = compute_constants(clt, &cov);
  EXPECT_TRUE(c.sigma_sq.has_value());
  EXPECT_FALSE(c.d_q_beta || c.h_q_beta);
  EXPECT_GT(c.c_beta, 0.0);
  EXPECT_GT(c.zeta_2beta.value, 1.0);
}
