#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sinekernel/errors.hpp"
#include "sinekernel/resolvent.hpp"

using namespace sinekernel;

namespace {

Complex expi_pi(double x) { return std::polar(1.0, oracle::kPi * x); }

}  // namespace

TEST(ResolventWindow, Enforced) {
  EXPECT_THROW(edge_values(0.0), InvalidArgument);
  EXPECT_THROW(r_value(-1.0), InvalidArgument);
  EXPECT_THROW(edge_values(2.51), WindowError);
  EXPECT_THROW(sample(3.0), WindowError);
  EXPECT_THROW(q_value(5.01), WindowError);
  EXPECT_THROW(q1_value(-0.1), InvalidArgument);
  EXPECT_NO_THROW(edge_values(2.5));
}

TEST(EdgeValues, MatchClenshawCurtisResolvent) {
  for (double z : {0.5, 1.0, 1.7}) {
    const EdgeValues e = edge_values(z);
    const int n = 64 + static_cast<int>(40 * z);
    EXPECT_NEAR(e.q_diag, oracle::cc_resolvent(-z, z, n, z, z), 1e-9 * e.q_diag) << z;
    EXPECT_NEAR(e.q_anti, oracle::cc_resolvent(-z, z, n, -z, z), 1e-9 * e.q_anti) << z;
  }
}

TEST(EdgeValues, PositiveAndIncreasingAcrossWindow) {
  double previous = 0.0;
  for (double z = 0.1; z <= 2.5; z += 0.2) {
    const EdgeValues e = edge_values(z);
    EXPECT_GT(e.q_anti, 0.0);
    EXPECT_GT(e.q_diag, previous);
    previous = e.q_diag;
  }
}

TEST(EdgeValues, SmallIntervalLimit) {
  const EdgeValues e = edge_values(1e-3);
  EXPECT_NEAR(e.q_diag, 1.0, 5e-3);
  EXPECT_NEAR(e.q_anti, 1.0, 5e-3);
}

TEST(QValue, MatchesClenshawCurtisSolver) {
  for (double x : {0.3, 1.0, 2.5, 4.0}) {
    const Complex ref = oracle::cc_solve_at(0.0, x, 64 + static_cast<int>(20 * x), expi_pi, x);
    EXPECT_LT(std::abs(q_value(x) - ref), 1e-9 * std::abs(ref)) << x;
  }
  EXPECT_EQ(q_value(0.0), Complex(1.0));
}

TEST(Q1Value, MatchesClenshawCurtisSolverAndIsPositive) {
  for (double x : {0.3, 1.0, 2.5, 4.0}) {
    const double ref =
        oracle::cc_solve_at(0.0, x, 64 + static_cast<int>(20 * x), [](double) { return Complex(1.0); }, x).real();
    const double q1 = q1_value(x);
    EXPECT_GT(q1, 0.0);
    EXPECT_NEAR(q1, ref, 1e-9 * ref) << x;
  }
  EXPECT_EQ(q1_value(0.0), 1.0);
}

TEST(RValue, EndpointUnitModulusNearZero) {
  EXPECT_NEAR(std::abs(r_value(1e-4)), 1.0, 1e-3);
}

TEST(RValue, TwoRoutesAgree) {
  oracle::Uniform zs(31, 0.05, 2.5);
  for (int k = 0; k < 8; ++k) {
    const double z = zs();
    const ResolventSample s = sample(z);
    EXPECT_LT(std::abs(s.q_2zeta - expi_pi(z) * s.r), 1e-7) << z;
    EXPECT_DOUBLE_EQ(s.u, 2.0 * oracle::kPi * z);
  }
}

TEST(SweepCache, MemoizesExactly) {
  SweepCache cache;
  const Complex a = cache.r(1.25);
  const Complex b = cache.r(1.25);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, r_value(1.25));
  EXPECT_EQ(cache.q(1.0), q_value(1.0));
  EXPECT_EQ(cache.q1(1.0), q1_value(1.0));
  EXPECT_EQ(cache.edges(0.5).q_diag, edge_values(0.5).q_diag);
}

TEST(SweepCache, HonoursOrder) {
  SweepCache cache(120);
  EXPECT_EQ(cache.order(), 120);
  EXPECT_EQ(cache.r(1.0), r_value(1.0, 120));
}

TEST(Jmms, ResidualsSmallOnRandomGrid) {
  oracle::Uniform zs(32, 0.2, 2.3);
  for (int k = 0; k < 6; ++k) {
    const JmmsResiduals j = jmms_residuals(zs());
    for (const auto* rel : {&j.diag_growth, &j.anti_imag, &j.diag_slope, &j.anti_growth})
      EXPECT_LT(std::abs(rel->residual()), 1e-7 * (1.0 + std::abs(rel->lhs))) << "zeta=" << j.zeta;
  }
}

TEST(Jmms, StepValidation) {
  EXPECT_THROW(jmms_residuals(0.001, 0.002), InvalidArgument);
  EXPECT_THROW(jmms_residuals(2.5), WindowError);
  EXPECT_DOUBLE_EQ(jmms_residuals(2.0).h, 2e-3);
}

TEST(QuadraticForms, SolvedFormEqualsEdgeIntegral) {
  SweepCache cache;
  for (double z : {0.5, 1.5, 3.0}) {
    const QuadraticForms f = quadratic_forms(z, &cache);
    EXPECT_LT(f.exp_rel_dev, 1e-8) << z;
    EXPECT_LT(f.one_rel_dev, 1e-8) << z;
    EXPECT_GT(f.one_form, z);
  }
}

TEST(EdgeFunctionM, AgreesWithDirectIntegration) {
  EXPECT_DOUBLE_EQ(edge_function_m(0.0), 0.5);
  for (double x : {0.3, 1.0, 2.7}) {
    const oracle::Rule r = oracle::golub_welsch(60, 0.0, x);
    double integral = 0.0;
    for (std::size_t k = 0; k < r.x.size(); ++k) integral += r.w[k] * oracle::sine_kernel(r.x[k], 0.0);
    EXPECT_NEAR(edge_function_m(x), 0.5 - integral, 1e-14) << x;
  }
  EXPECT_NEAR(edge_function_m(-1.0), 0.5 + (0.5 - edge_function_m(1.0)), 1e-14);
}

TEST(OperatorIdentities, ResidualsAndRank) {
  for (double z : {0.5, 1.0}) {
    const OperatorIdentityCheck c = check_operator_identities(z);
    EXPECT_LT(c.multiplication_residual, 1e-6 * c.multiplication_rhs_norm);
    EXPECT_LT(c.integration_residual, 1e-6 * c.integration_rhs_norm);
    ASSERT_GE(c.multiplication_rhs_singular_values.size(), 3u);
    EXPECT_LT(c.multiplication_rhs_singular_values[2], 1e-10 * c.multiplication_rhs_singular_values[0]);
    EXPECT_LT(c.integration_rhs_singular_values[2], 1e-10 * c.integration_rhs_singular_values[0]);
    // A S - S A, without the adjoint, does not have this right-hand side
    EXPECT_GT(c.integration_literal_residual, 1e-3 * c.integration_rhs_norm);
    EXPECT_TRUE(verify_operator_identities(z).passed());
  }
}

TEST(Suites, ParityAndSwapHoldOnWindow) {
  const VerificationReport r = verify_symmetry({0.5, 1.0, 2.0, 2.5});
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.cases().size(), 8u);
  for (const auto& c : r.cases())
    if (c.label.find("-x,-y") != std::string::npos) EXPECT_EQ(c.abs_err, 0.0) << c.label;
}

TEST(Suites, CrossPathAndEdgeRelationsPass) {
  EXPECT_TRUE(verify_lemma32({0.25, 1.0, 2.5}).passed());
  EXPECT_TRUE(verify_jmms({0.5, 2.0}).passed());
}
