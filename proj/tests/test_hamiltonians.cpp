#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sinekernel/errors.hpp"
#include "sinekernel/hamiltonians.hpp"

using namespace sinekernel;

namespace {

constexpr double kPi = oracle::kPi;

}  // namespace

TEST(HamiltonianSample, StartingValues) {
  const HamiltonianSample s = hamiltonian_at(0.0);
  EXPECT_EQ(s.q1_sq, 1.0);
  EXPECT_EQ(s.q2_sq, 0.25);
  EXPECT_NEAR(s.H2(0, 0), 1.0 / (2 * kPi), 1e-16);
  EXPECT_NEAR(s.H2(1, 1), 0.25 / (2 * kPi), 1e-16);
  const HamiltonianSample near = hamiltonian_at(1e-3);
  EXPECT_NEAR(near.q1_sq, 1.0, 3e-3);
}

TEST(HamiltonianSample, StructuralInvariants) {
  SweepCache cache;
  oracle::Uniform xs(51, 0.05, 5.0);
  for (int k = 0; k < 10; ++k) {
    const HamiltonianSample s = hamiltonian_at(xs(), &cache);
    const double scale = s.H1.norm();
    EXPECT_LT((s.H1 - s.H1.adjoint()).norm(), 1e-15 * scale);
    EXPECT_LT(std::abs(s.H1.determinant()), 1e-12 * scale * scale);
    EXPECT_NEAR(s.H1.trace().real(), std::norm(s.q) / kPi, 1e-14 * scale);
    Eigen::SelfAdjointEigenSolver<Matrix2c> es(s.H1);
    EXPECT_GT(es.eigenvalues()(0), -1e-12 * scale);
    EXPECT_EQ(s.H2(0, 1), s.H2(1, 0));
    EXPECT_EQ(s.H2(0, 1), 1.0 / (4.0 * kPi));
    EXPECT_NEAR(s.q1_sq * s.q2_sq, 0.25, 1e-15);
  }
}

TEST(HamiltonianSample, KreinRouteMatchesDirect) {
  for (double x : {0.5, 2.0, 4.5}) {
    const HamiltonianSample s = hamiltonian_at(x);
    EXPECT_LT(s.krein_rel_dev, 1e-4) << x;
    EXPECT_NEAR(s.q1_sq, s.q1_sq_direct, 1e-10 * s.q1_sq) << x;
  }
}

TEST(HamiltonianSample, WindowEnforced) {
  EXPECT_THROW(hamiltonian_at(5.01), WindowError);
  EXPECT_THROW(hamiltonian_at(-1.0), InvalidArgument);
}

TEST(HamiltonianSample, LogQ1SquaredSettlesToLinearGrowth) {
  SweepCache cache;
  std::vector<double> offsets;
  for (double x : {2.0, 3.0, 4.0, 5.0}) offsets.push_back(std::log(hamiltonian_at(x, &cache).q1_sq) - kPi * x);
  for (std::size_t k = 2; k < offsets.size(); ++k)
    EXPECT_LT(std::abs(offsets[k] - offsets[k - 1]), std::abs(offsets[k - 1] - offsets[k - 2]));
}

TEST(Beta, IntegrandLimits) {
  SweepCache cache;
  EXPECT_NEAR(beta_integrand(0.0, &cache), 2.0 - kPi, 1e-15);
  EXPECT_LT(std::abs(beta_integrand(4.9, &cache)), 0.02);
  EXPECT_LT(std::abs(beta_integrand(4.9, &cache)), std::abs(beta_integrand(2.0, &cache)));
}

TEST(Beta, CheckpointsConverge) {
  SweepCache cache;
  const BetaEstimate b = beta_estimate(5.0, &cache);
  ASSERT_EQ(b.table.size(), 5u);
  EXPECT_EQ(b.table.back().x, 5.0);
  const double d43 = std::abs(b.table[3].partial - b.table[2].partial);
  const double d54 = std::abs(b.table[4].partial - b.table[3].partial);
  EXPECT_GT(d43, d54);
  // tail-corrected values move much less than the raw partial integrals
  EXPECT_LT(std::abs(b.table[4].with_tail - b.table[3].with_tail), d54);
  EXPECT_DOUBLE_EQ(b.beta, b.partial + b.tail);
  EXPECT_THROW(beta_estimate(6.0), WindowError);
}

TEST(Beta, SecondFactorConsistency) {
  SweepCache cache;
  const double beta = beta_estimate(5.0, &cache).beta;
  std::vector<double> dev;
  for (double x : {2.0, 3.0, 4.0, 5.0})
    dev.push_back(std::abs(std::log(hamiltonian_at(x, &cache).q2_sq) + kPi * x + beta + 2.0 * std::log(2.0)));
  for (std::size_t k = 1; k < dev.size(); ++k) EXPECT_LT(dev[k], dev[k - 1]);
}

TEST(Beta, TailFormula) {
  const double x = 4.0;
  const double a2 = -0.25, a4 = -13.0 / 16.0;
  const oracle::Rule r = oracle::golub_welsch(80, 0.0, 1.0 / x);
  // substitute s = 1/t on (x, inf)
  double integral = 0.0;
  for (std::size_t k = 0; k < r.x.size(); ++k) {
    const double t = 1.0 / r.x[k];
    const double u = kPi * t;
    integral += r.w[k] * t * t * 2.0 * kPi * (a2 / (u * u) + a4 / (u * u * u * u));
  }
  EXPECT_NEAR(beta_tail(x), integral, 1e-14);
  EXPECT_THROW(beta_tail(0.0), InvalidArgument);
}

TEST(HamiltonianGrid, InterpolatesBetweenSamples) {
  const HamiltonianGrid grid(1.0);
  EXPECT_EQ(grid.intervals(), 50);
  EXPECT_NEAR(grid.spacing(), 0.02, 1e-15);
  const Matrix2r mid = grid.h2(0.01);
  EXPECT_LT((mid - 0.5 * (grid.h2(0.0) + grid.h2(0.02))).norm(), 1e-15);
  const HamiltonianSample s = hamiltonian_at(0.42);
  EXPECT_LT((grid.h2(0.42) - s.H2).norm(), 1e-12 * s.H2.norm());
  EXPECT_LT((grid.h1(0.42) - s.H1).norm(), 1e-12 * s.H1.norm());
  EXPECT_THROW(HamiltonianGrid(6.0), WindowError);
  EXPECT_THROW(HamiltonianGrid(1.0, 0.0), InvalidArgument);
}

TEST(Canonical, LiouvilleDeterminants) {
  const HamiltonianGrid grid(2.0);
  for (const Complex z : {Complex(0.0, 2.0), Complex(-1.0, 0.5), Complex(3.0, -1.0)}) {
    const CanonicalSolution s = solve_canonical(1, z, 1.5, 300, &grid);
    EXPECT_LT(std::abs(s.W.determinant() - 1.0), 1e-6);
  }
  for (const Complex z : {Complex(1.0, 0.0), Complex(0.0, 2.0), Complex(5.0, 1.0)}) {
    const CanonicalSolution s = solve_canonical(2, z, 2.0, 300, &grid);
    EXPECT_LT(std::abs(s.W.determinant() - liouville_determinant(2, z, 2.0)), 1e-6);
  }
}

TEST(Canonical, StepHalvingIsFourthOrder) {
  const HamiltonianGrid grid(1.0);
  for (int id : {1, 2}) {
    const StepHalving h = step_halving(id, id == 1 ? Complex(0.0, 2.0) : Complex(1.0, 0.0), 1.0, 200, &grid);
    EXPECT_GE(h.ratio, 12.0);
    EXPECT_LE(h.ratio, 20.0);
    EXPECT_LT(h.coarse_change, 1e-8);
  }
}

TEST(Canonical, FirstOrderTermAtShortRange) {
  const double x = 0.01;
  const Complex z(40.0, 0.0);
  const HamiltonianGrid grid(x, 0.002);
  const CanonicalSolution s = solve_canonical(2, z, x, 400, &grid);
  Matrix2c J2;
  J2 << 0.0, 1.0, 1.0, 0.0;
  Matrix2c avg = Matrix2c::Zero();
  const oracle::Rule r = oracle::golub_welsch(8, 0.0, x);
  for (std::size_t k = 0; k < r.x.size(); ++k) avg += r.w[k] * (J2 * grid.h2(r.x[k]).cast<Complex>());
  const Matrix2c first = Matrix2c::Identity() + Complex(0.0, 1.0) * z * avg;
  const double second_order = std::pow(std::abs(z) * x * grid.h2(x).norm(), 2);
  EXPECT_LT((s.W - first).norm(), second_order);
}

TEST(Canonical, Errors) {
  EXPECT_THROW(solve_canonical(1, Complex(0.5, 0.0), 1.0, 200), SingularityError);
  EXPECT_THROW(solve_canonical(1, Complex(0.0, 0.0), 1.0, 200), SingularityError);
  EXPECT_NO_THROW(solve_canonical(1, Complex(1.5, 0.0), 1.0, 200));
  EXPECT_THROW(solve_canonical(3, Complex(0.0, 1.0), 1.0, 200), InvalidArgument);
  EXPECT_THROW(solve_canonical(2, Complex(0.0, 1.0), 1.0, 99), InvalidArgument);
  const HamiltonianGrid grid(0.5);
  EXPECT_THROW(solve_canonical(2, Complex(0.0, 1.0), 1.0, 200, &grid), InvalidArgument);
}

TEST(Suites, KreinAndCanonicalInvariantsPass) {
  EXPECT_TRUE(verify_krein({0.5, 1.0, 2.0, 3.0}).passed());
  EXPECT_TRUE(verify_canon_invariants().passed());
}
