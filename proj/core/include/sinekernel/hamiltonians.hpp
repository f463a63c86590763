#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sinekernel/nystrom.hpp"
#include "sinekernel/report.hpp"
#include "sinekernel/resolvent.hpp"

namespace sinekernel {

using Matrix2c = Eigen::Matrix2cd;
using Matrix2r = Eigen::Matrix2d;

/// Largest x for Hamiltonian samples: q(x) needs x/2 inside the resolvent window.
inline constexpr double kHamiltonianWindow = 2.0 * kResolventWindow;

/// Hamiltonians of the two canonical systems at one point x:
///   H1 = (1/2pi) [[|q|^2, q^2], [conj(q^2), |q|^2]]
///   H2 = (1/2pi) [[q1^2, 1/2], [1/2, q2^2]],  q1 q2 = 1/2
/// q1^2 is taken from the Krein exponential exp(2 int_0^x R_t(t,0) dt), with
/// R_t(t,0) = Q_{t/2}(-t/2, t/2). The direct value (S_x^{-1} 1)(x)^2 is kept
/// for comparison.
struct HamiltonianSample {
  double x = 0.0;
  Matrix2c H1 = Matrix2c::Zero();
  Matrix2r H2 = Matrix2r::Zero();
  Complex q;
  double q1_sq = 1.0;
  double q2_sq = 0.25;
  double beta_partial = 0.0;  // int_0^x [2 R_t(t,0) - pi] dt
  double q1_sq_direct = 1.0;
  double krein_rel_dev = 0.0;
};

HamiltonianSample hamiltonian_at(double x, SweepCache* cache = nullptr);

/// Integrand 2 R_t(t,0) - pi of the beta integral.
double beta_integrand(double t, SweepCache* cache = nullptr);

struct BetaCheckpoint {
  double x = 0.0;
  double partial = 0.0;      // integral up to x
  double with_tail = 0.0;    // partial + series tail beyond x
};

/// beta = int_0^inf [2 R_t(t,0) - pi] dt, estimated as the integral up to
/// x_max plus the tail of the large-t series
///   2 pi (a_2/u^2 + a_4/u^4),  u = pi t.
/// Checkpoints at every integer x <= x_max and at x_max itself.
struct BetaEstimate {
  double x_max = 0.0;
  double partial = 0.0;
  double tail = 0.0;
  double beta = 0.0;
  std::vector<BetaCheckpoint> table;
};

BetaEstimate beta_estimate(double x_max, SweepCache* cache = nullptr);

/// Series tail int_x^inf 2 pi (a_2/u^2 + a_4/u^4) dt with u = pi t.
double beta_tail(double x);

/// Samples of H1 and H2 on a uniform grid over [0, x_max] with spacing at
/// most `spacing`; values in between are linear interpolants.
class HamiltonianGrid {
 public:
  explicit HamiltonianGrid(double x_max, double spacing = 0.02, std::optional<int> order = {});

  double x_max() const { return x_max_; }
  double spacing() const { return step_; }
  int intervals() const { return static_cast<int>(h1_.size()) - 1; }

  Matrix2c h1(double x) const;
  Matrix2r h2(double x) const;

 private:
  template <class M>
  M interpolate(const std::vector<M>& samples, double x) const;

  double x_max_;
  double step_;
  std::vector<Matrix2c> h1_;
  std::vector<Matrix2r> h2_;
};

struct CanonicalSolution {
  int system_id = 1;
  Complex z;
  double x_max = 0.0;
  Matrix2c W = Matrix2c::Identity();
  int step_count = 0;
};

/// Integrates W' = -i J1 H1(x) W / (x - z) (system 1) or W' = i z J2 H2(x) W
/// (system 2) from W(0) = I with classical RK4 on `steps` uniform steps.
/// System 1 throws SingularityError when z lies on [0, x_max].
CanonicalSolution solve_canonical(int system_id, Complex z, double x_max, int steps,
                                  const HamiltonianGrid* grid = nullptr);

/// The Liouville value of det W(x_max): 1 for system 1, e^{i z x/(2 pi)} for system 2.
Complex liouville_determinant(int system_id, Complex z, double x_max);

inline constexpr int kDefaultCanonicalSteps = 200;

/// Step-halving behaviour of the RK4 integration: the changes
/// d1 = max|W(n) - W(2n)| and d2 = max|W(2n) - W(4n)| and their ratio d1/d2,
/// which is 16 for a fourth-order method.
struct StepHalving {
  double coarse_change = 0.0;
  double fine_change = 0.0;
  double ratio = 0.0;
};

StepHalving step_halving(int system_id, Complex z, double x_max, int steps,
                         const HamiltonianGrid* grid = nullptr);

/// Krein exponential against the direct q1^2 at each x, H2 off-diagonals
/// equal to 1/(4 pi), and q1^2 q2^2 = 1/4.
VerificationReport verify_krein(const std::vector<double>& xs, double tol = 1e-4);

/// Liouville determinants for system 1 at z = 2i and system 2 at z = 1 on
/// (0, 1), and the step-halving ratio of both in [12, 20].
VerificationReport verify_canon_invariants(double tol = 1e-6);

}  // namespace sinekernel
