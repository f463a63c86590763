#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sinekernel/kernels.hpp"
#include "sinekernel/quadrature.hpp"

namespace sinekernel {

using Complex = std::complex<double>;

/// Largest half-bandwidth zeta for which lambda = 1 resolvent quantities are
/// trusted in double precision. The smallest eigenvalue of I - K decays
/// exponentially with the interval length.
inline constexpr double kResolventWindow = 2.5;

/// Default Nystrom order for a kernel of half-bandwidth h = (b - a)/2 * zeta:
/// max(48, ceil(40 h)), unless a process-wide override is set.
int default_order(const KernelSpec& kernel, const Interval& interval);

/// Replaces the default order everywhere an order is not passed explicitly.
/// Returns the previous override. Throws InvalidArgument outside [4, kMaxGaussOrder].
std::optional<int> set_default_order_override(std::optional<int> order);
std::optional<int> default_order_override();

/// Nystrom discretization of I - lambda*K on a Gauss-Legendre rule.
///
/// The stored matrix is the symmetric weighting
///   A_ij = delta_ij - lambda * sqrt(w_i) k(x_i, x_j) sqrt(w_j),
/// which is symmetric positive definite for lambda in (0, 1] and the sine
/// kernel families here. The Cholesky factor is computed once, on first use,
/// under an initialization guard; afterwards the object is safe to share
/// between threads.
class DiscretizedOperator {
 public:
  DiscretizedOperator(const KernelSpec& kernel, const Interval& interval, int order, double lambda);
  ~DiscretizedOperator();
  DiscretizedOperator(DiscretizedOperator&&) noexcept;
  DiscretizedOperator& operator=(DiscretizedOperator&&) noexcept;
  DiscretizedOperator(const DiscretizedOperator&) = delete;
  DiscretizedOperator& operator=(const DiscretizedOperator&) = delete;

  const QuadratureRule& rule() const { return rule_; }
  const KernelSpec& kernel() const { return kernel_; }
  const Interval& interval() const { return rule_.interval(); }
  double lambda() const { return lambda_; }
  int order() const { return rule_.order(); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::VectorXd& sqrt_weights() const { return sqrt_w_; }

  /// Unique per constructed operator; used by solve tracing.
  std::uint64_t id() const { return id_; }

  /// Nodes as an Eigen vector.
  Eigen::VectorXd node_vector() const;

  /// Unweighted kernel matrix k(x_i, x_j) times the one-sided weights w_j.
  Eigen::MatrixXd kernel_times_weights() const;

  double log_det() const;

  /// Solves f - lambda * sum_j w_j k(x_i, t_j) f_j = rhs_i for the node values f.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  /// Off-grid value f(x) = rhs_at_x + lambda * sum_j w_j k(x, t_j) f_j.
  Complex extend(const Eigen::VectorXcd& node_solution, Complex rhs_at_x, double x) const;
  double extend(const Eigen::VectorXd& node_solution, double rhs_at_x, double x) const;

 private:
  struct Factor;
  const Factor& factor() const;

  KernelSpec kernel_;
  QuadratureRule rule_;
  double lambda_;
  Eigen::MatrixXd matrix_;
  Eigen::VectorXd sqrt_w_;
  std::uint64_t id_;
  std::unique_ptr<Factor> factor_;
};

/// Builds the operator for I - lambda*K. Requires 0 < lambda <= 1, a < b and
/// order >= 4; a missing order selects default_order().
DiscretizedOperator discretize(const KernelSpec& kernel, const Interval& interval,
                               std::optional<int> order, double lambda);

double log_det(const DiscretizedOperator& op);

/// Applies (I - lambda*K)^{-1} to node samples of a right-hand side.
Eigen::VectorXcd solve(const DiscretizedOperator& op, const Eigen::VectorXcd& rhs);

/// Samples a complex function at the operator's nodes.
Eigen::VectorXcd sample_at_nodes(const DiscretizedOperator& op,
                                 const std::function<Complex(double)>& fn);

/// Nystrom interpolation of a node solution to any x in the closed interval.
Complex nystrom_extend(const DiscretizedOperator& op, const Eigen::VectorXcd& node_solution,
                       const std::function<Complex(double)>& rhs_fn, double x);

/// Q(., y) for the resolvent kernel of lambda*K, sampled at the nodes.
struct ResolventColumn {
  double y = 0.0;
  Eigen::VectorXd node_values;
  const DiscretizedOperator* op = nullptr;

  /// Q(x, y) at an arbitrary x in the interval.
  double at(double x) const;
};

ResolventColumn resolvent_column(const DiscretizedOperator& op, double y);

/// Resolvent kernel Q(x, y) with (I - lambda K)^{-1} = I + Q, i.e.
/// Q = lambda k + lambda K Q.
double resolvent_value(const DiscretizedOperator& op, double x, double y);

/// One recorded linear solve.
struct SolveRecord {
  std::uint64_t op_id;
  Interval interval;
  KernelFamily family;
};

/// Records every solve performed by the current thread while alive.
/// Scopes nest; only the innermost one records.
class SolveTrace {
 public:
  SolveTrace();
  ~SolveTrace();
  SolveTrace(const SolveTrace&) = delete;
  SolveTrace& operator=(const SolveTrace&) = delete;

  const std::vector<SolveRecord>& records() const { return records_; }

  static void note(const DiscretizedOperator& op);

 private:
  std::vector<SolveRecord> records_;
  SolveTrace* previous_;
};

}  // namespace sinekernel
