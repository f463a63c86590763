#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "sinekernel/nystrom.hpp"
#include "sinekernel/report.hpp"

namespace sinekernel {

/// Edge data of the unit sine kernel on (-zeta, zeta) at lambda = 1.
///
///   q_diag  = Q_zeta(zeta, zeta)
///   q_anti  = Q_zeta(-zeta, zeta)
///   r       = e^{i zeta pi} + int Q_zeta(-zeta, s) e^{-i s pi} ds
///   q_2zeta = q(2 zeta), the right-endpoint value of (I - K)^{-1} e^{i x pi}
///             on (0, 2 zeta); computed on that interval, independently of
///             the centered picture.
struct ResolventSample {
  double zeta = 0.0;
  double q_diag = 0.0;
  double q_anti = 0.0;
  Complex r;
  Complex q_2zeta;
  double u = 0.0;  // 2 pi zeta
};

struct EdgeValues {
  double q_diag = 0.0;
  double q_anti = 0.0;
};

/// Throws InvalidArgument for zeta <= 0 and WindowError above kResolventWindow.
void check_resolvent_window(double zeta, const char* what);

/// Q_zeta(zeta, zeta) and Q_zeta(-zeta, zeta) from one resolvent column.
EdgeValues edge_values(double zeta, std::optional<int> order = {});

/// r(zeta) from the resolvent column at y = -zeta.
Complex r_value(double zeta, std::optional<int> order = {});

/// q(x) = (S_x^{-1} e^{i t pi})(x) on (0, x); q(0) = 1. Requires x <= 2*window.
Complex q_value(double x, std::optional<int> order = {});

/// q1(x) = (S_x^{-1} 1)(x) on (0, x); q1(0) = 1.
double q1_value(double x, std::optional<int> order = {});

ResolventSample sample(double zeta, std::optional<int> order = {});

/// Memoized per-point values for one sweep. Lookups are guarded by a mutex;
/// keys are exact doubles, so panel grids anchored at 0 share samples.
class SweepCache {
 public:
  explicit SweepCache(std::optional<int> order = {}) : order_(order) {}

  Complex r(double zeta);
  EdgeValues edges(double zeta);
  Complex q(double x);
  double q1(double x);

  std::optional<int> order() const { return order_; }

 private:
  std::optional<int> order_;
  std::mutex mutex_;
  std::map<double, Complex> r_;
  std::map<double, EdgeValues> edges_;
  std::map<double, Complex> q_;
  std::map<double, double> q1_;
};

/// Paired sides of the four edge relations
///   (i)   d/dz [z Q(z,z)]   = |r|^2
///   (ii)  2 pi z Q(-z,z)    = Im r^2
///   (iii) d/dz Q(z,z)       = 2 Q(-z,z)^2
///   (iv)  d/dz [z Q(-z,z)]  = Re r^2
/// Derivatives: central differences at h and h/2, one Richardson level.
struct JmmsResiduals {
  struct Relation {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual() const { return lhs - rhs; }
  };
  double zeta = 0.0;
  double h = 0.0;
  Relation diag_growth;
  Relation anti_imag;
  Relation diag_slope;
  Relation anti_growth;
};

/// Default step is 1e-3 * max(1, zeta). Requires zeta - h > 0 and zeta + h
/// inside the window.
JmmsResiduals jmms_residuals(double zeta, std::optional<double> h = {},
                             std::optional<int> order = {});

/// (S_zeta^{-1} e^{i t pi}, e^{i t pi}) and (S_zeta^{-1} 1, 1), computed from
/// one solve on (0, zeta), together with the same quantities as integrals of
/// |q(t)|^2 and q1(t)^2 over 12-point panels of width 0.25.
struct QuadraticForms {
  double zeta = 0.0;
  double exp_form = 0.0;
  double one_form = 0.0;
  double exp_form_integral = 0.0;
  double one_form_integral = 0.0;
  double exp_rel_dev = 0.0;
  double one_rel_dev = 0.0;
};

/// Requires 0 < zeta <= 2*window (full accuracy of one_form up to the window).
QuadraticForms quadratic_forms(double zeta, SweepCache* cache = nullptr);

/// M(x) = 1/2 - int_0^x sin(t pi)/(t pi) dt.
double edge_function_m(double x);

/// Discretized commutator residuals on (0, zeta):
///   [Q, S]     against -(1/(2 i pi)) int [e^{i(x-y)pi} - e^{-i(x-y)pi}] f(y) dy
///   A S - S A* against i int [M(x) + M(y)] f(y) dy,  A f = i int_0^x f
/// Norms are operator 2-norms in the quadrature-weighted inner product.
/// The commutator A S - S A does not have that right-hand side; its residual
/// is kept for reference.
struct OperatorIdentityCheck {
  double zeta = 0.0;
  int order = 0;
  double multiplication_residual = 0.0;
  double integration_residual = 0.0;
  double integration_literal_residual = 0.0;
  double multiplication_rhs_norm = 0.0;
  double integration_rhs_norm = 0.0;
  std::vector<double> multiplication_rhs_singular_values;
  std::vector<double> integration_rhs_singular_values;
};

OperatorIdentityCheck check_operator_identities(double zeta, std::optional<int> order = {});

/// Residuals < 1e-6 and numerical rank <= 2 (third singular value below
/// 1e-10 times the first).
VerificationReport verify_operator_identities(double zeta, std::optional<int> order = {});

/// Q(-x,-y) = Q(x,y) (absolute) and Q(x,y) = Q(y,x) (relative to
/// max(1, |Q|)) over random node pairs.
VerificationReport verify_symmetry(const std::vector<double>& zetas, int pairs = 100,
                                   unsigned seed = 20240601u, double tol = 1e-10);

/// |q(2 zeta) - e^{i zeta pi} r(zeta)| per zeta.
VerificationReport verify_lemma32(const std::vector<double>& zetas, double tol = 1e-7);

/// The four edge relations per zeta; (ii) at tol_exact, the rest at tol
/// relative to 1 + |lhs|.
VerificationReport verify_jmms(const std::vector<double>& zetas, std::optional<double> h = {},
                               double tol = 1e-5, double tol_exact = 1e-7);

}  // namespace sinekernel
