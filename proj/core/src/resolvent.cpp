#include "sinekernel/resolvent.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "sinekernel/errors.hpp"

namespace sinekernel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

Complex expi_pi(double x) { return std::polar(1.0, kPi * x); }

DiscretizedOperator centered_operator(double zeta, std::optional<int> order) {
  return discretize(KernelSpec::centered(), Interval{-zeta, zeta}, order, 1.0);
}

DiscretizedOperator half_line_operator(double x, std::optional<int> order) {
  return discretize(KernelSpec::centered(), Interval{0.0, x}, order, 1.0);
}

void check_half_line(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x))
    throw InvalidArgument(std::string(what) + ": x must be non-negative and finite");
  if (x > 2.0 * kResolventWindow)
    throw WindowError(std::string(what) + ": x = " + std::to_string(x) +
                      " exceeds the validity window x <= " + std::to_string(2.0 * kResolventWindow));
}

Complex r_from_column(const ResolventColumn& column, double zeta) {
  const QuadratureRule& rule = column.op->rule();
  Complex sum = expi_pi(zeta);
  for (int j = 0; j < rule.order(); ++j)
    sum += rule.weight(j) * column.node_values(j) * expi_pi(-rule.node(j));
  return sum;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void check_resolvent_window(double zeta, const char* what) {
  if (!(zeta > 0.0) || !std::isfinite(zeta))
    throw InvalidArgument(std::string(what) + ": zeta must be positive and finite");
  if (zeta > kResolventWindow)
    throw WindowError(std::string(what) + ": zeta = " + std::to_string(zeta) +
                      " exceeds the validity window zeta <= " + std::to_string(kResolventWindow));
}

EdgeValues edge_values(double zeta, std::optional<int> order) {
  check_resolvent_window(zeta, "edge_values");
  const DiscretizedOperator op = centered_operator(zeta, order);
  const ResolventColumn column = resolvent_column(op, zeta);
  return {column.at(zeta), column.at(-zeta)};
}

Complex r_value(double zeta, std::optional<int> order) {
  check_resolvent_window(zeta, "r_value");
  const DiscretizedOperator op = centered_operator(zeta, order);
  return r_from_column(resolvent_column(op, -zeta), zeta);
}

Complex q_value(double x, std::optional<int> order) {
  check_half_line(x, "q_value");
  if (x == 0.0) return 1.0;
  const DiscretizedOperator op = half_line_operator(x, order);
  const Eigen::VectorXcd f = op.solve(sample_at_nodes(op, expi_pi));
  return op.extend(f, expi_pi(x), x);
}

double q1_value(double x, std::optional<int> order) {
  check_half_line(x, "q1_value");
  if (x == 0.0) return 1.0;
  const DiscretizedOperator op = half_line_operator(x, order);
  const Eigen::VectorXd g = op.solve(Eigen::VectorXd::Ones(op.order()).eval());
  return op.extend(g, 1.0, x);
}

ResolventSample sample(double zeta, std::optional<int> order) {
  check_resolvent_window(zeta, "sample");
  const DiscretizedOperator op = centered_operator(zeta, order);
  const ResolventColumn right = resolvent_column(op, zeta);
  const ResolventColumn left = resolvent_column(op, -zeta);
  ResolventSample s;
  s.zeta = zeta;
  s.u = 2.0 * kPi * zeta;
  s.q_diag = right.at(zeta);
  s.q_anti = right.at(-zeta);
  s.r = r_from_column(left, zeta);
  s.q_2zeta = q_value(2.0 * zeta, order);
  return s;
}

Complex SweepCache::r(double zeta) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = r_.find(zeta); it != r_.end()) return it->second;
  }
  const Complex v = r_value(zeta, order_);
  std::lock_guard lock(mutex_);
  return r_.emplace(zeta, v).first->second;
}

EdgeValues SweepCache::edges(double zeta) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = edges_.find(zeta); it != edges_.end()) return it->second;
  }
  const EdgeValues v = edge_values(zeta, order_);
  std::lock_guard lock(mutex_);
  return edges_.emplace(zeta, v).first->second;
}

Complex SweepCache::q(double x) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = q_.find(x); it != q_.end()) return it->second;
  }
  const Complex v = q_value(x, order_);
  std::lock_guard lock(mutex_);
  return q_.emplace(x, v).first->second;
}

double SweepCache::q1(double x) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = q1_.find(x); it != q1_.end()) return it->second;
  }
  const double v = q1_value(x, order_);
  std::lock_guard lock(mutex_);
  return q1_.emplace(x, v).first->second;
}

JmmsResiduals jmms_residuals(double zeta, std::optional<double> h_opt, std::optional<int> order) {
  const double h = h_opt.value_or(1e-3 * std::max(1.0, zeta));
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("jmms_residuals: step must be positive");
  if (!(zeta - h > 0.0)) throw InvalidArgument("jmms_residuals: requires zeta - h > 0");
  check_resolvent_window(zeta + h, "jmms_residuals");

  const int n = order.value_or(default_order(KernelSpec::centered(), Interval{-zeta, zeta}));
  const EdgeValues p1 = edge_values(zeta + h, n);
  const EdgeValues m1 = edge_values(zeta - h, n);
  const EdgeValues p2 = edge_values(zeta + 0.5 * h, n);
  const EdgeValues m2 = edge_values(zeta - 0.5 * h, n);
  const ResolventSample c = sample(zeta, n);

  auto derivative = [&](auto&& f) {
    const double coarse = (f(zeta + h, p1) - f(zeta - h, m1)) / (2.0 * h);
    const double fine = (f(zeta + 0.5 * h, p2) - f(zeta - 0.5 * h, m2)) / h;
    return (4.0 * fine - coarse) / 3.0;
  };

  const Complex r2 = c.r * c.r;
  JmmsResiduals out;
  out.zeta = zeta;
  out.h = h;
  out.diag_growth = {derivative([](double z, const EdgeValues& e) { return z * e.q_diag; }), std::norm(c.r)};
  out.anti_imag = {2.0 * kPi * zeta * c.q_anti, r2.imag()};
  out.diag_slope = {derivative([](double, const EdgeValues& e) { return e.q_diag; }), 2.0 * c.q_anti * c.q_anti};
  out.anti_growth = {derivative([](double z, const EdgeValues& e) { return z * e.q_anti; }), r2.real()};
  return out;
}

QuadraticForms quadratic_forms(double zeta, SweepCache* cache) {
  if (!(zeta > 0.0) || !std::isfinite(zeta))
    throw InvalidArgument("quadratic_forms: zeta must be positive and finite");
  check_half_line(zeta, "quadratic_forms");
  SweepCache local;
  SweepCache& c = cache != nullptr ? *cache : local;

  const DiscretizedOperator op = half_line_operator(zeta, c.order());
  const QuadratureRule& rule = op.rule();
  const Eigen::VectorXcd e = sample_at_nodes(op, expi_pi);
  const Eigen::VectorXcd f = op.solve(e);
  const Eigen::VectorXd g = op.solve(Eigen::VectorXd::Ones(op.order()).eval());

  QuadraticForms out;
  out.zeta = zeta;
  for (int i = 0; i < rule.order(); ++i) {
    out.exp_form += rule.weight(i) * (f(i) * std::conj(e(i))).real();
    out.one_form += rule.weight(i) * g(i);
  }
  const QuadratureRule panels = composite_gauss_legendre(0.0, zeta, 0.25, 12);
  out.exp_form_integral = panels.integrate([&](double t) { return std::norm(c.q(t)); });
  out.one_form_integral = panels.integrate([&](double t) {
    const double v = c.q1(t);
    return v * v;
  });
  out.exp_rel_dev = std::abs(out.exp_form - out.exp_form_integral) / std::abs(out.exp_form);
  out.one_rel_dev = std::abs(out.one_form - out.one_form_integral) / std::abs(out.one_form);
  return out;
}

double edge_function_m(double x) {
  if (x == 0.0) return 0.5;
  const int points = std::max(40, static_cast<int>(std::ceil(16.0 * std::abs(x))));
  const QuadratureRule rule = x > 0.0 ? gauss_legendre(points, 0.0, x) : gauss_legendre(points, x, 0.0);
  const double integral = rule.integrate([](double t) { return sinc_pi(t); });
  return 0.5 - (x > 0.0 ? integral : -integral);
}

namespace {

// B_ij = int_0^{x_i} l_j(t) dt for the Lagrange basis on the rule's nodes.
Eigen::MatrixXd integration_matrix(const QuadratureRule& rule) {
  const int n = rule.order();
  const QuadratureRule& ref = gauss_legendre(n);
  // Barycentric weights for Gauss-Legendre nodes: (-1)^j sqrt((1 - xi_j^2) w_j).
  Eigen::VectorXd bary(n);
  for (int j = 0; j < n; ++j) {
    const double xi = ref.node(j);
    bary(j) = ((j % 2 == 0) ? 1.0 : -1.0) * std::sqrt((1.0 - xi * xi) * ref.weight(j));
  }
  const double a = rule.interval().a;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd basis(n);
  for (int i = 0; i < n; ++i) {
    const QuadratureRule sub = map_to_interval(ref, a, rule.node(i));
    for (int k = 0; k < n; ++k) {
      const double t = sub.node(k);
      int exact = -1;
      double denom = 0.0;
      for (int j = 0; j < n; ++j) {
        const double d = t - rule.node(j);
        if (d == 0.0) {
          exact = j;
          break;
        }
        basis(j) = bary(j) / d;
        denom += basis(j);
      }
      if (exact >= 0) {
        basis.setZero();
        basis(exact) = 1.0;
      } else {
        basis /= denom;
      }
      B.row(i) += sub.weight(k) * basis.transpose();
    }
  }
  return B;
}

// Spectral norm of W^{1/2} E W^{-1/2}.
double weighted_norm(const Eigen::MatrixXcd& E, const Eigen::VectorXd& sqrt_w) {
  const Eigen::MatrixXcd S = sqrt_w.asDiagonal() * E * sqrt_w.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(S);
  return svd.singularValues()(0);
}

std::vector<double> weighted_singular_values(const Eigen::MatrixXcd& E, const Eigen::VectorXd& sqrt_w) {
  const Eigen::MatrixXcd S = sqrt_w.asDiagonal() * E * sqrt_w.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(S);
  const Eigen::VectorXd sv = svd.singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

}  // namespace

OperatorIdentityCheck check_operator_identities(double zeta, std::optional<int> order) {
  check_resolvent_window(zeta, "check_operator_identities");
  const DiscretizedOperator op = half_line_operator(zeta, order);
  const QuadratureRule& rule = op.rule();
  const int n = rule.order();
  const Eigen::VectorXd x = op.node_vector();
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(rule.weights().data(), n);

  const Eigen::MatrixXcd S = (Eigen::MatrixXd::Identity(n, n) - op.kernel_times_weights()).cast<Complex>();
  const Eigen::MatrixXcd X = x.cast<Complex>().asDiagonal();
  const Eigen::MatrixXd B = integration_matrix(rule);
  const Eigen::MatrixXcd A = kI * B.cast<Complex>();
  // Adjoint in L^2(0, zeta): A* f = -i int_x^zeta f.
  const Eigen::MatrixXcd A_adj =
      -kI * (Eigen::VectorXd::Ones(n) * w.transpose() - B).cast<Complex>();

  Eigen::MatrixXcd rhs_mult(n, n), rhs_int(n, n);
  Eigen::VectorXd m(n);
  for (int i = 0; i < n; ++i) m(i) = edge_function_m(x(i));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = x(i) - x(j);
      rhs_mult(i, j) = -(expi_pi(d) - expi_pi(-d)) / (2.0 * kI * kPi) * w(j);
      rhs_int(i, j) = kI * (m(i) + m(j)) * w(j);
    }
  }

  const Eigen::MatrixXcd comm_mult = X * S - S * X;
  const Eigen::MatrixXcd comm_int = A * S - S * A_adj;
  const Eigen::MatrixXcd comm_literal = A * S - S * A;
  const Eigen::VectorXd sw = op.sqrt_weights();

  OperatorIdentityCheck out;
  out.zeta = zeta;
  out.order = n;
  out.multiplication_residual = weighted_norm(comm_mult - rhs_mult, sw);
  out.integration_residual = weighted_norm(comm_int - rhs_int, sw);
  out.integration_literal_residual = weighted_norm(comm_literal - rhs_int, sw);
  out.multiplication_rhs_singular_values = weighted_singular_values(rhs_mult, sw);
  out.integration_rhs_singular_values = weighted_singular_values(rhs_int, sw);
  out.multiplication_rhs_norm = out.multiplication_rhs_singular_values.front();
  out.integration_rhs_norm = out.integration_rhs_singular_values.front();
  return out;
}

VerificationReport verify_operator_identities(double zeta, std::optional<int> order) {
  const OperatorIdentityCheck c = check_operator_identities(zeta, order);
  VerificationReport report("identities");
  const std::string at = "zeta=" + fmt(zeta);
  report.add_scaled(at + " [Q,S] residual", c.multiplication_residual, 0.0, 1e-6, 1.0);
  report.add_scaled(at + " AS-SA* residual", c.integration_residual, 0.0, 1e-6, 1.0);
  auto rank_ratio = [](const std::vector<double>& sv) { return sv.size() < 3 ? 0.0 : sv[2] / sv[0]; };
  report.add_scaled(at + " [Q,S] rhs sigma3/sigma1", rank_ratio(c.multiplication_rhs_singular_values), 0.0,
                    1e-10, 1.0);
  report.add_scaled(at + " AS-SA* rhs sigma3/sigma1", rank_ratio(c.integration_rhs_singular_values), 0.0,
                    1e-10, 1.0);
  return report;
}

VerificationReport verify_symmetry(const std::vector<double>& zetas, int pairs, unsigned seed, double tol) {
  VerificationReport report("symmetry");
  std::mt19937 rng(seed);
  for (double zeta : zetas) {
    check_resolvent_window(zeta, "verify_symmetry");
    const DiscretizedOperator op = centered_operator(zeta, std::nullopt);
    const int n = op.order();
    std::map<int, Eigen::VectorXd> columns;
    auto column = [&](int j) -> const Eigen::VectorXd& {
      auto it = columns.find(j);
      if (it == columns.end()) it = columns.emplace(j, resolvent_column(op, op.rule().node(j)).node_values).first;
      return it->second;
    };
    std::uniform_int_distribution<int> pick(0, n - 1);
    double parity = 0.0, swap = 0.0;
    double parity_lhs = 0.0, parity_rhs = 0.0, swap_lhs = 0.0, swap_rhs = 0.0;
    for (int p = 0; p < pairs; ++p) {
      const int i = pick(rng);
      const int j = pick(rng);
      const double direct = column(j)(i);
      // Nodes are exactly symmetric: x_{n-1-k} = -x_k.
      const double reflected = column(n - 1 - j)(n - 1 - i);
      const double swapped = column(i)(j);
      if (std::abs(reflected - direct) >= parity) {
        parity = std::abs(reflected - direct);
        parity_lhs = reflected;
        parity_rhs = direct;
      }
      if (std::abs(swapped - direct) >= swap) {
        swap = std::abs(swapped - direct);
        swap_lhs = swapped;
        swap_rhs = direct;
      }
    }
    const std::string at = "zeta=" + fmt(zeta);
    report.add_scaled(at + " max|Q(-x,-y)-Q(x,y)|", parity_lhs, parity_rhs, tol, 1.0);
    report.add_scaled(at + " max|Q(y,x)-Q(x,y)|", swap_lhs, swap_rhs, tol, std::max(1.0, std::abs(swap_rhs)));
  }
  return report;
}

VerificationReport verify_lemma32(const std::vector<double>& zetas, double tol) {
  VerificationReport report("lemma32");
  for (double zeta : zetas) {
    const ResolventSample s = sample(zeta);
    report.add_scaled("zeta=" + fmt(zeta) + " q(2z) vs e^{iz pi} r(z)", s.q_2zeta, expi_pi(zeta) * s.r, tol,
                      1.0);
  }
  return report;
}

VerificationReport verify_jmms(const std::vector<double>& zetas, std::optional<double> h, double tol,
                               double tol_exact) {
  VerificationReport report("jmms");
  for (double zeta : zetas) {
    const JmmsResiduals j = jmms_residuals(zeta, h);
    const std::string at = "zeta=" + fmt(zeta);
    auto add = [&](const char* name, const JmmsResiduals::Relation& rel, double t) {
      report.add_scaled(at + " " + name, rel.lhs, rel.rhs, t, 1.0 + std::abs(rel.lhs));
    };
    add("(i) d[zQ(z,z)]/dz = |r|^2", j.diag_growth, tol);
    add("(ii) 2 pi z Q(-z,z) = Im r^2", j.anti_imag, tol_exact);
    add("(iii) dQ(z,z)/dz = 2Q(-z,z)^2", j.diag_slope, tol);
    add("(iv) d[zQ(-z,z)]/dz = Re r^2", j.anti_growth, tol);
  }
  return report;
}

}  // namespace sinekernel
