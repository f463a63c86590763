#include "sinekernel/nystrom.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <string>

#include "sinekernel/errors.hpp"

namespace sinekernel {

namespace {

std::atomic<std::uint64_t> next_operator_id{1};
thread_local SolveTrace* active_trace = nullptr;
std::atomic<int> order_override{0};

}  // namespace

std::optional<int> default_order_override() {
  const int n = order_override.load();
  return n > 0 ? std::optional<int>(n) : std::nullopt;
}

std::optional<int> set_default_order_override(std::optional<int> order) {
  if (order && (*order < 4 || *order > kMaxGaussOrder))
    throw InvalidArgument("order must lie in [4, " + std::to_string(kMaxGaussOrder) + "]");
  const int previous = order_override.exchange(order.value_or(0));
  return previous > 0 ? std::optional<int>(previous) : std::nullopt;
}

int default_order(const KernelSpec& kernel, const Interval& interval) {
  if (const int n = order_override.load(); n > 0) return n;
  const double h = 0.5 * interval.length() * kernel.bandwidth();
  return std::max(48, static_cast<int>(std::ceil(40.0 * h)));
}

// On a reflection-symmetric rule the matrix commutes with node reflection J
// and splits into even and odd blocks of half size. Solving in that basis
// makes solutions exactly reflection-equivariant: solve(J b) == J solve(b).
struct DiscretizedOperator::Factor {
  std::once_flag once;
  bool split = false;
  Eigen::LLT<Eigen::MatrixXd> full;
  Eigen::LLT<Eigen::MatrixXd> even;
  Eigen::LLT<Eigen::MatrixXd> odd;
  bool positive = false;
};

namespace {

bool reflection_symmetric(const QuadratureRule& rule, const Eigen::MatrixXd& a) {
  const int n = rule.order();
  for (int i = 0; i < n; ++i)
    if (rule.node(i) != -rule.node(n - 1 - i) || rule.weight(i) != rule.weight(n - 1 - i)) return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (a(i, j) != a(n - 1 - i, n - 1 - j)) return false;
  return true;
}

bool positive_pivots(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return llt.info() == Eigen::Success && (llt.matrixLLT().diagonal().array() > 0.0).all();
}

// Solves A g = b for a block of weighted right-hand sides.
Eigen::MatrixXd solve_weighted(const Eigen::LLT<Eigen::MatrixXd>& full, const Eigen::LLT<Eigen::MatrixXd>& even,
                               const Eigen::LLT<Eigen::MatrixXd>& odd, bool split, const Eigen::MatrixXd& b) {
  if (!split) return full.solve(b);
  const int n = static_cast<int>(b.rows());
  const int h = n / 2;
  const double s = std::sqrt(0.5);
  Eigen::MatrixXd be(even.rows(), b.cols());
  Eigen::MatrixXd bo(h, b.cols());
  for (int i = 0; i < h; ++i) {
    be.row(i) = s * (b.row(i) + b.row(n - 1 - i));
    bo.row(i) = s * (b.row(i) - b.row(n - 1 - i));
  }
  if (n % 2 == 1) be.row(h) = b.row(h);
  const Eigen::MatrixXd xe = even.solve(be);
  const Eigen::MatrixXd xo = h > 0 ? Eigen::MatrixXd(odd.solve(bo)) : Eigen::MatrixXd(0, b.cols());
  Eigen::MatrixXd x(n, b.cols());
  for (int i = 0; i < h; ++i) {
    x.row(i) = s * (xe.row(i) + xo.row(i));
    x.row(n - 1 - i) = s * (xe.row(i) - xo.row(i));
  }
  if (n % 2 == 1) x.row(h) = xe.row(h);
  return x;
}

}  // namespace

DiscretizedOperator::DiscretizedOperator(const KernelSpec& kernel, const Interval& interval,
                                         int order, double lambda)
    : kernel_(kernel),
      rule_(gauss_legendre(order < 1 ? 1 : order, interval.a, interval.b)),
      lambda_(lambda),
      id_(next_operator_id.fetch_add(1)),
      factor_(std::make_unique<Factor>()) {
  kernel_.validate();
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw InvalidArgument("discretize: lambda must lie in (0, 1], got " + std::to_string(lambda));
  if (order < 4) throw InvalidArgument("discretize: order must be at least 4");

  const int n = rule_.order();
  sqrt_w_.resize(n);
  for (int i = 0; i < n; ++i) sqrt_w_(i) = std::sqrt(rule_.weight(i));

  matrix_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double k = kernel_(rule_.node(i), rule_.node(j));
      if (!std::isfinite(k)) throw InternalError("discretize: non-finite kernel value");
      const double a = (i == j ? 1.0 : 0.0) - lambda_ * k * (sqrt_w_(i) * sqrt_w_(j));
      matrix_(i, j) = a;
      matrix_(j, i) = a;
    }
  }
}

DiscretizedOperator::~DiscretizedOperator() = default;
DiscretizedOperator::DiscretizedOperator(DiscretizedOperator&&) noexcept = default;
DiscretizedOperator& DiscretizedOperator::operator=(DiscretizedOperator&&) noexcept = default;

const DiscretizedOperator::Factor& DiscretizedOperator::factor() const {
  std::call_once(factor_->once, [this] {
    Factor& f = *factor_;
    f.split = reflection_symmetric(rule_, matrix_);
    if (!f.split) {
      f.full.compute(matrix_);
      f.positive = positive_pivots(f.full);
      return;
    }
    const int n = order();
    const int h = n / 2;
    const int m = n - h;
    Eigen::MatrixXd e(m, m);
    Eigen::MatrixXd o(h, h);
    for (int i = 0; i < h; ++i) {
      for (int j = 0; j < h; ++j) {
        e(i, j) = matrix_(i, j) + matrix_(i, n - 1 - j);
        o(i, j) = matrix_(i, j) - matrix_(i, n - 1 - j);
      }
    }
    if (n % 2 == 1) {
      for (int i = 0; i < h; ++i) {
        e(i, h) = std::sqrt(2.0) * matrix_(i, h);
        e(h, i) = e(i, h);
      }
      e(h, h) = matrix_(h, h);
    }
    f.even.compute(e);
    f.positive = positive_pivots(f.even);
    if (h > 0) {
      f.odd.compute(o);
      f.positive = f.positive && positive_pivots(f.odd);
    }
  });
  return *factor_;
}

Eigen::VectorXd DiscretizedOperator::node_vector() const {
  return Eigen::Map<const Eigen::VectorXd>(rule_.nodes().data(), rule_.order());
}

Eigen::MatrixXd DiscretizedOperator::kernel_times_weights() const {
  const int n = rule_.order();
  Eigen::MatrixXd kw(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) kw(i, j) = kernel_(rule_.node(i), rule_.node(j)) * rule_.weight(j);
  return kw;
}

double DiscretizedOperator::log_det() const {
  const Factor& f = factor();
  if (!f.positive)
    throw NotPositiveError("log_det: operator not positive (non-positive Cholesky pivot)");
  double sum = 0.0;
  auto accumulate = [&sum](const Eigen::LLT<Eigen::MatrixXd>& llt) {
    const Eigen::VectorXd diag = llt.matrixLLT().diagonal();
    for (int i = 0; i < diag.size(); ++i) sum += std::log(diag(i));
  };
  if (f.split) {
    accumulate(f.even);
    if (order() > 1) accumulate(f.odd);
  } else {
    accumulate(f.full);
  }
  return 2.0 * sum;
}

Eigen::VectorXd DiscretizedOperator::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != order()) throw InvalidArgument("solve: rhs size does not match the operator order");
  if (!rhs.allFinite()) throw InvalidArgument("solve: rhs must be finite at all nodes");
  const Factor& f = factor();
  if (!f.positive) throw NotInvertibleError("solve: operator not invertible");
  SolveTrace::note(*this);
  const Eigen::MatrixXd g = solve_weighted(f.full, f.even, f.odd, f.split, sqrt_w_.cwiseProduct(rhs));
  return g.col(0).cwiseQuotient(sqrt_w_);
}

Eigen::VectorXcd DiscretizedOperator::solve(const Eigen::VectorXcd& rhs) const {
  if (rhs.size() != order()) throw InvalidArgument("solve: rhs size does not match the operator order");
  if (!rhs.allFinite()) throw InvalidArgument("solve: rhs must be finite at all nodes");
  const Factor& f = factor();
  if (!f.positive) throw NotInvertibleError("solve: operator not invertible");
  SolveTrace::note(*this);
  Eigen::MatrixXd parts(order(), 2);
  parts.col(0) = sqrt_w_.cwiseProduct(rhs.real());
  parts.col(1) = sqrt_w_.cwiseProduct(rhs.imag());
  const Eigen::MatrixXd g = solve_weighted(f.full, f.even, f.odd, f.split, parts);
  Eigen::VectorXcd out(order());
  for (int i = 0; i < order(); ++i) out(i) = Complex(g(i, 0), g(i, 1)) / sqrt_w_(i);
  return out;
}

Complex DiscretizedOperator::extend(const Eigen::VectorXcd& node_solution, Complex rhs_at_x,
                                    double x) const {
  if (!interval().contains(x)) throw InvalidArgument("nystrom_extend: x outside the interval");
  Complex sum = 0.0;
  for (int j = 0; j < order(); ++j) sum += rule_.weight(j) * kernel_(x, rule_.node(j)) * node_solution(j);
  return rhs_at_x + lambda_ * sum;
}

double DiscretizedOperator::extend(const Eigen::VectorXd& node_solution, double rhs_at_x, double x) const {
  if (!interval().contains(x)) throw InvalidArgument("nystrom_extend: x outside the interval");
  double sum = 0.0;
  for (int j = 0; j < order(); ++j) sum += rule_.weight(j) * kernel_(x, rule_.node(j)) * node_solution(j);
  return rhs_at_x + lambda_ * sum;
}

DiscretizedOperator discretize(const KernelSpec& kernel, const Interval& interval,
                               std::optional<int> order, double lambda) {
  if (!(interval.a < interval.b)) throw InvalidArgument("discretize: requires a < b");
  kernel.validate();
  return DiscretizedOperator(kernel, interval, order.value_or(default_order(kernel, interval)), lambda);
}

double log_det(const DiscretizedOperator& op) { return op.log_det(); }

Eigen::VectorXcd solve(const DiscretizedOperator& op, const Eigen::VectorXcd& rhs) {
  return op.solve(rhs);
}

Eigen::VectorXcd sample_at_nodes(const DiscretizedOperator& op,
                                 const std::function<Complex(double)>& fn) {
  Eigen::VectorXcd v(op.order());
  for (int i = 0; i < op.order(); ++i) v(i) = fn(op.rule().node(i));
  return v;
}

Complex nystrom_extend(const DiscretizedOperator& op, const Eigen::VectorXcd& node_solution,
                       const std::function<Complex(double)>& rhs_fn, double x) {
  if (!op.interval().contains(x)) throw InvalidArgument("nystrom_extend: x outside the interval");
  return op.extend(node_solution, rhs_fn(x), x);
}

double ResolventColumn::at(double x) const {
  const double lam = op->lambda();
  return op->extend(node_values, lam * op->kernel()(x, y), x);
}

ResolventColumn resolvent_column(const DiscretizedOperator& op, double y) {
  if (!op.interval().contains(y)) throw InvalidArgument("resolvent: y outside the interval");
  Eigen::VectorXd rhs(op.order());
  for (int i = 0; i < op.order(); ++i) rhs(i) = op.lambda() * op.kernel()(op.rule().node(i), y);
  return ResolventColumn{y, op.solve(rhs), &op};
}

double resolvent_value(const DiscretizedOperator& op, double x, double y) {
  if (!op.interval().contains(x)) throw InvalidArgument("resolvent: x outside the interval");
  return resolvent_column(op, y).at(x);
}

SolveTrace::SolveTrace() : previous_(active_trace) { active_trace = this; }

SolveTrace::~SolveTrace() { active_trace = previous_; }

void SolveTrace::note(const DiscretizedOperator& op) {
  if (active_trace != nullptr)
    active_trace->records_.push_back({op.id(), op.interval(), op.kernel().family});
}

}  // namespace sinekernel
