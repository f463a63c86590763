#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sinekernel {

struct Interval {
  double a = -1.0;
  double b = 1.0;

  double length() const { return b - a; }
  double midpoint() const { return 0.5 * (a + b); }
  bool contains(double x) const { return x >= a && x <= b; }
};

/// Nodes and positive weights of a quadrature rule on a finite interval.
///
/// Instances are immutable once built. Nodes are strictly increasing and lie
/// in the open interval.
class QuadratureRule {
 public:
  QuadratureRule(std::vector<double> nodes, std::vector<double> weights, Interval interval);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  const Interval& interval() const { return interval_; }
  int order() const { return static_cast<int>(nodes_.size()); }

  template <class F>
  auto integrate(F&& f) const {
    using R = decltype(f(0.0));
    R sum{};
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(nodes_[i]);
    return sum;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  Interval interval_;
};

inline constexpr int kMaxGaussOrder = 2000;

/// Gauss-Legendre rule of the given order on (-1, 1).
///
/// Nodes come from Newton iteration on the three-term Legendre recurrence,
/// started from the standard cosine asymptotic guess. Rules are cached per
/// order for the lifetime of the process; the returned reference stays valid.
/// Throws InvalidArgument unless 1 <= order <= kMaxGaussOrder.
const QuadratureRule& gauss_legendre(int order);

/// Affine image of `rule` on (a, b). Throws InvalidArgument unless a < b.
QuadratureRule map_to_interval(const QuadratureRule& rule, double a, double b);

inline QuadratureRule gauss_legendre(int order, double a, double b) {
  return map_to_interval(gauss_legendre(order), a, b);
}

/// Concatenated Gauss-Legendre panels of `points` nodes covering (a, b).
/// Panels start at `a` and have width `panel_width`; only the last one may be
/// shorter. Keeping the panel grid anchored at `a` lets callers share samples
/// between integrals with different upper limits.
QuadratureRule composite_gauss_legendre(double a, double b, double panel_width, int points);

}  // namespace sinekernel
