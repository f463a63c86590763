#include "sinekernel/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "sinekernel/errors.hpp"

namespace sinekernel {

QuadratureRule::QuadratureRule(std::vector<double> nodes, std::vector<double> weights,
                               Interval interval)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), interval_(interval) {
  if (nodes_.empty() || nodes_.size() != weights_.size())
    throw InvalidArgument("quadrature rule needs matching, non-empty nodes and weights");
  if (!(interval_.a < interval_.b))
    throw InvalidArgument("quadrature interval requires a < b");
}

namespace {

struct LegendreEval {
  double value;
  double derivative;
};

// P_n(x) and P_n'(x) by the three-term recurrence; |x| < 1.
LegendreEval legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  if (n == 0) return {1.0, 0.0};
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

QuadratureRule build_gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  const int half = n / 2;
  for (int i = 0; i < half; ++i) {
    // Largest root first; the guess is accurate to O(n^-2).
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    LegendreEval p{};
    for (int it = 0; it < 100; ++it) {
      p = legendre(n, z);
      const double dz = p.value / p.derivative;
      z -= dz;
      if (std::abs(dz) <= 1e-15) break;
    }
    p = legendre(n, z);
    const double wi = 2.0 / ((1.0 - z * z) * p.derivative * p.derivative);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
  if (n % 2 == 1) {
    const LegendreEval p = legendre(n, 0.0);
    x[half] = 0.0;
    w[half] = 2.0 / (p.derivative * p.derivative);
  }
  return QuadratureRule(std::move(x), std::move(w), Interval{-1.0, 1.0});
}

}  // namespace

const QuadratureRule& gauss_legendre(int order) {
  if (order < 1 || order > kMaxGaussOrder)
    throw InvalidArgument("gauss_legendre: order must be in [1, " +
                          std::to_string(kMaxGaussOrder) + "], got " + std::to_string(order));
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<const QuadratureRule>(build_gauss_legendre(order));
  return *slot;
}

QuadratureRule map_to_interval(const QuadratureRule& rule, double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw InvalidArgument("map_to_interval: requires finite a < b");
  const Interval& from = rule.interval();
  if (from.a == a && from.b == b) return rule;
  const double scale = (b - a) / from.length();
  std::vector<double> x(rule.nodes().begin(), rule.nodes().end());
  std::vector<double> w(rule.weights().begin(), rule.weights().end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = a + (x[i] - from.a) * scale;
    w[i] *= scale;
  }
  // Keep exact reflection symmetry when mapping a symmetric rule to a symmetric interval.
  if (a == -b && from.a == -from.b) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n / 2; ++i) x[n - 1 - i] = -x[i];
    if (n % 2 == 1) x[n / 2] = 0.0;
  }
  return QuadratureRule(std::move(x), std::move(w), Interval{a, b});
}

QuadratureRule composite_gauss_legendre(double a, double b, double panel_width, int points) {
  if (!(a < b)) throw InvalidArgument("composite_gauss_legendre: requires a < b");
  if (!(panel_width > 0.0)) throw InvalidArgument("composite_gauss_legendre: panel width must be positive");
  const QuadratureRule& base = gauss_legendre(points);
  std::vector<double> x, w;
  double left = a;
  for (int k = 1; left < b; ++k) {
    double right = a + k * panel_width;
    // Absorb a sliver rather than emit a degenerate panel.
    if (right > b || b - right < 1e-12 * panel_width) right = b;
    const QuadratureRule panel = map_to_interval(base, left, right);
    x.insert(x.end(), panel.nodes().begin(), panel.nodes().end());
    w.insert(w.end(), panel.weights().begin(), panel.weights().end());
    left = right;
  }
  return QuadratureRule(std::move(x), std::move(w), Interval{a, b});
}

}  // namespace sinekernel
