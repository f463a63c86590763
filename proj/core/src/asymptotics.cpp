#include "sinekernel/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sinekernel/errors.hpp"
#include "sinekernel/resolvent.hpp"

namespace sinekernel {

namespace {

constexpr double kPi = std::numbers::pi;

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Right-hand side of the squared relation at power v^m.
Rational squared_target(const std::vector<Rational>& c, int m) {
  if (m == 0) return Rational(1, 4);
  if (m == 1) return Rational(-1, 4);
  return Rational(2 * m - 1) * c[m - 2];
}

bool decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

}  // namespace

std::vector<Rational> derive_a_coefficients(const std::vector<Rational>& c, int count) {
  if (count < 1) throw InvalidArgument("derive_a_coefficients: count must be positive");
  if (count > static_cast<int>(c.size()) + 2)
    throw InvalidArgument("derive_a_coefficients: " + std::to_string(count) +
                          " coefficients need at least " + std::to_string(count - 2) + " c entries");
  std::vector<Rational> a;
  a.reserve(count);
  a.push_back(Rational(1, 2));
  for (int m = 1; m < count; ++m) {
    Rational cross(0);
    for (int k = 1; k < m; ++k) cross += a[k] * a[m - k];
    a.push_back((squared_target(c, m) - cross) / (Rational(2) * a[0]));
  }
  return a;
}

CoefficientTable CoefficientTable::builtin() { return with_higher({}); }

CoefficientTable CoefficientTable::with_higher(const std::vector<Rational>& higher) {
  CoefficientTable t;
  t.c = {Rational(-1, 4), Rational(-5, 2)};
  t.c.insert(t.c.end(), higher.begin(), higher.end());
  t.a = derive_a_coefficients(t.c, static_cast<int>(t.c.size()) + 2);
  return t;
}

Rational CoefficientTable::c2n(int n) const {
  if (n < 1 || n > static_cast<int>(c.size()))
    throw InvalidArgument("c_{2n}: n = " + std::to_string(n) + " not available");
  return c[n - 1];
}

Rational CoefficientTable::a2n(int n) const {
  if (n < 0 || n >= static_cast<int>(a.size()))
    throw InvalidArgument("a_{2n}: n = " + std::to_string(n) + " not available");
  return a[n];
}

const char* to_string(SeriesQuantity q) {
  switch (q) {
    case SeriesQuantity::q_diag: return "qdiag";
    case SeriesQuantity::q_anti: return "qanti";
    case SeriesQuantity::abs_r_sq: return "abs-rsq";
    case SeriesQuantity::r_sq: return "rsq";
    case SeriesQuantity::q_sq: return "qsq";
  }
  return "unknown";
}

std::optional<SeriesQuantity> parse_series_quantity(const std::string& name) {
  for (SeriesQuantity q : {SeriesQuantity::q_diag, SeriesQuantity::q_anti, SeriesQuantity::abs_r_sq,
                           SeriesQuantity::r_sq, SeriesQuantity::q_sq})
    if (name == to_string(q)) return q;
  return std::nullopt;
}

bool is_complex(SeriesQuantity q) { return q == SeriesQuantity::r_sq || q == SeriesQuantity::q_sq; }

int max_truncation(SeriesQuantity q, const CoefficientTable& table) {
  switch (q) {
    case SeriesQuantity::q_diag:
    case SeriesQuantity::abs_r_sq: return static_cast<int>(table.c.size());
    default: return static_cast<int>(table.a.size()) - 1;
  }
}

std::complex<double> series_term(SeriesQuantity q, double u, int n, const CoefficientTable& table) {
  if (!(u > 0.0)) throw InvalidArgument("series: u must be positive");
  switch (q) {
    case SeriesQuantity::q_diag:
      if (n == 0) return kPi * (0.25 * u + 0.25 / u);
      return -kPi * to_double(table.c2n(n)) / std::pow(u, 2 * n + 1);
    case SeriesQuantity::abs_r_sq:
      if (n == 0) return kPi * 0.5 * u;
      return kPi * 2.0 * n * to_double(table.c2n(n)) / std::pow(u, 2 * n + 1);
    case SeriesQuantity::q_anti: return kPi * to_double(table.a2n(n)) / std::pow(u, 2 * n);
    case SeriesQuantity::r_sq:
    case SeriesQuantity::q_sq: {
      const double a = to_double(table.a2n(n));
      const std::complex<double> t(kPi * a * (1.0 - 2.0 * n) / std::pow(u, 2 * n),
                                   kPi * a / std::pow(u, 2 * n - 1));
      return q == SeriesQuantity::q_sq ? std::polar(1.0, u) * t : t;
    }
  }
  throw InternalError("unknown series quantity");
}

std::complex<double> eval_series(SeriesQuantity q, double u, int N, const CoefficientTable& table) {
  if (N < 0 || N > max_truncation(q, table))
    throw InvalidArgument(std::string("eval_series: truncation ") + std::to_string(N) + " not available for " +
                          to_string(q) + " (max " + std::to_string(max_truncation(q, table)) + ")");
  std::complex<double> sum = 0.0;
  for (int n = 0; n <= N; ++n) sum += series_term(q, u, n, table);
  return sum;
}

MatchReport match_report(SeriesQuantity q, std::vector<double> u_grid, int N, const CoefficientTable& table,
                         std::optional<int> order) {
  if (u_grid.empty()) throw InvalidArgument("match_report: empty u grid");
  std::sort(u_grid.begin(), u_grid.end());
  MatchReport report{q, N, {}, false, false};
  std::vector<double> rel, re_rel, im_rel;
  for (double u : u_grid) {
    const double zeta = u / (2.0 * kPi);
    check_resolvent_window(zeta, "match_report");
    std::complex<double> numeric;
    switch (q) {
      case SeriesQuantity::q_diag: numeric = edge_values(zeta, order).q_diag; break;
      case SeriesQuantity::q_anti: numeric = edge_values(zeta, order).q_anti; break;
      case SeriesQuantity::abs_r_sq: numeric = std::norm(r_value(zeta, order)); break;
      case SeriesQuantity::r_sq: {
        const Complex r = r_value(zeta, order);
        numeric = r * r;
        break;
      }
      case SeriesQuantity::q_sq: {
        const Complex v = q_value(2.0 * zeta, order);
        numeric = v * v;
        break;
      }
    }
    const std::complex<double> series = eval_series(q, u, N, table);
    MatchRow row;
    row.u = u;
    row.numeric = numeric;
    row.series = series;
    row.abs_err = std::abs(numeric - series);
    row.rel_err = row.abs_err / std::abs(series);
    row.re_rel_err = std::abs(numeric.real() - series.real()) / std::abs(series.real());
    row.im_rel_err = series.imag() == 0.0 ? 0.0 : std::abs(numeric.imag() - series.imag()) / std::abs(series.imag());
    rel.push_back(row.rel_err);
    re_rel.push_back(row.re_rel_err);
    im_rel.push_back(row.im_rel_err);
    report.rows.push_back(row);
  }
  report.rel_err_decreasing = decreasing(rel);
  report.re_im_decreasing = decreasing(re_rel) && (!is_complex(q) || decreasing(im_rel));
  return report;
}

}  // namespace sinekernel
