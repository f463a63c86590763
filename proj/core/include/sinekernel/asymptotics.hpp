#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace sinekernel {

using Rational = boost::rational<std::int64_t>;

/// Large-u coefficients of the edge resolvent expansions.
///
/// `c[k]` holds c_{2(k+1)}: only c_2 = -1/4 and c_4 = -5/2 are built in, and
/// further entries must be supplied explicitly. `a[n]` holds a_{2n}, obtained
/// from the squaring relation
///   (sum_n a_{2n} v^n)^2 = 1/4 - v/4 + sum_{n>=1} (2n+1) c_{2n} v^{n+1},  v = u^-2
/// with the root a_0 = +1/2.
struct CoefficientTable {
  std::vector<Rational> c;
  std::vector<Rational> a;

  static CoefficientTable builtin();
  /// Built-in c_2, c_4 followed by `higher` (c_6, c_8, ...).
  static CoefficientTable with_higher(const std::vector<Rational>& higher);

  Rational c2n(int n) const;  // n >= 1
  Rational a2n(int n) const;  // n >= 0
};

/// a_0, a_2, ..., a_{2(count-1)}. Needs count <= c.size() + 2.
std::vector<Rational> derive_a_coefficients(const std::vector<Rational>& c, int count);

enum class SeriesQuantity { q_diag, q_anti, abs_r_sq, r_sq, q_sq };

const char* to_string(SeriesQuantity q);
std::optional<SeriesQuantity> parse_series_quantity(const std::string& name);
bool is_complex(SeriesQuantity q);

/// Largest admissible truncation for a quantity under a table.
int max_truncation(SeriesQuantity q, const CoefficientTable& table);

/// Partial sum through index n = N of the expansion for `q`:
///   q_diag    pi (u/4 + 1/(4u) - sum_{n=1}^N c_{2n} / u^{2n+1})
///   q_anti    pi sum_{n=0}^N a_{2n} / u^{2n}
///   abs_r_sq  pi (u/2 + sum_{n=1}^N 2n c_{2n} / u^{2n+1})
///   r_sq      pi sum a_{2n}(1-2n)/u^{2n} + i pi sum a_{2n}/u^{2n-1}
///   q_sq      e^{iu} r_sq
/// The series are asymptotic: N is always explicit, nothing is summed "to
/// convergence".
std::complex<double> eval_series(SeriesQuantity q, double u, int N,
                                 const CoefficientTable& table = CoefficientTable::builtin());

/// The single term with index n, so that eval(N) - eval(N-1) = term(N).
std::complex<double> series_term(SeriesQuantity q, double u, int n,
                                 const CoefficientTable& table = CoefficientTable::builtin());

struct MatchRow {
  double u = 0.0;
  std::complex<double> numeric;
  std::complex<double> series;
  double abs_err = 0.0;
  double rel_err = 0.0;
  double re_rel_err = 0.0;
  double im_rel_err = 0.0;
};

struct MatchReport {
  SeriesQuantity quantity;
  int truncation = 0;
  std::vector<MatchRow> rows;  // ascending u
  bool rel_err_decreasing = false;
  bool re_im_decreasing = false;
};

/// Compares numeric edge data (zeta = u / (2 pi)) against eval_series.
/// Every u must satisfy u <= 2 pi * kResolventWindow.
MatchReport match_report(SeriesQuantity q, std::vector<double> u_grid, int N,
                         const CoefficientTable& table = CoefficientTable::builtin(),
                         std::optional<int> order = {});

}  // namespace sinekernel
