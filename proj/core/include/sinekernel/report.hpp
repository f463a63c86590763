#pragma once

#include <complex>
#include <string>
#include <vector>

namespace sinekernel {

/// One checked relation: lhs against rhs at a given tolerance.
struct VerificationCase {
  std::string label;
  std::complex<double> lhs;
  std::complex<double> rhs;
  double abs_err = 0.0;
  double rel_err = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Outcome of a verification suite. A case passes when rel_err <= tol, or
/// when |rhs| < tol and abs_err <= tol.
class VerificationReport {
 public:
  explicit VerificationReport(std::string suite) : suite_(std::move(suite)) {}

  const std::string& suite() const { return suite_; }
  const std::vector<VerificationCase>& cases() const { return cases_; }
  bool passed() const;

  /// rel_err measured against |rhs|.
  const VerificationCase& add(std::string label, std::complex<double> lhs, std::complex<double> rhs,
                              double tol);

  /// rel_err measured against an explicit positive scale, e.g. 1 + |lhs|.
  const VerificationCase& add_scaled(std::string label, std::complex<double> lhs,
                                     std::complex<double> rhs, double tol, double scale);

  /// Passes when lo <= value <= hi. Stored with rhs = midpoint and tol = half-width.
  const VerificationCase& add_bound(std::string label, double value, double lo, double hi);

  /// Appends every case of another report, prefixing labels with its suite.
  void merge(const VerificationReport& other);

 private:
  std::string suite_;
  std::vector<VerificationCase> cases_;
};

}  // namespace sinekernel
