#include "sinekernel/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sinekernel {

namespace {

bool case_passes(double abs_err, double rel_err, double rhs_mag, double tol) {
  if (!std::isfinite(abs_err)) return false;
  return rel_err <= tol || (rhs_mag < tol && abs_err <= tol);
}

}  // namespace

bool VerificationReport::passed() const {
  return std::all_of(cases_.begin(), cases_.end(), [](const VerificationCase& c) { return c.pass; });
}

const VerificationCase& VerificationReport::add(std::string label, std::complex<double> lhs,
                                                std::complex<double> rhs, double tol) {
  const double abs_err = std::abs(lhs - rhs);
  const double mag = std::abs(rhs);
  const double rel_err = mag > 0.0 ? abs_err / mag
                                   : (abs_err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  cases_.push_back({std::move(label), lhs, rhs, abs_err, rel_err, tol, case_passes(abs_err, rel_err, mag, tol)});
  return cases_.back();
}

const VerificationCase& VerificationReport::add_scaled(std::string label, std::complex<double> lhs,
                                                       std::complex<double> rhs, double tol,
                                                       double scale) {
  const double abs_err = std::abs(lhs - rhs);
  const double rel_err = abs_err / scale;
  cases_.push_back({std::move(label), lhs, rhs, abs_err, rel_err, tol,
                    case_passes(abs_err, rel_err, std::abs(rhs), tol)});
  return cases_.back();
}

const VerificationCase& VerificationReport::add_bound(std::string label, double value, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double abs_err = std::abs(value - mid);
  const bool pass = std::isfinite(value) && value >= lo && value <= hi;
  cases_.push_back({std::move(label), value, mid, abs_err, abs_err, 0.5 * (hi - lo), pass});
  return cases_.back();
}

void VerificationReport::merge(const VerificationReport& other) {
  for (VerificationCase c : other.cases()) {
    c.label = other.suite() + ": " + c.label;
    cases_.push_back(std::move(c));
  }
}

}  // namespace sinekernel
