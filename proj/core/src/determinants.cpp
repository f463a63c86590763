#include "sinekernel/determinants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "sinekernel/errors.hpp"

namespace sinekernel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string at(double zeta, double lambda) { return "zeta=" + fmt(zeta) + " lambda=" + fmt(lambda); }

PsiForms forms_for(const DiscretizedOperator& op, const std::function<Complex(double)>& fn) {
  const Eigen::VectorXcd rhs = sample_at_nodes(op, fn);
  const Eigen::VectorXcd f = op.solve(rhs);
  PsiForms out;
  for (int i = 0; i < op.order(); ++i) {
    out.direct += op.rule().weight(i) * (f(i) * std::conj(rhs(i))).real();
    out.paired += op.rule().weight(i) * f(i) * rhs(i);
  }
  return out;
}

double sigma_from_forms(const PsiForms& f, double lambda, int sign) {
  return -0.5 * lambda * (f.direct + sign * f.paired.real());
}

}  // namespace

const char* to_string(Variant v) {
  switch (v) {
    case Variant::full: return "full";
    case Variant::plus: return "plus";
    case Variant::minus: return "minus";
  }
  return "unknown";
}

double det_window(double lambda) { return lambda < 1.0 ? 5.0 : 3.0; }

void check_det_window(double zeta, double lambda, const char* what) {
  if (!(zeta > 0.0) || !std::isfinite(zeta)) throw InvalidArgument(std::string(what) + ": zeta must be positive");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw InvalidArgument(std::string(what) + ": lambda must lie in (0, 1]");
  if (zeta > det_window(lambda))
    throw WindowError(std::string(what) + ": zeta = " + std::to_string(zeta) + " exceeds the window zeta <= " +
                      std::to_string(det_window(lambda)) + " for lambda = " + std::to_string(lambda));
}

KernelSpec variant_kernel(Variant v, Picture p, double zeta) {
  const double bw = p == Picture::centered ? 1.0 : zeta;
  switch (v) {
    case Variant::full: return p == Picture::centered ? KernelSpec::centered() : KernelSpec::scaled(zeta);
    case Variant::plus: return KernelSpec::plus(bw);
    case Variant::minus: return KernelSpec::minus(bw);
  }
  throw InternalError("unknown variant");
}

Interval picture_interval(Picture p, double zeta) {
  return p == Picture::centered ? Interval{-zeta, zeta} : Interval{-1.0, 1.0};
}

double log_det_variant(double zeta, double lambda, Variant v, Picture p, std::optional<int> order) {
  return discretize(variant_kernel(v, p, zeta), picture_interval(p, zeta), order, lambda).log_det();
}

DetSample det_sample(double zeta, double lambda, std::optional<int> order) {
  check_det_window(zeta, lambda, "det_sample");
  DetSample s;
  s.zeta = zeta;
  s.lambda = lambda;
  s.log_p = log_det_variant(zeta, lambda, Variant::full, Picture::centered, order);
  s.log_p_plus = log_det_variant(zeta, lambda, Variant::plus, Picture::centered, order);
  s.log_p_minus = log_det_variant(zeta, lambda, Variant::minus, Picture::centered, order);
  s.picture_deviation = std::max(
      {std::abs(s.log_p - log_det_variant(zeta, lambda, Variant::full, Picture::scaled, order)),
       std::abs(s.log_p_plus - log_det_variant(zeta, lambda, Variant::plus, Picture::scaled, order)),
       std::abs(s.log_p_minus - log_det_variant(zeta, lambda, Variant::minus, Picture::scaled, order))});
  return s;
}

PsiForms psi_forms(double zeta, double lambda, std::optional<int> order) {
  check_det_window(zeta, lambda, "psi_forms");
  const DiscretizedOperator op = discretize(KernelSpec::centered(), Interval{-zeta, zeta}, order, lambda);
  return forms_for(op, [](double x) { return std::polar(1.0, kPi * x); });
}

PsiForms phi_forms(double zeta, double lambda, std::optional<int> order) {
  check_det_window(zeta, lambda, "phi_forms");
  const DiscretizedOperator op = discretize(KernelSpec::scaled(zeta), Interval{-1.0, 1.0}, order, lambda);
  return forms_for(op, [zeta](double x) { return std::polar(1.0 / std::sqrt(2.0), kPi * zeta * x); });
}

double fd_sigma(double zeta, double lambda, Variant v, Picture p, std::optional<double> h_opt,
                std::optional<int> order) {
  const double h = h_opt.value_or(std::min(1e-3 * std::max(1.0, zeta), 0.25 * zeta));
  if (!(h > 0.0) || !(zeta - h > 0.0)) throw InvalidArgument("fd_sigma: requires 0 < h < zeta");
  const int n = order.value_or(default_order(variant_kernel(v, p, zeta), picture_interval(p, zeta)));
  auto f = [&](double z) { return log_det_variant(z, lambda, v, p, n); };
  const double coarse = (f(zeta + h) - f(zeta - h)) / (2.0 * h);
  const double fine = (f(zeta + 0.5 * h) - f(zeta - 0.5 * h)) / h;
  return zeta * (4.0 * fine - coarse) / 3.0;
}

SigmaSample sigma_sample(double zeta, double lambda, std::optional<int> order) {
  check_det_window(zeta, lambda, "sigma_sample");
  const PsiForms forms = psi_forms(zeta, lambda, order);
  SigmaSample s;
  s.zeta = zeta;
  s.lambda = lambda;
  s.sigma_plus = sigma_from_forms(forms, lambda, +1);
  s.sigma_minus = sigma_from_forms(forms, lambda, -1);
  const DiscretizedOperator op = discretize(KernelSpec::centered(), Interval{-zeta, zeta}, order, lambda);
  s.sigma = -2.0 * zeta * resolvent_value(op, zeta, zeta);

  s.fd_sigma = fd_sigma(zeta, lambda, Variant::full, Picture::centered, std::nullopt, order);
  s.fd_sigma_plus = fd_sigma(zeta, lambda, Variant::plus, Picture::centered, std::nullopt, order);
  s.fd_sigma_minus = fd_sigma(zeta, lambda, Variant::minus, Picture::centered, std::nullopt, order);
  s.fd_rel_dev = std::max({std::abs(s.fd_sigma - s.sigma) / std::abs(s.sigma),
                           std::abs(s.fd_sigma_plus - s.sigma_plus) / std::abs(s.sigma_plus),
                           std::abs(s.fd_sigma_minus - s.sigma_minus) / std::abs(s.sigma_minus)});
  return s;
}

std::pair<double, double> lemma41_residuals(double zeta, double lambda, int order) {
  check_det_window(zeta, lambda, "lemma41_residuals");
  const Interval iv{-1.0, 1.0};
  const int n = order;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  auto resolvent_times_kernel = [&](const KernelSpec& k) {
    const Eigen::MatrixXd kw = DiscretizedOperator(k, iv, n, lambda).kernel_times_weights();
    return Eigen::MatrixXd((I - lambda * kw).partialPivLu().solve(kw));
  };
  const Eigen::MatrixXd full = resolvent_times_kernel(KernelSpec::scaled(zeta));
  const Eigen::MatrixXd reflected = full.colwise().reverse();  // (J M)_ij = M_{n-1-i, j}
  const Eigen::MatrixXd plus = resolvent_times_kernel(KernelSpec::plus(zeta));
  const Eigen::MatrixXd minus = resolvent_times_kernel(KernelSpec::minus(zeta));
  const double rp = (plus - 0.5 * (full + reflected)).cwiseAbs().maxCoeff();
  const double rm = (minus - 0.5 * (full - reflected)).cwiseAbs().maxCoeff();
  return {rp, rm};
}

VerificationReport verify_lemma41(double zeta, double lambda, int order, double tol) {
  const auto [rp, rm] = lemma41_residuals(zeta, lambda, order);
  VerificationReport report("lemma41");
  report.add_scaled(at(zeta, lambda) + " plus max-entry residual", rp, 0.0, tol, 1.0);
  report.add_scaled(at(zeta, lambda) + " minus max-entry residual", rm, 0.0, tol, 1.0);
  return report;
}

VerificationReport verify_lemma42(double zeta, double lambda, double tol) {
  check_det_window(zeta, lambda, "verify_lemma42");
  const PsiForms forms = phi_forms(zeta, lambda);
  VerificationReport report("lemma42");
  for (int sign : {+1, -1}) {
    const Variant v = sign > 0 ? Variant::plus : Variant::minus;
    const double lhs = fd_sigma(zeta, lambda, v, Picture::scaled) / zeta;
    const double rhs = -lambda * (forms.direct + sign * forms.paired.real());
    report.add(at(zeta, lambda) + (sign > 0 ? " d/dz log P+" : " d/dz log P-"), lhs, rhs, tol);
  }
  return report;
}

VerificationReport verify_lemma43(double zeta, double lambda, double tol, double consistency_tol) {
  check_det_window(zeta, lambda, "verify_lemma43");
  const PsiForms psi = psi_forms(zeta, lambda);
  const PsiForms phi = phi_forms(zeta, lambda);
  VerificationReport report("lemma43");
  for (int sign : {+1, -1}) {
    const Variant v = sign > 0 ? Variant::plus : Variant::minus;
    const std::string name = sign > 0 ? "+" : "-";
    const double lhs = 2.0 * fd_sigma(zeta, lambda, v, Picture::centered);
    const double rhs = -lambda * (psi.direct + sign * psi.paired.real());
    report.add(at(zeta, lambda) + " 2z d/dz log P" + name, lhs, rhs, tol);
    const double via_phi = -2.0 * zeta * lambda * (phi.direct + sign * phi.paired.real());
    report.add(at(zeta, lambda) + " scaled vs centered formula " + name, via_phi, rhs, consistency_tol);
  }
  return report;
}

Theorem45Rhs theorem45_rhs(double zeta, SweepCache* cache) {
  check_resolvent_window(zeta, "theorem45_rhs");
  SweepCache local;
  SweepCache& c = cache != nullptr ? *cache : local;
  const QuadratureRule panels = composite_gauss_legendre(0.0, zeta, 0.25, 16);
  Theorem45Rhs out;
  for (int k = 0; k < panels.order(); ++k) {
    const Complex r = c.r(panels.node(k));
    out.abs_integral += panels.weight(k) * std::norm(r);
    out.sq_integral += panels.weight(k) * r * r;
  }
  return out;
}

VerificationReport verify_thm45(double zeta, SweepCache* cache, double tol) {
  check_resolvent_window(zeta, "verify_thm45");
  const PsiForms forms = psi_forms(zeta, 1.0);
  const Theorem45Rhs rhs = theorem45_rhs(zeta, cache);
  VerificationReport report("thm45");
  report.add("zeta=" + fmt(zeta) + " sigma+", sigma_from_forms(forms, 1.0, +1), rhs.plus(), tol);
  report.add("zeta=" + fmt(zeta) + " sigma-", sigma_from_forms(forms, 1.0, -1), rhs.minus(), tol);
  const auto [q_plus, q_minus] = q_route_sigma(zeta, QRoutePhase::shifted, cache);
  report.add("zeta=" + fmt(zeta) + " sigma+ q route", q_plus, rhs.plus(), tol);
  report.add("zeta=" + fmt(zeta) + " sigma- q route", q_minus, rhs.minus(), tol);
  return report;
}

std::pair<double, double> q_route_sigma(double zeta, QRoutePhase phase, SweepCache* cache) {
  check_resolvent_window(zeta, "q_route_sigma");
  SweepCache local;
  SweepCache& c = cache != nullptr ? *cache : local;
  const QuadratureRule panels = composite_gauss_legendre(0.0, 2.0 * zeta, 0.25, 16);
  double abs_part = 0.0;
  Complex sq_part = 0.0;
  for (int k = 0; k < panels.order(); ++k) {
    const double s = panels.node(k);
    const Complex q = c.q(s);
    const double angle = phase == QRoutePhase::as_printed ? 2.0 * kPi * s : -kPi * s;
    abs_part += panels.weight(k) * std::norm(q);
    sq_part += panels.weight(k) * std::polar(1.0, angle) * q * q;
  }
  return {-0.5 * (abs_part + sq_part.real()), -0.5 * (abs_part - sq_part.real())};
}

VerificationReport verify_corollary47(double zeta, SweepCache* cache, double tol, CorollaryForm form) {
  check_resolvent_window(zeta, "verify_corollary47");
  const DiscretizedOperator op = discretize(KernelSpec::centered(), Interval{-zeta, zeta}, std::nullopt, 1.0);
  const double sigma = -2.0 * zeta * resolvent_value(op, zeta, zeta);
  const Theorem45Rhs rhs = theorem45_rhs(zeta, cache);
  const double factor = form == CorollaryForm::as_stated ? 1.0 : 2.0;
  VerificationReport report(form == CorollaryForm::as_stated ? "corollary47" : "corollary47-doubled");
  report.add("zeta=" + fmt(zeta) + (form == CorollaryForm::as_stated ? " sigma = -int|r^2|" : " sigma = -2 int|r^2|"),
             sigma, -factor * rhs.abs_integral, tol);
  return report;
}

VerificationReport verify_sumrule(const std::vector<std::pair<double, double>>& zeta_lambda, double sigma_tol,
                                  double logdet_tol) {
  VerificationReport report("sumrule");
  for (const auto& [zeta, lambda] : zeta_lambda) {
    const SigmaSample s = sigma_sample(zeta, lambda);
    const DetSample d = det_sample(zeta, lambda);
    report.add(at(zeta, lambda) + " sigma+ + sigma- = sigma", s.sigma_plus + s.sigma_minus, s.sigma, sigma_tol);
    report.add(at(zeta, lambda) + " logP+ + logP- = logP", d.log_p_plus + d.log_p_minus, d.log_p, logdet_tol);
  }
  return report;
}

std::vector<GapRow> pm_gap(std::vector<double> zeta_grid, std::optional<int> order) {
  if (zeta_grid.empty()) throw InvalidArgument("pm_gap: empty grid");
  std::sort(zeta_grid.begin(), zeta_grid.end());
  std::vector<GapRow> rows;
  for (double zeta : zeta_grid) {
    check_det_window(zeta, 1.0, "pm_gap");
    const double lp = log_det_variant(zeta, 1.0, Variant::plus, Picture::centered, order);
    const double lm = log_det_variant(zeta, 1.0, Variant::minus, Picture::centered, order);
    const PsiForms forms = psi_forms(zeta, 1.0, order);
    // d/dz (log P+ - log P-) = (sigma+ - sigma-)/z = -Re(R psi, conj psi)/z
    const double slope = -forms.paired.real() / zeta;
    GapRow row;
    row.zeta = zeta;
    row.gap = lp - lm;
    row.ratio = row.gap / (-kPi * zeta);
    row.a0_estimate = row.gap / (-2.0 * kPi * zeta);
    row.a0_derivative = -slope / (2.0 * kPi);
    rows.push_back(row);
  }
  return rows;
}

VerificationReport verify_pmgap(const std::vector<double>& zeta_grid, std::optional<int> order) {
  const std::vector<GapRow> rows = pm_gap(zeta_grid, order);
  VerificationReport report("pmgap");
  const GapRow& last = rows.back();
  report.add_bound("zeta=" + fmt(last.zeta) + " ratio to -pi zeta", last.ratio, 0.95, 1.05);
  report.add_bound("zeta=" + fmt(last.zeta) + " a0 estimate", last.a0_estimate, 0.48, 0.52);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double before = std::abs(rows[k - 1].a0_estimate - 0.5);
    const double after = std::abs(rows[k].a0_estimate - 0.5);
    report.add_bound("|a0 - 1/2| ratio zeta=" + fmt(rows[k - 1].zeta) + " -> " + fmt(rows[k].zeta), after / before,
                     0.0, 1.0);
  }
  return report;
}

}  // namespace sinekernel
