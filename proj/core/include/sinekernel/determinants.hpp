#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "sinekernel/nystrom.hpp"
#include "sinekernel/report.hpp"
#include "sinekernel/resolvent.hpp"

namespace sinekernel {

enum class Variant { full, plus, minus };

/// Centered: unit kernel on (-zeta, zeta). Scaled: bandwidth-zeta kernel on (-1, 1).
/// The two are unitarily equivalent, so their determinants coincide.
enum class Picture { centered, scaled };

const char* to_string(Variant v);

/// Largest zeta accepted for determinant work at a given lambda.
double det_window(double lambda);

/// Throws InvalidArgument for bad (zeta, lambda) and WindowError above det_window.
void check_det_window(double zeta, double lambda, const char* what);

KernelSpec variant_kernel(Variant v, Picture p, double zeta);
Interval picture_interval(Picture p, double zeta);

/// log det(I - lambda K_v) in either picture.
double log_det_variant(double zeta, double lambda, Variant v, Picture p, std::optional<int> order = {});

struct DetSample {
  double zeta = 0.0;
  double lambda = 1.0;
  double log_p = 0.0;
  double log_p_plus = 0.0;
  double log_p_minus = 0.0;
  double picture_deviation = 0.0;  // max |centered - scaled| over the three variants
};

DetSample det_sample(double zeta, double lambda, std::optional<int> order = {});

/// (R psi, psi) and int (R psi) psi for R = (I - lambda C_zeta)^{-1} on
/// (-zeta, zeta), psi(x) = e^{i x pi}. The pairing is (f, g) = int f conj(g),
/// so (R psi, conj(psi)) = int (R psi) psi.
struct PsiForms {
  double direct = 0.0;
  Complex paired;
};

PsiForms psi_forms(double zeta, double lambda, std::optional<int> order = {});

/// The same pair for phi_1(x) = e^{i x pi zeta}/sqrt(2) and the scaled
/// operator on (-1, 1).
PsiForms phi_forms(double zeta, double lambda, std::optional<int> order = {});

/// sigma_v = zeta d/dzeta log P_v(zeta, lambda).
///
/// sigma_plus/minus use the inner-product formula
///   sigma_pm = -(lambda/2) {(R psi, psi) +/- Re (R psi, conj psi)},
/// sigma uses the endpoint resolvent, sigma = -2 zeta Q^lambda(zeta, zeta),
/// so the sum rule sigma_plus + sigma_minus = sigma compares two independent
/// routes. The fd_ fields are Richardson-extrapolated central differences of
/// the log-determinants.
struct SigmaSample {
  double zeta = 0.0;
  double lambda = 1.0;
  double sigma = 0.0;
  double sigma_plus = 0.0;
  double sigma_minus = 0.0;
  double fd_sigma = 0.0;
  double fd_sigma_plus = 0.0;
  double fd_sigma_minus = 0.0;
  double fd_rel_dev = 0.0;
};

SigmaSample sigma_sample(double zeta, double lambda, std::optional<int> order = {});

/// zeta d/dzeta log P_v by central differences at h and h/2 with one
/// Richardson level, in the given picture.
double fd_sigma(double zeta, double lambda, Variant v, Picture p, std::optional<double> h = {},
                std::optional<int> order = {});

/// Max-entry residuals of (I - lambda K_pm W)^{-1} K_pm W - (1/2)(I +/- J)(I - lambda K W)^{-1} K W
/// on the scaled picture, J being node reflection.
std::pair<double, double> lemma41_residuals(double zeta, double lambda, int order);

VerificationReport verify_lemma41(double zeta, double lambda, int order = 60, double tol = 1e-10);

/// d/dzeta log P_pm (scaled picture, finite differences) against
/// -lambda {(R phi_1, phi_1) +/- Re (R phi_1, conj phi_1)}.
VerificationReport verify_lemma42(double zeta, double lambda, double tol = 1e-6);

/// 2 zeta d/dzeta log P_pm (centered picture, finite differences) against
/// the psi formula, plus agreement with the scaled-picture formula after x -> x/zeta.
VerificationReport verify_lemma43(double zeta, double lambda, double tol = 1e-6,
                                  double consistency_tol = 1e-8);

/// Right-hand sides -(int_0^z |r^2| ds +/- Re int_0^z r^2 ds) over 16-point
/// panels of width 0.25.
struct Theorem45Rhs {
  double abs_integral = 0.0;   // int_0^zeta |r(s)|^2 ds
  Complex sq_integral;         // int_0^zeta r(s)^2 ds
  double plus() const { return -(abs_integral + sq_integral.real()); }
  double minus() const { return -(abs_integral - sq_integral.real()); }
};

Theorem45Rhs theorem45_rhs(double zeta, SweepCache* cache = nullptr);

/// sigma_pm at lambda = 1 (psi formula) against theorem45_rhs, and against the
/// q route on (0, 2 zeta) with the shifted phase.
VerificationReport verify_thm45(double zeta, SweepCache* cache = nullptr, double tol = 1e-6);

/// Phase convention inside the q-route integral
///   sigma_pm = -(1/2) {int_0^{2z} |q|^2 ds +/- Re int_0^{2z} e^{i phase(s)} q(s)^2 ds}.
/// as_printed uses e^{2 i s pi}; shifted uses e^{-i s pi}, which is what
/// q(2z) = e^{i z pi} r(z) implies.
enum class QRoutePhase { as_printed, shifted };

std::pair<double, double> q_route_sigma(double zeta, QRoutePhase phase, SweepCache* cache = nullptr);

/// The modulus-integral relation in the form sigma = -int_0^z |r^2| ds, or with the
/// factor 2 implied by the sum rule and the edge-integral formulas.
enum class CorollaryForm { as_stated, doubled };

VerificationReport verify_corollary47(double zeta, SweepCache* cache = nullptr, double tol = 1e-6,
                                      CorollaryForm form = CorollaryForm::as_stated);

/// sigma_plus + sigma_minus = sigma and log P_plus + log P_minus = log P.
VerificationReport verify_sumrule(const std::vector<std::pair<double, double>>& zeta_lambda,
                                  double sigma_tol = 1e-8, double logdet_tol = 1e-10);

struct GapRow {
  double zeta = 0.0;
  double gap = 0.0;            // log P_plus - log P_minus at lambda = 1
  double ratio = 0.0;          // gap / (-pi zeta)
  double a0_estimate = 0.0;    // gap / (-2 pi zeta)
  double a0_derivative = 0.0;  // -(d gap / d zeta) / (2 pi)
};

std::vector<GapRow> pm_gap(std::vector<double> zeta_grid, std::optional<int> order = {});

/// On an ascending grid: |ratio - 1| < 0.05 and a0_estimate in [0.48, 0.52] at
/// the last point, and |a0_estimate - 1/2| shrinking between neighbours.
VerificationReport verify_pmgap(const std::vector<double>& zeta_grid, std::optional<int> order = {});

}  // namespace sinekernel
