#pragma once

namespace sinekernel {

/// sin(pi*y) / (pi*y), with value 1 at y = 0. Short Taylor series near 0.
double sinc_pi(double y);

/// sin(pi(s-t)) / (pi(s-t)): the unit-bandwidth sine kernel.
double eval_centered(double s, double t);

/// sin(zeta*pi(x-t)) / (pi(x-t)); equals zeta on the diagonal.
double eval_scaled(double x, double t, double zeta);

/// [k(x,t) +/- k(x,-t)] / 2 for the scaled kernel; sign must be +1 or -1.
double eval_symmetrized(double x, double t, double zeta, int sign);

enum class KernelFamily { centered_unit, scaled, symmetrized_plus, symmetrized_minus };

/// A kernel family together with its bandwidth. For centered_unit the
/// bandwidth is fixed at 1 and `zeta` is ignored.
struct KernelSpec {
  KernelFamily family = KernelFamily::centered_unit;
  double zeta = 1.0;

  static KernelSpec centered() { return {KernelFamily::centered_unit, 1.0}; }
  static KernelSpec scaled(double zeta) { return {KernelFamily::scaled, zeta}; }
  static KernelSpec plus(double zeta) { return {KernelFamily::symmetrized_plus, zeta}; }
  static KernelSpec minus(double zeta) { return {KernelFamily::symmetrized_minus, zeta}; }

  /// Bandwidth that actually enters the kernel (1 for centered_unit).
  double bandwidth() const { return family == KernelFamily::centered_unit ? 1.0 : zeta; }

  double operator()(double x, double t) const;

  /// Throws InvalidArgument when zeta is not a positive finite number.
  void validate() const;
};

const char* to_string(KernelFamily family);

}  // namespace sinekernel
