#include "sinekernel/kernels.hpp"

#include <cmath>
#include <numbers>

#include "sinekernel/errors.hpp"

namespace sinekernel {

double sinc_pi(double y) {
  const double a = std::numbers::pi * std::abs(y);
  if (a < 1e-4) {
    const double a2 = a * a;
    return 1.0 - a2 / 6.0 * (1.0 - a2 / 20.0 * (1.0 - a2 / 42.0));
  }
  return std::sin(a) / a;
}

double eval_centered(double s, double t) { return sinc_pi(s - t); }

double eval_scaled(double x, double t, double zeta) { return zeta * sinc_pi(zeta * (x - t)); }

double eval_symmetrized(double x, double t, double zeta, int sign) {
  if (sign != 1 && sign != -1) throw InvalidArgument("eval_symmetrized: sign must be +1 or -1");
  const double direct = eval_scaled(x, t, zeta);
  const double reflected = zeta * sinc_pi(zeta * (x + t));
  return 0.5 * (sign > 0 ? direct + reflected : direct - reflected);
}

double KernelSpec::operator()(double x, double t) const {
  switch (family) {
    case KernelFamily::centered_unit: return eval_centered(x, t);
    case KernelFamily::scaled: return eval_scaled(x, t, zeta);
    case KernelFamily::symmetrized_plus: return eval_symmetrized(x, t, zeta, +1);
    case KernelFamily::symmetrized_minus: return eval_symmetrized(x, t, zeta, -1);
  }
  throw InternalError("unknown kernel family");
}

void KernelSpec::validate() const {
  if (family != KernelFamily::centered_unit && !(zeta > 0.0 && std::isfinite(zeta)))
    throw InvalidArgument("kernel bandwidth zeta must be positive and finite");
}

const char* to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::centered_unit: return "centered_unit";
    case KernelFamily::scaled: return "scaled";
    case KernelFamily::symmetrized_plus: return "symmetrized_plus";
    case KernelFamily::symmetrized_minus: return "symmetrized_minus";
  }
  return "unknown";
}

}  // namespace sinekernel
