#include "sinekernel/hamiltonians.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "sinekernel/asymptotics.hpp"
#include "sinekernel/errors.hpp"

namespace sinekernel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

void check_hamiltonian_window(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument(std::string(what) + ": x must be non-negative");
  if (x > kHamiltonianWindow)
    throw WindowError(std::string(what) + ": x = " + std::to_string(x) + " exceeds the window x <= " +
                      std::to_string(kHamiltonianWindow));
}

// R_t(t, 0) = Q_{t/2}(-t/2, t/2); tends to the kernel diagonal 1 as t -> 0.
double edge_resolvent(double t, SweepCache& cache) {
  if (t == 0.0) return 1.0;
  return cache.edges(0.5 * t).q_anti;
}

// int_0^x R_t(t,0) dt over 12-point panels of width 0.25.
double krein_integral(double x, SweepCache& cache) {
  if (x == 0.0) return 0.0;
  return composite_gauss_legendre(0.0, x, 0.25, 12).integrate([&](double t) { return edge_resolvent(t, cache); });
}

Matrix2c make_h1(Complex q) {
  const double mod2 = std::norm(q);
  const Complex q2 = q * q;
  Matrix2c h;
  h << mod2, q2, std::conj(q2), mod2;
  return h / (2.0 * kPi);
}

Matrix2r make_h2(double q1_sq) {
  Matrix2r h;
  h << q1_sq, 0.5, 0.5, 0.25 / q1_sq;
  return h / (2.0 * kPi);
}

}  // namespace

double beta_integrand(double t, SweepCache* cache) {
  SweepCache local;
  return 2.0 * edge_resolvent(t, cache != nullptr ? *cache : local) - kPi;
}

HamiltonianSample hamiltonian_at(double x, SweepCache* cache) {
  check_hamiltonian_window(x, "hamiltonian_at");
  SweepCache local;
  SweepCache& c = cache != nullptr ? *cache : local;

  const double integral = krein_integral(x, c);
  HamiltonianSample s;
  s.x = x;
  s.q = c.q(x);
  s.q1_sq = std::exp(2.0 * integral);
  s.q2_sq = 0.25 / s.q1_sq;
  s.beta_partial = 2.0 * integral - kPi * x;
  const double q1 = c.q1(x);
  s.q1_sq_direct = q1 * q1;
  s.krein_rel_dev = std::abs(s.q1_sq - s.q1_sq_direct) / s.q1_sq;
  s.H1 = make_h1(s.q);
  s.H2 = make_h2(s.q1_sq);
  return s;
}

double beta_tail(double x) {
  if (!(x > 0.0)) throw InvalidArgument("beta_tail: x must be positive");
  const CoefficientTable table = CoefficientTable::builtin();
  const double a2 = boost::rational_cast<double>(table.a2n(1));
  const double a4 = boost::rational_cast<double>(table.a2n(2));
  // int_x^inf 2 pi a/(pi t)^{2k} dt = 2 pi a / (pi^{2k} (2k-1) x^{2k-1})
  return 2.0 * kPi * (a2 / (kPi * kPi * x) + a4 / (3.0 * std::pow(kPi, 4) * x * x * x));
}

BetaEstimate beta_estimate(double x_max, SweepCache* cache) {
  if (!(x_max > 0.0)) throw InvalidArgument("beta_estimate: x_max must be positive");
  check_hamiltonian_window(x_max, "beta_estimate");
  SweepCache local;
  SweepCache& c = cache != nullptr ? *cache : local;

  std::vector<double> checkpoints;
  for (int k = 1; k < x_max; ++k) checkpoints.push_back(k);
  checkpoints.push_back(x_max);

  BetaEstimate out;
  out.x_max = x_max;
  double left = 0.0;
  double running = 0.0;
  for (double right : checkpoints) {
    running += composite_gauss_legendre(left, right, 0.25, 12).integrate([&](double t) {
      return 2.0 * edge_resolvent(t, c) - kPi;
    });
    out.table.push_back({right, running, running + beta_tail(right)});
    left = right;
  }
  out.partial = running;
  out.tail = beta_tail(x_max);
  out.beta = out.partial + out.tail;
  return out;
}

HamiltonianGrid::HamiltonianGrid(double x_max, double spacing, std::optional<int> order) : x_max_(x_max) {
  if (!(x_max > 0.0)) throw InvalidArgument("HamiltonianGrid: x_max must be positive");
  if (!(spacing > 0.0)) throw InvalidArgument("HamiltonianGrid: spacing must be positive");
  check_hamiltonian_window(x_max, "HamiltonianGrid");
  const int intervals = std::max(1, static_cast<int>(std::ceil(x_max / spacing - 1e-9)));
  step_ = x_max / intervals;

  SweepCache cache(order);
  const QuadratureRule& local = gauss_legendre(8);
  double integral = 0.0;
  h1_.reserve(intervals + 1);
  h2_.reserve(intervals + 1);
  for (int k = 0; k <= intervals; ++k) {
    const double x = k == intervals ? x_max : k * step_;
    if (k > 0) {
      const double prev = (k - 1) * step_;
      integral += map_to_interval(local, prev, x).integrate([&](double t) { return edge_resolvent(t, cache); });
    }
    h1_.push_back(make_h1(cache.q(x)));
    h2_.push_back(make_h2(std::exp(2.0 * integral)));
  }
}

template <class M>
M HamiltonianGrid::interpolate(const std::vector<M>& samples, double x) const {
  if (x <= 0.0) return samples.front();
  if (x >= x_max_) return samples.back();
  const double pos = x / step_;
  const int k = std::min(static_cast<int>(pos), intervals() - 1);
  const double theta = pos - k;
  return (1.0 - theta) * samples[k] + theta * samples[k + 1];
}

Matrix2c HamiltonianGrid::h1(double x) const { return interpolate(h1_, x); }
Matrix2r HamiltonianGrid::h2(double x) const { return interpolate(h2_, x); }

Complex liouville_determinant(int system_id, Complex z, double x_max) {
  if (system_id == 1) return 1.0;
  return std::exp(kI * z * x_max / (2.0 * kPi));
}

CanonicalSolution solve_canonical(int system_id, Complex z, double x_max, int steps, const HamiltonianGrid* grid) {
  if (system_id != 1 && system_id != 2) throw InvalidArgument("solve_canonical: system must be 1 or 2");
  if (steps < 100) throw InvalidArgument("solve_canonical: steps must be at least 100");
  if (!(x_max > 0.0)) throw InvalidArgument("solve_canonical: x_max must be positive");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InvalidArgument("solve_canonical: z must be finite");
  check_hamiltonian_window(x_max, "solve_canonical");
  if (system_id == 1 && z.imag() == 0.0 && z.real() >= 0.0 && z.real() <= x_max)
    throw SingularityError("solve_canonical: z lies on the integration path [0, x_max]");

  std::optional<HamiltonianGrid> own;
  if (grid == nullptr) {
    own.emplace(x_max);
    grid = &*own;
  } else if (grid->x_max() < x_max) {
    throw InvalidArgument("solve_canonical: Hamiltonian grid does not cover x_max");
  }

  Matrix2c J1;
  J1 << 1.0, 0.0, 0.0, -1.0;
  Matrix2c J2;
  J2 << 0.0, 1.0, 1.0, 0.0;

  auto generator = [&](double x) -> Matrix2c {
    if (system_id == 1) return (-kI / (x - z)) * (J1 * grid->h1(x));
    return (kI * z) * (J2 * grid->h2(x).cast<Complex>());
  };

  const double h = x_max / steps;
  Matrix2c W = Matrix2c::Identity();
  for (int j = 0; j < steps; ++j) {
    const double x = j * h;
    const Matrix2c k1 = generator(x) * W;
    const Matrix2c k2 = generator(x + 0.5 * h) * (W + 0.5 * h * k1);
    const Matrix2c k3 = generator(x + 0.5 * h) * (W + 0.5 * h * k2);
    const Matrix2c k4 = generator(x + h) * (W + h * k3);
    W += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return {system_id, z, x_max, W, steps};
}

StepHalving step_halving(int system_id, Complex z, double x_max, int steps, const HamiltonianGrid* grid) {
  std::optional<HamiltonianGrid> own;
  if (grid == nullptr) {
    own.emplace(x_max);
    grid = &*own;
  }
  const Matrix2c w1 = solve_canonical(system_id, z, x_max, steps, grid).W;
  const Matrix2c w2 = solve_canonical(system_id, z, x_max, 2 * steps, grid).W;
  const Matrix2c w4 = solve_canonical(system_id, z, x_max, 4 * steps, grid).W;
  StepHalving out;
  out.coarse_change = (w1 - w2).cwiseAbs().maxCoeff();
  out.fine_change = (w2 - w4).cwiseAbs().maxCoeff();
  out.ratio = out.coarse_change / out.fine_change;
  return out;
}

VerificationReport verify_krein(const std::vector<double>& xs, double tol) {
  VerificationReport report("krein");
  SweepCache cache;
  for (double x : xs) {
    const HamiltonianSample s = hamiltonian_at(x, &cache);
    std::ostringstream at;
    at << "x=" << x;
    report.add(at.str() + " exp(2 int R) vs (S^-1 1)(x)^2", s.q1_sq, s.q1_sq_direct, tol);
    report.add(at.str() + " H2 off-diagonal", s.H2(0, 1), 1.0 / (4.0 * kPi), 0.0);
    report.add(at.str() + " q1^2 q2^2", s.q1_sq * s.q2_sq, 0.25, 1e-15);
  }
  return report;
}

VerificationReport verify_canon_invariants(double tol) {
  VerificationReport report("canon-invariants");
  const double x_max = 1.0;
  const HamiltonianGrid grid(x_max);
  const Complex z1{0.0, 2.0};
  const Complex z2{1.0, 0.0};
  const CanonicalSolution s1 = solve_canonical(1, z1, x_max, kDefaultCanonicalSteps, &grid);
  const CanonicalSolution s2 = solve_canonical(2, z2, x_max, kDefaultCanonicalSteps, &grid);
  report.add_scaled("system 1 z=2i det W", s1.W.determinant(), liouville_determinant(1, z1, x_max), tol, 1.0);
  report.add_scaled("system 2 z=1 det W", s2.W.determinant(), liouville_determinant(2, z2, x_max), tol, 1.0);
  for (const auto& [id, z] : {std::pair{1, z1}, std::pair{2, z2}}) {
    const StepHalving h = step_halving(id, z, x_max, kDefaultCanonicalSteps, &grid);
    // ratio in [12, 20] expressed as |ratio - 16| <= 4
    report.add_scaled("system " + std::to_string(id) + " step-halving ratio", h.ratio, 16.0, 4.0, 1.0);
  }
  return report;
}

}  // namespace sinekernel
