#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <variant>

#include <CLI11.hpp>

#include "sinekernel/asymptotics.hpp"
#include "sinekernel/determinants.hpp"
#include "sinekernel/errors.hpp"
#include "sinekernel/hamiltonians.hpp"
#include "sinekernel/resolvent.hpp"

namespace sinekernel::cli {

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::optional<bool> passed;  // set for verification output
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string json_escape(const std::string& s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out + "\"";
}

std::string csv_cell(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return csv_escape(v); }
  } visit;
  return std::visit(visit, c);
}

std::string json_cell(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return "null"; }
    std::string operator()(double v) const { return std::isfinite(v) ? format_number(v) : "null"; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return json_escape(v); }
  } visit;
  return std::visit(visit, c);
}

void write_csv(const Table& t, std::ostream& out) {
  for (std::size_t k = 0; k < t.columns.size(); ++k) out << (k ? "," : "") << csv_escape(t.columns[k]);
  out << "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << csv_cell(row[k]);
    out << "\r\n";
  }
}

void write_json(const Table& t, std::ostream& out) {
  out << "{\"schema\":1,\"command\":" << json_escape(t.command);
  if (t.passed) out << ",\"passed\":" << (*t.passed ? "true" : "false");
  out << ",\"columns\":[";
  for (std::size_t k = 0; k < t.columns.size(); ++k) out << (k ? "," : "") << json_escape(t.columns[k]);
  out << "],\"rows\":[";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out << (r ? ",\n" : "\n") << "{";
    for (std::size_t k = 0; k < t.columns.size(); ++k)
      out << (k ? "," : "") << json_escape(t.columns[k]) << ":" << json_cell(t.rows[r][k]);
    out << "}";
  }
  out << "\n]}\n";
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = n == 1 ? a : (k == n - 1 ? b : a + (b - a) * k / (n - 1));
  return v;
}

struct Globals {
  std::string format = "csv";
  std::optional<int> order;
  std::optional<double> tol;
};

// ---- det ----------------------------------------------------------------

struct DetArgs {
  std::optional<double> zeta;
  std::string zeta_grid;
  double lambda = 1.0;
  std::string variant = "full";
};

std::vector<double> zetas_from(const std::optional<double>& zeta, const std::string& grid) {
  if (zeta && !grid.empty()) throw UsageError("--zeta and --zeta-grid are mutually exclusive");
  if (zeta) return {*zeta};
  if (!grid.empty()) {
    try {
      return parse_grid(grid);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  throw UsageError("one of --zeta or --zeta-grid is required");
}

Table run_det(const DetArgs& a, const Globals& g) {
  std::vector<Variant> variants;
  if (a.variant == "all") variants = {Variant::full, Variant::plus, Variant::minus};
  else if (a.variant == "full") variants = {Variant::full};
  else if (a.variant == "plus") variants = {Variant::plus};
  else if (a.variant == "minus") variants = {Variant::minus};
  else throw UsageError("--variant must be full, plus, minus or all");

  std::vector<double> zetas = zetas_from(a.zeta, a.zeta_grid);
  std::sort(zetas.begin(), zetas.end());
  Table t{"det", {"zeta", "lambda", "variant", "log_det"}, {}, std::nullopt};
  for (double zeta : zetas) {
    check_det_window(zeta, a.lambda, "det");
    for (Variant v : variants) {
      const double ld = log_det_variant(zeta, a.lambda, v, Picture::centered, g.order);
      t.rows.push_back({zeta, a.lambda, std::string(to_string(v)), ld});
    }
  }
  return t;
}

// ---- resolvent ----------------------------------------------------------

Table run_resolvent(const DetArgs& a, const Globals& g) {
  std::vector<double> zetas = zetas_from(a.zeta, a.zeta_grid);
  std::sort(zetas.begin(), zetas.end());
  Table t{"resolvent",
          {"zeta", "u", "q_diag", "q_anti", "r_re", "r_im", "q_2zeta_re", "q_2zeta_im"},
          {},
          std::nullopt};
  for (double zeta : zetas) {
    const ResolventSample s = sample(zeta, g.order);
    t.rows.push_back({s.zeta, s.u, s.q_diag, s.q_anti, s.r.real(), s.r.imag(), s.q_2zeta.real(), s.q_2zeta.imag()});
  }
  return t;
}

// ---- asym ---------------------------------------------------------------

struct AsymArgs {
  std::string quantity;
  double u_min = 0.0;
  double u_max = 0.0;
  int points = 5;
  int terms = 0;
};

Table run_asym(const AsymArgs& a, const Globals& g) {
  const auto q = parse_series_quantity(a.quantity);
  if (!q) throw UsageError("--quantity must be qdiag, qanti, abs-rsq, rsq or qsq");
  if (!(a.u_min > 0.0) || !std::isfinite(a.u_max) || a.u_max < a.u_min)
    throw UsageError("require 0 < --u-min <= --u-max");
  if (a.points < 1) throw UsageError("--points must be at least 1");
  if (a.points == 1 && a.u_min != a.u_max) throw UsageError("--points 1 requires --u-min == --u-max");
  const CoefficientTable table = CoefficientTable::builtin();
  if (a.terms < 0 || a.terms > max_truncation(*q, table))
    throw UsageError("--terms must lie in [0, " + std::to_string(max_truncation(*q, table)) + "] for " +
                     a.quantity);

  // Numeric values exist only inside the resolvent window; beyond it the
  // series is still tabulated and the numeric columns are left empty.
  const double u_limit = 2.0 * std::numbers::pi * kResolventWindow;
  const std::vector<double> grid = linspace(a.u_min, a.u_max, a.points);
  std::vector<double> inside;
  for (double u : grid)
    if (u <= u_limit) inside.push_back(u);
  std::map<double, MatchRow> numeric;
  if (!inside.empty())
    for (const MatchRow& row : match_report(*q, inside, a.terms, table, g.order).rows) numeric.emplace(row.u, row);

  const bool cplx = is_complex(*q);
  Table t{"asym", {}, {}, std::nullopt};
  if (cplx)
    t.columns = {"u", "numeric_re", "numeric_im", "series_re", "series_im", "abs_err", "rel_err"};
  else
    t.columns = {"u", "numeric", "series", "abs_err", "rel_err"};
  for (double u : grid) {
    const Complex series = eval_series(*q, u, a.terms, table);
    const auto it = numeric.find(u);
    std::vector<Cell> row{u};
    if (it != numeric.end()) {
      const MatchRow& m = it->second;
      if (cplx) row.insert(row.end(), {m.numeric.real(), m.numeric.imag(), series.real(), series.imag()});
      else row.insert(row.end(), {m.numeric.real(), series.real()});
      row.insert(row.end(), {m.abs_err, m.rel_err});
    } else {
      if (cplx) row.insert(row.end(), {std::monostate{}, std::monostate{}, series.real(), series.imag()});
      else row.insert(row.end(), {std::monostate{}, series.real()});
      row.insert(row.end(), {std::monostate{}, std::monostate{}});
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

// ---- hamiltonian --------------------------------------------------------

Table run_hamiltonian(const std::string& x_grid, const Globals& g) {
  std::vector<double> xs;
  try {
    xs = parse_grid(x_grid);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::sort(xs.begin(), xs.end());
  SweepCache cache(g.order);
  Table t{"hamiltonian",
          {"x", "q_re", "q_im", "q1_sq", "q2_sq", "q1_sq_direct", "krein_rel_dev", "beta_partial", "h1_11",
           "h1_12_re", "h1_12_im", "h2_11", "h2_12", "h2_22"},
          {},
          std::nullopt};
  for (double x : xs) {
    const HamiltonianSample s = hamiltonian_at(x, &cache);
    t.rows.push_back({s.x, s.q.real(), s.q.imag(), s.q1_sq, s.q2_sq, s.q1_sq_direct, s.krein_rel_dev,
                      s.beta_partial, s.H1(0, 0).real(), s.H1(0, 1).real(), s.H1(0, 1).imag(), s.H2(0, 0),
                      s.H2(0, 1), s.H2(1, 1)});
  }
  return t;
}

// ---- canon --------------------------------------------------------------

struct CanonArgs {
  int system = 0;
  double z_re = 0.0;
  double z_im = 0.0;
  double x_max = 0.0;
  int steps = kDefaultCanonicalSteps;
};

Table run_canon(const CanonArgs& a, const Globals& g) {
  if (a.system != 1 && a.system != 2) throw UsageError("--system must be 1 or 2");
  const Complex z{a.z_re, a.z_im};
  if (!(a.x_max > 0.0) || a.x_max > kHamiltonianWindow)
    throw UsageError("--x-max must lie in (0, " + format_number(kHamiltonianWindow) + "]");
  const HamiltonianGrid grid(a.x_max, 0.02, g.order);
  const CanonicalSolution s = solve_canonical(a.system, z, a.x_max, a.steps, &grid);
  const Complex det = s.W.determinant();
  const Complex expected = liouville_determinant(a.system, z, a.x_max);
  Table t{"canon",
          {"system", "z_re", "z_im", "x_max", "steps", "w11_re", "w11_im", "w12_re", "w12_im", "w21_re", "w21_im",
           "w22_re", "w22_im", "det_re", "det_im", "liouville_re", "liouville_im"},
          {},
          std::nullopt};
  t.rows.push_back({static_cast<long long>(a.system), a.z_re, a.z_im, a.x_max, static_cast<long long>(s.step_count),
                    s.W(0, 0).real(), s.W(0, 0).imag(), s.W(0, 1).real(), s.W(0, 1).imag(), s.W(1, 0).real(),
                    s.W(1, 0).imag(), s.W(1, 1).real(), s.W(1, 1).imag(), det.real(), det.imag(), expected.real(),
                    expected.imag()});
  return t;
}

// ---- verify -------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  std::optional<double> zeta;
};

using SuiteFn = std::function<VerificationReport(const VerifyArgs&, const Globals&)>;

std::vector<double> suite_zetas(const VerifyArgs& a, std::vector<double> defaults) {
  return a.zeta ? std::vector<double>{*a.zeta} : defaults;
}

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> table = {
      {"symmetry",
       [](const VerifyArgs& a, const Globals& g) {
         return verify_symmetry(suite_zetas(a, {0.5, 1.0, 2.0}), 100, 20240601u, g.tol.value_or(1e-10));
       }},
      {"lemma32",
       [](const VerifyArgs& a, const Globals& g) {
         return verify_lemma32(suite_zetas(a, {0.25, 0.5, 1.0, 1.5, 2.0, 2.5}), g.tol.value_or(1e-7));
       }},
      {"jmms",
       [](const VerifyArgs& a, const Globals& g) {
         return verify_jmms(suite_zetas(a, {0.25, 0.5, 1.0, 1.5, 2.0}), std::nullopt, g.tol.value_or(1e-5),
                            g.tol.value_or(1e-7));
       }},
      {"identities",
       [](const VerifyArgs& a, const Globals&) {
         VerificationReport r("identities");
         for (double z : suite_zetas(a, {0.5})) r.merge(verify_operator_identities(z));
         return r;
       }},
      {"lemma41",
       [](const VerifyArgs& a, const Globals& g) {
         VerificationReport r("lemma41");
         for (double z : suite_zetas(a, {0.8}))
           r.merge(verify_lemma41(z, 0.9, g.order.value_or(60), g.tol.value_or(1e-10)));
         return r;
       }},
      {"lemma42",
       [](const VerifyArgs& a, const Globals& g) {
         VerificationReport r("lemma42");
         for (double z : suite_zetas(a, {0.8, 1.5}))
           for (double l : {0.5, 1.0}) r.merge(verify_lemma42(z, l, g.tol.value_or(1e-6)));
         return r;
       }},
      {"lemma43",
       [](const VerifyArgs& a, const Globals& g) {
         VerificationReport r("lemma43");
         for (double z : suite_zetas(a, {0.8, 1.5}))
           for (double l : {0.5, 1.0}) r.merge(verify_lemma43(z, l, g.tol.value_or(1e-6), g.tol.value_or(1e-8)));
         return r;
       }},
      {"thm45",
       [](const VerifyArgs& a, const Globals& g) {
         VerificationReport r("thm45");
         SweepCache cache;
         for (double z : suite_zetas(a, {0.5, 1.0, 1.5, 2.0})) r.merge(verify_thm45(z, &cache, g.tol.value_or(1e-6)));
         return r;
       }},
      {"corollary47",
       [](const VerifyArgs& a, const Globals& g) {
         VerificationReport r("corollary47");
         SweepCache cache;
         for (double z : suite_zetas(a, {0.5, 1.0, 1.5, 2.0}))
           r.merge(verify_corollary47(z, &cache, g.tol.value_or(1e-6)));
         return r;
       }},
      {"sumrule",
       [](const VerifyArgs& a, const Globals& g) {
         std::vector<std::pair<double, double>> points;
         for (double z : suite_zetas(a, {0.25, 0.5, 1.0, 1.5, 2.0, 2.5}))
           for (double l : {0.5, 1.0}) points.emplace_back(z, l);
         return verify_sumrule(points, g.tol.value_or(1e-8), g.tol.value_or(1e-10));
       }},
      {"pmgap",
       [](const VerifyArgs&, const Globals& g) { return verify_pmgap({1.0, 1.5, 2.0, 2.5}, g.order); }},
      {"krein",
       [](const VerifyArgs&, const Globals& g) { return verify_krein({0.5, 1.0, 2.0, 3.0}, g.tol.value_or(1e-4)); }},
      {"canon-invariants",
       [](const VerifyArgs&, const Globals& g) { return verify_canon_invariants(g.tol.value_or(1e-6)); }},
  };
  return table;
}

Table run_verify(const VerifyArgs& a, const Globals& g) {
  if (g.tol && !(*g.tol > 0.0)) throw UsageError("--tol must be positive");
  std::vector<std::pair<std::string, SuiteFn>> selected;
  for (const auto& entry : suites())
    if (a.suite == "all" || a.suite == entry.first) selected.push_back(entry);
  if (selected.empty()) {
    std::string names;
    for (const auto& entry : suites()) names += " " + entry.first;
    throw UsageError("unknown suite '" + a.suite + "'; choose all or one of:" + names);
  }
  Table t{"verify",
          {"suite", "case", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err", "rel_err", "tol", "pass"},
          {},
          true};
  for (const auto& [name, fn] : selected) {
    const VerificationReport report = fn(a, g);
    for (const VerificationCase& c : report.cases())
      t.rows.push_back({name, c.label, c.lhs.real(), c.lhs.imag(), c.rhs.real(), c.rhs.imag(), c.abs_err, c.rel_err,
                        c.tol, c.pass});
    *t.passed = *t.passed && report.passed();
  }
  return t;
}

std::optional<int> env_order() {
  const char* raw = std::getenv("SINEKERNEL_ORDER");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  int n = 0;
  const char* end = raw + std::char_traits<char>::length(raw);
  const auto [ptr, ec] = std::from_chars(raw, end, n);
  if (ec != std::errc() || ptr != end) throw UsageError(std::string("SINEKERNEL_ORDER is not an integer: ") + raw);
  return n;
}

class OrderScope {
 public:
  explicit OrderScope(std::optional<int> order) : previous_(set_default_order_override(order)) {}
  ~OrderScope() { set_default_order_override(previous_); }
  OrderScope(const OrderScope&) = delete;
  OrderScope& operator=(const OrderScope&) = delete;

 private:
  std::optional<int> previous_;
};

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw InternalError("format_number: buffer too small");
  return std::string(buf, ptr);
}

std::vector<double> parse_grid(const std::string& spec) {
  const auto first = spec.find(':');
  const auto second = first == std::string::npos ? std::string::npos : spec.find(':', first + 1);
  if (second == std::string::npos || spec.find(':', second + 1) != std::string::npos)
    throw std::invalid_argument("grid must have the form a:b:n, got '" + spec + "'");
  auto to_double = [&](const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
      throw std::invalid_argument("grid bound is not a finite number: '" + s + "'");
    return v;
  };
  const double a = to_double(spec.substr(0, first));
  const double b = to_double(spec.substr(first + 1, second - first - 1));
  const std::string count = spec.substr(second + 1);
  long n = 0;
  const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
  if (count.empty() || ec != std::errc() || ptr != count.data() + count.size() || n < 1 || n > 100000)
    throw std::invalid_argument("grid point count must be an integer in [1, 100000]: '" + count + "'");
  if (b < a) throw std::invalid_argument("grid requires a <= b");
  if (n == 1 && a != b) throw std::invalid_argument("a single-point grid requires a == b");
  return linspace(a, b, static_cast<int>(n));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sine-kernel Fredholm determinants, resolvents and their identities", "sinekernel"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  std::optional<int> order_flag;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--order", order_flag, "Quadrature order (overrides SINEKERNEL_ORDER)");
  app.add_option("--tol", g.tol, "Tolerance override for verification suites");

  DetArgs det;
  auto* det_cmd = app.add_subcommand("det", "Log-determinants log P, log P+, log P-");
  det_cmd->add_option("--zeta", det.zeta, "Half-length zeta");
  det_cmd->add_option("--zeta-grid", det.zeta_grid, "Inclusive grid a:b:n");
  det_cmd->add_option("--lambda", det.lambda, "Coupling lambda in (0, 1]");
  det_cmd->add_option("--variant", det.variant, "full, plus, minus or all");

  DetArgs res;
  auto* res_cmd = app.add_subcommand("resolvent", "Edge resolvent values and r(zeta)");
  res_cmd->add_option("--zeta", res.zeta, "Half-length zeta");
  res_cmd->add_option("--zeta-grid", res.zeta_grid, "Inclusive grid a:b:n");

  AsymArgs asym;
  auto* asym_cmd = app.add_subcommand("asym", "Numeric values against truncated large-u series");
  asym_cmd->add_option("--quantity", asym.quantity, "qdiag, qanti, abs-rsq, rsq or qsq")->required();
  asym_cmd->add_option("--u-min", asym.u_min, "Smallest u")->required();
  asym_cmd->add_option("--u-max", asym.u_max, "Largest u")->required();
  asym_cmd->add_option("--points", asym.points, "Number of u values");
  asym_cmd->add_option("--terms", asym.terms, "Truncation index N")->required();

  std::string x_grid;
  auto* ham_cmd = app.add_subcommand("hamiltonian", "Hamiltonian samples H1, H2 and q1, q2");
  ham_cmd->add_option("--x-grid", x_grid, "Inclusive grid a:b:n")->required();

  CanonArgs canon;
  auto* canon_cmd = app.add_subcommand("canon", "Integrate a canonical system");
  canon_cmd->add_option("--system", canon.system, "1 or 2")->required();
  canon_cmd->add_option("--z-re", canon.z_re, "Re z")->required();
  canon_cmd->add_option("--z-im", canon.z_im, "Im z");
  canon_cmd->add_option("--x-max", canon.x_max, "Upper end of the integration")->required();
  canon_cmd->add_option("--steps", canon.steps, "RK4 steps (at least 100)");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("--suite", verify.suite, "Suite name or all")->required();
  verify_cmd->add_option("--zeta", verify.zeta, "Restrict zeta-indexed suites to one value");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  Table table;
  try {
    g.order = order_flag ? order_flag : env_order();
    const OrderScope scope(g.order);
    if (*det_cmd) table = run_det(det, g);
    else if (*res_cmd) table = run_resolvent(res, g);
    else if (*asym_cmd) table = run_asym(asym, g);
    else if (*ham_cmd) table = run_hamiltonian(x_grid, g);
    else if (*canon_cmd) table = run_canon(canon, g);
    else table = run_verify(verify, g);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const WindowError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const SingularityError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kVerificationFailed;
  }

  if (g.format == "json") write_json(table, out);
  else write_csv(table, out);
  out.flush();
  return table.passed.value_or(true) ? kSuccess : kVerificationFailed;
}

}  // namespace sinekernel::cli
