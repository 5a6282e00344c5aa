#include "heatseries/series.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "heatseries/series_cartesian.hpp"
#include "heatseries/series_polar.hpp"
#include "series_detail.hpp"

namespace heatseries {

namespace {

struct VariantName {
  Variant v;
  const char* name;
};

constexpr std::array<VariantName, 13> kNames{{
    {Variant::CD_A, "CD-A"},
    {Variant::CD_B, "CD-B"},
    {Variant::CD_C, "CD-C"},
    {Variant::CI_A, "CI-A"},
    {Variant::CI_B, "CI-B"},
    {Variant::CI_C, "CI-C"},
    {Variant::CI_Classical, "CI-classical"},
    {Variant::PD_A, "PD-A"},
    {Variant::PD_B, "PD-B"},
    {Variant::PD_C, "PD-C"},
    {Variant::PI_A, "PI-A"},
    {Variant::PI_B, "PI-B"},
    {Variant::PI_C, "PI-C"},
}};

std::string normalise(const std::string& s) {
  std::string out;
  for (char c : s) {
    const char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    out.push_back(l == '_' ? '-' : l);
  }
  return out;
}

}  // namespace

std::string to_string(Variant v) {
  for (const auto& n : kNames) {
    if (n.v == v) return n.name;
  }
  return "?";
}

std::optional<Variant> parse_variant(const std::string& name) {
  const std::string key = normalise(name);
  for (const auto& n : kNames) {
    if (normalise(n.name) == key) return n.v;
  }
  return std::nullopt;
}

const std::vector<Variant>& series_variants() {
  static const std::vector<Variant> v{Variant::CD_A, Variant::CD_B, Variant::CD_C, Variant::CI_A,
                                      Variant::CI_B, Variant::CI_C, Variant::PD_A, Variant::PD_B,
                                      Variant::PD_C, Variant::PI_A, Variant::PI_B, Variant::PI_C};
  return v;
}

const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> v = [] {
    std::vector<Variant> out;
    for (const auto& n : kNames) out.push_back(n.v);
    return out;
  }();
  return v;
}

Geometry geometry_of(Variant v) {
  switch (v) {
    case Variant::PD_A:
    case Variant::PD_B:
    case Variant::PD_C:
    case Variant::PI_A:
    case Variant::PI_B:
    case Variant::PI_C:
      return Geometry::Polar;
    default:
      return Geometry::Line;
  }
}

bool is_inverse(Variant v) {
  switch (v) {
    case Variant::CI_A:
    case Variant::CI_B:
    case Variant::CI_C:
    case Variant::CI_Classical:
    case Variant::PI_A:
    case Variant::PI_B:
    case Variant::PI_C:
      return true;
    default:
      return false;
  }
}

bool is_pointwise(Variant v) {
  return v == Variant::CD_C || v == Variant::CI_C || v == Variant::PD_C || v == Variant::PI_C;
}

std::string to_string(ConstantsMode m) {
  return m == ConstantsMode::OracleValidated ? "oracle_validated" : "paper_literal";
}

std::optional<ConstantsMode> parse_constants_mode(const std::string& name) {
  const std::string key = normalise(name);
  if (key == "oracle-validated") return ConstantsMode::OracleValidated;
  if (key == "paper-literal") return ConstantsMode::PaperLiteral;
  return std::nullopt;
}

DivergenceDiag diagnose(std::span<const double> terms) {
  DivergenceDiag d;
  d.term_magnitudes.reserve(terms.size());
  double running_max = 0.0;
  double prev = -1.0;
  int run = 0;
  int run_start = -1;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double m = std::fabs(terms[i]);
    d.term_magnitudes.push_back(m);
    const int j = static_cast<int>(i);
    const bool negligible = m <= 1e-12 * running_max;
    running_max = std::max(running_max, m);
    if (negligible) continue;
    if (prev >= 0.0 && j >= 4 && m > prev) {
      if (run == 0) run_start = j;
      ++run;
      if (run >= 5 && !d.flagged) {
        d.flagged = true;
        d.first_growth_index = run_start;
      }
    } else {
      run = 0;
    }
    prev = m;
  }
  return d;
}

EvalResult SeriesSolution::evaluate(double x) const {
  if (is_pointwise(variant) && x != center) {
    throw std::invalid_argument("SeriesSolution::evaluate: " + to_string(variant) +
                                " coefficients belong to the point " + std::to_string(center));
  }
  return evaluate_series(variant, coeffs, params, x, constants_mode, early_stop, abs_tol);
}

SeriesSolution build_series(Variant v, const Data& data, const KernelParams& params, double center,
                            const SeriesOptions& opts) {
  if (opts.order < 0) throw std::invalid_argument("build_series: order must be >= 0");
  opts.quad.validate();
  if (const auto* p = std::get_if<AnalyticProfile>(&data); p && p->geometry() != geometry_of(v)) {
    throw std::invalid_argument(to_string(v) + ": profile is declared for " + to_string(p->geometry()) + " geometry");
  }
  SeriesSolution sol;
  sol.variant = v;
  sol.params = params;
  sol.order_n = opts.order;
  sol.constants_mode = opts.mode;
  sol.center = center;
  sol.early_stop = opts.early_stop;
  sol.abs_tol = opts.quad.abs_tol;
  if (v == Variant::CI_Classical) {
    if (!(params.tau > 0.0)) throw std::invalid_argument("CI-classical: tau must be > 0");
    sol.coeffs = derivatives_at_zero(data, opts.order);
  } else {
    params.validate();
    const auto plan = detail::make_plan(v, params, opts.mode);
    sol.coeffs = detail::moments(plan, data, opts.order, center, opts.quad);
  }
  sol.diagnostics = sol.evaluate(center).diag;
  return sol;
}

EvalResult series_value(Variant v, const Data& data, const KernelParams& params, double x,
                        const SeriesOptions& opts) {
  return build_series(v, data, params, x, opts).evaluate(x);
}

EvalResult evaluate_series(Variant v, std::span<const double> coeffs, const KernelParams& params, double x,
                           ConstantsMode mode, bool early_stop, double abs_tol) {
  if (coeffs.empty()) throw std::invalid_argument("evaluate_series: empty coefficient list");
  detail::Plan plan;
  if (v == Variant::CI_Classical) {
    if (!(params.tau > 0.0)) throw std::invalid_argument("CI-classical: tau must be > 0");
    plan.form = detail::Form::Classical;
    plan.eval_scale = params.tau;
    plan.literal = mode == ConstantsMode::PaperLiteral;
    plan.inverse = true;
  } else {
    params.validate();
    plan = detail::make_plan(v, params, mode);
  }
  return detail::sum_series(plan, coeffs, x, early_stop, abs_tol);
}

double beta_rule(double a, double tau, Direction d) {
  if (!std::isfinite(a) || !(a > 0.0)) throw std::invalid_argument("beta_rule: scale estimate must be finite and > 0");
  if (!std::isfinite(tau) || tau < 0.0) throw std::invalid_argument("beta_rule: tau must be finite and >= 0");
  const double floor = 0.5 * tau;
  const double beta = d == Direction::Direct ? a : a - tau;
  const double out = std::max(beta, floor);
  if (!(out > 0.0)) throw std::invalid_argument("beta_rule: resulting beta is not positive");
  return out;
}

double auto_beta(const Data& data, Geometry g, double tau, Direction d, const QuadSpec& spec) {
  return beta_rule(estimate_scale(data, g, spec), tau, d);
}

namespace detail {

Plan make_plan(Variant v, const KernelParams& p, ConstantsMode mode) {
  const double t = p.tau;
  const double b = p.beta;
  const double s = p.shifted();
  const bool lit = mode == ConstantsMode::PaperLiteral;
  Plan plan;
  plan.geometry = geometry_of(v);
  plan.literal = lit;
  plan.inverse = is_inverse(v);
  auto a_form = [&](double e, double k, double pw) {
    plan.form = Form::A;
    plan.moment_scale = e;
    plan.eval_scale = k;
    plan.power_scale = pw;
  };
  auto b_form = [&](double w, double e) {
    plan.form = Form::B;
    plan.moment_scale = w;
    plan.eval_scale = e;
  };
  auto c_form = [&](double e, double k) {
    plan.form = Form::C;
    plan.moment_scale = e;
    plan.eval_scale = k;
  };
  switch (v) {
    case Variant::CD_A:
    case Variant::PD_A:
      a_form(b, s, b);
      break;
    case Variant::CI_A:
    case Variant::PI_A:
      a_form(s, b, s);
      break;
    case Variant::CD_B:
      // Printed form: moments at scale s summed against the kernel at scale tau.
      lit ? a_form(s, t, s) : b_form(s, b);
      break;
    case Variant::CI_B:
      b_form(b, s);
      break;
    case Variant::PD_B:
      lit ? a_form(s, b, s) : b_form(s, b);
      break;
    case Variant::PI_B:
      lit ? a_form(b, s, t) : b_form(b, s);
      break;
    case Variant::CD_C:
      c_form(b, s);
      break;
    case Variant::CI_C:
      c_form(s, b);
      break;
    case Variant::PD_C:
      c_form(b, s);
      break;
    case Variant::PI_C:
      c_form(s, lit ? t : b);
      break;
    case Variant::CI_Classical:
      throw std::invalid_argument("make_plan: CI-classical has no shifted plan");
  }
  if (!(plan.eval_scale > 0.0) || !(plan.moment_scale > 0.0)) {
    throw std::invalid_argument(to_string(v) + " (" + to_string(mode) + "): requires tau > 0");
  }
  return plan;
}

namespace {

// Extra padding (in Gaussian widths) for a moment whose polynomial factor has
// degree `deg` in xi: xi^deg exp(-xi^2/4a) peaks sqrt(deg) widths out.
double pad_for_degree(int deg) { return std::sqrt(2.0 * deg + 1.0); }

Interval finite_support(const Data& d, const QuadSpec& spec, double extra, const char* what) {
  const Interval iv = data_support(d, spec, extra);
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
    throw std::invalid_argument(std::string(what) + ": data must decay (unweighted moments of a polynomial diverge)");
  }
  return iv;
}

Interval intersect(Interval a, Interval b) { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }

std::vector<double> run_moments(const BatchIntegrand& f, int n, Interval window, const Data& d,
                                const QuadSpec& spec) {
  const auto bp = data_breakpoints(d);
  return integrate_batch(f, static_cast<std::size_t>(n) + 1, window, bp, spec).values;
}

}  // namespace

std::vector<double> moments(const Plan& plan, const Data& data, int n, double center, const QuadSpec& spec) {
  if (n < 0) throw std::invalid_argument("moments: order must be >= 0");
  const std::size_t m = static_cast<std::size_t>(n) + 1;
  const double sq = 2.0 * std::sqrt(plan.moment_scale);
  const double reach = spec.truncation_radius_sigmas;
  const bool polar = plan.geometry == Geometry::Polar;
  auto clip_polar = [&](Interval iv) {
    if (polar) iv.lo = std::max(0.0, iv.lo);
    return iv;
  };

  if (plan.form == Form::A) {
    const Interval window = clip_polar(finite_support(data, spec, pad_for_degree(polar ? 2 * n : n), "moments"));
    if (!polar) {
      const BatchIntegrand f = [&](double xi, std::span<double> out) {
        hermite_eval_all(xi / sq, out);
        const double d = evaluate(data, xi);
        for (double& v : out) v *= d;
      };
      return run_moments(f, n, window, data, spec);
    }
    const BatchIntegrand f = [&](double xi, std::span<double> out) {
      w_poly_eval_all(xi / sq, out);
      const double d = xi * evaluate(data, xi);
      for (double& v : out) v *= d;
    };
    return run_moments(f, n, window, data, spec);
  }

  if (plan.form == Form::B) {
    const double w = plan.moment_scale;
    const double half = (reach + pad_for_degree(polar ? 2 * n : n)) * std::sqrt(2.0 * w);
    const Interval window = clip_polar(intersect(data_support(data, spec, pad_for_degree(n)), {-half, half}));
    if (window.empty()) return std::vector<double>(m, 0.0);
    if (!polar) {
      const double norm = 1.0 / (2.0 * std::sqrt(std::numbers::pi * w));
      const BatchIntegrand f = [&](double xi, std::span<double> out) {
        hermite_eval_all(xi / sq, out);
        const double d = norm * std::exp(-xi * xi / (4.0 * w)) * evaluate(data, xi);
        for (double& v : out) v *= d;
      };
      return run_moments(f, n, window, data, spec);
    }
    const BatchIntegrand f = [&](double xi, std::span<double> out) {
      w_poly_eval_all(xi / sq, out);
      const double d = xi * std::exp(-xi * xi / (4.0 * w)) / (2.0 * w) * evaluate(data, xi);
      for (double& v : out) v *= d;
    };
    return run_moments(f, n, window, data, spec);
  }

  // Form::C
  const Interval window = clip_polar(finite_support(data, spec, pad_for_degree(2 * n), "moments"));
  if (!polar) {
    const BatchIntegrand f = [&, scratch = std::vector<double>(2 * m)](double xi, std::span<double> out) mutable {
      hermite_eval_all((center - xi) / sq, scratch);
      const double d = evaluate(data, xi);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] = scratch[2 * k] * d;
    };
    return run_moments(f, n, window, data, spec);
  }
  if (center < 0.0) throw std::invalid_argument("moments: radius must be >= 0");
  const int nodes = angular_nodes(n, center, window.hi, plan.moment_scale, spec.rel_tol);
  const GaussRule& rule = gauss_legendre(nodes);
  std::vector<double> cosines(rule.nodes.size()), weights(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double phi = 0.5 * std::numbers::pi * (rule.nodes[i] + 1.0);
    cosines[i] = std::cos(phi);
    weights[i] = 0.5 * std::numbers::pi * rule.weights[i];
  }
  const BatchIntegrand f = [&, scratch = std::vector<double>(m)](double xi, std::span<double> out) mutable {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < cosines.size(); ++i) {
      const double rho2 = std::max(0.0, center * center + xi * xi - 2.0 * center * xi * cosines[i]);
      w_poly_eval_all(std::sqrt(rho2) / sq, scratch);
      for (std::size_t j = 0; j < m; ++j) out[j] += weights[i] * scratch[j];
    }
    const double d = xi * evaluate(data, xi);
    for (double& v : out) v *= d;
  };
  return run_moments(f, n, window, data, spec);
}

EvalResult sum_series(const Plan& plan, std::span<const double> coeffs, double x, bool early_stop, double abs_tol) {
  const std::size_t m = coeffs.size();
  const bool polar = plan.geometry == Geometry::Polar;
  if (polar && x < 0.0) throw std::invalid_argument("series evaluation: radius must be >= 0");
  std::vector<double> basis(m, 1.0);
  // Early stopping compares an envelope of the basis (Cramer's bound for H_j,
  // |L_j(v)| <= exp(v/2) for W_j) so roots of the basis polynomials do not
  // masquerade as converged terms.
  enum class Basis { None, Hermite, W } basis_kind = Basis::None;
  double basis_arg = 0.0;
  double prefactor = 1.0;
  double factor = 1.0;
  // factor_j = factor_{j-1} * ratio(j)
  std::function<double(int)> ratio;
  const double k_scale = plan.eval_scale;
  const double e_scale = plan.moment_scale;
  switch (plan.form) {
    case Form::A: {
      const double p = plan.power_scale;
      if (polar) {
        basis_kind = Basis::W;
        basis_arg = x / (2.0 * std::sqrt(k_scale));
        w_poly_eval_all(basis_arg, basis);
        prefactor = std::exp(-x * x / (4.0 * k_scale)) / (2.0 * k_scale);
        ratio = [=](int j) {
          const double q = static_cast<double>(j) / ((2.0 * j) * (2.0 * j - 1.0));
          return (p / k_scale) * q * q;
        };
      } else {
        basis_kind = Basis::Hermite;
        basis_arg = x / (2.0 * std::sqrt(k_scale));
        hermite_eval_all(basis_arg, basis);
        prefactor = poisson_kernel(x, k_scale);
        ratio = [=](int j) { return std::sqrt(p) / (2.0 * std::sqrt(k_scale)) / j; };
      }
      break;
    }
    case Form::B: {
      // moment_scale = W, eval_scale = E
      const double w = e_scale;
      const double e = k_scale;
      if (polar) {
        basis_kind = Basis::W;
        basis_arg = x / (2.0 * std::sqrt(e));
        w_poly_eval_all(basis_arg, basis);
        ratio = [=](int j) {
          const double q = static_cast<double>(j) / ((2.0 * j) * (2.0 * j - 1.0));
          return (e / w) * q * q;
        };
      } else {
        basis_kind = Basis::Hermite;
        basis_arg = x / (2.0 * std::sqrt(e));
        hermite_eval_all(basis_arg, basis);
        ratio = [=](int j) { return std::sqrt(e) / (2.0 * std::sqrt(w)) / j; };
      }
      break;
    }
    case Form::C: {
      const double e = e_scale;
      const double k = k_scale;
      if (polar) {
        if (!plan.literal) {
          factor = 1.0 / (2.0 * std::numbers::pi * k);
          ratio = [=](int j) { return -e * j / ((2.0 * j) * (2.0 * j - 1.0) * k); };
        } else {
          factor = std::sqrt(std::numbers::pi) / (2.0 * std::sqrt(k));
          ratio = [=](int j) { return -e * (j - 0.5) / ((2.0 * j) * (2.0 * j - 1.0) * k); };
        }
      } else if (!plan.literal) {
        factor = 1.0 / (std::sqrt(std::numbers::pi) * 2.0 * std::sqrt(k));
        ratio = [=](int j) { return -e / (j * 4.0 * k); };
      } else if (!plan.inverse) {
        factor = 1.0 / (2.0 * std::sqrt(k));
        ratio = [=](int j) { return -e / (2.0 * j * 4.0 * k); };
      } else {
        factor = 1.0 / (std::sqrt(std::numbers::pi) * 2.0 * std::sqrt(k));
        ratio = [=](int j) { return -e / (2.0 * (2.0 * j) * (2.0 * j - 1.0) * 4.0 * k); };
      }
      break;
    }
    case Form::Classical: {
      const double t = k_scale;
      basis_kind = Basis::Hermite;
      basis_arg = x / (2.0 * std::sqrt(t));
      hermite_eval_all(basis_arg, basis);
      if (!plan.literal) {
        ratio = [=](int j) { return std::sqrt(t) / j; };
      } else {
        factor = 1.0 / (std::sqrt(std::numbers::pi) * 2.0 * std::sqrt(t));
        ratio = [=](int j) { return 1.0 / (2.0 * std::sqrt(t) * j); };
      }
      break;
    }
  }

  // First pass: factors and basis envelopes. The early stop looks ahead over
  // every available coefficient, so structural zeros (parity, cancellation
  // between mixture components) never end the sum prematurely.
  std::vector<double> factors(m), bounds(m);
  double envelope = basis_kind == Basis::None ? 1.0 : 1.0865 * std::exp(0.5 * basis_arg * basis_arg);
  for (std::size_t i = 0; i < m; ++i) {
    if (i > 0) {
      factor *= ratio(static_cast<int>(i));
      const double j = static_cast<double>(i);
      if (basis_kind == Basis::Hermite) envelope *= std::sqrt(2.0 * j);
      if (basis_kind == Basis::W) envelope *= 2.0 * (2.0 * j - 1.0);
    }
    factors[i] = factor;
    bounds[i] = std::fabs(prefactor * factor * coeffs[i]) * envelope;
  }
  std::size_t used = m;
  if (early_stop) {
    std::size_t last_significant = m;
    for (std::size_t i = m; i-- > 0;) {
      if (bounds[i] >= abs_tol) {
        last_significant = i;
        break;
      }
    }
    if (last_significant < m) used = std::min(m, last_significant + 4);
  }

  std::vector<double> terms;
  terms.reserve(used);
  double value = 0.0;
  for (std::size_t i = 0; i < used; ++i) {
    const double t = prefactor * factors[i] * basis[i] * coeffs[i];
    if (!std::isfinite(t)) {
      throw OutOfRange("series evaluation: term " + std::to_string(i) + " is not finite");
    }
    terms.push_back(t);
    value += t;
  }
  EvalResult r;
  r.value = value;
  r.terms_used = static_cast<int>(terms.size());
  r.diag = diagnose(terms);
  return r;
}

}  // namespace detail

}  // namespace heatseries
