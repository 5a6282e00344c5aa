#include "heatseries/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "heatseries/kernels.hpp"
#include "series_detail.hpp"

namespace heatseries {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += f(xs[i]);
  }
  return out;
}

std::vector<double> linspace(Interval iv, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  if (n == 1) {
    xs[0] = iv.lo;
    return xs;
  }
  const double h = (iv.hi - iv.lo) / (n - 1);
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = iv.lo + h * i;
  return xs;
}

void fill_errors(StudyRow& row, const std::vector<double>& values, const std::vector<double>& truth) {
  double e2 = 0.0, t2 = 0.0, emax = 0.0, tmax = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double e = values[i] - truth[i];
    e2 += e * e;
    t2 += truth[i] * truth[i];
    emax = std::max(emax, std::fabs(e));
    tmax = std::max(tmax, std::fabs(truth[i]));
  }
  row.error_l2 = t2 > 0.0 ? std::sqrt(e2 / t2) : std::sqrt(e2);
  row.error_max = tmax > 0.0 ? emax / tmax : emax;
  if (!std::isfinite(row.error_l2) || !std::isfinite(row.error_max)) {
    row.failure = "non-finite error";
  }
}

void mark_failed(StudyRow& row, const std::string& what) {
  row.failure = what;
  row.error_l2 = kNaN;
  row.error_max = kNaN;
}

std::vector<std::pair<std::string, std::string>> describe(const StudyConfig& c) {
  std::vector<std::pair<std::string, std::string>> m;
  const Interval ev = c.evaluation_interval();
  m.emplace_back("library_version", library_version());
  m.emplace_back("study_kind", to_string(c.kind));
  m.emplace_back("geometry", to_string(c.geometry));
  m.emplace_back("profile", c.profile.describe());
  m.emplace_back("tau", num(c.tau));
  m.emplace_back("variants", join(c.effective_variants(), [](Variant v) { return to_string(v); }));
  m.emplace_back("n_range", join(c.n_range, [](int n) { return std::to_string(n); }));
  m.emplace_back("delta_range", join(c.delta_range, num));
  m.emplace_back("beta_range", c.beta_range.empty() ? std::string("auto") : join(c.beta_range, num));
  const GridSpec grid = c.sampling_grid();
  m.emplace_back("grid", num(grid.lo) + ":" + num(grid.hi) + ":" + std::to_string(grid.n));
  m.emplace_back("sampled", c.sampled ? "true" : "false");
  m.emplace_back("seed", std::to_string(c.seed));
  m.emplace_back("prng", "mt19937_64+box-muller");
  m.emplace_back("constants_mode", to_string(c.mode));
  m.emplace_back("quad", "rel_tol=" + num(c.quad.rel_tol) + ",abs_tol=" + num(c.quad.abs_tol) +
                             ",truncation_radius_sigmas=" + num(c.quad.truncation_radius_sigmas) +
                             ",max_panels=" + std::to_string(c.quad.max_panels) +
                             ",nodes_per_panel=" + std::to_string(c.quad.nodes_per_panel));
  m.emplace_back("early_stop", c.early_stop ? "true" : "false");
  m.emplace_back("eval_grid", num(ev.lo) + ":" + num(ev.hi) + ":" + std::to_string(c.eval_points));
  return m;
}

int variant_rank(Variant v) {
  const auto& all = all_variants();
  return static_cast<int>(std::find(all.begin(), all.end(), v) - all.begin());
}

void canonical_sort(std::vector<StudyRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const StudyRow& a, const StudyRow& b) {
    if (a.variant != b.variant) return variant_rank(a.variant) < variant_rank(b.variant);
    if (a.n != b.n) return a.n < b.n;
    if (a.beta != b.beta) return a.beta < b.beta;
    return a.delta < b.delta;
  });
}

std::vector<double> betas_for(const StudyConfig& c, Variant v, double delta) {
  if (v == Variant::CI_Classical) return {0.0};
  if (!c.beta_range.empty()) return c.beta_range;
  return {study_beta(c, v, delta)};
}

StudyReport sweep(const StudyConfig& config) {
  config.validate();
  StudyReport report;
  report.metadata = describe(config);
  for (Variant v : config.effective_variants()) {
    for (double delta : config.delta_range) {
      for (double beta : betas_for(config, v, delta)) {
        for (int n : config.n_range) report.rows.push_back(run_cell(config, v, n, beta, delta));
      }
    }
  }
  canonical_sort(report.rows);
  return report;
}

// ---- audit -----------------------------------------------------------------

struct AuditCase {
  Data data = AnalyticProfile::gaussian(1.0);
  std::vector<double> xs;
  std::vector<double> truth;
};

AuditCase audit_case(Variant v, int n, ConstantsMode mode) {
  const KernelParams params{kAuditTau, kAuditBeta};
  const auto plan = detail::make_plan(v, params, mode);
  const Geometry g = geometry_of(v);
  const bool inverse = is_inverse(v);
  const double evolve = inverse ? -params.tau : params.tau;

  AuditCase out;
  AnalyticProfile data = AnalyticProfile::gaussian(1.0, 1.0, 0.0, g);
  if (plan.form == detail::Form::B) {
    // Polynomial data of degree n: the kernel-weighted expansion terminates at n.
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    c.back() = 1.0;
    data = AnalyticProfile(Polynomial{c}, g);
  } else {
    const int order = (plan.form == detail::Form::C && g == Geometry::Line) ? 2 * n : n;
    data = AnalyticProfile(Mode{order, 1.0, 0.0, plan.moment_scale}, g);
  }
  if (plan.form == detail::Form::C) {
    out.xs = {0.0};
  } else if (g == Geometry::Line) {
    out.xs = {-1.5, -0.5, 0.3, 1.2};
  } else {
    out.xs = {0.0, 0.4, 1.1, 2.0};
  }
  const auto truth = data.evolved(evolve);
  if (!truth) throw std::logic_error("audit: configuration has no exact evolution");
  for (double x : out.xs) out.truth.push_back((*truth)(x));
  out.data = data;
  return out;
}

}  // namespace

std::string library_version() { return HEATSERIES_VERSION; }

std::string to_string(StudyKind k) {
  switch (k) {
    case StudyKind::Audit:
      return "audit";
    case StudyKind::Convergence:
      return "convergence";
    case StudyKind::BetaMap:
      return "beta_map";
    case StudyKind::Noise:
      return "noise";
    case StudyKind::ClassicalCompare:
      return "classical_compare";
  }
  return "?";
}

std::optional<StudyKind> parse_study_kind(const std::string& name) {
  for (StudyKind k : {StudyKind::Audit, StudyKind::Convergence, StudyKind::BetaMap, StudyKind::Noise,
                      StudyKind::ClassicalCompare}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

void StudyConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("study: tau must be > 0");
  if (n_range.empty() || delta_range.empty()) throw std::invalid_argument("study: n_range and delta_range must be non-empty");
  for (int n : n_range) {
    if (n < 0) throw std::invalid_argument("study: orders must be >= 0");
  }
  for (double d : delta_range) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw std::invalid_argument("study: noise levels must be >= 0");
  }
  for (double b : beta_range) {
    if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("study: beta values must be > 0");
  }
  const GridSpec grid = sampling_grid();
  if (grid.n < 2 || !(grid.hi > grid.lo)) throw std::invalid_argument("study: grid needs n >= 2 and lo < hi");
  if (geometry == Geometry::Polar && grid.lo < 0.0) throw std::invalid_argument("study: polar grid must start at r >= 0");
  if (eval_points < 1) throw std::invalid_argument("study: eval_points must be >= 1");
  if (profile.geometry() != geometry) throw std::invalid_argument("study: profile geometry does not match");
  for (Variant v : effective_variants()) {
    if (geometry_of(v) != geometry) {
      throw std::invalid_argument("study: variant " + to_string(v) + " does not match geometry " + to_string(geometry));
    }
  }
  quad.validate();
}

GridSpec default_grid(Geometry g) {
  return g == Geometry::Line ? GridSpec{-10.0, 10.0, 501} : GridSpec{0.0, 10.0, 251};
}

GridSpec StudyConfig::sampling_grid() const { return grid ? *grid : default_grid(geometry); }

Interval StudyConfig::evaluation_interval() const {
  if (eval_interval) return *eval_interval;
  return geometry == Geometry::Line ? Interval{-3.0, 3.0} : Interval{0.0, 3.0};
}

std::vector<Variant> StudyConfig::effective_variants() const {
  if (!variants.empty()) return variants;
  const bool line = geometry == Geometry::Line;
  switch (kind) {
    case StudyKind::Audit:
      return series_variants();
    case StudyKind::Convergence:
      return {line ? Variant::CD_A : Variant::PD_A};
    case StudyKind::BetaMap:
      return {line ? Variant::CD_B : Variant::PD_B};
    case StudyKind::Noise:
      if (line) return {Variant::CI_A, Variant::CI_Classical};
      return {Variant::PI_A};
    case StudyKind::ClassicalCompare:
      return {Variant::CI_A, Variant::CI_Classical};
  }
  return {};
}

bool StudyConfig::uses_samples(double delta) const {
  return delta > 0.0 || sampled;
}

const StudyRow* StudyReport::find(Variant v, int n, double delta, std::optional<double> beta) const {
  for (const auto& r : rows) {
    if (r.variant == v && r.n == n && r.delta == delta && (!beta || r.beta == *beta)) return &r;
  }
  return nullptr;
}

std::vector<double> standard_normals(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 gen(seed);
  // 53-bit uniforms in (0, 1].
  auto uniform = [&gen] { return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53; };
  std::vector<double> out;
  out.reserve(n + 1);
  while (out.size() < n) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    out.push_back(radius * std::cos(2.0 * std::numbers::pi * u2));
    out.push_back(radius * std::sin(2.0 * std::numbers::pi * u2));
  }
  out.resize(n);
  return out;
}

Data study_data(const StudyConfig& config, Variant v, double delta) {
  const bool inverse = is_inverse(v);
  std::optional<AnalyticProfile> exact;
  if (!inverse) {
    exact = config.profile;
  } else {
    exact = config.profile.evolved(config.tau);
  }
  if (!config.uses_samples(delta) && exact) return *exact;

  const Geometry g = config.geometry;
  auto value = [&](double x) {
    if (exact) return (*exact)(x);
    return forward(config.profile, g, config.tau, x, config.quad);
  };
  const GridSpec grid = config.sampling_grid();
  Sampled1D s = Sampled1D::sample(value, grid.lo, grid.hi, grid.n);
  if (delta > 0.0) {
    const auto z = standard_normals(config.seed, s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] += delta * z[i];
  }
  return s;
}

std::vector<double> study_truth(const StudyConfig& config, Variant v) {
  const auto xs = linspace(config.evaluation_interval(), config.eval_points);
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    out.push_back(is_inverse(v) ? config.profile(x)
                                : forward(config.profile, config.geometry, config.tau, x, config.quad));
  }
  return out;
}

double study_beta(const StudyConfig& config, Variant v, double delta) {
  if (v == Variant::CI_Classical) return 0.0;
  const Data d = study_data(config, v, delta);
  return auto_beta(d, config.geometry, config.tau, is_inverse(v) ? Direction::Inverse : Direction::Direct,
                   config.quad);
}

StudyRow run_cell(const StudyConfig& config, Variant v, int n, double beta, double delta) {
  const auto t0 = std::chrono::steady_clock::now();
  StudyRow row;
  row.variant = v;
  row.n = n;
  row.beta = v == Variant::CI_Classical ? 0.0 : beta;
  row.delta = delta;
  try {
    const Data data = study_data(config, v, delta);
    const auto truth = study_truth(config, v);
    const auto xs = linspace(config.evaluation_interval(), config.eval_points);
    SeriesOptions opts;
    opts.order = n;
    opts.mode = config.mode;
    opts.quad = config.quad;
    opts.early_stop = config.early_stop;
    const KernelParams params{config.tau, row.beta};
    std::vector<double> values;
    values.reserve(xs.size());
    if (is_pointwise(v)) {
      for (double x : xs) {
        const auto r = series_value(v, data, params, x, opts);
        values.push_back(r.value);
        row.diverged = row.diverged || r.diag.flagged;
      }
    } else {
      const auto sol = build_series(v, data, params, 0.0, opts);
      for (double x : xs) {
        const auto r = sol.evaluate(x);
        values.push_back(r.value);
        row.diverged = row.diverged || r.diag.flagged;
      }
    }
    fill_errors(row, values, truth);
  } catch (const std::exception& e) {
    mark_failed(row, e.what());
  }
  row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

bool audit_expected_pass(Variant v, ConstantsMode mode) {
  if (mode == ConstantsMode::OracleValidated) return true;
  switch (v) {
    case Variant::CD_B:
    case Variant::CD_C:
    case Variant::CI_C:
    case Variant::PD_B:
    case Variant::PD_C:
    case Variant::PI_B:
    case Variant::PI_C:
      return false;
    default:
      return true;
  }
}

std::optional<double> literal_constant_ratio(Variant v, int n, double tau, double beta) {
  const double s = tau + beta;
  double fact = 1.0, fact2 = 1.0;  // n!, (2n)!
  for (int i = 1; i <= n; ++i) fact *= i;
  for (int i = 1; i <= 2 * n; ++i) fact2 *= i;
  const double pow2 = std::ldexp(1.0, n);
  switch (v) {
    case Variant::CD_C:
      return std::sqrt(std::numbers::pi) / pow2;
    case Variant::CI_C:
      return fact / (pow2 * fact2);
    case Variant::PD_C:
      return std::numbers::pi * gamma_half(n) * std::sqrt(s) / fact;
    case Variant::PI_C:
      return std::numbers::pi * gamma_half(n) * std::pow(beta, n + 1) / (fact * std::pow(tau, n + 0.5));
    default:
      return std::nullopt;
  }
}

StudyReport run_audit(const StudyConfig& config) {
  StudyReport report;
  report.metadata = describe(config);
  report.metadata.emplace_back("audit_tau", num(kAuditTau));
  report.metadata.emplace_back("audit_beta", num(kAuditBeta));
  report.metadata.emplace_back("audit_tolerance", num(kAuditTolerance));
  const std::vector<Variant> variants = config.variants.empty() ? series_variants() : config.variants;
  for (Variant v : variants) {
    if (v == Variant::CI_Classical) continue;
    for (int n = 0; n <= 2; ++n) {
      const auto t0 = std::chrono::steady_clock::now();
      StudyRow row;
      row.variant = v;
      row.n = n;
      row.beta = kAuditBeta;
      row.mode = config.mode;
      // A printed constant that coincides with the corrected one at this order
      // (CI-C at n = 0) is expected to pass.
      const auto lit_ratio = literal_constant_ratio(v, n, kAuditTau, kAuditBeta);
      const bool coincides = lit_ratio && std::fabs(*lit_ratio - 1.0) < 1e-12;
      row.expected_pass = audit_expected_pass(v, config.mode) || coincides;
      try {
        const auto c = audit_case(v, n, config.mode);
        SeriesOptions opts;
        opts.order = n;
        opts.mode = config.mode;
        opts.quad = config.quad;
        opts.early_stop = false;
        const KernelParams params{kAuditTau, kAuditBeta};
        std::vector<double> values;
        for (double x : c.xs) {
          const auto r = series_value(v, c.data, params, x, opts);
          values.push_back(r.value);
          row.diverged = row.diverged || r.diag.flagged;
        }
        fill_errors(row, values, c.truth);
        if (is_pointwise(v)) row.ratio = values[0] / c.truth[0];
        row.pass = !row.failure && row.error_max <= kAuditTolerance;
      } catch (const std::exception& e) {
        mark_failed(row, e.what());
        row.pass = false;
      }
      row.runtime_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      report.rows.push_back(row);
    }
  }
  canonical_sort(report.rows);
  return report;
}

StudyReport run_noise_study(const StudyConfig& config) {
  StudyConfig c = config;
  c.kind = StudyKind::Noise;
  StudyReport report = sweep(c);
  for (Variant v : c.effective_variants()) {
    for (double delta : c.delta_range) {
      std::vector<double> betas;
      for (const auto& r : report.rows) {
        if (r.variant == v && r.delta == delta && std::find(betas.begin(), betas.end(), r.beta) == betas.end()) {
          betas.push_back(r.beta);
        }
      }
      for (double beta : betas) {
        std::vector<const StudyRow*> cells;
        for (const auto& r : report.rows) {
          if (r.variant == v && r.delta == delta && r.beta == beta) cells.push_back(&r);
        }
        NoiseSummary s;
        s.variant = v;
        s.beta = beta;
        s.delta = delta;
        const StudyRow* best = nullptr;
        for (const auto* r : cells) {
          if (r->failure) continue;
          if (!best || r->error_l2 < best->error_l2) best = r;
        }
        if (best) {
          s.n_star = best->n;
          s.error_at_n_star = best->error_l2;
          const StudyRow* first = cells.front();
          const StudyRow* last = cells.back();
          auto above = [&](const StudyRow* r) { return r->failure || r->error_l2 > best->error_l2; };
          s.u_shape = delta > 0.0 && cells.size() >= 3 && above(first) && above(last);
        } else {
          s.error_at_n_star = kNaN;
        }
        report.noise_summary.push_back(s);
      }
    }
  }
  return report;
}

StudyReport run_convergence(const StudyConfig& config) {
  StudyConfig c = config;
  c.kind = StudyKind::Convergence;
  return sweep(c);
}

StudyReport run_beta_map(const StudyConfig& config) {
  StudyConfig c = config;
  c.kind = StudyKind::BetaMap;
  if (c.beta_range.empty()) throw std::invalid_argument("beta_map: beta_range must be non-empty");
  return sweep(c);
}

StudyReport run_classical_compare(const StudyConfig& config) {
  StudyConfig c = config;
  c.kind = StudyKind::ClassicalCompare;
  if (c.geometry != Geometry::Line) throw std::invalid_argument("classical_compare: line geometry only");
  return sweep(c);
}

StudyReport run_study(const StudyConfig& config) {
  switch (config.kind) {
    case StudyKind::Audit:
      return run_audit(config);
    case StudyKind::Convergence:
      return run_convergence(config);
    case StudyKind::BetaMap:
      return run_beta_map(config);
    case StudyKind::Noise:
      return run_noise_study(config);
    case StudyKind::ClassicalCompare:
      return run_classical_compare(config);
  }
  throw std::invalid_argument("unknown study kind");
}

}  // namespace heatseries
