// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "heatseries/experiments.hpp"
#include "heatseries/kernels.hpp"
#include "heatseries/series.hpp"
#include "heatseries/specfun.hpp"

using namespace heatseries;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

// 1. generating functions, parity, Bessel operator
Outcome special_functions() {
  Outcome o;
  double h_err = 0.0, w_err = 0.0;
  for (double t : grid(-1.0, 1.0, 17)) {
    for (double z : grid(-2.0, 2.0, 17)) {
      const auto h = hermite_eval_all(40, z);
      double sum = 0.0, tj = 1.0;
      for (int j = 0; j <= 40; ++j) {
        sum += h[j] * tj;
        tj *= t / (j + 1);
      }
      h_err = std::max(h_err, std::fabs(sum - std::exp(2 * t * z - t * t)));
    }
    for (double z : grid(0.0, 2.0, 9)) {
      const auto w = w_poly_eval_all(30, z);
      double sum = 0.0, t2j = 1.0;
      for (int j = 0; j <= 30; ++j) {
        sum += w[j] * t2j;
        t2j *= t * t / ((2.0 * j + 1) * (2.0 * j + 2));
      }
      w_err = std::max(w_err, std::fabs(sum - std::exp(-t * t) * std::cyl_bessel_i(0.0, std::fabs(2 * t * z))));
    }
  }
  bool parity = true;
  for (int k = 0; k <= 40; ++k) parity = parity && hermite_eval(2 * k + 1, 0.0) == 0.0;
  for (int k = 0; k <= 15; ++k) {
    const double a = hermite_at_zero(2 * k), b = hermite_eval(2 * k, 0.0);
    parity = parity && std::fabs(a - b) <= 4 * std::numeric_limits<double>::epsilon() * std::fabs(b);
  }

  // B I0(2tz) = (2t)^2 I0(2tz); halving h should quarter the error
  double worst_order = 4.0;
  for (double t : {0.25, 0.5, 1.0, 2.0}) {
    for (double z : {0.3, 0.8, 1.5, 2.0}) {
      auto op = [&](double h) {
        const double fm = bessel_i0(2 * t * (z - h)), f0 = bessel_i0(2 * t * z), fp = bessel_i0(2 * t * (z + h));
        return (fp - 2 * f0 + fm) / (h * h) + (fp - fm) / (2 * h * z);
      };
      const double exact = 4 * t * t * bessel_i0(2 * t * z);
      const double ratio = std::fabs(op(2e-2) - exact) / std::fabs(op(1e-2) - exact);
      if (std::fabs(ratio - 4.0) > std::fabs(worst_order - 4.0)) worst_order = ratio;
    }
  }
  const bool order_ok = std::fabs(worst_order - 4.0) <= 0.25;
  o.pass = h_err <= 1e-10 && w_err <= 1e-10 && parity && order_ok;
  o.detail = "hermite gf " + sci(h_err) + ", W gf " + sci(w_err) + ", parity " + (parity ? "exact" : "broken") +
             ", B-operator error ratio " + std::to_string(worst_order);
  return o;
}

// 2. Weber, J0 product, semigroup, mass
Outcome kernel_identities() {
  Outcome o;
  double weber = 0.0, j0p = 0.0, semi = 0.0, mass = 0.0;
  for (double r : {0.0, 0.5, 1.0, 2.0}) {
    for (double xi : {0.0, 0.5, 1.0, 2.0}) {
      for (double t : {0.25, 0.5, 1.0, 2.0}) {
        const auto c = weber_integral_check(r, xi, t);
        weber = std::max(weber, std::fabs(c.lhs - c.rhs));
      }
    }
  }
  for (double lambda : {0.0, 0.5, 1.0, 3.0}) {
    for (double x : {0.0, 0.5, 1.0, 2.0}) {
      for (double y : {0.0, 0.5, 1.0, 2.0}) {
        const auto c = j0_product_check(lambda, x, y);
        j0p = std::max(j0p, std::fabs(c.lhs - c.rhs));
      }
    }
  }
  const AnalyticProfile line(Mixture{{{1.0, -0.4, 0.7}, {0.6, 0.5, 1.3}}});
  const AnalyticProfile radial(Mixture{{{1.0, 0.0, 0.7}, {0.6, 0.0, 1.3}}}, Geometry::Polar);
  const double t1 = 0.3, t2 = 0.45;
  for (double x : grid(-3.0, 3.0, 13)) {
    const double two_step = forward_line(*line.evolved(t1), t2, x, {}, ForwardMethod::Quadrature);
    semi = std::max(semi, std::fabs(two_step - forward_line(line, t1 + t2, x)));
  }
  for (double r : grid(0.0, 3.0, 7)) {
    const double two_step = forward_polar(*radial.evolved(t1), t2, r, {}, ForwardMethod::Quadrature);
    semi = std::max(semi, std::fabs(two_step - forward_polar(radial, t1 + t2, r)));
  }
  const double mass0 = 2 * std::sqrt(std::numbers::pi) * (std::sqrt(0.7) + 0.6 * std::sqrt(1.3));
  for (double tau : {0.1, 0.5, 1.0}) {
    const auto m = integrate([&](double x) { return forward_line(line, tau, x, {}, ForwardMethod::Quadrature); },
                             IntegrandDomain::whole_line(std::sqrt(2 * (1.3 + tau))));
    mass = std::max(mass, std::fabs(m.value - mass0) / mass0);
  }
  o.pass = weber <= 1e-8 && j0p <= 1e-8 && semi <= 1e-8 && mass <= 1e-8;
  o.detail = "weber " + sci(weber) + ", J0 product " + sci(j0p) + ", semigroup " + sci(semi) + ", mass " + sci(mass);
  return o;
}

// 3. audit in both constants modes
Outcome formula_audit() {
  Outcome o;
  StudyConfig c;
  c.kind = StudyKind::Audit;
  const auto oracle = run_audit(c);
  int oracle_fail = 0;
  double worst = 0.0;
  for (const auto& row : oracle.rows) {
    if (!row.pass.value_or(false)) ++oracle_fail;
    worst = std::max(worst, row.error_max);
  }
  c.mode = ConstantsMode::PaperLiteral;
  const auto literal = run_audit(c);
  int mismatched = 0;
  double ratio_dev = 0.0;
  bool c_forms_fail = false;
  for (const auto& row : literal.rows) {
    if (row.pass != row.expected_pass) ++mismatched;
    if (row.variant == Variant::CD_C || row.variant == Variant::CI_C) {
      const auto want = literal_constant_ratio(row.variant, row.n, kAuditTau, kAuditBeta);
      if (!want || !row.ratio) {
        ++mismatched;
        continue;
      }
      ratio_dev = std::max(ratio_dev, std::fabs(*row.ratio / *want - 1.0));
      if (row.n >= 1 && !*row.pass) c_forms_fail = true;
    }
  }
  o.pass = oracle_fail == 0 && oracle.rows.size() == 36 && mismatched == 0 && ratio_dev <= 1e-9 && c_forms_fail;
  o.detail = "oracle mode " + std::to_string(oracle.rows.size() - oracle_fail) + "/" +
             std::to_string(oracle.rows.size()) + " (worst " + sci(worst) + "), printed constants: " +
             std::to_string(mismatched) + " unexpected outcomes, C ratio deviation " + sci(ratio_dev);
  return o;
}

// 4. direct series against the forward oracle
Outcome direct_equivalence() {
  Outcome o;
  const std::vector<AnalyticProfile> line = {
      AnalyticProfile(Mixture{{{1.0, -0.4, 0.7}, {0.6, 0.5, 1.3}}}),
      AnalyticProfile(Mixture{{{1.0, 0.0, 0.5}, {0.5, 0.3, 2.0}}}),
  };
  const std::vector<AnalyticProfile> polar = {
      AnalyticProfile(Mixture{{{1.0, 0.0, 0.7}, {0.6, 0.0, 1.3}}}, Geometry::Polar),
      AnalyticProfile(Mixture{{{1.0, 0.0, 0.5}, {0.5, 0.0, 2.0}}}, Geometry::Polar),
  };
  SeriesOptions opts;
  opts.order = 40;
  int cases = 0, failed = 0, b_clear = 0, b_flagged = 0;
  std::ostringstream worst_cases;
  for (Geometry g : {Geometry::Line, Geometry::Polar}) {
    const auto& profiles = g == Geometry::Line ? line : polar;
    const auto xs = g == Geometry::Line ? grid(-3.0, 3.0, 61) : grid(0.0, 3.0, 31);
    const std::vector<Variant> variants = g == Geometry::Line
                                              ? std::vector<Variant>{Variant::CD_A, Variant::CD_B, Variant::CD_C}
                                              : std::vector<Variant>{Variant::PD_A, Variant::PD_B, Variant::PD_C};
    for (std::size_t p = 0; p < profiles.size(); ++p) {
      const auto& f = profiles[p];
      for (double tau : {0.1, 0.5, 1.0}) {
        const double beta = auto_beta(f, g, tau, Direction::Direct);
        for (Variant v : variants) {
          std::vector<double> truth, got;
          bool flagged = false;
          const SeriesSolution sol = is_pointwise(v) ? SeriesSolution{} : build_series(v, f, {tau, beta}, 0.0, opts);
          for (double x : xs) {
            const EvalResult r = is_pointwise(v) ? series_value(v, f, {tau, beta}, x, opts) : sol.evaluate(x);
            flagged = flagged || r.diag.flagged;
            got.push_back(r.value);
            truth.push_back(forward(f, g, tau, x));
          }
          const bool is_b = v == Variant::CD_B || v == Variant::PD_B;
          if (is_b && flagged) {
            ++b_flagged;
            continue;
          }
          if (is_b) ++b_clear;
          double emax = 0.0, umax = 0.0;
          for (std::size_t i = 0; i < xs.size(); ++i) {
            emax = std::max(emax, std::fabs(got[i] - truth[i]));
            umax = std::max(umax, std::fabs(truth[i]));
          }
          const double rel = emax / umax;
          ++cases;
          if (!(rel <= 1e-6)) {
            ++failed;
            worst_cases << " " << to_string(v) << "/mix" << p + 1 << "/tau=" << tau << ":" << sci(rel);
          }
        }
      }
    }
  }
  o.pass = failed == 0;
  o.detail = std::to_string(cases - failed) + "/" + std::to_string(cases) + " cases within 1e-6 (B variants: " +
             std::to_string(b_clear) + " flag-clear, " + std::to_string(b_flagged) + " flagged and skipped)";
  if (failed) o.detail += "; over tolerance:" + worst_cases.str();
  return o;
}

// 5. noiseless inverse round trips
Outcome inverse_round_trips() {
  Outcome o;
  std::ostringstream d;
  for (Geometry g : {Geometry::Line, Geometry::Polar}) {
    StudyConfig c;
    c.kind = StudyKind::Noise;
    c.geometry = g;
    c.profile = AnalyticProfile::gaussian(1.0, 1.0, 0.0, g);
    c.tau = 0.3;
    const Variant v = g == Geometry::Line ? Variant::CI_A : Variant::PI_A;
    c.variants = {v};
    c.n_range = {40};
    c.delta_range = {0.0};
    const auto r = run_noise_study(c);
    const double err = r.rows.at(0).error_l2;
    o.pass = o.pass && err <= 1e-3;
    d << to_string(v) << " " << sci(err) << "  ";
  }
  o.detail = "rel L2 at N=40, tau=0.3: " + d.str();
  return o;
}

// 6. noise amplification and semi-convergence
Outcome ill_posedness() {
  Outcome o;
  StudyConfig c;
  c.kind = StudyKind::Noise;
  c.tau = 0.3;
  c.variants = {Variant::CI_A, Variant::CI_Classical};
  c.beta_range = {0.7};
  c.n_range.clear();
  for (int n = 2; n <= 40; ++n) c.n_range.push_back(n);
  c.delta_range = {1e-3};
  c.seed = 1;
  const auto r = run_noise_study(c);
  const auto* e6 = r.find(Variant::CI_Classical, 6, 1e-3);
  const auto* e20 = r.find(Variant::CI_Classical, 20, 1e-3);
  const double growth = e6 && e20 ? e20->error_l2 / e6->error_l2 : 0.0;
  const NoiseSummary* s = nullptr;
  for (const auto& ns : r.noise_summary) {
    if (ns.variant == Variant::CI_A) s = &ns;
  }
  const bool interior = s && s->n_star > 2 && s->n_star < 40 && s->u_shape;
  o.pass = growth >= 10.0 && interior;
  o.detail = "seed 1, delta 1e-3: CI-classical err(20)/err(6) = " + sci(growth) + ", CI-A N* = " +
             (s ? std::to_string(s->n_star) + " (err " + sci(s->error_at_n_star) + ")" : "none");
  return o;
}

// |basis_j| weighted moments of |f|, used to judge a coefficient as zero
std::vector<double> absolute_moments(const AnalyticProfile& f, Geometry g, double scale, int n, bool even_only) {
  const double sq = 2.0 * std::sqrt(scale);
  const int top = even_only ? 2 * n : n;
  std::vector<double> out(n + 1, 0.0);
  const auto& rule = gauss_legendre(16);
  const double lo = g == Geometry::Line ? -16.0 : 0.0, hi = 16.0;  // in units of sq
  const int panels = 1024;
  const double width = (hi - lo) / panels;
  std::vector<double> basis(top + 1);
  for (int p = 0; p < panels; ++p) {
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double z = lo + width * (p + 0.5 * (rule.nodes[i] + 1.0));
      const double xi = sq * z;
      const double w = 0.5 * width * sq * rule.weights[i] * std::fabs(f(xi)) * (g == Geometry::Polar ? xi : 1.0);
      if (g == Geometry::Line) {
        hermite_eval_all(z, basis);
      } else {
        w_poly_eval_all(z, basis);
      }
      for (int j = 0; j <= n; ++j) out[j] += w * std::fabs(basis[even_only ? 2 * j : j]);
    }
  }
  if (g == Geometry::Polar && even_only) {
    for (double& m : out) m *= std::numbers::pi;  // angular integral at r = 0
  }
  return out;
}

// 7. beta = a truncation and exact N = 0 series
Outcome exact_truncation() {
  Outcome o;
  const int n = 40;
  double worst_coeff = 0.0, worst_n0 = 0.0;
  std::string worst_where;
  for (double a : {0.7, 1.0, 1.6}) {
    for (double tau : {0.2, 0.5}) {
      for (Variant v : series_variants()) {
        const bool b_form = v == Variant::CD_B || v == Variant::CI_B || v == Variant::PD_B || v == Variant::PI_B;
        if (b_form) continue;
        const Geometry g = geometry_of(v);
        const auto f = AnalyticProfile::gaussian(a, 1.0, 0.0, g);
        const auto data = is_inverse(v) ? *f.evolved(tau) : f;
        const auto target = is_inverse(v) ? f : *f.evolved(tau);
        const KernelParams p{tau, a};
        SeriesOptions opts;
        opts.order = n;
        const auto sol = build_series(v, data, p, 0.0, opts);
        const bool c_form = v == Variant::CD_C || v == Variant::CI_C || v == Variant::PD_C || v == Variant::PI_C;
        const double scale = is_inverse(v) ? tau + a : a;
        const auto norm = absolute_moments(data, g, scale, n, c_form);
        for (int j = 1; j <= n; ++j) {
          const double rel = std::fabs(sol.coeffs[j]) / norm[j];
          if (rel > worst_coeff) {
            worst_coeff = rel;
            worst_where = to_string(v) + " j=" + std::to_string(j);
          }
        }
        SeriesOptions n0;
        n0.order = 0;
        const auto xs = c_form ? std::vector<double>{0.0}
                               : (g == Geometry::Line ? grid(-3.0, 3.0, 13) : grid(0.0, 3.0, 7));
        double umax = 0.0, emax = 0.0;
        for (double x : xs) {
          const double got = series_value(v, data, p, x, n0).value;
          emax = std::max(emax, std::fabs(got - target(x)));
          umax = std::max(umax, std::fabs(target(x)));
        }
        worst_n0 = std::max(worst_n0, emax / umax);
      }
    }
  }
  o.pass = worst_coeff <= 1e-10 && worst_n0 <= 1e-10;
  o.detail = "A/C variants, a in {0.7,1,1.6}: max |c_j|/M_j (j>=1) " + sci(worst_coeff) + " at " + worst_where +
             ", N=0 vs oracle " + sci(worst_n0);
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 8. byte-identical CLI reruns
Outcome determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "heatseries_acceptance";
  std::filesystem::create_directories(dir);
  const std::string exe = HEATSERIES_CLI_PATH;
  const auto data = dir / "u.csv";
  const auto cfg = dir / "noise.ini";
  std::ofstream(cfg) << "[study]\nkind = noise\ntau = 0.3\nvariants = CI-A, CI-classical\nseed = 5\n"
                        "[sweep]\nn = 2:30\ndelta = 0, 1e-3\nbeta = 0.7\n";
  if (std::system((exe + " forward --variant oracle --tau 0.3 --profile gaussian:a=1 --eval-grid -10:10:501 "
                         "--output " + data.string()).c_str()) != 0) {
    return {false, "could not produce input data"};
  }
  const std::vector<std::string> commands = {
      "forward --variant CD-A --tau 0.5 --profile 'mixture:[a=0.7;a=1.3,center=0.5,amp=0.6]'",
      "forward --geometry polar --variant PD-C --tau 0.5 --profile gaussian:a=1 --format json",
      "inverse --variant CI-A --tau 0.3 --input " + data.string() + " --noise 1e-3 --seed 11 --truth gaussian:a=1",
      "validate --constants-mode paper_literal",
      "study --config " + cfg.string() + " --format json",
  };
  int same = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string outs[2];
    for (int k = 0; k < 2; ++k) {
      const auto out = dir / ("run" + std::to_string(i) + "_" + std::to_string(k) + ".txt");
      const int rc = std::system((exe + " " + commands[i] + " > " + out.string() + " 2>/dev/null").c_str());
      outs[k] = rc == 0 ? slurp(out) : "";
    }
    if (!outs[0].empty() && outs[0] == outs[1]) ++same;
  }
  o.pass = same == static_cast<int>(commands.size());
  o.detail = std::to_string(same) + "/" + std::to_string(commands.size()) + " commands byte-identical on rerun";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 special-function identities", special_functions},
      {"2 kernel identities", kernel_identities},
      {"3 formula audit", formula_audit},
      {"4 direct-problem equivalence", direct_equivalence},
      {"5 noiseless inverse round trips", inverse_round_trips},
      {"6 ill-posedness demonstration", ill_posedness},
      {"7 exact-truncation cases", exact_truncation},
      {"8 determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    if (!r.pass) ++failures;
    std::cout << (r.pass ? "PASS " : "FAIL ") << name << ": " << r.detail << std::endl;
  }
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
