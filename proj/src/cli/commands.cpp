#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "heatseries/cli.hpp"
#include "heatseries/kernels.hpp"
#include "heatseries/series.hpp"

namespace heatseries::cli {

namespace {

// Numerical failure with the operation and row already in the message.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveArgs {
  std::string geometry = "line";
  std::string variant;
  double tau = 0.0;
  std::string beta = "auto";
  int order = 40;
  std::string profile;
  std::string input;
  std::string eval_grid;  // empty: -3:3:61 (line) or 0:3:61 (polar)
  std::string output = "-";
  std::string format = "csv";
  std::string constants_mode = "oracle_validated";
  bool no_early_stop = false;
  // inverse only
  double noise = 0.0;
  std::uint64_t seed = 1;
  std::string truth;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read `" + path + "`");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void check_output_path(const std::string& path) {
  if (path == "-") return;
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent)) {
    throw ConfigError("output directory `" + parent.string() + "` does not exist");
  }
}

void emit(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
  } else {
    write_atomic(path, content);
  }
}

ConstantsMode constants_mode_of(const std::string& s) {
  const auto m = parse_constants_mode(s);
  if (!m) throw ConfigError("unknown constants mode `" + s + "` (oracle_validated | paper_literal)");
  return *m;
}

std::string variant_list(bool inverse) {
  std::string out;
  for (Variant v : all_variants()) {
    if (is_inverse(v) != inverse) continue;
    if (!out.empty()) out += ", ";
    out += to_string(v);
  }
  if (!inverse) out += ", oracle";
  return out;
}

std::string quad_echo(const QuadSpec& q) {
  return "rel_tol=" + format_double(q.rel_tol) + ",abs_tol=" + format_double(q.abs_tol) +
         ",truncation_radius_sigmas=" + format_double(q.truncation_radius_sigmas) +
         ",max_panels=" + std::to_string(q.max_panels) + ",nodes_per_panel=" + std::to_string(q.nodes_per_panel);
}

int solve(const SolveArgs& a, bool inverse) {
  const Geometry g = parse_geometry(a.geometry);
  const Format fmt = parse_format(a.format);
  const ConstantsMode mode = constants_mode_of(a.constants_mode);
  check_output_path(a.output);

  const bool oracle = !inverse && a.variant == "oracle";
  std::optional<Variant> v;
  if (!oracle) {
    v = parse_variant(a.variant);
    if (!v || is_inverse(*v) != inverse) {
      throw ConfigError("unknown " + std::string(inverse ? "inverse" : "forward") + " variant `" + a.variant +
                        "`; valid: " + variant_list(inverse));
    }
    if (geometry_of(*v) != g) {
      throw ConfigError("variant " + to_string(*v) + " does not match geometry " + to_string(g));
    }
  }
  if (!(a.tau > 0.0) || !std::isfinite(a.tau)) {
    throw ConfigError(oracle ? "tau must be > 0" : "tau must be > 0 for series variants");
  }
  if (a.order < 0) throw ConfigError("order must be >= 0");
  if (a.profile.empty() == a.input.empty()) throw ConfigError("give exactly one of --profile or --input");
  if (a.noise < 0.0 || !std::isfinite(a.noise)) throw ConfigError("noise must be >= 0");
  if (a.noise > 0.0 && a.input.empty()) throw ConfigError("--noise applies to --input data");

  std::vector<std::pair<std::string, std::string>> meta;
  Data data = AnalyticProfile::gaussian(1.0);
  std::string source;
  if (!a.profile.empty()) {
    data = parse_profile(a.profile, g);
    source = "--profile " + std::get<AnalyticProfile>(data).describe();
  } else {
    try {
      Sampled1D s = parse_sampled(read_file(a.input));
      if (g == Geometry::Polar && s.domain.lo < 0.0) throw ConfigError("polar data must start at r >= 0");
      if (a.noise > 0.0) {
        const auto z = standard_normals(a.seed, s.values.size());
        for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] += a.noise * z[i];
      }
      data = std::move(s);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(a.input + ": " + e.what());
    }
    source = "--input " + a.input;
  }
  std::optional<AnalyticProfile> truth;
  if (!a.truth.empty()) truth = parse_profile(a.truth, g);
  const std::string eval_grid = !a.eval_grid.empty() ? a.eval_grid : g == Geometry::Line ? "-3:3:61" : "0:3:61";
  const auto xs = parse_eval_grid(eval_grid);
  if (g == Geometry::Polar && xs.front() < 0.0) throw ConfigError("polar evaluation grid must have r >= 0");

  const QuadSpec quad{};
  double beta = 0.0;
  if (v && *v != Variant::CI_Classical) {
    if (a.beta == "auto") {
      beta = auto_beta(data, g, a.tau, inverse ? Direction::Inverse : Direction::Direct, quad);
    } else {
      char* end = nullptr;
      beta = std::strtod(a.beta.c_str(), &end);
      if (a.beta.empty() || *end != '\0' || !(beta > 0.0) || !std::isfinite(beta)) {
        throw ConfigError("--beta must be `auto` or a number > 0");
      }
    }
  }

  const std::string op = (inverse ? "inverse " : "forward ") + (oracle ? std::string("oracle") : to_string(*v));
  std::vector<double> values(xs.size());
  std::vector<bool> flags(xs.size(), false);
  std::vector<int> used_terms(xs.size(), 0);
  SeriesOptions opts;
  opts.order = a.order;
  opts.mode = mode;
  opts.quad = quad;
  opts.early_stop = !a.no_early_stop;
  const KernelParams params{a.tau, beta};

  std::size_t row = 0;
  std::string where = "row 1";
  try {
    if (oracle) {
      for (; row < xs.size(); ++row) {
        where = "row " + std::to_string(row + 1) + " (x = " + format_double(xs[row]) + ")";
        values[row] = forward(data, g, a.tau, xs[row], quad);
      }
    } else {
      std::optional<SeriesSolution> sol;
      where = "coefficient build";
      if (!is_pointwise(*v)) sol = build_series(*v, data, params, 0.0, opts);
      for (; row < xs.size(); ++row) {
        where = "row " + std::to_string(row + 1) + " (x = " + format_double(xs[row]) + ")";
        const EvalResult r = sol ? sol->evaluate(xs[row]) : series_value(*v, data, params, xs[row], opts);
        values[row] = r.value;
        flags[row] = r.diag.flagged;
        used_terms[row] = r.terms_used;
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(op + ": " + e.what());
  } catch (const std::exception& e) {
    throw NumericFailure(op + " failed at " + where + ": " + e.what());
  }

  Table t;
  std::string command = std::string("heatseries ") + (inverse ? "inverse" : "forward") + " --geometry " + to_string(g) +
                        " --variant " + (oracle ? std::string("oracle") : to_string(*v)) + " --tau " + format_double(a.tau);
  if (v && *v != Variant::CI_Classical) command += " --beta " + format_double(beta);
  if (!oracle) command += " --order " + std::to_string(a.order);
  command += " " + source + " --eval-grid " + eval_grid + " --constants-mode " + to_string(mode) + " --format " +
             to_string(fmt);
  if (a.no_early_stop) command += " --no-early-stop";
  if (inverse && a.noise > 0.0) command += " --noise " + format_double(a.noise) + " --seed " + std::to_string(a.seed);
  if (truth) command += " --truth " + truth->describe();

  meta.emplace_back("command", command);
  meta.emplace_back("library_version", library_version());
  meta.emplace_back("operation", inverse ? "inverse" : "forward");
  meta.emplace_back("geometry", to_string(g));
  meta.emplace_back("variant", oracle ? "oracle" : to_string(*v));
  meta.emplace_back("tau", format_double(a.tau));
  meta.emplace_back("beta_request", a.beta);
  meta.emplace_back("beta", format_double(beta));
  meta.emplace_back("order", std::to_string(a.order));
  meta.emplace_back("source", source);
  meta.emplace_back("eval_grid", eval_grid);
  meta.emplace_back("constants_mode", to_string(mode));
  meta.emplace_back("early_stop", a.no_early_stop ? "false" : "true");
  meta.emplace_back("quad", quad_echo(quad));
  if (inverse) {
    meta.emplace_back("noise", format_double(a.noise));
    meta.emplace_back("seed", std::to_string(a.seed));
    meta.emplace_back("prng", "mt19937_64+box-muller");
  }
  const auto n_flagged = std::count(flags.begin(), flags.end(), true);
  if (n_flagged > 0) {
    meta.emplace_back("warning", "divergence flagged at " + std::to_string(n_flagged) + " of " +
                                     std::to_string(xs.size()) + " points");
    std::cerr << "warning: " << op << ": divergence flagged at " << n_flagged << " points\n";
  }

  t.columns = {g == Geometry::Line ? "x" : "r", "value", "diverged", "terms_used"};
  if (truth) t.columns.emplace_back("truth");
  double e2 = 0.0, t2 = 0.0, emax = 0.0, tmax = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::vector<std::string> r{format_double(xs[i]), format_double(values[i]), flags[i] ? "true" : "false",
                               std::to_string(used_terms[i])};
    if (truth) {
      const double tv = (*truth)(xs[i]);
      r.push_back(format_double(tv));
      const double e = values[i] - tv;
      e2 += e * e;
      t2 += tv * tv;
      emax = std::max(emax, std::fabs(e));
      tmax = std::max(tmax, std::fabs(tv));
    }
    t.rows.push_back(std::move(r));
  }
  if (truth) {
    meta.emplace_back("truth", truth->describe());
    meta.emplace_back("summary.error_l2", format_double(t2 > 0.0 ? std::sqrt(e2 / t2) : std::sqrt(e2)));
    meta.emplace_back("summary.error_max", format_double(tmax > 0.0 ? emax / tmax : emax));
  }
  t.metadata = std::move(meta);
  emit(a.output, render(t, fmt));
  return kExitOk;
}

int validate(const std::string& mode_name, const std::string& output, const std::string& format) {
  StudyConfig c;
  c.kind = StudyKind::Audit;
  c.mode = constants_mode_of(mode_name);
  const Format fmt = parse_format(format.empty() ? "csv" : format);
  check_output_path(output);
  const StudyReport report = run_audit(c);

  bool ok = true;
  std::ostringstream table;
  table << "variant  N  error_max                 result  expected\n";
  for (const auto& r : report.rows) {
    const bool pass = r.pass.value_or(false);
    const bool expected = r.expected_pass.value_or(true);
    if (pass != expected) ok = false;
    char line[160];
    std::snprintf(line, sizeof line, "%-8s %d  %-24s  %-6s  %s%s\n", to_string(r.variant).c_str(), r.n,
                  format_double(r.error_max).c_str(), pass ? "pass" : "FAIL", expected ? "pass" : "fail",
                  pass == expected ? "" : "  <-- unexpected");
    table << line;
  }
  table << (ok ? "audit: all outcomes as expected" : "audit: unexpected outcomes") << " (" << to_string(c.mode) << ")\n";
  if (output.empty() && format.empty()) {
    std::cout << table.str();
  } else {
    std::cerr << table.str();
    emit(output.empty() ? "-" : output, render(study_table(report, false), fmt));
  }
  return ok ? kExitOk : kExitAudit;
}

int study(const std::string& config_path, const std::string& output, const std::string& format) {
  const StudyConfig c = parse_study_config(read_file(config_path));
  const Format fmt = parse_format(format);
  check_output_path(output);
  const StudyReport report = run_study(c);
  Table t = study_table(report, c.timing);
  t.metadata.insert(t.metadata.begin(), {"config", config_path});
  emit(output, render(t, fmt));
  return kExitOk;
}

void add_solve_options(CLI::App* cmd, SolveArgs& a, bool inverse) {
  cmd->add_option("--geometry", a.geometry, "line | polar")->capture_default_str();
  cmd->add_option("--variant", a.variant, inverse ? "CI-A ... PI-C, CI-classical" : "CD-A ... PD-C, oracle")->required();
  cmd->add_option("--tau", a.tau, "evolution time (> 0)")->required();
  cmd->add_option("--beta", a.beta, "shift: auto or a value > 0")->capture_default_str();
  cmd->add_option("--order", a.order, "truncation order N")->capture_default_str();
  auto* p = cmd->add_option("--profile", a.profile, "analytic profile, e.g. gaussian:a=1");
  auto* i = cmd->add_option("--input", a.input, "sampled data file (x,value rows)");
  p->excludes(i);
  cmd->add_option("--eval-grid", a.eval_grid, "a:b:n [default -3:3:61, polar 0:3:61]");
  cmd->add_option("--output", a.output, "output file, - for stdout")->capture_default_str();
  cmd->add_option("--format", a.format, "csv | json")->capture_default_str();
  cmd->add_option("--constants-mode", a.constants_mode, "oracle_validated | paper_literal")->capture_default_str();
  cmd->add_flag("--no-early-stop", a.no_early_stop, "sum all N + 1 terms");
  if (inverse) {
    cmd->add_option("--noise", a.noise, "std-dev of additive Gaussian noise on --input samples")->capture_default_str();
    cmd->add_option("--seed", a.seed, "noise seed")->capture_default_str();
    cmd->add_option("--truth", a.truth, "reference profile for the error summary");
  }
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"heatseries: shifted heat-series solvers and studies"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  SolveArgs fwd, inv;
  auto* forward_cmd = app.add_subcommand("forward", "evolve a profile forward by tau");
  add_solve_options(forward_cmd, fwd, false);
  auto* inverse_cmd = app.add_subcommand("inverse", "recover the initial profile from u(tau, .)");
  add_solve_options(inverse_cmd, inv, true);

  std::string v_mode = "oracle_validated", v_output, v_format;
  auto* validate_cmd = app.add_subcommand("validate", "audit every series constant at N = 0, 1, 2");
  validate_cmd->add_option("--constants-mode", v_mode, "oracle_validated | paper_literal")->capture_default_str();
  validate_cmd->add_option("--output", v_output, "also write the audit report here");
  validate_cmd->add_option("--format", v_format, "csv | json; without --output the report goes to stdout");

  std::string s_config, s_output = "-", s_format = "csv";
  auto* study_cmd = app.add_subcommand("study", "run a study from a config file");
  study_cmd->add_option("--config", s_config, "study config file")->required();
  study_cmd->add_option("--output", s_output, "output file, - for stdout")->capture_default_str();
  study_cmd->add_option("--format", s_format, "csv | json")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*forward_cmd) return solve(fwd, false);
    if (*inverse_cmd) return solve(inv, true);
    if (*validate_cmd) return validate(v_mode, v_output, v_format);
    if (*study_cmd) return study(s_config, s_output, s_format);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitConfig;
}

}  // namespace heatseries::cli
