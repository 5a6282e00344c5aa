#pragma once

/// Reproducible studies over the series variants: constant audit,
/// convergence in N, beta sensitivity, noise (semi-convergence) and the
/// classical-vs-shifted inverse comparison.
///
/// Every row is produced by `run_cell`, so any (variant, N, beta, delta) can be
/// recomputed in isolation. Noise is additive i.i.d. Gaussian on grid samples,
/// drawn from mt19937_64 with Box-Muller so streams are identical across
/// standard libraries.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heatseries/profile.hpp"
#include "heatseries/series.hpp"

namespace heatseries {

std::string library_version();

enum class StudyKind { Audit, Convergence, BetaMap, Noise, ClassicalCompare };

std::string to_string(StudyKind k);
std::optional<StudyKind> parse_study_kind(const std::string& name);

/// Uniform sampling grid for data handed to inverse/noisy solves.
struct GridSpec {
  double lo = -10.0;
  double hi = 10.0;
  int n = 501;
};

/// [-10, 10] with 501 nodes (line) or [0, 10] with 251 nodes (polar), spacing 0.04.
GridSpec default_grid(Geometry g);

struct StudyConfig {
  StudyKind kind = StudyKind::Convergence;
  Geometry geometry = Geometry::Line;
  AnalyticProfile profile = AnalyticProfile::gaussian(1.0);
  double tau = 0.3;
  std::vector<Variant> variants;  // empty: default set for the kind
  std::vector<int> n_range{40};
  std::vector<double> delta_range{0.0};
  std::vector<double> beta_range;  // empty: beta_rule
  std::optional<GridSpec> grid;  // empty: default_grid(geometry)
  /// Use grid samples even when delta == 0.
  bool sampled = false;
  std::uint64_t seed = 1;
  ConstantsMode mode = ConstantsMode::OracleValidated;
  QuadSpec quad{};
  bool early_stop = true;
  /// Reconstruction/evaluation grid; defaults [-3, 3] (line) or [0, 3] (polar).
  std::optional<Interval> eval_interval;
  int eval_points = 61;
  bool timing = false;

  void validate() const;
  Interval evaluation_interval() const;
  GridSpec sampling_grid() const;
  std::vector<Variant> effective_variants() const;
  bool uses_samples(double delta) const;
};

struct StudyRow {
  Variant variant = Variant::CD_A;
  int n = 0;
  double beta = 0.0;  // 0 for CI-classical
  double delta = 0.0;
  double error_l2 = 0.0;   // relative discrete L2 on the evaluation grid
  double error_max = 0.0;  // max |error| / max |truth|
  bool diverged = false;
  std::optional<std::string> failure;
  double runtime_ms = 0.0;

  // Audit rows only.
  std::optional<ConstantsMode> mode;
  std::optional<bool> pass;
  std::optional<bool> expected_pass;
  std::optional<double> ratio;  // series / oracle at the centre (C variants)
};

struct NoiseSummary {
  Variant variant = Variant::CI_A;
  double beta = 0.0;
  double delta = 0.0;
  int n_star = 0;
  double error_at_n_star = 0.0;
  bool u_shape = false;
};

struct StudyReport {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<StudyRow> rows;
  std::vector<NoiseSummary> noise_summary;

  /// Row lookup; nullptr when absent.
  const StudyRow* find(Variant v, int n, double delta, std::optional<double> beta = std::nullopt) const;
};

/// Standard normal stream for `seed`, length n (mt19937_64 + Box-Muller).
std::vector<double> standard_normals(std::uint64_t seed, std::size_t n);

/// Data handed to a variant: f for direct, u(tau, .) for inverse; sampled on
/// the config grid with noise delta * standard_normals(seed) when required.
Data study_data(const StudyConfig& config, Variant v, double delta);

/// Ground truth on the evaluation grid: u(tau, .) for direct, f for inverse.
std::vector<double> study_truth(const StudyConfig& config, Variant v);

/// beta used for a variant when config.beta_range is empty.
double study_beta(const StudyConfig& config, Variant v, double delta);

/// One report row. Numeric failures become a row with `failure` set.
StudyRow run_cell(const StudyConfig& config, Variant v, int n, double beta, double delta);

StudyReport run_audit(const StudyConfig& config);
StudyReport run_noise_study(const StudyConfig& config);
StudyReport run_convergence(const StudyConfig& config);
StudyReport run_beta_map(const StudyConfig& config);
StudyReport run_classical_compare(const StudyConfig& config);

/// Dispatch on config.kind.
StudyReport run_study(const StudyConfig& config);

/// Audit expectation: every variant passes in oracle_validated mode; in
/// paper_literal mode CD-B, CD-C, CI-C, PD-B, PD-C, PI-B and PI-C fail.
bool audit_expected_pass(Variant v, ConstantsMode mode);

/// Printed / corrected constant for C variants at truncation order n with the
/// audit parameters (tau, beta); nullopt for other variants.
std::optional<double> literal_constant_ratio(Variant v, int n, double tau, double beta);

/// Parameters the audit uses.
inline constexpr double kAuditTau = 0.5;
inline constexpr double kAuditBeta = 1.0;
inline constexpr double kAuditTolerance = 1e-9;

}  // namespace heatseries
