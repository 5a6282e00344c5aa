#pragma once

/// Truncated heat-series representations shared by the Cartesian and polar
/// modules: variant tags, constants modes, divergence diagnostics, the
/// evaluable `SeriesSolution`, and the beta selection rule.
///
/// Notation: s = tau + beta. Every variant expands the data in Hermite (line)
/// or W (polar) polynomials at one scale and evaluates at another; see
/// docs/ERRATA.md for where `PaperLiteral` differs from `OracleValidated`.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heatseries/profile.hpp"
#include "heatseries/quad.hpp"
#include "heatseries/specfun.hpp"

namespace heatseries {

enum class Variant {
  CD_A, CD_B, CD_C,
  CI_A, CI_B, CI_C,
  CI_Classical,
  PD_A, PD_B, PD_C,
  PI_A, PI_B, PI_C,
};

std::string to_string(Variant v);
/// Case-insensitive; accepts "CD-A", "cd_a", "CI-classical", ...
std::optional<Variant> parse_variant(const std::string& name);

/// The twelve shifted series (everything except CI-classical), in canonical order.
const std::vector<Variant>& series_variants();
/// All thirteen variants, in canonical order.
const std::vector<Variant>& all_variants();

Geometry geometry_of(Variant v);
bool is_inverse(Variant v);
/// C variants: the coefficients depend on the evaluation point.
bool is_pointwise(Variant v);

enum class ConstantsMode { OracleValidated, PaperLiteral };

std::string to_string(ConstantsMode m);
std::optional<ConstantsMode> parse_constants_mode(const std::string& name);

/// Term-growth monitor. `flagged` iff |term_j| increases for 5 consecutive
/// j >= 4; terms with |term_j| <= 1e-12 * max_{i<j} |term_i| are skipped so
/// parity zeros do not reset the run.
struct DivergenceDiag {
  std::vector<double> term_magnitudes;
  bool flagged = false;
  std::optional<int> first_growth_index;
};

DivergenceDiag diagnose(std::span<const double> terms);

struct SeriesOptions {
  int order = 40;
  ConstantsMode mode = ConstantsMode::OracleValidated;
  QuadSpec quad{};
  /// Drop the tail once every remaining term is below quad.abs_tol (bounded
  /// by a basis envelope); the sum ends 3 terms after the last significant one.
  bool early_stop = true;
};

struct EvalResult {
  double value = 0.0;
  DivergenceDiag diag;
  int terms_used = 0;
};

/// Coefficients of one variant at fixed (tau, beta). For C variants the
/// coefficients belong to the single point `center`.
struct SeriesSolution {
  Variant variant = Variant::CD_A;
  KernelParams params{};
  int order_n = 0;
  std::vector<double> coeffs;
  ConstantsMode constants_mode = ConstantsMode::OracleValidated;
  double center = 0.0;
  bool early_stop = true;
  double abs_tol = 1e-14;
  DivergenceDiag diagnostics;  // term magnitudes at `center`

  /// Throws std::invalid_argument for a C variant evaluated away from `center`.
  EvalResult evaluate(double x) const;
};

/// Coefficients by quadrature (derivatives for CI-classical). `data` is f for
/// direct variants and u(tau, .) for inverse ones.
SeriesSolution build_series(Variant v, const Data& data, const KernelParams& params, double center,
                            const SeriesOptions& opts = {});

/// Coefficients plus evaluation at x (C variants are built at x itself).
EvalResult series_value(Variant v, const Data& data, const KernelParams& params, double x,
                        const SeriesOptions& opts = {});

/// Evaluation on an existing coefficient list.
EvalResult evaluate_series(Variant v, std::span<const double> coeffs, const KernelParams& params, double x,
                           ConstantsMode mode = ConstantsMode::OracleValidated, bool early_stop = true,
                           double abs_tol = 1e-14);

enum class Direction { Direct, Inverse };

/// Shift from a data scale estimate a (see estimate_scale).
/// Direct:  beta = max(a, tau/2)        (expansion scale = data scale)
/// Inverse: beta = max(a - tau, tau/2)  (tau + beta = data scale)
double beta_rule(double a, double tau, Direction d);

/// beta_rule applied to estimate_scale(data).
double auto_beta(const Data& data, Geometry g, double tau, Direction d, const QuadSpec& spec = {});

}  // namespace heatseries
