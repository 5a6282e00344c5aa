#pragma once

#include <span>
#include <vector>

#include "heatseries/series.hpp"

namespace heatseries::detail {

// A: unweighted moments at scale E, kernel-prefixed sum at scale K.
// B: kernel-weighted moments at scale W, plain sum at scale E.
// C: pointwise even moments at scale E, constants at scale K.
enum class Form { A, B, C, Classical };

struct Plan {
  Form form = Form::A;
  Geometry geometry = Geometry::Line;
  double moment_scale = 0.0;  // E (A, C) or W (B)
  double eval_scale = 0.0;    // K (A, C) or E (B); tau for Classical
  double power_scale = 0.0;   // A only: numerator scale of the term ratio
  bool literal = false;
  bool inverse = false;
};

Plan make_plan(Variant v, const KernelParams& params, ConstantsMode mode);

std::vector<double> moments(const Plan& plan, const Data& data, int n, double center, const QuadSpec& spec);

EvalResult sum_series(const Plan& plan, std::span<const double> coeffs, double x, bool early_stop, double abs_tol);

}  // namespace heatseries::detail
