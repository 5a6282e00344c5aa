#include "heatseries/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <sstream>

namespace heatseries {

void QuadSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("QuadSpec: tolerances must be > 0");
  }
  if (!(truncation_radius_sigmas >= 6.0)) {
    throw std::invalid_argument("QuadSpec: truncation_radius_sigmas must be >= 6");
  }
  if (max_panels < 4) throw std::invalid_argument("QuadSpec: max_panels must be >= 4");
  if (nodes_per_panel < 2) throw std::invalid_argument("QuadSpec: nodes_per_panel must be >= 2");
}

IntegrandDomain IntegrandDomain::finite(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("IntegrandDomain: finite interval requires a < b");
  IntegrandDomain d;
  d.kind = Kind::FiniteInterval;
  d.a = a;
  d.b = b;
  return d;
}

IntegrandDomain IntegrandDomain::whole_line(double decay_scale, double center) {
  if (!(decay_scale > 0.0)) throw std::invalid_argument("IntegrandDomain: decay_scale must be > 0");
  IntegrandDomain d;
  d.kind = Kind::WholeLine;
  d.decay_scale = decay_scale;
  d.center = center;
  return d;
}

IntegrandDomain IntegrandDomain::half_line(double decay_scale) {
  if (!(decay_scale > 0.0)) throw std::invalid_argument("IntegrandDomain: decay_scale must be > 0");
  IntegrandDomain d;
  d.kind = Kind::HalfLine;
  d.decay_scale = decay_scale;
  return d;
}

Interval IntegrandDomain::truncated(const QuadSpec& spec) const {
  const double radius = spec.truncation_radius_sigmas * decay_scale;
  switch (kind) {
    case Kind::FiniteInterval:
      return {a, b};
    case Kind::WholeLine:
      return {center - radius, center + radius};
    case Kind::HalfLine:
      return {0.0, radius};
  }
  return {a, b};
}

namespace {

GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

struct Panel {
  double lo;
  double hi;
  std::vector<double> value;  // fine (two-half) estimate
  std::vector<double> err;
  std::vector<double> abs_value;
};

void apply_rule(const BatchIntegrand& f, const GaussRule& rule, double lo, double hi,
                std::span<double> buf, std::span<double> sum, std::span<double> abs_sum) {
  std::fill(sum.begin(), sum.end(), 0.0);
  std::fill(abs_sum.begin(), abs_sum.end(), 0.0);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    f(mid + half * rule.nodes[i], buf);
    const double w = half * rule.weights[i];
    for (std::size_t k = 0; k < sum.size(); ++k) {
      sum[k] += w * buf[k];
      abs_sum[k] += w * std::fabs(buf[k]);
    }
  }
}

class Engine {
 public:
  Engine(const BatchIntegrand& f, std::size_t m, const QuadSpec& spec)
      : f_(f), m_(m), rule_(gauss_legendre(spec.nodes_per_panel)),
        buf_(m), coarse_(m), left_(m), right_(m), abs_l_(m), abs_r_(m), scratch_(m) {}

  Panel make_panel(double lo, double hi) {
    apply_rule(f_, rule_, lo, hi, buf_, coarse_, scratch_);
    const double mid = 0.5 * (lo + hi);
    apply_rule(f_, rule_, lo, mid, buf_, left_, abs_l_);
    apply_rule(f_, rule_, mid, hi, buf_, right_, abs_r_);
    Panel p{lo, hi, std::vector<double>(m_), std::vector<double>(m_), std::vector<double>(m_)};
    for (std::size_t k = 0; k < m_; ++k) {
      p.value[k] = left_[k] + right_[k];
      p.err[k] = std::fabs(coarse_[k] - p.value[k]);
      p.abs_value[k] = abs_l_[k] + abs_r_[k];
      if (!std::isfinite(p.value[k])) {
        std::ostringstream msg;
        msg << "integrate: non-finite integrand on [" << lo << ", " << hi << "]";
        throw std::domain_error(msg.str());
      }
    }
    return p;
  }

 private:
  const BatchIntegrand& f_;
  std::size_t m_;
  const GaussRule& rule_;
  std::vector<double> buf_, coarse_, left_, right_, abs_l_, abs_r_, scratch_;
};

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

BatchQuadResult integrate_batch(const BatchIntegrand& f, std::size_t m, Interval range,
                                std::span<const double> breakpoints, const QuadSpec& spec) {
  spec.validate();
  BatchQuadResult result{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
  if (m == 0 || range.empty()) return result;

  std::vector<double> edges{range.lo};
  std::vector<double> inner;
  for (double b : breakpoints) {
    if (b > range.lo && b < range.hi) inner.push_back(b);
  }
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  edges.insert(edges.end(), inner.begin(), inner.end());
  edges.push_back(range.hi);
  // At least four initial panels so narrow features are sampled.
  while (edges.size() < 5) {
    std::vector<double> finer{edges.front()};
    for (std::size_t i = 1; i < edges.size(); ++i) {
      finer.push_back(0.5 * (edges[i - 1] + edges[i]));
      finer.push_back(edges[i]);
    }
    edges.swap(finer);
  }

  Engine engine(f, m, spec);
  std::vector<Panel> panels;
  panels.reserve(edges.size() - 1 + static_cast<std::size_t>(spec.max_panels));
  std::vector<double> total(m, 0.0), total_err(m, 0.0), total_abs(m, 0.0);
  for (std::size_t i = 1; i < edges.size(); ++i) {
    panels.push_back(engine.make_panel(edges[i - 1], edges[i]));
  }
  for (const auto& p : panels) {
    for (std::size_t k = 0; k < m; ++k) {
      total[k] += p.value[k];
      total_err[k] += p.err[k];
      total_abs[k] += p.abs_value[k];
    }
  }

  constexpr double kEps = std::numeric_limits<double>::epsilon();
  std::vector<double> tol(m);
  auto refresh_tol = [&] {
    for (std::size_t k = 0; k < m; ++k) {
      tol[k] = std::max({spec.abs_tol, spec.rel_tol * std::fabs(total[k]), 64.0 * kEps * total_abs[k]});
    }
  };
  auto converged = [&] {
    for (std::size_t k = 0; k < m; ++k) {
      if (total_err[k] > tol[k]) return false;
    }
    return true;
  };
  auto badness = [&](const Panel& p) {
    double worst = 0.0;
    for (std::size_t k = 0; k < m; ++k) worst = std::max(worst, p.err[k] / tol[k]);
    return worst;
  };

  refresh_tol();
  // (badness, -lo) so ties resolve deterministically towards the left.
  using Key = std::pair<double, double>;
  std::priority_queue<std::pair<Key, std::size_t>> queue;
  std::vector<bool> alive(panels.size(), true);
  for (std::size_t i = 0; i < panels.size(); ++i) queue.push({{badness(panels[i]), -panels[i].lo}, i});

  int splits = 0;
  while (!converged() && splits < spec.max_panels && !queue.empty()) {
    const std::size_t idx = queue.top().second;
    queue.pop();
    if (!alive[idx]) continue;
    const Panel parent = panels[idx];
    alive[idx] = false;
    const double mid = 0.5 * (parent.lo + parent.hi);
    if (!(mid > parent.lo && mid < parent.hi)) continue;
    Panel children[2] = {engine.make_panel(parent.lo, mid), engine.make_panel(mid, parent.hi)};
    for (std::size_t k = 0; k < m; ++k) {
      total[k] += children[0].value[k] + children[1].value[k] - parent.value[k];
      total_err[k] += children[0].err[k] + children[1].err[k] - parent.err[k];
      total_abs[k] += children[0].abs_value[k] + children[1].abs_value[k] - parent.abs_value[k];
    }
    refresh_tol();
    for (auto& c : children) {
      panels.push_back(std::move(c));
      alive.push_back(true);
      queue.push({{badness(panels.back()), -panels.back().lo}, panels.size() - 1});
    }
    ++splits;
  }

  // Canonical summation order: ascending panel position.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    if (alive[i]) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return panels[a].lo < panels[b].lo; });
  for (std::size_t k = 0; k < m; ++k) {
    double v = 0.0;
    double e = 0.0;
    for (std::size_t i : order) {
      v += panels[i].value[k];
      e += panels[i].err[k];
    }
    result.values[k] = v;
    result.err_estimates[k] = e;
    total[k] = v;
    total_err[k] = e;
  }
  refresh_tol();
  if (!converged()) {
    std::ostringstream msg;
    msg << "integrate: accuracy not reached after " << splits << " bisections on [" << range.lo << ", "
        << range.hi << "]";
    throw AccuracyNotReached(msg.str(), result);
  }
  return result;
}

QuadResult integrate(const Integrand& f, Interval range, std::span<const double> breakpoints,
                     const QuadSpec& spec) {
  const BatchIntegrand wrapped = [&f](double x, std::span<double> out) { out[0] = f(x); };
  auto r = integrate_batch(wrapped, 1, range, breakpoints, spec);
  return {r.values[0], r.err_estimates[0]};
}

QuadResult integrate(const Integrand& f, const IntegrandDomain& domain, const QuadSpec& spec) {
  return integrate(f, domain.truncated(spec), {}, spec);
}

double hermite_moment(int j, double c) {
  if (j < 0) throw std::invalid_argument("hermite_moment: order must be >= 0");
  if (!(c > 0.0)) throw std::invalid_argument("hermite_moment: c must be > 0");
  if (j % 2 == 1) return 0.0;
  const int k = j / 2;
  const double ratio = (1.0 - c) / c;
  double v = std::sqrt(std::numbers::pi / c);
  // (2k)!/k! = prod_{i=1..k} 2(2i-1)
  for (int i = 1; i <= k; ++i) v *= ratio * 2.0 * (2.0 * i - 1.0);
  return v;
}

double w_moment(int j, double c) {
  if (j < 0) throw std::invalid_argument("w_moment: order must be >= 0");
  if (!(c > 0.0)) throw std::invalid_argument("w_moment: c must be > 0");
  double v = 1.0 / c;
  const double ratio = (c - 1.0) / c;
  // (-1)^j (2j)!/j! = prod_{i=1..j} -2(2i-1)
  for (int i = 1; i <= j; ++i) v *= -2.0 * (2.0 * i - 1.0) * ratio;
  return v;
}

}  // namespace heatseries
