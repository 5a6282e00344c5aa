#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "heatseries/cli.hpp"

namespace heatseries::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::optional<double> as_double(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = t.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

double need_double(const std::string& s, const std::string& what) {
  const auto v = as_double(s);
  if (!v || !std::isfinite(*v)) throw ConfigError(what + ": expected a number, got `" + s + "`");
  return *v;
}

long long need_int(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(what + ": expected an integer, got `" + s + "`");
  }
  return v;
}

bool need_bool(const std::string& s, const std::string& what) {
  const std::string t = lower(trim(s));
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(what + ": expected true/false, got `" + s + "`");
}

using Keys = std::map<std::string, std::string>;

Keys parse_keys(const std::string& body, const std::string& what) {
  Keys out;
  if (trim(body).empty()) return out;
  for (const auto& item : split(body, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError(what + ": expected key=value, got `" + item + "`");
    const std::string key = lower(trim(item.substr(0, eq)));
    if (out.count(key)) throw ConfigError(what + ": duplicate key `" + key + "`");
    out[key] = trim(item.substr(eq + 1));
  }
  return out;
}

double take(Keys& k, const std::string& key, std::optional<double> fallback, const std::string& what) {
  const auto it = k.find(key);
  if (it == k.end()) {
    if (!fallback) throw ConfigError(what + ": missing `" + key + "`");
    return *fallback;
  }
  const double v = need_double(it->second, what + " " + key);
  k.erase(it);
  return v;
}

void no_leftovers(const Keys& k, const std::string& what) {
  if (!k.empty()) throw ConfigError(what + ": unknown key `" + k.begin()->first + "`");
}

Gaussian gaussian_from(Keys k, const std::string& what) {
  Gaussian g;
  g.width_a = take(k, "a", std::nullopt, what);
  g.center = take(k, "center", 0.0, what);
  g.amplitude = take(k, "amp", 1.0, what);
  no_leftovers(k, what);
  return g;
}

std::string bracketed(const std::string& body, const std::string& what) {
  const std::string t = trim(body);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') throw ConfigError(what + ": expected `[...]`");
  return t.substr(1, t.size() - 2);
}

std::vector<double> number_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(need_double(item, what));
  return out;
}

// `a:b` inclusive integer range or a comma list.
std::vector<int> order_list(const std::string& s, const std::string& what) {
  std::vector<int> out;
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 2) throw ConfigError(what + ": expected `a:b` or a list");
    const auto a = need_int(parts[0], what), b = need_int(parts[1], what);
    if (b < a || b - a > 100000) throw ConfigError(what + ": bad range");
    for (auto n = a; n <= b; ++n) out.push_back(static_cast<int>(n));
    return out;
  }
  for (const auto& item : split(s, ',')) out.push_back(static_cast<int>(need_int(item, what)));
  return out;
}

nlohmann::ordered_json cell_json(const std::string& c) {
  if (c.empty()) return nullptr;
  if (c == "true") return true;
  if (c == "false") return false;
  if (c.find_first_not_of("0123456789-") == std::string::npos && c.size() < 16) {
    long long i = 0;
    const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), i);
    if (ec == std::errc() && ptr == c.data() + c.size()) return i;
  }
  if (const auto v = as_double(c); v && c.find_first_not_of("0123456789+-.eE") == std::string::npos) {
    if (std::isfinite(*v)) return *v;
  }
  if (c == "nan" || c == "inf" || c == "-inf") return nullptr;
  return c;
}

}  // namespace

std::string to_string(Format f) { return f == Format::Csv ? "csv" : "json"; }

Format parse_format(const std::string& s) {
  const std::string t = lower(trim(s));
  if (t == "csv") return Format::Csv;
  if (t == "json") return Format::Json;
  throw ConfigError("unknown format `" + s + "` (csv | json)");
}

Geometry parse_geometry(const std::string& s) {
  const std::string t = lower(trim(s));
  if (t == "line") return Geometry::Line;
  if (t == "polar") return Geometry::Polar;
  throw ConfigError("unknown geometry `" + s + "` (line | polar)");
}

AnalyticProfile parse_profile(const std::string& spec, Geometry g) {
  const std::string what = "profile `" + spec + "`";
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError(what + ": expected kind:key=value,...");
  const std::string kind = lower(trim(spec.substr(0, colon)));
  const std::string body = spec.substr(colon + 1);
  try {
    if (kind == "gaussian") return AnalyticProfile(gaussian_from(parse_keys(body, what), what), g);
    if (kind == "mixture") {
      Mixture m;
      for (const auto& part : split(bracketed(body, what), ';')) {
        m.components.push_back(gaussian_from(parse_keys(part, what), what));
      }
      return AnalyticProfile(m, g);
    }
    if (kind == "bump") {
      auto k = parse_keys(body, what);
      Bump b;
      b.center = take(k, "center", 0.0, what);
      b.radius = take(k, "radius", 1.0, what);
      b.amplitude = take(k, "amp", 1.0, what);
      no_leftovers(k, what);
      return AnalyticProfile(b, g);
    }
    if (kind == "mode") {
      auto k = parse_keys(body, what);
      Mode m;
      const double order = take(k, "order", 0.0, what);
      if (order != std::floor(order) || order < 0 || order > 1000) throw ConfigError(what + ": order must be a small integer");
      m.order = static_cast<int>(order);
      m.width_a = take(k, "a", std::nullopt, what);
      m.center = take(k, "center", 0.0, what);
      m.amplitude = take(k, "amp", 1.0, what);
      no_leftovers(k, what);
      return AnalyticProfile(m, g);
    }
    if (kind == "poly") {
      Polynomial p;
      for (const auto& c : split(bracketed(body, what), ';')) p.coefficients.push_back(need_double(c, what));
      return AnalyticProfile(p, g);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(what + ": " + e.what());
  }
  throw ConfigError(what + ": unknown kind `" + kind + "` (gaussian | mixture | bump | mode | poly)");
}

std::vector<double> parse_eval_grid(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw ConfigError("eval grid `" + s + "`: expected a:b:n");
  const double a = need_double(parts[0], "eval grid");
  const double b = need_double(parts[1], "eval grid");
  const auto n = need_int(parts[2], "eval grid");
  if (n < 1 || n > 10000000) throw ConfigError("eval grid: n must be >= 1");
  if (n > 1 && !(b > a)) throw ConfigError("eval grid: need a < b when n > 1");
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return xs;
}

StudyConfig parse_study_config(const std::string& text) {
  StudyConfig c;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  std::optional<std::pair<int, std::string>> profile, variants, beta;
  std::map<std::string, int> seen;
  bool have_kind = false;
  std::optional<double> grid_lo, grid_hi;
  std::optional<int> grid_n;
  auto at = [](int n) { return "config line " + std::to_string(n); };

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(at(lineno) + ": malformed section marker `" + t + "`");
      section = lower(trim(t.substr(1, t.size() - 2)));
      if (section != "study" && section != "grid" && section != "sweep") {
        throw ConfigError(at(lineno) + ": unknown section `" + section + "`");
      }
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(at(lineno) + ": expected `key = value`");
    if (section.empty()) throw ConfigError(at(lineno) + ": key outside a section");
    const std::string key = lower(trim(t.substr(0, eq)));
    const std::string value = trim(t.substr(eq + 1));
    const std::string full = section + "." + key;
    if (seen.count(full)) {
      throw ConfigError(at(lineno) + ": duplicate key `" + full + "` (first on line " + std::to_string(seen[full]) + ")");
    }
    seen[full] = lineno;
    const std::string what = at(lineno) + " (" + full + ")";
    try {
      if (full == "study.kind") {
        const auto k = parse_study_kind(lower(value));
        if (!k) throw ConfigError("unknown study kind `" + value + "` (audit | convergence | beta_map | noise | classical_compare)");
        c.kind = *k;
        have_kind = true;
      } else if (full == "study.geometry") {
        c.geometry = parse_geometry(value);
      } else if (full == "study.profile") {
        profile = {lineno, value};
      } else if (full == "study.tau") {
        c.tau = need_double(value, "tau");
      } else if (full == "study.variants") {
        variants = {lineno, value};
      } else if (full == "study.constants_mode") {
        const auto m = parse_constants_mode(lower(value));
        if (!m) throw ConfigError("unknown constants mode `" + value + "` (oracle_validated | paper_literal)");
        c.mode = *m;
      } else if (full == "study.seed") {
        const auto s = need_int(value, "seed");
        if (s < 0) throw ConfigError("seed must be >= 0");
        c.seed = static_cast<std::uint64_t>(s);
      } else if (full == "study.early_stop") {
        c.early_stop = need_bool(value, "early_stop");
      } else if (full == "study.timing") {
        c.timing = need_bool(value, "timing");
      } else if (full == "study.sampled") {
        c.sampled = need_bool(value, "sampled");
      } else if (full == "study.eval_interval") {
        const auto parts = split(value, ':');
        if (parts.size() != 2) throw ConfigError("expected a:b");
        c.eval_interval = Interval{need_double(parts[0], "eval_interval"), need_double(parts[1], "eval_interval")};
        if (!(c.eval_interval->hi > c.eval_interval->lo)) throw ConfigError("eval_interval needs a < b");
      } else if (full == "study.eval_points") {
        c.eval_points = static_cast<int>(need_int(value, "eval_points"));
      } else if (full == "study.quad_rel_tol") {
        c.quad.rel_tol = need_double(value, "quad_rel_tol");
      } else if (full == "study.quad_abs_tol") {
        c.quad.abs_tol = need_double(value, "quad_abs_tol");
      } else if (full == "grid.lo") {
        grid_lo = need_double(value, "grid lo");
      } else if (full == "grid.hi") {
        grid_hi = need_double(value, "grid hi");
      } else if (full == "grid.n") {
        grid_n = static_cast<int>(need_int(value, "grid n"));
      } else if (full == "sweep.n") {
        c.n_range = order_list(value, "n");
      } else if (full == "sweep.delta") {
        c.delta_range = number_list(value, "delta");
      } else if (full == "sweep.beta") {
        beta = {lineno, value};
      } else {
        throw ConfigError("unknown key");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(what + ": " + e.what());
    }
  }
  if (!have_kind) throw ConfigError("config: missing `kind` in [study]");

  auto resolve = [&](const std::optional<std::pair<int, std::string>>& item, const std::string& key, auto&& fn) {
    if (!item) return;
    try {
      fn(item->second);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(at(item->first) + " (" + key + "): " + e.what());
    }
  };
  if (grid_lo || grid_hi || grid_n) {
    GridSpec g = default_grid(c.geometry);
    g.lo = grid_lo.value_or(g.lo);
    g.hi = grid_hi.value_or(g.hi);
    g.n = grid_n.value_or(g.n);
    c.grid = g;
  }
  c.profile = AnalyticProfile::gaussian(1.0, 1.0, 0.0, c.geometry);
  resolve(profile, "study.profile", [&](const std::string& v) { c.profile = parse_profile(v, c.geometry); });
  resolve(variants, "study.variants", [&](const std::string& v) {
    for (const auto& name : split(v, ',')) {
      const auto var = parse_variant(name);
      if (!var) throw ConfigError("unknown variant `" + name + "`");
      c.variants.push_back(*var);
    }
  });
  resolve(beta, "sweep.beta", [&](const std::string& v) {
    if (lower(v) != "auto") c.beta_range = number_list(v, "beta");
  });
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const Table& t) {
  for (const auto& [k, v] : t.metadata) os << "# " << k << " = " << v << "\n";
  for (const auto& [name, items] : t.sections) {
    for (const auto& item : items) {
      os << "# " << name << ":";
      for (const auto& [k, v] : item) os << " " << k << "=" << v;
      os << "\n";
    }
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string& cell = row[i];
      const bool quote = cell.find_first_of(",\"\n") != std::string::npos;
      if (i) os << ",";
      if (quote) {
        os << '"';
        for (char ch : cell) os << (ch == '"' ? std::string("\"\"") : std::string(1, ch));
        os << '"';
      } else {
        os << cell;
      }
    }
    os << "\n";
  }
}

void write_json(std::ostream& os, const Table& t) {
  nlohmann::ordered_json j;
  auto& meta = j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.metadata) meta[k] = v;
  j["columns"] = t.columns;
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& cell : row) r.push_back(cell_json(cell));
    rows.push_back(std::move(r));
  }
  for (const auto& [name, items] : t.sections) {
    auto& arr = j[name] = nlohmann::ordered_json::array();
    for (const auto& item : items) {
      nlohmann::ordered_json o = nlohmann::ordered_json::object();
      for (const auto& [k, v] : item) o[k] = cell_json(v);
      arr.push_back(std::move(o));
    }
  }
  os << j.dump(2) << "\n";
}

std::string render(const Table& t, Format f) {
  std::ostringstream os;
  if (f == Format::Csv) {
    write_csv(os, t);
  } else {
    write_json(os, t);
  }
  return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write `" + tmp.string() + "`");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for `" + tmp.string() + "`");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot rename onto `" + path + "`");
  }
}

Table study_table(const StudyReport& report, bool timing) {
  Table t;
  t.metadata = report.metadata;
  t.metadata.emplace_back("timing", timing ? "true" : "false");
  const bool audit = !report.rows.empty() && report.rows.front().mode.has_value();
  t.columns = {"variant", "N", "beta", "delta", "error_l2", "error_max", "diverged", "failure"};
  if (audit) {
    for (const char* c : {"constants_mode", "pass", "expected_pass", "ratio"}) t.columns.emplace_back(c);
  }
  if (timing) t.columns.emplace_back("runtime_ms");
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  for (const auto& r : report.rows) {
    std::vector<std::string> row{to_string(r.variant),
                                 std::to_string(r.n),
                                 format_double(r.beta),
                                 format_double(r.delta),
                                 format_double(r.error_l2),
                                 format_double(r.error_max),
                                 b(r.diverged),
                                 r.failure.value_or("")};
    if (audit) {
      row.push_back(r.mode ? to_string(*r.mode) : "");
      row.push_back(r.pass ? b(*r.pass) : "");
      row.push_back(r.expected_pass ? b(*r.expected_pass) : "");
      row.push_back(r.ratio ? format_double(*r.ratio) : "");
    }
    if (timing) row.push_back(format_double(r.runtime_ms));
    t.rows.push_back(std::move(row));
  }
  if (!report.noise_summary.empty()) {
    auto& items = t.sections.emplace_back("noise_summary", decltype(t.sections)::value_type::second_type{}).second;
    for (const auto& s : report.noise_summary) {
      items.push_back({{"variant", to_string(s.variant)},
                       {"beta", format_double(s.beta)},
                       {"delta", format_double(s.delta)},
                       {"n_star", std::to_string(s.n_star)},
                       {"error_l2_at_n_star", format_double(s.error_at_n_star)},
                       {"u_shape", b(s.u_shape)}});
    }
  }
  return t;
}

}  // namespace heatseries::cli
