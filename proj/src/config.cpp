#include "harnack/config.hpp"

#include "harnack/oracles.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace harnack {

namespace {

constexpr double kPi = std::numbers::pi;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

/// factor ('*' | '/') factor ..., factor = ['-'] (number | pi).
class NumberParser {
 public:
  explicit NumberParser(std::string_view s) : s_(s) {}

  std::optional<double> parse() {
    auto v = factor();
    if (!v) return std::nullopt;
    while (true) {
      skip();
      if (pos_ == s_.size()) return v;
      const char op = s_[pos_];
      if (op != '*' && op != '/') return std::nullopt;
      ++pos_;
      const auto rhs = factor();
      if (!rhs) return std::nullopt;
      v = op == '*' ? *v * *rhs : *v / *rhs;
    }
  }

 private:
  void skip() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  std::optional<double> factor() {
    skip();
    double sign = 1.0;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      if (s_[pos_] == '-') sign = -1.0;
      ++pos_;
    }
    if (s_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      return sign * kPi;
    }
    double v = 0.0;
    const char* first = s_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
    if (ec != std::errc() || ptr == first) return std::nullopt;
    pos_ += static_cast<std::size_t>(ptr - first);
    return sign * v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::optional<double> parse_number(std::string_view s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  return NumberParser(t).parse();
}

bool is_integer_multiple(double x, double unit) {
  const double r = x / unit;
  return std::abs(r - std::round(r)) < 1e-9 * std::max(1.0, std::abs(r));
}

const std::map<std::string, InitialKind>& initial_kinds() {
  static const std::map<std::string, InitialKind> m{{"constant", InitialKind::Constant},
                                                    {"mode", InitialKind::Mode},
                                                    {"kernel", InitialKind::Kernel},
                                                    {"gaussian", InitialKind::Gaussian},
                                                    {"random", InitialKind::Random}};
  return m;
}

std::string initial_name(InitialKind k) {
  for (const auto& [name, kind] : initial_kinds()) {
    if (kind == k) return name;
  }
  return "?";
}

std::string potential_name(PotentialKind k) {
  switch (k) {
    case PotentialKind::Zero:
      return "zero";
    case PotentialKind::Sin:
      return "sin";
    case PotentialKind::Modes:
      return "modes";
  }
  return "?";
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "name",       "geometry",  "dimension",  "points",       "extent",     "a",
      "V",          "V.modes",   "A",          "u0",           "u0.value",   "u0.base",
      "u0.amplitude", "u0.k",    "u0.t0",      "u0.p0",        "u0.q0",      "u0.seed",
      "u0.band",    "u0.floor",  "t_end",      "dt",           "record_every", "t_min",
      "tol.q",      "tol.evolution", "tol.consistency", "tol.bochner", "tol.trace", "tol.flux",
      "out"};
  return keys;
}

struct Entry {
  std::string value;
  int line;
};

/// Reads typed values out of the key map, recording every problem.
class Reader {
 public:
  Reader(std::map<std::string, Entry> entries, std::vector<std::string>& errors)
      : entries_(std::move(entries)), errors_(errors) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  void text(const std::string& key, std::string& out) {
    if (auto it = entries_.find(key); it != entries_.end()) out = it->second.value;
  }

  void number(const std::string& key, double& out) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return;
    if (auto v = parse_number(it->second.value)) {
      out = *v;
    } else {
      bad(it->second, key, "a number");
    }
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return;
    const std::string& s = it->second.value;
    Int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      bad(it->second, key, "an integer");
    } else {
      out = v;
    }
  }

  template <typename T, typename Fn>
  void list(const std::string& key, std::vector<T>& out, Fn&& parse_one) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return;
    std::vector<T> values;
    for (const auto& w : words(it->second.value)) {
      auto v = parse_one(w);
      if (!v) {
        bad(it->second, key, "a whitespace-separated list of numbers");
        return;
      }
      values.push_back(*v);
    }
    if (values.empty()) {
      bad(it->second, key, "at least one value");
      return;
    }
    out = std::move(values);
  }

  const Entry* entry(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  void error(const Entry& e, const std::string& message) {
    errors_.push_back("line " + std::to_string(e.line) + ": " + message);
  }

 private:
  void bad(const Entry& e, const std::string& key, const std::string& expected) {
    error(e, "'" + key + "' expects " + expected + ", got '" + e.value + "'");
  }

  std::map<std::string, Entry> entries_;
  std::vector<std::string>& errors_;
};

std::optional<TrigTerm> parse_term(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3 && parts.size() != 4) return std::nullopt;
  TrigTerm t;
  if (parts[0] == "cos") {
    t.cosine = true;
  } else if (parts[0] == "sin") {
    t.cosine = false;
  } else {
    return std::nullopt;
  }
  std::vector<double> nums;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    auto v = parse_number(parts[i]);
    if (!v) return std::nullopt;
    nums.push_back(*v);
  }
  t.k[0] = nums[0];
  t.k[1] = nums.size() == 3 ? nums[1] : 0.0;
  t.amplitude = nums.back();
  return t;
}

double phase(const std::array<double, 2>& k, const Point& x) {
  double s = k[0] * x[0];
  if (x.size() > 1) s += k[1] * x[1];
  return s;
}

/// Uniform in [-1, 1] from the top 53 bits, independent of the standard
/// library's distribution algorithms.
double symmetric_unit(std::mt19937_64& rng) {
  return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

void check_periodic(const GeometrySpec& g, const std::array<double, 2>& k, const std::string& what,
                    std::vector<std::string>& out) {
  for (int axis = 0; axis < g.dimension && axis < static_cast<int>(g.extent.size()); ++axis) {
    const double L = g.extent[axis];
    if (g.kind == GeometryKind::PeriodicTorus) {
      if (!is_integer_multiple(k[axis] * L, 2.0 * kPi)) {
        out.push_back(what + " is not periodic on the torus (k * L / 2pi must be an integer)");
        return;
      }
    }
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::invalid_argument([&] {
        std::string msg = "invalid configuration:";
        for (const auto& v : violations) msg += "\n  " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  auto tol_eq = [](const Tolerances& x, const Tolerances& y) {
    return x.q == y.q && x.evolution == y.evolution && x.consistency == y.consistency &&
           x.bochner == y.bochner && x.trace == y.trace && x.flux == y.flux;
  };
  return name == o.name && geometry == o.geometry && a == o.a && V == o.V && A == o.A &&
         u0 == o.u0 && t_end == o.t_end && dt == o.dt && record_every == o.record_every &&
         t_min == o.t_min && tol_eq(tol, o.tol) && out == o.out;
}

GeometryPtr build_geometry(const GeometrySpec& spec) {
  if (spec.kind == GeometryKind::NeumannInterval) {
    if (spec.dimension != 1) throw UnsupportedGeometry("the interval is one-dimensional");
    return build_interval(spec.points.at(0), spec.extent.at(0));
  }
  return build_torus(spec.dimension, spec.points, spec.extent);
}

FieldFunction potential_function(const PotentialSpec& spec) {
  switch (spec.kind) {
    case PotentialKind::Zero:
      return [](const Point&) { return 0.0; };
    case PotentialKind::Sin:
      return [](const Point& x) { return std::sin(x[0]); };
    case PotentialKind::Modes:
      return [modes = spec.modes](const Point& x) {
        double v = 0.0;
        for (const auto& m : modes) {
          const double th = phase(m.k, x);
          v += m.amplitude * (m.cosine ? std::cos(th) : std::sin(th));
        }
        return v;
      };
  }
  throw std::logic_error("unknown potential kind");
}

FieldFunction random_trig_polynomial(const Geometry& g, std::uint64_t seed, int band) {
  if (band < 1) throw std::invalid_argument("random_trig_polynomial needs band >= 1");
  struct Term {
    std::array<double, 2> k;
    double c, s;
  };
  std::mt19937_64 rng(seed);
  std::vector<Term> terms;
  const int dim = g.dimension();
  std::array<double, 2> unit{0.0, 0.0};
  for (int axis = 0; axis < dim; ++axis) {
    unit[axis] = (g.is_torus() ? 2.0 : 1.0) * kPi / g.extent(axis);
  }
  if (!g.is_torus()) {
    for (int m = 1; m <= band; ++m) terms.push_back({{m * unit[0], 0.0}, symmetric_unit(rng), 0.0});
  } else if (dim == 1) {
    for (int m = 1; m <= band; ++m) {
      const double c = symmetric_unit(rng);
      terms.push_back({{m * unit[0], 0.0}, c, symmetric_unit(rng)});
    }
  } else {
    // Half-plane of wavevectors, so each real mode appears once.
    for (int m0 = 0; m0 <= band; ++m0) {
      for (int m1 = -band; m1 <= band; ++m1) {
        if (m0 == 0 && m1 <= 0) continue;
        const double c = symmetric_unit(rng);
        terms.push_back({{m0 * unit[0], m1 * unit[1]}, c, symmetric_unit(rng)});
      }
    }
  }
  double l1 = 0.0;
  for (const auto& t : terms) l1 += std::abs(t.c) + std::abs(t.s);
  for (auto& t : terms) {
    t.c /= l1;
    t.s /= l1;
  }
  return [terms = std::move(terms)](const Point& x) {
    double v = 0.0;
    for (const auto& t : terms) {
      const double th = phase(t.k, x);
      v += t.c * std::cos(th) + t.s * std::sin(th);
    }
    return v;
  };
}

FieldFunction initial_function(const InitialSpec& spec, const GeometryPtr& g) {
  switch (spec.kind) {
    case InitialKind::Constant:
      return [v = spec.value](const Point&) { return v; };
    case InitialKind::Mode:
      return [spec](const Point& x) { return spec.base + spec.amplitude * std::cos(phase(spec.k, x)); };
    case InitialKind::Kernel:
      return [g, t0 = spec.t0, floor = spec.floor](const Point& x) {
        return torus_heat_kernel(*g, x, t0) + floor;
      };
    case InitialKind::Gaussian:
      return [g, spec](const Point& x) {
        return std::exp(-spec.p0 * periodic_distance_sq(*g, x) - spec.q0) + spec.floor;
      };
    case InitialKind::Random:
      return [s = random_trig_polynomial(*g, spec.seed, spec.band), floor = spec.floor](const Point& x) {
        return std::exp(s(x)) + floor;
      };
  }
  throw std::logic_error("unknown initial kind");
}

std::vector<std::string> config_violations(const ExperimentConfig& cfg) {
  std::vector<std::string> out;
  const auto& gs = cfg.geometry;
  GeometryPtr g;
  if (gs.kind == GeometryKind::NeumannInterval && gs.dimension != 1) {
    out.push_back("the interval geometry needs dimension = 1");
  } else if (gs.points.size() != static_cast<std::size_t>(gs.dimension) ||
             gs.extent.size() != static_cast<std::size_t>(gs.dimension)) {
    out.push_back("points and extent need one value per axis (dimension " +
                  std::to_string(gs.dimension) + ")");
  } else {
    try {
      g = build_geometry(gs);
    } catch (const std::exception& e) {
      out.push_back(e.what());
    }
  }

  if (!(cfg.a <= 0.0)) out.push_back("constant a must satisfy a <= 0 (got " + fmt(cfg.a) + ")");
  if (cfg.V.kind == PotentialKind::Sin) {
    check_periodic(gs, {1.0, 0.0}, "V = sin x", out);
  }
  if (cfg.V.kind == PotentialKind::Modes) {
    if (cfg.V.modes.empty()) out.push_back("V = modes needs at least one V.modes term");
    for (const auto& m : cfg.V.modes) check_periodic(gs, m.k, "V.modes term", out);
  }
  if (cfg.A && !(*cfg.A >= 0.0)) out.push_back("A must be >= 0");

  const auto& u0 = cfg.u0;
  switch (u0.kind) {
    case InitialKind::Constant:
      if (!(u0.value > 0.0)) out.push_back("u0.value must be positive");
      break;
    case InitialKind::Mode:
      if (gs.kind == GeometryKind::PeriodicTorus) {
        check_periodic(gs, u0.k, "u0 mode", out);
      } else if (!is_integer_multiple(u0.k[0] * gs.extent.at(0), kPi)) {
        out.push_back("u0 mode must satisfy u_nu = 0 at both ends (k * L / pi must be an integer)");
      }
      break;
    case InitialKind::Kernel:
      if (gs.kind != GeometryKind::PeriodicTorus) out.push_back("u0 = kernel needs the torus");
      if (!(u0.t0 > 0.0)) out.push_back("u0.t0 must be positive");
      break;
    case InitialKind::Gaussian:
      if (gs.kind != GeometryKind::PeriodicTorus) out.push_back("u0 = gaussian needs the torus");
      if (!(u0.p0 > 0.0)) out.push_back("u0.p0 must be positive");
      break;
    case InitialKind::Random:
      if (u0.band < 1) out.push_back("u0.band must be >= 1");
      break;
  }
  if (u0.kind != InitialKind::Constant && u0.kind != InitialKind::Mode && !(u0.floor > 0.0)) {
    out.push_back("u0.floor must be positive (got " + fmt(u0.floor) + ")");
  }

  if (!(cfg.t_end >= 0.0)) out.push_back("t_end must be >= 0");
  if (!(cfg.dt > 0.0)) out.push_back("dt must be positive");
  if (cfg.record_every < 1) out.push_back("record_every must be >= 1");
  if (!(cfg.t_min > 0.0)) out.push_back("t_min must be positive");
  for (double tol : {cfg.tol.q, cfg.tol.evolution, cfg.tol.consistency, cfg.tol.bochner,
                     cfg.tol.trace, cfg.tol.flux}) {
    if (!(tol >= 0.0)) {
      out.push_back("tolerances must be >= 0");
      break;
    }
  }

  if (g && out.empty()) {
    try {
      Problem p;
      p.geometry = g;
      p.a = cfg.a;
      p.potential_fn = potential_function(cfg.V);
      p.initial_fn = initial_function(u0, g);
      p.potential = sample(g, p.potential_fn);
      p.initial = sample(g, p.initial_fn);
      p.A = cfg.A.value_or(certify_A(*g, p.potential));
      p.t_end = cfg.t_end;
      p.dt = cfg.dt;
      p.record_every = cfg.record_every;
      for (auto& v : problem_violations(p)) out.push_back(std::move(v));
    } catch (const std::exception& e) {
      out.push_back(e.what());
    }
  }
  return out;
}

Problem build_problem(const ExperimentConfig& cfg) {
  if (auto v = config_violations(cfg); !v.empty()) throw ConfigError(std::move(v));
  const GeometryPtr g = build_geometry(cfg.geometry);
  try {
    return make_problem(g, cfg.a, potential_function(cfg.V), initial_function(cfg.u0, g), cfg.t_end,
                        cfg.dt, cfg.record_every, cfg.A);
  } catch (const InvalidProblem& e) {
    throw ConfigError(e.violations());
  }
}

ExperimentConfig parse_config(std::string_view text) {
  std::vector<std::string> errors;
  std::map<std::string, Entry> entries;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view line =
        text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected 'key = value', got '" +
                       trim(line) + "'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().count(key)) {
      errors.push_back("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
      continue;
    }
    if (value.empty()) {
      errors.push_back("line " + std::to_string(line_no) + ": '" + key + "' has no value");
      continue;
    }
    if (auto it = entries.find(key); it != entries.end()) {
      errors.push_back("line " + std::to_string(line_no) + ": '" + key +
                       "' repeats the value from line " + std::to_string(it->second.line));
      continue;
    }
    entries.emplace(key, Entry{value, line_no});
  }

  ExperimentConfig cfg;
  Reader r(std::move(entries), errors);
  r.text("name", cfg.name);
  r.text("out", cfg.out);
  if (const Entry* e = r.entry("geometry")) {
    if (e->value == "torus") {
      cfg.geometry.kind = GeometryKind::PeriodicTorus;
    } else if (e->value == "interval") {
      cfg.geometry.kind = GeometryKind::NeumannInterval;
      cfg.geometry.extent = {kPi};
      cfg.geometry.points = {129};
    } else {
      r.error(*e, "'geometry' must be torus or interval, got '" + e->value + "'");
    }
  }
  r.integer("dimension", cfg.geometry.dimension);
  const std::size_t dim = cfg.geometry.dimension > 0 ? cfg.geometry.dimension : 1;
  // Defaults and single values broadcast to every axis.
  if (cfg.geometry.points.size() == 1) cfg.geometry.points.assign(dim, cfg.geometry.points[0]);
  if (cfg.geometry.extent.size() == 1) cfg.geometry.extent.assign(dim, cfg.geometry.extent[0]);
  r.list("points", cfg.geometry.points, [](const std::string& w) -> std::optional<int> {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size()) return std::nullopt;
    return v;
  });
  r.list("extent", cfg.geometry.extent, parse_number);
  if (cfg.geometry.points.size() == 1) cfg.geometry.points.assign(dim, cfg.geometry.points[0]);
  if (cfg.geometry.extent.size() == 1) cfg.geometry.extent.assign(dim, cfg.geometry.extent[0]);

  r.number("a", cfg.a);
  if (const Entry* e = r.entry("V")) {
    if (e->value == "zero") {
      cfg.V.kind = PotentialKind::Zero;
    } else if (e->value == "sin") {
      cfg.V.kind = PotentialKind::Sin;
    } else if (e->value == "modes") {
      cfg.V.kind = PotentialKind::Modes;
    } else {
      r.error(*e, "'V' must be zero, sin or modes, got '" + e->value + "'");
    }
  }
  if (const Entry* e = r.entry("V.modes")) {
    for (const auto& term : split(e->value, ',')) {
      if (auto t = parse_term(term)) {
        cfg.V.modes.push_back(*t);
      } else {
        r.error(*e, "V.modes term '" + term + "' is not kind:k:amplitude or kind:k0:k1:amplitude");
      }
    }
    if (cfg.V.kind != PotentialKind::Modes) r.error(*e, "V.modes given but V is not 'modes'");
  }
  if (const Entry* e = r.entry("A")) {
    if (e->value != "auto") {
      if (auto v = parse_number(e->value)) {
        cfg.A = *v;
      } else {
        r.error(*e, "'A' expects auto or a number, got '" + e->value + "'");
      }
    }
  }

  if (const Entry* e = r.entry("u0")) {
    if (auto it = initial_kinds().find(e->value); it != initial_kinds().end()) {
      cfg.u0.kind = it->second;
    } else {
      r.error(*e, "'u0' must be constant, mode, kernel, gaussian or random, got '" + e->value + "'");
    }
  }
  r.number("u0.value", cfg.u0.value);
  r.number("u0.base", cfg.u0.base);
  r.number("u0.amplitude", cfg.u0.amplitude);
  if (r.has("u0.k")) {
    std::vector<double> k;
    r.list("u0.k", k, parse_number);
    if (k.size() == 1 || k.size() == 2) {
      cfg.u0.k = {k[0], k.size() == 2 ? k[1] : 0.0};
    } else if (!k.empty()) {
      r.error(*r.entry("u0.k"), "'u0.k' expects one or two numbers");
    }
  }
  r.number("u0.t0", cfg.u0.t0);
  r.number("u0.p0", cfg.u0.p0);
  r.number("u0.q0", cfg.u0.q0);
  r.integer("u0.seed", cfg.u0.seed);
  r.integer("u0.band", cfg.u0.band);
  r.number("u0.floor", cfg.u0.floor);

  r.number("t_end", cfg.t_end);
  r.number("dt", cfg.dt);
  r.integer("record_every", cfg.record_every);
  r.number("t_min", cfg.t_min);
  r.number("tol.q", cfg.tol.q);
  r.number("tol.evolution", cfg.tol.evolution);
  r.number("tol.consistency", cfg.tol.consistency);
  r.number("tol.bochner", cfg.tol.bochner);
  r.number("tol.trace", cfg.tol.trace);
  r.number("tol.flux", cfg.tol.flux);

  if (cfg.geometry.dimension != 1 && cfg.geometry.dimension != 2) {
    errors.push_back("dimension must be 1 or 2 (got " + std::to_string(cfg.geometry.dimension) + ")");
  } else {
    for (auto& v : config_violations(cfg)) errors.push_back(std::move(v));
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize(const ExperimentConfig& cfg) {
  std::ostringstream os;
  auto joined = [](const auto& values, auto&& to_string) {
    std::string s;
    for (const auto& v : values) s += (s.empty() ? "" : " ") + to_string(v);
    return s;
  };
  const auto& gs = cfg.geometry;
  os << "name = " << cfg.name << "\n";
  os << "geometry = " << (gs.kind == GeometryKind::PeriodicTorus ? "torus" : "interval") << "\n";
  os << "dimension = " << gs.dimension << "\n";
  os << "points = " << joined(gs.points, [](int v) { return std::to_string(v); }) << "\n";
  os << "extent = " << joined(gs.extent, fmt) << "\n";
  os << "a = " << fmt(cfg.a) << "\n";
  os << "V = " << potential_name(cfg.V.kind) << "\n";
  if (!cfg.V.modes.empty()) {
    std::string terms;
    for (const auto& m : cfg.V.modes) {
      if (!terms.empty()) terms += ", ";
      terms += std::string(m.cosine ? "cos" : "sin") + ":" + fmt(m.k[0]) + ":" + fmt(m.k[1]) + ":" +
               fmt(m.amplitude);
    }
    os << "V.modes = " << terms << "\n";
  }
  os << "A = " << (cfg.A ? fmt(*cfg.A) : std::string("auto")) << "\n";
  const auto& u0 = cfg.u0;
  os << "u0 = " << initial_name(u0.kind) << "\n";
  os << "u0.value = " << fmt(u0.value) << "\n";
  os << "u0.base = " << fmt(u0.base) << "\n";
  os << "u0.amplitude = " << fmt(u0.amplitude) << "\n";
  os << "u0.k = " << fmt(u0.k[0]) << " " << fmt(u0.k[1]) << "\n";
  os << "u0.t0 = " << fmt(u0.t0) << "\n";
  os << "u0.p0 = " << fmt(u0.p0) << "\n";
  os << "u0.q0 = " << fmt(u0.q0) << "\n";
  os << "u0.seed = " << u0.seed << "\n";
  os << "u0.band = " << u0.band << "\n";
  os << "u0.floor = " << fmt(u0.floor) << "\n";
  os << "t_end = " << fmt(cfg.t_end) << "\n";
  os << "dt = " << fmt(cfg.dt) << "\n";
  os << "record_every = " << cfg.record_every << "\n";
  os << "t_min = " << fmt(cfg.t_min) << "\n";
  os << "tol.q = " << fmt(cfg.tol.q) << "\n";
  os << "tol.evolution = " << fmt(cfg.tol.evolution) << "\n";
  os << "tol.consistency = " << fmt(cfg.tol.consistency) << "\n";
  os << "tol.bochner = " << fmt(cfg.tol.bochner) << "\n";
  os << "tol.trace = " << fmt(cfg.tol.trace) << "\n";
  os << "tol.flux = " << fmt(cfg.tol.flux) << "\n";
  if (!cfg.out.empty()) os << "out = " << cfg.out << "\n";
  return os.str();
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;
  if (name == "theorem2_sinV") {
    cfg.a = -1.0;
    cfg.V.kind = PotentialKind::Sin;
    cfg.u0.kind = InitialKind::Random;
    cfg.u0.seed = 7;
  } else if (name == "liyau_sharpness") {
    cfg.geometry.points = {256};
    cfg.geometry.extent = {8.0 * kPi};
    cfg.u0.kind = InitialKind::Kernel;
    cfg.u0.t0 = 0.02;
    cfg.u0.floor = 1e-4;
    cfg.t_end = 0.5;
  } else if (name == "theorem3_interval") {
    cfg.geometry.kind = GeometryKind::NeumannInterval;
    cfg.geometry.points = {257};
    cfg.geometry.extent = {kPi};
    cfg.a = -1.0;
    cfg.V.kind = PotentialKind::Sin;
    cfg.u0.kind = InitialKind::Mode;
    cfg.u0.base = 2.0;
    cfg.u0.amplitude = 1.0;
    cfg.u0.k = {1.0, 0.0};
  } else {
    throw ConfigError({"unknown preset '" + name + "'"});
  }
  return cfg;
}

std::vector<std::string> preset_names() {
  return {"theorem2_sinV", "liyau_sharpness", "theorem3_interval"};
}

}  // namespace harnack
