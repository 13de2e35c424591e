#include "fourier_ocp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "fourier_ocp/errors.hpp"

namespace fourier_ocp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
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

double parse_plain(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty()) throw ArgumentError("'" + text + "' is not a number");
  return v;
}

struct Entry {
  std::string value;
  int line = 0;
  int column = 0;
};

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "problem", "rps.N", "T", "r", "ic", "terminal",
      "fourier.M", "fourier.N", "fourier.time_cos_order", "fourier.half_basis",
      "quadrature.rule", "quadrature.nodes",
      "auglag.upsilon0", "auglag.mu0", "auglag.lambda", "auglag.penalty_factor", "auglag.multiplier_factor", "auglag.mu_max",
      "auglag.tau", "auglag.ell_lim", "auglag.multiplier_rule",
      "opt.method", "opt.eps", "opt.kmax", "opt.alpha", "opt.memory", "opt.c1", "opt.c2", "opt.max_linesearch",
      "init.jitter", "seed",
      "sim.steps", "reference.steps", "reference.tolerance", "reference.max_newton",
      "output.dir", "output.grid_points",
  };
  return keys;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  template <class F>
  auto get(const std::string& key, const std::string& fallback, F&& convert) {
    const auto it = entries_.find(key);
    const std::string text = it == entries_.end() ? fallback : it->second.value;
    try {
      auto v = convert(text);
      echo.emplace_back(key, text);
      return v;
    } catch (const ArgumentError& e) {
      if (it == entries_.end()) throw ConfigError(key + ": " + e.what());
      throw ConfigError(key + ": " + e.what(), it->second.line, it->second.column);
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(key + ": " + what);
    throw ConfigError(key + ": " + what, it->second.line, it->second.column);
  }

  std::vector<std::pair<std::string, std::string>> echo;

 private:
  std::map<std::string, Entry> entries_;
};

double to_double(const std::string& s) { return parse_number(s); }

long long to_integer(const std::string& s) {
  const double v = parse_number(s);
  if (v != std::floor(v) || std::abs(v) > 9e15) throw ArgumentError("'" + s + "' is not an integer");
  return static_cast<long long>(v);
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw ArgumentError("'" + s + "' is not a boolean (true/false)");
}

std::vector<double> to_vector(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_number(part));
  return out;
}

std::vector<double> axis_values(const std::string& spec) {
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw ArgumentError("range '" + spec + "' must be lo:step:hi");
    const double lo = parse_number(parts[0]);
    const double step = parse_number(parts[1]);
    const double hi = parse_number(parts[2]);
    if (!(step > 0.0) || hi < lo) throw ArgumentError("range '" + spec + "' needs step > 0 and lo <= hi");
    std::vector<double> v;
    for (long long i = 0;; ++i) {
      const double x = lo + static_cast<double>(i) * step;
      if (x > hi + 1e-9 * step) break;
      v.push_back(x);
      if (v.size() > 100000) throw ArgumentError("range '" + spec + "' has too many points");
    }
    return v;
  }
  std::vector<double> v;
  for (const auto& part : split(spec, '|')) v.push_back(parse_number(part));
  return v;
}

std::vector<std::vector<double>> to_axes(const std::string& s) {
  std::vector<std::vector<double>> axes;
  for (const auto& part : split(s, ',')) axes.push_back(axis_values(part));
  return axes;
}

std::map<std::string, Entry> tokenize(std::istream& in) {
  std::map<std::string, Entry> entries;
  std::string section;
  std::string raw;
  int line_no = 0;
  const auto& keys = known_keys();
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const int col0 = static_cast<int>(first) + 1;
    const std::string body = trim(line);
    if (body.front() == '[') {
      if (body.back() != ']' || body.size() < 3) throw ConfigError("malformed section header", line_no, col0);
      section = trim(body.substr(1, body.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no, col0);
    const std::string name = trim(line.substr(0, eq));
    if (name.empty()) throw ConfigError("missing key before '='", line_no, col0);
    const std::string key = section.empty() ? name : section + "." + name;
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("unknown key '" + key + "'", line_no, col0);
    }
    const auto vpos = line.find_first_not_of(" \t", eq + 1);
    const std::string value = trim(line.substr(eq + 1));
    const int vcol = vpos == std::string::npos ? static_cast<int>(eq) + 2 : static_cast<int>(vpos) + 1;
    if (value.empty()) throw ConfigError("missing value for '" + key + "'", line_no, vcol);
    if (entries.count(key)) throw ConfigError("duplicate key '" + key + "'", line_no, col0);
    entries[key] = Entry{value, line_no, vcol};
  }
  return entries;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt::format("{}", v[i]);
  return s;
}

}  // namespace

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  const auto slash = t.find('/');
  if (slash == std::string::npos) return parse_plain(t);
  const double num = parse_plain(trim(t.substr(0, slash)));
  const double den = parse_plain(trim(t.substr(slash + 1)));
  if (den == 0.0) throw ArgumentError("'" + t + "' divides by zero");
  return num / den;
}

ExperimentConfig parse_config(std::istream& in) {
  Reader rd(tokenize(in));
  ExperimentConfig c;

  c.problem = rd.get("problem", "lq", [](const std::string& s) {
    if (s == "lq") return ProblemKind::lq_particle;
    if (s == "rps") return ProblemKind::replicator;
    throw ArgumentError("expected lq or rps, got '" + s + "'");
  });
  const bool lq = c.problem == ProblemKind::lq_particle;
  if (!lq) {
    c.strategies = static_cast<int>(rd.get("rps.N", "3", to_integer));
    if (c.strategies < 3 || c.strategies % 2 == 0) rd.fail("rps.N", "must be odd and >= 3");
  } else if (rd.has("rps.N")) {
    rd.fail("rps.N", "only valid with problem = rps");
  }
  if (!rd.has("T")) throw ConfigError("missing required key 'T'");
  c.horizon = rd.get("T", "", to_double);
  if (!(c.horizon > 0.0)) rd.fail("T", "must be positive");
  c.r = rd.get("r", "1", to_double);
  if (!(c.r > 0.0)) rd.fail("r", "must be positive");

  const std::size_t d = lq ? 2 : static_cast<std::size_t>(c.strategies);
  if (!rd.has("ic")) throw ConfigError("missing required key 'ic'");
  c.ic_axes = rd.get("ic", "", to_axes);
  if (c.ic_axes.size() != d) rd.fail("ic", fmt::format("needs {} components, got {}", d, c.ic_axes.size()));
  if (lq) {
    if (!rd.has("terminal")) throw ConfigError("missing required key 'terminal' for problem = lq");
    c.terminal = rd.get("terminal", "", to_vector);
    if (c.terminal.size() != 2) rd.fail("terminal", "needs position and velocity");
  } else if (rd.has("terminal")) {
    rd.fail("terminal", "problem = rps has a free terminal state");
  }

  c.time_order = static_cast<int>(rd.get("fourier.M", "4", to_integer));
  if (c.time_order < 0 || c.time_order > 64) rd.fail("fourier.M", "must lie in [0, 64]");
  const auto ic_orders = rd.get("fourier.N", "4", to_vector);
  if (ic_orders.size() != 1 && ic_orders.size() != d) {
    rd.fail("fourier.N", fmt::format("give one order or one per component ({})", d));
  }
  for (std::size_t i = 0; i < d; ++i) {
    const double v = ic_orders.size() == 1 ? ic_orders[0] : ic_orders[i];
    if (v < 0 || v > 64 || v != std::floor(v)) rd.fail("fourier.N", "orders must be integers in [0, 64]");
    const bool single = c.ic_axes[i].size() == 1;
    c.ic_orders.push_back(single ? 0 : static_cast<int>(v));
  }
  c.time_cos_order = static_cast<int>(rd.get("fourier.time_cos_order", std::to_string(c.time_order), to_integer));
  if (c.time_cos_order < 0 || c.time_cos_order > c.time_order) {
    rd.fail("fourier.time_cos_order", "must lie in [0, M]");
  }
  c.half_basis = rd.get("fourier.half_basis", "false", to_bool);

  c.quadrature_rule = rd.get("quadrature.rule", "simpson", [](const std::string& s) {
    return parse_quadrature_rule(s);
  });
  c.quadrature_nodes = static_cast<std::size_t>(rd.get("quadrature.nodes", "201", to_integer));
  if (c.quadrature_nodes < 3 || c.quadrature_nodes % 2 == 0) rd.fail("quadrature.nodes", "must be odd and >= 3");

  auto& a = c.auglag;
  a.upsilon0 = rd.get("auglag.upsilon0", "1", to_double);
  a.mu0 = rd.get("auglag.mu0", "10", to_double);
  a.lambda = rd.get("auglag.lambda", "0.25", to_double);
  a.penalty_factor = rd.get("auglag.penalty_factor", "10", to_double);
  a.multiplier_factor = rd.get("auglag.multiplier_factor", "1", to_double);
  a.mu_max = rd.get("auglag.mu_max", "1e12", to_double);
  a.tau = rd.get("auglag.tau", "1e-4", to_double);
  a.ell_lim = static_cast<int>(rd.get("auglag.ell_lim", "30", to_integer));
  a.rule = rd.get("auglag.multiplier_rule", "classic", [](const std::string& s) { return parse_multiplier_rule(s); });
  try {
    a.validate();
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }

  auto& o = c.optimizer;
  o.method = rd.get("opt.method", "lbfgs", [](const std::string& s) { return parse_optimizer_method(s); });
  o.eps = rd.get("opt.eps", "1e-6", to_double);
  o.k_max = static_cast<int>(rd.get("opt.kmax", "1000", to_integer));
  o.alpha = rd.get("opt.alpha", "1e-3", to_double);
  o.memory = static_cast<int>(rd.get("opt.memory", "10", to_integer));
  o.line_search.c1 = rd.get("opt.c1", "1e-4", to_double);
  o.line_search.c2 = rd.get("opt.c2", o.method == OptimizerMethod::cg ? "0.1" : "0.9", to_double);
  o.line_search.max_steps = static_cast<int>(rd.get("opt.max_linesearch", "40", to_integer));
  try {
    o.validate();
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }

  c.jitter = rd.get("init.jitter", "false", to_bool);
  c.seed = static_cast<std::uint64_t>(rd.get("seed", "0", to_integer));

  c.simulation_steps = static_cast<std::size_t>(rd.get("sim.steps", "4000", to_integer));
  if (c.simulation_steps < 10) rd.fail("sim.steps", "must be >= 10");
  c.shooting.steps = static_cast<std::size_t>(rd.get("reference.steps", "6000", to_integer));
  if (c.shooting.steps < 10) rd.fail("reference.steps", "must be >= 10");
  c.shooting.tolerance = rd.get("reference.tolerance", "1e-10", to_double);
  c.shooting.max_newton = static_cast<int>(rd.get("reference.max_newton", "60", to_integer));

  c.output = rd.get("output.dir", "out", [](const std::string& s) { return std::filesystem::path(s); });
  c.grid_points = static_cast<std::size_t>(rd.get("output.grid_points", "101", to_integer));
  if (c.grid_points < 2) rd.fail("output.grid_points", "must be >= 2");

  c.echo = std::move(rd.echo);
  // Resolved per-component orders replace the raw text.
  for (auto& [k, v] : c.echo) {
    if (k == "fourier.N") {
      std::vector<double> o2(c.ic_orders.begin(), c.ic_orders.end());
      v = join(o2);
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in);
}

std::vector<std::vector<double>> ExperimentConfig::initial_conditions() const {
  std::vector<std::vector<double>> out{{}};
  for (const auto& axis : ic_axes) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : out) {
      for (double v : axis) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  return out;
}

DomainBox ExperimentConfig::domain() const {
  std::vector<double> lo, hi;
  for (const auto& axis : ic_axes) {
    lo.push_back(*std::min_element(axis.begin(), axis.end()));
    hi.push_back(*std::max_element(axis.begin(), axis.end()));
  }
  return DomainBox(horizon, lo, hi);
}

SurfaceLayout ExperimentConfig::layout() const {
  return SurfaceLayout(domain(), SurfaceShape{time_order, time_cos_order < 0 ? time_order : time_cos_order,
                                              ic_orders, half_basis});
}

OcpDefinition ExperimentConfig::definition() const {
  if (problem == ProblemKind::lq_particle) return lq_particle_problem(horizon, r, terminal);
  return rps_problem(build_circulant_game(strategies), horizon, r);
}

}  // namespace fourier_ocp
