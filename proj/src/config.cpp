#include "aggrokin/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "aggrokin/errors.hpp"
#include "aggrokin/io.hpp"

namespace aggrokin {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::configuration, "cli", what); }

const std::map<std::string, Experiment>& name_table() {
  static const std::map<std::string, Experiment> t{
      {"equilibria", Experiment::equilibria},
      {"meso-run", Experiment::meso_run},
      {"picard-run", Experiment::picard_run},
      {"bounded-check", Experiment::bounded_check},
      {"comparison-check", Experiment::comparison_check},
      {"stability-check", Experiment::stability_check},
      {"aggregation-run", Experiment::aggregation_run},
      {"front-fit", Experiment::front_fit},
      {"recurrence", Experiment::recurrence},
      {"micro-run", Experiment::micro_run},
      {"micro-meso-compare", Experiment::micro_meso_compare},
      {"fluctuation-demo", Experiment::fluctuation_demo},
      {"horizon", Experiment::horizon},
  };
  return t;
}

std::string type_name(const json& j) {
  switch (j.type()) {
    case json::value_t::null: return "null";
    case json::value_t::boolean: return "boolean";
    case json::value_t::string: return "string";
    case json::value_t::array: return "array";
    case json::value_t::object: return "object";
    default: return j.is_number() ? "number" : "value";
  }
}

/// Object view that records which keys were read so leftovers can be rejected.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j.is_object()) bad("'" + where_ + "': expected object, got " + type_name(j));
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string path(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::optional<double> number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& v = raw(key);
    if (!v.is_number()) bad("'" + path(key) + "': expected number, got " + type_name(v));
    const double x = v.get<double>();
    if (!std::isfinite(x)) bad("'" + path(key) + "': expected a finite number");
    return x;
  }
  double number(const std::string& key, double def) { return number(key).value_or(def); }
  double require_number(const std::string& key) {
    if (!has(key)) bad("'" + path(key) + "': required number is missing");
    return *number(key);
  }

  std::optional<long long> integer(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& v = raw(key);
    if (!v.is_number_integer()) bad("'" + path(key) + "': expected integer, got " + type_name(v));
    return v.get<long long>();
  }

  std::optional<std::string> string(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& v = raw(key);
    if (!v.is_string()) bad("'" + path(key) + "': expected string, got " + type_name(v));
    return v.get<std::string>();
  }

  std::optional<std::vector<double>> numbers(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& v = raw(key);
    if (!v.is_array()) bad("'" + path(key) + "': expected array of numbers, got " + type_name(v));
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) bad("'" + path(key) + "': expected array of numbers, found " + type_name(e));
      out.push_back(e.get<double>());
    }
    return out;
  }

  /// Number (1D) or two-element array (2D) as a point.
  std::optional<std::array<double, 2>> point(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& v = raw(key);
    if (v.is_number()) return std::array<double, 2>{v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
      return std::array<double, 2>{v[0].get<double>(), v[1].get<double>()};
    bad("'" + path(key) + "': expected number or array of 2 numbers, got " + type_name(v));
  }

  void finish(const std::set<std::string>& allowed = {}) const {
    for (const auto& [k, v] : j_.items()) {
      (void)v;
      if (!seen_.count(k) && !allowed.count(k)) bad("unknown key '" + path(k) + "'");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

int positive_int(Reader& r, const std::string& key, int def) {
  const auto v = r.integer(key);
  if (!v) return def;
  if (*v <= 0 || *v > 1'000'000'000) bad("'" + r.path(key) + "': expected positive integer");
  return static_cast<int>(*v);
}

double positive(Reader& r, const std::string& key, double def) {
  const double v = r.number(key, def);
  if (!(v > 0.0)) bad("'" + r.path(key) + "': expected positive number, got " + io::fmt(v));
  return v;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

ModelParams parse_params(const json& j) {
  Reader r(j, "params");
  ModelParams p;
  p.m = r.require_number("m");
  p.lambda = r.require_number("lambda");
  p.epsilon = r.number("epsilon", 1.0);
  r.finish();
  try {
    p.validate();
  } catch (const Error& e) {
    bad(std::string("'params': ") + e.what());
  }
  return p;
}

Potential parse_potential(const json& j, const std::filesystem::path& base, std::vector<std::filesystem::path>& inputs) {
  Reader r(j, "potential");
  const auto kind_name = r.string("kind");
  if (!kind_name) bad("'potential.kind': required string is missing");
  KernelKind kind;
  try {
    kind = kernel_kind_from_string(*kind_name);
  } catch (const Error&) {
    bad("'potential.kind': expected one of indicator-box, triangle, truncated-gaussian, tabulated; got '" +
        *kind_name + "'");
  }
  const int dim = static_cast<int>(r.integer("dim").value_or(1));
  if (dim != 1 && dim != 2) bad("'potential.dim': expected 1 or 2");
  const double amp = r.number("amplitude", 1.0);
  try {
    switch (kind) {
      case KernelKind::indicator_box: {
        const double hw = r.require_number("half_width");
        r.finish();
        return Potential::indicator_box(hw, amp, dim);
      }
      case KernelKind::triangle: {
        const double hw = r.require_number("half_width");
        r.finish();
        return Potential::triangle(hw, amp, dim);
      }
      case KernelKind::truncated_gaussian: {
        const double s = r.require_number("sigma");
        r.finish();
        return Potential::truncated_gaussian(s, amp, dim);
      }
      case KernelKind::tabulated: {
        if (const auto f = r.string("file")) {
          r.finish();
          const auto path = resolve(base, *f);
          inputs.push_back(path);
          return Potential::from_csv(path, dim);
        }
        const auto off = r.numbers("offsets");
        const auto val = r.numbers("values");
        if (!off || !val) bad("'potential': tabulated kernels need 'file' or both 'offsets' and 'values'");
        r.finish();
        return Potential::tabulated(*off, *val, dim);
      }
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::configuration) throw;
    bad(std::string("'potential': ") + e.what());
  }
  bad("'potential': unreachable kind");
}

DomainGrid parse_grid(const json& j) {
  Reader r(j, "grid");
  DomainGrid g;
  g.dim = static_cast<int>(r.integer("dim").value_or(1));
  g.L = r.require_number("L");
  const auto n = r.integer("n");
  if (!n) bad("'grid.n': required integer is missing");
  g.n = static_cast<int>(*n);
  r.finish();
  try {
    g.validate();
  } catch (const Error& e) {
    bad(std::string("'grid': ") + e.what());
  }
  return g;
}

InitialSpec parse_initial(const json& j, const std::string& where, const std::filesystem::path& base,
                          std::vector<std::filesystem::path>& inputs) {
  Reader r(j, where);
  InitialSpec s;
  const auto type = r.string("type");
  if (!type) bad("'" + r.path("type") + "': required string is missing");
  if (*type == "constant") {
    s.type = InitialSpec::Type::constant;
    s.value = r.require_number("value");
  } else if (*type == "bump") {
    s.type = InitialSpec::Type::bump;
    s.center = r.point("center").value_or(std::array<double, 2>{0.0, 0.0});
    s.width = positive(r, "width", 1.0);
    s.height = r.require_number("height");
    s.base = r.number("base", 0.0);
  } else if (*type == "step") {
    s.type = InitialSpec::Type::step;
    const auto lo = r.point("lo"), hi = r.point("hi");
    if (!lo || !hi) bad("'" + where + "': step needs 'lo' and 'hi'");
    s.lo = *lo;
    s.hi = *hi;
    s.inside = r.require_number("inside");
    s.outside = r.number("outside", 0.0);
  } else if (*type == "file") {
    s.type = InitialSpec::Type::file;
    const auto p = r.string("path");
    if (!p) bad("'" + r.path("path") + "': required string is missing");
    s.path = resolve(base, *p);
    inputs.push_back(s.path);
  } else {
    bad("'" + r.path("type") + "': expected one of constant, bump, step, file; got '" + *type + "'");
  }
  r.finish();
  return s;
}

const std::map<Experiment, std::set<std::string>>& run_keys() {
  static const std::map<Experiment, std::set<std::string>> t{
      {Experiment::equilibria, {}},
      {Experiment::meso_run, {"t_end", "dt", "report_every", "format"}},
      {Experiment::picard_run, {"t_end", "c", "tol", "nodes"}},
      {Experiment::bounded_check, {"t_end", "dt"}},
      {Experiment::comparison_check, {"t_end", "dt", "high"}},
      {Experiment::stability_check, {"amplitude", "t_end"}},
      {Experiment::aggregation_run,
       {"region", "b", "b_factor", "b_reference", "kappa", "t_end", "dt", "report_every", "probes"}},
      {Experiment::front_fit,
       {"region", "b", "b_factor", "b_reference", "kappa", "u0_factor", "t_end", "dt", "report_every", "probes",
        "resolutions"}},
      {Experiment::recurrence, {"d0", "c0", "K"}},
      {Experiment::micro_run, {"t_end", "snapshot_times", "replicas", "bins", "cap"}},
      {Experiment::micro_meso_compare, {"t_end", "replicas", "bins", "eps_list", "pair_r_max", "pair_bins"}},
      {Experiment::fluctuation_demo, {"region", "initial_count", "L", "t_end", "samples", "replicas", "cap"}},
      {Experiment::horizon, {"C0", "C", "c_phi"}},
  };
  return t;
}

RunSettings parse_run(const json& j, Experiment e, const std::filesystem::path& base,
                      std::vector<std::filesystem::path>& inputs) {
  RunSettings s;
  Reader r(j, "run");
  const auto& allowed = run_keys().at(e);
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (!allowed.count(k)) bad("unknown key 'run." + k + "' for experiment '" + to_string(e) + "'");
  }
  double t_default = 1.0;
  if (e == Experiment::bounded_check || e == Experiment::comparison_check) t_default = 10.0;
  if (e == Experiment::aggregation_run) t_default = 20.0;
  if (e == Experiment::front_fit) t_default = 40.0;
  if (e == Experiment::fluctuation_demo) t_default = 5.0;
  if (e == Experiment::stability_check) t_default = 0.0;
  s.t_end = t_default;
  if (const auto t = r.number("t_end")) {
    if (!(*t > 0.0)) bad("'run.t_end': expected positive number");
    s.t_end = *t;
  }
  s.dt = r.number("dt", 0.0);
  if (s.dt < 0.0) bad("'run.dt': expected nonnegative number");
  s.report_every = positive(r, "report_every", e == Experiment::aggregation_run || e == Experiment::front_fit ? 0.05 : 0.1);
  s.format = r.string("format").value_or("csv");
  if (s.format != "csv" && s.format != "binary") bad("'run.format': expected \"csv\" or \"binary\"");
  s.c = r.number("c", 0.0);
  s.tol = positive(r, "tol", 1e-10);
  s.nodes = positive_int(r, "nodes", 64);
  s.amplitude = r.number("amplitude", 0.0);
  if (s.amplitude < 0.0) bad("'run.amplitude': expected nonnegative number");
  if (const auto reg = r.numbers("region")) {
    if (reg->size() != 2 || !((*reg)[0] < (*reg)[1])) bad("'run.region': expected [lo, hi] with lo < hi");
    s.region = {(*reg)[0], (*reg)[1]};
  }
  s.b = r.number("b", 0.0);
  s.b_factor = positive(r, "b_factor", 1.1);
  s.b_reference = r.string("b_reference").value_or("bhat_front");
  if (s.b_reference != "bhat_front" && s.b_reference != "b_hat")
    bad("'run.b_reference': expected \"bhat_front\" or \"b_hat\"");
  s.kappa = r.number("kappa", 2.0);
  s.u0_factor = positive(r, "u0_factor", 1.5);
  s.probes = r.numbers("probes").value_or(std::vector<double>{});
  if (const auto res = r.numbers("resolutions")) {
    for (double v : *res) {
      if (v != std::floor(v) || v < 2) bad("'run.resolutions': expected array of integers >= 2");
      s.resolutions.push_back(static_cast<int>(v));
    }
  }
  s.d0 = r.number("d0", 0.0);
  s.c0 = r.number("c0", 0.0);
  s.K = positive_int(r, "K", 1000);
  s.snapshot_times = r.numbers("snapshot_times").value_or(std::vector<double>{});
  s.replicas = positive_int(r, "replicas", 64);
  s.bins = positive_int(r, "bins", 20);
  s.eps_list = r.numbers("eps_list").value_or(std::vector<double>{1.0, 0.5, 0.25});
  for (double eps : s.eps_list)
    if (!(eps > 0.0 && eps <= 1.0)) bad("'run.eps_list': every epsilon must lie in (0, 1]");
  s.pair_r_max = positive(r, "pair_r_max", 2.5);
  s.pair_bins = positive_int(r, "pair_bins", 5);
  if (const auto n = r.integer("initial_count")) {
    if (*n < 0) bad("'run.initial_count': expected nonnegative integer");
    s.initial_count = static_cast<std::size_t>(*n);
  }
  s.L = positive(r, "L", 10.0);
  s.samples = positive_int(r, "samples", 21);
  if (const auto n = r.integer("cap")) {
    if (*n <= 0) bad("'run.cap': expected positive integer");
    s.cap = static_cast<std::size_t>(*n);
  }
  s.C0 = positive(r, "C0", 1.0);
  s.C = positive(r, "C", 2.0);
  if (s.C < s.C0) bad("'run.C': expected C >= C0");
  s.c_phi = r.number("c_phi");
  if (r.has("high")) s.high = parse_initial(r.raw("high"), "run.high", base, inputs);
  r.finish();
  return s;
}

void require(bool ok, const std::string& what) {
  if (!ok) bad(what);
}

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [name, value] : name_table())
    if (value == e) return name;
  return "unknown";
}

Experiment experiment_from_string(const std::string& name) {
  const auto it = name_table().find(name);
  if (it == name_table().end()) bad("unknown experiment '" + name + "'");
  return it->second;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, e] : name_table()) v.push_back(name);
    return v;
  }();
  return names;
}

DensityField InitialSpec::build(const DomainGrid& grid) const {
  DensityField u(grid);
  auto dist = [&](const Point& x) {
    const double dx = x[0] - center[0];
    const double dy = grid.dim == 2 ? x[1] - center[1] : 0.0;
    return std::hypot(dx, dy);
  };
  if (type == Type::file) {
    if (grid.dim != 1) bad("file initial data is supported in d = 1 only");
    std::istringstream in(io::read_text(path));
    std::string line;
    std::getline(in, line);
    std::erase_if(line, [](char c) { return c == ' ' || c == '\r'; });
    if (line != "x,u") bad("initial data file " + path.string() + " must start with header 'x,u'");
    std::vector<std::pair<double, double>> rows;
    int row = 1;
    while (std::getline(in, line)) {
      ++row;
      if (line.empty() || line == "\r") continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ss(line);
      double x = 0.0, v = 0.0;
      if (!(ss >> x >> v)) bad("malformed row " + std::to_string(row) + " in " + path.string());
      rows.emplace_back(x, v);
    }
    if (rows.size() < 2) bad("initial data file " + path.string() + " needs at least two rows");
    std::sort(rows.begin(), rows.end());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = grid.node(i)[0];
      auto it = std::lower_bound(rows.begin(), rows.end(), std::make_pair(x, -1e308));
      if (it == rows.begin())
        u.values[i] = rows.front().second;
      else if (it == rows.end())
        u.values[i] = rows.back().second;
      else {
        const auto& a = *(it - 1);
        const auto& b = *it;
        const double w = (x - a.first) / (b.first - a.first);
        u.values[i] = (1.0 - w) * a.second + w * b.second;
      }
    }
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Point x = grid.node(i);
      switch (type) {
        case Type::constant: u.values[i] = value; break;
        case Type::bump: {
          const double r = dist(x);
          const double c = r < width ? std::cos(0.5 * std::numbers::pi * r / width) : 0.0;
          u.values[i] = base + height * c * c;
          break;
        }
        case Type::step: {
          bool in = x[0] >= lo[0] && x[0] <= hi[0];
          if (grid.dim == 2) in = in && x[1] >= lo[1] && x[1] <= hi[1];
          u.values[i] = in ? inside : outside;
          break;
        }
        case Type::file: break;
      }
    }
  }
  for (std::size_t i = 0; i < u.values.size(); ++i)
    if (!(u.values[i] >= 0.0) || !std::isfinite(u.values[i]))
      bad("initial density must be finite and nonnegative (cell " + std::to_string(i) + ")");
  return u;
}

nlohmann::json InitialSpec::to_json() const {
  switch (type) {
    case Type::constant: return {{"type", "constant"}, {"value", value}};
    case Type::bump:
      return {{"type", "bump"}, {"center", center}, {"width", width}, {"height", height}, {"base", base}};
    case Type::step: return {{"type", "step"}, {"lo", lo}, {"hi", hi}, {"inside", inside}, {"outside", outside}};
    case Type::file: return {{"type", "file"}, {"path", path.string()}};
  }
  return {};
}

double ExperimentConfig::beta_value() const {
  if (beta) return *beta;
  if (potential) return aggrokin::beta(*potential);
  bad("beta is needed: give 'beta' or 'potential'");
}

ExperimentConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  cfg.text = text;
  try {
    cfg.raw = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("config is not valid JSON: ") + e.what());
  }
  Reader r(cfg.raw, "");
  const auto name = r.string("experiment");
  if (!name) bad("'experiment': required string is missing");
  cfg.experiment = experiment_from_string(*name);
  const Experiment e = cfg.experiment;
  (void)r.string("description");
  if (!r.has("params")) bad("'params': required object is missing");
  cfg.params = parse_params(r.raw("params"));
  if (r.has("potential")) cfg.potential = parse_potential(r.raw("potential"), base_dir, cfg.inputs);
  if (const auto b = r.number("beta")) {
    if (!(*b > 0.0)) bad("'beta': expected positive number");
    cfg.beta = *b;
  }
  if (r.has("grid")) cfg.grid = parse_grid(r.raw("grid"));
  if (r.has("initial")) cfg.initial = parse_initial(r.raw("initial"), "initial", base_dir, cfg.inputs);
  if (const auto s = r.integer("seed")) {
    if (*s < 0) bad("'seed': expected nonnegative integer");
    cfg.seed = static_cast<std::uint64_t>(*s);
  }
  cfg.output = r.string("output").value_or("");
  cfg.run = parse_run(r.has("run") ? r.raw("run") : json::object(), e, base_dir, cfg.inputs);
  r.finish();

  // Experiment-level requirements.
  const bool needs_field = e == Experiment::meso_run || e == Experiment::picard_run || e == Experiment::bounded_check ||
                           e == Experiment::comparison_check || e == Experiment::aggregation_run ||
                           e == Experiment::micro_run || e == Experiment::micro_meso_compare;
  const bool needs_grid = needs_field || e == Experiment::stability_check || e == Experiment::front_fit;
  const bool needs_potential = needs_grid || e == Experiment::fluctuation_demo;
  if (needs_potential) require(cfg.potential.has_value(), "'potential': required for experiment '" + *name + "'");
  if (needs_grid) require(cfg.grid.has_value(), "'grid': required for experiment '" + *name + "'");
  if (needs_field) require(cfg.initial.has_value(), "'initial': required for experiment '" + *name + "'");
  if (e == Experiment::equilibria)
    require(cfg.beta || cfg.potential, "'beta' or 'potential': required for experiment 'equilibria'");
  if (e == Experiment::horizon)
    require(cfg.potential || (cfg.beta && cfg.run.c_phi),
            "'potential' (or 'beta' with 'run.c_phi'): required for experiment 'horizon'");
  if (e == Experiment::comparison_check) require(cfg.run.high.has_value(), "'run.high': required for comparison-check");
  if (e == Experiment::recurrence) require(cfg.run.d0 > 0.0 || cfg.run.c0 > 0.0, "'run.d0' or 'run.c0': required");
  if (e == Experiment::micro_meso_compare) require(cfg.run.replicas >= 64, "'run.replicas': expected at least 64");
  if (e == Experiment::micro_run) require(cfg.run.replicas >= 8, "'run.replicas': expected at least 8");
  if (e == Experiment::stability_check && cfg.run.amplitude <= 0.0)
    bad("'run.amplitude': required positive number for stability-check");
  if (e == Experiment::aggregation_run || e == Experiment::front_fit) {
    require(cfg.run.kappa > 1.0, "'run.kappa': expected a number > 1");
    if (e == Experiment::front_fit) require(cfg.grid->dim == 1, "front-fit supports d = 1 only");
  }
  if (cfg.potential && cfg.grid) {
    try {
      cfg.grid->validate_for(*cfg.potential);
    } catch (const Error& err) {
      bad(std::string("'grid': ") + err.what());
    }
    if (cfg.initial) (void)cfg.initial->build(*cfg.grid);
    if (cfg.run.high) (void)cfg.run.high->build(*cfg.grid);
  }
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) bad("config file " + path.string() + " does not exist");
  auto cfg = parse_config_text(io::read_text(path), path.parent_path());
  cfg.path = path;
  return cfg;
}

}  // namespace aggrokin
