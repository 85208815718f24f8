#include "aggrokin/potential.hpp"

#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "aggrokin/errors.hpp"

namespace aggrokin {

namespace {

constexpr double gaussian_cut_sigmas = 6.0;
constexpr int radial_panels = 20000;

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorKind::invalid_potential, "potential", what);
}

void check_dim(int dim) {
  if (dim != 1 && dim != 2) invalid("dimension must be 1 or 2, got " + std::to_string(dim));
}

double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::indicator_box: return "indicator-box";
    case KernelKind::triangle: return "triangle";
    case KernelKind::truncated_gaussian: return "truncated-gaussian";
    case KernelKind::tabulated: return "tabulated";
  }
  return "unknown";
}

KernelKind kernel_kind_from_string(const std::string& name) {
  if (name == "indicator-box") return KernelKind::indicator_box;
  if (name == "triangle") return KernelKind::triangle;
  if (name == "truncated-gaussian") return KernelKind::truncated_gaussian;
  if (name == "tabulated") return KernelKind::tabulated;
  invalid("unknown kernel kind '" + name + "'");
}

Potential::Potential(KernelKind kind, int dim, double length, double amplitude, double cutoff)
    : kind_(kind), dim_(dim), length_(length), amplitude_(amplitude), cutoff_(cutoff) {
  check_dim(dim);
  if (!(length > 0.0) || !std::isfinite(length)) invalid("shape length must be positive and finite");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) invalid("amplitude must be nonnegative and finite");
}

Potential Potential::indicator_box(double half_width, double amplitude, int dim) {
  const double cutoff = dim == 2 ? half_width * std::numbers::sqrt2 : half_width;
  return Potential(KernelKind::indicator_box, dim, half_width, amplitude, cutoff);
}

Potential Potential::triangle(double half_width, double amplitude, int dim) {
  return Potential(KernelKind::triangle, dim, half_width, amplitude, half_width);
}

Potential Potential::truncated_gaussian(double sigma, double amplitude, int dim) {
  return Potential(KernelKind::truncated_gaussian, dim, sigma, amplitude, gaussian_cut_sigmas * sigma);
}

Potential Potential::tabulated(std::vector<double> offsets, std::vector<double> values, int dim) {
  if (offsets.size() != values.size()) invalid("offset and value columns differ in length");
  if (offsets.size() < 2) invalid("tabulated kernel needs at least two rows");
  for (double v : values)
    if (!std::isfinite(v)) invalid("tabulated kernel has a non-finite value (not integrable)");
  for (double v : values)
    if (v < 0.0) invalid("tabulated kernel has a negative value");

  const double dx = offsets[1] - offsets[0];
  if (!(dx > 0.0)) invalid("offsets must be strictly increasing");
  for (std::size_t i = 1; i < offsets.size(); ++i) {
    const double step = offsets[i] - offsets[i - 1];
    if (std::abs(step - dx) > 1e-9 * std::max(1.0, std::abs(dx)))
      invalid("offsets must be uniformly spaced (row " + std::to_string(i + 1) + ")");
  }

  // Symmetric tables are folded onto [0, R] after checking evenness.
  if (offsets.front() < 0.0) {
    const std::size_t n = offsets.size();
    if (std::abs(offsets.front() + offsets.back()) > 1e-9 * dx)
      invalid("table with negative offsets must be symmetric about 0");
    for (std::size_t i = 0; i < n / 2; ++i)
      if (std::abs(values[i] - values[n - 1 - i]) > 1e-12 * std::max(1.0, values[i]))
        invalid("tabulated kernel is not even");
    const std::size_t mid = n / 2;
    if (n % 2 == 0 || std::abs(offsets[mid]) > 1e-9 * dx) invalid("symmetric table must contain offset 0");
    offsets.erase(offsets.begin(), offsets.begin() + static_cast<std::ptrdiff_t>(mid));
    values.erase(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  }
  if (std::abs(offsets.front()) > 1e-9 * dx) invalid("table must start at offset 0");

  const double extent = dx * static_cast<double>(offsets.size() - 1);
  Potential p(KernelKind::tabulated, dim, extent, *std::max_element(values.begin(), values.end()), extent);
  p.table_ = std::move(values);
  p.table_dx_ = dx;
  return p;
}

Potential Potential::from_csv(const std::filesystem::path& path, int dim) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "potential", "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) invalid("empty kernel table " + path.string());
  std::erase_if(line, [](char c) { return c == ' ' || c == '\r'; });
  if (line != "x,phi") invalid("kernel table header must be 'x,phi', got '" + line + "'");
  std::vector<double> xs, vs;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x = 0.0, v = 0.0;
    if (!(ss >> x >> v)) invalid("malformed row " + std::to_string(row) + " in " + path.string());
    xs.push_back(x);
    vs.push_back(v);
  }
  return tabulated(std::move(xs), std::move(vs), dim);
}

Potential Potential::from_json(const nlohmann::json& desc) {
  const auto kind = kernel_kind_from_string(desc.at("kind").get<std::string>());
  const int dim = desc.value("dim", 1);
  switch (kind) {
    case KernelKind::indicator_box:
      return indicator_box(desc.at("half_width").get<double>(), desc.value("amplitude", 1.0), dim);
    case KernelKind::triangle:
      return triangle(desc.at("half_width").get<double>(), desc.value("amplitude", 1.0), dim);
    case KernelKind::truncated_gaussian:
      return truncated_gaussian(desc.at("sigma").get<double>(), desc.value("amplitude", 1.0), dim);
    case KernelKind::tabulated:
      if (desc.contains("file")) return from_csv(desc.at("file").get<std::string>(), dim);
      return tabulated(desc.at("offsets").get<std::vector<double>>(), desc.at("values").get<std::vector<double>>(),
                       dim);
  }
  invalid("unreachable kernel kind");
}

nlohmann::json Potential::to_json() const {
  nlohmann::json j{{"kind", to_string(kind_)}, {"dim", dim_}, {"cutoff_radius", cutoff_}};
  switch (kind_) {
    case KernelKind::indicator_box:
    case KernelKind::triangle:
      j["half_width"] = length_;
      j["amplitude"] = amplitude_;
      break;
    case KernelKind::truncated_gaussian:
      j["sigma"] = length_;
      j["amplitude"] = amplitude_;
      break;
    case KernelKind::tabulated: {
      std::vector<double> offsets(table_.size());
      for (std::size_t i = 0; i < offsets.size(); ++i) offsets[i] = table_dx_ * static_cast<double>(i);
      j["offsets"] = offsets;
      j["values"] = table_;
      break;
    }
  }
  return j;
}

double Potential::sup() const noexcept { return amplitude_; }

double Potential::profile(double r) const noexcept {
  r = std::abs(r);
  switch (kind_) {
    case KernelKind::indicator_box:
      return r <= length_ ? amplitude_ : 0.0;
    case KernelKind::triangle:
      return r < length_ ? amplitude_ * (1.0 - r / length_) : 0.0;
    case KernelKind::truncated_gaussian:
      return r <= cutoff_ ? amplitude_ * std::exp(-0.5 * (r / length_) * (r / length_)) : 0.0;
    case KernelKind::tabulated: {
      if (r > cutoff_) return 0.0;
      const double s = r / table_dx_;
      const auto i = static_cast<std::size_t>(s);
      if (i + 1 >= table_.size()) return table_.back();
      const double w = s - static_cast<double>(i);
      return (1.0 - w) * table_[i] + w * table_[i + 1];
    }
  }
  return 0.0;
}

double Potential::operator()(double x) const noexcept { return profile(x); }

double Potential::operator()(double x, double y) const noexcept {
  if (dim_ == 1) return profile(x);
  if (kind_ == KernelKind::indicator_box)
    return (std::abs(x) <= length_ && std::abs(y) <= length_) ? amplitude_ : 0.0;
  return profile(std::hypot(x, y));
}

std::vector<double> Potential::breakpoints() const {
  switch (kind_) {
    case KernelKind::indicator_box:
    case KernelKind::triangle:
    case KernelKind::truncated_gaussian:
      return {cutoff_};
    case KernelKind::tabulated: {
      std::vector<double> knots(table_.size());
      for (std::size_t i = 0; i < knots.size(); ++i) knots[i] = table_dx_ * static_cast<double>(i);
      return knots;
    }
  }
  return {};
}

RegionSupport RegionSupport::interval(double lo, double hi) {
  RegionSupport r;
  r.lo = {lo, 0.0};
  r.hi = {hi, 0.0};
  r.dim = 1;
  r.validate();
  return r;
}

RegionSupport RegionSupport::box(Point lo, Point hi) {
  RegionSupport r;
  r.lo = lo;
  r.hi = hi;
  r.dim = 2;
  r.validate();
  return r;
}

bool RegionSupport::contains(const Point& x) const noexcept {
  for (int k = 0; k < dim; ++k)
    if (x[k] < lo[k] || x[k] > hi[k]) return false;
  return true;
}

double RegionSupport::volume() const noexcept {
  double v = 1.0;
  for (int k = 0; k < dim; ++k) v *= hi[k] - lo[k];
  return v;
}

double RegionSupport::distance(const Point& x) const noexcept {
  double acc = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double d = std::max({lo[k] - x[k], 0.0, x[k] - hi[k]});
    acc += d * d;
  }
  return std::sqrt(acc);
}

void RegionSupport::validate() const {
  if (dim != 1 && dim != 2) throw Error(ErrorKind::domain, "potential", "region dimension must be 1 or 2");
  for (int k = 0; k < dim; ++k)
    if (!(lo[k] <= hi[k]) || !std::isfinite(lo[k]) || !std::isfinite(hi[k]))
      throw Error(ErrorKind::domain, "potential", "region must be a nonempty box with lo <= hi");
}

double beta(const Potential& p) {
  const double a = p.amplitude();
  const double len = p.shape_length();
  const bool two_d = p.dim() == 2;
  switch (p.kind()) {
    case KernelKind::indicator_box:
      return two_d ? a * 4.0 * len * len : a * 2.0 * len;
    case KernelKind::triangle:
      return two_d ? a * std::numbers::pi * len * len / 3.0 : a * len;
    case KernelKind::truncated_gaussian:
      return two_d ? a * 2.0 * std::numbers::pi * len * len * (1.0 - std::exp(-0.5 * 36.0))
                   : a * len * std::sqrt(2.0 * std::numbers::pi) * std::erf(6.0 / std::numbers::sqrt2);
    case KernelKind::tabulated: {
      const auto knots = p.breakpoints();
      const int panels = std::max(radial_panels, 2 * static_cast<int>(knots.size()));
      if (two_d) {
        auto f = [&](double r) { return 2.0 * std::numbers::pi * r * p.profile(r); };
        return quadrature::simpson_split(f, 0.0, p.cutoff_radius(), knots, panels);
      }
      auto f = [&](double r) { return p.profile(r); };
      const double half = quadrature::simpson_split(f, 0.0, p.cutoff_radius(), knots, panels);
      if (!std::isfinite(half)) invalid("tabulated kernel is not integrable");
      return 2.0 * half;
    }
  }
  return 0.0;
}

double c_phi(const Potential& p) {
  const double a = p.amplitude();
  const double len = p.shape_length();
  if (p.kind() == KernelKind::indicator_box)
    return (p.dim() == 2 ? 4.0 * len * len : 2.0 * len) * -std::expm1(-a);
  const auto knots = p.breakpoints();
  const int panels = std::max(radial_panels, 2 * static_cast<int>(knots.size()));
  if (p.dim() == 2) {
    auto f = [&](double r) { return 2.0 * std::numbers::pi * r * -std::expm1(-p.profile(r)); };
    return quadrature::simpson_split(f, 0.0, p.cutoff_radius(), knots, panels);
  }
  auto f = [&](double r) { return -std::expm1(-p.profile(r)); };
  return 2.0 * quadrature::simpson_split(f, 0.0, p.cutoff_radius(), knots, panels);
}

double s_A(const Potential& p, const RegionSupport& a, double x) { return s_A(p, a, Point{x, 0.0}); }

double s_A(const Potential& p, const RegionSupport& a, const Point& x) {
  const double cut = p.cutoff_radius();
  if (a.distance(x) > cut || p.is_zero()) return 0.0;

  if (p.kind() == KernelKind::indicator_box) {
    const double h = p.shape_length();
    double mass = p.amplitude();
    for (int k = 0; k < a.dim; ++k) mass *= overlap(x[k] - h, x[k] + h, a.lo[k], a.hi[k]);
    return mass;
  }

  if (a.dim == 1) {
    const double y0 = std::max(a.lo[0], x[0] - cut);
    const double y1 = std::min(a.hi[0], x[0] + cut);
    std::vector<double> breaks{x[0]};
    for (double r : p.breakpoints()) {
      breaks.push_back(x[0] - r);
      breaks.push_back(x[0] + r);
    }
    auto f = [&](double y) { return p(x[0] - y); };
    return quadrature::simpson_split(f, y0, y1, breaks, 4000);
  }

  const double y0 = std::max(a.lo[0], x[0] - cut), y1 = std::min(a.hi[0], x[0] + cut);
  const double z0 = std::max(a.lo[1], x[1] - cut), z1 = std::min(a.hi[1], x[1] + cut);
  constexpr int panels = 120;
  auto row = [&](double y) {
    auto g = [&](double z) { return p(x[0] - y, x[1] - z); };
    return quadrature::simpson(g, z0, z1, panels);
  };
  return quadrature::simpson(row, y0, y1, panels);
}

namespace {

/// Golden-section minimization of a unimodal-near-optimum function on [lo, hi].
template <class F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, int iters = 60) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && hi - lo > 1e-14; ++i) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
  }
  return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace

double phi_A(const Potential& p, const RegionSupport& a) {
  a.validate();
  if (p.is_zero()) return 0.0;
  const double pitch = p.cutoff_radius() / 32.0;

  std::array<int, 2> count{1, 1};
  std::array<double, 2> step{0.0, 0.0};
  for (int k = 0; k < a.dim; ++k) {
    const double width = a.hi[k] - a.lo[k];
    count[k] = std::max(2, static_cast<int>(std::ceil(width / pitch)) + 1);
    step[k] = width / (count[k] - 1);
  }

  Point best{a.lo[0], a.lo[1]};
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count[0]; ++i)
    for (int j = 0; j < count[1]; ++j) {
      const Point x{a.lo[0] + i * step[0], a.dim == 2 ? a.lo[1] + j * step[1] : 0.0};
      const double v = s_A(p, a, x);
      if (v < best_val) {
        best_val = v;
        best = x;
      }
    }

  // Coordinate-wise polish within one grid pitch of the best node.
  for (int pass = 0; pass < (a.dim == 2 ? 3 : 1); ++pass)
    for (int k = 0; k < a.dim; ++k) {
      const double lo = std::max(a.lo[k], best[k] - step[k]);
      const double hi = std::min(a.hi[k], best[k] + step[k]);
      if (hi <= lo) continue;
      auto f = [&](double t) {
        Point x = best;
        x[k] = t;
        return s_A(p, a, x);
      };
      const auto [arg, val] = golden_min(f, lo, hi);
      if (val < best_val) {
        best_val = val;
        best[k] = arg;
      }
    }
  return best_val;
}

}  // namespace aggrokin
