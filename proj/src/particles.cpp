#include "aggrokin/particles.hpp"

#include <algorithm>
#include <cmath>

#include "aggrokin/errors.hpp"

namespace aggrokin {

ParticleConfiguration::ParticleConfiguration(const Potential& p, double L)
    : phi_(p), dim_(p.dim()), L_(L), cutoff_(p.cutoff_radius()) {
  if (!(L > 2.0 * cutoff_))
    throw Error(ErrorKind::domain, "micro_sim", "torus side must exceed twice the kernel cutoff");
  nc_ = static_cast<int>(std::floor(L / cutoff_));
  if (nc_ < 3 || phi_.is_zero()) nc_ = 1;
  // Keep the table of cells modest in 2D.
  if (dim_ == 2) nc_ = std::min(nc_, 1024);
  cells_.resize(dim_ == 1 ? static_cast<std::size_t>(nc_) : static_cast<std::size_t>(nc_) * nc_);
}

Point ParticleConfiguration::wrap(Point x) const noexcept {
  for (int a = 0; a < dim_; ++a) {
    x[a] -= L_ * std::floor((x[a] + 0.5 * L_) / L_);
    if (x[a] >= 0.5 * L_) x[a] = -0.5 * L_;
  }
  if (dim_ == 1) x[1] = 0.0;
  return x;
}

std::size_t ParticleConfiguration::cell_of(const Point& x) const noexcept {
  auto axis = [&](double v) {
    int c = static_cast<int>(std::floor((v + 0.5 * L_) / L_ * nc_));
    return std::clamp(c, 0, nc_ - 1);
  };
  if (dim_ == 1) return static_cast<std::size_t>(axis(x[0]));
  return static_cast<std::size_t>(axis(x[0])) * nc_ + static_cast<std::size_t>(axis(x[1]));
}

template <class F>
void ParticleConfiguration::for_neighbors(const Point& x, F&& f) const {
  if (nc_ == 1) {
    for (std::size_t j : cells_[0]) f(j);
    return;
  }
  const std::size_t c = cell_of(x);
  if (dim_ == 1) {
    const int ci = static_cast<int>(c);
    for (int d = -1; d <= 1; ++d)
      for (std::size_t j : cells_[static_cast<std::size_t>((ci + d + nc_) % nc_)]) f(j);
    return;
  }
  const int ci = static_cast<int>(c / nc_), cj = static_cast<int>(c % nc_);
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj) {
      const auto cell = static_cast<std::size_t>((ci + di + nc_) % nc_) * nc_ + static_cast<std::size_t>((cj + dj + nc_) % nc_);
      for (std::size_t j : cells_[cell]) f(j);
    }
}

double ParticleConfiguration::phi_per(const Point& a, const Point& b) const noexcept {
  auto image = [&](double d) { return d - L_ * std::round(d / L_); };
  if (dim_ == 1) return phi_(image(a[0] - b[0]));
  return phi_(image(a[0] - b[0]), image(a[1] - b[1]));
}

double ParticleConfiguration::energy_at(const Point& x, std::size_t skip) const {
  if (phi_.is_zero()) return 0.0;
  double e = 0.0;
  for_neighbors(x, [&](std::size_t j) {
    if (j != skip) e += phi_per(x, pos_[j]);
  });
  return e;
}

std::size_t ParticleConfiguration::add(Point x, std::vector<std::size_t>* touched) {
  x = wrap(x);
  const std::size_t idx = pos_.size();
  if (touched) touched->clear();
  double e = 0.0;
  if (!phi_.is_zero()) {
    for_neighbors(x, [&](std::size_t j) {
      const double v = phi_per(x, pos_[j]);
      if (v != 0.0) {
        e += v;
        energy_[j] += v;
        if (touched) touched->push_back(j);
      }
    });
  }
  const std::size_t cell = cell_of(x);
  pos_.push_back(x);
  energy_.push_back(e);
  slot_.push_back({cell, cells_[cell].size()});
  cells_[cell].push_back(idx);
  if (touched) touched->push_back(idx);
  return idx;
}

void ParticleConfiguration::remove(std::size_t i, std::size_t* moved_from, std::vector<std::size_t>* touched) {
  if (i >= pos_.size()) throw Error(ErrorKind::domain, "micro_sim", "particle index out of range");
  if (touched) touched->clear();
  const std::size_t last = pos_.size() - 1;
  const Point x = pos_[i];
  if (!phi_.is_zero()) {
    for_neighbors(x, [&](std::size_t j) {
      if (j == i) return;
      const double v = phi_per(x, pos_[j]);
      if (v != 0.0) {
        energy_[j] -= v;
        if (touched) touched->push_back(j == last ? i : j);
      }
    });
  }
  // Unlink i from its cell.
  {
    auto& list = cells_[slot_[i].cell];
    const std::size_t off = slot_[i].offset;
    const std::size_t tail = list.back();
    list[off] = tail;
    slot_[tail].offset = off;
    list.pop_back();
  }
  // Move the last particle into slot i.
  if (i != last) {
    pos_[i] = pos_[last];
    energy_[i] = energy_[last];
    slot_[i] = slot_[last];
    cells_[slot_[i].cell][slot_[i].offset] = i;
  }
  pos_.pop_back();
  energy_.pop_back();
  slot_.pop_back();
  if (moved_from) *moved_from = last;
}

void ParticleConfiguration::clear() {
  pos_.clear();
  energy_.clear();
  slot_.clear();
  for (auto& c : cells_) c.clear();
}

double ParticleConfiguration::audit() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < pos_.size(); ++i) {
    double e = 0.0;
    for (std::size_t j = 0; j < pos_.size(); ++j)
      if (j != i) e += phi_per(pos_[i], pos_[j]);
    worst = std::max(worst, std::abs(energy_[i] - e) / std::max(1.0, std::abs(e)));
  }
  return worst;
}

std::size_t ParticleConfiguration::count_in(const RegionSupport& region) const {
  return static_cast<std::size_t>(
      std::count_if(pos_.begin(), pos_.end(), [&](const Point& x) { return region.contains(x); }));
}

}  // namespace aggrokin
