#pragma once

#include <cstdint>
#include <vector>

#include "aggrokin/potential.hpp"

namespace aggrokin {

/// Finite point set on the torus [-L/2, L/2)^d with per-particle interaction
/// energies E(x_i) = sum_{j != i} phi(x_i - x_j) under the minimum-image
/// convention. A uniform cell list (cell side >= cutoff) keeps updates local.
class ParticleConfiguration {
 public:
  ParticleConfiguration(const Potential& p, double L);

  std::size_t size() const noexcept { return pos_.size(); }
  bool empty() const noexcept { return pos_.empty(); }
  int dim() const noexcept { return dim_; }
  double L() const noexcept { return L_; }
  const Potential& potential() const noexcept { return phi_; }
  const Point& position(std::size_t i) const { return pos_[i]; }
  const std::vector<Point>& positions() const noexcept { return pos_; }
  double energy(std::size_t i) const { return energy_[i]; }

  /// Wraps x into the box, inserts it and returns its index. `touched`
  /// receives the indices whose energy changed (including the new one).
  std::size_t add(Point x, std::vector<std::size_t>* touched = nullptr);
  /// Removes particle i. The last particle moves into slot i; `moved_from`
  /// reports its old index (== i when i was last). `touched` as for add, in
  /// post-removal indices.
  void remove(std::size_t i, std::size_t* moved_from = nullptr, std::vector<std::size_t>* touched = nullptr);
  void clear();

  /// Minimum-image periodized kernel value between two points.
  double phi_per(const Point& a, const Point& b) const noexcept;
  /// Energy a particle at x would feel from every stored particle except `skip`.
  double energy_at(const Point& x, std::size_t skip = static_cast<std::size_t>(-1)) const;
  /// Largest |cached - recomputed| / max(1, |recomputed|) over all particles (O(N^2)).
  double audit() const;

  /// Number of particles inside a box region.
  std::size_t count_in(const RegionSupport& region) const;

 private:
  struct Slot {
    std::size_t cell;
    std::size_t offset;
  };

  Point wrap(Point x) const noexcept;
  std::size_t cell_of(const Point& x) const noexcept;
  template <class F>
  void for_neighbors(const Point& x, F&& f) const;

  Potential phi_;
  int dim_;
  double L_;
  double cutoff_;
  int nc_;  ///< cells per axis (1 disables the cell list)
  std::vector<Point> pos_;
  std::vector<double> energy_;
  std::vector<Slot> slot_;
  std::vector<std::vector<std::size_t>> cells_;
};

}  // namespace aggrokin
