#include "aggrokin/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aggrokin/errors.hpp"
#include "aggrokin/io.hpp"

namespace aggrokin {

namespace {

constexpr std::size_t min_replicas = 8;

void require_replicas(const ReplicaSet& s) {
  if (s.size() < min_replicas)
    throw Error(ErrorKind::insufficient_data, "micro_sim",
                "estimators need at least 8 replicas, got " + std::to_string(s.size()));
}

struct MeanSe {
  double mean = 0.0, se = 0.0;
};

MeanSe mean_se(std::span<const double> v) {
  MeanSe r;
  const double n = static_cast<double>(v.size());
  for (double x : v) r.mean += x;
  r.mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  r.se = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return r;
}

std::vector<double> centers_of(const std::vector<double>& edges) {
  std::vector<double> c;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) c.push_back(0.5 * (edges[i] + edges[i + 1]));
  return c;
}

int slab(double x, double L, int bins) {
  const int b = static_cast<int>(std::floor((x + 0.5 * L) / L * bins));
  return std::clamp(b, 0, bins - 1);
}

double min_image_distance(const Point& a, const Point& b, double L, int dim) {
  auto image = [L](double d) { return d - L * std::round(d / L); };
  const double dx = image(a[0] - b[0]);
  if (dim == 1) return std::abs(dx);
  const double dy = image(a[1] - b[1]);
  return std::hypot(dx, dy);
}

// Integral over [a, b] of max(0, w - |s - c|).
double tent_integral(double c, double w, double a, double b) {
  auto F = [&](double s) {
    const double z = std::clamp(s - c, -w, w);
    return z <= 0.0 ? 0.5 * (w + z) * (w + z) : w * w - 0.5 * (w - z) * (w - z);
  };
  return F(b) - F(a);
}

// Measure of {(x, y) : x in [0, w), y in [D w, D w + w), r1 <= d_per(x, y) < r2} in 1D.
double pair_measure_1d(int D, double w, double L, double r1, double r2) {
  const double c = D * w;
  double total = 0.0;
  const int reach = static_cast<int>(std::ceil((std::abs(c) + w + r2) / L)) + 1;
  for (int n = -reach; n <= reach; ++n) {
    total += tent_integral(c, w, n * L + r1, n * L + r2);
    total += tent_integral(c, w, n * L - r2, n * L - r1);
  }
  return total;
}

}  // namespace

std::vector<double> DensityEstimate::centers() const { return centers_of(edges); }
std::vector<double> PairEstimate::centers() const { return centers_of(edges); }

DensityEstimate estimate_density(const ReplicaSet& snapshots, double epsilon, double L, int dim, int bins) {
  require_replicas(snapshots);
  if (bins < 1) throw Error(ErrorKind::domain, "micro_sim", "density estimate needs at least one bin");
  DensityEstimate est;
  est.replicas = snapshots.size();
  const double w = L / bins;
  const double vol = dim == 1 ? w : w * L;
  for (int b = 0; b <= bins; ++b) est.edges.push_back(-0.5 * L + b * w);
  std::vector<std::vector<double>> per_bin(static_cast<std::size_t>(bins), std::vector<double>(snapshots.size(), 0.0));
  for (std::size_t r = 0; r < snapshots.size(); ++r)
    for (const auto& x : snapshots[r]) per_bin[static_cast<std::size_t>(slab(x[0], L, bins))][r] += epsilon / vol;
  for (const auto& v : per_bin) {
    const auto ms = mean_se(v);
    est.k1.push_back(ms.mean);
    est.stderr_.push_back(ms.se);
  }
  return est;
}

PairEstimate estimate_pair_correlation(const ReplicaSet& snapshots, double epsilon, double L, int dim, double r_max,
                                       int bins, int k1_bins) {
  require_replicas(snapshots);
  if (bins < 1 || k1_bins < 1) throw Error(ErrorKind::domain, "micro_sim", "pair estimate needs positive bin counts");
  if (!(r_max > 0.0) || r_max > 0.5 * L)
    throw Error(ErrorKind::domain, "micro_sim", "pair distance range must lie in (0, L/2]");
  const std::size_t R = snapshots.size();
  const double dr = r_max / bins;
  const double volL = dim == 1 ? L : L * L;

  PairEstimate est;
  est.replicas = R;
  for (int b = 0; b <= bins; ++b) est.edges.push_back(b * dr);

  // Per replica: ordered pair counts per shell and the slab histogram of epsilon * counts / slab volume.
  std::vector<std::vector<double>> pairs(R, std::vector<double>(static_cast<std::size_t>(bins), 0.0));
  std::vector<std::vector<double>> hist(R, std::vector<double>(static_cast<std::size_t>(k1_bins), 0.0));
  const double w = L / k1_bins;
  const double slab_vol = dim == 1 ? w : w * L;
  for (std::size_t r = 0; r < R; ++r) {
    const auto& pts = snapshots[r];
    for (std::size_t i = 0; i < pts.size(); ++i) {
      hist[r][static_cast<std::size_t>(slab(pts[i][0], L, k1_bins))] += epsilon / slab_vol;
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double d = min_image_distance(pts[i], pts[j], L, dim);
        if (d < r_max) pairs[r][static_cast<std::size_t>(std::min(bins - 1, static_cast<int>(d / dr)))] += 2.0;
      }
    }
  }

  std::vector<double> shell(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) {
    const double r1 = b * dr, r2 = (b + 1) * dr;
    shell[static_cast<std::size_t>(b)] = dim == 1 ? 2.0 * (r2 - r1) : std::numbers::pi * (r2 * r2 - r1 * r1);
  }

  // Pair-integral weights M[b][D] for slabs D apart (1D); the 2D product term
  // treats the density as uniform across the second axis and the shell.
  std::vector<std::vector<double>> M(static_cast<std::size_t>(bins), std::vector<double>(static_cast<std::size_t>(k1_bins)));
  for (int b = 0; b < bins; ++b)
    for (int D = 0; D < k1_bins; ++D)
      M[static_cast<std::size_t>(b)][static_cast<std::size_t>(D)] =
          dim == 1 ? pair_measure_1d(D, w, L, b * dr, (b + 1) * dr) : 0.0;

  auto product_term = [&](const std::vector<double>& rho, int b) {
    if (dim == 2) {
      double mean = 0.0;
      for (double v : rho) mean += v;
      mean /= static_cast<double>(rho.size());
      return mean * mean * volL * shell[static_cast<std::size_t>(b)];
    }
    double s = 0.0;
    for (int i = 0; i < k1_bins; ++i)
      for (int D = 0; D < k1_bins; ++D)
        s += rho[static_cast<std::size_t>(i)] * rho[static_cast<std::size_t>((i + D) % k1_bins)] *
             M[static_cast<std::size_t>(b)][static_cast<std::size_t>(D)];
    return s;
  };

  std::vector<double> pair_sum(static_cast<std::size_t>(bins), 0.0), rho_sum(static_cast<std::size_t>(k1_bins), 0.0);
  for (std::size_t r = 0; r < R; ++r) {
    for (int b = 0; b < bins; ++b) pair_sum[static_cast<std::size_t>(b)] += pairs[r][static_cast<std::size_t>(b)];
    for (int i = 0; i < k1_bins; ++i) rho_sum[static_cast<std::size_t>(i)] += hist[r][static_cast<std::size_t>(i)];
  }
  const double e2 = epsilon * epsilon;
  for (int b = 0; b < bins; ++b) {
    const auto bi = static_cast<std::size_t>(b);
    std::vector<double> k2r(R);
    for (std::size_t r = 0; r < R; ++r) k2r[r] = e2 * pairs[r][bi] / (volL * shell[bi]);
    const auto ms = mean_se(k2r);
    est.k2.push_back(ms.mean);
    est.stderr_.push_back(ms.se);

    std::vector<double> rho(rho_sum);
    for (double& v : rho) v /= static_cast<double>(R);
    const double denom = product_term(rho, b);
    est.chaos_ratio.push_back(denom > 0.0 ? e2 * pair_sum[bi] / static_cast<double>(R) / denom : 0.0);

    std::vector<double> jack(R);
    for (std::size_t r = 0; r < R; ++r) {
      for (int i = 0; i < k1_bins; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        rho[ii] = (rho_sum[ii] - hist[r][ii]) / static_cast<double>(R - 1);
      }
      const double dj = product_term(rho, b);
      jack[r] = dj > 0.0 ? e2 * (pair_sum[bi] - pairs[r][bi]) / static_cast<double>(R - 1) / dj : 0.0;
    }
    double jm = 0.0;
    for (double v : jack) jm += v;
    jm /= static_cast<double>(R);
    double ss = 0.0;
    for (double v : jack) ss += (v - jm) * (v - jm);
    est.ratio_stderr.push_back(std::sqrt(ss * static_cast<double>(R - 1) / static_cast<double>(R)));
  }
  return est;
}

void DensityEstimate::write_csv(const std::filesystem::path& path) const {
  io::CsvWriter w(path, {"bin_center", "value", "stderr"});
  const auto c = centers();
  for (std::size_t i = 0; i < c.size(); ++i) w.row({c[i], k1[i], stderr_[i]});
}

void PairEstimate::write_csv(const std::filesystem::path& path) const {
  io::CsvWriter w(path, {"bin_center", "value", "stderr", "chaos_ratio", "ratio_stderr"});
  const auto c = centers();
  for (std::size_t i = 0; i < c.size(); ++i) w.row({c[i], k2[i], stderr_[i], chaos_ratio[i], ratio_stderr[i]});
}

nlohmann::json to_json(const DensityEstimate& e) {
  return {{"bin_center", e.centers()}, {"k1", e.k1}, {"stderr", e.stderr_}, {"replicas", e.replicas}};
}

nlohmann::json to_json(const PairEstimate& e) {
  return {{"bin_center", e.centers()}, {"k2", e.k2},       {"stderr", e.stderr_}, {"chaos_ratio", e.chaos_ratio},
          {"ratio_stderr", e.ratio_stderr}, {"replicas", e.replicas}};
}

}  // namespace aggrokin
