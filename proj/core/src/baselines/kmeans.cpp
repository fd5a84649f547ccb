#include "hotspot/baselines/kmeans.hpp"

#include <random>
#include <set>

#include "hotspot/common/error.hpp"

namespace hotspot::baselines {

std::size_t count_distinct_rows(const nn::RowMatrix& points, std::size_t limit) {
  std::set<std::vector<double>> seen;
  for (Eigen::Index i = 0; i < points.rows() && seen.size() < limit; ++i) {
    seen.emplace(points.row(i).data(), points.row(i).data() + points.cols());
  }
  return seen.size();
}

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

nn::RowMatrix kmeans_plus_plus(const nn::RowMatrix& points, int k, std::uint64_t seed) {
  const Eigen::Index n = points.rows();
  std::mt19937_64 rng(seed);
  nn::RowMatrix centroids(k, points.cols());
  centroids.row(0) = points.row(static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(n)));
  Eigen::VectorXd d2 = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0) {
      const double target = uniform01(rng) * total;
      double acc = 0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0) {
          pick = i;
          break;
        }
      }
    } else {
      (void)uniform01(rng);
    }
    centroids.row(c) = points.row(pick);
    d2 = d2.cwiseMin((points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }
  return centroids;
}

KMeansResult lloyd(const nn::RowMatrix& points, nn::RowMatrix centroids,
                   const KMeansOptions& options) {
  const Eigen::Index n = points.rows(), d = points.cols();
  const Eigen::Index k = centroids.rows();
  KMeansResult res;
  res.assignment.assign(static_cast<std::size_t>(n), 0);
  auto assign = [&] {
    double inertia = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (points.row(i) - centroids.row(0)).squaredNorm();
      for (Eigen::Index c = 1; c < k; ++c) {
        const double dist = (points.row(i) - centroids.row(c)).squaredNorm();
        if (dist < best_d) {
          best_d = dist;
          best = static_cast<int>(c);
        }
      }
      res.assignment[static_cast<std::size_t>(i)] = best;
      inertia += best_d;
    }
    return inertia;
  };
  res.inertia = assign();
  for (int it = 0; it < options.max_iterations; ++it) {
    nn::RowMatrix sums = nn::RowMatrix::Zero(k, d);
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = res.assignment[static_cast<std::size_t>(i)];
      sums.row(c) += points.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    double shift = 0;
    for (Eigen::Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) continue;
      const Eigen::RowVectorXd next = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      shift = std::max(shift, (next - centroids.row(c)).norm());
      centroids.row(c) = next;
    }
    res.inertia = assign();
    res.iterations = it + 1;
    if (shift <= options.tolerance) break;
  }
  res.centroids = std::move(centroids);
  return res;
}

KMeansResult kmeans(const nn::RowMatrix& points, int k, const KMeansOptions& options) {
  if (k < 2) throw ValidationError("k must be at least 2");
  const std::size_t distinct = count_distinct_rows(points, static_cast<std::size_t>(k));
  if (distinct < static_cast<std::size_t>(k)) {
    throw ValidationError("k = " + std::to_string(k) + " exceeds the " + std::to_string(distinct) +
                          " distinct pixel values");
  }
  return lloyd(points, kmeans_plus_plus(points, k, options.seed), options);
}

}  // namespace hotspot::baselines
