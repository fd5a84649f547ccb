#pragma once

#include <cstdint>
#include <vector>

#include "hotspot/nn/tensor.hpp"

namespace hotspot::baselines {

struct KMeansOptions {
  int max_iterations = 300;
  double tolerance = 1e-4;  // on the largest centroid displacement
  std::uint64_t seed = 0;
};

struct KMeansResult {
  nn::RowMatrix centroids;  // k×d
  std::vector<int> assignment;
  int iterations = 0;
  double inertia = 0;  // within-cluster sum of squares
};

// Number of distinct rows, counting stops once `limit` is reached.
std::size_t count_distinct_rows(const nn::RowMatrix& points, std::size_t limit);

// k-means++ seeding: first centre uniform, later ones with probability
// proportional to the squared distance from the nearest chosen centre.
nn::RowMatrix kmeans_plus_plus(const nn::RowMatrix& points, int k, std::uint64_t seed);

// Lloyd iterations from the given centres. Ties go to the lower cluster
// index; an emptied cluster keeps its previous centre.
KMeansResult lloyd(const nn::RowMatrix& points, nn::RowMatrix centroids,
                   const KMeansOptions& options);

// Throws ValidationError if k < 2 or the points have fewer than k distinct rows.
KMeansResult kmeans(const nn::RowMatrix& points, int k, const KMeansOptions& options);

}  // namespace hotspot::baselines
