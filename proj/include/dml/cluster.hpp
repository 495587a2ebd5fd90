#pragma once

#include <cstdint>
#include <vector>

#include "dml/events.hpp"

namespace dml {

// Pairwise mismatched-feature counts. The class column never participates,
// so every cell is bounded by the feature count.
struct DissimilarityMatrix {
  int n = 0;
  std::vector<int> cells;  // row-major n * n

  int at(int i, int j) const { return cells[static_cast<std::size_t>(i) * n + j]; }
};

DissimilarityMatrix dissimilarity_matrix(const ObservationSet& data);

// Ward's between-cluster variance for clusters summarized by centroid and
// size: squared Euclidean distance over (1/n_a + 1/n_b).
double ward_between_variance(const std::vector<double>& centroid_a, int size_a,
                             const std::vector<double>& centroid_b, int size_b);

// Weighted-average distance from a freshly merged pair to another cluster.
double mcquitty_update(double d_ki, double d_li);

enum class Linkage { kWard, kMcQuitty };

struct MergeStep {
  int a = 0;  // smallest member row on each side, a < b
  int b = 0;
  double criterion = 0.0;
};

struct Agglomeration {
  // Cluster labels 0..k-1, numbered by smallest member row.
  std::vector<int> assignments;
  std::vector<MergeStep> merges;
};

// Bottom-up merging of matrix rows until k clusters remain. Ward treats
// matrix rows as Euclidean coordinates and pools centroids size-weighted;
// McQuitty averages distances. All pairs within 1e-12 of the minimum
// criterion are merge candidates and one is drawn uniformly with the seeded
// generator.
Agglomeration agglomerate(const DissimilarityMatrix& dist, Linkage linkage,
                          int k, std::uint64_t seed);

}  // namespace dml
