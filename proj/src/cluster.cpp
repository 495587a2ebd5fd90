#include "dml/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dml/rng.hpp"

namespace dml {

DissimilarityMatrix dissimilarity_matrix(const ObservationSet& data) {
  validate(data);
  std::vector<int> cols = data.schema.feature_cols();
  DissimilarityMatrix out;
  out.n = data.n();
  out.cells.assign(static_cast<std::size_t>(out.n) * out.n, 0);
  for (int i = 0; i < out.n; ++i)
    for (int j = i + 1; j < out.n; ++j) {
      int d = 0;
      for (int c : cols)
        if (data.rows[i][c] != data.rows[j][c]) ++d;
      out.cells[static_cast<std::size_t>(i) * out.n + j] = d;
      out.cells[static_cast<std::size_t>(j) * out.n + i] = d;
    }
  return out;
}

double ward_between_variance(const std::vector<double>& centroid_a, int size_a,
                             const std::vector<double>& centroid_b, int size_b) {
  if (centroid_a.size() != centroid_b.size())
    fail(Errc::ShapeMismatch, "centroids have different dimension");
  if (size_a < 1 || size_b < 1)
    fail(Errc::InvalidArgument, "cluster sizes must be positive");
  double sq = 0.0;
  for (std::size_t i = 0; i < centroid_a.size(); ++i) {
    double d = centroid_a[i] - centroid_b[i];
    sq += d * d;
  }
  return sq / (1.0 / size_a + 1.0 / size_b);
}

double mcquitty_update(double d_ki, double d_li) { return 0.5 * (d_ki + d_li); }

namespace {

struct Cluster {
  std::vector<int> members;       // sorted, members[0] is the smallest row
  std::vector<double> centroid;   // Ward only
  int size = 0;
};

}  // namespace

Agglomeration agglomerate(const DissimilarityMatrix& dist, Linkage linkage,
                          int k, std::uint64_t seed) {
  int n = dist.n;
  if (n < 1 || static_cast<std::size_t>(n) * n != dist.cells.size())
    fail(Errc::ShapeMismatch, "matrix size mismatch");
  if (k < 1 || k > n) fail(Errc::InvalidK, "k must lie in [1, N]");

  Rng rng(seed);
  std::vector<Cluster> clusters(static_cast<std::size_t>(n));
  // Current between-cluster distances, used by McQuitty; indexed like
  // clusters. Ward recomputes its criterion from centroids instead.
  std::vector<std::vector<double>> d(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    clusters[i].members = {i};
    clusters[i].size = 1;
    if (linkage == Linkage::kWard) {
      clusters[i].centroid.resize(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j)
        clusters[i].centroid[j] = static_cast<double>(dist.at(i, j));
    }
    for (int j = 0; j < n; ++j) d[i][j] = static_cast<double>(dist.at(i, j));
  }

  Agglomeration out;
  while (static_cast<int>(clusters.size()) > k) {
    std::size_t m = clusters.size();
    auto criterion = [&](std::size_t i, std::size_t j) {
      return linkage == Linkage::kWard
                 ? ward_between_variance(clusters[i].centroid, clusters[i].size,
                                         clusters[j].centroid, clusters[j].size)
                 : d[i][j];
    };
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        best = std::min(best, criterion(i, j));
    std::vector<std::pair<std::size_t, std::size_t>> ties;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (criterion(i, j) <= best + 1e-12) ties.emplace_back(i, j);
    auto [a, b] =
        ties.size() == 1 ? ties[0] : ties[rng.uniform_int(ties.size())];

    out.merges.push_back(
        {clusters[a].members[0], clusters[b].members[0],
         linkage == Linkage::kWard
             ? ward_between_variance(clusters[a].centroid, clusters[a].size,
                                     clusters[b].centroid, clusters[b].size)
             : d[a][b]});

    if (linkage == Linkage::kMcQuitty)
      for (std::size_t i = 0; i < m; ++i) {
        if (i == a || i == b) continue;
        double nd = mcquitty_update(d[a][i], d[b][i]);
        d[a][i] = nd;
        d[i][a] = nd;
      }
    if (linkage == Linkage::kWard) {
      double na = clusters[a].size, nb = clusters[b].size;
      for (std::size_t c = 0; c < clusters[a].centroid.size(); ++c)
        clusters[a].centroid[c] =
            (na * clusters[a].centroid[c] + nb * clusters[b].centroid[c]) /
            (na + nb);
    }
    clusters[a].members.insert(clusters[a].members.end(),
                               clusters[b].members.begin(),
                               clusters[b].members.end());
    std::sort(clusters[a].members.begin(), clusters[a].members.end());
    clusters[a].size += clusters[b].size;

    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
    d.erase(d.begin() + static_cast<std::ptrdiff_t>(b));
    for (auto& row : d) row.erase(row.begin() + static_cast<std::ptrdiff_t>(b));
  }

  out.assignments.assign(static_cast<std::size_t>(n), 0);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (int r : clusters[c].members)
      out.assignments[r] = static_cast<int>(c);
  return out;
}

}  // namespace dml
