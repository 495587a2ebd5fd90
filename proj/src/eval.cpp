#include "dml/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dml/rng.hpp"

namespace dml {

namespace {

void check_labels(const std::vector<int>& labels, int k, const char* what) {
  for (int v : labels)
    if (v < 0 || v >= k)
      fail(Errc::InvalidArgument, std::string(what) + " label outside [0, k)");
}

double sample_stddev(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) {
    double d = x - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

ObservationSet subset_rows(const ObservationSet& data,
                           const std::vector<int>& idx, int begin, int end) {
  ObservationSet out;
  out.schema = data.schema;
  out.rows.reserve(static_cast<std::size_t>(end - begin));
  for (int i = begin; i < end; ++i)
    out.rows.push_back(data.rows[idx[i]]);
  return out;
}

}  // namespace

MappingResult best_mapping_accuracy(const std::vector<int>& groups,
                                    const std::vector<int>& gold, int k) {
  if (groups.size() != gold.size() || groups.empty())
    fail(Errc::LengthMismatch, "groups and gold must align and be nonempty");
  if (k < 1) fail(Errc::InvalidK, "k must be positive");
  if (k > 8) fail(Errc::KTooLarge, "exhaustive mapping is limited to k <= 8");
  check_labels(groups, k, "group");
  check_labels(gold, k, "gold");

  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  MappingResult best;
  best.accuracy = -1.0;
  do {
    int hits = 0;
    for (std::size_t r = 0; r < groups.size(); ++r)
      if (perm[groups[r]] == gold[r]) ++hits;
    double acc = static_cast<double>(hits) / static_cast<double>(groups.size());
    // Lexicographic enumeration plus strict improvement keeps the smallest
    // mapping among ties.
    if (acc > best.accuracy) {
      best.accuracy = acc;
      best.mapping = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double majority_baseline(const std::vector<int>& gold, int k) {
  if (gold.empty()) fail(Errc::LengthMismatch, "gold labels are empty");
  if (k < 1) fail(Errc::InvalidK, "k must be positive");
  check_labels(gold, k, "gold");
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int v : gold) ++counts[v];
  int best = *std::max_element(counts.begin(), counts.end());
  return static_cast<double>(best) / static_cast<double>(gold.size());
}

ConfusionMatrix confusion(const std::vector<int>& groups,
                          const std::vector<int>& gold,
                          const std::vector<int>& mapping, int k) {
  if (groups.size() != gold.size() || groups.empty())
    fail(Errc::LengthMismatch, "groups and gold must align and be nonempty");
  if (static_cast<int>(mapping.size()) != k)
    fail(Errc::LengthMismatch, "mapping must cover every group label");
  check_labels(groups, k, "group");
  check_labels(gold, k, "gold");
  std::vector<char> seen(static_cast<std::size_t>(k), 0);
  for (int v : mapping) {
    if (v < 0 || v >= k || seen[v])
      fail(Errc::InvalidArgument, "mapping is not a permutation");
    seen[v] = 1;
  }
  ConfusionMatrix out;
  out.k = k;
  out.cells.assign(static_cast<std::size_t>(k) * k, 0);
  for (std::size_t r = 0; r < groups.size(); ++r)
    ++out.cells[static_cast<std::size_t>(gold[r]) * k + mapping[groups[r]]];
  return out;
}

std::vector<std::vector<int>> make_folds(int n, int folds, std::uint64_t seed) {
  if (folds < 2 || folds > n)
    fail(Errc::InvalidArgument, "folds must lie in [2, N]");
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(idx);
  std::vector<std::vector<int>> out;
  int base = n / folds, rem = n % folds, at = 0;
  for (int f = 0; f < folds; ++f) {
    int len = base + (f < rem ? 1 : 0);
    out.emplace_back(idx.begin() + at, idx.begin() + at + len);
    at += len;
  }
  return out;
}

CvResult k_fold_cv(const ObservationSet& data, int folds,
                   const SupervisedLearner& learner, std::uint64_t seed) {
  validate(data);
  if (!data.fully_labeled())
    fail(Errc::MissingValue, "cross-validation requires labeled data");
  std::vector<std::vector<int>> fold_idx = make_folds(data.n(), folds, seed);

  CvResult res;
  for (int f = 0; f < folds; ++f) {
    ObservationSet train;
    train.schema = data.schema;
    for (int g = 0; g < folds; ++g) {
      if (g == f) continue;
      for (int r : fold_idx[g]) train.rows.push_back(data.rows[r]);
    }
    double acc = 0.0;
    try {
      TrainedClassifier clf = learner(train);
      int hits = 0;
      for (int r : fold_idx[f])
        if (clf(data.rows[r]) == data.rows[r][data.schema.class_col]) ++hits;
      acc = static_cast<double>(hits) / static_cast<double>(fold_idx[f].size());
    } catch (const std::exception& e) {
      fail(Errc::LearnerFailure,
           "fold " + std::to_string(f) + ": " + e.what());
    }
    res.per_fold.push_back(acc);
  }
  res.mean = std::accumulate(res.per_fold.begin(), res.per_fold.end(), 0.0) /
             static_cast<double>(folds);
  res.stddev = sample_stddev(res.per_fold, res.mean);
  return res;
}

TrialsResult repeated_trials(const ObservationSet& data,
                             const std::vector<int>& gold,
                             const UnsupervisedLearner& learner, int trials,
                             std::uint64_t base_seed) {
  validate(data);
  if (trials < 1) fail(Errc::InvalidArgument, "need at least one trial");
  if (static_cast<int>(gold.size()) != data.n())
    fail(Errc::LengthMismatch, "one gold label per row required");

  int k = data.schema.k();
  for (int v : gold) k = std::max(k, v + 1);

  TrialsResult res;
  for (int t = 0; t < trials; ++t) {
    std::vector<int> labels = learner(data, base_seed + static_cast<std::uint64_t>(t));
    if (static_cast<int>(labels.size()) != data.n())
      fail(Errc::LengthMismatch, "learner returned wrong label count");
    int kt = k;
    for (int v : labels) kt = std::max(kt, v + 1);
    res.per_trial.push_back(best_mapping_accuracy(labels, gold, kt).accuracy);
    res.assignments.push_back(std::move(labels));
  }
  res.mean = std::accumulate(res.per_trial.begin(), res.per_trial.end(), 0.0) /
             static_cast<double>(trials);
  res.stddev = sample_stddev(res.per_trial, res.mean);
  return res;
}

LearningCurve learning_curve(const ObservationSet& data,
                             const std::vector<int>& sizes, int folds,
                             const SupervisedLearner& learner,
                             std::uint64_t seed) {
  validate(data);
  if (!data.fully_labeled())
    fail(Errc::MissingValue, "learning curves require labeled data");
  if (sizes.empty()) fail(Errc::InvalidArgument, "no training sizes given");
  for (int m : sizes) {
    if (m < 1) fail(Errc::InvalidArgument, "training sizes must be positive");
    if (static_cast<double>(m) > 0.9 * static_cast<double>(data.n()))
      fail(Errc::SizeTooLarge,
           "size " + std::to_string(m) + " exceeds 0.9 of the data");
  }
  std::vector<std::vector<int>> fold_idx = make_folds(data.n(), folds, seed);

  LearningCurve out;
  out.sizes = sizes;
  out.accuracy.assign(sizes.size(), 0.0);
  Rng rng(seed);
  for (int f = 0; f < folds; ++f) {
    std::vector<int> pool;
    for (int g = 0; g < folds; ++g) {
      if (g == f) continue;
      pool.insert(pool.end(), fold_idx[g].begin(), fold_idx[g].end());
    }
    rng.shuffle(pool);
    for (std::size_t si = 0; si < sizes.size(); ++si) {
      int m = sizes[si];
      if (m > static_cast<int>(pool.size()))
        fail(Errc::SizeTooLarge,
             "size " + std::to_string(m) + " exceeds the training pool");
      double acc = 0.0;
      try {
        TrainedClassifier clf = learner(subset_rows(data, pool, 0, m));
        int hits = 0;
        for (int r : fold_idx[f])
          if (clf(data.rows[r]) == data.rows[r][data.schema.class_col]) ++hits;
        acc = static_cast<double>(hits) /
              static_cast<double>(fold_idx[f].size());
      } catch (const std::exception& e) {
        fail(Errc::LearnerFailure, "fold " + std::to_string(f) + " size " +
                                       std::to_string(m) + ": " + e.what());
      }
      out.accuracy[si] += acc;
    }
  }
  for (double& a : out.accuracy) a /= static_cast<double>(folds);
  return out;
}

}  // namespace dml
