#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dml/events.hpp"

namespace dml {

struct MappingResult {
  double accuracy = 0.0;
  std::vector<int> mapping;  // discovered group -> gold label
};

// Exhaustive search over the k! relabelings of discovered groups, scored
// against gold labels. Ties go to the lexicographically smallest mapping.
// k above 8 throws KTooLarge.
MappingResult best_mapping_accuracy(const std::vector<int>& groups,
                                    const std::vector<int>& gold, int k);

// Share of the most frequent gold label; the floor any mapping can reach.
double majority_baseline(const std::vector<int>& gold, int k);

struct ConfusionMatrix {
  int k = 0;
  std::vector<long long> cells;  // row: gold label, column: mapped group

  long long at(int gold, int mapped) const {
    return cells[static_cast<std::size_t>(gold) * k + mapped];
  }
};

ConfusionMatrix confusion(const std::vector<int>& groups,
                          const std::vector<int>& gold,
                          const std::vector<int>& mapping, int k);

using TrainedClassifier = std::function<int(std::span<const int>)>;
using SupervisedLearner = std::function<TrainedClassifier(const ObservationSet&)>;
using UnsupervisedLearner =
    std::function<std::vector<int>(const ObservationSet&, std::uint64_t)>;

// Shuffled contiguous fold slices over row indexes; remainder rows go one
// apiece to the leading folds.
std::vector<std::vector<int>> make_folds(int n, int folds, std::uint64_t seed);

struct CvResult {
  std::vector<double> per_fold;
  double mean = 0.0;
  double stddev = 0.0;  // sample deviation, n - 1
};

// Trains on all but one fold and scores held-out rows against their class
// labels. A learner or classifier that throws is wrapped into
// LearnerFailure with the fold index.
CvResult k_fold_cv(const ObservationSet& data, int folds,
                   const SupervisedLearner& learner, std::uint64_t seed);

struct TrialsResult {
  std::vector<double> per_trial;
  std::vector<std::vector<int>> assignments;  // per trial
  double mean = 0.0;
  double stddev = 0.0;
};

// Runs the learner with seeds base_seed .. base_seed + trials - 1 and maps
// each grouping against gold. A single trial reports deviation 0.
TrialsResult repeated_trials(const ObservationSet& data,
                             const std::vector<int>& gold,
                             const UnsupervisedLearner& learner, int trials,
                             std::uint64_t base_seed);

struct LearningCurve {
  std::vector<int> sizes;
  std::vector<double> accuracy;  // per size, averaged over fold rotations
};

// For each training size m and each fold rotation, trains on m rows drawn
// from the other folds and tests on the held-out fold. Samples nest within
// a rotation (larger sizes extend smaller ones). Sizes above 0.9 * N throw
// SizeTooLarge. Fold slicing matches k_fold_cv for the same seed, so for
// row-order-insensitive learners the full training size reproduces it.
LearningCurve learning_curve(const ObservationSet& data,
                             const std::vector<int>& sizes, int folds,
                             const SupervisedLearner& learner,
                             std::uint64_t seed);

}  // namespace dml
