#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "dml/error.hpp"

namespace dml {

// Sentinel for an unobserved class label. Feature cells are never missing;
// ingestion rejects that case outright.
inline constexpr int kMissing = -1;

// Every column is a discrete variable holding dense 0-based level indices.
// Exactly one column is the class variable. cards[] are level capacities,
// each at least 2; the class column's capacity is the class count k.
struct FeatureSchema {
  std::vector<std::string> names;
  std::vector<int> cards;
  int class_col = 0;

  int n_vars() const { return static_cast<int>(names.size()); }
  int k() const { return cards[class_col]; }
  std::vector<int> feature_cols() const;
};

struct ObservationSet {
  FeatureSchema schema;
  std::vector<std::vector<int>> rows;

  int n() const { return static_cast<int>(rows.size()); }
  bool fully_labeled() const;
  bool fully_unlabeled() const;
};

// Throws unless the set is well formed: at least one row, every row the
// schema's width, every value within its card, kMissing only in the class
// column.
void validate(const ObservationSet& data);

// Copy with the class column replaced by the given labels.
ObservationSet with_class(const ObservationSet& data,
                          const std::vector<int>& assignments);

// Copy with the class capacity replaced (existing labels must still fit).
ObservationSet with_class_cardinality(const ObservationSet& data, int k);

// Dense frequency table over an ordered subset of columns. Cells are stored
// row-major with vars[0] varying slowest. An empty subset is the trivial
// one-cell table holding N, which is what an empty separator marginal needs.
struct MarginalCounts {
  std::vector<int> vars;
  std::vector<int> cards;
  std::vector<long long> counts;
  long long total = 0;

  long long at(std::span<const int> levels) const;
  long long at(std::initializer_list<int> levels) const {
    return at(std::span<const int>(levels.begin(), levels.size()));
  }
};

// Counts each row's combination of the requested columns. Requesting the
// class column on rows lacking a label throws MissingValue.
MarginalCounts marginal_counts(const ObservationSet& data,
                               const std::vector<int>& vars);

// Marginalizes an existing table onto a subset of its variables, in the
// order given. Throws NotSubset if a requested variable is absent.
MarginalCounts project(const MarginalCounts& counts,
                       const std::vector<int>& vars);

}  // namespace dml
