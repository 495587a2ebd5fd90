#pragma once

#include <string>
#include <vector>

#include "dml/events.hpp"

namespace dml {

struct LoadOptions {
  // Column holding the class variable; empty synthesizes an unlabeled class
  // column at the end.
  std::string class_col;
  // Column holding reference labels for scoring; kept apart from the data.
  std::string gold_col;
};

struct Dataset {
  ObservationSet data;
  // Level names per data column, indexed like the schema.
  std::vector<std::vector<std::string>> level_names;
  std::vector<int> gold;  // empty when no gold column was named
  std::vector<std::string> gold_levels;
  std::string gold_col_name;
};

// Plain comma-separated UTF-8 with a header row naming the columns. No
// quoting or escapes; fields must be nonempty. "?" marks a missing class
// label and is rejected in any other column. Level indexes follow first
// appearance order, top to bottom.
Dataset load_dataset(const std::string& path, const LoadOptions& options);

// Writes the dataset back out, data columns first in schema order and the
// gold column (if any) last.
void save_dataset(const Dataset& dataset, const std::string& path);

}  // namespace dml
