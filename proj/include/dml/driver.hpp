#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dml/error.hpp"

namespace dml {

enum class MethodKind {
  kEm,
  kGibbs,
  kCluster,
  kSelect,
  kNaiveMix,
  kNaiveBayes,
  kMajority,
  kEvaluate,
  kCv,
  kLearningCurve,
};

// One experiment: dataset, method, knobs, output format. Unused knobs are
// ignored by the dispatched method.
struct ExperimentConfig {
  MethodKind method = MethodKind::kEm;
  std::string data_path;
  std::string class_col;
  std::string gold_col;
  // 0 derives k from the data: observed class levels, or gold levels for
  // evaluate runs.
  int k = 0;
  std::uint64_t seed = 0;
  double epsilon = 1e-3;
  int max_iterations = 500;
  std::string imputation = "hard";  // hard | soft
  double add_alpha = 0.0;
  int burn_in = 500;
  int monitor = 1000;
  int increment = 500;
  int max_chain = 5000;
  std::string linkage = "ward";       // ward | mcquitty
  std::string direction = "forward";  // forward | backward
  std::string criterion = "aic";      // aic | bic | chi2
  double alpha = 1e-4;
  int trials = 25;
  int folds = 10;
  std::vector<int> curve_sizes;       // empty: 10, 50, 100, +100 up to 0.9 N
  std::string eval_method = "em";     // em | gibbs | ward | mcquitty
  std::string cv_method = "naive-bayes";  // naive-bayes | select | naive-mix | majority
  std::string init_file;              // explicit initial labels, one per line
  std::string format = "json";        // json | csv
};

struct RunOutcome {
  std::string rendered;
  // 0 on success; 4 when a single em or gibbs run finishes unconverged
  // (the report is still rendered).
  int exit_code = 0;
};

// Loads the dataset, dispatches the method, renders the report. Identical
// configs yield byte-identical reports. Throws dml::Error on invalid input.
RunOutcome run(const ExperimentConfig& config);

// Process exit code for an error class: 3 for data and model input
// problems, 4 for numerical and convergence failures.
int exit_code_for(Errc code);

}  // namespace dml
