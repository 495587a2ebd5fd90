#pragma once

#include <cstdint>
#include <vector>

#include "dml/events.hpp"
#include "dml/naive_bayes.hpp"

namespace dml {

enum class Imputation { kHard, kSoft };

struct EmConfig {
  int k = 2;
  double epsilon = 1e-3;
  int max_iterations = 500;
  std::uint64_t seed = 0;
  Imputation mode = Imputation::kHard;
  // Optional explicit initial labels; overrides the seeded random init.
  std::vector<int> init;
  double add_alpha = 0.0;
};

// Class totals and per-feature {class, level} totals. Hard imputation fills
// these with whole counts, soft imputation with posterior mass; the M-step
// below is the same either way.
struct ExpectedCounts {
  std::vector<double> class_w;
  std::vector<std::vector<double>> joint_w;  // [f][s * card_f + level]
};

struct EStepResult {
  // Hard mode: the imputed label per row. Soft mode: the posterior argmax
  // per row (the fractional mass lives in counts, not here).
  std::vector<int> assignments;
  ExpectedCounts counts;
  // Rows whose event has probability zero under every class. They carry no
  // count mass and their assignment slot holds kMissing.
  std::vector<int> zero_evidence_rows;
};

struct EmResult {
  ParameterSet params;
  std::vector<int> assignments;
  int iterations = 0;
  bool converged = false;
  // Parameter distance after each iteration from the second onward.
  std::vector<double> trajectory;
  // Complete-data log likelihood per iteration (observed-data in soft mode).
  std::vector<double> log_likelihood;
  // Classes still holding probability mass at the end. A class emptied
  // during iteration keeps prior 0 and can never be re-imputed.
  int effective_k = 0;
};

// One uniform label per row, deterministic in the seed.
std::vector<int> random_init(int n_rows, int k, std::uint64_t seed);

// Imputes labels (or posterior mass) for every row under the given
// parameters and tallies the resulting counts. Rows sharing a feature
// vector get identical treatment by construction.
EStepResult e_step(const ParameterSet& params, const ObservationSet& data,
                   Imputation mode);

// M-step shared by both modes: relative frequencies of the expected counts.
ParameterSet mle_from_weights(const ExpectedCounts& counts,
                              const FeatureSchema& schema,
                              double add_alpha = 0.0);

// Max absolute componentwise difference over the prior followed by every
// conditional row. Shapes must match exactly (ShapeMismatch).
double param_distance(const ParameterSet& a, const ParameterSet& b);

// Alternates e_step and the M-step until the parameter distance drops below
// epsilon or max_iterations is reached. Iteration 1 is the initialization
// plus first M-step. Throws ZeroEvidence with the offending row indexes if
// any row loses all class support.
EmResult run_em(const ObservationSet& data, const EmConfig& config);

}  // namespace dml
