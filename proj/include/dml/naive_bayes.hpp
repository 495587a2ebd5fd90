#pragma once

#include <span>
#include <vector>

#include "dml/events.hpp"

namespace dml {

// Class prior plus one conditional table per feature. Conditional rows are
// class-major: cond[f][s * card_f + level] = p(F_f = level | S = s).
// A class with zero training support keeps prior 0, an all-zero conditional
// row, and a degenerate flag; its rows are exempt from the sum-to-one rule.
struct ParameterSet {
  std::vector<int> feature_vars;
  std::vector<int> feature_cards;
  int class_var = 0;
  std::vector<double> prior;
  std::vector<std::vector<double>> cond;
  std::vector<char> degenerate;

  int k() const { return static_cast<int>(prior.size()); }
  int n_features() const { return static_cast<int>(feature_vars.size()); }
  double p_cond(int f, int s, int level) const {
    return cond[f][static_cast<std::size_t>(s) * feature_cards[f] + level];
  }
};

// Maximum-likelihood estimates from a class marginal and one {feature,class}
// joint table per feature. All joints must agree with the class marginal
// (InconsistentCounts otherwise). add_alpha > 0 applies additive smoothing
// to every count; the default 0 reproduces plain relative frequencies.
ParameterSet mle_from_counts(const MarginalCounts& class_counts,
                             const std::vector<MarginalCounts>& joint_counts,
                             double add_alpha = 0.0);

// p(S = s) * prod_f p(F_f = row[f] | S = s). The class cell of the row is
// ignored. strict throws DegenerateClass when s has no support; otherwise
// degenerate classes simply contribute 0.
double joint_prob(const ParameterSet& params, std::span<const int> row, int s,
                  bool strict = false);

// Normalized joint over classes. Throws ZeroEvidence when every class gives
// 0; the caller decides what that means, nothing is renormalized away.
std::vector<double> posterior(const ParameterSet& params,
                              std::span<const int> row);

// Argmax of the posterior, lowest class index on ties.
int classify(const ParameterSet& params, std::span<const int> row);

}  // namespace dml
