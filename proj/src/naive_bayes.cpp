#include "dml/naive_bayes.hpp"

#include <string>

namespace dml {

ParameterSet mle_from_counts(const MarginalCounts& class_counts,
                             const std::vector<MarginalCounts>& joint_counts,
                             double add_alpha) {
  if (class_counts.vars.size() != 1)
    fail(Errc::ShapeMismatch, "class marginal must cover exactly one variable");
  if (add_alpha < 0.0) fail(Errc::InvalidArgument, "smoothing must be nonnegative");
  int class_var = class_counts.vars[0];
  int k = class_counts.cards[0];
  long long n = class_counts.total;
  if (n <= 0) fail(Errc::InvalidArgument, "no observations");

  ParameterSet out;
  out.class_var = class_var;
  out.prior.assign(k, 0.0);
  out.degenerate.assign(k, 0);

  double denom = static_cast<double>(n) + add_alpha * k;
  for (int s = 0; s < k; ++s) {
    long long f = class_counts.counts[s];
    out.prior[s] = (static_cast<double>(f) + add_alpha) / denom;
    out.degenerate[s] = (f == 0 && add_alpha == 0.0) ? 1 : 0;
  }

  for (const MarginalCounts& joint : joint_counts) {
    if (joint.vars.size() != 2)
      fail(Errc::ShapeMismatch, "feature joint must cover exactly two variables");
    int f_pos = -1;
    for (int i = 0; i < 2; ++i)
      if (joint.vars[i] != class_var) f_pos = i;
    if (f_pos == -1 || joint.vars[1 - f_pos] != class_var)
      fail(Errc::ShapeMismatch, "feature joint must pair a feature with the class");
    if (joint.cards[1 - f_pos] != k || joint.total != n)
      fail(Errc::InconsistentCounts, "joint table disagrees with class marginal");
    int card = joint.cards[f_pos];
    int fvar = joint.vars[f_pos];

    std::vector<double> rows(static_cast<std::size_t>(k) * card, 0.0);
    for (int s = 0; s < k; ++s) {
      long long class_total = 0;
      for (int v = 0; v < card; ++v) {
        long long c = f_pos == 0 ? joint.at({v, s}) : joint.at({s, v});
        class_total += c;
      }
      if (class_total != class_counts.counts[s])
        fail(Errc::InconsistentCounts,
             "joint for variable " + std::to_string(fvar) +
                 " disagrees with class marginal at class " + std::to_string(s));
      double row_denom = static_cast<double>(class_total) + add_alpha * card;
      for (int v = 0; v < card; ++v) {
        long long c = f_pos == 0 ? joint.at({v, s}) : joint.at({s, v});
        double num = static_cast<double>(c) + add_alpha;
        rows[static_cast<std::size_t>(s) * card + v] =
            row_denom > 0.0 ? num / row_denom : 0.0;
      }
    }
    out.feature_vars.push_back(fvar);
    out.feature_cards.push_back(card);
    out.cond.push_back(std::move(rows));
  }
  return out;
}

double joint_prob(const ParameterSet& params, std::span<const int> row, int s,
                  bool strict) {
  if (s < 0 || s >= params.k())
    fail(Errc::InvalidArgument, "class index out of range");
  if (strict && params.degenerate[s])
    fail(Errc::DegenerateClass, "class " + std::to_string(s) + " has no support");
  double p = params.prior[s];
  for (int f = 0; f < params.n_features(); ++f) {
    int col = params.feature_vars[f];
    if (col >= static_cast<int>(row.size()))
      fail(Errc::ShapeMismatch, "row narrower than parameter layout");
    int v = row[col];
    if (v < 0 || v >= params.feature_cards[f])
      fail(Errc::InvalidArgument, "feature level out of range");
    p *= params.p_cond(f, s, v);
  }
  return p;
}

std::vector<double> posterior(const ParameterSet& params,
                              std::span<const int> row) {
  std::vector<double> joint(params.k());
  double total = 0.0;
  for (int s = 0; s < params.k(); ++s) {
    joint[s] = joint_prob(params, row, s);
    total += joint[s];
  }
  if (total <= 0.0)
    fail(Errc::ZeroEvidence, "event has probability zero under every class");
  for (double& p : joint) p /= total;
  return joint;
}

int classify(const ParameterSet& params, std::span<const int> row) {
  std::vector<double> post = posterior(params, row);
  int best = 0;
  for (int s = 1; s < static_cast<int>(post.size()); ++s)
    if (post[s] > post[best]) best = s;
  return best;
}

}  // namespace dml
