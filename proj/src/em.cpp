#include "dml/em.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "dml/rng.hpp"

namespace dml {

namespace {

ExpectedCounts zero_counts(const FeatureSchema& schema, int k) {
  ExpectedCounts c;
  c.class_w.assign(k, 0.0);
  for (int col : schema.feature_cols())
    c.joint_w.emplace_back(
        static_cast<std::size_t>(k) * static_cast<std::size_t>(schema.cards[col]),
        0.0);
  return c;
}

void add_mass(ExpectedCounts& c, const std::vector<int>& cols,
              const std::vector<int>& cards, const std::vector<int>& row, int s,
              double w) {
  c.class_w[s] += w;
  for (std::size_t f = 0; f < cols.size(); ++f) {
    int v = row[cols[f]];
    c.joint_w[f][static_cast<std::size_t>(s) * cards[f] + v] += w;
  }
}

// Complete-data log likelihood under hard labels, observed-data under soft.
double log_likelihood(const ParameterSet& params, const ObservationSet& data,
                      const std::vector<int>& labels, Imputation mode) {
  double ll = 0.0;
  for (int r = 0; r < data.n(); ++r) {
    const auto& row = data.rows[r];
    double p = 0.0;
    if (mode == Imputation::kHard) {
      p = joint_prob(params, row, labels[r]);
    } else {
      for (int s = 0; s < params.k(); ++s) p += joint_prob(params, row, s);
    }
    if (p <= 0.0)
      fail(Errc::ZeroEvidence,
           "row " + std::to_string(r) + " has zero likelihood");
    ll += std::log(p);
  }
  return ll;
}

}  // namespace

std::vector<int> random_init(int n_rows, int k, std::uint64_t seed) {
  if (n_rows < 1) fail(Errc::InvalidArgument, "need at least one row");
  if (k < 1) fail(Errc::InvalidK, "k must be positive");
  Rng rng(seed);
  std::vector<int> out(static_cast<std::size_t>(n_rows));
  for (int& v : out) v = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(k)));
  return out;
}

EStepResult e_step(const ParameterSet& params, const ObservationSet& data,
                   Imputation mode) {
  validate(data);
  int k = params.k();
  const FeatureSchema& schema = data.schema;
  std::vector<int> cols = schema.feature_cols();
  std::vector<int> cards;
  for (int c : cols) cards.push_back(schema.cards[c]);

  EStepResult res;
  res.counts = zero_counts(schema, k);
  res.assignments.assign(data.rows.size(), kMissing);

  std::vector<double> joint(static_cast<std::size_t>(k));
  for (int r = 0; r < data.n(); ++r) {
    const auto& row = data.rows[r];
    double total = 0.0;
    for (int s = 0; s < k; ++s) {
      joint[s] = joint_prob(params, row, s);
      total += joint[s];
    }
    if (total <= 0.0) {
      res.zero_evidence_rows.push_back(r);
      continue;
    }
    int best = 0;
    for (int s = 1; s < k; ++s)
      if (joint[s] > joint[best]) best = s;
    res.assignments[r] = best;
    if (mode == Imputation::kHard) {
      add_mass(res.counts, cols, cards, row, best, 1.0);
    } else {
      for (int s = 0; s < k; ++s)
        if (joint[s] > 0.0)
          add_mass(res.counts, cols, cards, row, s, joint[s] / total);
    }
  }
  return res;
}

ParameterSet mle_from_weights(const ExpectedCounts& counts,
                              const FeatureSchema& schema, double add_alpha) {
  if (add_alpha < 0.0) fail(Errc::InvalidArgument, "smoothing must be nonnegative");
  int k = static_cast<int>(counts.class_w.size());
  std::vector<int> cols = schema.feature_cols();
  if (counts.joint_w.size() != cols.size())
    fail(Errc::ShapeMismatch, "one joint table per feature required");

  double total = 0.0;
  for (double w : counts.class_w) {
    if (w < 0.0) fail(Errc::InvalidArgument, "negative count mass");
    total += w;
  }
  if (total <= 0.0) fail(Errc::InvalidArgument, "no count mass");

  ParameterSet out;
  out.class_var = schema.class_col;
  out.prior.assign(k, 0.0);
  out.degenerate.assign(k, 0);
  double denom = total + add_alpha * k;
  for (int s = 0; s < k; ++s) {
    out.prior[s] = (counts.class_w[s] + add_alpha) / denom;
    out.degenerate[s] = (counts.class_w[s] == 0.0 && add_alpha == 0.0) ? 1 : 0;
  }
  for (std::size_t f = 0; f < cols.size(); ++f) {
    int card = schema.cards[cols[f]];
    if (counts.joint_w[f].size() != static_cast<std::size_t>(k) * card)
      fail(Errc::ShapeMismatch, "joint table size mismatch");
    std::vector<double> rows(static_cast<std::size_t>(k) * card, 0.0);
    for (int s = 0; s < k; ++s) {
      double row_denom = counts.class_w[s] + add_alpha * card;
      for (int v = 0; v < card; ++v) {
        std::size_t idx = static_cast<std::size_t>(s) * card + v;
        rows[idx] = row_denom > 0.0 ? (counts.joint_w[f][idx] + add_alpha) / row_denom
                                    : 0.0;
      }
    }
    out.feature_vars.push_back(cols[f]);
    out.feature_cards.push_back(card);
    out.cond.push_back(std::move(rows));
  }
  return out;
}

double param_distance(const ParameterSet& a, const ParameterSet& b) {
  if (a.k() != b.k() || a.feature_vars != b.feature_vars ||
      a.feature_cards != b.feature_cards)
    fail(Errc::ShapeMismatch, "parameter sets have different layouts");
  double d = 0.0;
  for (int s = 0; s < a.k(); ++s)
    d = std::max(d, std::fabs(a.prior[s] - b.prior[s]));
  for (int f = 0; f < a.n_features(); ++f)
    for (std::size_t i = 0; i < a.cond[f].size(); ++i)
      d = std::max(d, std::fabs(a.cond[f][i] - b.cond[f][i]));
  return d;
}

EmResult run_em(const ObservationSet& data, const EmConfig& config) {
  validate(data);
  int n = data.n();
  if (config.k < 1 || config.k > n)
    fail(Errc::InvalidK, "k must lie in [1, N]");
  if (!(config.epsilon > 0.0))
    fail(Errc::InvalidArgument, "epsilon must be positive");
  if (config.max_iterations < 1)
    fail(Errc::InvalidArgument, "max_iterations must be positive");

  std::vector<int> labels =
      config.init.empty() ? random_init(n, config.k, config.seed) : config.init;
  if (static_cast<int>(labels.size()) != n)
    fail(Errc::LengthMismatch, "one initial label per row required");
  for (int v : labels)
    if (v < 0 || v >= config.k)
      fail(Errc::InvalidArgument, "initial label outside [0, k)");

  const FeatureSchema& schema = data.schema;
  std::vector<int> cols = schema.feature_cols();
  std::vector<int> cards;
  for (int c : cols) cards.push_back(schema.cards[c]);

  ExpectedCounts counts = zero_counts(schema, config.k);
  for (int r = 0; r < n; ++r)
    add_mass(counts, cols, cards, data.rows[r], labels[r], 1.0);
  ParameterSet params = mle_from_weights(counts, schema, config.add_alpha);

  EmResult res;
  res.iterations = 1;
  res.assignments = labels;
  res.log_likelihood.push_back(log_likelihood(params, data, labels, config.mode));

  while (res.iterations < config.max_iterations) {
    EStepResult es = e_step(params, data, config.mode);
    if (!es.zero_evidence_rows.empty()) {
      std::string rows;
      for (std::size_t i = 0; i < es.zero_evidence_rows.size() && i < 8; ++i)
        rows += (i ? "," : "") + std::to_string(es.zero_evidence_rows[i]);
      fail(Errc::ZeroEvidence, "rows {" + rows + "} lost all class support");
    }
    ParameterSet next = mle_from_weights(es.counts, schema, config.add_alpha);
    res.iterations += 1;
    double d = param_distance(params, next);
    res.trajectory.push_back(d);
    double ll = log_likelihood(next, data, es.assignments, config.mode);
    if (config.mode == Imputation::kHard && ll + 1e-9 < res.log_likelihood.back())
      fail(Errc::Internal, "complete-data log likelihood decreased at iteration " +
                               std::to_string(res.iterations));
    res.log_likelihood.push_back(ll);
    params = std::move(next);
    res.assignments = es.assignments;
    if (d < config.epsilon) {
      res.converged = true;
      break;
    }
  }

  res.params = std::move(params);
  res.effective_k = 0;
  for (double p : res.params.prior)
    if (p > 0.0) ++res.effective_k;
  return res;
}

}  // namespace dml
