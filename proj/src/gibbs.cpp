#include "dml/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dml {

namespace {

std::vector<double> flatten(const ParameterSet& p) {
  std::vector<double> out = p.prior;
  for (const auto& rows : p.cond) out.insert(out.end(), rows.begin(), rows.end());
  return out;
}

}  // namespace

DirichletParams posterior_dirichlet(const std::vector<long long>& counts,
                                    const DirichletParams& prior) {
  if (counts.size() != prior.alphas.size())
    fail(Errc::LengthMismatch, "counts and prior must have equal length");
  DirichletParams out;
  out.alphas.reserve(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (!(prior.alphas[i] > 0.0))
      fail(Errc::InvalidArgument, "prior weights must be positive");
    if (counts[i] < 0) fail(Errc::InvalidArgument, "counts must be nonnegative");
    out.alphas.push_back(static_cast<double>(counts[i]) + prior.alphas[i]);
  }
  return out;
}

std::vector<double> sample_dirichlet(const DirichletParams& params, Rng& rng) {
  for (double a : params.alphas)
    if (!(a > 0.0)) fail(Errc::InvalidArgument, "alphas must be positive");
  return rng.dirichlet(params.alphas);
}

std::vector<int> stochastic_e_step(const ParameterSet& params,
                                   const ObservationSet& data, Rng& rng) {
  validate(data);
  int k = params.k();
  std::vector<int> labels(data.rows.size());
  std::vector<double> joint(static_cast<std::size_t>(k));
  for (int r = 0; r < data.n(); ++r) {
    double total = 0.0;
    for (int s = 0; s < k; ++s) {
      joint[s] = joint_prob(params, data.rows[r], s);
      total += joint[s];
    }
    if (total <= 0.0)
      fail(Errc::ZeroEvidence,
           "row " + std::to_string(r) + " has zero probability in every class");
    double u = rng.uniform() * total;
    double cum = 0.0;
    int pick = k - 1;
    for (int s = 0; s < k; ++s) {
      cum += joint[s];
      if (u < cum) {
        pick = s;
        break;
      }
    }
    labels[r] = pick;
  }
  return labels;
}

bool geweke_converged(const std::vector<double>& chain, double window_frac,
                      double z_max) {
  if (!(window_frac > 0.0 && window_frac < 0.5))
    fail(Errc::InvalidArgument, "window fraction must lie in (0, 0.5)");
  std::size_t len = chain.size();
  if (len < 20) fail(Errc::ChainTooShort, "need at least 20 samples");
  std::size_t w = static_cast<std::size_t>(
      std::ceil(window_frac * static_cast<double>(len)));
  if (w < 2) fail(Errc::ChainTooShort, "diagnostic window shorter than 2");

  auto moments = [&](std::size_t begin) {
    double mean = 0.0;
    for (std::size_t i = 0; i < w; ++i) mean += chain[begin + i];
    mean /= static_cast<double>(w);
    double var = 0.0;
    for (std::size_t i = 0; i < w; ++i) {
      double d = chain[begin + i] - mean;
      var += d * d;
    }
    var /= static_cast<double>(w - 1);
    return std::pair<double, double>(mean, var);
  };
  auto [m1, v1] = moments(0);
  auto [m2, v2] = moments(len - w);
  if (v1 == 0.0 && v2 == 0.0) return m1 == m2;
  double z = (m1 - m2) / std::sqrt(v1 / static_cast<double>(w) +
                                   v2 / static_cast<double>(w));
  return std::fabs(z) <= z_max;
}

double chain_median(const std::vector<double>& chain) {
  if (chain.empty()) fail(Errc::EmptyChain, "median of an empty chain");
  std::vector<double> sorted = chain;
  std::sort(sorted.begin(), sorted.end());
  std::size_t mid = sorted.size() / 2;
  if (sorted.size() % 2 == 1) return sorted[mid];
  return 0.5 * (sorted[mid - 1] + sorted[mid]);
}

int chain_median(const std::vector<int>& chain) {
  if (chain.empty()) fail(Errc::EmptyChain, "median of an empty chain");
  std::vector<int> sorted = chain;
  std::sort(sorted.begin(), sorted.end());
  return sorted[(sorted.size() - 1) / 2];
}

GibbsResult run_gibbs(const ObservationSet& data, const GibbsConfig& config) {
  validate(data);
  int n = data.n();
  int k = config.k;
  if (k < 1 || k > n) fail(Errc::InvalidK, "k must lie in [1, N]");
  if (config.burn_in <= 0 || config.monitor <= 0 || config.increment <= 0)
    fail(Errc::InvalidArgument, "schedule lengths must be positive");
  if (config.max_chain < config.monitor)
    fail(Errc::InvalidArgument, "max_chain shorter than the monitored window");
  if (!(config.prior_weight > 0.0))
    fail(Errc::InvalidArgument, "prior weight must be positive");

  const FeatureSchema& schema = data.schema;
  std::vector<int> cols = schema.feature_cols();
  std::vector<int> cards;
  for (int c : cols) cards.push_back(schema.cards[c]);

  Rng rng(config.seed);
  std::vector<int> labels;
  if (config.init.empty()) {
    labels.resize(static_cast<std::size_t>(n));
    for (int& v : labels)
      v = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(k)));
  } else {
    labels = config.init;
    if (static_cast<int>(labels.size()) != n)
      fail(Errc::LengthMismatch, "one initial label per row required");
    for (int v : labels)
      if (v < 0 || v >= k) fail(Errc::InvalidArgument, "initial label outside [0, k)");
  }

  // Draw order is fixed (class prior, then each feature's rows in class
  // order); it is part of the reproducibility contract.
  auto sample_params = [&](const std::vector<int>& who) {
    ParameterSet p;
    p.class_var = schema.class_col;
    p.degenerate.assign(static_cast<std::size_t>(k), 0);

    std::vector<long long> class_counts(static_cast<std::size_t>(k), 0);
    for (int v : who) ++class_counts[v];
    DirichletParams class_prior{std::vector<double>(
        static_cast<std::size_t>(k), config.prior_weight)};
    p.prior = sample_dirichlet(posterior_dirichlet(class_counts, class_prior), rng);

    for (std::size_t f = 0; f < cols.size(); ++f) {
      int card = cards[f];
      std::vector<long long> joint(static_cast<std::size_t>(k) * card, 0);
      for (int r = 0; r < n; ++r)
        ++joint[static_cast<std::size_t>(who[r]) * card + data.rows[r][cols[f]]];
      DirichletParams row_prior{std::vector<double>(
          static_cast<std::size_t>(card), config.prior_weight)};
      std::vector<double> rows(static_cast<std::size_t>(k) * card);
      for (int s = 0; s < k; ++s) {
        std::vector<long long> counts(
            joint.begin() + static_cast<std::size_t>(s) * card,
            joint.begin() + static_cast<std::size_t>(s + 1) * card);
        std::vector<double> draw =
            sample_dirichlet(posterior_dirichlet(counts, row_prior), rng);
        std::copy(draw.begin(), draw.end(),
                  rows.begin() + static_cast<std::size_t>(s) * card);
      }
      p.feature_vars.push_back(cols[f]);
      p.feature_cards.push_back(card);
      p.cond.push_back(std::move(rows));
    }
    return p;
  };

  int n_params = k;
  for (int card : cards) n_params += k * card;

  GibbsResult res;
  res.burn_in = config.burn_in;
  res.chains.params.assign(static_cast<std::size_t>(n_params), {});
  res.chains.classes.assign(static_cast<std::size_t>(n), {});

  ParameterSet params;
  int target = config.monitor;
  int t = 0;
  for (;;) {
    while (res.chains.length() < target) {
      if (t > 0) labels = stochastic_e_step(params, data, rng);
      params = sample_params(labels);
      ++t;
      if (t > config.burn_in) {
        std::vector<double> flat = flatten(params);
        for (int i = 0; i < n_params; ++i) res.chains.params[i].push_back(flat[i]);
        for (int r = 0; r < n; ++r) res.chains.classes[r].push_back(labels[r]);
      }
    }
    bool ok = true;
    for (const auto& chain : res.chains.params)
      if (!geweke_converged(chain, config.window_frac, config.z_max)) {
        ok = false;
        break;
      }
    if (ok)
      for (const auto& chain : res.chains.classes) {
        std::vector<double> as_real(chain.begin(), chain.end());
        if (!geweke_converged(as_real, config.window_frac, config.z_max)) {
          ok = false;
          break;
        }
      }
    if (ok) {
      res.converged = true;
      break;
    }
    if (res.chains.length() >= config.max_chain) break;
    target = std::min(target + config.increment, config.max_chain);
  }
  res.iterations = t;

  res.assignments.resize(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r)
    res.assignments[r] = chain_median(res.chains.classes[r]);

  // Componentwise medians, renormalized one distribution at a time.
  std::vector<double> med(static_cast<std::size_t>(n_params));
  for (int i = 0; i < n_params; ++i) med[i] = chain_median(res.chains.params[i]);
  auto renorm = [](double* begin, int len) {
    double total = 0.0;
    for (int i = 0; i < len; ++i) total += begin[i];
    if (total <= 0.0)
      for (int i = 0; i < len; ++i) begin[i] = 1.0 / len;
    else
      for (int i = 0; i < len; ++i) begin[i] /= total;
  };
  renorm(med.data(), k);
  res.params.class_var = schema.class_col;
  res.params.degenerate.assign(static_cast<std::size_t>(k), 0);
  res.params.prior.assign(med.begin(), med.begin() + k);
  std::size_t off = static_cast<std::size_t>(k);
  for (std::size_t f = 0; f < cols.size(); ++f) {
    int card = cards[f];
    for (int s = 0; s < k; ++s)
      renorm(med.data() + off + static_cast<std::size_t>(s) * card, card);
    res.params.feature_vars.push_back(cols[f]);
    res.params.feature_cards.push_back(card);
    res.params.cond.emplace_back(
        med.begin() + off, med.begin() + off + static_cast<std::size_t>(k) * card);
    off += static_cast<std::size_t>(k) * card;
  }
  return res;
}

}  // namespace dml
