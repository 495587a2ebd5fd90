#pragma once

#include <cstdint>
#include <vector>

#include "dml/events.hpp"
#include "dml/naive_bayes.hpp"
#include "dml/rng.hpp"

namespace dml {

// Dirichlet parameter vector; every entry strictly positive.
struct DirichletParams {
  std::vector<double> alphas;
};

struct GibbsConfig {
  int k = 2;
  std::uint64_t seed = 0;
  int burn_in = 500;
  int monitor = 1000;
  int increment = 500;
  // Cap on the post-burn-in chain length after extensions.
  int max_chain = 5000;
  double window_frac = 0.1;
  double z_max = 2.0;
  // Symmetric Dirichlet prior weight applied to every distribution.
  double prior_weight = 1.0;
  // Optional explicit initial labels; overrides the seeded random init.
  std::vector<int> init;
};

// One value per monitored iteration. Parameter chains are indexed by the
// flattened layout (prior entries first, then each conditional row in
// class-major order); class chains are per row.
struct Chains {
  std::vector<std::vector<double>> params;
  std::vector<std::vector<int>> classes;

  int length() const {
    if (!params.empty()) return static_cast<int>(params[0].size());
    if (!classes.empty()) return static_cast<int>(classes[0].size());
    return 0;
  }
};

struct GibbsResult {
  ParameterSet params;
  std::vector<int> assignments;
  Chains chains;
  bool converged = false;
  // Iterations performed in total, burn-in included.
  int iterations = 0;
  int burn_in = 0;
};

// Conjugate posterior: counts plus prior, elementwise.
DirichletParams posterior_dirichlet(const std::vector<long long>& counts,
                                    const DirichletParams& prior);

// One draw; sums to one, entries almost surely positive.
std::vector<double> sample_dirichlet(const DirichletParams& params, Rng& rng);

// Samples one label per row from its class posterior. Rows sharing a
// feature vector may still receive different labels. Consumes exactly one
// uniform variate per row.
std::vector<int> stochastic_e_step(const ParameterSet& params,
                                   const ObservationSet& data, Rng& rng);

// Geweke diagnostic: z-score between the first and last ceil(frac * len)
// values must stay within z_max. Chains shorter than 20 (or windows shorter
// than 2) throw ChainTooShort. Two exactly constant windows converge iff
// their means agree.
bool geweke_converged(const std::vector<double>& chain, double window_frac = 0.1,
                      double z_max = 2.0);

// Arithmetic median for real chains, lower median for label chains.
double chain_median(const std::vector<double>& chain);
int chain_median(const std::vector<int>& chain);

// Alternating stochastic imputation and parameter sampling with
// Dirichlet-multinomial conjugacy. Burn-in is discarded once; if the Geweke
// check fails on any chain the monitored window is extended by increment,
// up to max_chain. Never throws for non-convergence; the flag reports it.
// Identical configs give bit-for-bit identical chains.
GibbsResult run_gibbs(const ObservationSet& data, const GibbsConfig& config);

}  // namespace dml
