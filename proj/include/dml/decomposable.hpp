#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dml/events.hpp"

namespace dml {

// Undirected graph over the schema's variables. Edges are normalized to
// first < second, kept sorted and unique.
struct ModelGraph {
  int n_vars = 0;
  std::vector<std::pair<int, int>> edges;
};

ModelGraph independence_graph(int n_vars);
ModelGraph saturated_graph(int n_vars);
ModelGraph add_edge(const ModelGraph& graph, int u, int v);
ModelGraph remove_edge(const ModelGraph& graph, int u, int v);

// Maximum cardinality search plus a perfect elimination check.
bool is_chordal(const ModelGraph& graph);

// Maximal cliques in running-intersection order and the separator between
// each clique and the union of its predecessors (separators[0] is empty).
// Vertices outside every edge appear as singleton cliques. NotChordal when
// the graph admits no such decomposition.
struct DecomposableModel {
  ModelGraph graph;
  std::vector<std::vector<int>> cliques;
  std::vector<std::vector<int>> separators;
};

DecomposableModel decompose(const ModelGraph& graph);

struct FitResult {
  // Row-major over the full event space (all schema columns).
  std::vector<double> joint;
  double g_squared = 0.0;
  long long dof = 0;
};

// Maximum-likelihood joint for a decomposable model on fully labeled data:
// the product of clique marginal frequencies over separator marginal
// frequencies per cell, with 0/0 taken as 0.
FitResult fit(const DecomposableModel& model, const ObservationSet& data);

// 2 * sum over cells with f > 0 of f * ln(f / e), natural log, where
// e = total * joint. Zero-frequency cells contribute nothing; a zero
// expectation under a positive observation throws.
double g_squared(const MarginalCounts& observed, const std::vector<double>& joint);

// Parameter count of the model's pairwise log-linear expansion restricted
// to observed levels: grand mean, one main-effect block per variable, one
// interaction block per edge. Levels with zero marginal count carry no
// parameters.
long long adjusted_dof(const ModelGraph& graph, const ObservationSet& data);

enum class Criterion { kAic, kBic, kChi2 };
enum class Direction { kForward, kBackward };

struct CriterionValue {
  // AIC/BIC information delta, or the upper-tail chi-square p-value.
  double score = 0.0;
  bool acceptable = false;
};

// Scores one candidate step. Forward steps accept a positive information
// delta (chi2: significance above alpha); backward steps accept a negative
// delta (chi2: significance below alpha).
CriterionValue criterion_delta(Criterion criterion, Direction direction,
                               double delta_g2, long long delta_dof, long long n,
                               double alpha);

// Single-edge neighbors that remain decomposable, in lexicographic edge
// order.
std::vector<ModelGraph> candidates(const ModelGraph& graph, Direction direction);

struct CandidateEval {
  DecomposableModel model;
  double g2 = 0.0;
  long long dof = 0;
  double delta_g2 = 0.0;
  long long delta_dof = 0;
  double score = 0.0;
  bool acceptable = false;
};

struct SelectionStep {
  std::string current;
  double current_g2 = 0.0;
  std::vector<CandidateEval> candidates;
  int chosen = -1;  // index into candidates; -1 when the search stops here
};

struct SelectionResult {
  std::vector<DecomposableModel> sequence;  // every model visited, in order
  std::vector<SelectionStep> steps;
  DecomposableModel selected;
  double selected_g2 = 0.0;
  long long selected_dof = 0;
};

// Greedy single-edge search from independence (forward) or the saturated
// model (backward). The best acceptable candidate wins each step, earlier
// candidate on exact score ties; the search stops when nothing is
// acceptable.
SelectionResult sequential_select(const ObservationSet& data,
                                  Direction direction, Criterion criterion,
                                  double alpha);

// Strips every clique not containing the class variable from each model in
// the sequence, refits the reduced factorization, and averages the
// resulting tables cellwise. A member's table depends only on its kept
// variables, so it is constant over the rest; the first member of a forward
// sequence therefore votes like a majority classifier.
struct NaiveMixResult {
  std::vector<std::vector<std::vector<int>>> kept_cliques;  // per member
  std::vector<double> averaged;  // full event space
};

NaiveMixResult naive_mix(const std::vector<DecomposableModel>& sequence,
                         const ObservationSet& data);

// Argmax over the class slice of a full-event-space table at the row's
// feature values, lowest class index on ties. ZeroEvidence when the whole
// slice is zero.
int classify_joint(const std::vector<double>& joint, const FeatureSchema& schema,
                   std::span<const int> row);

// "(AB)(BC)" notation. A single uppercase letter names itself, anything
// else is bracketed. Printing sorts variables inside a clique by name and
// cliques by their printed form.
std::string format_model(const std::vector<std::vector<int>>& cliques,
                         const FeatureSchema& schema);
std::string format_model(const DecomposableModel& model,
                         const FeatureSchema& schema);
ModelGraph parse_model(const std::string& text, const FeatureSchema& schema);

}  // namespace dml
