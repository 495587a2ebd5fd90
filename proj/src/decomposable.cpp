#include "dml/decomposable.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace dml {

namespace {

std::pair<int, int> norm_edge(int u, int v) {
  if (u == v) fail(Errc::InvalidArgument, "self loops are not allowed");
  return {std::min(u, v), std::max(u, v)};
}

void check_graph(const ModelGraph& g) {
  if (g.n_vars < 1) fail(Errc::InvalidArgument, "graph needs at least one variable");
  for (auto [u, v] : g.edges)
    if (u < 0 || v < 0 || u >= g.n_vars || v >= g.n_vars || u >= v)
      fail(Errc::InvalidArgument, "malformed edge list");
  for (std::size_t i = 1; i < g.edges.size(); ++i)
    if (!(g.edges[i - 1] < g.edges[i]))
      fail(Errc::InvalidArgument, "edge list must be sorted and unique");
}

std::vector<std::vector<char>> adjacency(const ModelGraph& g) {
  check_graph(g);
  std::vector<std::vector<char>> adj(
      static_cast<std::size_t>(g.n_vars),
      std::vector<char>(static_cast<std::size_t>(g.n_vars), 0));
  for (auto [u, v] : g.edges) {
    adj[u][v] = 1;
    adj[v][u] = 1;
  }
  return adj;
}

// Maximum cardinality search; ties fall to the lowest vertex index.
std::vector<int> mcs_order(int n, const std::vector<std::vector<char>>& adj) {
  std::vector<int> weight(static_cast<std::size_t>(n), 0);
  std::vector<char> numbered(static_cast<std::size_t>(n), 0);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v)
      if (!numbered[v] && (best == -1 || weight[v] > weight[best])) best = v;
    numbered[best] = 1;
    order.push_back(best);
    for (int u = 0; u < n; ++u)
      if (adj[best][u] && !numbered[u]) ++weight[u];
  }
  return order;
}

// The reverse of an MCS order is a perfect elimination order exactly for
// chordal graphs: every vertex's later-eliminated neighbors must be
// pairwise adjacent.
bool chordal_for(int n, const std::vector<std::vector<char>>& adj,
                 const std::vector<int>& order) {
  std::vector<int> elim_pos(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) elim_pos[order[n - 1 - i]] = i;
  for (int v = 0; v < n; ++v) {
    std::vector<int> later;
    for (int u = 0; u < n; ++u)
      if (adj[v][u] && elim_pos[u] > elim_pos[v]) later.push_back(u);
    for (std::size_t i = 0; i < later.size(); ++i)
      for (std::size_t j = i + 1; j < later.size(); ++j)
        if (!adj[later[i]][later[j]]) return false;
  }
  return true;
}

bool is_subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<int> sorted_intersection(const std::vector<int>& a,
                                     const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

std::size_t space_size(const std::vector<int>& cards) {
  std::size_t s = 1;
  for (int c : cards) {
    s *= static_cast<std::size_t>(c);
    if (s > (1u << 24)) fail(Errc::InvalidArgument, "event space too large");
  }
  return s;
}

void decode_cell(std::size_t cell, const std::vector<int>& cards,
                 std::vector<int>& levels) {
  for (std::size_t i = cards.size(); i-- > 0;) {
    levels[i] = static_cast<int>(cell % static_cast<std::size_t>(cards[i]));
    cell /= static_cast<std::size_t>(cards[i]);
  }
}

// Clique-over-separator product per cell, 0/0 taken as 0. Assumes the
// clique and separator lists already satisfy the running intersection
// property over whatever variables they mention.
std::vector<double> fit_cliques(const std::vector<std::vector<int>>& cliques,
                                const std::vector<std::vector<int>>& seps,
                                const ObservationSet& data) {
  const FeatureSchema& schema = data.schema;
  std::size_t cells = space_size(schema.cards);
  std::vector<MarginalCounts> cm, sm;
  cm.reserve(cliques.size());
  sm.reserve(seps.size());
  for (const auto& c : cliques) cm.push_back(marginal_counts(data, c));
  for (const auto& s : seps) sm.push_back(marginal_counts(data, s));

  std::vector<double> joint(cells, 0.0);
  std::vector<int> levels(static_cast<std::size_t>(schema.n_vars()), 0);
  std::vector<int> slice;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    decode_cell(cell, schema.cards, levels);
    double val = 1.0;
    for (std::size_t i = 0; i < cliques.size(); ++i) {
      slice.clear();
      for (int v : cliques[i]) slice.push_back(levels[v]);
      long long fc = cm[i].at(slice);
      if (fc == 0) {
        val = 0.0;
        break;
      }
      slice.clear();
      for (int v : seps[i]) slice.push_back(levels[v]);
      long long fs = sm[i].at(slice);
      val *= static_cast<double>(fc) / static_cast<double>(fs);
    }
    joint[cell] = val;
  }
  return joint;
}

// Regularized upper incomplete gamma Q(a, x); series and continued
// fraction split at x = a + 1.
double gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < 1000; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double chi2_upper_tail(double x, long long dof) {
  if (dof < 0) fail(Errc::InvalidArgument, "negative degrees of freedom");
  if (x < 0.0) x = 0.0;
  if (dof == 0) return x == 0.0 ? 1.0 : 0.0;
  return gamma_q(static_cast<double>(dof) / 2.0, x / 2.0);
}

}  // namespace

ModelGraph independence_graph(int n_vars) {
  if (n_vars < 1) fail(Errc::InvalidArgument, "need at least one variable");
  return {n_vars, {}};
}

ModelGraph saturated_graph(int n_vars) {
  ModelGraph g = independence_graph(n_vars);
  for (int u = 0; u < n_vars; ++u)
    for (int v = u + 1; v < n_vars; ++v) g.edges.emplace_back(u, v);
  return g;
}

ModelGraph add_edge(const ModelGraph& graph, int u, int v) {
  check_graph(graph);
  auto e = norm_edge(u, v);
  if (e.first < 0 || e.second >= graph.n_vars)
    fail(Errc::InvalidArgument, "edge endpoint out of range");
  ModelGraph out = graph;
  auto it = std::lower_bound(out.edges.begin(), out.edges.end(), e);
  if (it != out.edges.end() && *it == e)
    fail(Errc::InvalidArgument, "edge already present");
  out.edges.insert(it, e);
  return out;
}

ModelGraph remove_edge(const ModelGraph& graph, int u, int v) {
  check_graph(graph);
  auto e = norm_edge(u, v);
  ModelGraph out = graph;
  auto it = std::lower_bound(out.edges.begin(), out.edges.end(), e);
  if (it == out.edges.end() || *it != e)
    fail(Errc::InvalidArgument, "edge not present");
  out.edges.erase(it);
  return out;
}

bool is_chordal(const ModelGraph& graph) {
  auto adj = adjacency(graph);
  auto order = mcs_order(graph.n_vars, adj);
  return chordal_for(graph.n_vars, adj, order);
}

DecomposableModel decompose(const ModelGraph& graph) {
  auto adj = adjacency(graph);
  int n = graph.n_vars;
  auto order = mcs_order(n, adj);
  if (!chordal_for(n, adj, order))
    fail(Errc::NotChordal, "graph admits no junction ordering");

  std::vector<int> num(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) num[order[i]] = i;

  // One candidate clique per vertex: itself plus its earlier-numbered
  // neighbors; drop the non-maximal ones, order the rest by the number of
  // their defining vertex. That order satisfies running intersection.
  std::vector<std::vector<int>> cand(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    cand[v].push_back(v);
    for (int u = 0; u < n; ++u)
      if (adj[v][u] && num[u] < num[v]) cand[v].push_back(u);
    std::sort(cand[v].begin(), cand[v].end());
  }
  std::vector<int> owners;
  for (int v = 0; v < n; ++v) {
    bool maximal = true;
    for (int u = 0; u < n && maximal; ++u)
      if (u != v && is_subset(cand[v], cand[u])) maximal = false;
    if (maximal) owners.push_back(v);
  }
  std::sort(owners.begin(), owners.end(),
            [&](int a, int b) { return num[a] < num[b]; });

  DecomposableModel model;
  model.graph = graph;
  for (int v : owners) model.cliques.push_back(cand[v]);

  std::vector<int> running;
  for (std::size_t j = 0; j < model.cliques.size(); ++j) {
    std::vector<int> sep = sorted_intersection(model.cliques[j], running);
    if (j > 0) {
      bool contained = false;
      for (std::size_t i = 0; i < j && !contained; ++i)
        contained = is_subset(sep, model.cliques[i]);
      if (!contained)
        fail(Errc::Internal, "running intersection property violated");
    }
    model.separators.push_back(std::move(sep));
    std::vector<int> merged;
    std::set_union(running.begin(), running.end(), model.cliques[j].begin(),
                   model.cliques[j].end(), std::back_inserter(merged));
    running = std::move(merged);
  }
  return model;
}

FitResult fit(const DecomposableModel& model, const ObservationSet& data) {
  validate(data);
  if (model.graph.n_vars != data.schema.n_vars())
    fail(Errc::ShapeMismatch, "model covers a different variable set");
  if (!data.fully_labeled())
    fail(Errc::MissingValue, "fitting requires fully labeled data");
  FitResult out;
  out.joint = fit_cliques(model.cliques, model.separators, data);
  std::vector<int> all_vars(static_cast<std::size_t>(data.schema.n_vars()));
  for (int v = 0; v < data.schema.n_vars(); ++v) all_vars[v] = v;
  out.g_squared = g_squared(marginal_counts(data, all_vars), out.joint);
  out.dof = adjusted_dof(model.graph, data);
  return out;
}

double g_squared(const MarginalCounts& observed, const std::vector<double>& joint) {
  if (observed.counts.size() != joint.size())
    fail(Errc::ShapeMismatch, "table sizes differ");
  double n = static_cast<double>(observed.total);
  double g2 = 0.0;
  for (std::size_t i = 0; i < joint.size(); ++i) {
    long long f = observed.counts[i];
    if (f == 0) continue;
    double e = n * joint[i];
    if (e <= 0.0)
      fail(Errc::ZeroExpectedNonzeroObserved,
           "cell " + std::to_string(i) + " observed " + std::to_string(f) +
               " but expected 0");
    g2 += 2.0 * static_cast<double>(f) * std::log(static_cast<double>(f) / e);
  }
  return g2;
}

long long adjusted_dof(const ModelGraph& graph, const ObservationSet& data) {
  validate(data);
  if (graph.n_vars != data.schema.n_vars())
    fail(Errc::ShapeMismatch, "model covers a different variable set");
  check_graph(graph);
  std::vector<long long> obs(static_cast<std::size_t>(graph.n_vars), 0);
  for (int v = 0; v < graph.n_vars; ++v) {
    MarginalCounts mc = marginal_counts(data, {v});
    for (long long c : mc.counts)
      if (c > 0) ++obs[v];
  }
  long long dof = 1;
  for (int v = 0; v < graph.n_vars; ++v) dof += obs[v] - 1;
  for (auto [u, v] : graph.edges) dof += (obs[u] - 1) * (obs[v] - 1);
  return dof;
}

CriterionValue criterion_delta(Criterion criterion, Direction direction,
                               double delta_g2, long long delta_dof, long long n,
                               double alpha) {
  CriterionValue out;
  switch (criterion) {
    case Criterion::kAic:
      out.score = delta_g2 - 2.0 * static_cast<double>(delta_dof);
      out.acceptable =
          direction == Direction::kForward ? out.score > 0.0 : out.score < 0.0;
      return out;
    case Criterion::kBic:
      if (n < 1) fail(Errc::InvalidArgument, "sample size must be positive");
      out.score = delta_g2 - std::log(static_cast<double>(n)) *
                                 static_cast<double>(delta_dof);
      out.acceptable =
          direction == Direction::kForward ? out.score > 0.0 : out.score < 0.0;
      return out;
    case Criterion::kChi2:
      if (!(alpha > 0.0 && alpha < 1.0))
        fail(Errc::InvalidArgument, "alpha must lie in (0, 1)");
      out.score = chi2_upper_tail(delta_g2, delta_dof);
      out.acceptable =
          direction == Direction::kForward ? out.score > alpha : out.score < alpha;
      return out;
  }
  fail(Errc::Internal, "unknown criterion");
}

std::vector<ModelGraph> candidates(const ModelGraph& graph, Direction direction) {
  check_graph(graph);
  std::vector<ModelGraph> out;
  if (direction == Direction::kForward) {
    for (int u = 0; u < graph.n_vars; ++u)
      for (int v = u + 1; v < graph.n_vars; ++v) {
        if (std::binary_search(graph.edges.begin(), graph.edges.end(),
                               std::pair<int, int>(u, v)))
          continue;
        ModelGraph h = add_edge(graph, u, v);
        if (is_chordal(h)) out.push_back(std::move(h));
      }
  } else {
    for (auto [u, v] : graph.edges) {
      ModelGraph h = remove_edge(graph, u, v);
      if (is_chordal(h)) out.push_back(std::move(h));
    }
  }
  return out;
}

SelectionResult sequential_select(const ObservationSet& data,
                                  Direction direction, Criterion criterion,
                                  double alpha) {
  validate(data);
  int nv = data.schema.n_vars();
  ModelGraph cur = direction == Direction::kForward ? independence_graph(nv)
                                                    : saturated_graph(nv);
  DecomposableModel cur_model = decompose(cur);
  FitResult cur_fit = fit(cur_model, data);
  long long n = data.n();

  SelectionResult res;
  res.sequence.push_back(cur_model);
  for (;;) {
    SelectionStep step;
    step.current = format_model(cur_model, data.schema);
    step.current_g2 = cur_fit.g_squared;
    int best = -1;
    for (ModelGraph& g : candidates(cur, direction)) {
      CandidateEval ce;
      ce.model = decompose(g);
      FitResult f = fit(ce.model, data);
      ce.g2 = f.g_squared;
      ce.dof = f.dof;
      if (direction == Direction::kForward) {
        ce.delta_g2 = cur_fit.g_squared - f.g_squared;
        ce.delta_dof = f.dof - cur_fit.dof;
      } else {
        ce.delta_g2 = f.g_squared - cur_fit.g_squared;
        ce.delta_dof = cur_fit.dof - f.dof;
      }
      CriterionValue cv =
          criterion_delta(criterion, direction, ce.delta_g2, ce.delta_dof, n, alpha);
      ce.score = cv.score;
      ce.acceptable = cv.acceptable;
      step.candidates.push_back(std::move(ce));
      int idx = static_cast<int>(step.candidates.size()) - 1;
      const CandidateEval& c = step.candidates.back();
      if (!c.acceptable) continue;
      if (best == -1) {
        best = idx;
        continue;
      }
      // Forward keeps the largest score, backward the smallest; strict
      // comparison leaves earlier candidates in place on ties.
      bool better = direction == Direction::kForward
                        ? c.score > step.candidates[best].score
                        : c.score < step.candidates[best].score;
      if (better) best = idx;
    }
    step.chosen = best;
    res.steps.push_back(step);
    if (best == -1) break;
    const CandidateEval& won = res.steps.back().candidates[best];
    cur_model = won.model;
    cur = cur_model.graph;
    cur_fit.g_squared = won.g2;
    cur_fit.dof = won.dof;
    res.sequence.push_back(cur_model);
  }
  res.selected = cur_model;
  res.selected_g2 = cur_fit.g_squared;
  res.selected_dof = cur_fit.dof;
  return res;
}

NaiveMixResult naive_mix(const std::vector<DecomposableModel>& sequence,
                         const ObservationSet& data) {
  if (sequence.empty()) fail(Errc::InvalidArgument, "empty model sequence");
  validate(data);
  if (!data.fully_labeled())
    fail(Errc::MissingValue, "fitting requires fully labeled data");
  const FeatureSchema& schema = data.schema;
  int cls = schema.class_col;
  std::size_t cells = space_size(schema.cards);

  NaiveMixResult out;
  out.averaged.assign(cells, 0.0);
  for (const DecomposableModel& model : sequence) {
    if (model.graph.n_vars != schema.n_vars())
      fail(Errc::ShapeMismatch, "model covers a different variable set");
    std::vector<std::vector<int>> kept;
    for (const auto& clique : model.cliques)
      if (std::binary_search(clique.begin(), clique.end(), cls))
        kept.push_back(clique);
    if (kept.empty())
      fail(Errc::Internal, "class variable missing from every clique");

    // The cliques holding one shared vertex form a subtree of the junction
    // tree, so running intersection survives the restriction; verify anyway.
    std::vector<std::vector<int>> seps;
    std::vector<int> running;
    for (std::size_t j = 0; j < kept.size(); ++j) {
      std::vector<int> sep = sorted_intersection(kept[j], running);
      if (j > 0) {
        bool contained = false;
        for (std::size_t i = 0; i < j && !contained; ++i)
          contained = is_subset(sep, kept[i]);
        if (!contained)
          fail(Errc::Internal, "running intersection lost after stripping");
      }
      seps.push_back(std::move(sep));
      std::vector<int> merged;
      std::set_union(running.begin(), running.end(), kept[j].begin(),
                     kept[j].end(), std::back_inserter(merged));
      running = std::move(merged);
    }

    std::vector<double> member = fit_cliques(kept, seps, data);
    for (std::size_t i = 0; i < cells; ++i) out.averaged[i] += member[i];
    out.kept_cliques.push_back(std::move(kept));
  }
  double r = static_cast<double>(sequence.size());
  for (double& v : out.averaged) v /= r;
  return out;
}

int classify_joint(const std::vector<double>& joint, const FeatureSchema& schema,
                   std::span<const int> row) {
  if (joint.size() != space_size(schema.cards))
    fail(Errc::ShapeMismatch, "table does not match the event space");
  if (static_cast<int>(row.size()) != schema.n_vars())
    fail(Errc::ShapeMismatch, "row width mismatch");
  int best = -1;
  double best_p = 0.0;
  for (int s = 0; s < schema.k(); ++s) {
    std::size_t idx = 0;
    for (int c = 0; c < schema.n_vars(); ++c) {
      int v = c == schema.class_col ? s : row[c];
      if (v < 0 || v >= schema.cards[c])
        fail(Errc::InvalidArgument, "level out of range");
      idx = idx * static_cast<std::size_t>(schema.cards[c]) +
            static_cast<std::size_t>(v);
    }
    if (joint[idx] > best_p) {
      best_p = joint[idx];
      best = s;
    }
  }
  if (best == -1)
    fail(Errc::ZeroEvidence, "event has probability zero under every class");
  return best;
}

std::string format_model(const std::vector<std::vector<int>>& cliques,
                         const FeatureSchema& schema) {
  std::vector<std::string> parts;
  for (const auto& clique : cliques) {
    std::vector<std::string> names;
    for (int v : clique) {
      if (v < 0 || v >= schema.n_vars())
        fail(Errc::InvalidArgument, "clique variable out of range");
      names.push_back(schema.names[v]);
    }
    std::sort(names.begin(), names.end());
    std::string part = "(";
    for (const std::string& name : names) {
      if (name.size() == 1 && std::isupper(static_cast<unsigned char>(name[0])))
        part += name;
      else
        part += "[" + name + "]";
    }
    part += ")";
    parts.push_back(std::move(part));
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const std::string& p : parts) out += p;
  return out;
}

std::string format_model(const DecomposableModel& model,
                         const FeatureSchema& schema) {
  return format_model(model.cliques, schema);
}

ModelGraph parse_model(const std::string& text, const FeatureSchema& schema) {
  std::vector<std::vector<int>> groups;
  std::size_t i = 0;
  auto lookup = [&](const std::string& name, std::size_t at) {
    for (int v = 0; v < schema.n_vars(); ++v)
      if (schema.names[v] == name) return v;
    fail(Errc::ParseError,
         "unknown variable '" + name + "' at offset " + std::to_string(at));
  };
  if (text.empty()) fail(Errc::ParseError, "empty model string");
  while (i < text.size()) {
    if (text[i] != '(')
      fail(Errc::ParseError, "expected '(' at offset " + std::to_string(i));
    ++i;
    std::vector<int> group;
    while (i < text.size() && text[i] != ')') {
      int var;
      if (text[i] == '[') {
        std::size_t close = text.find(']', i);
        if (close == std::string::npos)
          fail(Errc::ParseError, "unterminated '[' at offset " + std::to_string(i));
        var = lookup(text.substr(i + 1, close - i - 1), i);
        i = close + 1;
      } else if (std::isupper(static_cast<unsigned char>(text[i]))) {
        var = lookup(std::string(1, text[i]), i);
        ++i;
      } else {
        fail(Errc::ParseError,
             "unexpected character at offset " + std::to_string(i));
      }
      for (int seen : group)
        if (seen == var)
          fail(Errc::ParseError, "variable repeated inside a clique");
      group.push_back(var);
    }
    if (i >= text.size())
      fail(Errc::ParseError, "unterminated '(' group");
    if (group.empty()) fail(Errc::ParseError, "empty clique");
    ++i;
    groups.push_back(std::move(group));
  }
  ModelGraph g = independence_graph(schema.n_vars());
  for (const auto& group : groups)
    for (std::size_t a = 0; a < group.size(); ++a)
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        auto e = norm_edge(group[a], group[b]);
        auto it = std::lower_bound(g.edges.begin(), g.edges.end(), e);
        if (it == g.edges.end() || *it != e) g.edges.insert(it, e);
      }
  return g;
}

}  // namespace dml
