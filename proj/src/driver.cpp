#include "dml/driver.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dml/cluster.hpp"
#include "dml/dataset.hpp"
#include "dml/decomposable.hpp"
#include "dml/em.hpp"
#include "dml/eval.hpp"
#include "dml/gibbs.hpp"
#include "dml/naive_bayes.hpp"

namespace dml {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* method_name(MethodKind m) {
  switch (m) {
    case MethodKind::kEm: return "em";
    case MethodKind::kGibbs: return "gibbs";
    case MethodKind::kCluster: return "cluster";
    case MethodKind::kSelect: return "select";
    case MethodKind::kNaiveMix: return "naive-mix";
    case MethodKind::kNaiveBayes: return "naive-bayes";
    case MethodKind::kMajority: return "majority";
    case MethodKind::kEvaluate: return "evaluate";
    case MethodKind::kCv: return "cv";
    case MethodKind::kLearningCurve: return "learning-curve";
  }
  return "unknown";
}

Imputation parse_imputation(const std::string& s) {
  if (s == "hard") return Imputation::kHard;
  if (s == "soft") return Imputation::kSoft;
  fail(Errc::InvalidArgument, "imputation must be hard or soft");
}

Linkage parse_linkage(const std::string& s) {
  if (s == "ward") return Linkage::kWard;
  if (s == "mcquitty") return Linkage::kMcQuitty;
  fail(Errc::InvalidArgument, "linkage must be ward or mcquitty");
}

Direction parse_direction(const std::string& s) {
  if (s == "forward") return Direction::kForward;
  if (s == "backward") return Direction::kBackward;
  fail(Errc::InvalidArgument, "direction must be forward or backward");
}

Criterion parse_criterion(const std::string& s) {
  if (s == "aic") return Criterion::kAic;
  if (s == "bic") return Criterion::kBic;
  if (s == "chi2") return Criterion::kChi2;
  fail(Errc::InvalidArgument, "criterion must be aic, bic or chi2");
}

std::vector<int> read_init_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open " + path);
  std::vector<int> out;
  long long v;
  while (in >> v) out.push_back(static_cast<int>(v));
  if (!in.eof()) fail(Errc::ParseError, path + ": non-integer label");
  if (out.empty()) fail(Errc::ParseError, path + ": no labels");
  return out;
}

ParameterSet train_naive_bayes(const ObservationSet& data, double add_alpha) {
  int cls = data.schema.class_col;
  MarginalCounts class_counts = marginal_counts(data, {cls});
  std::vector<MarginalCounts> joints;
  for (int f : data.schema.feature_cols())
    joints.push_back(marginal_counts(data, {f, cls}));
  return mle_from_counts(class_counts, joints, add_alpha);
}

ordered_json params_json(const ParameterSet& p, const FeatureSchema& schema) {
  ordered_json out;
  out["prior"] = p.prior;
  ordered_json conds = ordered_json::array();
  for (int f = 0; f < p.n_features(); ++f) {
    ordered_json entry;
    entry["feature"] = schema.names[p.feature_vars[f]];
    ordered_json rows = ordered_json::array();
    int card = p.feature_cards[f];
    for (int s = 0; s < p.k(); ++s) {
      std::vector<double> row(
          p.cond[f].begin() + static_cast<std::size_t>(s) * card,
          p.cond[f].begin() + static_cast<std::size_t>(s + 1) * card);
      rows.push_back(row);
    }
    entry["rows"] = rows;
    conds.push_back(entry);
  }
  out["conditionals"] = conds;
  return out;
}

ordered_json confusion_json(const ConfusionMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (int g = 0; g < m.k; ++g) {
    std::vector<long long> row(static_cast<std::size_t>(m.k));
    for (int c = 0; c < m.k; ++c) row[c] = m.at(g, c);
    rows.push_back(row);
  }
  return rows;
}

// Scores grouped assignments against gold labels over the widest label
// space either side uses.
ordered_json gold_json(const std::vector<int>& assignments,
                       const std::vector<int>& gold, int k) {
  for (int v : assignments) k = std::max(k, v + 1);
  for (int v : gold) k = std::max(k, v + 1);
  MappingResult mr = best_mapping_accuracy(assignments, gold, k);
  ordered_json out;
  out["accuracy"] = mr.accuracy;
  out["majority_baseline"] = majority_baseline(gold, k);
  out["mapping"] = mr.mapping;
  out["confusion"] = confusion_json(confusion(assignments, gold, mr.mapping, k));
  return out;
}

SupervisedLearner make_supervised(const ExperimentConfig& cfg) {
  if (cfg.cv_method == "naive-bayes") {
    double alpha = cfg.add_alpha;
    return [alpha](const ObservationSet& train) -> TrainedClassifier {
      ParameterSet params = train_naive_bayes(train, alpha);
      return [params](std::span<const int> row) { return classify(params, row); };
    };
  }
  if (cfg.cv_method == "majority") {
    return [](const ObservationSet& train) -> TrainedClassifier {
      MarginalCounts counts = marginal_counts(train, {train.schema.class_col});
      int best = 0;
      for (std::size_t s = 1; s < counts.counts.size(); ++s)
        if (counts.counts[s] > counts.counts[best]) best = static_cast<int>(s);
      return [best](std::span<const int>) { return best; };
    };
  }
  if (cfg.cv_method == "select" || cfg.cv_method == "naive-mix") {
    Direction dir = parse_direction(cfg.direction);
    Criterion crit = parse_criterion(cfg.criterion);
    double alpha = cfg.alpha;
    bool mix = cfg.cv_method == "naive-mix";
    return [dir, crit, alpha, mix](const ObservationSet& train) -> TrainedClassifier {
      SelectionResult sel = sequential_select(train, dir, crit, alpha);
      std::vector<double> joint =
          mix ? naive_mix(sel.sequence, train).averaged
              : fit(sel.selected, train).joint;
      FeatureSchema schema = train.schema;
      return [joint = std::move(joint), schema = std::move(schema)](
                 std::span<const int> row) {
        return classify_joint(joint, schema, row);
      };
    };
  }
  fail(Errc::InvalidArgument, "unknown cv method " + cfg.cv_method);
}

std::string csv_assignments(const std::vector<int>& assignments) {
  std::ostringstream out;
  out << "row,assignment\n";
  for (std::size_t r = 0; r < assignments.size(); ++r)
    out << r << ',' << assignments[r] << '\n';
  return out.str();
}

std::string csv_pairs(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ostringstream out;
  out << "key,value\n";
  for (const auto& [k, v] : kv) out << k << ',' << v << '\n';
  return out.str();
}

std::string fmt_double(double v) {
  ordered_json j = v;
  return j.dump();
}

}  // namespace

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::ZeroEvidence:
    case Errc::DegenerateClass:
    case Errc::ChainTooShort:
    case Errc::EmptyChain:
    case Errc::ZeroExpectedNonzeroObserved:
    case Errc::LearnerFailure:
    case Errc::Internal:
      return 4;
    default:
      return 3;
  }
}

RunOutcome run(const ExperimentConfig& cfg) {
  if (cfg.data_path.empty()) fail(Errc::InvalidArgument, "no data file given");
  if (cfg.format != "json" && cfg.format != "csv")
    fail(Errc::InvalidArgument, "format must be json or csv");

  Dataset ds = load_dataset(cfg.data_path, {cfg.class_col, cfg.gold_col});
  ObservationSet data = ds.data;
  int cls = data.schema.class_col;
  int observed_k = static_cast<int>(ds.level_names[cls].size());

  // Resolve k: explicit, else observed class levels, else gold levels for
  // evaluate runs.
  int k = cfg.k;
  if (k <= 0) {
    if (cfg.method == MethodKind::kEvaluate)
      k = static_cast<int>(ds.gold_levels.size());
    else
      k = observed_k;
    if (k < 1)
      fail(Errc::InvalidArgument, "k cannot be derived from the data; pass --k");
  }
  if (k > data.schema.cards[cls]) data = with_class_cardinality(data, k);

  ordered_json report;
  report["method"] = method_name(cfg.method);

  ordered_json echo;
  echo["class_column"] = data.schema.names[cls];
  if (!cfg.gold_col.empty()) echo["gold_column"] = cfg.gold_col;
  echo["k"] = k;

  ordered_json result;
  std::string csv;
  int exit_code = 0;

  std::vector<int> init;
  if (!cfg.init_file.empty()) init = read_init_file(cfg.init_file);

  switch (cfg.method) {
    case MethodKind::kEm: {
      EmConfig ec;
      ec.k = k;
      ec.epsilon = cfg.epsilon;
      ec.max_iterations = cfg.max_iterations;
      ec.seed = cfg.seed;
      ec.mode = parse_imputation(cfg.imputation);
      ec.init = init;
      ec.add_alpha = cfg.add_alpha;
      echo["seed"] = cfg.seed;
      echo["epsilon"] = cfg.epsilon;
      echo["max_iterations"] = cfg.max_iterations;
      echo["imputation"] = cfg.imputation;
      EmResult er = run_em(data, ec);
      result["converged"] = er.converged;
      result["iterations"] = er.iterations;
      result["effective_k"] = er.effective_k;
      result["trajectory"] = er.trajectory;
      result["log_likelihood"] = er.log_likelihood;
      result["assignments"] = er.assignments;
      result["params"] = params_json(er.params, data.schema);
      if (!ds.gold.empty()) result["gold"] = gold_json(er.assignments, ds.gold, k);
      if (!er.converged) exit_code = 4;
      csv = csv_assignments(er.assignments);
      break;
    }
    case MethodKind::kGibbs: {
      GibbsConfig gc;
      gc.k = k;
      gc.seed = cfg.seed;
      gc.burn_in = cfg.burn_in;
      gc.monitor = cfg.monitor;
      gc.increment = cfg.increment;
      gc.max_chain = cfg.max_chain;
      gc.init = init;
      echo["seed"] = cfg.seed;
      echo["burn_in"] = cfg.burn_in;
      echo["monitor"] = cfg.monitor;
      echo["increment"] = cfg.increment;
      echo["max_chain"] = cfg.max_chain;
      GibbsResult gr = run_gibbs(data, gc);
      result["converged"] = gr.converged;
      result["iterations"] = gr.iterations;
      result["burn_in"] = gr.burn_in;
      result["chain_length"] = gr.chains.length();
      result["assignments"] = gr.assignments;
      result["params"] = params_json(gr.params, data.schema);
      if (!ds.gold.empty()) result["gold"] = gold_json(gr.assignments, ds.gold, k);
      if (!gr.converged) exit_code = 4;
      csv = csv_assignments(gr.assignments);
      break;
    }
    case MethodKind::kCluster: {
      Linkage linkage = parse_linkage(cfg.linkage);
      echo["seed"] = cfg.seed;
      echo["linkage"] = cfg.linkage;
      Agglomeration ag =
          agglomerate(dissimilarity_matrix(data), linkage, k, cfg.seed);
      ordered_json merges = ordered_json::array();
      for (const MergeStep& m : ag.merges) {
        ordered_json step;
        step["a"] = m.a;
        step["b"] = m.b;
        step["criterion"] = m.criterion;
        merges.push_back(step);
      }
      result["linkage"] = cfg.linkage;
      result["merges"] = merges;
      result["assignments"] = ag.assignments;
      if (!ds.gold.empty())
        result["gold"] = gold_json(ag.assignments, ds.gold, k);
      csv = csv_assignments(ag.assignments);
      break;
    }
    case MethodKind::kSelect:
    case MethodKind::kNaiveMix: {
      Direction dir = parse_direction(cfg.direction);
      Criterion crit = parse_criterion(cfg.criterion);
      echo["direction"] = cfg.direction;
      echo["criterion"] = cfg.criterion;
      if (crit == Criterion::kChi2) echo["alpha"] = cfg.alpha;
      SelectionResult sel = sequential_select(data, dir, crit, cfg.alpha);

      ordered_json steps = ordered_json::array();
      for (const SelectionStep& st : sel.steps) {
        ordered_json sj;
        sj["current"] = st.current;
        sj["current_g2"] = st.current_g2;
        ordered_json cands = ordered_json::array();
        for (const CandidateEval& ce : st.candidates) {
          ordered_json cj;
          cj["model"] = format_model(ce.model, data.schema);
          cj["g2"] = ce.g2;
          cj["delta_g2"] = ce.delta_g2;
          cj["delta_dof"] = ce.delta_dof;
          cj["score"] = ce.score;
          cj["acceptable"] = ce.acceptable;
          cands.push_back(cj);
        }
        sj["candidates"] = cands;
        sj["chosen"] = st.chosen;
        steps.push_back(sj);
      }
      ordered_json seq = ordered_json::array();
      for (const DecomposableModel& m : sel.sequence)
        seq.push_back(format_model(m, data.schema));
      result["steps"] = steps;
      result["sequence"] = seq;
      result["selected"] = format_model(sel.selected, data.schema);
      result["selected_g2"] = sel.selected_g2;
      result["selected_dof"] = sel.selected_dof;

      std::vector<std::pair<std::string, std::string>> kv;
      kv.emplace_back("selected", format_model(sel.selected, data.schema));
      kv.emplace_back("selected_g2", fmt_double(sel.selected_g2));
      kv.emplace_back("selected_dof", std::to_string(sel.selected_dof));

      std::vector<double> joint;
      if (cfg.method == MethodKind::kNaiveMix) {
        NaiveMixResult mix = naive_mix(sel.sequence, data);
        ordered_json members = ordered_json::array();
        for (const auto& kept : mix.kept_cliques)
          members.push_back(format_model(kept, data.schema));
        result["members"] = members;
        joint = std::move(mix.averaged);
      } else {
        joint = fit(sel.selected, data).joint;
      }
      int hits = 0;
      for (const auto& row : data.rows)
        if (classify_joint(joint, data.schema, row) == row[cls]) ++hits;
      double train_acc = static_cast<double>(hits) / data.n();
      result["training_accuracy"] = train_acc;
      kv.emplace_back("training_accuracy", fmt_double(train_acc));
      csv = csv_pairs(kv);
      break;
    }
    case MethodKind::kNaiveBayes: {
      echo["smooth"] = cfg.add_alpha;
      ParameterSet params = train_naive_bayes(data, cfg.add_alpha);
      int hits = 0;
      for (const auto& row : data.rows)
        if (classify(params, row) == row[cls]) ++hits;
      double train_acc = static_cast<double>(hits) / data.n();
      result["params"] = params_json(params, data.schema);
      result["training_accuracy"] = train_acc;
      csv = csv_pairs({{"training_accuracy", fmt_double(train_acc)}});
      break;
    }
    case MethodKind::kMajority: {
      MarginalCounts counts = marginal_counts(data, {cls});
      int best = 0;
      for (std::size_t s = 1; s < counts.counts.size(); ++s)
        if (counts.counts[s] > counts.counts[best]) best = static_cast<int>(s);
      double share = static_cast<double>(counts.counts[best]) / data.n();
      result["majority_class"] =
          best < static_cast<int>(ds.level_names[cls].size())
              ? ordered_json(ds.level_names[cls][best])
              : ordered_json(best);
      result["share"] = share;
      result["training_accuracy"] = share;
      csv = csv_pairs({{"share", fmt_double(share)}});
      break;
    }
    case MethodKind::kEvaluate: {
      if (ds.gold.empty())
        fail(Errc::InvalidArgument, "evaluate requires --gold-col");
      echo["eval_method"] = cfg.eval_method;
      echo["trials"] = cfg.trials;
      echo["seed"] = cfg.seed;

      std::vector<char> conv;
      UnsupervisedLearner learner;
      if (cfg.eval_method == "em") {
        EmConfig ec;
        ec.k = k;
        ec.epsilon = cfg.epsilon;
        ec.max_iterations = cfg.max_iterations;
        ec.mode = parse_imputation(cfg.imputation);
        ec.add_alpha = cfg.add_alpha;
        learner = [ec, &conv](const ObservationSet& d, std::uint64_t seed) {
          EmConfig c = ec;
          c.seed = seed;
          EmResult er = run_em(d, c);
          conv.push_back(er.converged ? 1 : 0);
          return er.assignments;
        };
      } else if (cfg.eval_method == "gibbs") {
        GibbsConfig gc;
        gc.k = k;
        gc.burn_in = cfg.burn_in;
        gc.monitor = cfg.monitor;
        gc.increment = cfg.increment;
        gc.max_chain = cfg.max_chain;
        learner = [gc, &conv](const ObservationSet& d, std::uint64_t seed) {
          GibbsConfig c = gc;
          c.seed = seed;
          GibbsResult gr = run_gibbs(d, c);
          conv.push_back(gr.converged ? 1 : 0);
          return gr.assignments;
        };
      } else if (cfg.eval_method == "ward" || cfg.eval_method == "mcquitty") {
        Linkage linkage = parse_linkage(cfg.eval_method);
        int kk = k;
        learner = [linkage, kk, &conv](const ObservationSet& d,
                                       std::uint64_t seed) {
          Agglomeration ag =
              agglomerate(dissimilarity_matrix(d), linkage, kk, seed);
          conv.push_back(1);
          return ag.assignments;
        };
      } else {
        fail(Errc::InvalidArgument, "unknown eval method " + cfg.eval_method);
      }

      TrialsResult tr = repeated_trials(data, ds.gold, learner, cfg.trials, cfg.seed);
      int best_trial = 0;
      for (std::size_t t = 1; t < tr.per_trial.size(); ++t)
        if (tr.per_trial[t] > tr.per_trial[best_trial])
          best_trial = static_cast<int>(t);

      result["trials"] = cfg.trials;
      result["accuracies"] = tr.per_trial;
      result["converged"] = std::vector<bool>(conv.begin(), conv.end());
      result["mean"] = tr.mean;
      result["stddev"] = tr.stddev;
      result["majority_baseline"] =
          majority_baseline(ds.gold, std::max(k, static_cast<int>(
                                                     ds.gold_levels.size())));
      result["best_trial"] = best_trial;
      result["best"] = gold_json(tr.assignments[best_trial], ds.gold, k);

      std::ostringstream cs;
      cs << "trial,seed,accuracy,converged\n";
      for (std::size_t t = 0; t < tr.per_trial.size(); ++t)
        cs << t << ',' << cfg.seed + t << ',' << fmt_double(tr.per_trial[t])
           << ',' << (t < conv.size() && conv[t] ? 1 : 0) << '\n';
      csv = cs.str();
      break;
    }
    case MethodKind::kCv: {
      echo["cv_method"] = cfg.cv_method;
      echo["folds"] = cfg.folds;
      echo["seed"] = cfg.seed;
      CvResult cv = k_fold_cv(data, cfg.folds, make_supervised(cfg), cfg.seed);
      result["cv_method"] = cfg.cv_method;
      result["folds"] = cfg.folds;
      result["per_fold"] = cv.per_fold;
      result["mean"] = cv.mean;
      result["stddev"] = cv.stddev;
      std::ostringstream cs;
      cs << "fold,accuracy\n";
      for (std::size_t f = 0; f < cv.per_fold.size(); ++f)
        cs << f << ',' << fmt_double(cv.per_fold[f]) << '\n';
      csv = cs.str();
      break;
    }
    case MethodKind::kLearningCurve: {
      std::vector<int> sizes = cfg.curve_sizes;
      if (sizes.empty()) {
        int cap = static_cast<int>(0.9 * data.n());
        for (int m : {10, 50})
          if (m <= cap) sizes.push_back(m);
        for (int m = 100; m <= cap; m += 100) sizes.push_back(m);
        if (sizes.empty() && cap >= 1) sizes.push_back(cap);
      }
      echo["cv_method"] = cfg.cv_method;
      echo["folds"] = cfg.folds;
      echo["seed"] = cfg.seed;
      LearningCurve lc =
          learning_curve(data, sizes, cfg.folds, make_supervised(cfg), cfg.seed);
      result["cv_method"] = cfg.cv_method;
      result["sizes"] = lc.sizes;
      result["accuracy"] = lc.accuracy;
      std::ostringstream cs;
      cs << "size,accuracy\n";
      for (std::size_t i = 0; i < lc.sizes.size(); ++i)
        cs << lc.sizes[i] << ',' << fmt_double(lc.accuracy[i]) << '\n';
      csv = cs.str();
      break;
    }
  }

  report["config"] = echo;
  ordered_json dj;
  dj["path"] = cfg.data_path;
  dj["rows"] = data.n();
  dj["columns"] = data.schema.names;
  report["data"] = dj;
  report["result"] = result;

  RunOutcome out;
  out.exit_code = exit_code;
  out.rendered = cfg.format == "json" ? report.dump(2) + "\n" : csv;
  return out;
}

}  // namespace dml
