#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dml/driver.hpp"
#include "dml/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"classifiers and mixture models over discrete feature vectors"};
  app.require_subcommand(1);

  dml::ExperimentConfig cfg;
  std::string out_path;

  auto add_common = [&](CLI::App* sub, bool class_required) {
    sub->add_option("--data", cfg.data_path, "input CSV file")->required();
    auto* cc =
        sub->add_option("--class-col", cfg.class_col, "name of the class column");
    if (class_required) cc->required();
    sub->add_option("--gold-col", cfg.gold_col,
                    "held-out label column, used only for scoring");
    sub->add_option("--output", out_path,
                    "write the report here instead of stdout");
    sub->add_option("--format", cfg.format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed")->required();
  };
  auto add_k = [&](CLI::App* sub) {
    sub->add_option(
        "--k", cfg.k,
        "number of classes (default: levels observed in the class column)");
  };
  auto add_em_knobs = [&](CLI::App* sub) {
    sub->add_option("--epsilon", cfg.epsilon,
                    "convergence threshold on parameter change");
    sub->add_option("--max-iterations", cfg.max_iterations, "iteration cap");
    sub->add_option("--imputation", cfg.imputation, "hard or soft")
        ->check(CLI::IsMember({"hard", "soft"}));
    sub->add_option("--smooth", cfg.add_alpha, "additive smoothing pseudo-count");
  };
  auto add_gibbs_knobs = [&](CLI::App* sub) {
    sub->add_option("--burn-in", cfg.burn_in,
                    "iterations discarded before monitoring");
    sub->add_option("--monitor", cfg.monitor, "initial monitored chain length");
    sub->add_option("--increment", cfg.increment, "chain extension step");
    sub->add_option("--max-chain", cfg.max_chain, "monitored chain cap");
  };
  auto add_select_knobs = [&](CLI::App* sub) {
    sub->add_option("--direction", cfg.direction, "forward or backward")
        ->check(CLI::IsMember({"forward", "backward"}));
    sub->add_option("--criterion", cfg.criterion, "aic, bic or chi2")
        ->check(CLI::IsMember({"aic", "bic", "chi2"}));
    sub->add_option("--alpha", cfg.alpha, "chi2 significance level");
  };
  auto add_init = [&](CLI::App* sub) {
    sub->add_option("--init-file", cfg.init_file,
                    "initial labels, one per row")
        ->group("");
  };

  CLI::App* em = app.add_subcommand("em", "fit a mixture by iterated imputation");
  add_common(em, false);
  add_seed(em);
  add_k(em);
  add_em_knobs(em);
  add_init(em);

  CLI::App* gibbs =
      app.add_subcommand("gibbs", "fit a mixture by posterior simulation");
  add_common(gibbs, false);
  add_seed(gibbs);
  add_k(gibbs);
  add_gibbs_knobs(gibbs);
  add_init(gibbs);

  CLI::App* cluster =
      app.add_subcommand("cluster", "agglomerative clustering of the rows");
  add_common(cluster, false);
  add_seed(cluster);
  add_k(cluster);
  cluster->add_option("--linkage", cfg.linkage, "ward or mcquitty")
      ->check(CLI::IsMember({"ward", "mcquitty"}));

  CLI::App* select =
      app.add_subcommand("select", "stepwise decomposable model selection");
  add_common(select, true);
  add_select_knobs(select);

  CLI::App* mix = app.add_subcommand(
      "naive-mix", "average the models visited during selection");
  add_common(mix, true);
  add_select_knobs(mix);

  CLI::App* nb = app.add_subcommand("naive-bayes", "fit a naive Bayes classifier");
  add_common(nb, true);
  nb->add_option("--smooth", cfg.add_alpha, "additive smoothing pseudo-count");

  CLI::App* maj = app.add_subcommand("majority", "majority-class baseline");
  add_common(maj, true);

  CLI::App* ev = app.add_subcommand(
      "evaluate", "repeated unsupervised trials scored against gold labels");
  add_common(ev, false);
  add_seed(ev);
  add_k(ev);
  ev->get_option("--gold-col")->required();
  ev->add_option("--method", cfg.eval_method, "em, gibbs, ward or mcquitty")
      ->check(CLI::IsMember({"em", "gibbs", "ward", "mcquitty"}));
  ev->add_option("--trials", cfg.trials, "number of trials");
  add_em_knobs(ev);
  add_gibbs_knobs(ev);

  CLI::App* cv =
      app.add_subcommand("cv", "k-fold cross-validation of a supervised learner");
  add_common(cv, true);
  add_seed(cv);
  cv->add_option("--method", cfg.cv_method,
                 "naive-bayes, select, naive-mix or majority")
      ->check(CLI::IsMember({"naive-bayes", "select", "naive-mix", "majority"}));
  cv->add_option("--folds", cfg.folds, "number of folds");
  add_select_knobs(cv);
  cv->add_option("--smooth", cfg.add_alpha, "additive smoothing pseudo-count");

  CLI::App* lc = app.add_subcommand(
      "learning-curve", "cross-validated accuracy at growing training sizes");
  add_common(lc, true);
  add_seed(lc);
  lc->add_option("--method", cfg.cv_method,
                 "naive-bayes, select, naive-mix or majority")
      ->check(CLI::IsMember({"naive-bayes", "select", "naive-mix", "majority"}));
  lc->add_option("--folds", cfg.folds, "number of folds");
  lc->add_option("--sizes", cfg.curve_sizes, "training-set sizes")
      ->delimiter(',');
  add_select_knobs(lc);
  lc->add_option("--smooth", cfg.add_alpha, "additive smoothing pseudo-count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (em->parsed()) cfg.method = dml::MethodKind::kEm;
  if (gibbs->parsed()) cfg.method = dml::MethodKind::kGibbs;
  if (cluster->parsed()) cfg.method = dml::MethodKind::kCluster;
  if (select->parsed()) cfg.method = dml::MethodKind::kSelect;
  if (mix->parsed()) cfg.method = dml::MethodKind::kNaiveMix;
  if (nb->parsed()) cfg.method = dml::MethodKind::kNaiveBayes;
  if (maj->parsed()) cfg.method = dml::MethodKind::kMajority;
  if (ev->parsed()) cfg.method = dml::MethodKind::kEvaluate;
  if (cv->parsed()) cfg.method = dml::MethodKind::kCv;
  if (lc->parsed()) cfg.method = dml::MethodKind::kLearningCurve;

  try {
    dml::RunOutcome out = dml::run(cfg);
    if (!out_path.empty()) {
      std::ofstream f(out_path);
      if (!f) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return 3;
      }
      f << out.rendered;
    } else {
      std::cout << out.rendered;
    }
    return out.exit_code;
  } catch (const dml::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dml::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
