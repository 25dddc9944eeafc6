// Command-line front end: train, predict and benchmark.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "cgtree/dataset.hpp"
#include "cgtree/errors.hpp"
#include "cgtree/tree_json.hpp"
#include "cgtree/trainer.hpp"

namespace fs = std::filesystem;
using namespace cgtree;

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr std::size_t kPreprocessAutoRows = 10000;

struct Common {
  int depth = 2;
  std::uint64_t seed = 1;
  double time_limit = 600.0;
  std::string beta_mode = "ub";
  std::string sp_mode = "merged";
  bool no_extra_init = false;
  std::string preprocess = "auto";
  int heuristic_attempts = 100;
  int cut_period = 10;
  int threads = 1;
  std::string target_col;
  std::string log_path;
};

void add_common(CLI::App& app, Common& c) {
  app.add_option("--depth", c.depth, "Tree depth")->check(CLI::Range(1, 20));
  app.add_option("--seed", c.seed, "Random seed");
  app.add_option("--time-limit", c.time_limit, "Seconds per training run, 0 for none")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--beta-mode", c.beta_mode, "Row constraint handling")
      ->check(CLI::IsMember({"none", "lb", "ub", "eq", "all", "extra"}));
  app.add_option("--sp-mode", c.sp_mode, "Pricing subproblem")
      ->check(CLI::IsMember({"merged", "original"}));
  app.add_flag("--no-extra-init", c.no_extra_init, "Skip extra initial columns");
  app.add_option("--preprocess", c.preprocess, "Merge equivalent rows")
      ->check(CLI::IsMember({"auto", "on", "off"}));
  app.add_option("--heuristic-attempts", c.heuristic_attempts)->check(CLI::NonNegativeNumber);
  app.add_option("--cut-period", c.cut_period)->check(CLI::PositiveNumber);
  app.add_option("--threads", c.threads, "Workers for exact pricing")->check(CLI::PositiveNumber);
  app.add_option("--target-col", c.target_col, "Target column (index or name, default last)");
  app.add_option("--log", c.log_path, "Progress log file ('-' for stderr)");
}

TrainConfig make_config(const Common& c, std::size_t rows) {
  TrainConfig cfg;
  cfg.depth = c.depth;
  cfg.seed = c.seed;
  cfg.time_limit = c.time_limit;
  cfg.beta_mode = parse_beta_mode(c.beta_mode);
  cfg.sp_mode = c.sp_mode == "original" ? SubproblemMode::kOriginal : SubproblemMode::kMerged;
  cfg.extra_init = !c.no_extra_init;
  cfg.preprocess = c.preprocess == "on" || (c.preprocess == "auto" && rows > kPreprocessAutoRows);
  cfg.heuristic_attempts = c.heuristic_attempts;
  cfg.cut_period = c.cut_period;
  cfg.threads = c.threads;
  return cfg;
}

// Owns the log stream selected by --log.
class LogSink {
 public:
  explicit LogSink(const std::string& path) {
    if (path == "-") {
      out_ = &std::cerr;
    } else if (!path.empty()) {
      file_.open(path);
      if (!file_) throw DataError("cannot open log file " + path);
      out_ = &file_;
    }
  }
  std::ostream* get() { return out_; }

 private:
  std::ofstream file_;
  std::ostream* out_ = nullptr;
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

nlohmann::ordered_json stats_json(const TrainedModel& m, const TrainConfig& cfg) {
  const TrainStats& s = m.stats;
  nlohmann::ordered_json j;
  j["depth"] = cfg.depth;
  j["seed"] = cfg.seed;
  j["beta_mode"] = to_string(cfg.beta_mode);
  j["sp_mode"] = cfg.sp_mode == SubproblemMode::kMerged ? "merged" : "original";
  j["preprocess"] = cfg.preprocess;
  j["train_accuracy"] = m.train_accuracy;
  j["greedy_accuracy"] = m.greedy_accuracy;
  j["lp_bound"] = m.lp_bound;
  j["integer_value"] = m.integer_value;
  j["converged"] = m.converged;
  j["optimal"] = m.optimal;
  j["integer_complete"] = m.integer_complete;
  j["iterations"] = s.iterations;
  j["lp_solves"] = s.lp_solves;
  j["lp_pivots"] = s.lp_pivots;
  j["lp_residuals"] = {{"primal", s.lp_primal_residual},
                       {"dual", s.lp_dual_residual},
                       {"gap", s.lp_duality_gap}};
  j["columns"] = {{"initial", s.columns_initial},
                  {"heuristic", s.columns_heuristic},
                  {"exact", s.columns_exact}};
  j["cuts"] = {{"labeled", s.cuts_labeled}, {"pseudo", s.cuts_pseudo}};
  j["integer_nodes"] = s.integer_nodes;
  j["master_rows"] = s.rows;
  j["candidate_splits"] = s.candidates;
  j["seconds"] = {{"sampling", s.seconds_sampling}, {"preprocess", s.seconds_preprocess},
                  {"lp", s.seconds_lp},             {"pricing", s.seconds_pricing},
                  {"cuts", s.seconds_cuts},         {"integer", s.seconds_integer},
                  {"total", s.seconds_total}};
  return j;
}

int run_train(const Common& c, const std::string& data, const std::string& test_data,
              double train_frac, const std::string& out, const std::string& stats_out) {
  CsvOptions opt;
  opt.target = TargetColumn::parse(c.target_col);
  Dataset full = load_csv(data, opt);
  Dataset train_set = full;
  std::optional<Dataset> test_set;
  if (train_frac < 1.0) {
    TrainTestSplit split = split_train_test(full, train_frac, 1.0 - train_frac, c.seed);
    train_set = std::move(split.train);
    test_set = std::move(split.test);
  }
  if (!test_data.empty()) {
    CsvOptions topt = opt;
    topt.class_names = full.class_names();
    test_set = load_csv(test_data, topt);
    if (test_set->num_features() != full.num_features()) {
      throw DataError("test data has " + std::to_string(test_set->num_features()) +
                      " features, training data has " + std::to_string(full.num_features()));
    }
  }

  TrainConfig cfg = make_config(c, train_set.size());
  LogSink log(c.log_path);
  cfg.log = log.get();
  const TrainedModel model = train(cfg, train_set);

  nlohmann::ordered_json stats = stats_json(model, cfg);
  stats["train_rows"] = train_set.size();
  if (test_set) {
    stats["test_rows"] = test_set->size();
    stats["test_accuracy"] = accuracy(model.tree, *test_set);
    stats["greedy_test_accuracy"] = accuracy(model.greedy_tree, *test_set);
  }
  const std::string tree_text = dump_tree(model.tree);
  if (out.empty()) {
    std::cout << tree_text;
  } else {
    write_file(out, tree_text);
  }
  if (!stats_out.empty()) write_file(stats_out, stats.dump(2) + "\n");
  std::cerr << "train_accuracy=" << model.train_accuracy << " lp_bound=" << model.lp_bound
            << " optimal=" << model.optimal << '\n';
  return 0;
}

int run_predict(const std::string& model_path, const std::string& data, bool no_labels,
                const std::string& target_col) {
  std::ifstream in(model_path);
  if (!in) throw DataError("cannot open model " + model_path);
  std::stringstream buf;
  buf << in.rdbuf();
  const DecisionTree tree = parse_tree(buf.str());

  CsvOptions opt;
  opt.has_labels = !no_labels;
  opt.target = TargetColumn::parse(target_col);
  opt.class_names = tree.class_names;
  const Dataset d = load_csv(data, opt);
  std::size_t needed = 0;
  for (const SplitCheck& s : tree.node_splits) {
    needed = std::max(needed, static_cast<std::size_t>(s.feature) + 1);
  }
  if (d.num_features() < needed) {
    throw DataError("model uses feature " + std::to_string(needed - 1) + " but the data has " +
                    std::to_string(d.num_features()) + " features");
  }
  auto name = [&](int cls) {
    return cls < static_cast<int>(tree.class_names.size()) ? tree.class_names[cls]
                                                           : std::to_string(cls);
  };
  for (const Row& r : d.rows()) std::cout << name(tree.predict(r)) << '\n';
  if (!no_labels) std::cout << "accuracy=" << accuracy(tree, d) << '\n';
  return 0;
}

struct BenchAccumulator {
  double cart_train = 0, cg_train = 0, cart_test = 0, cg_test = 0, lp_bound = 0, optimal = 0;
  int runs = 0;
};

int run_benchmark(const Common& c, const std::string& dir, std::vector<int> depths, int seeds,
                  const std::string& out, const std::string& runs_out) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no CSV files in " + dir);

  std::ofstream out_file;
  if (!out.empty()) {
    out_file.open(out);
    if (!out_file) throw DataError("cannot write " + out);
  }
  std::ostream& table = out.empty() ? std::cout : out_file;
  table << "dataset,k,cart_train,cg_train,gain,cart_test,cg_test,test_gain,lp_bound,optimal\n";
  table << std::fixed << std::setprecision(2);

  std::ofstream runs_file;
  if (!runs_out.empty()) {
    runs_file.open(runs_out);
    runs_file << "dataset,k,seed,cart_train,cg_train,cart_test,cg_test,lp_bound,integer_value,"
                 "optimal,seconds\n";
  }
  LogSink log(c.log_path);

  int failures = 0;
  for (const fs::path& file : files) {
    const std::string name = file.stem().string();
    try {
      CsvOptions opt;
      opt.target = TargetColumn::parse(c.target_col);
      const Dataset d = load_csv(file, opt);
      for (int k : depths) {
        BenchAccumulator acc;
        for (int seed = 1; seed <= seeds; ++seed) {
          const TrainTestSplit split = split_train_test(d, 0.5, 0.25, seed);
          std::vector<std::size_t> a = split.train_positions, b = split.test_positions;
          std::sort(a.begin(), a.end());
          std::sort(b.begin(), b.end());
          std::vector<std::size_t> both;
          std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
          if (!both.empty()) throw SolverError("train and test splits overlap");

          Common run = c;
          run.depth = k;
          run.seed = static_cast<std::uint64_t>(seed);
          TrainConfig cfg = make_config(run, split.train.size());
          cfg.log = log.get();
          const TrainedModel m = train(cfg, split.train);
          const double cart_test = accuracy(m.greedy_tree, split.test);
          const double cg_test = accuracy(m.tree, split.test);
          const double total = static_cast<double>(split.train.total_weight());
          acc.cart_train += 100.0 * m.greedy_accuracy;
          acc.cg_train += 100.0 * m.train_accuracy;
          acc.cart_test += 100.0 * cart_test;
          acc.cg_test += 100.0 * cg_test;
          acc.lp_bound += 100.0 * m.lp_bound / total;
          acc.optimal += m.optimal ? 1.0 : 0.0;
          ++acc.runs;
          if (runs_file) {
            runs_file << name << ',' << k << ',' << seed << ',' << m.greedy_accuracy << ','
                      << m.train_accuracy << ',' << cart_test << ',' << cg_test << ','
                      << m.lp_bound << ',' << m.integer_value << ',' << m.optimal << ','
                      << m.stats.seconds_total << '\n' << std::flush;
          }
        }
        const double n = acc.runs;
        table << name << ',' << k << ',' << acc.cart_train / n << ',' << acc.cg_train / n << ','
              << (acc.cg_train - acc.cart_train) / n << ',' << acc.cart_test / n << ','
              << acc.cg_test / n << ',' << (acc.cg_test - acc.cart_test) / n << ','
              << acc.lp_bound / n << ',' << acc.optimal / n << '\n'
              << std::flush;
      }
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << "dataset=" << name << " error=\"" << e.what() << "\"\n";
    }
  }
  return failures == 0 ? 0 : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depth-limited decision trees by column generation"};
  app.require_subcommand(1);

  Common common;
  std::string data, test_data, out, stats_out;
  double train_frac = 1.0;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a tree on a CSV file");
  add_common(*train_cmd, common);
  train_cmd->add_option("--data", data, "Training CSV")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--test-data", test_data, "Held-out CSV")->check(CLI::ExistingFile);
  train_cmd->add_option("--train-frac", train_frac,
                        "Train on this seeded fraction of --data, test on the rest")
      ->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--out", out, "Model JSON (default stdout)");
  train_cmd->add_option("--stats-out", stats_out, "Statistics JSON");

  std::string model_path, predict_data, predict_target;
  bool no_labels = false;
  CLI::App* predict_cmd = app.add_subcommand("predict", "Predict classes with a trained model");
  predict_cmd->add_option("--model", model_path, "Model JSON")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--data", predict_data, "CSV to classify")->required()
      ->check(CLI::ExistingFile);
  predict_cmd->add_option("--target-col", predict_target, "Target column (default last)");
  predict_cmd->add_flag("--no-labels", no_labels, "The CSV has no target column");

  Common bench;
  std::string bench_dir, bench_out, bench_runs;
  std::vector<int> depths{2, 3, 4};
  int seeds = 5;
  CLI::App* bench_cmd = app.add_subcommand("benchmark", "Compare against the greedy baseline");
  add_common(*bench_cmd, bench);
  bench_cmd->add_option("--data-dir", bench_dir, "Directory of CSV files")->required()
      ->check(CLI::ExistingDirectory);
  bench_cmd->add_option("--depths", depths, "Depths to run")->delimiter(',');
  bench_cmd->add_option("--seeds", seeds, "Seeds 1..n")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bench_out, "Summary CSV (default stdout)");
  bench_cmd->add_option("--runs-out", bench_runs, "Per-run CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*train_cmd) return run_train(common, data, test_data, train_frac, out, stats_out);
    if (*predict_cmd) return run_predict(model_path, predict_data, no_labels, predict_target);
    for (int k : depths) {
      if (k < 1 || k > 20) throw ConfigError("depths must be between 1 and 20");
    }
    return run_benchmark(bench, bench_dir, depths, seeds, bench_out, bench_runs);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
