#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "slce/classifiers.hpp"
#include "slce/dataset.hpp"
#include "slce/error.hpp"
#include "slce/evaluation.hpp"
#include "slce/features.hpp"
#include "slce/parallel.hpp"
#include "slce/pca.hpp"
#include "slce/serialize.hpp"
#include "slce/slce.hpp"

namespace slce::cli {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string command;
  std::string data;
  std::string labels = "last";
  bool transpose = false;
  bool standardize = false;
  int embed_dim = 5;
  std::uint64_t seed = 0;
  std::string out = "slce_out";
  std::string config;
  int jobs = 1;

  double lambda = 0.1;
  std::uint64_t max_iterations = 50000;
  double tol = 1e-6;
  int warmup = 10;
  int iterations = 2000;

  int runs = 5;
  bool fixed_seed = false;

  std::vector<double> grid;
  int tune_repeats = 10;

  std::vector<std::size_t> top_k{10, 50};
  int eval_repeats = 20;
  int epochs = 200;
  int hidden = 500;

  std::string model;
  std::vector<int> features;
  int components = 3;
  double train_fraction = 0.5;
};

void add_common(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--data", rc.data, "CSV file with samples and labels")->required();
  sub->add_option("--labels", rc.labels,
                  "Label column: 'last', a 0-based index, or a header name");
  sub->add_flag("--transpose", rc.transpose,
                "Samples are columns of the file instead of rows");
  sub->add_flag("--standardize", rc.standardize,
                "Z-score features with training-partition statistics");
  sub->add_option("--embed-dim", rc.embed_dim, "Encoder dimension k");
  sub->add_option("--seed", rc.seed, "Base seed (falls back to SLCE_SEED)");
  sub->add_option("--out", rc.out, "Output directory");
  sub->add_option("--config", rc.config,
                  "JSON file of flag values; command-line flags win");
  sub->add_option("--jobs", rc.jobs, "Worker threads for independent fits");
  sub->add_option("--max-iterations", rc.max_iterations,
                  "Iteration cap for the encoder step");
  sub->add_option("--tol", rc.tol, "Encoder convergence tolerance");
  sub->add_option("--warmup", rc.warmup, "Gate iterations without penalty");
  sub->add_option("--iterations", rc.iterations, "Penalized gate iterations");
}

void add_lambda(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--lambda", rc.lambda, "Sparsity parameter");
}

// Values from the --config file for options not given on the command line.
// Keys belonging only to other subcommands are ignored so one file can serve
// every command.
void merge_config_file(CLI::App* app, CLI::App* sub, const std::string& path) {
  const Json cfg = read_json_file(path);
  if (!cfg.is_object()) throw InputError("config file must hold a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    if (key == "config") continue;
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      const auto others = app->get_subcommands([&](CLI::App* s) {
        return s->get_option_no_throw("--" + key) != nullptr;
      });
      if (others.empty()) {
        throw InputError("unknown key '" + key + "' in config file " + path);
      }
      continue;
    }
    if (opt->count() > 0) continue;
    std::vector<std::string> results;
    auto as_text = [](const Json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
      return v.dump();
    };
    if (value.is_array()) {
      for (const auto& v : value) results.push_back(as_text(v));
    } else {
      results.push_back(as_text(value));
    }
    opt->add_result(results);
    opt->run_callback();
  }
}

void resolve_seed(CLI::App* sub, RunConfig& rc) {
  if (sub->get_option("--seed")->count() > 0) return;
  if (const char* env = std::getenv("SLCE_SEED")) {
    try {
      std::size_t pos = 0;
      const std::string text(env);
      rc.seed = std::stoull(text, &pos);
      if (pos != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw InputError(std::string("SLCE_SEED is not an unsigned integer: ") + env);
    }
  }
}

Dataset load(const RunConfig& rc) {
  CsvOptions opts;
  opts.label_column = LabelColumn::parse(rc.labels);
  opts.transpose = rc.transpose;
  return load_csv(rc.data, opts);
}

SlceConfig slce_config(const RunConfig& rc, std::uint64_t seed) {
  SlceConfig cfg;
  cfg.lambda = rc.lambda;
  cfg.warmup_iterations = rc.warmup;
  cfg.penalty_iterations = rc.iterations;
  cfg.lce.embedding_dim = rc.embed_dim;
  cfg.lce.max_iterations = rc.max_iterations;
  cfg.lce.convergence_tol = rc.tol;
  cfg.lce.init_seed = seed;
  cfg.validate();
  return cfg;
}

void check_common(const RunConfig& rc) {
  if (!(rc.lambda >= 0.0)) throw InputError("lambda must be non-negative");
  if (rc.embed_dim < 1) throw InputError("embed-dim must be positive");
  if (rc.jobs < 1) throw InputError("jobs must be at least 1");
  if (rc.warmup < 0 || rc.iterations < 0) {
    throw InputError("iteration counts must be non-negative");
  }
  if (!(rc.tol >= 0.0)) throw InputError("tol must be non-negative");
}

Json base_echo(const RunConfig& rc) {
  return Json{{"command", rc.command},
              {"data", rc.data},
              {"labels", rc.labels},
              {"transpose", rc.transpose},
              {"standardize", rc.standardize},
              {"embed_dim", rc.embed_dim},
              {"seed", rc.seed},
              {"jobs", rc.jobs},
              {"lambda", rc.lambda},
              {"max_iterations", rc.max_iterations},
              {"tol", rc.tol},
              {"warmup", rc.warmup},
              {"iterations", rc.iterations},
              {"learning_rate", SlceConfig{}.learning_rate}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
}

Dataset standardized_if(const RunConfig& rc, Dataset ds) {
  if (rc.standardize) ds = Standardizer::fit(ds.features).apply(ds);
  return ds;
}

int cmd_fit(const RunConfig& rc, std::ostream& out) {
  const Dataset ds = standardized_if(rc, load(rc));
  const auto sel = fit_selection(ds, slce_config(rc, rc.seed));
  const fs::path dir(rc.out);
  write_json_file(dir / "model.json", to_json(sel.model));
  write_json_file(dir / "features.json", to_json(sel.report));
  std::ostringstream sparsity;
  write_sparsity_curve(sparsity, sel.report);
  write_text(dir / "sparsity_curve.csv", sparsity.str());
  std::ostringstream ratio;
  write_ratio_curve(ratio, sel.report);
  write_text(dir / "ratio_curve.csv", ratio.str());
  Json echo = base_echo(rc);
  echo["encoder_converged"] = sel.model.encoder.converged;
  echo["encoder_iterations"] = sel.model.encoder.iterations_run;
  write_json_file(dir / "config.json", echo);
  out << "selected " << sel.report.cutoff_index << " of " << ds.num_features()
      << " features (cut-off ratio " << format_double(sel.report.cutoff_ratio)
      << ")\n";
  return kExitOk;
}

int cmd_stability(const RunConfig& rc, std::ostream& out) {
  if (rc.runs < 2) throw InputError("stability requires ≥ 2 runs");
  const Dataset ds = standardized_if(rc, load(rc));
  std::vector<std::uint64_t> seeds;
  for (int r = 0; r < rc.runs; ++r) {
    seeds.push_back(rc.fixed_seed ? rc.seed : rc.seed + static_cast<std::uint64_t>(r));
  }
  std::vector<std::vector<int>> selections(seeds.size());
  parallel_for(seeds.size(), rc.jobs, [&](std::size_t r) {
    selections[r] = fit_selection(ds, slce_config(rc, seeds[r])).report.selected;
  });
  const auto report = stability(selections);
  Json j = to_json(report);
  j["seeds"] = seeds;
  j["lambda"] = rc.lambda;
  const fs::path dir(rc.out);
  write_json_file(dir / "stability.json", j);
  Json echo = base_echo(rc);
  echo["runs"] = rc.runs;
  echo["fixed_seed"] = rc.fixed_seed;
  echo["run_seeds"] = seeds;
  write_json_file(dir / "config.json", echo);
  out << "jaccard " << format_double(report.jaccard) << " (intersection "
      << report.intersection_size << ", union " << report.union_size << ")\n";
  return kExitOk;
}

int cmd_tune(const RunConfig& rc, std::ostream& out) {
  const Dataset ds = load(rc);
  TuneSpec spec;
  if (!rc.grid.empty()) {
    spec.lambda_grid = rc.grid;
    std::sort(spec.lambda_grid.begin(), spec.lambda_grid.end());
    spec.lambda_grid.erase(
        std::unique(spec.lambda_grid.begin(), spec.lambda_grid.end()),
        spec.lambda_grid.end());
  }
  spec.n_repeats = rc.tune_repeats;
  spec.base_seed = rc.seed;
  spec.standardize = rc.standardize;
  spec.jobs = rc.jobs;
  const auto result = tune_lambda(ds, spec, slce_config(rc, rc.seed));
  const fs::path dir(rc.out);
  write_json_file(dir / "tune.json", to_json(result));
  std::ostringstream csv;
  write_tune_csv(csv, result);
  write_text(dir / "cv_table.csv", csv.str());
  Json echo = base_echo(rc);
  echo.erase("lambda");
  echo["grid"] = spec.lambda_grid;
  echo["folds"] = spec.n_folds;
  echo["repeats"] = spec.n_repeats;
  std::vector<std::uint64_t> seeds;
  for (int r = 0; r < spec.n_repeats; ++r) seeds.push_back(rc.seed + static_cast<std::uint64_t>(r));
  echo["repeat_seeds"] = seeds;
  write_json_file(dir / "config.json", echo);
  out << "chosen lambda " << format_double(result.chosen_lambda) << '\n';
  return kExitOk;
}

int cmd_evaluate(const RunConfig& rc, std::ostream& out) {
  const Dataset ds = load(rc);
  EvalProtocol protocol;
  protocol.n_repeats = rc.eval_repeats;
  protocol.top_k_values = rc.top_k;
  protocol.base_seed = rc.seed;
  protocol.standardize = rc.standardize;
  protocol.jobs = rc.jobs;
  protocol.mlp.epochs = rc.epochs;
  protocol.mlp.hidden_units = rc.hidden;
  if (rc.epochs < 0 || rc.hidden < 1) throw InputError("invalid classifier settings");
  const auto table = evaluate_protocol(ds, slce_config(rc, rc.seed), protocol);
  const fs::path dir(rc.out);
  write_json_file(dir / "accuracy.json", to_json(table));
  std::ostringstream csv;
  write_accuracy_csv(csv, table);
  write_text(dir / "accuracy.csv", csv.str());
  Json echo = base_echo(rc);
  echo["repeats"] = protocol.n_repeats;
  echo["top_k"] = protocol.top_k_values;
  echo["train_fraction"] = protocol.split.train_fraction;
  echo["epochs"] = protocol.mlp.epochs;
  echo["hidden"] = protocol.mlp.hidden_units;
  echo["mlp_learning_rate"] = protocol.mlp.learning_rate;
  echo["repeat_seeds"] = table.repeat_seeds;
  write_json_file(dir / "config.json", echo);
  for (const auto& row : table.rows) {
    out << row.name << ": " << format_double(row.mean) << " +- "
        << format_double(row.stddev) << '\n';
  }
  return kExitOk;
}

int cmd_embed(const RunConfig& rc, bool lambda_given, std::ostream& out) {
  const Dataset ds = load(rc);
  if (rc.components < 1) throw InputError("components must be positive");
  SplitSpec spec;
  spec.train_fraction = rc.train_fraction;
  spec.seed = rc.seed;
  const auto idx = split_indices(ds, spec);
  Dataset train = ds.select_samples(idx.train);
  Dataset test = ds.select_samples(idx.test);
  if (rc.standardize) {
    const auto z = Standardizer::fit(train.features);
    train = z.apply(train);
    test = z.apply(test);
  }

  std::string source = "all";
  std::vector<int> features;
  if (!rc.model.empty()) {
    const auto model = slce_model_from_json(read_json_file(rc.model));
    if (model.b.size() != ds.num_features()) {
      throw InputError("model gate length does not match the data feature count");
    }
    features = cutoff(rank_features(model)).selected;
    source = "model";
  } else if (!rc.features.empty()) {
    features = rc.features;
    source = "list";
  } else if (lambda_given) {
    features = fit_selection(train, slce_config(rc, rc.seed)).report.selected;
    source = "fit";
  } else {
    features.resize(static_cast<std::size_t>(ds.num_features()));
    std::iota(features.begin(), features.end(), 0);
  }
  std::sort(features.begin(), features.end());
  features.erase(std::unique(features.begin(), features.end()), features.end());

  const auto tr = train.select_features(features);
  const auto te = test.select_features(features);
  const auto embedding = pca_embed(tr.features, te.features, rc.components);

  std::vector<EmbeddedSample> train_rows;
  std::vector<EmbeddedSample> test_rows;
  for (std::size_t i = 0; i < idx.train.size(); ++i) {
    train_rows.push_back({idx.train[i], true, train.labels[i]});
  }
  for (std::size_t i = 0; i < idx.test.size(); ++i) {
    test_rows.push_back({idx.test[i], false, test.labels[i]});
  }
  const fs::path dir(rc.out);
  std::ostringstream csv;
  write_pca_csv(csv, embedding, train_rows, test_rows);
  write_text(dir / "pca.csv", csv.str());
  Json info{{"feature_source", source},
            {"features", features},
            {"components", embedding.model.components.cols()},
            {"requested_components", rc.components},
            {"rank_deficient", embedding.model.rank_deficient},
            {"explained_variance",
             std::vector<double>(embedding.model.explained_variance.data(),
                                 embedding.model.explained_variance.data() +
                                     embedding.model.explained_variance.size())}};
  write_json_file(dir / "embed.json", info);
  Json echo = base_echo(rc);
  echo["model"] = rc.model;
  echo["feature_list"] = rc.features;
  echo["components"] = rc.components;
  echo["train_fraction"] = rc.train_fraction;
  echo["lambda_given"] = lambda_given;
  write_json_file(dir / "config.json", echo);
  out << "embedded " << features.size() << " features into "
      << embedding.model.components.cols() << " components\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse linear centroid-encoder feature selection", "slce"};
  app.require_subcommand(1);
  RunConfig rc;

  auto* fit = app.add_subcommand("fit", "Train on a dataset and report its features");
  add_common(fit, rc);
  add_lambda(fit, rc);

  auto* stab = app.add_subcommand("stability", "Repeat training and compare selections");
  add_common(stab, rc);
  add_lambda(stab, rc);
  stab->add_option("--runs", rc.runs, "Number of seeded runs");
  stab->add_flag("--fixed-seed", rc.fixed_seed, "Use the same seed for every run");

  auto* tune = app.add_subcommand("tune", "Pick lambda by repeated 2-fold cross-validation");
  add_common(tune, rc);
  tune->add_option("--grid", rc.grid, "Comma-separated lambda values")->delimiter(',');
  tune->add_option("--repeats", rc.tune_repeats, "Cross-validation repeats");

  auto* eval = app.add_subcommand("evaluate", "Repeated-split classification accuracy");
  add_common(eval, rc);
  add_lambda(eval, rc);
  eval->add_option("--top-k", rc.top_k, "Comma-separated feature counts")->delimiter(',');
  eval->add_option("--repeats", rc.eval_repeats, "Number of random splits");
  eval->add_option("--epochs", rc.epochs, "Classifier training epochs");
  eval->add_option("--hidden", rc.hidden, "Classifier hidden units");

  auto* embed = app.add_subcommand("embed", "PCA coordinates of selected features");
  add_common(embed, rc);
  add_lambda(embed, rc);
  embed->add_option("--model", rc.model, "Trained model JSON from 'fit'");
  embed->add_option("--features", rc.features, "Comma-separated feature indices")
      ->delimiter(',');
  embed->add_option("--components", rc.components, "Number of components");
  embed->add_option("--train-fraction", rc.train_fraction, "Share of samples used to fit");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  rc.command = sub->get_name();
  try {
    if (!rc.config.empty()) merge_config_file(&app, sub, rc.config);
    resolve_seed(sub, rc);
    check_common(rc);
    fs::create_directories(rc.out);
    if (rc.command == "fit") return cmd_fit(rc, out);
    if (rc.command == "stability") return cmd_stability(rc, out);
    if (rc.command == "tune") return cmd_tune(rc, out);
    if (rc.command == "evaluate") return cmd_evaluate(rc, out);
    const bool lambda_given = sub->get_option("--lambda")->count() > 0;
    return cmd_embed(rc, lambda_given, out);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace slce::cli
