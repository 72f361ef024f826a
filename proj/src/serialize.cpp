#include "slce/serialize.hpp"

#include <charconv>
#include <fstream>

#include "slce/error.hpp"

namespace slce {

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (rows < 0 || cols < 0 ||
      static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw InputError("matrix data length does not match its dimensions");
  }
  Eigen::MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = data[k++].get<double>();
  }
  return m;
}

namespace {

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

Json to_json(const LceConfig& cfg) {
  return Json{{"embedding_dim", cfg.embedding_dim},
              {"learning_rate", cfg.learning_rate},
              {"convergence_tol", cfg.convergence_tol},
              {"max_iterations", cfg.max_iterations},
              {"init_seed", cfg.init_seed},
              {"init_scale", cfg.init_scale}};
}

Json to_json(const LceModel& model) {
  return Json{{"format", "lce-model"},
              {"version", 1},
              {"embedding_dim", model.embedding_dim()},
              {"seed", model.config.init_seed},
              {"config", to_json(model.config)},
              {"A", matrix_to_json(model.A)},
              {"converged", model.converged},
              {"iterations_run", model.iterations_run},
              {"cost_trace", model.cost_trace}};
}

Json to_json(const SlceModel& model) {
  return Json{{"format", "slce-model"},
              {"version", 1},
              {"lambda", model.lambda},
              {"seed", model.seed},
              {"schedule",
               {{"warmup_iterations", model.warmup_iterations},
                {"penalty_iterations", model.penalty_iterations},
                {"learning_rate", model.learning_rate}}},
              {"encoder", to_json(model.encoder)},
              {"b", vector_to_json(model.b)},
              {"cost_trace", model.cost_trace}};
}

LceModel lce_model_from_json(const Json& j) {
  if (j.value("format", "") != "lce-model") {
    throw InputError("not an lce-model document");
  }
  LceModel m;
  const auto& c = j.at("config");
  m.config.embedding_dim = c.at("embedding_dim").get<int>();
  m.config.learning_rate = c.at("learning_rate").get<double>();
  m.config.convergence_tol = c.at("convergence_tol").get<double>();
  m.config.max_iterations = c.at("max_iterations").get<std::uint64_t>();
  m.config.init_seed = c.at("init_seed").get<std::uint64_t>();
  m.config.init_scale = c.at("init_scale").get<double>();
  m.A = matrix_from_json(j.at("A"));
  m.converged = j.at("converged").get<bool>();
  m.iterations_run = j.at("iterations_run").get<std::uint64_t>();
  m.cost_trace = j.at("cost_trace").get<std::vector<double>>();
  return m;
}

SlceModel slce_model_from_json(const Json& j) {
  if (j.value("format", "") != "slce-model") {
    throw InputError("not an slce-model document");
  }
  SlceModel m;
  m.lambda = j.at("lambda").get<double>();
  m.seed = j.at("seed").get<std::uint64_t>();
  const auto& s = j.at("schedule");
  m.warmup_iterations = s.at("warmup_iterations").get<int>();
  m.penalty_iterations = s.at("penalty_iterations").get<int>();
  m.learning_rate = s.at("learning_rate").get<double>();
  m.encoder = lce_model_from_json(j.at("encoder"));
  const auto b = j.at("b").get<std::vector<double>>();
  m.b = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  m.cost_trace = j.at("cost_trace").get<std::vector<double>>();
  if (m.b.size() != m.encoder.A.rows()) {
    throw InputError("gate length does not match encoder rows");
  }
  return m;
}

Json to_json(const FeatureReport& report) {
  return Json{{"num_features", report.ranked_indices.size()},
              {"cutoff_index", report.cutoff_index},
              {"cutoff_ratio", report.cutoff_ratio},
              {"cutoff_defined", report.cutoff_defined},
              {"selected", report.selected},
              {"ranked_indices", report.ranked_indices},
              {"ranked_weights", report.ranked_weights}};
}

Json to_json(const StabilityReport& report) {
  return Json{{"runs", report.run_selections.size()},
              {"per_run_counts", report.per_run_counts},
              {"intersection_size", report.intersection_size},
              {"union_size", report.union_size},
              {"jaccard", report.jaccard},
              {"intersection", report.intersection},
              {"run_selections", report.run_selections}};
}

Json to_json(const AccuracyTable& table) {
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    rows.push_back(Json{{"name", r.name},
                        {"k", r.k},
                        {"mean", r.mean},
                        {"stddev", r.stddev},
                        {"per_repeat", r.per_repeat}});
  }
  return Json{{"rows", std::move(rows)},
              {"repeat_seeds", table.repeat_seeds},
              {"cutoff_counts", table.cutoff_counts}};
}

Json to_json(const TuneResult& result) {
  Json rows = Json::array();
  for (const auto& r : result.rows) {
    rows.push_back(Json{{"lambda", r.lambda},
                        {"mean_accuracy", r.mean_accuracy},
                        {"stddev", r.stddev},
                        {"mean_selected", r.mean_selected},
                        {"scores", r.scores}});
  }
  return Json{{"chosen_lambda", result.chosen_lambda}, {"rows", std::move(rows)}};
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_sparsity_curve(std::ostream& out, const FeatureReport& report) {
  out << "rank,abs_weight\n";
  for (std::size_t i = 0; i < report.ranked_weights.size(); ++i) {
    out << (i + 1) << ',' << format_double(report.ranked_weights[i]) << '\n';
  }
}

void write_ratio_curve(std::ostream& out, const FeatureReport& report,
                       double epsilon) {
  out << "position,ratio\n";
  const auto ratios = report.ratio_curve(epsilon);
  for (std::size_t p = 0; p < ratios.size(); ++p) {
    out << (p + 1) << ',' << format_double(ratios[p]) << '\n';
  }
}

void write_accuracy_csv(std::ostream& out, const AccuracyTable& table) {
  out << "features,k,mean,stddev\n";
  for (const auto& r : table.rows) {
    out << r.name << ',' << r.k << ',' << format_double(r.mean) << ','
        << format_double(r.stddev) << '\n';
  }
}

void write_tune_csv(std::ostream& out, const TuneResult& result) {
  out << "lambda,mean_accuracy,stddev,mean_selected,chosen\n";
  for (const auto& r : result.rows) {
    out << format_double(r.lambda) << ',' << format_double(r.mean_accuracy)
        << ',' << format_double(r.stddev) << ','
        << format_double(r.mean_selected) << ','
        << (r.lambda == result.chosen_lambda ? 1 : 0) << '\n';
  }
}

void write_pca_csv(std::ostream& out, const PcaEmbedding& embedding,
                   const std::vector<EmbeddedSample>& train,
                   const std::vector<EmbeddedSample>& test) {
  const auto c = embedding.model.components.cols();
  out << "sample_id,split,label";
  for (Eigen::Index k = 0; k < c; ++k) out << ",c" << (k + 1);
  out << '\n';
  auto emit = [&](const std::vector<EmbeddedSample>& rows,
                  const Eigen::MatrixXd& coords) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out << rows[i].sample_id << ',' << (rows[i].train ? "train" : "test")
          << ',' << rows[i].label;
      for (Eigen::Index k = 0; k < c; ++k) {
        out << ',' << format_double(coords(k, static_cast<Eigen::Index>(i)));
      }
      out << '\n';
    }
  };
  emit(train, embedding.train_coords);
  emit(test, embedding.test_coords);
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace slce
