#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "slce/evaluation.hpp"
#include "slce/features.hpp"
#include "slce/lce.hpp"
#include "slce/pca.hpp"
#include "slce/slce.hpp"

namespace slce {

using Json = nlohmann::ordered_json;

// Matrices are stored as {"rows": r, "cols": c, "data": [row-major values]}.
Json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j);

Json to_json(const LceConfig& cfg);
Json to_json(const LceModel& model);
Json to_json(const SlceModel& model);
Json to_json(const FeatureReport& report);
Json to_json(const StabilityReport& report);
Json to_json(const AccuracyTable& table);
Json to_json(const TuneResult& result);

LceModel lce_model_from_json(const Json& j);
SlceModel slce_model_from_json(const Json& j);

// "rank,abs_weight" with 1-based ranks.
void write_sparsity_curve(std::ostream& out, const FeatureReport& report);
// "position,ratio" for positions 1..d-1.
void write_ratio_curve(std::ostream& out, const FeatureReport& report,
                       double epsilon = kDefaultCutoffEpsilon);
void write_accuracy_csv(std::ostream& out, const AccuracyTable& table);
void write_tune_csv(std::ostream& out, const TuneResult& result);

struct EmbeddedSample {
  int sample_id = 0;  // column index in the input file
  bool train = true;
  int label = 0;
};

// "sample_id,split,label,c1..cK", training rows first.
void write_pca_csv(std::ostream& out, const PcaEmbedding& embedding,
                   const std::vector<EmbeddedSample>& train,
                   const std::vector<EmbeddedSample>& test);

// Shortest form that round-trips; identical doubles always print the same.
std::string format_double(double v);

void write_json_file(const std::filesystem::path& path, const Json& j);
Json read_json_file(const std::filesystem::path& path);

}  // namespace slce
