#include "slce/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "slce/error.hpp"

namespace slce {

void Dataset::validate() const {
  const auto d = features.rows();
  const auto n = features.cols();
  if (d < 1) throw InputError("dataset has no features");
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw InputError("label count " + std::to_string(labels.size()) +
                     " does not match sample count " + std::to_string(n));
  }
  if (num_classes < 2) throw InputError("dataset needs at least 2 classes");
  if (n < num_classes) throw InputError("fewer samples than classes");
  if (!feature_names.empty() &&
      static_cast<Eigen::Index>(feature_names.size()) != d) {
    throw InputError("feature name count does not match feature count");
  }
  if (!class_names.empty() &&
      static_cast<int>(class_names.size()) != num_classes) {
    throw InputError("class name count does not match class count");
  }
  std::vector<int> counts(num_classes, 0);
  for (int y : labels) {
    if (y < 0 || y >= num_classes) {
      throw InputError("label " + std::to_string(y) + " outside 0.." +
                       std::to_string(num_classes - 1));
    }
    ++counts[y];
  }
  for (int c = 0; c < num_classes; ++c) {
    if (counts[c] == 0) {
      throw InputError("class " + std::to_string(c) + " has no samples");
    }
  }
  if (!features.allFinite()) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < d; ++i) {
        if (!std::isfinite(features(i, j))) {
          throw InputError("non-finite value at feature " + std::to_string(i) +
                           ", sample " + std::to_string(j));
        }
      }
    }
  }
}

std::vector<int> Dataset::class_counts() const {
  std::vector<int> counts(num_classes, 0);
  for (int y : labels) ++counts.at(y);
  return counts;
}

Dataset Dataset::select_samples(const std::vector<int>& sample_indices) const {
  Dataset out;
  out.features.resize(features.rows(),
                      static_cast<Eigen::Index>(sample_indices.size()));
  out.labels.reserve(sample_indices.size());
  for (std::size_t j = 0; j < sample_indices.size(); ++j) {
    out.features.col(static_cast<Eigen::Index>(j)) =
        features.col(sample_indices[j]);
    out.labels.push_back(labels.at(sample_indices[j]));
  }
  out.feature_names = feature_names;
  out.class_names = class_names;
  out.num_classes = num_classes;
  return out;
}

Dataset Dataset::select_features(const std::vector<int>& feature_indices) const {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(feature_indices.size()),
                      features.cols());
  for (std::size_t i = 0; i < feature_indices.size(); ++i) {
    const int f = feature_indices[i];
    if (f < 0 || f >= features.rows()) {
      throw InputError("feature index " + std::to_string(f) + " out of range");
    }
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(f);
    if (!feature_names.empty()) out.feature_names.push_back(feature_names[f]);
  }
  out.labels = labels;
  out.class_names = class_names;
  out.num_classes = num_classes;
  return out;
}

Eigen::MatrixXd class_centroids(const Eigen::MatrixXd& features,
                                const std::vector<int>& labels,
                                int num_classes) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(features.rows(), num_classes);
  std::vector<int> counts(num_classes, 0);
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    sums.col(labels[j]) += features.col(j);
    ++counts[labels[j]];
  }
  for (int c = 0; c < num_classes; ++c) {
    if (counts[c] > 0) sums.col(c) /= static_cast<double>(counts[c]);
  }
  return sums;
}

CentroidTarget build_centroid_target(const Dataset& ds) {
  CentroidTarget out;
  out.centroids = class_centroids(ds.features, ds.labels, ds.num_classes);
  out.targets.resize(ds.features.rows(), ds.features.cols());
  for (Eigen::Index j = 0; j < ds.features.cols(); ++j) {
    out.targets.col(j) = out.centroids.col(ds.labels[j]);
  }
  return out;
}

namespace {

std::vector<std::vector<int>> members_by_class(const std::vector<int>& labels,
                                               int num_classes) {
  std::vector<std::vector<int>> members(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    members.at(labels[i]).push_back(static_cast<int>(i));
  }
  return members;
}

}  // namespace

SplitIndices split_indices(const Dataset& ds, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw InputError("train fraction must lie in (0, 1)");
  }
  std::mt19937_64 rng(spec.seed);
  SplitIndices out;
  if (spec.stratified) {
    auto members = members_by_class(ds.labels, ds.num_classes);
    for (int c = 0; c < ds.num_classes; ++c) {
      auto& idx = members[c];
      const auto count = static_cast<int>(idx.size());
      const auto n_train =
          static_cast<int>(std::lround(spec.train_fraction * count));
      if (n_train < 1 || n_train >= count) {
        throw InputError("class " + std::to_string(c) + " with " +
                         std::to_string(count) +
                         " samples is too small to stratify at fraction " +
                         std::to_string(spec.train_fraction));
      }
      std::shuffle(idx.begin(), idx.end(), rng);
      out.train.insert(out.train.end(), idx.begin(), idx.begin() + n_train);
      out.test.insert(out.test.end(), idx.begin() + n_train, idx.end());
    }
  } else {
    const auto n = static_cast<int>(ds.labels.size());
    const auto n_train =
        static_cast<int>(std::lround(spec.train_fraction * n));
    if (n_train < 1 || n_train >= n) {
      throw InputError("split leaves an empty partition");
    }
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    out.train.assign(idx.begin(), idx.begin() + n_train);
    out.test.assign(idx.begin() + n_train, idx.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
  const auto idx = split_indices(ds, spec);
  return {ds.select_samples(idx.train), ds.select_samples(idx.test)};
}

std::vector<int> stratified_folds(const std::vector<int>& labels,
                                  int num_classes, int folds,
                                  std::uint64_t seed) {
  if (folds < 2) throw InputError("need at least 2 folds");
  std::mt19937_64 rng(seed);
  auto members = members_by_class(labels, num_classes);
  std::vector<int> fold_of(labels.size(), 0);
  for (int c = 0; c < num_classes; ++c) {
    auto& idx = members[c];
    if (static_cast<int>(idx.size()) < folds) {
      throw InputError("class " + std::to_string(c) + " has " +
                       std::to_string(idx.size()) +
                       " samples, too few for " + std::to_string(folds) +
                       "-fold stratification");
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      fold_of[idx[i]] = static_cast<int>(i % folds);
    }
  }
  return fold_of;
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& features) {
  Standardizer s;
  const auto n = static_cast<double>(features.cols());
  s.mean_ = features.rowwise().mean();
  s.scale_ = ((features.colwise() - s.mean_).array().square().rowwise().sum() / n)
                 .sqrt()
                 .matrix();
  for (Eigen::Index i = 0; i < s.scale_.size(); ++i) {
    if (!(s.scale_(i) > 0.0)) s.scale_(i) = 1.0;
  }
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& features) const {
  if (features.rows() != mean_.size()) {
    throw InputError("standardizer fitted on a different feature count");
  }
  return ((features.colwise() - mean_).array().colwise() / scale_.array())
      .matrix();
}

Dataset Standardizer::apply(const Dataset& ds) const {
  Dataset out = ds;
  out.features = apply(ds.features);
  return out;
}

LabelColumn LabelColumn::parse(const std::string& text) {
  LabelColumn col;
  if (text.empty() || text == "last") return col;
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec == std::errc() && res.ptr == end) {
    if (value < 0) throw InputError("label column index must be >= 0");
    col.kind = Kind::Index;
    col.index = value;
    return col;
  }
  col.kind = Kind::Name;
  col.name = text;
  return col;
}

namespace {

struct Cell {
  std::string text;
  int row = 0;  // 1-based file coordinates
  int col = 0;
};

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(b, e - b + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') {
    out = out.substr(1, out.size() - 2);
  }
  return out;
}

std::vector<std::vector<Cell>> read_table(const std::string& text) {
  std::vector<std::vector<Cell>> table;
  std::istringstream in(text);
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (row == 1 && line.size() >= 3 &&
        line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    if (trim(line).empty()) continue;
    std::vector<Cell> cells;
    std::size_t start = 0;
    int col = 0;
    while (true) {
      const auto comma = line.find(',', start);
      ++col;
      cells.push_back({trim(std::string_view(line).substr(
                           start, comma == std::string::npos
                                      ? std::string::npos
                                      : comma - start)),
                       row, col});
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    table.push_back(std::move(cells));
  }
  return table;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
  return value;
}

std::string where(const Cell& c) {
  return "row " + std::to_string(c.row) + ", col " + std::to_string(c.col);
}

}  // namespace

Dataset parse_csv(const std::string& text, const CsvOptions& options) {
  auto table = read_table(text);
  if (table.empty()) throw InputError("CSV contains no records");
  const std::size_t width = table.front().size();
  for (const auto& r : table) {
    if (r.size() != width) {
      throw InputError("ragged CSV: row " + std::to_string(r.front().row) +
                       " has " + std::to_string(r.size()) + " fields, expected " +
                       std::to_string(width));
    }
  }
  if (options.transpose) {
    std::vector<std::vector<Cell>> t(width, std::vector<Cell>(table.size()));
    for (std::size_t i = 0; i < table.size(); ++i) {
      for (std::size_t j = 0; j < width; ++j) t[j][i] = table[i][j];
    }
    table = std::move(t);
  }
  const std::size_t n_fields = table.front().size();
  if (n_fields < 2) throw InputError("CSV needs a label field and a feature");

  // Header detection needs a label position first; names require a header.
  bool has_header = false;
  if (options.has_header) {
    has_header = *options.has_header;
  } else if (options.label_column.kind == LabelColumn::Kind::Name) {
    has_header = true;
  } else {
    const std::size_t guess =
        options.label_column.kind == LabelColumn::Kind::Index
            ? static_cast<std::size_t>(options.label_column.index)
            : n_fields - 1;
    for (std::size_t j = 0; j < n_fields; ++j) {
      if (j != guess && !parse_number(table.front()[j].text)) {
        has_header = true;
        break;
      }
    }
  }

  std::size_t label_pos = n_fields - 1;
  switch (options.label_column.kind) {
    case LabelColumn::Kind::Last:
      break;
    case LabelColumn::Kind::Index:
      label_pos = static_cast<std::size_t>(options.label_column.index);
      if (label_pos >= n_fields) {
        throw InputError("label column index " +
                         std::to_string(label_pos) + " out of range");
      }
      break;
    case LabelColumn::Kind::Name: {
      if (!has_header) throw InputError("label column by name needs a header");
      const auto& head = table.front();
      auto it = std::find_if(head.begin(), head.end(), [&](const Cell& c) {
        return c.text == options.label_column.name;
      });
      if (it == head.end()) {
        throw InputError("label column '" + options.label_column.name +
                         "' not found in header");
      }
      label_pos = static_cast<std::size_t>(it - head.begin());
      break;
    }
  }

  const std::size_t first = has_header ? 1 : 0;
  const auto n = static_cast<Eigen::Index>(table.size() - first);
  const auto d = static_cast<Eigen::Index>(n_fields - 1);
  if (n < 1) throw InputError("CSV contains a header but no samples");

  Dataset ds;
  ds.features.resize(d, n);
  if (has_header) {
    for (std::size_t j = 0; j < n_fields; ++j) {
      if (j != label_pos) ds.feature_names.push_back(table.front()[j].text);
    }
  }

  std::vector<std::string> raw_labels;
  raw_labels.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index s = 0; s < n; ++s) {
    const auto& rec = table[first + static_cast<std::size_t>(s)];
    Eigen::Index f = 0;
    for (std::size_t j = 0; j < n_fields; ++j) {
      if (j == label_pos) {
        raw_labels.push_back(rec[j].text);
        continue;
      }
      const auto v = parse_number(rec[j].text);
      if (!v) {
        throw InputError("non-numeric value '" + rec[j].text + "' at " +
                         where(rec[j]));
      }
      if (!std::isfinite(*v)) {
        throw InputError("non-finite value at " + where(rec[j]));
      }
      ds.features(f++, s) = *v;
    }
  }

  // Integer labels keep their numeric order; anything else is numbered by
  // first appearance.
  bool all_int = true;
  std::vector<long long> ints;
  for (const auto& l : raw_labels) {
    long long v = 0;
    const auto res = std::from_chars(l.data(), l.data() + l.size(), v);
    if (l.empty() || res.ec != std::errc() || res.ptr != l.data() + l.size()) {
      all_int = false;
      break;
    }
    ints.push_back(v);
  }
  ds.labels.resize(raw_labels.size());
  if (all_int) {
    std::map<long long, int> code;
    for (auto v : ints) code.emplace(v, 0);
    int next = 0;
    for (auto& [v, c] : code) {
      c = next++;
      ds.class_names.push_back(std::to_string(v));
    }
    for (std::size_t i = 0; i < ints.size(); ++i) ds.labels[i] = code[ints[i]];
  } else {
    std::unordered_map<std::string, int> code;
    for (std::size_t i = 0; i < raw_labels.size(); ++i) {
      auto [it, inserted] =
          code.emplace(raw_labels[i], static_cast<int>(code.size()));
      if (inserted) ds.class_names.push_back(raw_labels[i]);
      ds.labels[i] = it->second;
    }
  }
  ds.num_classes = static_cast<int>(ds.class_names.size());
  ds.validate();
  return ds;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open data file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), options);
}

}  // namespace slce
