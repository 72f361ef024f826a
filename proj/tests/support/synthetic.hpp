#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "slce/dataset.hpp"

namespace slce::testdata {

// Gaussian blobs where only `informative` features carry class signal. The
// informative indices are scattered at random so index order carries no
// information.
struct PlantedData {
  Dataset data;
  std::vector<int> informative;  // sorted
};

// Every value (means and unit noise) is multiplied by `scale`.
inline PlantedData make_planted(int d, int n, int informative, int classes,
                                double separation, std::uint64_t seed,
                                double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  PlantedData out;
  out.informative.assign(order.begin(), order.begin() + informative);
  std::sort(out.informative.begin(), out.informative.end());

  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(d, classes);
  for (int j : out.informative) {
    for (int c = 0; c < classes; ++c) means(j, c) = separation * normal(rng);
  }
  if (classes == 2) {
    // Two classes: symmetric means at +-separation/2 along a random sign.
    std::bernoulli_distribution coin(0.5);
    for (int j : out.informative) {
      const double s = coin(rng) ? 1.0 : -1.0;
      means(j, 0) = 0.5 * separation * s;
      means(j, 1) = -0.5 * separation * s;
    }
  }

  out.data.num_classes = classes;
  out.data.features.resize(d, n);
  out.data.labels.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int y = i % classes;
    out.data.labels[static_cast<std::size_t>(i)] = y;
    for (int j = 0; j < d; ++j) {
      out.data.features(j, i) = scale * (means(j, y) + normal(rng));
    }
  }
  return out;
}

// Corpus shared by the selection tests: d = 100, n = 100, 10 informative
// features, 3 classes.
inline PlantedData standard_corpus(std::uint64_t seed) {
  return make_planted(100, 100, 10, 3, 3.0, seed, 0.25);
}

inline std::size_t count_hits(const std::vector<int>& picked,
                              const std::vector<int>& informative) {
  std::size_t hits = 0;
  for (int f : picked) {
    if (std::binary_search(informative.begin(), informative.end(), f)) ++hits;
  }
  return hits;
}

}  // namespace slce::testdata
