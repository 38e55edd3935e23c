// Copyright 2026 The melsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "melsep/matrix.hpp"
#include "melsep/mfcc.hpp"

namespace melsep {

struct KMeansOptions {
  std::size_t k = 2;
  std::size_t max_iter = 100;
  // Stop once no centroid coordinate moves by this much or more.
  double tol = 1e-9;

  friend bool operator==(const KMeansOptions&, const KMeansOptions&) = default;
};

struct ClusterModel {
  Matrix centroids;  // k x dims
  std::vector<std::size_t> assignments;
  double inertia = 0.0;
  std::size_t iterations_run = 0;
  std::uint64_t seed = 0;
  // Inertia after each assignment step, then the final value.
  std::vector<double> inertia_trace;
};

// Euclidean distance. Throws DimensionError on a length mismatch.
double euclidean(std::span<const double> a, std::span<const double> b);

// Lloyd's k-means. Initial centroids are k distinct points drawn uniformly
// with `seed`. Ties in assignment go to the lowest cluster index; a cluster
// that loses all its points is reseeded at the point farthest from its own
// centroid. Throws ParameterError if k == 0 or k exceeds the point count.
ClusterModel kmeans(const Matrix& points, const KMeansOptions& options,
                    std::uint64_t seed);

// Sum of squared distances from each point to its nearest centroid.
double nearest_inertia(const Matrix& points, const Matrix& centroids);

enum class Decision { kIdentical, kNonIdentical };

std::string to_string(Decision d);

struct IdentityVerdict {
  std::string test_id;
  std::string ref_id;
  double score = 0.0;
  double threshold = 0.0;
  Decision decision = Decision::kNonIdentical;
  std::map<ChannelId, double> per_channel_scores;
};

// Per-channel centroids of one utterance.
struct UtteranceModel {
  std::string id;
  std::map<ChannelId, Matrix> centroids;
};

// Seed used to cluster one channel of one utterance; depends only on the
// master seed, the utterance id and the channel.
std::uint64_t channel_seed(std::uint64_t master_seed, const std::string& id,
                           ChannelId channel);

// Clusters each channel independently. All matrices must share source_id
// and have distinct channels (ConfigError otherwise).
UtteranceModel fit_utterance(std::span<const FeatureMatrix> channels,
                             const KMeansOptions& options,
                             std::uint64_t master_seed);

// Per channel: minimum centroid-pair distance. Score: mean over channels.
// Identical iff score <= threshold. Throws ConfigError if the channel sets
// differ.
IdentityVerdict compare_models(const UtteranceModel& test,
                               const UtteranceModel& ref, double threshold);

// fit_utterance on both sides followed by compare_models.
IdentityVerdict verdict(std::span<const FeatureMatrix> test,
                        std::span<const FeatureMatrix> ref,
                        const KMeansOptions& options, double threshold,
                        std::uint64_t master_seed);

std::string verdict_json(const IdentityVerdict& v);

struct ThresholdCalibration {
  double threshold = 0.0;
  std::size_t errors = 0;  // genuine above + impostor at or below
};

// Exhaustive scan over the gaps of the sorted score union. Returns the
// midpoint of the widest gap among those with the fewest errors. Thresholds
// below every score or above every score are only chosen when strictly
// better. Throws ParameterError if either set is empty.
ThresholdCalibration calibrate_threshold_detailed(std::span<const double> genuine,
                                                  std::span<const double> impostor);

double calibrate_threshold(std::span<const double> genuine,
                           std::span<const double> impostor);

struct ConfusionCounts {
  std::size_t tp = 0;  // genuine pair judged identical
  std::size_t tn = 0;  // impostor pair judged non-identical
  std::size_t fp = 0;  // impostor pair judged identical
  std::size_t fn = 0;  // genuine pair judged non-identical

  std::size_t total() const noexcept { return tp + tn + fp + fn; }
  void add(bool genuine, Decision decision);

  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// (tp + tn) / total. Throws UndefinedError when total == 0.
double accuracy(const ConfusionCounts& counts);

}  // namespace melsep
