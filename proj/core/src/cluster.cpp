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

#include "melsep/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "json.hpp"
#include "melsep/error.hpp"
#include "melsep/hash.hpp"

namespace melsep {
namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

// Returns the inertia; fills labels (ties -> lowest index).
double assign(const Matrix& points, const Matrix& centroids,
              std::vector<std::size_t>& labels) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
      const double d = squared_distance(points.row(i), centroids.row(c));
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    labels[i] = best;
    inertia += best_d;
  }
  return inertia;
}

}  // namespace

double euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("euclidean: vectors of length " +
                         std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
  return std::sqrt(squared_distance(a, b));
}

double nearest_inertia(const Matrix& points, const Matrix& centroids) {
  std::vector<std::size_t> labels(points.rows());
  return assign(points, centroids, labels);
}

ClusterModel kmeans(const Matrix& points, const KMeansOptions& options,
                    std::uint64_t seed) {
  const std::size_t n = points.rows();
  const std::size_t k = options.k;
  const std::size_t dims = points.cols();
  if (k == 0) throw ParameterError("kmeans: k must be >= 1");
  if (k > n) {
    throw ParameterError("kmeans: k = " + std::to_string(k) + " exceeds " +
                         std::to_string(n) + " points");
  }

  ClusterModel model;
  model.seed = seed;
  model.centroids = Matrix(k, dims);

  // Step 1: k distinct starting points (partial Fisher-Yates).
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t c = 0; c < k; ++c) {
    std::uniform_int_distribution<std::size_t> pick(c, n - 1);
    std::swap(order[c], order[pick(rng)]);
    std::ranges::copy(points.row(order[c]), model.centroids.row(c).begin());
  }

  std::vector<std::size_t>& labels = model.assignments;
  labels.assign(n, 0);
  std::vector<std::size_t> counts(k);
  Matrix sums(k, dims);

  for (std::size_t it = 0; it < options.max_iter; ++it) {
    // Step 2: nearest-centroid assignment.
    double inertia = assign(points, model.centroids, labels);

    std::ranges::fill(counts, 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[labels[i]];
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      // Empty cluster: move it onto the point farthest from its centroid.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[labels[i]] < 2) continue;
        const double d = squared_distance(points.row(i), model.centroids.row(labels[i]));
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far_d < 0.0) continue;
      inertia -= far_d;
      --counts[labels[far]];
      labels[far] = c;
      counts[c] = 1;
      std::ranges::copy(points.row(far), model.centroids.row(c).begin());
    }
    model.inertia_trace.push_back(inertia);

    // Step 3: centroid update (mean of members).
    sums = Matrix(k, dims);
    for (std::size_t i = 0; i < n; ++i) {
      auto s = sums.row(labels[i]);
      const auto p = points.row(i);
      for (std::size_t j = 0; j < dims; ++j) s[j] += p[j];
    }
    double movement = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      auto centroid = model.centroids.row(c);
      const auto s = sums.row(c);
      for (std::size_t j = 0; j < dims; ++j) {
        const double updated = s[j] / static_cast<double>(counts[c]);
        movement = std::max(movement, std::abs(updated - centroid[j]));
        centroid[j] = updated;
      }
    }
    ++model.iterations_run;

    // Step 4: stop when the centroids are stable.
    if (movement < options.tol) break;
  }

  model.inertia = assign(points, model.centroids, labels);
  model.inertia_trace.push_back(model.inertia);
  return model;
}

std::string to_string(Decision d) {
  return d == Decision::kIdentical ? "identical" : "non-identical";
}

std::uint64_t channel_seed(std::uint64_t master_seed, const std::string& id,
                           ChannelId channel) {
  return mix_seed(master_seed, fnv1a64(id + "/" + to_string(channel)));
}

UtteranceModel fit_utterance(std::span<const FeatureMatrix> channels,
                             const KMeansOptions& options,
                             std::uint64_t master_seed) {
  UtteranceModel model;
  if (channels.empty()) throw ConfigError("fit_utterance: no channels");
  model.id = channels.front().source_id;
  for (const auto& fm : channels) {
    if (fm.source_id != model.id) {
      throw ConfigError("fit_utterance: channels come from different utterances ('" +
                        model.id + "' vs '" + fm.source_id + "')");
    }
    if (model.centroids.contains(fm.channel)) {
      throw ConfigError("fit_utterance: duplicate channel " + to_string(fm.channel));
    }
    const auto fit = kmeans(fm.rows, options,
                            channel_seed(master_seed, model.id, fm.channel));
    model.centroids.emplace(fm.channel, fit.centroids);
  }
  return model;
}

IdentityVerdict compare_models(const UtteranceModel& test,
                               const UtteranceModel& ref, double threshold) {
  const auto keys = [](const UtteranceModel& m) {
    std::set<ChannelId> s;
    for (const auto& [ch, _] : m.centroids) s.insert(ch);
    return s;
  };
  if (keys(test) != keys(ref)) {
    throw ConfigError("verdict: test '" + test.id + "' and reference '" +
                      ref.id + "' have different channel sets");
  }
  IdentityVerdict v;
  v.test_id = test.id;
  v.ref_id = ref.id;
  v.threshold = threshold;
  double total = 0.0;
  for (const auto& [ch, tc] : test.centroids) {
    const Matrix& rc = ref.centroids.at(ch);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < tc.rows(); ++a) {
      for (std::size_t b = 0; b < rc.rows(); ++b) {
        best = std::min(best, euclidean(tc.row(a), rc.row(b)));
      }
    }
    v.per_channel_scores[ch] = best;
    total += best;
  }
  v.score = total / static_cast<double>(test.centroids.size());
  v.decision = v.score <= threshold ? Decision::kIdentical : Decision::kNonIdentical;
  return v;
}

IdentityVerdict verdict(std::span<const FeatureMatrix> test,
                        std::span<const FeatureMatrix> ref,
                        const KMeansOptions& options, double threshold,
                        std::uint64_t master_seed) {
  return compare_models(fit_utterance(test, options, master_seed),
                        fit_utterance(ref, options, master_seed), threshold);
}

std::string verdict_json(const IdentityVerdict& v) {
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& [ch, s] : v.per_channel_scores) per[to_string(ch)] = s;
  const nlohmann::ordered_json doc = {{"test_id", v.test_id},
                                      {"ref_id", v.ref_id},
                                      {"per_channel_scores", per},
                                      {"score", v.score},
                                      {"threshold", v.threshold},
                                      {"decision", to_string(v.decision)}};
  return doc.dump(2);
}

ThresholdCalibration calibrate_threshold_detailed(std::span<const double> genuine,
                                                  std::span<const double> impostor) {
  if (genuine.empty() || impostor.empty()) {
    throw ParameterError("calibrate_threshold: both score sets must be non-empty");
  }
  std::vector<double> all(genuine.begin(), genuine.end());
  all.insert(all.end(), impostor.begin(), impostor.end());
  std::ranges::sort(all);
  all.erase(std::unique(all.begin(), all.end()), all.end());

  const auto errors_at = [&](double t) {
    std::size_t e = 0;
    for (double g : genuine) e += g > t ? 1 : 0;
    for (double s : impostor) e += s <= t ? 1 : 0;
    return e;
  };

  // Interior candidates: midpoints of consecutive distinct scores.
  bool have = false;
  ThresholdCalibration best;
  double best_gap = -1.0;
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    const double gap = all[i + 1] - all[i];
    const double t = all[i] + gap / 2.0;
    const std::size_t e = errors_at(t);
    if (!have || e < best.errors || (e == best.errors && gap > best_gap)) {
      have = true;
      best = {t, e};
      best_gap = gap;
    }
  }

  // Reject-all / accept-all, margin of one unit of the score spread.
  const double spread = std::max(all.back() - all.front(), 1.0);
  for (double t : {all.front() - spread / 2.0, all.back() + spread / 2.0}) {
    const std::size_t e = errors_at(t);
    if (!have || e < best.errors) {
      have = true;
      best = {t, e};
    }
  }
  return best;
}

double calibrate_threshold(std::span<const double> genuine,
                           std::span<const double> impostor) {
  return calibrate_threshold_detailed(genuine, impostor).threshold;
}

void ConfusionCounts::add(bool genuine, Decision decision) {
  const bool identical = decision == Decision::kIdentical;
  if (genuine) {
    identical ? ++tp : ++fn;
  } else {
    identical ? ++fp : ++tn;
  }
}

double accuracy(const ConfusionCounts& counts) {
  const std::size_t total = counts.total();
  if (total == 0) throw UndefinedError("accuracy: no trials");
  return static_cast<double>(counts.tp + counts.tn) / static_cast<double>(total);
}

}  // namespace melsep
