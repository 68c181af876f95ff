#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "namekit/dataset.hpp"
#include "namekit/fuzzy_index.hpp"

namespace namekit::inference {

using dataset::Gender;

enum class EstimateSource { name, image, fused };

std::string_view to_string(EstimateSource s);

// The winning label and its confidence; P(other) = 1 - probability, so the
// probability is always in [0.5, 1].
struct GenderEstimate {
  Gender gender = Gender::female;
  double probability = 0.5;
  EstimateSource source = EstimateSource::name;
  // Set when the image channel was requested but could not be used and the
  // result fell back to the name channel alone.
  bool degraded = false;
  // Set when the continuous score landed exactly on 0.5 and the configured
  // tie label decided the output.
  bool tie = false;

  double probability_male() const {
    return gender == Gender::male ? probability : 1.0 - probability;
  }
};

struct FusionConfig {
  std::size_t k = 5;                  // odd
  double confidence_threshold = 0.8;  // in (0.5, 1]
  double name_weight = 0.6;
  double image_weight = 0.4;
  bool similarity_weighted_vote = false;
  Gender tie_label = Gender::female;  // label for exact-0.5 scores
  std::chrono::milliseconds image_timeout{5000};  // 0: wait indefinitely

  void validate() const;  // throws ConfigError
};

struct ImageScore {
  Gender gender = Gender::female;
  double probability = 0.5;  // in [0.5, 1]
  double weight = 1.0;       // >= 0
};

// Majority (or similarity-weighted) vote over the top-k nearest names.
// Throws EmptyQueryError, EmptyDatasetError (via the index).
GenderEstimate infer_from_name(const fuzzy::NameIndex& index,
                               std::string_view name, const FusionConfig& cfg);

// Weight-normalized mean of the per-image male probabilities. Throws
// NoScoresError on an empty list. All-zero weights fall back to uniform.
GenderEstimate aggregate_image_scores(const std::vector<ImageScore>& scores,
                                      Gender tie_label = Gender::female);

using ImageEstimateSupplier = std::function<GenderEstimate()>;

// Decision-level fusion of the two channels:
//   1. name confidence >= threshold: return the name estimate unchanged
//      (relabeled fused); the image supplier is never invoked.
//   2. channels agree: that gender, probability = weighted mean of the two
//      confidences.
//   3. channels disagree: weighted sum of the male probabilities decides.
// A failing or timed-out supplier degrades to the name estimate with the
// degraded marker set.
GenderEstimate fuse(const GenderEstimate& name_estimate,
                    const ImageEstimateSupplier& image_supplier,
                    const FusionConfig& cfg);

// Per-image scoring backend. The trained classifier itself is out of scope;
// implementations adapt whatever produces {gender, probability} per image.
class ImageScorer {
 public:
  virtual ~ImageScorer() = default;
  // One score per image reference (URL or opaque id). Throws
  // ImageUnavailableError when the backend cannot answer.
  virtual std::vector<ImageScore> score(const std::vector<std::string>& image_refs) = 0;
};

// Returns the same score for every image; for tests and offline setups.
class StubImageScorer : public ImageScorer {
 public:
  explicit StubImageScorer(ImageScore constant) : constant_(constant) {}
  std::vector<ImageScore> score(const std::vector<std::string>& image_refs) override;

 private:
  ImageScore constant_;
};

// POSTs {"images": [...]} to a remote scorer and expects
// {"scores": [{"gender": "male|female", "probability": p, "weight"?: w}]}.
class HttpImageScorer : public ImageScorer {
 public:
  explicit HttpImageScorer(std::string endpoint_url,
                           std::chrono::milliseconds timeout = std::chrono::milliseconds(10000));
  std::vector<ImageScore> score(const std::vector<std::string>& image_refs) override;

 private:
  std::string host_;
  std::string path_;
  std::chrono::milliseconds timeout_;
};

}  // namespace namekit::inference
