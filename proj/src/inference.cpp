#include "namekit/inference.hpp"

#include <cmath>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "namekit/errors.hpp"
#include "namekit/log.hpp"

namespace namekit::inference {

std::string_view to_string(EstimateSource s) {
  switch (s) {
    case EstimateSource::name: return "name";
    case EstimateSource::image: return "image";
    case EstimateSource::fused: return "fused";
  }
  return "name";
}

void FusionConfig::validate() const {
  if (k == 0 || k % 2 == 0) throw ConfigError("fusion k must be odd and >= 1");
  if (!(confidence_threshold > 0.5) || !(confidence_threshold <= 1.0)) {
    throw ConfigError("confidence_threshold must be in (0.5, 1]");
  }
  if (name_weight < 0.0 || image_weight < 0.0 ||
      name_weight + image_weight <= 0.0) {
    throw ConfigError("channel weights must be >= 0 and sum to > 0");
  }
}

namespace {

// Turns a male-probability score into an estimate, resolving an exact 0.5
// to the configured tie label.
GenderEstimate from_male_probability(double p_male, EstimateSource source,
                                     Gender tie_label) {
  GenderEstimate estimate;
  estimate.source = source;
  if (p_male > 0.5) {
    estimate.gender = Gender::male;
    estimate.probability = p_male;
  } else if (p_male < 0.5) {
    estimate.gender = Gender::female;
    estimate.probability = 1.0 - p_male;
  } else {
    estimate.gender = tie_label;
    estimate.probability = 0.5;
    estimate.tie = true;
  }
  return estimate;
}

}  // namespace

GenderEstimate infer_from_name(const fuzzy::NameIndex& index,
                               std::string_view name, const FusionConfig& cfg) {
  cfg.validate();
  std::vector<fuzzy::Neighbor> neighbors = index.top_k_raw(name, cfg.k);

  double male_votes = 0.0, total_votes = 0.0;
  if (cfg.similarity_weighted_vote) {
    for (const auto& n : neighbors) {
      double w = 1.0 - n.distance;
      total_votes += w;
      if (n.record.gender == Gender::male) male_votes += w;
    }
  }
  if (!cfg.similarity_weighted_vote || total_votes <= 0.0) {
    // Uniform vote; also the fallback when every neighbor sits at the
    // maximum distance and all similarity weights vanish.
    male_votes = 0.0;
    total_votes = static_cast<double>(neighbors.size());
    for (const auto& n : neighbors) {
      if (n.record.gender == Gender::male) male_votes += 1.0;
    }
  }

  GenderEstimate estimate = from_male_probability(
      male_votes / total_votes, EstimateSource::name, cfg.tie_label);
  return estimate;
}

GenderEstimate aggregate_image_scores(const std::vector<ImageScore>& scores,
                                      Gender tie_label) {
  if (scores.empty()) throw NoScoresError();
  double weight_sum = 0.0;
  for (const auto& s : scores) {
    if (!(s.probability >= 0.5 && s.probability <= 1.0) || s.weight < 0.0) {
      throw std::invalid_argument(
          "image score probability must be in [0.5, 1] and weight >= 0");
    }
    weight_sum += s.weight;
  }

  double p_male = 0.0;
  if (weight_sum <= 0.0) {
    log::warn("aggregate_image_scores: all weights zero, using uniform mean");
    for (const auto& s : scores) {
      p_male += s.gender == Gender::male ? s.probability : 1.0 - s.probability;
    }
    p_male /= static_cast<double>(scores.size());
  } else {
    for (const auto& s : scores) {
      double p = s.gender == Gender::male ? s.probability : 1.0 - s.probability;
      p_male += s.weight * p;
    }
    p_male /= weight_sum;
  }
  return from_male_probability(p_male, EstimateSource::image, tie_label);
}

namespace {

// Runs the supplier on a worker thread so a configured timeout can abandon
// it; the shared state keeps the late result harmless.
GenderEstimate call_with_timeout(const ImageEstimateSupplier& supplier,
                                 std::chrono::milliseconds timeout) {
  if (timeout.count() <= 0) return supplier();

  struct Shared {
    std::mutex mutex;
    std::condition_variable cv;
    bool done = false;
    std::optional<GenderEstimate> estimate;
    std::exception_ptr error;
  };
  auto shared = std::make_shared<Shared>();
  std::thread([supplier, shared] {
    try {
      GenderEstimate estimate = supplier();
      std::lock_guard<std::mutex> lock(shared->mutex);
      shared->estimate = estimate;
      shared->done = true;
    } catch (...) {
      std::lock_guard<std::mutex> lock(shared->mutex);
      shared->error = std::current_exception();
      shared->done = true;
    }
    shared->cv.notify_one();
  }).detach();

  std::unique_lock<std::mutex> lock(shared->mutex);
  if (!shared->cv.wait_for(lock, timeout, [&] { return shared->done; })) {
    throw ImageUnavailableError("image supplier timed out after " +
                                std::to_string(timeout.count()) + "ms");
  }
  if (shared->error) std::rethrow_exception(shared->error);
  return *shared->estimate;
}

}  // namespace

GenderEstimate fuse(const GenderEstimate& name_estimate,
                    const ImageEstimateSupplier& image_supplier,
                    const FusionConfig& cfg) {
  cfg.validate();
  if (name_estimate.source != EstimateSource::name) {
    throw std::invalid_argument("fuse expects a name-channel estimate");
  }

  // Branch 1: the name channel is confident enough on its own; skip the
  // image channel entirely.
  if (name_estimate.probability >= cfg.confidence_threshold) {
    GenderEstimate fused = name_estimate;
    fused.source = EstimateSource::fused;
    return fused;
  }

  GenderEstimate image_estimate;
  try {
    image_estimate = call_with_timeout(image_supplier, cfg.image_timeout);
  } catch (const std::exception& e) {
    log::warn("fuse: image channel failed (", e.what(),
              "), falling back to name estimate");
    GenderEstimate fused = name_estimate;
    fused.source = EstimateSource::fused;
    fused.degraded = true;
    return fused;
  }

  const double weight_sum = cfg.name_weight + cfg.image_weight;

  // Branch 2: agreement; keep the gender, average the confidences.
  if (image_estimate.gender == name_estimate.gender) {
    GenderEstimate fused;
    fused.gender = name_estimate.gender;
    fused.probability = (cfg.name_weight * name_estimate.probability +
                         cfg.image_weight * image_estimate.probability) /
                        weight_sum;
    fused.source = EstimateSource::fused;
    return fused;
  }

  // Branch 3: disagreement; the weighted sum of male probabilities decides.
  double s = (cfg.name_weight * name_estimate.probability_male() +
              cfg.image_weight * image_estimate.probability_male()) /
             weight_sum;
  return from_male_probability(s, EstimateSource::fused, cfg.tie_label);
}

std::vector<ImageScore> StubImageScorer::score(
    const std::vector<std::string>& image_refs) {
  return std::vector<ImageScore>(image_refs.size(), constant_);
}

HttpImageScorer::HttpImageScorer(std::string endpoint_url,
                                 std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  auto scheme_end = endpoint_url.find("://");
  std::size_t authority_start =
      scheme_end == std::string::npos ? 0 : scheme_end + 3;
  auto path_start = endpoint_url.find('/', authority_start);
  if (path_start == std::string::npos) {
    host_ = endpoint_url;
    path_ = "/";
  } else {
    host_ = endpoint_url.substr(0, path_start);
    path_ = endpoint_url.substr(path_start);
  }
}

std::vector<ImageScore> HttpImageScorer::score(
    const std::vector<std::string>& image_refs) {
  nlohmann::json body{{"images", image_refs}};
  httplib::Client client(host_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  httplib::Result result = client.Post(path_, body.dump(), "application/json");
  if (!result || result->status != 200) {
    throw ImageUnavailableError(
        result ? "scorer returned HTTP " + std::to_string(result->status)
               : "scorer unreachable: " + httplib::to_string(result.error()));
  }
  nlohmann::json doc = nlohmann::json::parse(result->body, nullptr, false);
  if (doc.is_discarded() || !doc.contains("scores") || !doc["scores"].is_array()) {
    throw ImageUnavailableError("scorer response has no scores array");
  }
  std::vector<ImageScore> scores;
  for (const auto& item : doc["scores"]) {
    ImageScore score;
    score.gender = dataset::gender_from_string(item.at("gender").get<std::string>());
    score.probability = item.at("probability").get<double>();
    score.weight = item.value("weight", 1.0);
    scores.push_back(score);
  }
  return scores;
}

}  // namespace namekit::inference
