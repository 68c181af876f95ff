#include <doctest.h>

#include <atomic>
#include <random>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "namekit/errors.hpp"
#include "namekit/inference.hpp"

using namespace namekit;
using dataset::Gender;
using dataset::NameRecord;
using inference::EstimateSource;
using inference::FusionConfig;
using inference::GenderEstimate;
using inference::ImageScore;

namespace {

NameRecord record(const char* persian, const char* latin, Gender g) {
  return {normalization::NormalizedText(persian),
          normalization::NormalizedText(latin), g};
}

GenderEstimate name_estimate(Gender g, double p) {
  GenderEstimate e;
  e.gender = g;
  e.probability = p;
  e.source = EstimateSource::name;
  return e;
}

FusionConfig config(double threshold = 0.8, double wn = 0.6, double wi = 0.4) {
  FusionConfig cfg;
  cfg.confidence_threshold = threshold;
  cfg.name_weight = wn;
  cfg.image_weight = wi;
  return cfg;
}

}  // namespace

TEST_CASE("name vote: unanimous and split neighborhoods") {
  // Five names, all within an edit or two of "dana", mixed genders.
  fuzzy::NameIndex index = fuzzy::NameIndex::build({
      record("دانا", "dana", Gender::male),
      record("دارا", "dara", Gender::male),
      record("دنیا", "dna", Gender::female),
      record("مانا", "mana", Gender::female),
      record("سارا", "sana", Gender::female),
  });
  FusionConfig cfg = config();
  cfg.k = 5;
  GenderEstimate estimate = inference::infer_from_name(index, "dana", cfg);
  CHECK(estimate.source == EstimateSource::name);
  CHECK(estimate.gender == Gender::female);  // 3 of 5 neighbors
  CHECK(estimate.probability == doctest::Approx(0.6));

  cfg.k = 1;
  GenderEstimate exact = inference::infer_from_name(index, "dana", cfg);
  CHECK(exact.gender == Gender::male);
  CHECK(exact.probability == 1.0);

  fuzzy::NameIndex all_male = fuzzy::NameIndex::build({
      record("علی", "ali", Gender::male),
      record("ولی", "vali", Gender::male),
      record("عمو", "amoo", Gender::male),
  });
  cfg.k = 3;
  GenderEstimate unanimous = inference::infer_from_name(all_male, "ali", cfg);
  CHECK(unanimous.gender == Gender::male);
  CHECK(unanimous.probability == 1.0);
}

TEST_CASE("uniform vote probability is a multiple of 1/k and at least 0.5") {
  auto records = std::vector<NameRecord>{};
  std::mt19937_64 rng(59);
  for (int i = 0; i < 40; ++i) {
    std::string latin = "name" + std::to_string(i);
    records.push_back({normalization::NormalizedText("نام" + std::to_string(i)),
                       normalization::NormalizedText(latin),
                       rng() % 2 ? Gender::male : Gender::female});
  }
  fuzzy::NameIndex index = fuzzy::NameIndex::build(records);
  for (std::size_t k : {1, 3, 5, 7}) {
    FusionConfig cfg = config();
    cfg.k = k;
    for (int q = 0; q < 25; ++q) {
      GenderEstimate e = inference::infer_from_name(
          index, "name" + std::to_string(q), cfg);
      CHECK(e.probability >= 0.5);
      CHECK(e.probability <= 1.0);
      double votes = e.probability * static_cast<double>(k);
      CHECK(votes == doctest::Approx(std::round(votes)).epsilon(1e-9));
      CHECK_FALSE(e.tie);  // odd k cannot split evenly
    }
  }
}

TEST_CASE("similarity-weighted vote") {
  fuzzy::NameIndex index = fuzzy::NameIndex::build({
      record("سارا", "sara", Gender::female),
      record("دارا", "dart", Gender::male),
      record("مارال", "mxyz", Gender::male),
  });
  FusionConfig cfg = config();
  cfg.k = 3;
  cfg.similarity_weighted_vote = true;
  // Query "sara": distances 0 (sara), 0.5 (dart), 1.0 (mxyz).
  // weights: female 1.0, male 0.5 + 0.0 -> P(female) = 1.0/1.5.
  GenderEstimate e = inference::infer_from_name(index, "sara", cfg);
  CHECK(e.gender == Gender::female);
  CHECK(e.probability == doctest::Approx(1.0 / 1.5));
}

TEST_CASE("infer_from_name error paths") {
  fuzzy::NameIndex index =
      fuzzy::NameIndex::build({record("سارا", "sara", Gender::female)});
  CHECK_THROWS_AS(inference::infer_from_name(index, "  ", config()), EmptyQueryError);
  FusionConfig bad = config();
  bad.k = 4;
  CHECK_THROWS_AS(inference::infer_from_name(index, "sara", bad), ConfigError);
}

TEST_CASE("aggregate_image_scores") {
  CHECK_THROWS_AS(inference::aggregate_image_scores({}), NoScoresError);

  GenderEstimate single =
      inference::aggregate_image_scores({{Gender::male, 0.9, 1.0}});
  CHECK(single.gender == Gender::male);
  CHECK(single.probability == doctest::Approx(0.9));
  CHECK(single.source == EstimateSource::image);

  // Opposite 0.8s cancel to an exact 0.5: tie resolves to the configured
  // label with the tie marker set.
  GenderEstimate tie = inference::aggregate_image_scores(
      {{Gender::male, 0.8, 1.0}, {Gender::female, 0.8, 1.0}});
  CHECK(tie.gender == Gender::female);
  CHECK(tie.probability == 0.5);
  CHECK(tie.tie);
  GenderEstimate tie_male = inference::aggregate_image_scores(
      {{Gender::male, 0.8, 1.0}, {Gender::female, 0.8, 1.0}}, Gender::male);
  CHECK(tie_male.gender == Gender::male);

  // Weighted mean: (2*0.9 + 1*0.4) / 3.
  GenderEstimate weighted = inference::aggregate_image_scores(
      {{Gender::male, 0.9, 2.0}, {Gender::female, 0.6, 1.0}});
  CHECK(weighted.gender == Gender::male);
  CHECK(weighted.probability == doctest::Approx((2.0 * 0.9 + 0.4) / 3.0));

  // All-zero weights degrade to the uniform mean.
  GenderEstimate zero_weights = inference::aggregate_image_scores(
      {{Gender::male, 0.9, 0.0}, {Gender::male, 0.7, 0.0}});
  CHECK(zero_weights.gender == Gender::male);
  CHECK(zero_weights.probability == doctest::Approx(0.8));

  // Scores must respect the [0.5, 1] probability invariant.
  CHECK_THROWS_AS(inference::aggregate_image_scores({{Gender::male, 0.3, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(inference::aggregate_image_scores({{Gender::male, 0.9, -1.0}}),
                  std::invalid_argument);
}

TEST_CASE("fuse branch 1: confident name bypasses the image channel") {
  std::atomic<int> invocations{0};
  GenderEstimate fused = inference::fuse(
      name_estimate(Gender::male, 0.9),
      [&]() -> GenderEstimate {
        ++invocations;
        return name_estimate(Gender::female, 0.9);
      },
      config(0.8));
  CHECK(invocations.load() == 0);  // supplier never invoked
  CHECK(fused.gender == Gender::male);
  CHECK(fused.probability == doctest::Approx(0.9));
  CHECK(fused.source == EstimateSource::fused);
  CHECK_FALSE(fused.degraded);
}

TEST_CASE("fuse branch 2: agreement averages the confidences") {
  auto image = []() -> GenderEstimate {
    GenderEstimate e;
    e.gender = Gender::male;
    e.probability = 0.8;
    e.source = EstimateSource::image;
    return e;
  };
  GenderEstimate fused =
      inference::fuse(name_estimate(Gender::male, 0.6), image, config(0.8, 0.6, 0.4));
  CHECK(fused.gender == Gender::male);
  CHECK(fused.probability == doctest::Approx(0.6 * 0.6 + 0.4 * 0.8));  // 0.68
  CHECK(fused.source == EstimateSource::fused);
}

TEST_CASE("fuse branch 3: disagreement uses the weighted male-probability sum") {
  auto image = []() -> GenderEstimate {
    GenderEstimate e;
    e.gender = Gender::female;
    e.probability = 0.7;
    e.source = EstimateSource::image;
    return e;
  };
  GenderEstimate fused =
      inference::fuse(name_estimate(Gender::male, 0.6), image, config(0.8, 0.5, 0.5));
  // s = 0.5*0.6 + 0.5*0.3 = 0.45 -> female with probability 0.55.
  CHECK(fused.gender == Gender::female);
  CHECK(fused.probability == doctest::Approx(0.55));
}

TEST_CASE("fuse degrades when the image channel fails or times out") {
  GenderEstimate fused = inference::fuse(
      name_estimate(Gender::female, 0.6),
      []() -> GenderEstimate { throw ImageUnavailableError("backend down"); },
      config());
  CHECK(fused.degraded);
  CHECK(fused.gender == Gender::female);
  CHECK(fused.probability == doctest::Approx(0.6));
  CHECK(fused.source == EstimateSource::fused);

  FusionConfig timed = config();
  timed.image_timeout = std::chrono::milliseconds(50);
  GenderEstimate timed_out = inference::fuse(
      name_estimate(Gender::female, 0.6),
      []() -> GenderEstimate {
        std::this_thread::sleep_for(std::chrono::milliseconds(400));
        return {};
      },
      timed);
  CHECK(timed_out.degraded);
  CHECK(timed_out.probability == doctest::Approx(0.6));
}

TEST_CASE("fuse rejects non-name estimates and validates config") {
  GenderEstimate image;
  image.source = EstimateSource::image;
  CHECK_THROWS_AS(inference::fuse(image, [] { return GenderEstimate{}; }, config()),
                  std::invalid_argument);
  FusionConfig bad = config();
  bad.confidence_threshold = 0.4;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = config();
  bad.name_weight = 0.0;
  bad.image_weight = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("stub and remote image scorers") {
  inference::StubImageScorer stub({Gender::male, 0.7, 1.0});
  auto scores = stub.score({"a", "b", "c"});
  REQUIRE(scores.size() == 3);
  CHECK(scores[1].gender == Gender::male);
  CHECK(scores[1].probability == 0.7);

  httplib::Server server;
  server.Post("/score", [](const httplib::Request& req, httplib::Response& res) {
    auto body = nlohmann::json::parse(req.body);
    REQUIRE(body["images"].size() == 2);
    nlohmann::json reply{{"scores",
                          {{{"gender", "male"}, {"probability", 0.9}},
                           {{"gender", "female"}, {"probability", 0.8}, {"weight", 2.0}}}}};
    res.set_content(reply.dump(), "application/json");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread server_thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  inference::HttpImageScorer remote("http://127.0.0.1:" + std::to_string(port) + "/score");
  auto remote_scores = remote.score({"url1", "url2"});
  REQUIRE(remote_scores.size() == 2);
  CHECK(remote_scores[0].gender == Gender::male);
  CHECK(remote_scores[0].probability == doctest::Approx(0.9));
  CHECK(remote_scores[0].weight == 1.0);  // default when absent
  CHECK(remote_scores[1].weight == 2.0);

  server.stop();
  server_thread.join();

  inference::HttpImageScorer unreachable("http://127.0.0.1:1/score",
                                         std::chrono::milliseconds(200));
  CHECK_THROWS_AS(unreachable.score({"x"}), ImageUnavailableError);
}

TEST_CASE("fusion properties over random configurations") {
  std::mt19937_64 rng(61);
  auto draw_probability = [&] {
    return 0.5 + static_cast<double>(rng() % 500) / 1000.0 + 0.0005;
  };
  auto draw_weight = [&] {
    return 0.05 + static_cast<double>(rng() % 950) / 1000.0;
  };
  int tested = 0;
  while (tested < 1000) {
    double pn = draw_probability(), pi = draw_probability();
    double wn = draw_weight(), wi = draw_weight();
    Gender gn = rng() % 2 ? Gender::male : Gender::female;
    Gender gi = rng() % 2 ? Gender::male : Gender::female;
    GenderEstimate name = name_estimate(gn, pn);
    auto image = [&]() -> GenderEstimate {
      GenderEstimate e;
      e.gender = gi;
      e.probability = pi;
      e.source = EstimateSource::image;
      return e;
    };
    // Skip knife-edge configurations where the disagreement score is an
    // exact coin flip; the deterministic tie tests cover those.
    double s = (wn * (gn == Gender::male ? pn : 1 - pn) +
                wi * (gi == Gender::male ? pi : 1 - pi)) /
               (wn + wi);
    if (std::abs(s - 0.5) < 1e-6) continue;
    ++tested;

    FusionConfig cfg = config(0.999, wn, wi);  // force the image branch
    GenderEstimate fused = inference::fuse(name, image, cfg);

    if (gn == gi) {
      // Agreement: probability bounded by the channel confidences.
      CHECK(fused.gender == gn);
      CHECK(fused.probability >= std::min(pn, pi) - 1e-12);
      CHECK(fused.probability <= std::max(pn, pi) + 1e-12);
    }

    // Scale invariance: multiplying both weights by the same constant
    // changes nothing.
    double scale = 0.25 + static_cast<double>(rng() % 800) / 100.0;
    FusionConfig scaled = cfg;
    scaled.name_weight = wn * scale;
    scaled.image_weight = wi * scale;
    GenderEstimate fused_scaled = inference::fuse(name, image, scaled);
    CHECK(fused_scaled.gender == fused.gender);
    CHECK(fused_scaled.probability == doctest::Approx(fused.probability).epsilon(1e-9));

    // Monotonicity: growing the name weight never flips the label away
    // from the name channel's label.
    FusionConfig heavier = cfg;
    heavier.name_weight = wn * 2.0;
    GenderEstimate fused_heavier = inference::fuse(name, image, heavier);
    if (fused.gender == gn) CHECK(fused_heavier.gender == gn);
  }
}
