#include "namekit/json_io.hpp"

#include "namekit/errors.hpp"

namespace namekit::dataset {

void to_json(nlohmann::json& j, const NameRecord& record) {
  j = nlohmann::json{{"persian", record.persian.value},
                     {"latin", record.latin.value},
                     {"gender", std::string(to_string(record.gender))}};
}

void from_json(const nlohmann::json& j, NameRecord& record) {
  record.persian.value = j.at("persian").get<std::string>();
  record.latin.value = j.at("latin").get<std::string>();
  record.gender = gender_from_string(j.at("gender").get<std::string>());
}

void to_json(nlohmann::json& j, const CharCount& count) {
  j = nlohmann::json::array({count.character, count.count});
}

void from_json(const nlohmann::json& j, CharCount& count) {
  count.character = j.at(0).get<std::string>();
  count.count = j.at(1).get<std::uint64_t>();
}

namespace {

nlohmann::json histogram_to_json(const std::map<std::uint64_t, std::uint64_t>& h) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [length, count] : h) j[std::to_string(length)] = count;
  return j;
}

std::map<std::uint64_t, std::uint64_t> histogram_from_json(const nlohmann::json& j) {
  std::map<std::uint64_t, std::uint64_t> h;
  for (auto it = j.begin(); it != j.end(); ++it) {
    h[std::stoull(it.key())] = it.value().get<std::uint64_t>();
  }
  return h;
}

}  // namespace

void to_json(nlohmann::json& j, const DatasetStats& stats) {
  j = nlohmann::json{
      {"total", stats.total},
      {"male_total", stats.male_total},
      {"male_fraction", stats.male_fraction},
      {"female_fraction", 1.0 - stats.male_fraction},
      {"persian_length_histogram", histogram_to_json(stats.persian_length_histogram)},
      {"latin_length_histogram", histogram_to_json(stats.latin_length_histogram)},
      {"persian_length_mean", stats.persian_length_mean},
      {"latin_length_mean", stats.latin_length_mean},
      {"char_frequency",
       {{"male", {{"persian", stats.male_chars.persian}, {"latin", stats.male_chars.latin}}},
        {"female",
         {{"persian", stats.female_chars.persian}, {"latin", stats.female_chars.latin}}}}},
  };
}

void from_json(const nlohmann::json& j, DatasetStats& stats) {
  stats.total = j.at("total").get<std::uint64_t>();
  stats.male_total = j.at("male_total").get<std::uint64_t>();
  stats.male_fraction = j.at("male_fraction").get<double>();
  stats.persian_length_histogram = histogram_from_json(j.at("persian_length_histogram"));
  stats.latin_length_histogram = histogram_from_json(j.at("latin_length_histogram"));
  stats.persian_length_mean = j.at("persian_length_mean").get<double>();
  stats.latin_length_mean = j.at("latin_length_mean").get<double>();
  const auto& freq = j.at("char_frequency");
  stats.male_chars.persian = freq.at("male").at("persian").get<std::vector<CharCount>>();
  stats.male_chars.latin = freq.at("male").at("latin").get<std::vector<CharCount>>();
  stats.female_chars.persian = freq.at("female").at("persian").get<std::vector<CharCount>>();
  stats.female_chars.latin = freq.at("female").at("latin").get<std::vector<CharCount>>();
}

void to_json(nlohmann::json& j, const AuditFlag& flag) {
  j = nlohmann::json{
      {"record", flag.record},
      {"reason", flag.reason},
      {"source", flag.source == AuditFlag::Source::llm ? "llm" : "rule"}};
}

}  // namespace namekit::dataset

namespace namekit::fuzzy {

void to_json(nlohmann::json& j, const Neighbor& neighbor) {
  j = nlohmann::json{{"record", neighbor.record}, {"distance", neighbor.distance}};
}

}  // namespace namekit::fuzzy

namespace namekit::inference {

void to_json(nlohmann::json& j, const GenderEstimate& estimate) {
  j = nlohmann::json{{"gender", std::string(dataset::to_string(estimate.gender))},
                     {"probability", estimate.probability},
                     {"source", std::string(to_string(estimate.source))}};
  if (estimate.degraded) j["degraded"] = true;
  if (estimate.tie) j["tie"] = true;
}

void from_json(const nlohmann::json& j, GenderEstimate& estimate) {
  estimate.gender = dataset::gender_from_string(j.at("gender").get<std::string>());
  estimate.probability = j.at("probability").get<double>();
  std::string source = j.at("source").get<std::string>();
  if (source == "name") estimate.source = EstimateSource::name;
  else if (source == "image") estimate.source = EstimateSource::image;
  else if (source == "fused") estimate.source = EstimateSource::fused;
  else throw FormatError("invalid estimate source: " + source);
  estimate.degraded = j.value("degraded", false);
  estimate.tie = j.value("tie", false);
}

}  // namespace namekit::inference

namespace namekit::nominalist {

void to_json(nlohmann::json& j, const UsernameCandidate& candidate) {
  j = nlohmann::json{{"value", candidate.value},
                     {"origin", std::string(to_string(candidate.origin))},
                     {"heuristic_score", candidate.heuristic_score},
                     {"final_score", candidate.final_score}};
  if (candidate.origin == Origin::rule) j["rule_id"] = candidate.rule_id;
  if (candidate.ai_score) j["ai_score"] = *candidate.ai_score;
}

void from_json(const nlohmann::json& j, UsernameCandidate& candidate) {
  candidate.value = j.at("value").get<std::string>();
  std::string origin = j.at("origin").get<std::string>();
  if (origin == "rule") candidate.origin = Origin::rule;
  else if (origin == "ai") candidate.origin = Origin::ai;
  else throw FormatError("invalid candidate origin: " + origin);
  candidate.rule_id = j.value("rule_id", 0);
  if (j.contains("ai_score")) candidate.ai_score = j.at("ai_score").get<double>();
  candidate.heuristic_score = j.at("heuristic_score").get<double>();
  candidate.final_score = j.at("final_score").get<double>();
}

}  // namespace namekit::nominalist
