#pragma once

#include <json.hpp>

#include "namekit/audit.hpp"
#include "namekit/dataset.hpp"
#include "namekit/fuzzy_index.hpp"
#include "namekit/inference.hpp"
#include "namekit/nominalist.hpp"

// JSON wire format for the documented data model. nlohmann::json keeps
// object keys sorted, so serialization is byte-deterministic.

namespace namekit::dataset {

void to_json(nlohmann::json& j, const NameRecord& record);
void from_json(const nlohmann::json& j, NameRecord& record);

void to_json(nlohmann::json& j, const CharCount& count);
void from_json(const nlohmann::json& j, CharCount& count);

void to_json(nlohmann::json& j, const DatasetStats& stats);
void from_json(const nlohmann::json& j, DatasetStats& stats);

void to_json(nlohmann::json& j, const AuditFlag& flag);

}  // namespace namekit::dataset

namespace namekit::fuzzy {

void to_json(nlohmann::json& j, const Neighbor& neighbor);

}  // namespace namekit::fuzzy

namespace namekit::inference {

void to_json(nlohmann::json& j, const GenderEstimate& estimate);
void from_json(const nlohmann::json& j, GenderEstimate& estimate);

}  // namespace namekit::inference

namespace namekit::nominalist {

void to_json(nlohmann::json& j, const UsernameCandidate& candidate);
void from_json(const nlohmann::json& j, UsernameCandidate& candidate);

}  // namespace namekit::nominalist
