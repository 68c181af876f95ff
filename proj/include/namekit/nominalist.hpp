#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "namekit/dataset.hpp"
#include "namekit/fuzzy_index.hpp"
#include "namekit/llm_client.hpp"

namespace namekit::nominalist {

// Valid usernames are 4-20 characters of [A-Za-z0-9_].
bool is_valid_username(std::string_view value);

enum class Origin { rule, ai };

std::string_view to_string(Origin o);

struct UsernameCandidate {
  std::string value;
  Origin origin = Origin::rule;
  int rule_id = 0;  // 1..9 when origin == rule
  std::optional<double> ai_score;
  double heuristic_score = 0.0;
  // 0.6 * ai + 0.4 * heuristic when an ai score exists, else the heuristic
  // score alone.
  double final_score = 0.0;

  bool operator==(const UsernameCandidate&) const = default;
};

struct GenerationContext {
  std::string input_name;
  std::optional<std::string> transliteration;
  std::optional<dataset::Gender> gender;
  std::optional<int> birth_year;
  std::uint64_t rng_seed = 0;
};

struct RuleConfig {
  std::vector<std::string> prefixes{"im", "the", "its"};
  std::vector<std::string> suffixes{"_dev", "_official", "_ir"};
};

// Looks the name up in the dataset: exact normalized match first, otherwise
// the nearest neighbor within normalized distance 0.25. Absent result means
// the caller should use a Latin input as-is.
std::optional<std::pair<std::string, dataset::Gender>> resolve_transliteration(
    const fuzzy::NameIndex& index, std::string_view name);

// Lowercased, deaccented, apostrophe/hyphen-free Latin base the rules work
// on; words stay space-separated. Empty when no Latin base is derivable.
std::string latin_base(const GenerationContext& ctx,
                       const fuzzy::NameIndex* index);

// The nine deterministic transformation rules, applied to the Latin base:
//   1 underscore insertion at word boundaries   6 suffix addition
//   2 two-digit numerical suffix                7 case normalization
//   3 year appending (birth year or current)    8 space removal
//   4 dot notation first.last (dots -> _)       9 three-char random suffix
//   5 prefix addition
// Outputs are validated, deduplicated and deterministic for a given seed.
// Throws UnresolvableNameError when no Latin base exists.
std::vector<UsernameCandidate> rule_candidates(const GenerationContext& ctx,
                                               const fuzzy::NameIndex* index = nullptr,
                                               const RuleConfig& rules = {});

// Asks the llm for six creative variants (temperature 0.8) and keeps the
// lines that pass validation. Total llm failure degrades to an empty list.
std::vector<UsernameCandidate> llm_candidates(const GenerationContext& ctx,
                                              const fuzzy::NameIndex* index,
                                              llm::LlmClient* client);

// Creator agent: merges both pathways, deduplicates case-insensitively
// (first origin wins) and lands on 10-12 unique candidates, topping up with
// extra random-suffix variants when needed. Rule and llm generation may run
// concurrently; the merge order (rules first, ai second) is deterministic.
std::vector<UsernameCandidate> create(const GenerationContext& ctx,
                                      const fuzzy::NameIndex* index,
                                      llm::LlmClient* client,
                                      const RuleConfig& rules = {});

// Existing-usernames lookup; implementations are case-insensitive.
class UsernameStore {
 public:
  virtual ~UsernameStore() = default;
  // Throws StoreUnavailableError when the backing store cannot answer.
  virtual bool exists(std::string_view username) const = 0;
};

class InMemoryUsernameStore : public UsernameStore {
 public:
  InMemoryUsernameStore() = default;
  explicit InMemoryUsernameStore(const std::vector<std::string>& usernames);
  void add(std::string_view username);
  bool exists(std::string_view username) const override;

 private:
  std::set<std::string> taken_;  // lowercased
};

// Plain-text store: one username per line, case-insensitive.
class FileUsernameStore : public UsernameStore {
 public:
  explicit FileUsernameStore(const std::string& path);
  bool exists(std::string_view username) const override;

 private:
  InMemoryUsernameStore store_;
};

enum class StoreFailurePolicy { fail, pass_through };

// Drops candidates already present in the store, preserving order. With the
// pass_through policy an unavailable store returns the input unchanged plus
// a warning.
std::vector<UsernameCandidate> filter_available(
    std::vector<UsernameCandidate> candidates, const UsernameStore& store,
    StoreFailurePolicy policy = StoreFailurePolicy::fail);

// Reviewer stage two: one batched llm call (temperature 0.3) scores every
// candidate on five dimensions in [0,1]; the mean becomes the ai score.
// Unparseable entries are simply absent; total failure yields an empty map.
std::map<std::string, double> ai_rank(const std::vector<UsernameCandidate>& candidates,
                                      llm::LlmClient& client);

// Deterministic score in [0,1] from three weighted sub-scores: length
// (6-15 preferred), digit content, and readability.
double heuristic_score(std::string_view candidate);

// Applies the 60/40 combination, sorts by descending final score (ties
// lexicographic ascending) and returns the top k.
std::vector<UsernameCandidate> final_rank(std::vector<UsernameCandidate> candidates,
                                          std::size_t k);

struct SuggestOptions {
  std::size_t k = 5;
  StoreFailurePolicy store_policy = StoreFailurePolicy::pass_through;
  RuleConfig rules;
};

// Full creator -> reviewer pipeline. index, client and store may each be
// null; the pipeline degrades accordingly (heuristic-only ranking, no
// availability filtering).
std::vector<UsernameCandidate> suggest(const GenerationContext& ctx,
                                       const fuzzy::NameIndex* index,
                                       llm::LlmClient* client,
                                       const UsernameStore* store,
                                       const SuggestOptions& options = {});

}  // namespace namekit::nominalist
