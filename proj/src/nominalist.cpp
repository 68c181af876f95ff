#include "namekit/nominalist.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include "namekit/errors.hpp"
#include "namekit/log.hpp"
#include "namekit/normalization.hpp"
#include "namekit/utf8.hpp"

namespace namekit::nominalist {

using dataset::Gender;

bool is_valid_username(std::string_view value) {
  if (value.size() < 4 || value.size() > 20) return false;
  for (char c : value) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

std::string_view to_string(Origin o) {
  return o == Origin::rule ? "rule" : "ai";
}

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

// Folds the common accented Latin letters to ASCII; anything else non-ASCII
// is dropped from username bases.
std::string fold_accent(char32_t cp) {
  switch (cp) {
    case 0x00DF: return "ss";
    case 0x00C6: case 0x00E6: return "ae";
    case 0x0152: case 0x0153: return "oe";
    default: break;
  }
  auto in = [cp](std::initializer_list<char32_t> list) {
    return std::find(list.begin(), list.end(), cp) != list.end();
  };
  if ((cp >= 0x00C0 && cp <= 0x00C5) || (cp >= 0x00E0 && cp <= 0x00E5)) return "a";
  if (cp == 0x00C7 || cp == 0x00E7 || cp == 0x0106 || cp == 0x0107 ||
      cp == 0x010C || cp == 0x010D) return "c";
  if ((cp >= 0x00C8 && cp <= 0x00CB) || (cp >= 0x00E8 && cp <= 0x00EB)) return "e";
  if ((cp >= 0x00CC && cp <= 0x00CF) || (cp >= 0x00EC && cp <= 0x00EF) ||
      cp == 0x0130 || cp == 0x0131) return "i";
  if (cp == 0x00D1 || cp == 0x00F1) return "n";
  if ((cp >= 0x00D2 && cp <= 0x00D6) || (cp >= 0x00F2 && cp <= 0x00F6) ||
      cp == 0x00D8 || cp == 0x00F8) return "o";
  if ((cp >= 0x00D9 && cp <= 0x00DC) || (cp >= 0x00F9 && cp <= 0x00FC)) return "u";
  if (in({0x00DD, 0x00FD, 0x00FF})) return "y";
  if (cp == 0x0160 || cp == 0x0161 || cp == 0x015E || cp == 0x015F) return "s";
  if (cp == 0x017D || cp == 0x017E) return "z";
  if (cp == 0x0141 || cp == 0x0142) return "l";
  if (cp == 0x0110 || cp == 0x0111) return "d";
  if (cp == 0x011E || cp == 0x011F) return "g";
  return "";
}

std::string sanitize_base(std::string_view raw) {
  normalization::NormalizedText lowered = normalization::normalize_latin(raw);
  std::string out;
  bool pending_space = false;
  for (char32_t cp : utf8::decode(lowered.value)) {
    std::string piece;
    if ((cp >= U'a' && cp <= U'z') || (cp >= U'0' && cp <= U'9')) {
      piece.push_back(static_cast<char>(cp));
    } else if (cp == U' ') {
      pending_space = !out.empty();
      continue;
    } else if (cp == U'\'' || cp == U'-') {
      continue;  // o'brien -> obrien, amir-ali -> amirali
    } else {
      piece = fold_accent(cp);
      if (piece.empty()) continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out += piece;
  }
  return out;
}

std::vector<std::string> split_words(const std::string& base) {
  std::vector<std::string> words;
  std::istringstream in(base);
  std::string word;
  while (in >> word) words.push_back(word);
  return words;
}

std::string concat_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) out += w;
  return out;
}

int current_year() {
  std::time_t now = std::time(nullptr);
  std::tm parts{};
  gmtime_r(&now, &parts);
  return parts.tm_year + 1900;
}

// All pipeline randomness flows through one seeded generator; draws use
// plain modulo so the byte stream is identical across standard libraries.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

char random_suffix_char(std::mt19937_64& rng) {
  constexpr std::string_view alphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
  return alphabet[draw(rng, alphabet.size())];
}

std::string random_suffix_variant(const std::string& concat,
                                  std::mt19937_64& rng) {
  std::string value = concat.substr(0, 17);
  for (int i = 0; i < 3; ++i) value.push_back(random_suffix_char(rng));
  return value;
}

// Applies the nine rules in order. Draws happen before validity filtering
// so the random stream does not depend on which outputs survive.
std::vector<UsernameCandidate> apply_rules(const std::string& base,
                                           const GenerationContext& ctx,
                                           const RuleConfig& rules,
                                           std::mt19937_64& rng) {
  const std::vector<std::string> words = split_words(base);
  const std::string concat = concat_words(words);

  std::vector<std::pair<int, std::string>> outputs;
  // 1: underscore insertion at word boundaries
  if (words.size() >= 2) {
    std::string joined = words[0];
    for (std::size_t i = 1; i < words.size(); ++i) joined += "_" + words[i];
    outputs.emplace_back(1, joined);
  }
  // 2: two-digit numerical suffix
  {
    std::string digits;
    digits.push_back(static_cast<char>('0' + draw(rng, 10)));
    digits.push_back(static_cast<char>('0' + draw(rng, 10)));
    outputs.emplace_back(2, concat + digits);
  }
  // 3: year appending
  {
    int year = ctx.birth_year.value_or(current_year());
    outputs.emplace_back(3, concat + std::to_string(year));
  }
  // 4: dot notation first.last; dots map to underscores to stay within the
  // allowed character set
  if (words.size() >= 2) {
    std::string dotted = words.front() + "." + words.back();
    std::replace(dotted.begin(), dotted.end(), '.', '_');
    outputs.emplace_back(4, dotted);
  }
  // 5: prefix addition
  if (!rules.prefixes.empty()) {
    outputs.emplace_back(5, rules.prefixes[draw(rng, rules.prefixes.size())] + concat);
  }
  // 6: suffix addition
  if (!rules.suffixes.empty()) {
    outputs.emplace_back(6, concat + rules.suffixes[draw(rng, rules.suffixes.size())]);
  }
  // 7: case normalization (the base is already lowercased and deaccented)
  outputs.emplace_back(7, concat);
  // 8: space removal
  outputs.emplace_back(8, concat);
  // 9: random suffix
  outputs.emplace_back(9, random_suffix_variant(concat, rng));

  std::vector<UsernameCandidate> candidates;
  std::set<std::string> seen;
  for (auto& [rule_id, value] : outputs) {
    if (!is_valid_username(value)) continue;
    if (!seen.insert(ascii_lower(value)).second) continue;
    UsernameCandidate candidate;
    candidate.value = std::move(value);
    candidate.origin = Origin::rule;
    candidate.rule_id = rule_id;
    candidates.push_back(std::move(candidate));
  }
  return candidates;
}

std::string strip_decoration(std::string line) {
  // Peel list markers, numbering and code quoting from an llm output line.
  auto trim = [](std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
      s.clear();
      return;
    }
    std::size_t e = s.find_last_not_of(" \t\r");
    s = s.substr(b, e - b + 1);
  };
  trim(line);
  std::size_t pos = 0;
  while (pos < line.size() && line[pos] >= '0' && line[pos] <= '9') ++pos;
  if (pos > 0 && pos < line.size() &&
      (line[pos] == '.' || line[pos] == ')' || line[pos] == ':')) {
    line = line.substr(pos + 1);
  }
  while (!line.empty() && (line.front() == '-' || line.front() == '*' ||
                           line.front() == '`' || line.front() == ' ' ||
                           line.front() == '\t')) {
    line.erase(line.begin());
  }
  while (!line.empty() && (line.back() == '`' || line.back() == ' ' ||
                           line.back() == '\t' || line.back() == '\r')) {
    line.pop_back();
  }
  return line;
}

}  // namespace

std::optional<std::pair<std::string, Gender>> resolve_transliteration(
    const fuzzy::NameIndex& index, std::string_view name) {
  try {
    std::vector<fuzzy::Neighbor> nearest = index.top_k_raw(name, 1);
    if (nearest.empty() || nearest[0].distance > 0.25) return std::nullopt;
    return std::make_pair(nearest[0].record.latin.value, nearest[0].record.gender);
  } catch (const EmptyQueryError&) {
    return std::nullopt;
  }
}

std::string latin_base(const GenerationContext& ctx, const fuzzy::NameIndex* index) {
  if (ctx.transliteration) return sanitize_base(*ctx.transliteration);
  if (normalization::detect_script(ctx.input_name) ==
      normalization::Script::latin) {
    return sanitize_base(ctx.input_name);
  }
  if (index != nullptr) {
    if (auto resolved = resolve_transliteration(*index, ctx.input_name)) {
      return sanitize_base(resolved->first);
    }
  }
  return {};
}

std::vector<UsernameCandidate> rule_candidates(const GenerationContext& ctx,
                                               const fuzzy::NameIndex* index,
                                               const RuleConfig& rules) {
  std::string base = latin_base(ctx, index);
  if (base.empty()) throw UnresolvableNameError(ctx.input_name);
  std::mt19937_64 rng(ctx.rng_seed);
  return apply_rules(base, ctx, rules, rng);
}

std::vector<UsernameCandidate> llm_candidates(const GenerationContext& ctx,
                                              const fuzzy::NameIndex* index,
                                              llm::LlmClient* client) {
  if (client == nullptr) return {};
  std::string base = latin_base(ctx, index);
  if (base.empty()) throw UnresolvableNameError(ctx.input_name);

  std::optional<Gender> gender = ctx.gender;
  if (!gender && index != nullptr) {
    if (auto resolved = resolve_transliteration(*index, ctx.input_name)) {
      gender = resolved->second;
    }
  }

  llm::LlmRequest request;
  request.system_prompt =
      "You generate username suggestions and reply with one username per "
      "line, nothing else.";
  std::ostringstream prompt;
  prompt << "Suggest 6 creative username variants for the name \"" << base << "\"";
  if (gender) prompt << " (a " << dataset::to_string(*gender) << " name)";
  prompt << ". Every username must be 4 to 20 characters long, contain only "
            "letters, digits and underscores, and be appropriate for "
            "professional use. One username per line.";
  request.user_prompt = prompt.str();
  request.temperature = 0.8;
  request.max_tokens = 256;

  std::string text;
  try {
    text = client->chat_complete(request).text;
  } catch (const std::exception& e) {
    log::warn("llm_candidates: generation failed (", e.what(),
              "), continuing with rule output only");
    return {};
  }

  std::vector<UsernameCandidate> candidates;
  std::set<std::string> seen;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line) && candidates.size() < 6) {
    std::string value = strip_decoration(line);
    if (!is_valid_username(value)) continue;  // regex post-validation
    if (!seen.insert(ascii_lower(value)).second) continue;
    UsernameCandidate candidate;
    candidate.value = std::move(value);
    candidate.origin = Origin::ai;
    candidates.push_back(std::move(candidate));
  }
  return candidates;
}

std::vector<UsernameCandidate> create(const GenerationContext& ctx,
                                      const fuzzy::NameIndex* index,
                                      llm::LlmClient* client,
                                      const RuleConfig& rules) {
  std::string base = latin_base(ctx, index);
  if (base.empty()) throw UnresolvableNameError(ctx.input_name);

  // Both generation pathways may run concurrently; the merge below is
  // rules-first and therefore order-deterministic.
  std::future<std::vector<UsernameCandidate>> ai_future;
  if (client != nullptr) {
    ai_future = std::async(std::launch::async,
                           [&] { return llm_candidates(ctx, index, client); });
  }

  std::mt19937_64 rng(ctx.rng_seed);
  std::vector<UsernameCandidate> merged = apply_rules(base, ctx, rules, rng);

  std::set<std::string> seen;
  for (const auto& c : merged) seen.insert(ascii_lower(c.value));

  std::size_t rule_count = merged.size();
  if (ai_future.valid()) {
    for (auto& candidate : ai_future.get()) {
      if (seen.insert(ascii_lower(candidate.value)).second) {
        merged.push_back(std::move(candidate));
      }
    }
  }

  // Land inside [10, 12] unique candidates: drop rule-origin entries first
  // when over (the ai side is the diversity channel), top up with extra
  // random-suffix variants when under.
  constexpr std::size_t kMin = 10, kMax = 12;
  if (merged.size() > kMax) {
    std::size_t ai_count = merged.size() - rule_count;
    std::size_t keep_rules = kMax > ai_count ? kMax - ai_count : 0;
    std::vector<UsernameCandidate> trimmed;
    trimmed.reserve(kMax);
    for (std::size_t i = 0; i < keep_rules; ++i) trimmed.push_back(std::move(merged[i]));
    for (std::size_t i = rule_count; i < merged.size() && trimmed.size() < kMax; ++i) {
      trimmed.push_back(std::move(merged[i]));
    }
    merged = std::move(trimmed);
  }
  const std::string concat = concat_words(split_words(base));
  int attempts = 0;
  while (merged.size() < kMin) {
    if (++attempts > 1000) {
      throw Error("username top-up exhausted the random suffix space");
    }
    std::string value = random_suffix_variant(concat, rng);
    if (!is_valid_username(value)) continue;
    if (!seen.insert(ascii_lower(value)).second) continue;
    UsernameCandidate candidate;
    candidate.value = std::move(value);
    candidate.origin = Origin::rule;
    candidate.rule_id = 9;
    merged.push_back(std::move(candidate));
  }
  return merged;
}

InMemoryUsernameStore::InMemoryUsernameStore(const std::vector<std::string>& usernames) {
  for (const auto& u : usernames) add(u);
}

void InMemoryUsernameStore::add(std::string_view username) {
  taken_.insert(ascii_lower(username));
}

bool InMemoryUsernameStore::exists(std::string_view username) const {
  return taken_.count(ascii_lower(username)) > 0;
}

FileUsernameStore::FileUsernameStore(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StoreUnavailableError("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t");
    store_.add(line.substr(b, e - b + 1));
  }
}

bool FileUsernameStore::exists(std::string_view username) const {
  return store_.exists(username);
}

std::vector<UsernameCandidate> filter_available(
    std::vector<UsernameCandidate> candidates, const UsernameStore& store,
    StoreFailurePolicy policy) {
  std::vector<UsernameCandidate> available;
  available.reserve(candidates.size());
  try {
    for (auto& candidate : candidates) {
      if (!store.exists(candidate.value)) {
        available.push_back(std::move(candidate));
      }
    }
  } catch (const StoreUnavailableError& e) {
    if (policy == StoreFailurePolicy::fail) throw;
    log::warn("filter_available: ", e.what(), ", passing candidates through");
    return candidates;
  }
  return available;
}

std::map<std::string, double> ai_rank(const std::vector<UsernameCandidate>& candidates,
                                      llm::LlmClient& client) {
  if (candidates.empty()) {
    throw std::invalid_argument("ai_rank requires at least one candidate");
  }
  llm::LlmRequest request;
  request.system_prompt =
      "You rate username candidates and reply in a strict line format.";
  std::ostringstream prompt;
  prompt << "Rate each username below on five dimensions: memorability, "
            "professional appearance, typing ease, uniqueness, overall "
            "appeal. Every score is a decimal in [0,1]. Reply with one line "
            "per username:\n"
            "  <index>. <memorability> <professional> <typing> <uniqueness> "
            "<appeal>\n\n";
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    prompt << (i + 1) << ". " << candidates[i].value << "\n";
  }
  request.user_prompt = prompt.str();
  request.temperature = 0.3;  // consistency over creativity for review
  request.max_tokens = 512;

  std::string text;
  try {
    text = client.chat_complete(request).text;
  } catch (const std::exception& e) {
    log::warn("ai_rank: scoring failed (", e.what(), "), heuristic-only ranking");
    return {};
  }

  std::map<std::string, double> scores;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string index_token;
    if (!(fields >> index_token)) continue;
    while (!index_token.empty() &&
           (index_token.back() == '.' || index_token.back() == ':' ||
            index_token.back() == ')')) {
      index_token.pop_back();
    }
    std::size_t index = 0;
    try {
      index = std::stoul(index_token);
    } catch (...) {
      continue;
    }
    if (index < 1 || index > candidates.size()) continue;

    double sum = 0.0;
    bool ok = true;
    for (int d = 0; d < 5; ++d) {
      double v;
      if (!(fields >> v) || !(v >= 0.0 && v <= 1.0)) {
        ok = false;
        break;
      }
      sum += v;
    }
    if (!ok) continue;
    const std::string& value = candidates[index - 1].value;
    scores.emplace(value, sum / 5.0);  // first assignment wins
  }
  return scores;
}

double heuristic_score(std::string_view candidate) {
  const std::size_t n = candidate.size();

  // Length: 6-15 preferred, linear falloff to zero at the 4/20 bounds.
  double length_score;
  if (n >= 6 && n <= 15) {
    length_score = 1.0;
  } else if (n >= 4 && n < 6) {
    length_score = static_cast<double>(n - 4) / 2.0;
  } else if (n > 15 && n <= 20) {
    length_score = static_cast<double>(20 - n) / 5.0;
  } else {
    length_score = 0.0;
  }

  // Digits: none is best; one or two trailing digits are acceptable.
  std::size_t digits = 0;
  for (char c : candidate) digits += (c >= '0' && c <= '9') ? 1 : 0;
  std::size_t trailing = 0;
  for (auto it = candidate.rbegin(); it != candidate.rend() && *it >= '0' && *it <= '9'; ++it) {
    ++trailing;
  }
  double digit_score;
  if (digits == 0) {
    digit_score = 1.0;
  } else if (digits == trailing && digits <= 2) {
    digit_score = 0.6;
  } else {
    digit_score = 0.2;
  }

  // Readability: penalize underscore runs, edge underscores, leading digits.
  double readability = 1.0;
  if (candidate.find("__") != std::string_view::npos) readability -= 0.4;
  if (!candidate.empty() && (candidate.front() == '_' || candidate.back() == '_')) {
    readability -= 0.3;
  }
  if (!candidate.empty() && candidate.front() >= '0' && candidate.front() <= '9') {
    readability -= 0.3;
  }
  readability = std::max(0.0, readability);

  double score = 0.4 * length_score + 0.3 * digit_score + 0.3 * readability;
  return std::clamp(score, 0.0, 1.0);
}

std::vector<UsernameCandidate> final_rank(std::vector<UsernameCandidate> candidates,
                                          std::size_t k) {
  for (auto& candidate : candidates) {
    candidate.final_score = candidate.ai_score
                                ? 0.6 * *candidate.ai_score +
                                      0.4 * candidate.heuristic_score
                                : candidate.heuristic_score;
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const UsernameCandidate& a, const UsernameCandidate& b) {
              if (a.final_score != b.final_score) {
                return a.final_score > b.final_score;
              }
              return a.value < b.value;
            });
  if (candidates.size() > k) candidates.resize(k);
  return candidates;
}

std::vector<UsernameCandidate> suggest(const GenerationContext& ctx,
                                       const fuzzy::NameIndex* index,
                                       llm::LlmClient* client,
                                       const UsernameStore* store,
                                       const SuggestOptions& options) {
  std::vector<UsernameCandidate> candidates = create(ctx, index, client, options.rules);

  // Reviewer pipeline: availability, ai scoring, heuristics, final ranking.
  if (store != nullptr) {
    candidates = filter_available(std::move(candidates), *store, options.store_policy);
  }
  if (!candidates.empty() && client != nullptr) {
    std::map<std::string, double> scores = ai_rank(candidates, *client);
    for (auto& candidate : candidates) {
      auto it = scores.find(candidate.value);
      if (it != scores.end()) candidate.ai_score = it->second;
    }
  }
  for (auto& candidate : candidates) {
    candidate.heuristic_score = heuristic_score(candidate.value);
  }
  return final_rank(std::move(candidates), options.k);
}

}  // namespace namekit::nominalist
