#include "namekit/audit.hpp"

#include <algorithm>
#include <cctype>
#include <future>
#include <optional>
#include <sstream>
#include <string_view>

#include "namekit/errors.hpp"
#include "namekit/log.hpp"

namespace namekit::dataset {

namespace {

struct Verdict {
  bool flagged = false;
  std::string reason;
};

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Accepts "OK" / "FLAG: reason", optionally prefixed with the 1-based index
// as "3:", "3." or "3)". Returns nullopt on anything else.
std::optional<Verdict> parse_verdict_line(std::string line, std::size_t expect_index) {
  line = trim(line);
  if (line.empty()) return std::nullopt;
  std::size_t pos = 0;
  while (pos < line.size() && line[pos] >= '0' && line[pos] <= '9') ++pos;
  if (pos > 0 && pos < line.size() &&
      (line[pos] == ':' || line[pos] == '.' || line[pos] == ')')) {
    std::size_t index = std::stoul(line.substr(0, pos));
    if (index != expect_index) return std::nullopt;
    line = trim(line.substr(pos + 1));
  }
  if (line == "OK" || line == "ok" || line == "Ok") return Verdict{};
  constexpr std::string_view kFlag = "FLAG:";
  if (line.size() >= kFlag.size() &&
      std::equal(kFlag.begin(), kFlag.end(), line.begin(), [](char a, char b) {
        return a == std::toupper(static_cast<unsigned char>(b));
      })) {
    std::string reason = trim(line.substr(kFlag.size()));
    if (reason.empty()) reason = "unspecified";
    return Verdict{true, reason};
  }
  return std::nullopt;
}

std::vector<Verdict> parse_batch_response(const std::string& text,
                                          std::size_t batch_size) {
  std::vector<Verdict> verdicts;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto v = parse_verdict_line(line, verdicts.size() + 1);
    if (!v) throw MalformedResponseError("unparseable verdict line: " + line);
    verdicts.push_back(std::move(*v));
    if (verdicts.size() > batch_size) {
      throw MalformedResponseError("more verdict lines than records");
    }
  }
  if (verdicts.size() != batch_size) {
    throw MalformedResponseError(
        "expected " + std::to_string(batch_size) + " verdicts, got " +
        std::to_string(verdicts.size()));
  }
  return verdicts;
}

struct BatchOutcome {
  std::vector<AuditFlag> flags;
  std::vector<std::string> warnings;
  bool unavailable = false;
};

BatchOutcome run_batch(const std::vector<NameRecord>& records,
                       std::size_t begin, std::size_t end,
                       llm::LlmClient& client, const AuditOptions& options) {
  std::vector<NameRecord> batch(records.begin() + static_cast<std::ptrdiff_t>(begin),
                                records.begin() + static_cast<std::ptrdiff_t>(end));
  BatchOutcome outcome;
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      llm::LlmResponse response =
          client.chat_complete(audit_request(batch, options));
      std::vector<Verdict> verdicts = parse_batch_response(response.text, batch.size());
      for (std::size_t i = 0; i < verdicts.size(); ++i) {
        if (verdicts[i].flagged) {
          outcome.flags.push_back(
              {batch[i], verdicts[i].reason, AuditFlag::Source::llm});
        }
      }
      return outcome;
    } catch (const MalformedResponseError& e) {
      if (attempt == 0) continue;  // one retry per batch
      outcome.flags.push_back(
          {batch.front(),
           "audit skipped for records " + std::to_string(begin + 1) + ".." +
               std::to_string(end) + " after retry: " + e.what(),
           AuditFlag::Source::rule});
      return outcome;
    } catch (const LlmUnavailableError& e) {
      outcome.unavailable = true;
      outcome.warnings.push_back(e.what());
      return outcome;
    }
  }
  return outcome;
}

}  // namespace

llm::LlmRequest audit_request(const std::vector<NameRecord>& batch,
                              const AuditOptions& options) {
  std::ostringstream prompt;
  prompt << "Audit the following Persian name records for transliteration "
            "mistakes or misspellings.\n"
            "Reply with exactly one line per record, in order, and nothing "
            "else. Each line must be either\n"
            "  <index>: OK\n"
            "or\n"
            "  <index>: FLAG: <short reason>\n\n";
  for (std::size_t i = 0; i < batch.size(); ++i) {
    prompt << (i + 1) << ". persian=" << batch[i].persian.value
           << " latin=" << batch[i].latin.value
           << " gender=" << to_string(batch[i].gender) << "\n";
  }
  llm::LlmRequest request;
  request.system_prompt =
      "You review Persian name/transliteration records and answer in a strict "
      "line-oriented format.";
  request.user_prompt = prompt.str();
  request.temperature = options.temperature;
  request.max_tokens = options.max_tokens;
  request.model = options.model;
  return request;
}

AuditResult audit_with_llm(const std::vector<NameRecord>& records,
                           llm::LlmClient& client, const AuditOptions& options) {
  if (options.batch_size < 1) {
    throw std::invalid_argument("audit batch_size must be >= 1");
  }
  AuditResult result;
  if (records.empty()) return result;

  const std::size_t batches =
      (records.size() + options.batch_size - 1) / options.batch_size;
  const std::size_t parallelism = std::max<std::size_t>(1, options.parallelism);

  std::size_t next = 0;
  while (next < batches && !result.llm_unavailable) {
    std::size_t window = std::min(parallelism, batches - next);
    std::vector<std::future<BatchOutcome>> futures;
    futures.reserve(window);
    for (std::size_t w = 0; w < window; ++w) {
      std::size_t begin = (next + w) * options.batch_size;
      std::size_t end = std::min(records.size(), begin + options.batch_size);
      futures.push_back(std::async(std::launch::async, [&, begin, end] {
        return run_batch(records, begin, end, client, options);
      }));
    }
    // Merge in input order regardless of completion order.
    for (auto& future : futures) {
      BatchOutcome outcome = future.get();
      if (outcome.unavailable && !result.llm_unavailable) {
        result.llm_unavailable = true;
        log::warn("audit: llm unavailable, returning partial results");
      }
      result.flags.insert(result.flags.end(), outcome.flags.begin(),
                          outcome.flags.end());
      result.warnings.insert(result.warnings.end(), outcome.warnings.begin(),
                             outcome.warnings.end());
    }
    next += window;
  }
  if (result.llm_unavailable) {
    result.warnings.push_back("audit incomplete: llm unavailable");
  }
  return result;
}

}  // namespace namekit::dataset
