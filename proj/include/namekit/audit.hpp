#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "namekit/dataset.hpp"
#include "namekit/llm_client.hpp"

namespace namekit::dataset {

struct AuditFlag {
  enum class Source { llm, rule };

  NameRecord record;
  std::string reason;
  Source source = Source::llm;
};

struct AuditOptions {
  std::size_t batch_size = 20;   // >= 1
  std::size_t parallelism = 1;   // concurrent batches; merge stays input-ordered
  std::string model;             // forwarded to the llm request when non-empty
  double temperature = 0.0;
  std::size_t max_tokens = 1024;
};

struct AuditResult {
  std::vector<AuditFlag> flags;
  // Set when the llm became unavailable and auditing stopped early; flags
  // collected up to that point are still returned.
  bool llm_unavailable = false;
  std::vector<std::string> warnings;
};

// Asks the llm for a per-record verdict ("OK" or "FLAG: <reason>", one line
// per record) and returns the flagged records. Never mutates the dataset;
// review of flagged entries is a separate, human step. A batch whose
// response cannot be parsed is retried once, then skipped with a rule-source
// flag noting the skip. Deterministic given a deterministic llm.
AuditResult audit_with_llm(const std::vector<NameRecord>& records,
                           llm::LlmClient& client,
                           const AuditOptions& options = {});

// The exact prompt sent for one batch; exposed for tests and prompt review.
llm::LlmRequest audit_request(const std::vector<NameRecord>& batch,
                              const AuditOptions& options);

}  // namespace namekit::dataset
