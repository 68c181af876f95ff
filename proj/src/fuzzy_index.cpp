#include "namekit/fuzzy_index.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>

#include "namekit/errors.hpp"
#include "namekit/log.hpp"
#include "namekit/utf8.hpp"

namespace namekit::fuzzy {

using dataset::NameRecord;
using normalization::NormalizedText;

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  // Shared prefix and suffix never contribute edits.
  while (!a.empty() && !b.empty() && a.front() == b.front()) {
    a.remove_prefix(1);
    b.remove_prefix(1);
  }
  while (!a.empty() && !b.empty() && a.back() == b.back()) {
    a.remove_suffix(1);
    b.remove_suffix(1);
  }
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  if (a.size() > b.size()) std::swap(a, b);

  // Single-row dynamic programming: row[j] holds the distance between the
  // current prefix of b and a[0..j).
  thread_local std::vector<std::size_t> row;
  row.resize(a.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});

  for (std::size_t i = 1; i <= b.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= a.size(); ++j) {
      std::size_t previous = row[j];
      std::size_t substitution = diagonal + (a[j - 1] == b[i - 1] ? 0 : 1);
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, substitution});
      diagonal = previous;
    }
  }
  return row[a.size()];
}

std::size_t levenshtein(const NormalizedText& a, const NormalizedText& b) {
  return levenshtein(utf8::decode(a.value), utf8::decode(b.value));
}

double normalized_levenshtein(std::u32string_view a, std::u32string_view b) {
  std::size_t longer = std::max(a.size(), b.size());
  if (longer == 0) return 0.0;
  return static_cast<double>(levenshtein(a, b)) / static_cast<double>(longer);
}

double normalized_levenshtein(const NormalizedText& a, const NormalizedText& b) {
  return normalized_levenshtein(utf8::decode(a.value), utf8::decode(b.value));
}

void NameIndex::Tree::insert(std::u32string key, std::uint32_t record_id) {
  max_key_length = std::max(max_key_length, key.size());
  if (!root) {
    root = std::make_unique<Node>();
    root->key = std::move(key);
    root->record_ids.push_back(record_id);
    return;
  }
  Node* current = root.get();
  while (true) {
    std::size_t d = levenshtein(current->key, key);
    if (d == 0) {
      current->record_ids.push_back(record_id);
      return;
    }
    auto it = current->children.find(d);
    if (it == current->children.end()) {
      auto node = std::make_unique<Node>();
      node->key = std::move(key);
      node->record_ids.push_back(record_id);
      current->children.emplace(d, std::move(node));
      return;
    }
    current = it->second.get();
  }
}

NameIndex NameIndex::build(std::vector<NameRecord> records) {
  if (records.empty()) throw EmptyDatasetError();
  for (const auto& record : records) {
    if (record.persian.empty() || record.latin.empty()) {
      throw FormatError("record with an empty name field cannot be indexed");
    }
  }
  NameIndex index;
  index.records_ = std::move(records);
  index.build_trees();
  return index;
}

void NameIndex::build_trees() {
  // Group record ids by key, then insert keys in sorted order so the tree
  // shape (and with it every traversal) is deterministic.
  std::map<std::u32string, std::vector<std::uint32_t>> persian_keys, latin_keys;
  for (std::uint32_t id = 0; id < records_.size(); ++id) {
    persian_keys[utf8::decode(records_[id].persian.value)].push_back(id);
    latin_keys[utf8::decode(records_[id].latin.value)].push_back(id);
  }
  for (auto& [key, ids] : persian_keys) {
    for (std::uint32_t id : ids) persian_.insert(key, id);
  }
  for (auto& [key, ids] : latin_keys) {
    for (std::uint32_t id : ids) latin_.insert(key, id);
  }
}

const NameIndex::Tree& NameIndex::tree_for(QueryScript script,
                                           std::u32string_view query) const {
  switch (script) {
    case QueryScript::persian: return persian_;
    case QueryScript::latin: return latin_;
    case QueryScript::auto_detect: break;
  }
  return normalization::detect_script(utf8::encode(query)) ==
                 normalization::Script::persian
             ? persian_
             : latin_;
}

std::vector<Neighbor> NameIndex::top_k(const NormalizedText& query,
                                       std::size_t k,
                                       QueryScript script) const {
  if (k == 0 || k % 2 == 0) throw EvenKError(k);
  std::u32string q = utf8::decode(query.value);
  if (q.empty()) throw EmptyQueryError();

  std::size_t k_eff = std::min<std::size_t>(k, records_.size());
  if (k_eff < k) {
    log::warn("top_k: k=", k, " exceeds index size ", records_.size(),
              ", clamped");
  }

  const Tree& tree = tree_for(script, q);
  const bool persian_space = &tree == &persian_;
  auto matched_key = [&](std::uint32_t id) -> const std::string& {
    return persian_space ? records_[id].persian.value : records_[id].latin.value;
  };
  auto other_key = [&](std::uint32_t id) -> const std::string& {
    return persian_space ? records_[id].latin.value : records_[id].persian.value;
  };

  struct Candidate {
    std::size_t raw;
    std::size_t denom;
    std::uint32_t id;
  };
  // Result order: normalized distance (compared as exact rationals), then
  // matched key, then gender (female first), then the other-script key.
  // UTF-8 byte order equals codepoint order, so keys compare as strings.
  auto cmp = [&](const Candidate& a, const Candidate& b) {
    auto lhs = static_cast<unsigned long long>(a.raw) * b.denom;
    auto rhs = static_cast<unsigned long long>(b.raw) * a.denom;
    if (lhs != rhs) return lhs < rhs;
    const std::string& ka = matched_key(a.id);
    const std::string& kb = matched_key(b.id);
    if (ka != kb) return ka < kb;
    if (records_[a.id].gender != records_[b.id].gender) {
      return records_[a.id].gender < records_[b.id].gender;
    }
    return other_key(a.id) < other_key(b.id);
  };
  std::set<Candidate, decltype(cmp)> best(cmp);

  // Any unseen key at raw distance >= L has normalized distance >= L / M.
  const std::size_t M = std::max(q.size(), tree.max_key_length);

  auto viable = [&](std::size_t raw_lower_bound) {
    if (best.size() < k_eff) return true;
    const Candidate& worst = *best.rbegin();
    // Explore while L / M <= worst; equal-distance candidates can still win
    // on the lexicographic tie-break.
    return static_cast<unsigned long long>(raw_lower_bound) * worst.denom <=
           static_cast<unsigned long long>(worst.raw) * M;
  };

  struct Visit {
    const Node* node;
    std::size_t raw_lower_bound;
  };
  std::vector<Visit> stack;
  if (tree.root) stack.push_back({tree.root.get(), 0});
  while (!stack.empty()) {
    Visit visit = stack.back();
    stack.pop_back();
    // The bound may have tightened since this subtree was scheduled.
    if (!viable(visit.raw_lower_bound)) continue;

    const Node* node = visit.node;
    std::size_t d = levenshtein(q, node->key);
    std::size_t denom = std::max(q.size(), node->key.size());
    for (std::uint32_t id : node->record_ids) {
      Candidate candidate{d, denom, id};
      if (best.size() < k_eff) {
        best.insert(candidate);
      } else if (cmp(candidate, *best.rbegin())) {
        best.erase(std::prev(best.end()));
        best.insert(candidate);
      }
    }
    for (const auto& [edge, child] : node->children) {
      std::size_t lower = edge > d ? edge - d : d - edge;
      if (viable(lower)) stack.push_back({child.get(), lower});
    }
  }

  std::vector<Neighbor> neighbors;
  neighbors.reserve(best.size());
  for (const Candidate& c : best) {
    neighbors.push_back({records_[c.id],
                         static_cast<double>(c.raw) / static_cast<double>(c.denom),
                         c.raw, c.denom});
  }
  return neighbors;
}

std::vector<Neighbor> NameIndex::top_k_raw(std::string_view raw_query,
                                           std::size_t k,
                                           QueryScript script) const {
  normalization::Script resolved;
  switch (script) {
    case QueryScript::persian: resolved = normalization::Script::persian; break;
    case QueryScript::latin: resolved = normalization::Script::latin; break;
    case QueryScript::auto_detect:
      resolved = normalization::detect_script(raw_query);
      break;
  }
  NormalizedText normalized = resolved == normalization::Script::persian
                                  ? normalization::normalize_persian(raw_query)
                                  : normalization::normalize_latin(raw_query);
  return top_k(normalized, k,
               resolved == normalization::Script::persian ? QueryScript::persian
                                                          : QueryScript::latin);
}

namespace {

constexpr char kMagic[4] = {'N', 'K', 'I', 'X'};
constexpr std::uint8_t kFormatVersion = 1;

void put_u32(std::ofstream& out, std::uint32_t v) {
  char bytes[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                   static_cast<char>((v >> 16) & 0xFF),
                   static_cast<char>((v >> 24) & 0xFF)};
  out.write(bytes, 4);
}

void put_u64(std::ofstream& out, std::uint64_t v) {
  put_u32(out, static_cast<std::uint32_t>(v & 0xFFFFFFFFu));
  put_u32(out, static_cast<std::uint32_t>(v >> 32));
}

std::uint32_t get_u32(std::ifstream& in) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  if (!in) throw FormatError("truncated index file");
  return static_cast<std::uint32_t>(bytes[0]) |
         (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) |
         (static_cast<std::uint32_t>(bytes[3]) << 24);
}

std::uint64_t get_u64(std::ifstream& in) {
  std::uint64_t lo = get_u32(in);
  std::uint64_t hi = get_u32(in);
  return lo | (hi << 32);
}

std::string get_string(std::ifstream& in) {
  std::uint32_t len = get_u32(in);
  std::string s(len, '\0');
  in.read(s.data(), static_cast<std::streamsize>(len));
  if (!in) throw FormatError("truncated index file");
  return s;
}

}  // namespace

void NameIndex::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open index file for writing: " + path);
  out.write(kMagic, 4);
  out.put(static_cast<char>(kFormatVersion));
  put_u64(out, records_.size());
  for (const auto& record : records_) {
    put_u32(out, static_cast<std::uint32_t>(record.persian.value.size()));
    out.write(record.persian.value.data(),
              static_cast<std::streamsize>(record.persian.value.size()));
    put_u32(out, static_cast<std::uint32_t>(record.latin.value.size()));
    out.write(record.latin.value.data(),
              static_cast<std::streamsize>(record.latin.value.size()));
    out.put(record.gender == dataset::Gender::male ? '\1' : '\0');
  }
  if (!out) throw Error("failed writing index file: " + path);
}

NameIndex NameIndex::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError(path);
  char magic[4];
  in.read(magic, 4);
  if (!in || !std::equal(magic, magic + 4, kMagic)) {
    throw FormatError("not a namekit index file: " + path);
  }
  int version = in.get();
  if (version != kFormatVersion) {
    throw FormatError("unsupported index format version " +
                      std::to_string(version) + " (expected " +
                      std::to_string(kFormatVersion) + ")");
  }
  std::uint64_t count = get_u64(in);
  std::vector<NameRecord> records;
  records.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    NameRecord record;
    record.persian.value = get_string(in);
    record.latin.value = get_string(in);
    int gender = in.get();
    if (gender != 0 && gender != 1) throw FormatError("invalid gender byte");
    record.gender = gender == 1 ? dataset::Gender::male : dataset::Gender::female;
    if (!utf8::is_valid(record.persian.value) ||
        !utf8::is_valid(record.latin.value)) {
      throw FormatError("index file contains invalid UTF-8");
    }
    records.push_back(std::move(record));
  }
  return build(std::move(records));
}

}  // namespace namekit::fuzzy
