#include "namekit/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "namekit/errors.hpp"
#include "namekit/utf8.hpp"

namespace namekit::dataset {

namespace {

using normalization::NormalizedText;
using normalization::VariantTable;

constexpr char32_t kZwnj = 0x200C;

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Splits one delimited line. Supports double-quoted fields with "" escapes;
// embedded newlines are not supported (the loader is line-oriented).
std::vector<std::string> split_delimited(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

struct RawRow {
  std::string persian, latin, gender;
};

class RowSink {
 public:
  RowSink(const LoadOptions& options, LoadResult& out)
      : options_(options),
        table_(options.variant_table ? *options.variant_table
                                     : VariantTable::builtin()),
        out_(out) {}

  void issue(std::size_t line, std::string reason) {
    if (options_.strict) throw ParseError(line, reason);
    out_.issues.push_back({line, std::move(reason)});
  }

  void row(std::size_t line, const RawRow& raw) {
    if (trim(raw.persian).empty()) {
      issue(line, "empty persian name");
      return;
    }
    if (trim(raw.latin).empty()) {
      issue(line, "empty transliteration");
      return;
    }
    Gender gender;
    try {
      gender = gender_from_string(trim(raw.gender));
    } catch (const FormatError& e) {
      issue(line, e.what());
      return;
    }
    NormalizedText persian, latin;
    try {
      persian = normalization::normalize_persian(raw.persian, table_);
      latin = normalization::normalize_latin(raw.latin);
    } catch (const EncodingError& e) {
      issue(line, e.what());
      return;
    }
    if (persian.empty()) {
      issue(line, "empty persian name");
      return;
    }
    if (!latin_field_valid(latin.value)) {
      issue(line, "transliteration not in [a-z '-] shape: " + latin.value);
      return;
    }
    out_.records.push_back({std::move(persian), std::move(latin), gender});
  }

 private:
  const LoadOptions& options_;
  const VariantTable& table_;
  LoadResult& out_;
};

bool column_matches(const std::string& header, const std::string& wanted,
                    bool latin_alias) {
  std::string h = ascii_lower(trim(header));
  if (h == ascii_lower(wanted)) return true;
  return latin_alias && h == "english";
}

void load_delimited(std::ifstream& in, char delim, const LoadOptions& options,
                    LoadResult& out) {
  RowSink sink(options, out);
  std::string line;
  std::size_t line_no = 0;
  int col_persian = 0, col_latin = 1, col_gender = 2;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.size() >= 3 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
      line = line.substr(3);
    }
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_delimited(line, delim);
    if (first) {
      first = false;
      // Header detection: the gender column name plus at least one name
      // column must be present.
      int hp = -1, hl = -1, hg = -1;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (column_matches(fields[i], options.persian_column, false)) hp = static_cast<int>(i);
        if (column_matches(fields[i], options.latin_column, true)) hl = static_cast<int>(i);
        if (column_matches(fields[i], options.gender_column, false)) hg = static_cast<int>(i);
      }
      if (hg >= 0 && (hp >= 0 || hl >= 0)) {
        if (hp < 0 || hl < 0) {
          throw ParseError(line_no, "header is missing a name column");
        }
        col_persian = hp;
        col_latin = hl;
        col_gender = hg;
        continue;
      }
    }
    std::size_t needed = static_cast<std::size_t>(
        std::max({col_persian, col_latin, col_gender}) + 1);
    if (fields.size() < needed) {
      sink.issue(line_no, "expected at least " + std::to_string(needed) +
                              " fields, got " + std::to_string(fields.size()));
      continue;
    }
    sink.row(line_no, {fields[static_cast<std::size_t>(col_persian)],
                       fields[static_cast<std::size_t>(col_latin)],
                       fields[static_cast<std::size_t>(col_gender)]});
  }
}

void load_jsonl(std::ifstream& in, const LoadOptions& options, LoadResult& out) {
  RowSink sink(options, out);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line = line.substr(3);
    if (trim(line).empty()) continue;
    nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      sink.issue(line_no, "invalid JSON object");
      continue;
    }
    auto field = [&](const std::string& key, bool latin_alias) -> std::string {
      if (doc.contains(key) && doc[key].is_string()) return doc[key].get<std::string>();
      if (latin_alias && doc.contains("english") && doc["english"].is_string()) {
        return doc["english"].get<std::string>();
      }
      return {};
    };
    sink.row(line_no, {field(options.persian_column, false),
                       field(options.latin_column, true),
                       field(options.gender_column, false)});
  }
}

}  // namespace

std::string_view to_string(Gender g) {
  return g == Gender::male ? "male" : "female";
}

Gender gender_from_string(std::string_view s) {
  std::string v = ascii_lower(trim(s));
  if (v == "male" || v == "m") return Gender::male;
  if (v == "female" || v == "f") return Gender::female;
  throw FormatError("invalid gender value: " + std::string(s));
}

bool latin_field_valid(std::string_view latin) {
  if (latin.empty()) return false;
  char first = latin[0];
  if (first < 'a' || first > 'z') return false;
  for (char c : latin) {
    bool ok = (c >= 'a' && c <= 'z') || c == ' ' || c == '\'' || c == '-';
    if (!ok) return false;
  }
  return true;
}

Format format_from_path(std::string_view path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() &&
           path.substr(path.size() - suffix.size()) == suffix;
  };
  if (ends_with(".tsv")) return Format::tsv;
  if (ends_with(".jsonl") || ends_with(".ndjson")) return Format::jsonl;
  return Format::csv;
}

LoadResult load_records(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError(path);
  LoadResult out;
  switch (options.format) {
    case Format::csv: load_delimited(in, ',', options, out); break;
    case Format::tsv: load_delimited(in, '\t', options, out); break;
    case Format::jsonl: load_jsonl(in, options, out); break;
  }
  return out;
}

MergeResult merge_and_dedupe(const std::vector<std::vector<NameRecord>>& collections) {
  std::set<NameRecord> unique;
  for (const auto& collection : collections) {
    unique.insert(collection.begin(), collection.end());
  }
  MergeResult result;
  result.records.assign(unique.begin(), unique.end());
  // A (persian, latin) pair with both genders: the set is sorted with
  // female before male, so conflicting records are adjacent.
  for (std::size_t i = 0; i + 1 < result.records.size(); ++i) {
    const auto& a = result.records[i];
    const auto& b = result.records[i + 1];
    if (a.persian == b.persian && a.latin == b.latin && a.gender != b.gender) {
      result.gender_conflicts.push_back(a);
      result.gender_conflicts.push_back(b);
    }
  }
  return result;
}

DatasetStats compute_stats(const std::vector<NameRecord>& records) {
  if (records.empty()) throw EmptyDatasetError();
  DatasetStats stats;
  stats.total = records.size();

  std::uint64_t persian_len_sum = 0, latin_len_sum = 0;
  // [gender][script] -> codepoint -> count
  std::map<char32_t, std::uint64_t> counts[2][2];

  for (const auto& record : records) {
    if (record.gender == Gender::male) ++stats.male_total;
    const int g = record.gender == Gender::male ? 1 : 0;

    std::u32string persian = utf8::decode(record.persian.value);
    std::u32string latin = utf8::decode(record.latin.value);
    persian_len_sum += persian.size();
    latin_len_sum += latin.size();
    ++stats.persian_length_histogram[persian.size()];
    ++stats.latin_length_histogram[latin.size()];

    for (char32_t cp : persian) {
      if (cp != U' ' && cp != kZwnj) ++counts[g][0][cp];
    }
    for (char32_t cp : latin) {
      if (cp != U' ' && cp != kZwnj) ++counts[g][1][cp];
    }
  }

  stats.male_fraction =
      static_cast<double>(stats.male_total) / static_cast<double>(stats.total);
  stats.persian_length_mean =
      static_cast<double>(persian_len_sum) / static_cast<double>(stats.total);
  stats.latin_length_mean =
      static_cast<double>(latin_len_sum) / static_cast<double>(stats.total);

  auto to_sorted = [](const std::map<char32_t, std::uint64_t>& m) {
    std::vector<std::pair<char32_t, std::uint64_t>> items(m.begin(), m.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    std::vector<CharCount> out;
    out.reserve(items.size());
    for (const auto& [cp, count] : items) {
      out.push_back({utf8::encode(cp), count});
    }
    return out;
  };
  stats.female_chars.persian = to_sorted(counts[0][0]);
  stats.female_chars.latin = to_sorted(counts[0][1]);
  stats.male_chars.persian = to_sorted(counts[1][0]);
  stats.male_chars.latin = to_sorted(counts[1][1]);
  return stats;
}

std::vector<CharCount> top_n(const std::vector<CharCount>& counts, std::size_t n) {
  if (counts.size() <= n) return counts;
  return {counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(n)};
}

}  // namespace namekit::dataset
