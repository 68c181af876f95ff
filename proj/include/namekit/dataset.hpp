#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "namekit/normalization.hpp"

namespace namekit::dataset {

enum class Gender : std::uint8_t { female = 0, male = 1 };

std::string_view to_string(Gender g);
// Accepts male/female/m/f, case-insensitive. Throws FormatError otherwise.
Gender gender_from_string(std::string_view s);

// One dataset row: a Persian name, its English transliteration and the
// commonly associated gender. Comparison order (persian, latin, gender) is
// the canonical sort order used everywhere; female sorts before male.
struct NameRecord {
  normalization::NormalizedText persian;
  normalization::NormalizedText latin;
  Gender gender = Gender::female;

  auto operator<=>(const NameRecord&) const = default;
};

// Reason a transliteration field is invalid, or empty string when valid.
// The accepted shape is ^[a-z][a-z '\-]*$ after normalization.
bool latin_field_valid(std::string_view latin);

enum class Format { csv, tsv, jsonl };
Format format_from_path(std::string_view path);

struct LoadOptions {
  Format format = Format::csv;
  // In strict mode the first bad row throws ParseError; otherwise bad rows
  // are collected as issues and skipped.
  bool strict = false;
  // Column names used when the file has a header row. "english" is always
  // accepted as an alias for the latin column.
  std::string persian_column = "persian";
  std::string latin_column = "latin";
  std::string gender_column = "gender";
  const normalization::VariantTable* variant_table = nullptr;  // null: builtin
};

struct ParseIssue {
  std::size_t line = 0;
  std::string reason;
};

struct LoadResult {
  std::vector<NameRecord> records;
  std::vector<ParseIssue> issues;
};

// Parses a delimited or line-delimited JSON file into normalized records.
// Throws FileNotFoundError; EncodingError and per-row problems surface as
// issues (or ParseError in strict mode).
LoadResult load_records(const std::string& path, const LoadOptions& options = {});

struct MergeResult {
  std::vector<NameRecord> records;  // sorted, each triple exactly once
  // Records whose (persian, latin) pair appears with more than one gender.
  // They stay in `records`; ambiguous names are legitimate.
  std::vector<NameRecord> gender_conflicts;
};

MergeResult merge_and_dedupe(const std::vector<std::vector<NameRecord>>& collections);

struct CharCount {
  std::string character;  // UTF-8 of one codepoint
  std::uint64_t count = 0;

  bool operator==(const CharCount&) const = default;
};

struct CharFrequency {
  std::vector<CharCount> persian;
  std::vector<CharCount> latin;
};

// Length statistics count every Unicode scalar value of the normalized
// field (ZWNJ and internal spaces included). Character frequencies count
// every occurrence of every codepoint except whitespace and ZWNJ, sorted by
// descending count with ties broken by ascending codepoint.
struct DatasetStats {
  std::uint64_t total = 0;
  std::uint64_t male_total = 0;
  double male_fraction = 0.0;
  std::map<std::uint64_t, std::uint64_t> persian_length_histogram;
  std::map<std::uint64_t, std::uint64_t> latin_length_histogram;
  double persian_length_mean = 0.0;
  double latin_length_mean = 0.0;
  CharFrequency male_chars;
  CharFrequency female_chars;
};

// Throws EmptyDatasetError on an empty collection.
DatasetStats compute_stats(const std::vector<NameRecord>& records);

std::vector<CharCount> top_n(const std::vector<CharCount>& counts, std::size_t n);

}  // namespace namekit::dataset
