#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace namekit::normalization {

// A canonicalized name string: composed Perso-Arabic variant characters,
// trimmed, internal whitespace runs collapsed to a single space. Construct
// through normalize_persian / normalize_latin; the raw constructor is for
// values already known to be canonical (e.g. loaded from an index file).
struct NormalizedText {
  std::string value;  // UTF-8

  NormalizedText() = default;
  explicit NormalizedText(std::string v) : value(std::move(v)) {}

  bool empty() const { return value.empty(); }
  auto operator<=>(const NormalizedText&) const = default;
};

// Single-codepoint rewrite table: maps a variant codepoint to its canonical
// form, or to nothing (removal, e.g. tatweel and harakat). The built-in
// table covers yeh/kaf/heh/alef variants, both Arabic digit blocks and the
// combining diacritics; data/variant_map.tsv ships the same rules so they
// can be extended without recompiling.
class VariantTable {
 public:
  static const VariantTable& builtin();

  // Parses a two-column delimited file (tab/comma/space): source codepoint,
  // target codepoint, both written as U+XXXX (bare hex also accepted). An
  // empty target column removes the character. Lines starting with '#' are
  // comments. Throws FileNotFoundError / ParseError.
  static VariantTable load_file(const std::string& path);

  void set(char32_t source, std::optional<char32_t> target);

  // Returns nullptr when the codepoint is not mapped. Otherwise points to
  // the target: an engaged optional replaces, an empty one removes.
  const std::optional<char32_t>* find(char32_t source) const;

  std::size_t size() const { return map_.size(); }

 private:
  // value = target codepoint; empty optional = remove the character.
  std::unordered_map<char32_t, std::optional<char32_t>> map_;
};

enum class Script { persian, latin };

// Detects the dominant script of a string by Unicode block; defaults to
// latin when no Arabic-block characters are present.
Script detect_script(std::string_view text);

// Canonicalizes Perso-Arabic text: composes decomposed alef/waw/yeh+hamza
// and alef+madda sequences, applies the variant table, removes leftover
// combining diacritics and tatweel, maps both Arabic digit blocks to ASCII,
// and tidies whitespace. ZWNJ (U+200C) is preserved. Total and idempotent.
NormalizedText normalize_persian(std::string_view text);
NormalizedText normalize_persian(std::string_view text,
                                 const VariantTable& table);

// Lowercases ASCII letters and tidies whitespace. Total and idempotent.
NormalizedText normalize_latin(std::string_view text);

// Dispatches on detect_script.
NormalizedText normalize_auto(std::string_view text);
NormalizedText normalize_auto(std::string_view text, const VariantTable& table);

}  // namespace namekit::normalization
