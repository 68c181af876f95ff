#include "namekit/normalization.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <vector>

#include "namekit/errors.hpp"
#include "namekit/utf8.hpp"

namespace namekit::normalization {

namespace {

constexpr char32_t kZwnj = 0x200C;

bool is_space(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
         cp == U'\f' || cp == U'\v' || cp == 0x00A0 || cp == 0x3000;
}

bool is_arabic_block(char32_t cp) {
  return (cp >= 0x0600 && cp <= 0x06FF) || (cp >= 0x0750 && cp <= 0x077F) ||
         (cp >= 0x08A0 && cp <= 0x08FF) || (cp >= 0xFB50 && cp <= 0xFDFF) ||
         (cp >= 0xFE70 && cp <= 0xFEFF);
}

// Canonical composition pairs of the Arabic block: base + combining mark ->
// precomposed letter. Applied before the variant table so that decomposed
// hamza/madda carriers compose rather than losing their mark.
struct ComposePair {
  char32_t base, mark, composed;
};
constexpr std::array<ComposePair, 8> kArabicCompositions{{
    {0x0627, 0x0653, 0x0622},  // alef + madda       -> alef with madda
    {0x0627, 0x0654, 0x0623},  // alef + hamza above -> alef with hamza above
    {0x0648, 0x0654, 0x0624},  // waw  + hamza above -> waw with hamza above
    {0x0627, 0x0655, 0x0625},  // alef + hamza below -> alef with hamza below
    {0x064A, 0x0654, 0x0626},  // yeh  + hamza above -> yeh with hamza above
    {0x06D5, 0x0654, 0x06C0},  // ae   + hamza above -> heh with yeh above
    {0x06C1, 0x0654, 0x06C2},  // heh goal + hamza   -> heh goal with hamza
    {0x06D2, 0x0654, 0x06D3},  // yeh barree + hamza -> yeh barree with hamza
}};

std::u32string compose_arabic(std::u32string_view in) {
  std::u32string out;
  out.reserve(in.size());
  for (char32_t cp : in) {
    if (!out.empty()) {
      bool composed = false;
      for (const auto& p : kArabicCompositions) {
        if (out.back() == p.base && cp == p.mark) {
          out.back() = p.composed;
          composed = true;
          break;
        }
      }
      if (composed) continue;
    }
    out.push_back(cp);
  }
  return out;
}

std::u32string apply_table(std::u32string_view in, const VariantTable& table) {
  std::u32string out;
  out.reserve(in.size());
  for (char32_t cp : in) {
    if (const auto* target = table.find(cp)) {
      if (target->has_value()) out.push_back(**target);
      // empty target: drop the character
    } else {
      out.push_back(cp);
    }
  }
  return out;
}

std::u32string tidy_whitespace(std::u32string_view in) {
  std::u32string out;
  out.reserve(in.size());
  bool pending_space = false;
  for (char32_t cp : in) {
    if (is_space(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(U' ');
      pending_space = false;
    }
    out.push_back(cp);
  }
  return out;
}

char32_t parse_codepoint(const std::string& token, std::size_t line) {
  std::string hex = token;
  if (hex.rfind("U+", 0) == 0 || hex.rfind("u+", 0) == 0) hex = hex.substr(2);
  if (hex.empty()) throw ParseError(line, "empty codepoint");
  char32_t cp = 0;
  for (char c : hex) {
    int digit;
    if (c >= '0' && c <= '9') digit = c - '0';
    else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
    else throw ParseError(line, "invalid codepoint token: " + token);
    cp = cp * 16 + static_cast<char32_t>(digit);
    if (cp > 0x10FFFF) throw ParseError(line, "codepoint out of range: " + token);
  }
  return cp;
}

VariantTable make_builtin() {
  VariantTable t;
  const auto removed = std::nullopt;

  // Yeh variants -> Farsi yeh U+06CC.
  t.set(0x064A, 0x06CC);  // Arabic yeh
  t.set(0x0649, 0x06CC);  // alef maksura
  t.set(0x06D2, 0x06CC);  // yeh barree
  // Kaf variants -> keheh U+06A9.
  t.set(0x0643, 0x06A9);  // Arabic kaf
  t.set(0x06AA, 0x06A9);  // swash kaf
  // Heh variants -> heh U+0647.
  t.set(0x0629, 0x0647);  // teh marbuta
  t.set(0x06C1, 0x0647);  // heh goal
  t.set(0x06BE, 0x0647);  // heh doachashmee
  // Alef wasla -> plain alef; the composed madda/hamza alefs (U+0622/23/25)
  // stay distinct.
  t.set(0x0671, 0x0627);

  // Both Arabic digit blocks -> ASCII digits.
  for (char32_t d = 0; d < 10; ++d) {
    t.set(0x0660 + d, U'0' + d);  // Arabic-Indic
    t.set(0x06F0 + d, U'0' + d);  // Extended Arabic-Indic
  }

  // Tatweel and combining diacritics (tashkeel and the hamza/madda marks
  // left over after composition).
  t.set(0x0640, removed);
  for (char32_t cp = 0x064B; cp <= 0x065F; ++cp) t.set(cp, removed);
  t.set(0x0670, removed);  // superscript alef

  return t;
}

}  // namespace

const VariantTable& VariantTable::builtin() {
  static const VariantTable table = make_builtin();
  return table;
}

void VariantTable::set(char32_t source, std::optional<char32_t> target) {
  map_[source] = target;
}

const std::optional<char32_t>* VariantTable::find(char32_t source) const {
  auto it = map_.find(source);
  return it == map_.end() ? nullptr : &it->second;
}

VariantTable VariantTable::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError(path);
  VariantTable table;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw[0] == '#') continue;
    // Split on the first run of tab/comma/space.
    std::size_t sep = raw.find_first_of("\t, ");
    std::string src = sep == std::string::npos ? raw : raw.substr(0, sep);
    std::string dst;
    if (sep != std::string::npos) {
      std::size_t start = raw.find_first_not_of("\t, ", sep);
      if (start != std::string::npos) dst = raw.substr(start);
    }
    char32_t source = parse_codepoint(src, line_no);
    if (dst.empty()) {
      table.set(source, std::nullopt);
    } else {
      table.set(source, parse_codepoint(dst, line_no));
    }
  }
  return table;
}

Script detect_script(std::string_view text) {
  std::size_t arabic = 0, latin = 0;
  for (char32_t cp : utf8::decode(text)) {
    if (is_arabic_block(cp)) ++arabic;
    else if ((cp >= U'A' && cp <= U'Z') || (cp >= U'a' && cp <= U'z') ||
             (cp >= 0x00C0 && cp <= 0x024F))
      ++latin;
  }
  return arabic > latin ? Script::persian : Script::latin;
}

NormalizedText normalize_persian(std::string_view text,
                                 const VariantTable& table) {
  std::u32string cps = utf8::decode(text);
  cps = compose_arabic(cps);
  cps = apply_table(cps, table);
  cps = tidy_whitespace(cps);
  return NormalizedText(utf8::encode(cps));
}

NormalizedText normalize_persian(std::string_view text) {
  return normalize_persian(text, VariantTable::builtin());
}

NormalizedText normalize_latin(std::string_view text) {
  std::u32string cps = utf8::decode(text);
  for (char32_t& cp : cps) {
    if (cp >= U'A' && cp <= U'Z') cp = cp - U'A' + U'a';
  }
  cps = tidy_whitespace(cps);
  return NormalizedText(utf8::encode(cps));
}

NormalizedText normalize_auto(std::string_view text, const VariantTable& table) {
  return detect_script(text) == Script::persian
             ? normalize_persian(text, table)
             : normalize_latin(text);
}

NormalizedText normalize_auto(std::string_view text) {
  return normalize_auto(text, VariantTable::builtin());
}

}  // namespace namekit::normalization
