#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace namekit::utf8 {

// Decodes UTF-8 into Unicode scalar values. Rejects overlong encodings,
// surrogates and out-of-range sequences. Throws EncodingError on invalid
// input.
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view codepoints);
std::string encode(char32_t codepoint);

bool is_valid(std::string_view text);

// Number of Unicode scalar values in a valid UTF-8 string.
std::size_t length(std::string_view text);

}  // namespace namekit::utf8
