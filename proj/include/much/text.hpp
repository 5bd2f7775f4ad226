#pragma once

// UTF-8 helpers. All character offsets in the library are code-point
// indices, which is what the published dataset uses.

#include <cstddef>
#include <string>
#include <string_view>

namespace much::text {

// Throws DataError on malformed UTF-8.
std::u32string decode_utf8(std::string_view in);
std::string encode_utf8(std::u32string_view in);

std::size_t codepoint_length(std::string_view utf8);

bool is_space(char32_t c) noexcept;
bool is_digit(char32_t c) noexcept;

// Simple lowercase mapping for ASCII, Latin-1 and Latin Extended-A.
// Characters outside those blocks map to themselves.
char32_t to_lower(char32_t c) noexcept;
std::u32string to_lower(std::u32string_view in);

// Strips Unicode whitespace on both ends, then lowercases.
std::u32string fold(std::u32string_view in);
std::string fold_utf8(std::string_view in);

// Number of leading whitespace code points.
std::size_t leading_space(std::u32string_view in) noexcept;

}  // namespace much::text
