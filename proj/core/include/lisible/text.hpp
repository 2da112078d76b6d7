#pragma once

#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers covering the Latin ranges French text uses.

namespace lisible::text {

std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);
std::string encode_utf8(char32_t c);

char32_t to_lower(char32_t c);
char32_t to_upper(char32_t c);
bool is_letter(char32_t c);
bool is_upper(char32_t c);
bool is_digit(char32_t c);

std::string lowercase(std::string_view s);

/// True when `s` contains no letter and no digit.
bool is_punctuation_only(std::string_view s);
bool has_digit(std::string_view s);

/// Number of code points.
std::size_t length(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);
/// Fixed-point rendering with `digits` decimals.
std::string format_fixed(double v, int digits);

}  // namespace lisible::text
