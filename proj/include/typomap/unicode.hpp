#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace typomap::uni {

// Decodes UTF-8 into scalar values. Invalid byte sequences throw Error.
std::vector<char32_t> decode_utf8(std::string_view s);
std::string encode_utf8(const std::vector<char32_t>& cps);
void append_utf8(std::string& out, char32_t cp);

char32_t to_lower(char32_t cp);
bool is_punct_or_symbol(char32_t cp); // general category P* or S*
bool is_whitespace(char32_t cp);

// Canonical composition of (base, combining-mark) pairs. Does not reorder
// combining marks, so inputs with exotic mark ordering pass through
// unchanged; `changed` reports whether any composition happened.
std::string compose_nfc(std::string_view s, bool* changed = nullptr);

std::string lowercase(std::string_view s);

// Number of scalar values in a valid UTF-8 string.
std::size_t length(std::string_view s);

} // namespace typomap::uni
