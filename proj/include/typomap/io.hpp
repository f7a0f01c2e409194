#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace typomap::io {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Splits on '\n', tolerating a trailing '\r' per line and a missing final
// newline. A trailing empty line is not reported.
std::vector<std::string> split_lines(std::string_view text);

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_whitespace(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Locale-independent shortest round-trip formatting; artifact files depend
// on this being byte-stable.
std::string format_double(double v);
double parse_double(std::string_view s); // throws Error on garbage
std::int64_t parse_int(std::string_view s);

std::uint64_t fnv1a64(std::string_view data);

} // namespace typomap::io
