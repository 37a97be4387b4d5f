#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hawkqk::text {

// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

// Parses a whole field as a double; false on trailing garbage or empty input.
bool parse_double(std::string_view s, double& out);

std::string_view trim(std::string_view s);

// Splits one CSV line on commas. Double-quoted fields may contain commas;
// doubled quotes inside them unescape to one quote.
std::vector<std::string> split_csv_line(std::string_view line);

// Reads all lines, dropping '\r' and skipping lines starting with '#'.
std::vector<std::string> read_data_lines(const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, const std::string& contents);

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace hawkqk::text
