#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace boostersim::util {

// "64", "512KB", "1.5 MB", "2GB" -> bytes. Decimal suffixes (KB = 1e3).
double parse_byte_size(std::string_view text);

// Shortest-ish deterministic formatting used for all machine output.
std::string fmt_g(double v, int significant_digits = 9);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace boostersim::util
