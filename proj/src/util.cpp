#include "boostersim/util.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace boostersim::util {

double parse_byte_size(std::string_view text) {
    std::string s(text);
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid size: " + s);
    }
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    std::string suffix;
    for (; pos < s.size(); ++pos)
        suffix += static_cast<char>(std::toupper(static_cast<unsigned char>(s[pos])));
    double scale = 1.0;
    if (suffix.empty() || suffix == "B") scale = 1.0;
    else if (suffix == "KB") scale = 1e3;
    else if (suffix == "MB") scale = 1e6;
    else if (suffix == "GB") scale = 1e9;
    else if (suffix == "TB") scale = 1e12;
    else throw std::invalid_argument("invalid size suffix: " + s);
    if (value < 0.0) throw std::invalid_argument("size must be >= 0: " + s);
    return value * scale;
}

std::string fmt_g(double v, int significant_digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

}  // namespace boostersim::util
