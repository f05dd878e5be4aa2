#include "hetgcn/util.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "hetgcn/errors.hpp"
#include "hetgcn/rng.hpp"

namespace hetgcn {

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (static_cast<unsigned char>(c) < 0x80) {
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    return out;
}

std::string file_digest_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open file for digest: " + path);
    }
    std::uint64_t h = 1469598103934665603ULL;
    char chunk[4096];
    while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(chunk[i]);
            h *= 1099511628211ULL;
        }
    }
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = hex[h & 0xF];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

void for_each_line(const std::string& path, const std::function<void(std::size_t, const std::string&)>& fn) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open file: " + path);
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        fn(lineno, line);
    }
}

}  // namespace hetgcn
