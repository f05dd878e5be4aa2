#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace hetgcn {

// Shortest round-trip decimal representation ("2e-05", "0.5", "1").
std::string format_double(double x);

// ASCII-only lowercasing; bytes >= 0x80 pass through untouched so UTF-8
// sequences are preserved.
std::string ascii_lower(std::string_view s);

// FNV-1a over the file's bytes, as a 16-hex-digit string. Used for
// provenance records, not security.
std::string file_digest_hex(const std::string& path);

// Calls fn(line_number, line) for every non-empty line; line numbers are 1-based.
void for_each_line(const std::string& path, const std::function<void(std::size_t, const std::string&)>& fn);

}  // namespace hetgcn
