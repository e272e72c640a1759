#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

namespace memfuzz::csv {

// Shortest round-trip representation, independent of the global locale.
inline std::string num(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return {buf, end};
}

inline std::string num(long long value) { return std::to_string(value); }
inline std::string num(std::size_t value) { return std::to_string(value); }
inline std::string num(int value) { return std::to_string(value); }

// Appends the fields joined by commas followed by '\n'.
template <typename... Fields>
void row(std::string& out, const Fields&... fields) {
  bool first = true;
  auto put = [&](const auto& f) {
    if (!first) out += ',';
    first = false;
    if constexpr (std::is_convertible_v<decltype(f), std::string_view>) {
      out += std::string_view(f);
    } else {
      out += num(f);
    }
  };
  (put(fields), ...);
  out += '\n';
}

}  // namespace memfuzz::csv
