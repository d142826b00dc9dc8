#pragma once

#include <string>
#include <string_view>

#include "translit/error.hpp"
#include "translit/utf8.hpp"

namespace translit {

// Character-level serialization for sequence models: every codepoint
// separated by single spaces, original spaces replaced by a sentinel
// that must not occur in the data.
struct CharEncodingConfig {
  char32_t space_sentinel = U'⌀';  // ⌀
};

inline std::string encode_chars(std::string_view text, const CharEncodingConfig& cfg = {}) {
  std::u32string cps = decode_utf8(text);
  std::string out;
  out.reserve(text.size() * 2);
  bool first = true;
  for (char32_t cp : cps) {
    if (cp == cfg.space_sentinel)
      throw data_error("input contains the space sentinel " +
                       encode_utf8(std::u32string(1, cfg.space_sentinel)));
    if (!first) out.push_back(' ');
    append_utf8(out, cp == U' ' ? cfg.space_sentinel : cp);
    first = false;
  }
  return out;
}

inline std::string decode_chars(std::string_view encoded, const CharEncodingConfig& cfg = {}) {
  std::u32string out;
  size_t start = 0;
  std::string enc(encoded);
  while (start <= enc.size()) {
    size_t sep = enc.find(' ', start);
    std::string token = enc.substr(start, sep == std::string::npos ? sep : sep - start);
    if (token.empty() && enc.empty()) break;  // empty input, no tokens
    std::u32string cps = decode_utf8(token);
    if (cps.size() != 1)
      throw data_error("malformed character encoding: token '" + token +
                       "' is not a single codepoint");
    out.push_back(cps[0] == cfg.space_sentinel ? U' ' : cps[0]);
    if (sep == std::string::npos) break;
    start = sep + 1;
  }
  return encode_utf8(out);
}

}  // namespace translit
