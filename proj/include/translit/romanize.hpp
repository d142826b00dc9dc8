#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "translit/mapping_table.hpp"
#include "translit/unicode.hpp"
#include "translit/utf8.hpp"

namespace translit {

// One unit of the left-to-right romanization scan. `source` is the
// consumed grapheme cluster (empty for inserted syllable spaces),
// `output` the emitted Latin text (may be empty for deletions).
struct ScanStep {
  enum class Kind { mapped, passthrough, inserted_space };
  Kind kind;
  std::u32string source;
  std::u32string output;
};

// Greedy longest-match scan over NFC text. The step list is the exact
// alignment between input and output; concatenating sources gives the
// normalized input, concatenating outputs gives the romanization.
inline std::vector<ScanStep> scan_romanize(const std::u32string& text_nfc,
                                           const MappingTable& table,
                                           RomanizationMode mode) {
  std::vector<ScanStep> steps;
  steps.reserve(text_nfc.size());
  std::u32string unmapped;
  const MappingEntry* prev_entry = nullptr;
  size_t i = 0;
  while (i < text_nfc.size()) {
    const MappingEntry* e = table.match(text_nfc, i);
    if (e != nullptr) {
      if (e->is_syllable && prev_entry != nullptr && prev_entry->is_syllable)
        steps.push_back({ScanStep::Kind::inserted_space, U"", U" "});
      std::u32string out;
      if (e->is_word_space)
        out = (mode == RomanizationMode::lossy && table.lossy_drops_word_space) ? U"" : U" ";
      else
        out = e->target(mode);
      steps.push_back({ScanStep::Kind::mapped, e->source, std::move(out)});
      i += e->source.size();
      prev_entry = e;
    } else {
      char32_t cp = text_nfc[i];
      if (table.passthrough_policy == PassthroughPolicy::error_on_unmapped && !is_ascii(cp))
        unmapped.push_back(cp);
      steps.push_back({ScanStep::Kind::passthrough, std::u32string(1, cp),
                       std::u32string(1, cp)});
      ++i;
      prev_entry = nullptr;
    }
  }
  if (!unmapped.empty())
    throw data_error("unmapped codepoints under error_on_unmapped policy: " +
                     encode_utf8(unmapped));
  return steps;
}

inline std::u32string romanize(const std::u32string& text, const MappingTable& table,
                               RomanizationMode mode) {
  std::u32string normalized = nfc(text);
  std::u32string out;
  out.reserve(normalized.size());
  for (const ScanStep& step : scan_romanize(normalized, table, mode)) out += step.output;
  return out;
}

inline std::string romanize(std::string_view text, const MappingTable& table,
                            RomanizationMode mode) {
  return encode_utf8(romanize(decode_utf8(text), table, mode));
}

}  // namespace translit
