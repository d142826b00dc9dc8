#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "translit/error.hpp"
#include "translit/unicode.hpp"
#include "translit/utf8.hpp"

namespace translit {

enum class RomanizationMode {
  lossy,       // ASCII-only targets, diacritics and some letters dropped
  preserving,  // Latin targets that keep diacritic distinctions
};

inline const char* to_string(RomanizationMode m) {
  return m == RomanizationMode::lossy ? "lossy" : "preserving";
}

inline RomanizationMode mode_from_string(std::string_view s) {
  if (s == "lossy") return RomanizationMode::lossy;
  if (s == "preserving") return RomanizationMode::preserving;
  throw usage_error("unknown romanization mode: " + std::string(s));
}

enum class PassthroughPolicy {
  copy_unmapped,      // unmatched codepoints are copied verbatim
  error_on_unmapped,  // unmatched non-ASCII codepoints raise an error
};

// One source grapheme cluster and its Latin targets. Sources and
// targets are stored NFC-normalized.
struct MappingEntry {
  std::u32string source;
  std::u32string target_preserving;
  std::u32string target_lossy;
  bool is_word_space = false;  // script-specific word separator
  bool is_syllable = false;    // syllable unit; adjacent syllables get a space

  const std::u32string& target(RomanizationMode mode) const {
    return mode == RomanizationMode::lossy ? target_lossy : target_preserving;
  }
};

// Grapheme-cluster -> Latin mapping with a lossy and a preserving
// target per entry. Matching is greedy longest-match left to right on
// NFC text; unmatched codepoints follow passthrough_policy.
class MappingTable {
public:
  std::string name;
  std::vector<MappingEntry> entries;
  PassthroughPolicy passthrough_policy = PassthroughPolicy::copy_unmapped;
  // When true, lossy mode deletes word-space entries instead of
  // mapping them to an ASCII space.
  bool lossy_drops_word_space = false;

  void add(MappingEntry entry) {
    entry.source = nfc(entry.source);
    entry.target_preserving = nfc(entry.target_preserving);
    entry.target_lossy = nfc(entry.target_lossy);
    if (entry.source.empty()) throw data_error("mapping entry with empty source");
    if (entry.is_word_space) {
      entry.target_preserving = U" ";
      entry.target_lossy = U" ";
    }
    if (!sources_.insert(entry.source).second)
      throw data_error("duplicate mapping source: " + encode_utf8(entry.source));
    by_first_[entry.source[0]].push_back(entries.size());
    entries.push_back(std::move(entry));
    auto& bucket = by_first_[entries.back().source[0]];
    std::sort(bucket.begin(), bucket.end(), [this](size_t a, size_t b) {
      return entries[a].source.size() > entries[b].source.size();
    });
    max_source_len_ = std::max(max_source_len_, entries.back().source.size());
  }

  bool contains_source(const std::u32string& source) const {
    return sources_.count(nfc(source)) > 0;
  }

  // Longest entry whose source matches text at pos, or nullptr.
  const MappingEntry* match(const std::u32string& text, size_t pos) const {
    auto it = by_first_.find(text[pos]);
    if (it == by_first_.end()) return nullptr;
    for (size_t idx : it->second) {
      const MappingEntry& e = entries[idx];
      if (e.source.size() <= text.size() - pos &&
          text.compare(pos, e.source.size(), e.source) == 0)
        return &e;
    }
    return nullptr;
  }

  size_t max_source_len() const { return max_source_len_; }

  // Stable content hash over entries, flags and options. Used to tie a
  // trained deromanizer to the exact table and mode that generated its
  // training data.
  std::string fingerprint(RomanizationMode mode) const {
    uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64
    auto mix = [&h](std::string_view bytes) {
      for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
      }
    };
    for (const auto& e : entries) {
      mix(encode_utf8(e.source));
      mix("\x1f");
      mix(encode_utf8(e.target_preserving));
      mix("\x1f");
      mix(encode_utf8(e.target_lossy));
      mix("\x1f");
      mix(e.is_word_space ? "W" : "-");
      mix(e.is_syllable ? "S" : "-");
      mix("\x1e");
    }
    mix(to_string(mode));
    mix(lossy_drops_word_space ? "|drop-wspace" : "|keep-wspace");
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
  }

private:
  std::unordered_set<std::u32string> sources_;
  std::unordered_map<char32_t, std::vector<size_t>> by_first_;
  size_t max_source_len_ = 0;
};

// TSV format, one entry per line:
//   source<TAB>target_preserving<TAB>target_lossy[<TAB>flags]
// A two-column line derives the lossy target by diacritic stripping; a
// present third field is taken literally even when empty. The token \0
// also stands for an empty target. Flags are comma-separated: WSPACE
// marks a word separator, SYLL a syllable unit. Lines starting with #
// are comments.
inline MappingTable load_table(std::istream& in, const std::string& name) {
  MappingTable table;
  table.name = name;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
      size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (fields.size() < 2 || fields.size() > 4)
      throw data_error(name + ":" + std::to_string(lineno) +
                       ": expected 2-4 tab-separated fields, got " +
                       std::to_string(fields.size()));

    auto field_value = [](const std::string& f) -> std::string {
      return f == "\\0" ? std::string() : f;
    };

    MappingEntry entry;
    try {
      entry.source = decode_utf8(fields[0]);
      entry.target_preserving = nfc(decode_utf8(field_value(fields[1])));
      // A present-but-empty third field is a literal empty target; only
      // a two-column line derives the lossy side by diacritic stripping.
      if (fields.size() >= 3)
        entry.target_lossy = nfc(decode_utf8(field_value(fields[2])));
      else
        entry.target_lossy = strip_diacritics(entry.target_preserving);
      if (fields.size() == 4) {
        std::stringstream flags(fields[3]);
        std::string flag;
        while (std::getline(flags, flag, ',')) {
          if (flag == "WSPACE")
            entry.is_word_space = true;
          else if (flag == "SYLL")
            entry.is_syllable = true;
          else if (!flag.empty())
            throw data_error("unknown flag '" + flag + "'");
        }
      }
      table.add(std::move(entry));
    } catch (const error& e) {
      throw data_error(name + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return table;
}

inline MappingTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open mapping table: " + path);
  return load_table(in, path);
}

}  // namespace translit
