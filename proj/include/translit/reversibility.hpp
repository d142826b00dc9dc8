#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "translit/mapping_table.hpp"
#include "translit/romanize.hpp"

namespace translit {

struct ReversibilityReport {
  bool injective = true;
  bool uniquely_decodable = true;
  bool has_empty_target = false;
  bool has_syllable_spacing = false;
  bool reversible = false;
  // A string with two distinct parses over the target code, when one
  // exists (shortest first; BFS order ties broken by sorted codewords).
  std::optional<std::string> witness;
};

namespace sp_detail {

inline bool proper_prefix(const std::u32string& p, const std::u32string& s) {
  return p.size() < s.size() && s.compare(0, p.size(), p) == 0;
}

}  // namespace sp_detail

// Sardinas-Patterson. Decides whether every concatenation of codewords
// has a unique parse, and reconstructs a shortest ambiguous string when
// not. States are the dangling suffixes; each carries the full string
// of the side that is ahead, which at completion is the witness.
inline std::optional<std::string> sardinas_patterson_witness(
    const std::set<std::u32string>& code, bool* decodable) {
  *decodable = true;
  if (code.count(std::u32string()) > 0) {
    *decodable = false;
    return std::nullopt;  // a code containing the empty word never decodes uniquely
  }
  std::deque<std::pair<std::u32string, std::u32string>> queue;  // (overhang, ahead string)
  std::set<std::u32string> visited;
  for (const auto& shorter : code)
    for (const auto& longer : code)
      if (sp_detail::proper_prefix(shorter, longer)) {
        std::u32string overhang = longer.substr(shorter.size());
        if (visited.insert(overhang).second) queue.emplace_back(overhang, longer);
      }
  while (!queue.empty()) {
    auto [overhang, ahead] = queue.front();
    queue.pop_front();
    for (const auto& c : code) {
      if (c == overhang) {
        *decodable = false;
        return encode_utf8(ahead);
      }
      if (sp_detail::proper_prefix(overhang, c)) {
        std::u32string next = c.substr(overhang.size());
        if (visited.insert(next).second) queue.emplace_back(next, ahead + next);
      } else if (sp_detail::proper_prefix(c, overhang)) {
        std::u32string next = overhang.substr(c.size());
        if (visited.insert(next).second) queue.emplace_back(next, ahead);
      }
    }
  }
  return std::nullopt;
}

// Decidable stand-in for "is this romanization invertible by rules":
// targets must be pairwise distinct, form a uniquely decodable code,
// and never delete material. Syllable spacing inserts separators that
// are not part of the code, so tables using it are reported
// non-reversible as well.
// Output of an entry under a mode, word-space handling included.
inline std::u32string effective_target(const MappingEntry& e, const MappingTable& table,
                                       RomanizationMode mode) {
  if (!e.is_word_space) return e.target(mode);
  if (mode == RomanizationMode::lossy && table.lossy_drops_word_space) return U"";
  return U" ";
}

inline ReversibilityReport is_reversible(const MappingTable& table, RomanizationMode mode) {
  ReversibilityReport report;
  std::map<std::u32string, std::vector<const MappingEntry*>> by_target;
  for (const auto& e : table.entries) {
    const std::u32string t = effective_target(e, table, mode);
    by_target[t].push_back(&e);
    if (t.empty()) report.has_empty_target = true;
    if (e.is_syllable) report.has_syllable_spacing = true;
  }
  std::set<std::u32string> code;
  for (const auto& [target, sources] : by_target) {
    if (sources.size() > 1) {
      report.injective = false;
      if (!report.witness && !target.empty()) report.witness = encode_utf8(target);
    }
    if (!target.empty()) code.insert(target);
  }
  if (report.has_empty_target) report.uniquely_decodable = false;

  bool decodable = true;
  auto witness = sardinas_patterson_witness(code, &decodable);
  if (!decodable) {
    report.uniquely_decodable = false;
    if (witness) report.witness = witness;
  }
  report.reversible = report.injective && report.uniquely_decodable &&
                      !report.has_empty_target && !report.has_syllable_spacing;
  return report;
}

// Greedy longest-match decoding over the inverted table. Strict mode
// requires a reversible table and fully mapped input; best-effort
// copies undecodable spans verbatim, which transliterates passthrough
// Latin text that collides with codewords. That failure on mixed
// script is inherent to rule-based deromanization.
inline std::u32string deromanize_rule_based(const std::u32string& text,
                                            const MappingTable& table,
                                            RomanizationMode mode,
                                            bool best_effort = false) {
  if (!best_effort) {
    ReversibilityReport report = is_reversible(table, mode);
    if (!report.reversible) {
      std::string detail = report.witness ? " (ambiguous: '" + *report.witness + "')" : "";
      throw data_error("table '" + table.name + "' is not reversible in " +
                       std::string(to_string(mode)) + " mode" + detail);
    }
  }

  // First entry wins on shared targets, so put the more frequent
  // reading earlier in the table file.
  std::map<std::u32string, const MappingEntry*> inverse;
  for (const auto& e : table.entries) {
    const std::u32string t = effective_target(e, table, mode);
    if (!t.empty()) inverse.emplace(t, &e);
  }
  std::unordered_map<char32_t, std::vector<const std::u32string*>> by_first;
  size_t max_len = 0;
  for (const auto& [target, entry] : inverse) {
    by_first[target[0]].push_back(&target);
    max_len = std::max(max_len, target.size());
  }
  for (auto& [cp, bucket] : by_first)
    std::sort(bucket.begin(), bucket.end(),
              [](const std::u32string* a, const std::u32string* b) {
                return a->size() != b->size() ? a->size() > b->size() : *a < *b;
              });

  std::u32string input = nfc(text);
  std::u32string out;
  out.reserve(input.size());
  size_t i = 0;
  while (i < input.size()) {
    const std::u32string* hit = nullptr;
    auto it = by_first.find(input[i]);
    if (it != by_first.end()) {
      for (const std::u32string* cand : it->second) {
        if (cand->size() <= input.size() - i &&
            input.compare(i, cand->size(), *cand) == 0) {
          hit = cand;
          break;
        }
      }
    }
    if (hit != nullptr) {
      out += inverse.find(*hit)->second->source;
      i += hit->size();
    } else {
      // Codepoints outside the codeword alphabet were passthrough on
      // the forward pass; copy them back verbatim.
      out.push_back(input[i]);
      ++i;
    }
  }
  return out;
}

inline std::string deromanize_rule_based(std::string_view text, const MappingTable& table,
                                         RomanizationMode mode, bool best_effort = false) {
  return encode_utf8(deromanize_rule_based(decode_utf8(text), table, mode, best_effort));
}

}  // namespace translit
