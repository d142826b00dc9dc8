#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "translit/error.hpp"
#include "translit/utf8.hpp"

namespace translit {

inline constexpr char32_t kWordBoundary = U'▁';
inline constexpr int kUnkId = 0;
inline constexpr int kBoundaryId = 1;

struct SubwordVocab {
  std::vector<std::string> pieces;  // ids 0..N-1; 0 = <unk>, 1 = boundary
  std::vector<std::pair<std::string, std::string>> merges;
  std::vector<std::string> covered_chars;  // one codepoint each, sorted
  double coverage = 1.0;
  // Requested training size; 0 on loaded vocabs. When the corpus cannot
  // fill the requested size the vocab is smaller and flagged here.
  int requested_size = 0;
  bool size_attained() const {
    return requested_size == 0 || static_cast<int>(pieces.size()) == requested_size;
  }
};

namespace bpe_detail {

inline std::vector<std::u32string> split_words(std::u32string_view text) {
  std::vector<std::u32string> words;
  size_t i = 0;
  auto is_ws = [](char32_t c) { return c == U' ' || c == U'\t' || c == U'\r' || c == U'\n'; };
  while (i < text.size()) {
    while (i < text.size() && is_ws(text[i])) ++i;
    size_t start = i;
    while (i < text.size() && !is_ws(text[i])) ++i;
    if (i > start) words.emplace_back(text.substr(start, i - start));
  }
  return words;
}

}  // namespace bpe_detail

// Applies a trained vocab. Built once per vocab; segmentation itself is
// allocation-light per line.
class Segmenter {
 public:
  explicit Segmenter(const SubwordVocab& vocab) : vocab_(&vocab) {
    for (size_t i = 0; i < vocab.pieces.size(); ++i)
      piece_ids_.emplace(vocab.pieces[i], static_cast<int>(i));  // first occurrence wins
    if (vocab.pieces.size() < 2 || vocab.pieces[kUnkId] != "<unk>" ||
        vocab.pieces[kBoundaryId] != encode_utf8(kWordBoundary))
      throw data_error("vocab: reserved pieces 0/1 must be <unk> and the word boundary");
    for (const auto& ch : vocab.covered_chars) {
      std::u32string cp = decode_utf8(ch);
      if (cp.size() != 1) throw data_error("vocab: covered_chars entries must be single characters");
      auto it = piece_ids_.find(ch);
      if (it == piece_ids_.end()) throw data_error("vocab: covered char missing from pieces: " + ch);
      char_ids_.emplace(cp[0], it->second);
    }
    for (size_t r = 0; r < vocab.merges.size(); ++r) {
      const auto& [left, right] = vocab.merges[r];
      auto li = piece_ids_.find(left);
      auto ri = piece_ids_.find(right);
      auto mi = piece_ids_.find(left + right);
      if (li == piece_ids_.end() || ri == piece_ids_.end() || mi == piece_ids_.end())
        throw data_error("vocab: merge references unknown piece: (" + left + ", " + right + ")");
      ranks_.emplace(std::make_pair(li->second, ri->second),
                     std::make_pair(static_cast<int>(r), mi->second));
    }
  }

  std::vector<int> segment(std::string_view text) const {
    std::vector<int> out;
    for (const auto& word : bpe_detail::split_words(decode_utf8(text))) {
      std::vector<int> symbols;
      symbols.reserve(word.size() + 1);
      symbols.push_back(kBoundaryId);
      for (char32_t c : word) {
        if (c == kWordBoundary) {
          symbols.push_back(kBoundaryId);
          continue;
        }
        auto it = char_ids_.find(c);
        symbols.push_back(it == char_ids_.end() ? kUnkId : it->second);
      }
      merge_word(symbols);
      out.insert(out.end(), symbols.begin(), symbols.end());
    }
    return out;
  }

  const SubwordVocab& vocab() const { return *vocab_; }

 private:
  struct PairHash {
    size_t operator()(const std::pair<int, int>& p) const {
      return std::hash<int64_t>()((static_cast<int64_t>(p.first) << 32) |
                                  static_cast<uint32_t>(p.second));
    }
  };

  // Repeatedly applies the lowest-ranked merge present. Merges never
  // make an earlier-ranked pair newly adjacent, so this reproduces
  // application in training order.
  void merge_word(std::vector<int>& symbols) const {
    while (symbols.size() >= 2) {
      int best_rank = -1, merged_id = -1;
      for (size_t i = 0; i + 1 < symbols.size(); ++i) {
        auto it = ranks_.find({symbols[i], symbols[i + 1]});
        if (it != ranks_.end() && (best_rank < 0 || it->second.first < best_rank)) {
          best_rank = it->second.first;
          merged_id = it->second.second;
        }
      }
      if (best_rank < 0) break;
      const std::pair<int, int> target = [&] {
        for (size_t i = 0; i + 1 < symbols.size(); ++i) {
          auto it = ranks_.find({symbols[i], symbols[i + 1]});
          if (it != ranks_.end() && it->second.first == best_rank)
            return std::make_pair(symbols[i], symbols[i + 1]);
        }
        return std::make_pair(-1, -1);
      }();
      std::vector<int> next;
      next.reserve(symbols.size());
      size_t i = 0;
      while (i < symbols.size()) {
        if (i + 1 < symbols.size() && symbols[i] == target.first &&
            symbols[i + 1] == target.second) {
          next.push_back(merged_id);
          i += 2;
        } else {
          next.push_back(symbols[i]);
          ++i;
        }
      }
      symbols = std::move(next);
    }
  }

  const SubwordVocab* vocab_;
  std::unordered_map<std::string, int> piece_ids_;
  std::unordered_map<char32_t, int> char_ids_;
  std::unordered_map<std::pair<int, int>, std::pair<int, int>, PairHash> ranks_;
};

inline std::vector<int> segment(std::string_view text, const SubwordVocab& vocab) {
  return Segmenter(vocab).segment(text);
}

inline std::string detokenize(const std::vector<int>& ids, const SubwordVocab& vocab) {
  std::u32string joined;
  for (int id : ids) {
    if (id < 0 || id >= static_cast<int>(vocab.pieces.size()))
      throw data_error("detokenize: piece id out of range: " + std::to_string(id));
    joined += decode_utf8(vocab.pieces[id]);
  }
  std::u32string text;
  text.reserve(joined.size());
  for (char32_t c : joined) text.push_back(c == kWordBoundary ? U' ' : c);
  if (!text.empty() && text.front() == U' ') text.erase(text.begin());
  return encode_utf8(text);
}

// Trains a BPE vocab. Words are whitespace tokens with a boundary
// sentinel prefixed as a separate initial symbol. Characters are ranked
// by frequency and kept until the coverage fraction of occurrences is
// reached; the rest map to UNK and never merge. Merging picks the most
// frequent adjacent pair (ties by the concatenated piece, ascending)
// and stops once the size is reached or no pair occurs twice. Remaining
// room is filled with whole word forms, most frequent first.
inline SubwordVocab train_bpe(const std::vector<std::string>& corpus, int size,
                              double coverage = 0.9995) {
  if (!(coverage > 0.0 && coverage <= 1.0))
    throw usage_error("bpe: coverage must be in (0, 1]");

  std::map<std::u32string, int64_t> word_freq;
  std::map<char32_t, int64_t> char_freq;
  int64_t char_total = 0;
  for (const auto& line : corpus)
    for (auto& word : bpe_detail::split_words(decode_utf8(line))) {
      ++word_freq[word];
      for (char32_t c : word)
        if (c != kWordBoundary) {
          ++char_freq[c];
          ++char_total;
        }
    }

  // Coverage cutoff: most frequent characters first, codepoint order on
  // ties, minimal prefix reaching the requested occurrence mass.
  std::vector<std::pair<char32_t, int64_t>> ranked(char_freq.begin(), char_freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::set<char32_t> covered;
  int64_t cum = 0;
  for (const auto& [c, freq] : ranked) {
    if (char_total > 0 &&
        static_cast<double>(cum) >= coverage * static_cast<double>(char_total))
      break;
    covered.insert(c);
    cum += freq;
  }

  if (size < static_cast<int>(covered.size()) + 2)
    throw usage_error("bpe: size " + std::to_string(size) + " too small for " +
                      std::to_string(covered.size()) + " covered characters plus reserved ids");

  SubwordVocab vocab;
  vocab.coverage = coverage;
  vocab.requested_size = size;
  vocab.pieces = {"<unk>", encode_utf8(kWordBoundary)};
  std::vector<std::u32string> piece_text = {U"", std::u32string(1, kWordBoundary)};
  std::map<char32_t, int> char_ids;
  for (const auto& [c, freq] : ranked) {
    if (!covered.count(c)) continue;
    char_ids[c] = static_cast<int>(vocab.pieces.size());
    vocab.pieces.push_back(encode_utf8(c));
    piece_text.push_back(std::u32string(1, c));
  }
  for (char32_t c : covered) vocab.covered_chars.push_back(encode_utf8(c));

  std::vector<std::vector<int>> words;
  std::vector<int64_t> freqs;
  std::vector<const std::u32string*> word_forms;
  for (const auto& [word, freq] : word_freq) {
    std::vector<int> symbols;
    symbols.reserve(word.size() + 1);
    symbols.push_back(kBoundaryId);
    for (char32_t c : word) {
      if (c == kWordBoundary) {
        symbols.push_back(kBoundaryId);
        continue;
      }
      auto it = char_ids.find(c);
      symbols.push_back(it == char_ids.end() ? kUnkId : it->second);
    }
    words.push_back(std::move(symbols));
    freqs.push_back(freq);
    word_forms.push_back(&word);
  }

  // UNK never participates in a pair.
  std::map<std::pair<int, int>, int64_t> pair_freq;
  std::map<std::pair<int, int>, std::set<size_t>> pair_words;
  auto add_word_pairs = [&](size_t idx) {
    const auto& w = words[idx];
    for (size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i] == kUnkId || w[i + 1] == kUnkId) continue;
      auto key = std::make_pair(w[i], w[i + 1]);
      pair_freq[key] += freqs[idx];
      pair_words[key].insert(idx);
    }
  };
  for (size_t idx = 0; idx < words.size(); ++idx) add_word_pairs(idx);

  while (static_cast<int>(vocab.pieces.size()) < size) {
    std::pair<int, int> best{-1, -1};
    int64_t best_freq = 1;  // a pair must repeat to merge
    std::u32string best_concat;
    for (const auto& [pair, freq] : pair_freq) {
      if (freq < best_freq) continue;
      std::u32string concat = piece_text[pair.first] + piece_text[pair.second];
      if (freq > best_freq || concat < best_concat) {
        best = pair;
        best_freq = freq;
        best_concat = std::move(concat);
      }
    }
    if (best.first < 0) break;

    int merged_id = static_cast<int>(vocab.pieces.size());
    vocab.pieces.push_back(encode_utf8(best_concat));
    piece_text.push_back(best_concat);
    vocab.merges.emplace_back(vocab.pieces[best.first], vocab.pieces[best.second]);

    std::set<size_t> affected = pair_words[best];
    for (size_t idx : affected) {
      // Retract the word's pair counts, merge greedily left to right,
      // then re-add.
      const auto& w = words[idx];
      for (size_t i = 0; i + 1 < w.size(); ++i) {
        if (w[i] == kUnkId || w[i + 1] == kUnkId) continue;
        auto key = std::make_pair(w[i], w[i + 1]);
        pair_freq[key] -= freqs[idx];
        pair_words[key].erase(idx);
      }
      std::vector<int> next;
      next.reserve(w.size());
      size_t i = 0;
      while (i < w.size()) {
        if (i + 1 < w.size() && w[i] == best.first && w[i + 1] == best.second) {
          next.push_back(merged_id);
          i += 2;
        } else {
          next.push_back(w[i]);
          ++i;
        }
      }
      words[idx] = std::move(next);
      add_word_pairs(idx);
    }
    for (auto it = pair_freq.begin(); it != pair_freq.end();) {
      if (it->second <= 0) {
        pair_words.erase(it->first);
        it = pair_freq.erase(it);
      } else {
        ++it;
      }
    }
  }

  // Fill remaining room with whole word forms built from covered
  // characters, most frequent first.
  if (static_cast<int>(vocab.pieces.size()) < size) {
    std::set<std::string> have(vocab.pieces.begin(), vocab.pieces.end());
    std::vector<std::pair<int64_t, std::u32string>> forms;
    for (size_t idx = 0; idx < words.size(); ++idx) {
      bool clean = true;
      for (char32_t c : *word_forms[idx])
        if (c != kWordBoundary && !covered.count(c)) {
          clean = false;
          break;
        }
      if (clean) forms.emplace_back(freqs[idx], std::u32string(1, kWordBoundary) + *word_forms[idx]);
    }
    std::sort(forms.begin(), forms.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (const auto& [freq, form] : forms) {
      if (static_cast<int>(vocab.pieces.size()) >= size) break;
      std::string piece = encode_utf8(form);
      if (have.insert(piece).second) vocab.pieces.push_back(std::move(piece));
    }
  }
  return vocab;
}

inline double avg_subwords_per_sentence(const std::vector<std::string>& corpus,
                                        const SubwordVocab& vocab) {
  if (corpus.empty()) throw data_error("avg_subwords_per_sentence: empty corpus");
  Segmenter seg(vocab);
  int64_t total = 0;
  for (const auto& line : corpus) total += static_cast<int64_t>(seg.segment(line).size());
  return static_cast<double>(total) / static_cast<double>(corpus.size());
}

// ----------------------------------------------------------- persistence

inline nlohmann::json vocab_to_json(const SubwordVocab& vocab) {
  nlohmann::json merges = nlohmann::json::array();
  for (const auto& [left, right] : vocab.merges)
    merges.push_back(nlohmann::json::array({left, right}));
  return nlohmann::json{{"pieces", vocab.pieces},
                        {"merges", merges},
                        {"covered_chars", vocab.covered_chars},
                        {"coverage", vocab.coverage}};
}

inline SubwordVocab vocab_from_json(const nlohmann::json& j) {
  SubwordVocab vocab;
  try {
    vocab.pieces = j.at("pieces").get<std::vector<std::string>>();
    for (const auto& m : j.at("merges")) {
      if (!m.is_array() || m.size() != 2)
        throw data_error("vocab: merges must be [left, right] pairs");
      vocab.merges.emplace_back(m[0].get<std::string>(), m[1].get<std::string>());
    }
    vocab.covered_chars = j.at("covered_chars").get<std::vector<std::string>>();
    vocab.coverage = j.at("coverage").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("vocab: malformed JSON: ") + e.what());
  }
  if (!(vocab.coverage > 0.0 && vocab.coverage <= 1.0))
    throw data_error("vocab: coverage must be in (0, 1]");
  Segmenter check(vocab);  // validates reserved ids, chars, merges
  return vocab;
}

inline void save_vocab(const SubwordVocab& vocab, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write " + path);
  out << vocab_to_json(vocab).dump(2) << '\n';
}

inline SubwordVocab load_vocab(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw data_error(path + ": invalid JSON: " + e.what());
  }
  return vocab_from_json(j);
}

}  // namespace translit
