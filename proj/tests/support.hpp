// Shared fixtures: temp files, mini mapping tables, synthetic corpora,
// and the independent brute-force metric oracles the suites check
// against. Oracle code here must stay decoupled from the library
// internals; it recomputes scores from first principles.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "translit/mapping_table.hpp"
#include "translit/rng.hpp"
#include "translit/romanize.hpp"

namespace testsupport {

inline std::string data_path(const std::string& rel) {
  return std::string(TRANSLIT_DATA_DIR) + "/" + rel;
}

class TempDir {
 public:
  TempDir() {
    char tmpl[] = "/tmp/translit_test_XXXXXX";
    char* got = mkdtemp(tmpl);
    if (!got) throw std::runtime_error("mkdtemp failed");
    path_ = got;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return path_ + "/" + name; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Loads a mapping table from inline TSV without touching disk paths the
// tests care about.
inline translit::MappingTable make_table(const std::string& tsv) {
  std::istringstream in(tsv);
  return translit::load_table(in, "inline");
}

// ------------------------------------------------------ synthetic text

// Russian-like synthetic corpus. Ambiguous pairs collide under the
// lossy profile of data/tables/cyrillic.tsv (soft sign dropped, ё and э
// folded to e) but stay distinct in preserving mode, so lossy
// romanization destroys a measurable amount of information.
inline const std::vector<std::pair<std::string, std::string>>& ambiguous_pairs() {
  static const std::vector<std::pair<std::string, std::string>> pairs = {
      {"мел", "мель"},   {"все", "всё"},   {"вес", "весь"},  {"угол", "уголь"},
      {"брат", "брать"}, {"был", "быль"},  {"ест", "есть"},  {"мол", "моль"},
      {"шест", "шесть"}, {"стал", "сталь"}, {"мер", "мэр"},
  };
  return pairs;
}

inline const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> words = {
      "я",      "ты",    "мы",      "вы",     "он",      "она",    "дом",
      "лес",    "мир",   "год",     "день",   "рука",    "вода",   "небо",
      "окно",   "город", "слово",   "время",  "дорога",  "хорошо", "плохо",
      "быстро", "завтра", "сегодня", "вчера",  "книга",   "стол",   "туда",
      "потом",  "опять", "именно",  "просто", "человек", "можно",  "нужно",
  };
  return words;
}

inline const std::vector<std::string>& latin_tokens() {
  static const std::vector<std::string> tokens = {
      "example.com", "test.org",  "http://site.ru", "user@mail.com",
      "Wikipedia",   "GitHub",    "linux",          "api.example.com",
  };
  return tokens;
}

struct SynthSpec {
  uint64_t seed = 1;
  size_t sentences = 1000;
  double mixed_frac = 0.0;  // fraction of lines carrying a Latin token
  double ambiguous_frac = 0.2;
};

inline std::vector<std::string> synth_russian(const SynthSpec& spec) {
  translit::Rng rng(spec.seed);
  const auto& amb = ambiguous_pairs();
  const auto& fill = filler_words();
  const auto& latin = latin_tokens();
  std::vector<std::string> lines;
  lines.reserve(spec.sentences);
  size_t mixed_every =
      spec.mixed_frac > 0.0 ? static_cast<size_t>(1.0 / spec.mixed_frac) : 0;
  for (size_t i = 0; i < spec.sentences; ++i) {
    size_t words = 4 + rng.bounded(5);
    std::ostringstream line;
    size_t latin_at = mixed_every && (i % mixed_every == 0) ? rng.bounded(words) : words;
    for (size_t w = 0; w < words; ++w) {
      if (w) line << ' ';
      if (w == latin_at) {
        line << latin[rng.bounded(latin.size())];
      } else if (rng.bounded(1000) < static_cast<uint64_t>(spec.ambiguous_frac * 1000)) {
        const auto& pair = amb[rng.bounded(amb.size())];
        line << (rng.bounded(2) ? pair.second : pair.first);
      } else {
        line << fill[rng.bounded(fill.size())];
      }
    }
    line << (rng.bounded(10) < 7 ? " ." : (rng.bounded(2) ? " ?" : " !"));
    lines.push_back(line.str());
  }
  return lines;
}

inline std::vector<std::string> synth_latin(uint64_t seed, size_t sentences) {
  static const std::vector<std::string> words = {
      "the",   "of",    "and",   "to",    "in",    "is",     "was",   "for",
      "on",    "are",   "with",  "they",  "be",    "at",     "one",   "have",
      "this",  "from",  "or",    "had",   "by",    "word",   "but",   "not",
      "what",  "all",   "were",  "we",    "when",  "your",   "can",   "said",
      "there", "use",   "an",    "each",  "which", "she",    "do",    "how",
      "their", "if",    "will",  "up",    "other", "about",  "out",   "many",
      "then",  "them",  "these", "so",    "some",  "her",    "would", "make",
      "like",  "him",   "into",  "time",  "has",   "look",   "two",   "more",
      "write", "go",    "see",   "number","no",    "way",    "could", "people",
      "my",    "than",  "first", "water", "been",  "call",   "who",   "oil",
  };
  translit::Rng rng(seed);
  std::vector<std::string> lines;
  lines.reserve(sentences);
  for (size_t i = 0; i < sentences; ++i) {
    size_t n = 4 + rng.bounded(5);
    std::ostringstream line;
    for (size_t w = 0; w < n; ++w) {
      if (w) line << ' ';
      line << words[rng.bounded(words.size())];
    }
    lines.push_back(line.str());
  }
  return lines;
}

// ----------------------------------------------------- metric oracles

// Brute-force chrF. Recomputed from the definition: strip whitespace,
// count character n-grams per order, clip matches, macro-average
// precision and recall over orders where either side has n-grams.
inline double oracle_chrf(const std::string& hyp, const std::string& ref, int max_n = 6,
                          double beta = 2.0) {
  auto strip = [](const std::string& utf8) {
    std::u32string s = translit::decode_utf8(utf8);
    std::u32string out;
    for (char32_t c : s)
      if (c != U' ' && c != U'\t' && c != U'\n' && c != U'\r') out.push_back(c);
    return out;
  };
  std::u32string h = strip(hyp), r = strip(ref);
  double sum_p = 0.0, sum_r = 0.0;
  int orders = 0;
  for (int n = 1; n <= max_n; ++n) {
    std::map<std::u32string, long> hc, rc;
    for (size_t i = 0; i + n <= h.size(); ++i) ++hc[h.substr(i, n)];
    for (size_t i = 0; i + n <= r.size(); ++i) ++rc[r.substr(i, n)];
    long h_total = 0, r_total = 0, match = 0;
    for (auto& [g, c] : hc) h_total += c;
    for (auto& [g, c] : rc) r_total += c;
    for (auto& [g, c] : hc) {
      auto it = rc.find(g);
      if (it != rc.end()) match += std::min(c, it->second);
    }
    if (h_total == 0 && r_total == 0) continue;
    ++orders;
    if (h_total > 0) sum_p += static_cast<double>(match) / h_total;
    if (r_total > 0) sum_r += static_cast<double>(match) / r_total;
  }
  if (orders == 0) return 0.0;
  double p = sum_p / orders, q = sum_r / orders;
  double b2 = beta * beta;
  if (b2 * p + q <= 0.0) return 0.0;
  return 100.0 * (1.0 + b2) * p * q / (b2 * p + q);
}

// Independent 13a tokenization, written from the rule list: entity
// unescape, split ASCII symbols, keep '.'/',' only between digits,
// split '-' after a digit.
inline std::vector<std::string> oracle_tokenize_13a(std::string line) {
  for (auto [from, to] : {std::pair<std::string, std::string>{"&quot;", "\""},
                          {"&amp;", "&"},
                          {"&lt;", "<"},
                          {"&gt;", ">"}}) {
    for (size_t at = line.find(from); at != std::string::npos; at = line.find(from, at))
      line.replace(at, from.size(), to);
  }
  const std::string symbols = "!\"#$%&()*+/:;<=>?@[\\]^_`{|}~ ";
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(cur);
    cur.clear();
  };
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    bool digit_prev = i > 0 && is_digit(line[i - 1]);
    bool digit_next = i + 1 < line.size() && is_digit(line[i + 1]);
    bool standalone;
    if (c == ' ' || c == '\t') {
      flush();
      continue;
    } else if (c == '.' || c == ',') {
      standalone = !(digit_prev && digit_next);
    } else if (c == '-') {
      standalone = digit_prev;
    } else {
      standalone = symbols.find(c) != std::string::npos;
    }
    if (standalone) {
      flush();
      tokens.push_back(std::string(1, c));
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return tokens;
}

// Brute-force corpus BLEU: clipped token n-gram precisions for
// n = 1..4, exponential smoothing (each zero-match order doubles the
// smoothing denominator), geometric mean, brevity penalty, with empty
// hypotheses and missing orders collapsing to 0.
inline double oracle_bleu(const std::vector<std::string>& hyps,
                          const std::vector<std::string>& refs, int max_n = 4) {
  std::vector<long> correct(max_n, 0), total(max_n, 0);
  long hyp_len = 0, ref_len = 0;
  for (size_t s = 0; s < hyps.size(); ++s) {
    auto h = oracle_tokenize_13a(hyps[s]);
    auto r = oracle_tokenize_13a(refs[s]);
    hyp_len += static_cast<long>(h.size());
    ref_len += static_cast<long>(r.size());
    for (int n = 1; n <= max_n; ++n) {
      std::map<std::vector<std::string>, long> hc, rc;
      for (size_t i = 0; i + n <= h.size(); ++i)
        ++hc[std::vector<std::string>(h.begin() + i, h.begin() + i + n)];
      for (size_t i = 0; i + n <= r.size(); ++i)
        ++rc[std::vector<std::string>(r.begin() + i, r.begin() + i + n)];
      for (auto& [g, c] : hc) {
        total[n - 1] += c;
        auto it = rc.find(g);
        if (it != rc.end()) correct[n - 1] += std::min(c, it->second);
      }
    }
  }
  if (hyp_len == 0) return 0.0;
  double log_sum = 0.0, smooth = 1.0;
  for (int n = 0; n < max_n; ++n) {
    if (total[n] == 0) return 0.0;
    double p;
    if (correct[n] == 0) {
      smooth *= 2.0;
      p = 1.0 / (smooth * static_cast<double>(total[n]));
    } else {
      p = static_cast<double>(correct[n]) / static_cast<double>(total[n]);
    }
    log_sum += std::log(p);
  }
  double bp =
      hyp_len >= ref_len ? 1.0 : std::exp(1.0 - static_cast<double>(ref_len) / hyp_len);
  return 100.0 * bp * std::exp(log_sum / max_n);
}

// Reference splitmix64 + Fisher-Yates, restated independently so the
// transfer tests can enumerate expected shuffles by hand.
struct OracleRng {
  uint64_t state;
  explicit OracleRng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[next() % i]);
  }
};

}  // namespace testsupport
