#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "translit/error.hpp"
#include "translit/rng.hpp"
#include "translit/utf8.hpp"

namespace translit {

struct ChrfConfig {
  int max_n = 6;
  double beta = 2.0;
  bool whitespace_removed = true;
};

enum class BleuSmoothing { exp };
enum class BleuTokenizer { thirteen_a };

struct BleuConfig {
  int max_n = 4;
  BleuSmoothing smoothing = BleuSmoothing::exp;
  BleuTokenizer tokenizer = BleuTokenizer::thirteen_a;
};

struct BootstrapConfig {
  int samples = 1000;
  double alpha = 0.05;
  uint64_t seed = 0;
};

struct MetricReport {
  std::string metric;
  double score = 0.0;
  std::vector<double> segment_scores;
};

// ---------------------------------------------------------------- chrF

namespace chrf_detail {

// match / hypothesis-total / reference-total per n-gram order.
struct Counts {
  std::vector<int64_t> match, hyp, ref;
  explicit Counts(int max_n) : match(max_n, 0), hyp(max_n, 0), ref(max_n, 0) {}
  void add(const Counts& o) {
    for (size_t i = 0; i < match.size(); ++i) {
      match[i] += o.match[i];
      hyp[i] += o.hyp[i];
      ref[i] += o.ref[i];
    }
  }
};

inline std::u32string strip_ws(std::u32string_view s, bool remove) {
  std::u32string out;
  out.reserve(s.size());
  for (char32_t c : s)
    if (!remove || (c != U' ' && c != U'\t' && c != U'\n' && c != U'\r')) out.push_back(c);
  return out;
}

inline std::map<std::u32string, int64_t> ngram_counts(const std::u32string& s, int n) {
  std::map<std::u32string, int64_t> counts;
  if (static_cast<int>(s.size()) >= n)
    for (size_t i = 0; i + n <= s.size(); ++i) ++counts[s.substr(i, n)];
  return counts;
}

inline Counts segment_counts(std::string_view hyp, std::string_view ref,
                             const ChrfConfig& cfg) {
  Counts c(cfg.max_n);
  std::u32string h = strip_ws(decode_utf8(hyp), cfg.whitespace_removed);
  std::u32string r = strip_ws(decode_utf8(ref), cfg.whitespace_removed);
  for (int n = 1; n <= cfg.max_n; ++n) {
    auto hc = ngram_counts(h, n);
    auto rc = ngram_counts(r, n);
    for (const auto& [gram, count] : hc) {
      c.hyp[n - 1] += count;
      auto it = rc.find(gram);
      if (it != rc.end()) c.match[n - 1] += std::min(count, it->second);
    }
    for (const auto& [gram, count] : rc) c.ref[n - 1] += count;
  }
  return c;
}

// F-beta over macro-averaged n-gram precision and recall. Orders where
// neither side has any n-grams are excluded from the average; with no
// effective order at all the score is 0.
inline double score_from_counts(const Counts& c, const ChrfConfig& cfg) {
  double sum_p = 0.0, sum_r = 0.0;
  int effective = 0;
  for (int n = 0; n < cfg.max_n; ++n) {
    if (c.hyp[n] == 0 && c.ref[n] == 0) continue;
    ++effective;
    sum_p += c.hyp[n] > 0 ? static_cast<double>(c.match[n]) / c.hyp[n] : 0.0;
    sum_r += c.ref[n] > 0 ? static_cast<double>(c.match[n]) / c.ref[n] : 0.0;
  }
  if (effective == 0) return 0.0;
  double p = sum_p / effective;
  double r = sum_r / effective;
  double b2 = cfg.beta * cfg.beta;
  double denom = b2 * p + r;
  if (denom <= 0.0) return 0.0;
  return 100.0 * (1.0 + b2) * p * r / denom;
}

}  // namespace chrf_detail

inline void validate(const ChrfConfig& cfg) {
  if (cfg.max_n < 1) throw usage_error("chrf: max_n must be >= 1");
  if (!(cfg.beta > 0.0)) throw usage_error("chrf: beta must be > 0");
}

inline double chrf(std::string_view hyp, std::string_view ref, const ChrfConfig& cfg = {}) {
  validate(cfg);
  return chrf_detail::score_from_counts(chrf_detail::segment_counts(hyp, ref, cfg), cfg);
}

// Corpus chrF aggregates match/total counts over all segments (micro
// average) before averaging over n-gram orders.
inline double chrf_corpus(const std::vector<std::string>& hyps,
                          const std::vector<std::string>& refs, const ChrfConfig& cfg = {}) {
  validate(cfg);
  if (hyps.size() != refs.size())
    throw data_error("chrf: hypothesis and reference corpora differ in length (" +
                     std::to_string(hyps.size()) + " vs " + std::to_string(refs.size()) + ")");
  chrf_detail::Counts total(cfg.max_n);
  for (size_t i = 0; i < hyps.size(); ++i)
    total.add(chrf_detail::segment_counts(hyps[i], refs[i], cfg));
  return chrf_detail::score_from_counts(total, cfg);
}

// ---------------------------------------------------------------- BLEU

// 13a-style tokenization, ASCII-rule based and byte-safe for UTF-8:
//   - &quot; &amp; &lt; &gt; are unescaped first
//   - ASCII symbol characters are split off as single tokens
//   - '.' and ',' stay attached only between two digits
//   - '-' is split after a digit
inline std::vector<std::string> tokenize_13a(std::string_view line) {
  std::string s(line);
  for (auto [entity, repl] : std::initializer_list<std::pair<const char*, const char*>>{
           {"&quot;", "\""}, {"&amp;", "&"}, {"&lt;", "<"}, {"&gt;", ">"}}) {
    size_t pos = 0;
    std::string ent(entity);
    while ((pos = s.find(ent, pos)) != std::string::npos) {
      s.replace(pos, ent.size(), repl);
      pos += std::strlen(repl);
    }
  }

  auto is_symbol = [](unsigned char c) {
    return (c >= 0x20 && c <= 0x26) || (c >= 0x28 && c <= 0x2B) || c == 0x2F ||
           (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  };
  auto digit = [](unsigned char c) { return c >= '0' && c <= '9'; };

  std::string spaced;
  spaced.reserve(s.size() * 2);
  for (size_t i = 0; i < s.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    unsigned char prev = i > 0 ? static_cast<unsigned char>(s[i - 1]) : ' ';
    unsigned char next = i + 1 < s.size() ? static_cast<unsigned char>(s[i + 1]) : ' ';
    bool split = false;
    if (is_symbol(c))
      split = true;
    else if ((c == '.' || c == ',') && !(digit(prev) && digit(next)))
      split = true;
    else if (c == '-' && digit(prev))
      split = true;
    if (split) {
      spaced.push_back(' ');
      spaced.push_back(static_cast<char>(c));
      spaced.push_back(' ');
    } else {
      spaced.push_back(static_cast<char>(c));
    }
  }

  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < spaced.size()) {
    while (i < spaced.size() && std::isspace(static_cast<unsigned char>(spaced[i]))) ++i;
    size_t start = i;
    while (i < spaced.size() && !std::isspace(static_cast<unsigned char>(spaced[i]))) ++i;
    if (i > start) tokens.push_back(spaced.substr(start, i - start));
  }
  return tokens;
}

namespace bleu_detail {

struct Counts {
  std::vector<int64_t> correct, total;
  int64_t hyp_len = 0, ref_len = 0;
  explicit Counts(int max_n) : correct(max_n, 0), total(max_n, 0) {}
  void add(const Counts& o) {
    for (size_t i = 0; i < correct.size(); ++i) {
      correct[i] += o.correct[i];
      total[i] += o.total[i];
    }
    hyp_len += o.hyp_len;
    ref_len += o.ref_len;
  }
};

inline Counts segment_counts(std::string_view hyp, std::string_view ref,
                             const BleuConfig& cfg) {
  Counts c(cfg.max_n);
  auto h = tokenize_13a(hyp);
  auto r = tokenize_13a(ref);
  c.hyp_len = static_cast<int64_t>(h.size());
  c.ref_len = static_cast<int64_t>(r.size());
  auto join = [](const std::vector<std::string>& toks, size_t i, int n) {
    std::string g = toks[i];
    for (int k = 1; k < n; ++k) {
      g.push_back('\x1f');
      g += toks[i + k];
    }
    return g;
  };
  for (int n = 1; n <= cfg.max_n; ++n) {
    if (static_cast<int>(h.size()) < n && static_cast<int>(r.size()) < n) break;
    std::map<std::string, int64_t> hc, rc;
    for (size_t i = 0; i + n <= h.size(); ++i) ++hc[join(h, i, n)];
    for (size_t i = 0; i + n <= r.size(); ++i) ++rc[join(r, i, n)];
    for (const auto& [gram, count] : hc) {
      c.total[n - 1] += count;
      auto it = rc.find(gram);
      if (it != rc.end()) c.correct[n - 1] += std::min(count, it->second);
    }
  }
  return c;
}

// Geometric mean of modified n-gram precisions with exponential
// smoothing of zero-match orders, times the brevity penalty. An empty
// hypothesis corpus scores 0 (brevity penalty 0).
inline double score_from_counts(const Counts& c, const BleuConfig& cfg) {
  if (c.hyp_len == 0) return 0.0;
  double log_sum = 0.0;
  double smooth = 1.0;
  for (int n = 0; n < cfg.max_n; ++n) {
    double p;
    if (c.total[n] == 0) {
      return 0.0;  // no n-grams of this order at all
    } else if (c.correct[n] == 0) {
      smooth *= 2.0;
      p = 1.0 / (smooth * static_cast<double>(c.total[n]));
    } else {
      p = static_cast<double>(c.correct[n]) / static_cast<double>(c.total[n]);
    }
    log_sum += std::log(p);
  }
  double bp = c.hyp_len >= c.ref_len
                  ? 1.0
                  : std::exp(1.0 - static_cast<double>(c.ref_len) /
                                       static_cast<double>(c.hyp_len));
  return 100.0 * bp * std::exp(log_sum / cfg.max_n);
}

}  // namespace bleu_detail

inline double bleu(const std::vector<std::string>& hyps, const std::vector<std::string>& refs,
                   const BleuConfig& cfg = {}) {
  if (hyps.size() != refs.size())
    throw data_error("bleu: hypothesis and reference corpora differ in length (" +
                     std::to_string(hyps.size()) + " vs " + std::to_string(refs.size()) + ")");
  bleu_detail::Counts total(cfg.max_n);
  for (size_t i = 0; i < hyps.size(); ++i)
    total.add(bleu_detail::segment_counts(hyps[i], refs[i], cfg));
  return bleu_detail::score_from_counts(total, cfg);
}

// ------------------------------------------------------- paired bootstrap

enum class Metric { chrf, bleu };

inline Metric metric_from_string(std::string_view s) {
  if (s == "chrf") return Metric::chrf;
  if (s == "bleu") return Metric::bleu;
  throw usage_error("unknown metric: " + std::string(s));
}

struct BootstrapResult {
  double p_a_better = 0.0;
  double p_b_better = 0.0;
  bool significant = false;
  double score_a = 0.0;  // full-corpus scores, for reporting
  double score_b = 0.0;
};

// Paired bootstrap resampling: draw segment indices with replacement,
// rescore both systems on each resample and count strict wins. A
// system is significantly better when it wins in at least (1 - alpha)
// of the resamples. Per-segment sufficient statistics are precomputed,
// so each resample is a sum plus the closed-form score.
inline BootstrapResult paired_bootstrap(const std::vector<std::string>& sys_a,
                                        const std::vector<std::string>& sys_b,
                                        const std::vector<std::string>& refs, Metric metric,
                                        const BootstrapConfig& cfg = {},
                                        const ChrfConfig& chrf_cfg = {},
                                        const BleuConfig& bleu_cfg = {}) {
  if (sys_a.size() != refs.size() || sys_b.size() != refs.size())
    throw data_error("bootstrap: corpora differ in length");
  if (refs.empty()) throw data_error("bootstrap: empty corpora");
  if (cfg.samples < 1) throw usage_error("bootstrap: samples must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw usage_error("bootstrap: alpha must be in (0, 1)");

  const size_t n = refs.size();
  BootstrapResult result;
  int wins_a = 0, wins_b = 0;
  Rng rng(cfg.seed);

  auto run = [&](auto make_stats, auto score) {
    using Stats = decltype(make_stats(std::string_view(), std::string_view()));
    std::vector<Stats> stats_a, stats_b;
    stats_a.reserve(n);
    stats_b.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      stats_a.push_back(make_stats(sys_a[i], refs[i]));
      stats_b.push_back(make_stats(sys_b[i], refs[i]));
    }
    auto total = [&](const std::vector<Stats>& stats) {
      Stats t = stats[0];
      for (size_t i = 1; i < stats.size(); ++i) t.add(stats[i]);
      return t;
    };
    result.score_a = score(total(stats_a));
    result.score_b = score(total(stats_b));
    std::vector<size_t> indices(n);
    for (int s = 0; s < cfg.samples; ++s) {
      for (size_t i = 0; i < n; ++i) indices[i] = static_cast<size_t>(rng.bounded(n));
      Stats ta = stats_a[indices[0]];
      Stats tb = stats_b[indices[0]];
      for (size_t i = 1; i < n; ++i) {
        ta.add(stats_a[indices[i]]);
        tb.add(stats_b[indices[i]]);
      }
      double a = score(ta), b = score(tb);
      if (a > b)
        ++wins_a;
      else if (b > a)
        ++wins_b;
    }
  };

  if (metric == Metric::chrf)
    run([&](std::string_view h, std::string_view r) {
          return chrf_detail::segment_counts(h, r, chrf_cfg);
        },
        [&](const chrf_detail::Counts& c) { return chrf_detail::score_from_counts(c, chrf_cfg); });
  else
    run([&](std::string_view h, std::string_view r) {
          return bleu_detail::segment_counts(h, r, bleu_cfg);
        },
        [&](const bleu_detail::Counts& c) { return bleu_detail::score_from_counts(c, bleu_cfg); });

  result.p_a_better = static_cast<double>(wins_a) / cfg.samples;
  result.p_b_better = static_cast<double>(wins_b) / cfg.samples;
  double threshold = 1.0 - cfg.alpha;
  result.significant = result.p_a_better + 1e-12 >= threshold ||
                       result.p_b_better + 1e-12 >= threshold;
  return result;
}

// ------------------------------------------------------------ type counts

// Number of distinct whitespace-delimited tokens.
inline int64_t type_count(const std::vector<std::string>& corpus) {
  std::unordered_set<std::string> types;
  for (const auto& line : corpus) {
    size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) types.insert(line.substr(start, i - start));
    }
  }
  return static_cast<int64_t>(types.size());
}

// Character-level overlap between two corpora: each corpus is
// concatenated into one segment and scored with chrF, first argument
// as hypothesis. The direction matters for the recall side.
inline double char_overlap(const std::vector<std::string>& corpus_a,
                           const std::vector<std::string>& corpus_b,
                           const ChrfConfig& cfg = {}) {
  auto join = [](const std::vector<std::string>& corpus) {
    std::string out;
    for (const auto& line : corpus) {
      if (!out.empty()) out.push_back(' ');
      out += line;
    }
    return out;
  };
  return chrf(join(corpus_a), join(corpus_b), cfg);
}

}  // namespace translit
