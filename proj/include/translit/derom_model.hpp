#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "translit/char_encoding.hpp"
#include "translit/error.hpp"
#include "translit/mapping_table.hpp"
#include "translit/metrics.hpp"
#include "translit/romanize.hpp"
#include "translit/unicode.hpp"
#include "translit/utf8.hpp"

namespace translit {

struct DeromConfig {
  int k = 5;         // LM order
  double alpha = 0.1;
  double lambda = 1.0;
  int beam = 8;
};

inline void validate(const DeromConfig& cfg) {
  if (cfg.k < 1) throw usage_error("deromanizer: k must be >= 1");
  if (!(cfg.alpha > 0.0)) throw usage_error("deromanizer: alpha must be > 0");
  if (cfg.beam < 1) throw usage_error("deromanizer: beam must be >= 1");
}

struct TrainingPair {
  std::string romanized;
  std::string original;
  // (codeword, grapheme) pairs; concatenated codewords reproduce the
  // romanized side and concatenated graphemes the original side.
  std::optional<std::vector<std::pair<std::u32string, std::u32string>>> alignment;
};

// Romanizes each sentence and records the per-grapheme alignment the
// scan produces. Codewords emitted empty (dropped modifiers, deleted
// word spaces) are folded into the preceding pair so every stored
// codeword has length >= 1; spaces inserted by the scan pair with an
// empty grapheme instead.
inline std::vector<TrainingPair> make_training_pairs(const std::vector<std::string>& corpus,
                                                     const MappingTable& table,
                                                     RomanizationMode mode) {
  std::vector<TrainingPair> pairs;
  pairs.reserve(corpus.size());
  for (const auto& line : corpus) {
    std::u32string original = nfc(decode_utf8(line));
    TrainingPair pair;
    pair.original = encode_utf8(original);
    std::vector<std::pair<std::u32string, std::u32string>> alignment;
    std::u32string romanized;
    std::u32string orphan;  // graphemes preceding the first nonempty codeword
    for (const auto& step : scan_romanize(original, table, mode)) {
      romanized += step.output;
      if (step.output.empty()) {
        if (!alignment.empty())
          alignment.back().second += step.source;
        else
          orphan += step.source;
        continue;
      }
      std::u32string grapheme = orphan + step.source;
      orphan.clear();
      alignment.emplace_back(step.output, std::move(grapheme));
    }
    if (!orphan.empty()) alignment.emplace_back(U"", orphan);
    pair.romanized = encode_utf8(romanized);
    pair.alignment = std::move(alignment);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

// Fills in the alignment of an externally supplied pair by
// re-romanizing its original side. A mismatch against the stored
// romanized side is an error, not a heuristic fallback.
inline void align_pair(TrainingPair& pair, const MappingTable& table, RomanizationMode mode,
                       size_t lineno = 0) {
  TrainingPair regenerated = make_training_pairs({pair.original}, table, mode).front();
  if (regenerated.romanized != pair.romanized) {
    std::string where = lineno ? "pair " + std::to_string(lineno) : "pair";
    throw data_error(where + ": romanized side `" + pair.romanized +
                     "` does not match the table's romanization `" + regenerated.romanized +
                     "` of `" + pair.original + "`");
  }
  pair.alignment = std::move(regenerated.alignment);
}

class DeromanizerModel {
 public:
  DeromConfig config;
  std::string table_fingerprint;
  // codeword -> grapheme -> count
  std::map<std::u32string, std::map<std::u32string, int64_t>> channel;
  // k-gram -> count, over original-script text padded with BOS/EOS
  std::map<std::u32string, int64_t> lm_counts;

  static constexpr char32_t kBos = U'';
  static constexpr char32_t kEos = U'';

  // Rebuilds derived lookups; call after filling the count tables.
  void finalize() {
    channel_totals_.clear();
    context_totals_.clear();
    lm_vocab_.clear();
    by_first_.clear();
    for (const auto& [codeword, graphemes] : channel) {
      int64_t total = 0;
      for (const auto& [g, count] : graphemes) total += count;
      channel_totals_[codeword] = total;
      by_first_[codeword.front()].push_back(&codeword);
    }
    for (auto& [first, list] : by_first_)
      std::sort(list.begin(), list.end(), [](const std::u32string* a, const std::u32string* b) {
        if (a->size() != b->size()) return a->size() > b->size();
        return *a < *b;
      });
    for (const auto& [gram, count] : lm_counts) {
      context_totals_[gram.substr(0, gram.size() - 1)] += count;
      lm_vocab_.insert(gram.back());
    }
  }

  double log_channel(const std::u32string& codeword, const std::u32string& grapheme) const {
    const auto& graphemes = channel.at(codeword);
    double total = static_cast<double>(channel_totals_.at(codeword));
    double count = static_cast<double>(graphemes.at(grapheme));
    return std::log((count + config.alpha) /
                    (total + config.alpha * static_cast<double>(graphemes.size())));
  }

  // Add-alpha with one out-of-vocabulary slot; an unseen context is the
  // uniform distribution over V+1 outcomes.
  double log_lm(const std::u32string& context, char32_t next) const {
    double v1 = static_cast<double>(lm_vocab_.size()) + 1.0;
    int64_t total = 0;
    if (auto it = context_totals_.find(context); it != context_totals_.end()) total = it->second;
    int64_t count = 0;
    if (auto it = lm_counts.find(context + next); it != lm_counts.end()) count = it->second;
    return std::log((static_cast<double>(count) + config.alpha) /
                    (static_cast<double>(total) + config.alpha * v1));
  }

  const std::vector<const std::u32string*>* codewords_starting(char32_t c) const {
    auto it = by_first_.find(c);
    return it == by_first_.end() ? nullptr : &it->second;
  }

  std::vector<std::string> codewords() const {
    std::vector<std::string> out;
    out.reserve(channel.size());
    for (const auto& [codeword, graphemes] : channel) out.push_back(encode_utf8(codeword));
    return out;
  }

 private:
  std::map<std::u32string, int64_t> channel_totals_;
  std::unordered_map<std::u32string, int64_t> context_totals_;
  std::set<char32_t> lm_vocab_;  // predicted symbols, EOS included
  std::map<char32_t, std::vector<const std::u32string*>> by_first_;
};

inline DeromanizerModel train_deromanizer(const std::vector<TrainingPair>& pairs,
                                          const DeromConfig& config,
                                          const std::string& table_fingerprint = "") {
  validate(config);
  if (pairs.empty()) throw data_error("deromanizer: insufficient data (no training pairs)");

  DeromanizerModel model;
  model.config = config;
  model.table_fingerprint = table_fingerprint;

  for (size_t i = 0; i < pairs.size(); ++i) {
    const auto& pair = pairs[i];
    if (!pair.alignment)
      throw data_error("pair " + std::to_string(i + 1) +
                       ": missing alignment (align against the generating table first)");
    std::u32string romanized, original;
    for (const auto& [codeword, grapheme] : *pair.alignment) {
      romanized += codeword;
      original += grapheme;
      if (!codeword.empty()) ++model.channel[codeword][grapheme];
    }
    if (encode_utf8(romanized) != pair.romanized || encode_utf8(original) != pair.original)
      throw data_error("pair " + std::to_string(i + 1) +
                       ": alignment does not concatenate to its sides");

    std::u32string seq(static_cast<size_t>(config.k - 1), DeromanizerModel::kBos);
    seq += original;
    seq.push_back(DeromanizerModel::kEos);
    for (size_t pos = static_cast<size_t>(config.k) - 1; pos < seq.size(); ++pos)
      ++model.lm_counts[seq.substr(pos + 1 - config.k, config.k)];
  }
  model.finalize();
  return model;
}

// Beam search over segmentations of the input into known codewords.
// Positions with no matching codeword consume one codepoint as an
// identity pair at channel cost zero. States are deduplicated on the LM
// context; ties anywhere resolve to the lexicographically smaller
// output.
inline std::string deromanize(const DeromanizerModel& model, std::string_view text) {
  std::u32string input = nfc(decode_utf8(text));
  const size_t n = input.size();
  const size_t ctx_len = static_cast<size_t>(model.config.k) - 1;

  struct State {
    double score = 0.0;
    std::u32string context;
    std::u32string output;
  };
  auto better = [](const State& a, const State& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.output < b.output;
  };

  std::vector<std::map<std::u32string, State>> buckets(n + 1);
  buckets[0].emplace(std::u32string(ctx_len, DeromanizerModel::kBos),
                     State{0.0, std::u32string(ctx_len, DeromanizerModel::kBos), U""});

  auto relax = [&](size_t pos, State&& state) {
    auto [it, inserted] = buckets[pos].try_emplace(state.context, state);
    if (!inserted && better(state, it->second)) it->second = std::move(state);
  };
  auto extend = [&](const State& state, const std::u32string& grapheme, double channel_logp) {
    State next = state;
    next.score += channel_logp;
    for (char32_t c : grapheme) {
      next.score += model.config.lambda * model.log_lm(next.context, c);
      if (ctx_len > 0) {
        next.context.push_back(c);
        if (next.context.size() > ctx_len) next.context.erase(next.context.begin());
      }
      next.output.push_back(c);
    }
    return next;
  };

  for (size_t pos = 0; pos < n; ++pos) {
    if (buckets[pos].empty()) continue;
    std::vector<State> frontier;
    frontier.reserve(buckets[pos].size());
    for (auto& [context, state] : buckets[pos]) frontier.push_back(std::move(state));
    std::sort(frontier.begin(), frontier.end(), better);
    if (frontier.size() > static_cast<size_t>(model.config.beam))
      frontier.resize(static_cast<size_t>(model.config.beam));

    const auto* candidates = model.codewords_starting(input[pos]);
    bool matched = false;
    if (candidates)
      for (const std::u32string* codeword : *candidates) {
        if (codeword->size() > n - pos || input.compare(pos, codeword->size(), *codeword) != 0)
          continue;
        matched = true;
        for (const auto& [grapheme, count] : model.channel.at(*codeword)) {
          double logp = model.log_channel(*codeword, grapheme);
          for (const auto& state : frontier)
            relax(pos + codeword->size(), extend(state, grapheme, logp));
        }
      }
    if (!matched) {
      std::u32string identity(1, input[pos]);
      for (const auto& state : frontier) relax(pos + 1, extend(state, identity, 0.0));
    }
  }

  const State* best = nullptr;
  State final_state;
  for (const auto& [context, state] : buckets[n]) {
    State candidate = state;
    candidate.score +=
        model.config.lambda * model.log_lm(candidate.context, DeromanizerModel::kEos);
    if (!best || better(candidate, final_state)) {
      final_state = std::move(candidate);
      best = &final_state;
    }
  }
  return best ? encode_utf8(final_state.output) : std::string();
}

inline MetricReport evaluate_deromanization(const DeromanizerModel& model,
                                            const std::vector<TrainingPair>& test_pairs,
                                            const ChrfConfig& chrf_cfg = {}) {
  MetricReport report;
  report.metric = "chrf";
  std::vector<std::string> hyps, refs;
  hyps.reserve(test_pairs.size());
  refs.reserve(test_pairs.size());
  for (const auto& pair : test_pairs) {
    hyps.push_back(deromanize(model, pair.romanized));
    refs.push_back(pair.original);
    report.segment_scores.push_back(chrf(hyps.back(), refs.back(), chrf_cfg));
  }
  report.score = chrf_corpus(hyps, refs, chrf_cfg);
  return report;
}

// ----------------------------------------------------------- persistence

inline nlohmann::json model_to_json(const DeromanizerModel& model) {
  nlohmann::json channel = nlohmann::json::object();
  for (const auto& [codeword, graphemes] : model.channel) {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [g, count] : graphemes) counts[encode_utf8(g)] = count;
    channel[encode_utf8(codeword)] = std::move(counts);
  }
  nlohmann::json lm = nlohmann::json::object();
  for (const auto& [gram, count] : model.lm_counts) lm[encode_utf8(gram)] = count;
  return nlohmann::json{{"config",
                         {{"k", model.config.k},
                          {"alpha", model.config.alpha},
                          {"lambda", model.config.lambda},
                          {"beam", model.config.beam}}},
                        {"table_fingerprint", model.table_fingerprint},
                        {"codewords", model.codewords()},
                        {"channel_counts", channel},
                        {"lm_counts", lm}};
}

inline DeromanizerModel model_from_json(const nlohmann::json& j) {
  DeromanizerModel model;
  try {
    model.config.k = j.at("config").at("k").get<int>();
    model.config.alpha = j.at("config").at("alpha").get<double>();
    model.config.lambda = j.at("config").at("lambda").get<double>();
    model.config.beam = j.at("config").at("beam").get<int>();
    model.table_fingerprint = j.at("table_fingerprint").get<std::string>();
    for (const auto& [codeword, counts] : j.at("channel_counts").items()) {
      std::u32string s = decode_utf8(codeword);
      if (s.empty()) throw data_error("model: empty codeword in channel");
      for (const auto& [g, count] : counts.items())
        model.channel[s][decode_utf8(g)] = count.get<int64_t>();
    }
    for (const auto& [gram, count] : j.at("lm_counts").items()) {
      std::u32string g = decode_utf8(gram);
      if (static_cast<int>(g.size()) != model.config.k)
        throw data_error("model: LM gram length does not match k: " + gram);
      model.lm_counts[g] = count.get<int64_t>();
    }
    auto listed = j.at("codewords").get<std::vector<std::string>>();
    std::sort(listed.begin(), listed.end());
    auto derived = model.codewords();
    std::sort(derived.begin(), derived.end());
    if (listed != derived) throw data_error("model: codewords do not match channel counts");
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("model: malformed JSON: ") + e.what());
  }
  validate(model.config);
  model.finalize();
  return model;
}

inline void save_model(const DeromanizerModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write " + path);
  out << model_to_json(model).dump() << '\n';
}

inline DeromanizerModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw data_error(path + ": invalid JSON: " + e.what());
  }
  return model_from_json(j);
}

// Two-column TSV of (romanized, original) pairs; the first tab is the
// separator.
inline std::vector<TrainingPair> load_pairs_tsv(std::istream& in, const std::string& name) {
  std::vector<TrainingPair> pairs;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw data_error(name + ":" + std::to_string(lineno) + ": expected romanized<TAB>original");
    TrainingPair pair;
    pair.romanized = line.substr(0, tab);
    pair.original = line.substr(tab + 1);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

inline std::vector<TrainingPair> load_pairs_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot read " + path);
  return load_pairs_tsv(in, path);
}

}  // namespace translit
