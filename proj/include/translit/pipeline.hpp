#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "translit/bpe.hpp"
#include "translit/corpus.hpp"
#include "translit/derom_model.hpp"
#include "translit/error.hpp"
#include "translit/mapping_table.hpp"
#include "translit/metrics.hpp"
#include "translit/rng.hpp"
#include "translit/romanize.hpp"

namespace translit {

struct AblationRow {
  double fraction = 0.0;
  uint64_t seed = 0;
  double chrf = 0.0;
};

// Data-size ablation for the deromanizer. The final tenth of the corpus
// is the held-out test set for every run; each seed shuffles the
// remaining pool once and every fraction takes a prefix, so the subsets
// are nested per seed.
inline std::vector<AblationRow> derom_ablation(const std::vector<std::string>& corpus,
                                               const MappingTable& table, RomanizationMode mode,
                                               const std::vector<double>& fractions,
                                               const std::vector<uint64_t>& seeds,
                                               const DeromConfig& config = {}) {
  for (double f : fractions)
    if (!(f > 0.0 && f <= 1.0))
      throw usage_error("ablate: fractions must lie in (0, 1]");
  std::vector<AblationRow> rows;
  if (fractions.empty() || seeds.empty()) return rows;

  const size_t test_count = corpus.size() / 10;
  if (test_count == 0)
    throw data_error("ablate: corpus too small to hold out a tenth (" +
                     std::to_string(corpus.size()) + " sentences)");
  const size_t pool_size = corpus.size() - test_count;
  std::vector<std::string> pool(corpus.begin(), corpus.begin() + pool_size);
  std::vector<std::string> test(corpus.begin() + pool_size, corpus.end());
  std::vector<TrainingPair> test_pairs = make_training_pairs(test, table, mode);
  std::string fingerprint = table.fingerprint(mode);

  std::vector<std::vector<size_t>> orders;
  for (uint64_t seed : seeds) {
    std::vector<size_t> order(pool_size);
    for (size_t i = 0; i < pool_size; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);
    orders.push_back(std::move(order));
  }

  for (double fraction : fractions) {
    size_t count = static_cast<size_t>(fraction * static_cast<double>(pool_size));
    if (count == 0)
      throw data_error("ablate: fraction " + std::to_string(fraction) +
                       " yields zero training sentences");
    for (size_t s = 0; s < seeds.size(); ++s) {
      std::vector<std::string> subset;
      subset.reserve(count);
      for (size_t i = 0; i < count; ++i) subset.push_back(pool[orders[s][i]]);
      auto pairs = make_training_pairs(subset, table, mode);
      auto model = train_deromanizer(pairs, config, fingerprint);
      rows.push_back({fraction, seeds[s], evaluate_deromanization(model, test_pairs).score});
    }
  }
  return rows;
}

inline std::string ablation_tsv(const std::vector<AblationRow>& rows) {
  std::string out = "fraction\tseed\tchrf\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%g\t%llu\t%.4f\n", row.fraction,
                  static_cast<unsigned long long>(row.seed), row.chrf);
    out += buf;
  }
  return out;
}

inline nlohmann::json ablation_json(const std::vector<AblationRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : rows)
    out.push_back({{"fraction", row.fraction}, {"seed", row.seed}, {"chrf", row.chrf}});
  return out;
}

// ------------------------------------------------------------ corpus stats

struct CorpusStats {
  int64_t sentences = 0;
  int64_t tokens = 0;
  int64_t types = 0;
  std::optional<double> avg_subwords;  // with a vocab

  struct ModeStats {
    std::string mode;
    int64_t tokens = 0;
    int64_t types = 0;
    double types_change_pct = 0.0;
    std::optional<double> avg_subwords;
    std::optional<double> avg_subwords_change_pct;
  };
  std::vector<ModeStats> romanized;  // with a table, one entry per mode
};

namespace pipeline_detail {

inline int64_t token_count(const std::vector<std::string>& corpus) {
  int64_t tokens = 0;
  for (const auto& line : corpus) {
    bool in_token = false;
    for (char c : line) {
      bool ws = std::isspace(static_cast<unsigned char>(c));
      if (!ws && !in_token) ++tokens;
      in_token = !ws;
    }
  }
  return tokens;
}

inline double pct_change(double from, double to) {
  return from == 0.0 ? 0.0 : 100.0 * (to - from) / from;
}

}  // namespace pipeline_detail

inline CorpusStats corpus_stats(const std::vector<std::string>& corpus,
                                const SubwordVocab* vocab = nullptr,
                                const MappingTable* table = nullptr) {
  CorpusStats stats;
  stats.sentences = static_cast<int64_t>(corpus.size());
  stats.tokens = pipeline_detail::token_count(corpus);
  stats.types = type_count(corpus);
  if (vocab && !corpus.empty()) stats.avg_subwords = avg_subwords_per_sentence(corpus, *vocab);
  if (table) {
    for (RomanizationMode mode : {RomanizationMode::lossy, RomanizationMode::preserving}) {
      CorpusStats::ModeStats m;
      m.mode = to_string(mode);
      std::vector<std::string> romanized;
      romanized.reserve(corpus.size());
      for (const auto& line : corpus) romanized.push_back(romanize(line, *table, mode));
      m.tokens = pipeline_detail::token_count(romanized);
      m.types = type_count(romanized);
      m.types_change_pct = pipeline_detail::pct_change(static_cast<double>(stats.types),
                                                       static_cast<double>(m.types));
      if (vocab && !corpus.empty()) {
        m.avg_subwords = avg_subwords_per_sentence(romanized, *vocab);
        m.avg_subwords_change_pct = pipeline_detail::pct_change(*stats.avg_subwords, *m.avg_subwords);
      }
      stats.romanized.push_back(std::move(m));
    }
  }
  return stats;
}

inline nlohmann::json stats_to_json(const CorpusStats& stats) {
  nlohmann::json j{{"sentences", stats.sentences},
                   {"tokens", stats.tokens},
                   {"types", stats.types}};
  if (stats.avg_subwords) j["avg_subwords"] = *stats.avg_subwords;
  if (!stats.romanized.empty()) {
    nlohmann::json modes = nlohmann::json::object();
    for (const auto& m : stats.romanized) {
      nlohmann::json entry{{"tokens", m.tokens},
                           {"types", m.types},
                           {"types_change_pct", m.types_change_pct}};
      if (m.avg_subwords) entry["avg_subwords"] = *m.avg_subwords;
      if (m.avg_subwords_change_pct) entry["avg_subwords_change_pct"] = *m.avg_subwords_change_pct;
      modes[m.mode] = std::move(entry);
    }
    j["romanized"] = std::move(modes);
  }
  return j;
}

}  // namespace translit
