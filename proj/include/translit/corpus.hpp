#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "translit/error.hpp"
#include "translit/rng.hpp"

namespace translit {

inline std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot read " + path);
  return read_lines(in);
}

inline void write_lines(const std::vector<std::string>& lines, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write " + path);
  for (const auto& line : lines) out << line << '\n';
}

struct ParallelCorpus {
  std::vector<std::string> source;
  std::vector<std::string> target;
  std::string source_lang;
  std::string target_lang;

  size_t size() const { return source.size(); }

  void check() const {
    if (source.size() != target.size())
      throw data_error("parallel corpus: " + std::to_string(source.size()) + " source vs " +
                       std::to_string(target.size()) + " target sentences");
  }
};

// 2-column TSV, source first; the first tab separates.
inline ParallelCorpus load_parallel_tsv(std::istream& in, const std::string& name) {
  ParallelCorpus corpus;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw data_error(name + ":" + std::to_string(lineno) + ": expected source<TAB>target");
    corpus.source.push_back(line.substr(0, tab));
    corpus.target.push_back(line.substr(tab + 1));
  }
  return corpus;
}

inline ParallelCorpus load_parallel_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot read " + path);
  return load_parallel_tsv(in, path);
}

inline ParallelCorpus load_parallel(const std::string& source_path,
                                    const std::string& target_path) {
  ParallelCorpus corpus;
  corpus.source = read_lines(source_path);
  corpus.target = read_lines(target_path);
  corpus.check();
  return corpus;
}

inline void save_parallel_tsv(const ParallelCorpus& corpus, std::ostream& out) {
  for (size_t i = 0; i < corpus.size(); ++i)
    out << corpus.source[i] << '\t' << corpus.target[i] << '\n';
}

// Prepends the target-language indicator token `<2xx>` to every source
// line. Not idempotent; tagging twice double-tags.
inline ParallelCorpus tag_targets(const ParallelCorpus& corpus, const std::string& target_lang) {
  if (target_lang.empty()) throw usage_error("tag: empty language code");
  for (char c : target_lang)
    if (std::isspace(static_cast<unsigned char>(c)))
      throw usage_error("tag: language code contains whitespace: `" + target_lang + "`");
  ParallelCorpus tagged = corpus;
  std::string token = "<2" + target_lang + "> ";
  for (auto& line : tagged.source) line = token + line;
  tagged.target_lang = target_lang;
  return tagged;
}

struct MixtureSpec {
  int64_t parent_take = 250000;
  int64_t total_target = 650000;
  uint64_t shuffle_seed = 0;
};

// Finetuning mixture: parent_take seeded-shuffled parent pairs plus the
// child corpus repeated whole and truncated to fill total_target, then
// one final shuffle. Both shuffles draw from the same generator, so the
// spec seed fixes the output order completely.
inline ParallelCorpus mix_corpora(const ParallelCorpus& parent, const ParallelCorpus& child,
                                  const MixtureSpec& spec) {
  parent.check();
  child.check();
  if (spec.parent_take >= spec.total_target)
    throw usage_error("mix: parent_take must be below total_target");
  if (spec.parent_take < 0) throw usage_error("mix: parent_take must be >= 0");
  if (static_cast<int64_t>(parent.size()) < spec.parent_take)
    throw data_error("mix: parent corpus has " + std::to_string(parent.size()) +
                     " pairs, need " + std::to_string(spec.parent_take));
  if (child.size() == 0) throw data_error("mix: empty child corpus");

  Rng rng(spec.shuffle_seed);
  std::vector<size_t> parent_order(parent.size());
  for (size_t i = 0; i < parent_order.size(); ++i) parent_order[i] = i;
  rng.shuffle(parent_order);

  const size_t child_fill = static_cast<size_t>(spec.total_target - spec.parent_take);
  ParallelCorpus mixed;
  mixed.source.reserve(static_cast<size_t>(spec.total_target));
  mixed.target.reserve(static_cast<size_t>(spec.total_target));
  for (size_t i = 0; i < static_cast<size_t>(spec.parent_take); ++i) {
    mixed.source.push_back(parent.source[parent_order[i]]);
    mixed.target.push_back(parent.target[parent_order[i]]);
  }
  for (size_t i = 0; i < child_fill; ++i) {
    mixed.source.push_back(child.source[i % child.size()]);
    mixed.target.push_back(child.target[i % child.size()]);
  }

  std::vector<size_t> order(mixed.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  ParallelCorpus out;
  out.source.reserve(mixed.size());
  out.target.reserve(mixed.size());
  for (size_t i : order) {
    out.source.push_back(std::move(mixed.source[i]));
    out.target.push_back(std::move(mixed.target[i]));
  }
  out.source_lang = parent.source_lang == child.source_lang
                        ? parent.source_lang
                        : parent.source_lang + "+" + child.source_lang;
  out.target_lang = parent.target_lang == child.target_lang
                        ? parent.target_lang
                        : parent.target_lang + "+" + child.target_lang;
  return out;
}

}  // namespace translit
