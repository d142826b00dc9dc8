#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "translit/bpe.hpp"
#include "translit/error.hpp"
#include "translit/rng.hpp"

namespace translit {

enum class AssignmentKind { matched, replaced };

inline std::string to_string(AssignmentKind k) {
  return k == AssignmentKind::matched ? "matched" : "replaced";
}

struct Assignment {
  std::string piece;
  // Parent position inherited by this piece. -1 only in reuse reports,
  // for pieces absent from the parent (they fall to UNK).
  int position = -1;
  AssignmentKind kind = AssignmentKind::matched;
};

struct TransferReport {
  std::vector<Assignment> assignments;  // one per child piece, child id order
  int matched_count = 0;
  int replaced_count = 0;
  int unused_remaining = 0;
  uint64_t seed = 0;
};

// Aligns the child vocabulary onto the parent: pieces present in both
// keep the parent position, the rest are assigned to distinct unmatched
// parent positions by a seeded shuffle. Matched assignments never
// depend on the seed.
inline TransferReport transfer_vocab(const SubwordVocab& parent, const SubwordVocab& child,
                                     uint64_t seed) {
  if (child.pieces.size() > parent.pieces.size())
    throw data_error("transfer: child vocab (" + std::to_string(child.pieces.size()) +
                     ") exceeds parent vocab (" + std::to_string(parent.pieces.size()) + ")");

  std::unordered_map<std::string, int> parent_pos;
  for (size_t i = 0; i < parent.pieces.size(); ++i)
    parent_pos.emplace(parent.pieces[i], static_cast<int>(i));
  std::unordered_set<std::string> child_set(child.pieces.begin(), child.pieces.end());

  TransferReport report;
  report.seed = seed;
  report.assignments.resize(child.pieces.size());

  std::set<int> taken;
  std::vector<size_t> unassigned;
  for (size_t c = 0; c < child.pieces.size(); ++c) {
    report.assignments[c].piece = child.pieces[c];
    auto it = parent_pos.find(child.pieces[c]);
    if (it != parent_pos.end() && taken.insert(it->second).second) {
      report.assignments[c].position = it->second;
      report.assignments[c].kind = AssignmentKind::matched;
      ++report.matched_count;
    } else {
      unassigned.push_back(c);
    }
  }

  std::vector<int> pool;
  for (size_t p = 0; p < parent.pieces.size(); ++p)
    if (!child_set.count(parent.pieces[p])) pool.push_back(static_cast<int>(p));
  if (unassigned.size() > pool.size())
    throw data_error("transfer: not enough unused parent positions (" +
                     std::to_string(pool.size()) + " for " +
                     std::to_string(unassigned.size()) + " pieces)");

  Rng rng(seed);
  rng.shuffle(pool);
  for (size_t k = 0; k < unassigned.size(); ++k) {
    report.assignments[unassigned[k]].position = pool[k];
    report.assignments[unassigned[k]].kind = AssignmentKind::replaced;
    ++report.replaced_count;
  }
  report.unused_remaining = static_cast<int>(pool.size() - unassigned.size());
  return report;
}

// Degenerate report for reusing the parent vocabulary as is: the child
// corpus is segmented with the parent model and every piece that occurs
// is matched at its parent position. Characters outside the parent's
// covered set are listed as replaced with position -1; they have no row
// to inherit and fall to UNK.
inline TransferReport reuse_parent_vocab(const SubwordVocab& parent,
                                         const std::vector<std::string>& child_corpus) {
  Segmenter seg(parent);
  std::set<char32_t> covered;
  for (const auto& ch : parent.covered_chars) covered.insert(decode_utf8(ch)[0]);

  std::set<int> used_ids;
  std::set<char32_t> absent_chars;
  for (const auto& line : child_corpus) {
    for (int id : seg.segment(line))
      if (id != kUnkId) used_ids.insert(id);
    for (const auto& word : bpe_detail::split_words(decode_utf8(line)))
      for (char32_t c : word)
        if (c != kWordBoundary && !covered.count(c)) absent_chars.insert(c);
  }

  TransferReport report;
  for (int id : used_ids) {
    report.assignments.push_back({parent.pieces[id], id, AssignmentKind::matched});
    ++report.matched_count;
  }
  for (char32_t c : absent_chars) {
    report.assignments.push_back({encode_utf8(c), -1, AssignmentKind::replaced});
    ++report.replaced_count;
  }
  report.unused_remaining =
      static_cast<int>(parent.pieces.size()) - report.matched_count;
  return report;
}

// ----------------------------------------------------------- persistence

inline nlohmann::json report_to_json(const TransferReport& report) {
  nlohmann::json assignments = nlohmann::json::array();
  for (const auto& a : report.assignments)
    assignments.push_back({{"piece", a.piece}, {"position", a.position}, {"kind", to_string(a.kind)}});
  return nlohmann::json{{"assignments", assignments},
                        {"matched_count", report.matched_count},
                        {"replaced_count", report.replaced_count},
                        {"unused_remaining", report.unused_remaining},
                        {"seed", report.seed}};
}

inline TransferReport report_from_json(const nlohmann::json& j) {
  TransferReport report;
  try {
    for (const auto& a : j.at("assignments")) {
      Assignment assignment;
      assignment.piece = a.at("piece").get<std::string>();
      assignment.position = a.at("position").get<int>();
      std::string kind = a.at("kind").get<std::string>();
      if (kind == "matched")
        assignment.kind = AssignmentKind::matched;
      else if (kind == "replaced")
        assignment.kind = AssignmentKind::replaced;
      else
        throw data_error("report: unknown assignment kind: " + kind);
      report.assignments.push_back(std::move(assignment));
    }
    report.matched_count = j.at("matched_count").get<int>();
    report.replaced_count = j.at("replaced_count").get<int>();
    report.unused_remaining = j.at("unused_remaining").get<int>();
    report.seed = j.at("seed").get<uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("report: malformed JSON: ") + e.what());
  }
  return report;
}

inline void save_report(const TransferReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write " + path);
  out << report_to_json(report).dump(2) << '\n';
}

inline TransferReport load_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw data_error(path + ": invalid JSON: " + e.what());
  }
  return report_from_json(j);
}

// ------------------------------------------------------------ embeddings

// Row-major matrix with a one-line `N D` header in the TSV form.
struct EmbeddingTable {
  size_t rows = 0;
  size_t dims = 0;
  std::vector<double> values;  // rows * dims

  const double* row(size_t r) const { return values.data() + r * dims; }
};

inline EmbeddingTable load_embeddings(std::istream& in, const std::string& name) {
  EmbeddingTable table;
  std::string line;
  if (!std::getline(in, line)) throw data_error(name + ": empty embedding file");
  {
    std::istringstream header(line);
    long long n = -1, d = -1;
    if (!(header >> n >> d) || n < 0 || d <= 0)
      throw data_error(name + ": expected `N D` header, got: " + line);
    std::string extra;
    if (header >> extra) throw data_error(name + ": expected `N D` header, got: " + line);
    table.rows = static_cast<size_t>(n);
    table.dims = static_cast<size_t>(d);
  }
  table.values.reserve(table.rows * table.dims);
  for (size_t r = 0; r < table.rows; ++r) {
    if (!std::getline(in, line))
      throw data_error(name + ": expected " + std::to_string(table.rows) + " rows, got " +
                       std::to_string(r));
    std::istringstream row(line);
    double v;
    size_t count = 0;
    while (row >> v) {
      table.values.push_back(v);
      ++count;
    }
    if (count != table.dims)
      throw data_error(name + ": row " + std::to_string(r + 1) + " has " +
                       std::to_string(count) + " values, expected " + std::to_string(table.dims));
  }
  return table;
}

inline EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot read " + path);
  return load_embeddings(in, path);
}

inline void save_embeddings(const EmbeddingTable& table, std::ostream& out) {
  out << table.rows << '\t' << table.dims << '\n';
  out.precision(17);
  for (size_t r = 0; r < table.rows; ++r) {
    for (size_t d = 0; d < table.dims; ++d) {
      if (d) out << '\t';
      out << table.values[r * table.dims + d];
    }
    out << '\n';
  }
}

inline void save_embeddings(const EmbeddingTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write " + path);
  save_embeddings(table, out);
}

struct RemapResult {
  EmbeddingTable rows;                                // parent rows, unchanged
  std::vector<std::pair<std::string, int>> child_map;  // piece -> row index
};

// Emits the child-piece to row-index map over the unchanged parent
// rows. Reuse reports with position -1 have no row to inherit and are
// rejected here.
inline RemapResult remap_embeddings(const EmbeddingTable& parent, const TransferReport& report) {
  if (report.matched_count + report.replaced_count !=
      static_cast<int>(report.assignments.size()))
    throw data_error("remap: report counts do not cover its assignments");
  RemapResult result;
  result.rows = parent;
  std::set<int> seen;
  for (const auto& a : report.assignments) {
    if (a.position < 0 || a.position >= static_cast<int>(parent.rows))
      throw data_error("remap: report references position " + std::to_string(a.position) +
                       " outside the " + std::to_string(parent.rows) + "-row table");
    if (!seen.insert(a.position).second)
      throw data_error("remap: position " + std::to_string(a.position) + " assigned twice");
    result.child_map.emplace_back(a.piece, a.position);
  }
  return result;
}

}  // namespace translit
