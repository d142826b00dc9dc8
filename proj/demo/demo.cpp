// End-to-end tour: romanize a few Russian sentences both ways, train a
// small deromanizer on the lossy side, recover the originals, then share
// a parent BPE vocab with the romanized text.

#include <iostream>
#include <string>
#include <vector>

#include "translit/translit.hpp"

int main() {
  using namespace translit;

  MappingTable table = load_table(std::string(TRANSLIT_DATA_DIR) + "/tables/cyrillic.tsv");

  std::vector<std::string> corpus = {
      "что там дальше?", "там всё хорошо.", "я это знаю.",
      "это не там.",     "что это было?",   "всё было хорошо.",
  };

  std::cout << "== romanization ==\n";
  for (const auto& line : corpus.size() > 3
                              ? std::vector<std::string>(corpus.begin(), corpus.begin() + 3)
                              : corpus) {
    std::cout << line << "\n  lossy:      " << romanize(line, table, RomanizationMode::lossy)
              << "\n  preserving: " << romanize(line, table, RomanizationMode::preserving)
              << "\n";
  }

  for (auto mode : {RomanizationMode::lossy, RomanizationMode::preserving}) {
    ReversibilityReport report = is_reversible(table, mode);
    std::cout << to_string(mode) << " reversible: " << (report.reversible ? "yes" : "no");
    if (report.witness) std::cout << " (witness: " << *report.witness << ")";
    std::cout << "\n";
  }

  std::cout << "\n== learned deromanization (lossy side) ==\n";
  std::vector<std::string> train(40);
  for (size_t i = 0; i < train.size(); ++i) train[i] = corpus[i % corpus.size()];
  auto pairs = make_training_pairs(train, table, RomanizationMode::lossy);
  DeromConfig cfg;
  cfg.k = 3;
  DeromanizerModel model =
      train_deromanizer(pairs, cfg, table.fingerprint(RomanizationMode::lossy));
  for (const std::string& line : {std::string("chto tam dalshe?"), std::string("ya eto znayu.")})
    std::cout << line << "  ->  " << deromanize(model, line) << "\n";

  std::cout << "\n== subwords ==\n";
  std::vector<std::string> romanized;
  for (const auto& line : corpus)
    romanized.push_back(romanize(line, table, RomanizationMode::lossy));
  SubwordVocab vocab = train_bpe(romanized, 40, 1.0);
  Segmenter seg(vocab);
  std::string sample = romanized.front();
  std::cout << sample << "  ->";
  for (int id : seg.segment(sample)) std::cout << " " << vocab.pieces[id];
  std::cout << "\n";
  std::cout << "avg subwords/sentence: " << avg_subwords_per_sentence(romanized, vocab) << "\n";

  std::cout << "\n== vocabulary reuse ==\n";
  TransferReport reuse = reuse_parent_vocab(vocab, romanized);
  std::cout << "matched " << reuse.matched_count << " pieces, " << reuse.unused_remaining
            << " parent slots unused\n";
  return 0;
}
