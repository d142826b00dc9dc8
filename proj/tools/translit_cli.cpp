// Command-line front end. One subcommand per pipeline operation; every
// streaming command reads one sentence per line on stdin (or --in) and
// writes to stdout (or --out). Exit codes: 0 success, 1 usage error,
// 2 data/validation error.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "translit/translit.hpp"

namespace {

using namespace translit;

struct Input {
  std::ifstream file;
  std::istream* stream = &std::cin;
  explicit Input(const std::string& path) {
    if (!path.empty() && path != "-") {
      file.open(path, std::ios::binary);
      if (!file) throw data_error("cannot read " + path);
      stream = &file;
    }
  }
};

struct Output {
  std::ofstream file;
  std::ostream* stream = &std::cout;
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file.open(path, std::ios::binary);
      if (!file) throw data_error("cannot write " + path);
      stream = &file;
    }
  }
};

void for_each_line(std::istream& in, const std::function<void(std::string&)>& fn) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    fn(line);
  }
}

std::string format_score(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

std::vector<double> parse_fractions(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw usage_error("bad fraction: " + item);
    }
  }
  return out;
}

std::vector<uint64_t> parse_seeds(const std::string& csv) {
  std::vector<uint64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw usage_error("bad seed: " + item);
    }
  }
  return out;
}

char32_t parse_sentinel(const std::string& s) {
  std::u32string cp = decode_utf8(s);
  if (cp.size() != 1) throw usage_error("sentinel must be a single codepoint");
  return cp[0];
}

nlohmann::json metric_report_json(const MetricReport& report) {
  return {{"metric", report.metric},
          {"score", report.score},
          {"segment_scores", report.segment_scores}};
}

nlohmann::json bootstrap_json(const BootstrapResult& r, const std::string& metric) {
  return {{"metric", metric},          {"p_a_better", r.p_a_better},
          {"p_b_better", r.p_b_better}, {"significant", r.significant},
          {"score_a", r.score_a},       {"score_b", r.score_b}};
}

void print_bootstrap(std::ostream& out, const BootstrapResult& r) {
  out << "p_a_better\t" << r.p_a_better << "\n"
      << "p_b_better\t" << r.p_b_better << "\n"
      << "significant\t" << (r.significant ? "true" : "false") << "\n"
      << "score_a\t" << format_score(r.score_a) << "\n"
      << "score_b\t" << format_score(r.score_b) << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"transliteration and vocabulary-transfer toolkit"};
  app.require_subcommand(1);
  std::function<void()> action;

  // ----------------------------------------------------------- romanize
  {
    auto* cmd = app.add_subcommand("romanize", "romanize stdin line by line");
    auto table_path = std::make_shared<std::string>();
    auto mode_name = std::make_shared<std::string>();
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto strict = std::make_shared<bool>(false);
    auto check_reversible = std::make_shared<bool>(false);
    auto drop_wspace = std::make_shared<bool>(false);
    cmd->add_option("--table", *table_path, "mapping table TSV")->required();
    cmd->add_option("--mode", *mode_name, "lossy|preserving")->required();
    cmd->add_option("--in", *in_path, "input file (default stdin)");
    cmd->add_option("--out", *out_path, "output file (default stdout)");
    cmd->add_flag("--strict", *strict, "error on unmapped non-ASCII codepoints");
    cmd->add_flag("--check-reversible", *check_reversible,
                  "refuse tables that are not reversible in this mode");
    cmd->add_flag("--lossy-drops-word-space", *drop_wspace,
                  "delete word-space entries in lossy mode instead of mapping to space");
    cmd->callback([=, &action] {
      action = [=] {
        MappingTable table = load_table(*table_path);
        RomanizationMode mode = mode_from_string(*mode_name);
        if (*strict) table.passthrough_policy = PassthroughPolicy::error_on_unmapped;
        table.lossy_drops_word_space = *drop_wspace;
        if (*check_reversible) {
          ReversibilityReport report = is_reversible(table, mode);
          if (!report.reversible) {
            std::string detail = report.witness ? " (witness: `" + *report.witness + "`)" : "";
            throw data_error("table is not reversible in " + std::string(to_string(mode)) +
                             " mode" + detail);
          }
        }
        Input in(*in_path);
        Output out(*out_path);
        for_each_line(*in.stream,
                      [&](std::string& line) { *out.stream << romanize(line, table, mode) << '\n'; });
      };
    });
  }

  // --------------------------------------------------------- deromanize
  {
    auto* cmd = app.add_subcommand("deromanize",
                                   "map romanized text back (rule-based table or learned model)");
    auto* alias = app.add_subcommand("derom-apply", "apply a learned deromanizer model");
    for (auto* c : {cmd, alias}) {
      auto table_path = std::make_shared<std::string>();
      auto model_path = std::make_shared<std::string>();
      auto mode_name = std::make_shared<std::string>("preserving");
      auto in_path = std::make_shared<std::string>();
      auto out_path = std::make_shared<std::string>();
      auto best_effort = std::make_shared<bool>(false);
      if (c == cmd) {
        c->add_option("--table", *table_path, "mapping table TSV (rule-based inverse)");
        c->add_option("--mode", *mode_name, "lossy|preserving (with --table)");
        c->add_flag("--best-effort", *best_effort, "decode non-reversible tables anyway");
      }
      c->add_option("--model", *model_path, "learned model JSON");
      c->add_option("--in", *in_path, "input file (default stdin)");
      c->add_option("--out", *out_path, "output file (default stdout)");
      c->callback([=, &action] {
        action = [=] {
          if (model_path->empty() == table_path->empty())
            throw usage_error("pass exactly one of --model and --table");
          Input in(*in_path);
          Output out(*out_path);
          if (!model_path->empty()) {
            DeromanizerModel model = load_model(*model_path);
            for_each_line(*in.stream, [&](std::string& line) {
              *out.stream << deromanize(model, line) << '\n';
            });
          } else {
            MappingTable table = load_table(*table_path);
            RomanizationMode mode = mode_from_string(*mode_name);
            for_each_line(*in.stream, [&](std::string& line) {
              *out.stream << deromanize_rule_based(line, table, mode, *best_effort) << '\n';
            });
          }
        };
      });
    }
  }

  // -------------------------------------------------------- derom-train
  {
    auto* cmd = app.add_subcommand("derom-train", "train a deromanizer from original-script text");
    auto table_path = std::make_shared<std::string>();
    auto mode_name = std::make_shared<std::string>();
    auto in_path = std::make_shared<std::string>();
    auto pairs_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto cfg = std::make_shared<DeromConfig>();
    cmd->add_option("--table", *table_path, "mapping table TSV")->required();
    cmd->add_option("--mode", *mode_name, "lossy|preserving")->required();
    cmd->add_option("--in", *in_path, "original-script corpus, one sentence per line");
    cmd->add_option("--pairs", *pairs_path, "romanized<TAB>original pairs (re-aligned)");
    cmd->add_option("--out", *out_path, "model JSON path")->required();
    cmd->add_option("--k", cfg->k, "LM order");
    cmd->add_option("--alpha", cfg->alpha, "add-alpha smoothing");
    cmd->add_option("--lambda", cfg->lambda, "LM weight");
    cmd->add_option("--beam", cfg->beam, "beam width");
    cmd->callback([=, &action] {
      action = [=] {
        if (in_path->empty() == pairs_path->empty())
          throw usage_error("pass exactly one of --in and --pairs");
        MappingTable table = load_table(*table_path);
        RomanizationMode mode = mode_from_string(*mode_name);
        std::vector<TrainingPair> pairs;
        if (!in_path->empty()) {
          Input in(*in_path);
          pairs = make_training_pairs(read_lines(*in.stream), table, mode);
        } else {
          pairs = load_pairs_tsv(*pairs_path);
          for (size_t i = 0; i < pairs.size(); ++i) align_pair(pairs[i], table, mode, i + 1);
        }
        DeromanizerModel model = train_deromanizer(pairs, *cfg, table.fingerprint(mode));
        save_model(model, *out_path);
      };
    });
  }

  // --------------------------------------------------------- derom-eval
  {
    auto* cmd = app.add_subcommand("derom-eval", "score a model on held-out pairs with chrF");
    auto model_path = std::make_shared<std::string>();
    auto test_path = std::make_shared<std::string>();
    auto json_out = std::make_shared<bool>(false);
    cmd->add_option("--model", *model_path, "model JSON")->required();
    cmd->add_option("--test", *test_path, "romanized<TAB>original pairs")->required();
    cmd->add_flag("--json", *json_out, "emit the full JSON report");
    cmd->callback([=, &action] {
      action = [=] {
        DeromanizerModel model = load_model(*model_path);
        MetricReport report = evaluate_deromanization(model, load_pairs_tsv(*test_path));
        if (*json_out)
          std::cout << metric_report_json(report).dump(2) << "\n";
        else
          std::cout << "chrf\t" << format_score(report.score) << "\n";
      };
    });
  }

  // ------------------------------------------------- derom-encode/decode
  for (bool encode : {true, false}) {
    auto* cmd = app.add_subcommand(encode ? "derom-encode" : "derom-decode",
                                   encode ? "space-separate every character, spaces to sentinel"
                                          : "invert derom-encode");
    auto sentinel = std::make_shared<std::string>("⌀");
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--sentinel", *sentinel, "word-space sentinel codepoint");
    cmd->add_option("--in", *in_path, "input file (default stdin)");
    cmd->add_option("--out", *out_path, "output file (default stdout)");
    cmd->callback([=, &action] {
      action = [=] {
        CharEncodingConfig cfg;
        cfg.space_sentinel = parse_sentinel(*sentinel);
        Input in(*in_path);
        Output out(*out_path);
        for_each_line(*in.stream, [&](std::string& line) {
          *out.stream << (encode ? encode_chars(line, cfg) : decode_chars(line, cfg)) << '\n';
        });
      };
    });
  }

  // ---------------------------------------------------------- bpe-train
  {
    auto* cmd = app.add_subcommand("bpe-train", "train a BPE vocab with character coverage");
    auto size = std::make_shared<int>(0);
    auto coverage = std::make_shared<double>(0.9995);
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--size", *size, "vocabulary size")->required();
    cmd->add_option("--coverage", *coverage, "character coverage");
    cmd->add_option("--in", *in_path, "training corpus");
    cmd->add_option("--out", *out_path, "vocab JSON path")->required();
    cmd->callback([=, &action] {
      action = [=] {
        Input in(*in_path);
        SubwordVocab vocab = train_bpe(read_lines(*in.stream), *size, *coverage);
        if (!vocab.size_attained())
          std::cerr << "warning: corpus admits only " << vocab.pieces.size() << " of "
                    << *size << " pieces\n";
        save_vocab(vocab, *out_path);
      };
    });
  }

  // -------------------------------------------------------- bpe-segment
  {
    auto* cmd = app.add_subcommand("bpe-segment", "segment stdin into subword pieces");
    auto vocab_path = std::make_shared<std::string>();
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto ids = std::make_shared<bool>(false);
    cmd->add_option("--vocab", *vocab_path, "vocab JSON")->required();
    cmd->add_option("--in", *in_path, "input file (default stdin)");
    cmd->add_option("--out", *out_path, "output file (default stdout)");
    cmd->add_flag("--ids", *ids, "emit piece ids instead of piece strings");
    cmd->callback([=, &action] {
      action = [=] {
        SubwordVocab vocab = load_vocab(*vocab_path);
        Segmenter seg(vocab);
        Input in(*in_path);
        Output out(*out_path);
        for_each_line(*in.stream, [&](std::string& line) {
          bool first = true;
          for (int id : seg.segment(line)) {
            if (!first) *out.stream << ' ';
            first = false;
            if (*ids)
              *out.stream << id;
            else
              *out.stream << vocab.pieces[id];
          }
          *out.stream << '\n';
        });
      };
    });
  }

  // ---------------------------------------------------------- bpe-stats
  {
    auto* cmd = app.add_subcommand("bpe-stats", "sequence-length statistics under a vocab");
    auto vocab_path = std::make_shared<std::string>();
    auto in_path = std::make_shared<std::string>();
    auto baseline_path = std::make_shared<std::string>();
    cmd->add_option("--vocab", *vocab_path, "vocab JSON")->required();
    cmd->add_option("--in", *in_path, "corpus to measure")->required();
    cmd->add_option("--baseline", *baseline_path,
                    "baseline corpus; adds a relative-change column");
    cmd->callback([=, &action] {
      action = [=] {
        SubwordVocab vocab = load_vocab(*vocab_path);
        std::cout << "corpus\tsentences\tavg_subwords\ttypes\tavg_subwords_change_pct\n";
        double baseline_avg = 0.0;
        if (!baseline_path->empty()) {
          auto corpus = read_lines(*baseline_path);
          baseline_avg = avg_subwords_per_sentence(corpus, vocab);
          std::cout << *baseline_path << '\t' << corpus.size() << '\t'
                    << format_score(baseline_avg) << '\t' << type_count(corpus) << "\t\n";
        }
        auto corpus = read_lines(*in_path);
        double avg = avg_subwords_per_sentence(corpus, vocab);
        std::cout << *in_path << '\t' << corpus.size() << '\t' << format_score(avg) << '\t'
                  << type_count(corpus) << '\t';
        if (!baseline_path->empty() && baseline_avg != 0.0)
          std::cout << format_score(100.0 * (avg - baseline_avg) / baseline_avg);
        std::cout << "\n";
      };
    });
  }

  // ------------------------------------------------------ transfer-vocab
  {
    auto* cmd = app.add_subcommand("transfer-vocab",
                                   "align a child vocab onto a parent vocab");
    auto parent_path = std::make_shared<std::string>();
    auto child_path = std::make_shared<std::string>();
    auto reuse_corpus = std::make_shared<std::string>();
    auto seed = std::make_shared<uint64_t>(0);
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--parent", *parent_path, "parent vocab JSON")->required();
    cmd->add_option("--child", *child_path, "child vocab JSON");
    cmd->add_option("--reuse-corpus", *reuse_corpus,
                    "romanized child corpus: report parent-vocab reuse instead");
    cmd->add_option("--seed", *seed, "shuffle seed for replaced pieces");
    cmd->add_option("--out", *out_path, "report JSON path")->required();
    cmd->callback([=, &action] {
      action = [=] {
        if (child_path->empty() == reuse_corpus->empty())
          throw usage_error("pass exactly one of --child and --reuse-corpus");
        SubwordVocab parent = load_vocab(*parent_path);
        TransferReport report =
            child_path->empty()
                ? reuse_parent_vocab(parent, read_lines(*reuse_corpus))
                : transfer_vocab(parent, load_vocab(*child_path), *seed);
        save_report(report, *out_path);
      };
    });
  }

  // ---------------------------------------------------- remap-embeddings
  {
    auto* cmd = app.add_subcommand("remap-embeddings",
                                   "emit the child piece to parent row map");
    auto emb_path = std::make_shared<std::string>();
    auto report_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto map_path = std::make_shared<std::string>();
    cmd->add_option("--embeddings", *emb_path, "parent embedding TSV (`N D` header)")->required();
    cmd->add_option("--report", *report_path, "transfer report JSON")->required();
    cmd->add_option("--out", *out_path, "write the (unchanged) row table here");
    cmd->add_option("--map", *map_path, "write piece<TAB>row map here");
    cmd->callback([=, &action] {
      action = [=] {
        if (out_path->empty() && map_path->empty())
          throw usage_error("pass --out and/or --map");
        RemapResult result =
            remap_embeddings(load_embeddings(*emb_path), load_report(*report_path));
        if (!out_path->empty()) save_embeddings(result.rows, *out_path);
        if (!map_path->empty()) {
          Output out(*map_path);
          for (const auto& [piece, row] : result.child_map)
            *out.stream << piece << '\t' << row << '\n';
        }
      };
    });
  }

  // -------------------------------------------------------------- score
  auto run_bootstrap = [](const std::string& sys_a_path, const std::string& sys_b_path,
                          const std::string& ref_path, const std::string& metric_name,
                          const BootstrapConfig& cfg, bool json_out) {
    Metric metric = metric_from_string(metric_name);
    BootstrapResult result = paired_bootstrap(read_lines(sys_a_path), read_lines(sys_b_path),
                                              read_lines(ref_path), metric, cfg);
    if (json_out)
      std::cout << bootstrap_json(result, metric_name).dump(2) << "\n";
    else
      print_bootstrap(std::cout, result);
  };

  {
    auto* cmd = app.add_subcommand("score", "chrf | bleu | bootstrap");
    auto metric_name = std::make_shared<std::string>();
    auto hyp_path = std::make_shared<std::string>();
    auto ref_path = std::make_shared<std::string>();
    auto sys_a = std::make_shared<std::string>();
    auto sys_b = std::make_shared<std::string>();
    auto json_out = std::make_shared<bool>(false);
    auto max_n = std::make_shared<int>(0);
    auto beta = std::make_shared<double>(2.0);
    auto boot = std::make_shared<BootstrapConfig>();
    auto boot_metric = std::make_shared<std::string>("chrf");
    cmd->add_option("METRIC", *metric_name, "chrf|bleu|bootstrap")->required();
    cmd->add_option("--hyp", *hyp_path, "hypothesis corpus");
    cmd->add_option("--ref", *ref_path, "reference corpus")->required();
    cmd->add_option("--sys-a", *sys_a, "system A corpus (bootstrap)");
    cmd->add_option("--sys-b", *sys_b, "system B corpus (bootstrap)");
    cmd->add_option("--metric", *boot_metric, "metric under bootstrap");
    cmd->add_option("--samples", boot->samples, "bootstrap resamples");
    cmd->add_option("--alpha", boot->alpha, "significance level");
    cmd->add_option("--seed", boot->seed, "bootstrap seed");
    cmd->add_option("--max-n", *max_n, "n-gram order override");
    cmd->add_option("--beta", *beta, "chrf beta");
    cmd->add_flag("--json", *json_out, "emit JSON");
    cmd->callback([=, &action] {
      action = [=] {
        if (*metric_name == "bootstrap") {
          if (sys_a->empty() || sys_b->empty())
            throw usage_error("score bootstrap needs --sys-a and --sys-b");
          run_bootstrap(*sys_a, *sys_b, *ref_path, *boot_metric, *boot, *json_out);
          return;
        }
        if (hyp_path->empty()) throw usage_error("score " + *metric_name + " needs --hyp");
        auto hyps = read_lines(*hyp_path);
        auto refs = read_lines(*ref_path);
        MetricReport report;
        report.metric = *metric_name;
        if (*metric_name == "chrf") {
          ChrfConfig cfg;
          if (*max_n > 0) cfg.max_n = *max_n;
          cfg.beta = *beta;
          report.score = chrf_corpus(hyps, refs, cfg);
          for (size_t i = 0; i < hyps.size(); ++i)
            report.segment_scores.push_back(chrf(hyps[i], refs[i], cfg));
        } else if (*metric_name == "bleu") {
          BleuConfig cfg;
          if (*max_n > 0) cfg.max_n = *max_n;
          report.score = bleu(hyps, refs, cfg);
        } else {
          throw usage_error("unknown metric: " + *metric_name);
        }
        if (*json_out)
          std::cout << metric_report_json(report).dump(2) << "\n";
        else
          std::cout << report.metric << "\t" << format_score(report.score) << "\n";
      };
    });
  }

  // ---------------------------------------------------------- bootstrap
  {
    auto* cmd = app.add_subcommand("bootstrap", "paired bootstrap significance test");
    auto sys_a = std::make_shared<std::string>();
    auto sys_b = std::make_shared<std::string>();
    auto ref_path = std::make_shared<std::string>();
    auto metric_name = std::make_shared<std::string>("chrf");
    auto json_out = std::make_shared<bool>(false);
    auto cfg = std::make_shared<BootstrapConfig>();
    cmd->add_option("--sys-a", *sys_a, "system A corpus")->required();
    cmd->add_option("--sys-b", *sys_b, "system B corpus")->required();
    cmd->add_option("--ref", *ref_path, "reference corpus")->required();
    cmd->add_option("--metric", *metric_name, "chrf|bleu");
    cmd->add_option("--samples", cfg->samples, "resamples");
    cmd->add_option("--alpha", cfg->alpha, "significance level");
    cmd->add_option("--seed", cfg->seed, "seed");
    cmd->add_flag("--json", *json_out, "emit JSON");
    cmd->callback([=, &action] {
      action = [=] { run_bootstrap(*sys_a, *sys_b, *ref_path, *metric_name, *cfg, *json_out); };
    });
  }

  // -------------------------------------------------------------- stats
  {
    auto* cmd = app.add_subcommand("stats", "types | overlap | corpus");
    auto mode = std::make_shared<std::string>();
    auto in_path = std::make_shared<std::string>();
    auto a_path = std::make_shared<std::string>();
    auto b_path = std::make_shared<std::string>();
    auto vocab_path = std::make_shared<std::string>();
    auto table_path = std::make_shared<std::string>();
    cmd->add_option("kind", *mode, "types|overlap|corpus")->required();
    cmd->add_option("--in", *in_path, "corpus (types, corpus)");
    cmd->add_option("--a", *a_path, "corpus A / hypothesis side (overlap)");
    cmd->add_option("--b", *b_path, "corpus B / reference side (overlap)");
    cmd->add_option("--vocab", *vocab_path, "vocab JSON for subword statistics (corpus)");
    cmd->add_option("--table", *table_path, "mapping table for per-mode statistics (corpus)");
    cmd->callback([=, &action] {
      action = [=] {
        if (*mode == "types") {
          Input in(*in_path);
          std::cout << "types\t" << type_count(read_lines(*in.stream)) << "\n";
        } else if (*mode == "overlap") {
          if (a_path->empty() || b_path->empty())
            throw usage_error("stats overlap needs --a and --b");
          std::cout << "chrf\t"
                    << format_score(char_overlap(read_lines(*a_path), read_lines(*b_path)))
                    << "\n";
        } else if (*mode == "corpus") {
          Input in(*in_path);
          std::optional<SubwordVocab> vocab;
          std::optional<MappingTable> table;
          if (!vocab_path->empty()) vocab = load_vocab(*vocab_path);
          if (!table_path->empty()) table = load_table(*table_path);
          CorpusStats stats = corpus_stats(read_lines(*in.stream),
                                           vocab ? &*vocab : nullptr,
                                           table ? &*table : nullptr);
          std::cout << stats_to_json(stats).dump(2) << "\n";
        } else {
          throw usage_error("unknown stats kind: " + *mode);
        }
      };
    });
  }

  // ---------------------------------------------------------------- tag
  {
    auto* cmd = app.add_subcommand("tag", "prepend <2xx> to the source side of a TSV corpus");
    auto lang = std::make_shared<std::string>();
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--lang", *lang, "target language code")->required();
    cmd->add_option("--in", *in_path, "source<TAB>target TSV (default stdin)");
    cmd->add_option("--out", *out_path, "output file (default stdout)");
    cmd->callback([=, &action] {
      action = [=] {
        if (lang->empty()) throw usage_error("tag: empty language code");
        for (char c : *lang)
          if (std::isspace(static_cast<unsigned char>(c)))
            throw usage_error("tag: language code contains whitespace: `" + *lang + "`");
        std::string token = "<2" + *lang + "> ";
        Input in(*in_path);
        Output out(*out_path);
        size_t lineno = 0;
        for_each_line(*in.stream, [&](std::string& line) {
          ++lineno;
          size_t tab = line.find('\t');
          if (tab == std::string::npos)
            throw data_error((in_path->empty() ? std::string("stdin") : *in_path) + ":" +
                             std::to_string(lineno) + ": expected source<TAB>target");
          *out.stream << token << line.substr(0, tab) << '\t' << line.substr(tab + 1) << '\n';
        });
      };
    });
  }

  // ---------------------------------------------------------------- mix
  {
    auto* cmd = app.add_subcommand("mix", "build the finetuning mixture from two TSV corpora");
    auto parent_path = std::make_shared<std::string>();
    auto child_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto spec = std::make_shared<MixtureSpec>();
    cmd->add_option("--parent", *parent_path, "parent TSV corpus")->required();
    cmd->add_option("--child", *child_path, "child TSV corpus")->required();
    cmd->add_option("--parent-take", spec->parent_take, "parent pairs to keep");
    cmd->add_option("--total", spec->total_target, "total mixture size");
    cmd->add_option("--seed", spec->shuffle_seed, "shuffle seed");
    cmd->add_option("--out", *out_path, "output TSV (default stdout)");
    cmd->callback([=, &action] {
      action = [=] {
        ParallelCorpus mixed =
            mix_corpora(load_parallel_tsv(*parent_path), load_parallel_tsv(*child_path), *spec);
        Output out(*out_path);
        save_parallel_tsv(mixed, *out.stream);
      };
    });
  }

  // ------------------------------------------------------------- ablate
  {
    auto* cmd = app.add_subcommand("ablate", "deromanizer data-size ablation");
    auto table_path = std::make_shared<std::string>();
    auto mode_name = std::make_shared<std::string>();
    auto in_path = std::make_shared<std::string>();
    auto fractions = std::make_shared<std::string>("0.01,0.1,1.0");
    auto seeds = std::make_shared<std::string>("1");
    auto format = std::make_shared<std::string>("tsv");
    auto cfg = std::make_shared<DeromConfig>();
    cmd->add_option("--table", *table_path, "mapping table TSV")->required();
    cmd->add_option("--mode", *mode_name, "lossy|preserving")->required();
    cmd->add_option("--in", *in_path, "original-script corpus");
    cmd->add_option("--fractions", *fractions, "comma-separated fractions of the pool");
    cmd->add_option("--seeds", *seeds, "comma-separated subset seeds");
    cmd->add_option("--format", *format, "tsv|json");
    cmd->add_option("--k", cfg->k, "LM order");
    cmd->add_option("--alpha", cfg->alpha, "add-alpha smoothing");
    cmd->add_option("--lambda", cfg->lambda, "LM weight");
    cmd->add_option("--beam", cfg->beam, "beam width");
    cmd->callback([=, &action] {
      action = [=] {
        if (*format != "json" && *format != "tsv")
          throw usage_error("unknown format: " + *format);
        Input in(*in_path);
        auto rows = derom_ablation(read_lines(*in.stream), load_table(*table_path),
                                   mode_from_string(*mode_name), parse_fractions(*fractions),
                                   parse_seeds(*seeds), *cfg);
        if (*format == "json")
          std::cout << ablation_json(rows).dump(2) << "\n";
        else
          std::cout << ablation_tsv(rows);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  action();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const translit::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == translit::errc::usage ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
