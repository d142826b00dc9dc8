// End-to-end checks of the translit binary. Every test shells out to
// the real executable (path injected as TRANSLIT_CLI) with stdio
// redirected through temp files.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

#include "support.hpp"

namespace {

struct CliResult {
  int exit = -1;
  std::string out;
  std::string err;
};

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'')
      q += "'\\''";
    else
      q += c;
  }
  q += "'";
  return q;
}

CliResult run_cli(const std::vector<std::string>& args, const std::string& stdin_text = "") {
  testsupport::TempDir tmp;
  testsupport::write_file(tmp.file("in"), stdin_text);
  std::string cmd = shell_quote(TRANSLIT_CLI);
  for (const auto& arg : args) cmd += " " + shell_quote(arg);
  cmd += " < " + shell_quote(tmp.file("in")) + " > " + shell_quote(tmp.file("out")) + " 2> " +
         shell_quote(tmp.file("err"));
  int status = std::system(cmd.c_str());
  CliResult r;
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = testsupport::read_file(tmp.file("out"));
  r.err = testsupport::read_file(tmp.file("err"));
  return r;
}

std::string cyr_table() { return testsupport::data_path("tables/cyrillic.tsv"); }

TEST(Cli, RomanizeBothModes) {
  auto lossy = run_cli({"romanize", "--table", cyr_table(), "--mode", "lossy"},
                       "Что там дальше?\n");
  EXPECT_EQ(lossy.exit, 0) << lossy.err;
  EXPECT_EQ(lossy.out, "CHto tam dalshe?\n");

  auto pres = run_cli({"romanize", "--table", cyr_table(), "--mode", "preserving"},
                      "Что там дальше?\n");
  EXPECT_EQ(pres.exit, 0) << pres.err;
  EXPECT_EQ(pres.out, "Čto tam dal'še?\n");
}

TEST(Cli, RomanizeFileToFile) {
  testsupport::TempDir tmp;
  testsupport::write_file(tmp.file("in.txt"), "мел\nмель\n");
  auto r = run_cli({"romanize", "--table", cyr_table(), "--mode", "lossy", "--in",
                    tmp.file("in.txt"), "--out", tmp.file("out.txt")});
  EXPECT_EQ(r.exit, 0) << r.err;
  EXPECT_EQ(testsupport::read_file(tmp.file("out.txt")), "mel\nmel\n");
}

TEST(Cli, RomanizeCheckReversibleRejectsLossyCyrillic) {
  auto r = run_cli({"romanize", "--table", cyr_table(), "--mode", "lossy",
                    "--check-reversible"},
                   "мел\n");
  EXPECT_EQ(r.exit, 2);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
  EXPECT_NE(r.err.find("not reversible"), std::string::npos);

  auto ok = run_cli({"romanize", "--table", cyr_table(), "--mode", "preserving",
                     "--check-reversible"},
                    "мел\n");
  EXPECT_EQ(ok.exit, 0) << ok.err;
  EXPECT_EQ(ok.out, "mel\n");
}

TEST(Cli, RomanizeStrictRejectsUnmapped) {
  auto r = run_cli({"romanize", "--table", cyr_table(), "--mode", "lossy", "--strict"},
                   "дом α\n");
  EXPECT_EQ(r.exit, 2);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({"romanize", "--mode", "lossy"}, "").exit, 1);  // --table missing
  EXPECT_EQ(run_cli({"romanize", "--table", cyr_table(), "--mode", "bogus"}, "x").exit, 1);
  EXPECT_EQ(run_cli({"no-such-command"}, "").exit, 1);
  EXPECT_EQ(run_cli({}, "").exit, 1);  // subcommand required
}

TEST(Cli, MissingInputFileIsDataError) {
  auto r = run_cli({"romanize", "--table", "/nonexistent/table.tsv", "--mode", "lossy"}, "x");
  EXPECT_EQ(r.exit, 2);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, DeromanizeRuleBasedRoundTrip) {
  auto rom = run_cli({"romanize", "--table", cyr_table(), "--mode", "preserving"},
                     "Что там дальше?\nмел и мель\n");
  ASSERT_EQ(rom.exit, 0) << rom.err;
  auto back = run_cli({"deromanize", "--table", cyr_table(), "--mode", "preserving"}, rom.out);
  EXPECT_EQ(back.exit, 0) << back.err;
  EXPECT_EQ(back.out, "Что там дальше?\nмел и мель\n");
}

TEST(Cli, DeromanizeLossyNeedsBestEffort) {
  auto strict = run_cli({"deromanize", "--table", cyr_table(), "--mode", "lossy"}, "mel\n");
  EXPECT_EQ(strict.exit, 2);
  auto best = run_cli({"deromanize", "--table", cyr_table(), "--mode", "lossy",
                       "--best-effort"},
                      "mel\n");
  EXPECT_EQ(best.exit, 0) << best.err;
  EXPECT_EQ(best.out, "мел\n");
}

TEST(Cli, DeromanizeSourceIsExclusive) {
  EXPECT_EQ(run_cli({"deromanize", "--table", cyr_table(), "--model", "m.json"}, "x").exit, 1);
  EXPECT_EQ(run_cli({"deromanize"}, "x").exit, 1);
  // The alias is model-only; --table is not an option there.
  EXPECT_EQ(run_cli({"derom-apply", "--table", cyr_table()}, "x").exit, 1);
}

TEST(Cli, DeromTrainApplyEvalChain) {
  testsupport::TempDir tmp;
  testsupport::SynthSpec spec;
  spec.seed = 41;
  spec.sentences = 60;
  auto corpus = testsupport::synth_russian(spec);
  std::string corpus_text;
  for (const auto& line : corpus) corpus_text += line + "\n";
  testsupport::write_file(tmp.file("corpus.txt"), corpus_text);

  auto train = run_cli({"derom-train", "--table", cyr_table(), "--mode", "preserving",
                        "--in", tmp.file("corpus.txt"), "--out", tmp.file("model.json"),
                        "--k", "3"});
  ASSERT_EQ(train.exit, 0) << train.err;

  translit::MappingTable table = translit::load_table(cyr_table());
  auto apply = run_cli({"derom-apply", "--model", tmp.file("model.json")},
                       translit::romanize(corpus[0], table, translit::RomanizationMode::preserving) +
                           "\n");
  EXPECT_EQ(apply.exit, 0) << apply.err;
  EXPECT_EQ(apply.out, corpus[0] + "\n");

  std::string pairs_text;
  for (size_t i = 0; i < 10; ++i)
    pairs_text += translit::romanize(corpus[i], table, translit::RomanizationMode::preserving) +
                  "\t" + corpus[i] + "\n";
  testsupport::write_file(tmp.file("test.tsv"), pairs_text);

  auto eval = run_cli({"derom-eval", "--model", tmp.file("model.json"), "--test",
                       tmp.file("test.tsv")});
  EXPECT_EQ(eval.exit, 0) << eval.err;
  EXPECT_EQ(eval.out, "chrf\t100.0000\n");

  auto json_eval = run_cli({"derom-eval", "--model", tmp.file("model.json"), "--test",
                            tmp.file("test.tsv"), "--json"});
  EXPECT_EQ(json_eval.exit, 0) << json_eval.err;
  nlohmann::json j = nlohmann::json::parse(json_eval.out);
  EXPECT_EQ(j["metric"], "chrf");
  EXPECT_DOUBLE_EQ(j["score"].get<double>(), 100.0);
  EXPECT_EQ(j["segment_scores"].size(), 10u);
}

TEST(Cli, DeromTrainNeedsExactlyOneInput) {
  testsupport::TempDir tmp;
  testsupport::write_file(tmp.file("c.txt"), "дом\n");
  testsupport::write_file(tmp.file("p.tsv"), "dom\tдом\n");
  EXPECT_EQ(run_cli({"derom-train", "--table", cyr_table(), "--mode", "lossy", "--out",
                     tmp.file("m.json"), "--in", tmp.file("c.txt"), "--pairs",
                     tmp.file("p.tsv")})
                .exit,
            1);
  EXPECT_EQ(run_cli({"derom-train", "--table", cyr_table(), "--mode", "lossy", "--out",
                     tmp.file("m.json")})
                .exit,
            1);
}

TEST(Cli, EncodeDecodeRoundTrip) {
  auto enc = run_cli({"derom-encode"}, "CHto tam\n");
  EXPECT_EQ(enc.exit, 0) << enc.err;
  EXPECT_EQ(enc.out, "C H t o ⌀ t a m\n");
  auto dec = run_cli({"derom-decode"}, enc.out);
  EXPECT_EQ(dec.exit, 0) << dec.err;
  EXPECT_EQ(dec.out, "CHto tam\n");

  auto custom = run_cli({"derom-encode", "--sentinel", "_"}, "a b\n");
  EXPECT_EQ(custom.out, "a _ b\n");
  EXPECT_EQ(run_cli({"derom-encode", "--sentinel", "ab"}, "x\n").exit, 1);
}

TEST(Cli, BpeTrainSegmentChain) {
  testsupport::TempDir tmp;
  testsupport::write_file(tmp.file("corpus.txt"), "aa\naa\nab\n");
  auto train = run_cli({"bpe-train", "--size", "8", "--in", tmp.file("corpus.txt"), "--out",
                        tmp.file("vocab.json")});
  ASSERT_EQ(train.exit, 0) << train.err;
  EXPECT_NE(train.err.find("warning:"), std::string::npos);  // only 7 pieces attainable

  auto seg = run_cli({"bpe-segment", "--vocab", tmp.file("vocab.json")}, "aa ab\n");
  EXPECT_EQ(seg.exit, 0) << seg.err;
  EXPECT_EQ(seg.out, "▁aa ▁a b\n");

  auto ids = run_cli({"bpe-segment", "--vocab", tmp.file("vocab.json"), "--ids"}, "aa ab\n");
  EXPECT_EQ(ids.out, "5 4 3\n");

  EXPECT_EQ(run_cli({"bpe-train", "--size", "3", "--in", tmp.file("corpus.txt"), "--out",
                     tmp.file("v2.json")})
                .exit,
            1);  // below the reserved pieces
}

TEST(Cli, BpeStatsTable) {
  testsupport::TempDir tmp;
  testsupport::write_file(tmp.file("corpus.txt"), "aa\naa\nab\n");
  run_cli({"bpe-train", "--size", "8", "--in", tmp.file("corpus.txt"), "--out",
           tmp.file("vocab.json")});
  testsupport::write_file(tmp.file("measure.txt"), "aa ab\naa\n");

  auto r = run_cli({"bpe-stats", "--vocab", tmp.file("vocab.json"), "--in",
                    tmp.file("measure.txt")});
  EXPECT_EQ(r.exit, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
            "corpus\tsentences\tavg_subwords\ttypes\tavg_subwords_change_pct");
  EXPECT_NE(r.out.find("\t2\t2.0000\t2\t"), std::string::npos);

  auto rel = run_cli({"bpe-stats", "--vocab", tmp.file("vocab.json"), "--in",
                      tmp.file("measure.txt"), "--baseline", tmp.file("measure.txt")});
  EXPECT_EQ(rel.exit, 0) << rel.err;
  EXPECT_NE(rel.out.find("\t0.0000\n"), std::string::npos);
}

TEST(Cli, TransferVocabAndRemapChain) {
  testsupport::TempDir tmp;
  testsupport::write_file(tmp.file("parent.txt"), "aa\naa\nab\n");
  testsupport::write_file(tmp.file("child.txt"), "ba\n");
  ASSERT_EQ(run_cli({"bpe-train", "--size", "7", "--in", tmp.file("parent.txt"), "--out",
                     tmp.file("parent.json")})
                .exit,
            0);
  ASSERT_EQ(run_cli({"bpe-train", "--size", "5", "--in", tmp.file("child.txt"), "--out",
                     tmp.file("child.json")})
                .exit,
            0);

  auto transfer = run_cli({"transfer-vocab", "--parent", tmp.file("parent.json"), "--child",
                           tmp.file("child.json"), "--seed", "7", "--out",
                           tmp.file("report.json")});
  ASSERT_EQ(transfer.exit, 0) << transfer.err;
  nlohmann::json report = nlohmann::json::parse(testsupport::read_file(tmp.file("report.json")));
  EXPECT_EQ(report["assignments"].size(), 5u);

  std::string emb = "7 2\n";
  for (int i = 0; i < 7; ++i) emb += std::to_string(i) + ".0\t0.5\n";
  testsupport::write_file(tmp.file("emb.tsv"), emb);
  auto remap = run_cli({"remap-embeddings", "--embeddings", tmp.file("emb.tsv"), "--report",
                        tmp.file("report.json"), "--out", tmp.file("rows.tsv"), "--map",
                        tmp.file("map.tsv")});
  ASSERT_EQ(remap.exit, 0) << remap.err;
  std::string map = testsupport::read_file(tmp.file("map.tsv"));
  EXPECT_NE(map.find("<unk>\t0\n"), std::string::npos);
  EXPECT_NE(map.find("▁\t1\n"), std::string::npos);
  EXPECT_NE(map.find("▁ba\t"), std::string::npos);
  EXPECT_EQ(testsupport::read_file(tmp.file("rows.tsv")).substr(0, 4), "7\t2\n");

  EXPECT_EQ(run_cli({"remap-embeddings", "--embeddings", tmp.file("emb.tsv"), "--report",
                     tmp.file("report.json")})
                .exit,
            1);  // needs --out and/or --map
}

TEST(Cli, TransferVocabReuseMode) {
  testsupport::TempDir tmp;
  testsupport::write_file(tmp.file("parent.txt"), "aa\naa\nab\n");
  testsupport::write_file(tmp.file("romanized.txt"), "aa ab\n");
  run_cli({"bpe-train", "--size", "7", "--in", tmp.file("parent.txt"), "--out",
           tmp.file("parent.json")});
  auto r = run_cli({"transfer-vocab", "--parent", tmp.file("parent.json"), "--reuse-corpus",
                    tmp.file("romanized.txt"), "--out", tmp.file("report.json")});
  EXPECT_EQ(r.exit, 0) << r.err;

  EXPECT_EQ(run_cli({"transfer-vocab", "--parent", tmp.file("parent.json"), "--out",
                     tmp.file("r2.json")})
                .exit,
            1);  // neither --child nor --reuse-corpus
}

TEST(Cli, ScoreChrfAndBleu) {
  testsupport::TempDir tmp;
  testsupport::write_file(tmp.file("ref.txt"), "this is a test sentence\nanother line here\n");
  auto chrf = run_cli({"score", "chrf", "--hyp", tmp.file("ref.txt"), "--ref",
                       tmp.file("ref.txt")});
  EXPECT_EQ(chrf.exit, 0) << chrf.err;
  EXPECT_EQ(chrf.out, "chrf\t100.0000\n");

  auto bleu = run_cli({"score", "bleu", "--hyp", tmp.file("ref.txt"), "--ref",
                       tmp.file("ref.txt")});
  EXPECT_EQ(bleu.out, "bleu\t100.0000\n");

  auto json = run_cli({"score", "chrf", "--hyp", tmp.file("ref.txt"), "--ref",
                       tmp.file("ref.txt"), "--json"});
  nlohmann::json j = nlohmann::json::parse(json.out);
  EXPECT_EQ(j["metric"], "chrf");
  EXPECT_DOUBLE_EQ(j["score"].get<double>(), 100.0);
  EXPECT_EQ(j["segment_scores"].size(), 2u);

  EXPECT_EQ(run_cli({"score", "chrf", "--ref", tmp.file("ref.txt")}).exit, 1);  // no --hyp
  EXPECT_EQ(run_cli({"score", "nope", "--hyp", tmp.file("ref.txt"), "--ref",
                     tmp.file("ref.txt")})
                .exit,
            1);
}

TEST(Cli, BootstrapDominance) {
  testsupport::TempDir tmp;
  testsupport::write_file(tmp.file("ref.txt"), "this is a test sentence\nanother line here\n");
  testsupport::write_file(tmp.file("bad.txt"), "x\nx\n");
  auto r = run_cli({"bootstrap", "--sys-a", tmp.file("ref.txt"), "--sys-b", tmp.file("bad.txt"),
                    "--ref", tmp.file("ref.txt"), "--samples", "200", "--seed", "9"});
  EXPECT_EQ(r.exit, 0) << r.err;
  EXPECT_NE(r.out.find("p_a_better\t1"), std::string::npos);
  EXPECT_NE(r.out.find("significant\ttrue"), std::string::npos);
  EXPECT_NE(r.out.find("score_a\t100.0000"), std::string::npos);

  // Same run through the score front end, as JSON.
  auto j = run_cli({"score", "bootstrap", "--sys-a", tmp.file("ref.txt"), "--sys-b",
                    tmp.file("bad.txt"), "--ref", tmp.file("ref.txt"), "--samples", "200",
                    "--seed", "9", "--json"});
  EXPECT_EQ(j.exit, 0) << j.err;
  nlohmann::json parsed = nlohmann::json::parse(j.out);
  EXPECT_TRUE(parsed["significant"].get<bool>());
  EXPECT_DOUBLE_EQ(parsed["p_a_better"].get<double>(), 1.0);

  EXPECT_EQ(run_cli({"score", "bootstrap", "--ref", tmp.file("ref.txt")}).exit, 1);
}

TEST(Cli, StatsKinds) {
  auto types = run_cli({"stats", "types"}, "a b a\nc\n");
  EXPECT_EQ(types.exit, 0) << types.err;
  EXPECT_EQ(types.out, "types\t3\n");

  testsupport::TempDir tmp;
  testsupport::write_file(tmp.file("a.txt"), "abc\n");
  testsupport::write_file(tmp.file("b.txt"), "abc\n");
  auto overlap = run_cli({"stats", "overlap", "--a", tmp.file("a.txt"), "--b", tmp.file("b.txt")});
  EXPECT_EQ(overlap.out, "chrf\t100.0000\n");
  EXPECT_EQ(run_cli({"stats", "overlap", "--a", tmp.file("a.txt")}).exit, 1);

  auto corpus = run_cli({"stats", "corpus", "--table", cyr_table()}, "мел мель\nдом\n");
  EXPECT_EQ(corpus.exit, 0) << corpus.err;
  nlohmann::json j = nlohmann::json::parse(corpus.out);
  EXPECT_EQ(j["sentences"], 2);
  EXPECT_EQ(j["types"], 3);
  EXPECT_TRUE(j["romanized"].contains("lossy"));
  EXPECT_TRUE(j["romanized"].contains("preserving"));

  EXPECT_EQ(run_cli({"stats", "nope"}, "").exit, 1);
}

TEST(Cli, TagCorpus) {
  auto r = run_cli({"tag", "--lang", "de"}, "hello\tworld\nsecond\tline\n");
  EXPECT_EQ(r.exit, 0) << r.err;
  EXPECT_EQ(r.out, "<2de> hello\tworld\n<2de> second\tline\n");

  EXPECT_EQ(run_cli({"tag", "--lang", "d e"}, "a\tb\n").exit, 1);
  EXPECT_EQ(run_cli({"tag", "--lang", "de"}, "no tab here\n").exit, 2);
}

TEST(Cli, MixCorpora) {
  testsupport::TempDir tmp;
  std::string parent, child;
  for (int i = 0; i < 20; ++i)
    parent += "p" + std::to_string(i) + "\tq" + std::to_string(i) + "\n";
  for (int i = 0; i < 3; ++i)
    child += "c" + std::to_string(i) + "\td" + std::to_string(i) + "\n";
  testsupport::write_file(tmp.file("parent.tsv"), parent);
  testsupport::write_file(tmp.file("child.tsv"), child);

  std::vector<std::string> args = {"mix",     "--parent",      tmp.file("parent.tsv"),
                                   "--child", tmp.file("child.tsv"), "--parent-take",
                                   "10",      "--total",       "16",
                                   "--seed",  "5"};
  auto a = run_cli(args);
  EXPECT_EQ(a.exit, 0) << a.err;
  size_t lines = 0, child_lines = 0;
  std::istringstream ss(a.out);
  std::string line;
  while (std::getline(ss, line)) {
    ++lines;
    if (line[0] == 'c') ++child_lines;
  }
  EXPECT_EQ(lines, 16u);
  EXPECT_EQ(child_lines, 6u);  // 3 child pairs, twice each
  EXPECT_EQ(run_cli(args).out, a.out);  // seed-deterministic

  auto usage = run_cli({"mix", "--parent", tmp.file("parent.tsv"), "--child",
                        tmp.file("child.tsv"), "--parent-take", "30", "--total", "16"});
  EXPECT_EQ(usage.exit, 1);
  auto data = run_cli({"mix", "--parent", tmp.file("parent.tsv"), "--child",
                       tmp.file("child.tsv"), "--parent-take", "25", "--total", "30"});
  EXPECT_EQ(data.exit, 2);
}

TEST(Cli, AblateFormats) {
  testsupport::TempDir tmp;
  testsupport::SynthSpec spec;
  spec.seed = 44;
  spec.sentences = 60;
  std::string corpus;
  for (const auto& line : testsupport::synth_russian(spec)) corpus += line + "\n";
  testsupport::write_file(tmp.file("corpus.txt"), corpus);

  auto tsv = run_cli({"ablate", "--table", cyr_table(), "--mode", "lossy", "--in",
                      tmp.file("corpus.txt"), "--fractions", "1.0", "--seeds", "1", "--k", "3"});
  EXPECT_EQ(tsv.exit, 0) << tsv.err;
  EXPECT_EQ(tsv.out.substr(0, 23), "fraction\tseed\tchrf\n1\t1\t");

  auto json = run_cli({"ablate", "--table", cyr_table(), "--mode", "lossy", "--in",
                       tmp.file("corpus.txt"), "--fractions", "1.0", "--seeds", "1", "--k", "3",
                       "--format", "json"});
  nlohmann::json j = nlohmann::json::parse(json.out);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["fraction"], 1.0);

  EXPECT_EQ(run_cli({"ablate", "--table", cyr_table(), "--mode", "lossy", "--in",
                     tmp.file("corpus.txt"), "--format", "bogus"})
                .exit,
            1);
  EXPECT_EQ(run_cli({"ablate", "--table", cyr_table(), "--mode", "lossy", "--in",
                     tmp.file("corpus.txt"), "--fractions", "2.0"})
                .exit,
            1);
}

}  // namespace
