#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "modtag/corpus.hpp"
#include "modtag/io.hpp"
#include "test_util.hpp"

namespace modtag {
namespace {

Corpus parse(const std::string& text) {
  std::istringstream in(text);
  return parse_column_stream(in, "test");
}

std::string write(const Corpus& c) {
  std::ostringstream out;
  write_column_stream(c, out);
  return out.str();
}

TEST(ColumnFormat, ThreeColumnLineMapsFields) {
  Corpus c = parse("might\tMD\tWant\n");
  ASSERT_EQ(c.size(), 1u);
  const Token& t = c.sentences[0].tokens[0];
  EXPECT_EQ(t.surface, "might");
  EXPECT_EQ(t.pos, "MD");
  EXPECT_EQ(t.gold, ModalityTag::kWant);
  EXPECT_FALSE(t.predicted);
}

TEST(ColumnFormat, BlankLineSeparatesSentences) {
  Corpus c = parse("I\tPRP\tO\nwant\tVBP\tO\n\nGo\tVB\tO\n");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.sentences[0].size(), 2u);
  EXPECT_EQ(c.sentences[1].size(), 1u);
  EXPECT_EQ(c.sentences[0].id, "s0001");
  EXPECT_EQ(c.sentences[1].id, "s0002");
}

TEST(ColumnFormat, UnknownTagReportsLine) {
  try {
    parse("I\tPRP\tO\nmight\tMD\tWishful\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("Wishful"), std::string::npos);
  }
}

TEST(ColumnFormat, DirectivesAndComments) {
  Corpus c = parse(
      "# a free comment\n"
      "# id:mail-7\n"
      "#agr:3\n"
      "can\tMD\tO\n"
      "\n\n"
      "#id:x2\n"
      "# agr:2\n"
      "go\tVB\tAbility\n");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.sentences[0].id, "mail-7");
  EXPECT_EQ(c.sentences[0].agreement, 3);
  EXPECT_EQ(c.sentences[1].id, "x2");
  EXPECT_EQ(c.sentences[1].agreement, 2);
}

TEST(ColumnFormat, Errors) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("\n\n# only a comment\n"), ParseError);
  EXPECT_THROW(parse("a\tDT\nb\n"), ParseError);
  EXPECT_THROW(parse("a\tDT\tO\tO\tO\n"), ParseError);
  EXPECT_THROW(parse("a\t\tO\n"), ParseError);
  EXPECT_THROW(parse("a\tDT\n# id:late\n"), ParseError);
  EXPECT_THROW(parse("# id:x\na\tDT\n\n# id:x\nb\tDT\n"), ParseError);
  EXPECT_THROW(parse("#agr:zero\na\tDT\n"), ParseError);
}

TEST(ColumnFormat, ExplicitOIsWritten) {
  Corpus c;
  c.sentences.push_back(Sentence{"s1", {Token{"table", "NN", ModalityTag::kO, {}}}, {}});
  EXPECT_EQ(write(c), "# id:s1\ntable\tNN\tO\n");
}

TEST(ColumnFormat, FourColumnsWithAbsentGold) {
  Corpus c;
  c.sentences.push_back(Sentence{"s1", {Token{"go", "VB", {}, ModalityTag::kWant}}, {}});
  std::string text = write(c);
  EXPECT_EQ(text, "# id:s1\ngo\tVB\t_\tWant\n");
  EXPECT_EQ(parse(text), c);
}

TEST(ColumnFormat, EmptyCorpusIsNotWritten) {
  testing::TempDir dir;
  EXPECT_THROW(write_column_file(Corpus{}, dir / "c.txt"), Error);
  EXPECT_FALSE(std::filesystem::exists(dir / "c.txt"));
}

TEST(ColumnFormat, FileRoundTrip) {
  testing::TempDir dir;
  std::mt19937_64 rng(3);
  Corpus c = testing::random_corpus(rng);
  write_column_file(c, dir / "c.txt");
  EXPECT_EQ(parse_column_file(dir / "c.txt"), c);
  EXPECT_THROW(parse_column_file(dir / "missing.txt"), Error);
}

TEST(ColumnFormatProperty, RoundTripOnRandomCorpora) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    Corpus c = testing::random_corpus(rng);
    ASSERT_EQ(parse(write(c)), c) << write(c);
  }
}

TEST(ColumnFormatProperty, EveryTokenLineIsKeptAndBlocksCount) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    Corpus c = testing::random_corpus(rng);
    std::string text = write(c);
    // Pad blocks with extra blank lines and a stray comment.
    std::string noisy = "# header\n\n" + text + "\n\n\n";
    std::size_t token_lines = 0;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line))
      if (line.find('\t') != std::string::npos) ++token_lines;
    Corpus back = parse(noisy);
    EXPECT_EQ(back.token_count(), token_lines);
    EXPECT_EQ(back.size(), c.size());
  }
}

TEST(ColumnFormat, CrLfLineEndings) {
  Corpus c = parse("a\tDT\tO\r\nb\tNN\tWant\r\n");
  ASSERT_EQ(c.sentences[0].size(), 2u);
  EXPECT_EQ(c.sentences[0].tokens[1].gold, ModalityTag::kWant);
}

TEST(Validate, RejectsBadCorpora) {
  Corpus c;
  c.sentences.push_back(Sentence{"a", {}, {}});
  EXPECT_THROW(validate(c), Error);
  c.sentences[0].tokens.push_back(Token{"has space", "NN", {}, {}});
  EXPECT_THROW(validate(c), Error);
  c.sentences[0].tokens[0].surface = "ok";
  validate(c);
  c.sentences.push_back(c.sentences[0]);
  EXPECT_THROW(validate(c), Error);
}

TEST(TokenizeRaw, Examples) {
  EXPECT_EQ(tokenize_raw("I want to go."),
            (std::vector<std::string>{"I", "want", "to", "go", "."}));
  EXPECT_TRUE(tokenize_raw("").empty());
  EXPECT_EQ(tokenize_raw("Best wishes,"), (std::vector<std::string>{"Best", "wishes", ","}));
}

TEST(SentenceId, Format) {
  EXPECT_EQ(default_sentence_id(1), "s0001");
  EXPECT_EQ(default_sentence_id(12345), "s12345");
}

TEST(Io, AtomicWriteReplacesAndLeavesNoTemp) {
  testing::TempDir dir;
  write_file_atomic(dir / "f", "one");
  write_file_atomic(dir / "f", "two");
  EXPECT_EQ(read_file(dir / "f"), "two");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++entries;
  EXPECT_EQ(entries, 1u);
}

}  // namespace
}  // namespace modtag
