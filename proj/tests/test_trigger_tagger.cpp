#include <gtest/gtest.h>

#include <set>

#include "modtag/io.hpp"
#include "modtag/synthetic.hpp"
#include "modtag/trigger_tagger.hpp"
#include "test_util.hpp"

namespace modtag {
namespace {

Sentence words(std::string id, std::initializer_list<const char*> ws) {
  Sentence s{std::move(id), {}, {}};
  for (const char* w : ws) s.tokens.push_back(Token{w, "NN", {}, {}});
  return s;
}

TEST(Lexicon, LoadAndConflicts) {
  testing::TempDir dir;
  write_file_atomic(dir / "ok.tsv", "# triggers\nwant\tWant\n\nTry\tEffort\n");
  Lexicon lex = load_lexicon(dir / "ok.tsv");
  EXPECT_EQ(lex.size(), 2u);
  EXPECT_EQ(lex.match("want")->second, ModalityTag::kWant);
  EXPECT_EQ(lex.match("TRY")->first, "try");

  write_file_atomic(dir / "conflict.tsv", "try\tEffort\ntry\tWant\n");
  EXPECT_THROW(load_lexicon(dir / "conflict.tsv"), Error);
  write_file_atomic(dir / "o.tsv", "go\tO\n");
  EXPECT_THROW(load_lexicon(dir / "o.tsv"), Error);
  write_file_atomic(dir / "bad.tsv", "go\tGoing\n");
  EXPECT_THROW(load_lexicon(dir / "bad.tsv"), Error);
  EXPECT_THROW(load_lexicon(dir / "missing.tsv"), Error);
}

TEST(Lexicon, ExactMatchUnlessStemming) {
  Lexicon lex;
  lex.add("wish", ModalityTag::kWant);
  EXPECT_FALSE(lex.match("Wishes"));
  lex.set_stem_matching(true);
  EXPECT_EQ(lex.match("Wishes")->first, "wish");
}

TEST(Lexicon, SharedStemAcrossModalitiesRejected) {
  Lexicon lex;
  lex.add("plan", ModalityTag::kIntention);
  lex.add("planned", ModalityTag::kIntention);
  EXPECT_THROW(lex.add("planning", ModalityTag::kWant), Error);
}

TEST(TagTriggers, Examples) {
  Lexicon lex;
  lex.add("want", ModalityTag::kWant);
  lex.add("wishes", ModalityTag::kWant);
  FilterSet filters{{FilterPattern{ModalityTag::kWant, {"best", "wishes"}}}};

  auto m = tag_triggers(words("a", {"I", "want", "to", "go"}), lex, filters);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0], (TriggerMatch{"a", 1, "want", ModalityTag::kWant}));

  EXPECT_TRUE(tag_triggers(words("b", {"Best", "wishes", ",", "John"}), lex, filters).empty());
  EXPECT_TRUE(tag_triggers(words("c", {"The", "meeting", "is", "Tuesday"}), lex, filters).empty());
  // Outside the phrase the trigger still fires.
  EXPECT_EQ(tag_triggers(words("d", {"wishes", "best", "."}), lex, filters).size(), 1u);
}

TEST(Filters, LoadAndValidate) {
  testing::TempDir dir;
  write_file_atomic(dir / "f.tsv", "Want\tBest wishes\n");
  FilterSet f = load_filters(dir / "f.tsv");
  ASSERT_EQ(f.patterns.size(), 1u);
  EXPECT_EQ(f.patterns[0].phrase, (std::vector<std::string>{"best", "wishes"}));
  Lexicon lex;
  lex.add("wish", ModalityTag::kWant);
  validate_filters(f, lex);
  FilterSet single{{FilterPattern{ModalityTag::kWant, {"wish"}}}};
  EXPECT_THROW(validate_filters(single, lex), Error);
}

Corpus repeated(const char* trigger, std::size_t n) {
  Corpus c;
  for (std::size_t i = 0; i < n; ++i)
    c.sentences.push_back(words(default_sentence_id(i + 1), {"I", trigger, "it"}));
  return c;
}

TEST(SelectCandidates, CapAndUnderCap) {
  Lexicon lex;
  lex.add("want", ModalityTag::kWant);
  lex.add("strive", ModalityTag::kEffort);
  Corpus c = repeated("want", 120);
  Corpus strive = repeated("strive", 30);
  for (Sentence& s : strive.sentences) {
    s.id = "e" + s.id;
    c.sentences.push_back(s);
  }
  auto sel = select_candidates(c, lex, {}, 50);
  EXPECT_EQ(sel[ModalityTag::kWant].size(), 50u);
  EXPECT_EQ(sel[ModalityTag::kEffort].size(), 30u);
  // Corpus order is kept.
  for (const auto& [m, cands] : sel)
    for (std::size_t i = 1; i < cands.size(); ++i)
      EXPECT_LT(cands[i - 1].sentence - c.sentences.data(), cands[i].sentence - c.sentences.data());
}

TEST(SelectCandidates, SeedDeterminism) {
  Lexicon lex;
  lex.add("want", ModalityTag::kWant);
  Corpus c = repeated("want", 200);
  auto ids = [&](std::uint64_t seed) {
    std::vector<std::string> out;
    for (const Candidate& cand : select_candidates(c, lex, {}, 50, seed)[ModalityTag::kWant])
      out.push_back(cand.sentence->id);
    return out;
  };
  EXPECT_EQ(ids(7), ids(7));
  EXPECT_NE(ids(7), ids(8));
  EXPECT_THROW(select_candidates(c, lex, {}, 0), Error);
}

TEST(TriggerProperty, RecallFilterSoundnessAndCap) {
  Lexicon lex = synthetic_lexicon();
  FilterSet filters = synthetic_filters();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Corpus c = synthetic_trigger_corpus(2000, seed);
    for (const Sentence& s : c.sentences) {
      auto with = tag_triggers(s, lex, filters);
      auto without = tag_triggers(s, lex, {});
      // Tokens covered by a "best wishes" occurrence.
      std::set<std::size_t> covered;
      for (std::size_t i = 0; i + 1 < s.size(); ++i)
        if (to_lower(s.tokens[i].surface) == "best" && to_lower(s.tokens[i + 1].surface) == "wishes") {
          covered.insert(i);
          covered.insert(i + 1);
        }
      std::set<std::size_t> kept;
      for (const TriggerMatch& m : with) {
        EXPECT_FALSE(covered.count(m.token_index) && m.modality == ModalityTag::kWant) << s.id;
        kept.insert(m.token_index);
      }
      // Every unfiltered lexicon hit survives.
      for (const TriggerMatch& m : without) {
        const bool filtered = covered.count(m.token_index) && m.modality == ModalityTag::kWant;
        EXPECT_EQ(kept.count(m.token_index) == 1, !filtered) << s.id << " @" << m.token_index;
      }
    }
    std::map<std::pair<ModalityTag, std::string>, std::size_t> per_trigger;
    for (const auto& [m, cands] : select_candidates(c, lex, filters, 50, seed))
      for (const Candidate& cand : cands) ++per_trigger[{m, cand.match.trigger}];
    for (const auto& [key, n] : per_trigger) EXPECT_LE(n, 50u);
  }
}

}  // namespace
}  // namespace modtag
