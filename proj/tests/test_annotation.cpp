#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "modtag/annotation.hpp"
#include "modtag/synthetic.hpp"
#include "test_util.hpp"

namespace modtag {
namespace {

AnnotatorJudgment yes(std::string who, ModalityTag m, std::size_t s, std::size_t e) {
  return {std::move(who), true, m, TokenSpan{s, e}};
}
AnnotatorJudgment no(std::string who) { return {std::move(who), false, {}, {}}; }

TEST(Aggregate, TwoOfThreeIsAgr2) {
  AnnotationSet set{"s1", {yes("a", ModalityTag::kWant, 5, 6), yes("b", ModalityTag::kWant, 5, 6), no("c")}};
  auto out = aggregate(set);
  auto* ex = std::get_if<AggregatedExample>(&out);
  ASSERT_TRUE(ex);
  EXPECT_EQ(ex->modality, ModalityTag::kWant);
  EXPECT_EQ(ex->target_span, (TokenSpan{5, 6}));
  EXPECT_EQ(ex->agreement, 2);
  EXPECT_EQ(ex->level(), AgreementLevel::kAgr2);
}

TEST(Aggregate, UnanimousIsAgr3) {
  AnnotationSet set{"s2", {yes("a", ModalityTag::kEffort, 2, 3), yes("b", ModalityTag::kEffort, 2, 3),
                           yes("c", ModalityTag::kEffort, 2, 3)}};
  auto out = aggregate(set);
  ASSERT_TRUE(std::holds_alternative<AggregatedExample>(out));
  EXPECT_EQ(std::get<AggregatedExample>(out).level(), AgreementLevel::kAgr3);
}

TEST(Aggregate, Rejections) {
  auto reason = [](AnnotationSet set) { return std::get<Rejection>(aggregate(set)).reason; };
  EXPECT_EQ(reason({"x", {yes("a", ModalityTag::kWant, 1, 2), yes("b", ModalityTag::kWant, 2, 3), no("c")}}),
            RejectionReason::kSpanDisagreement);
  EXPECT_EQ(reason({"x", {yes("a", ModalityTag::kWant, 1, 2), no("b"), no("c")}}),
            RejectionReason::kMajorityAbsent);
  EXPECT_EQ(reason({"x", {yes("a", ModalityTag::kWant, 1, 2), yes("b", ModalityTag::kEffort, 1, 2), no("c")}}),
            RejectionReason::kNoMajority);
}

TEST(Aggregate, InvalidSets) {
  EXPECT_THROW(validate(AnnotationSet{"x", {no("a")}}), Error);
  EXPECT_THROW(validate(AnnotationSet{"x", {no("a"), no("a")}}), Error);
  AnnotatorJudgment inconsistent{"b", true, {}, {}};
  EXPECT_THROW(validate(AnnotationSet{"x", {no("a"), inconsistent}}), Error);
  EXPECT_THROW(aggregate_corpus({{"x", {no("a"), no("b")}}, {"x", {no("a"), no("b")}}}), Error);
}

TEST(AggregateCorpus, FixtureCounts) {
  AnnotationFixture fx = synthetic_annotation_fixture();
  AggregationResult r = aggregate_corpus(fx.sets);
  EXPECT_EQ(r.stats.accepted, 1008u);
  EXPECT_EQ(r.stats.agr2, 674u);
  EXPECT_EQ(r.stats.agr3, 334u);
  EXPECT_EQ(r.stats.no_majority, 40u);
  EXPECT_EQ(r.stats.majority_absent, 40u);
  EXPECT_EQ(r.stats.span_disagreement, 40u);
  EXPECT_EQ(r.stats.total, fx.sets.size());
  EXPECT_EQ(r.examples.size(), 1008u);
}

TEST(AggregateCorpus, AllRejected) {
  AnnotationFixtureOptions opt;
  opt.agr2 = opt.agr3 = 0;
  AggregationResult r = aggregate_corpus(synthetic_annotation_fixture(opt).sets);
  EXPECT_EQ(r.stats.accepted, 0u);
  EXPECT_TRUE(r.examples.empty());
  EXPECT_EQ(r.stats.rejected(), 120u);
}

TEST(AggregateProperty, CountsAddUpOnRandomSets) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<AnnotationSet> sets;
    const std::size_t n = testing::uniform(rng, 1, 20);
    for (std::size_t i = 0; i < n; ++i) {
      AnnotationSet set{default_sentence_id(i + 1), {}};
      const std::size_t k = testing::uniform(rng, 2, 5);
      for (std::size_t a = 0; a < k; ++a) {
        std::string who = "ann" + std::to_string(a);
        if (testing::coin(rng, 0.3)) {
          set.judgments.push_back(no(who));
        } else {
          const std::size_t s = testing::uniform(rng, 0, 2);
          set.judgments.push_back(yes(who, kModalities[testing::uniform(rng, 0, 1)], s, s + 1));
        }
      }
      sets.push_back(std::move(set));
    }
    AggregationResult r = aggregate_corpus(sets);
    EXPECT_EQ(r.stats.accepted + r.stats.rejected(), r.stats.total);
    EXPECT_EQ(r.stats.agr2 + r.stats.agr3, r.stats.accepted);
    for (const AggregatedExample& ex : r.examples) EXPECT_GE(ex.agreement, 2);

    // Judgment order never changes the outcome.
    for (AnnotationSet& set : sets) std::shuffle(set.judgments.begin(), set.judgments.end(), rng);
    AggregationResult shuffled = aggregate_corpus(sets);
    EXPECT_EQ(shuffled.stats, r.stats);
    EXPECT_EQ(shuffled.examples, r.examples);
    EXPECT_EQ(shuffled.rejections, r.rejections);
  }
}

Sentence four_words() {
  Sentence s{"s9", {}, {}};
  for (const char* w : {"we", "want", "to", "go"}) s.tokens.push_back(Token{w, "NN", {}, ModalityTag::kEffort});
  return s;
}

TEST(ToTraining, SpanTagging) {
  Sentence s = four_words();
  AggregatedExample ex{"s9", ModalityTag::kWant, {1, 2}, 2, 3};
  Sentence t = to_training(ex, s);
  EXPECT_EQ(t.tokens[0].gold, ModalityTag::kO);
  EXPECT_EQ(t.tokens[1].gold, ModalityTag::kWant);
  EXPECT_EQ(t.tokens[3].gold, ModalityTag::kO);
  EXPECT_EQ(t.agreement, 2);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(t.tokens[i].surface, s.tokens[i].surface);
    EXPECT_EQ(t.tokens[i].pos, s.tokens[i].pos);
    EXPECT_FALSE(t.tokens[i].predicted);
  }

  ex = {"s9", ModalityTag::kIntention, {0, 3}, 3, 3};
  t = to_training(ex, s);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(t.tokens[i].gold, ModalityTag::kIntention);
  EXPECT_EQ(t.tokens[3].gold, ModalityTag::kO);
  EXPECT_EQ(t.agreement, 3);

  EXPECT_THROW(to_training({"s9", ModalityTag::kWant, {3, 5}, 2, 3}, s), Error);
  EXPECT_THROW(to_training({"s9", ModalityTag::kWant, {2, 2}, 2, 3}, s), Error);
  EXPECT_THROW(to_training({"other", ModalityTag::kWant, {1, 2}, 2, 3}, s), Error);
}

TEST(ScreenPrecision, Examples) {
  EXPECT_DOUBLE_EQ(estimate_screen_precision(1997, 95), 4.76);
  EXPECT_DOUBLE_EQ(estimate_screen_precision(1993, 1238), 62.12);
  EXPECT_DOUBLE_EQ(estimate_screen_precision(10, 10), 100.0);
  EXPECT_DOUBLE_EQ(estimate_screen_precision(8, 0), 0.0);
  EXPECT_THROW(estimate_screen_precision(0, 0), Error);
  EXPECT_THROW(estimate_screen_precision(5, 6), Error);
  EXPECT_THROW(estimate_screen_precision(5, -1), Error);
}

TEST(AnnotationsJson, RoundTripAndErrors) {
  AnnotationFixture fx = synthetic_annotation_fixture({10, 5, 2, 2, 2, 9});
  std::ostringstream out;
  write_annotations(fx.sets, out);
  std::istringstream in(out.str());
  EXPECT_EQ(read_annotations(in, "mem"), fx.sets);

  auto bad = [](const std::string& text) {
    std::istringstream s(text);
    return read_annotations(s, "mem");
  };
  EXPECT_THROW(bad("{not json}\n"), ParseError);
  EXPECT_THROW(bad(R"({"sentence_id":"a","judgments":[{"annotator_id":"x","present":true,"modality":"Hope","span":[0,1]}]})"
                   "\n"),
               ParseError);
  EXPECT_THROW(bad(R"({"sentence_id":"a","judgments":[{"annotator_id":"x","present":true,"modality":"Want","span":[0]}]})"
                   "\n"),
               ParseError);
}

TEST(StatsJson, Keys) {
  AggregationStats s{10, 6, 4, 2, 1, 2, 1};
  auto j = nlohmann::json::parse(stats_to_json(s));
  EXPECT_EQ(j["accepted"], 6);
  EXPECT_EQ(j["Agr2"], 4);
  EXPECT_EQ(j["Agr3"], 2);
  EXPECT_EQ(j["total"], 10);
}

}  // namespace
}  // namespace modtag
