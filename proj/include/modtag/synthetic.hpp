// Generated fixtures: a separable tagging corpus whose targets follow a
// lexicon trigger, a large raw corpus for the trigger tagger, and
// annotation sets with a chosen agreement mix.

#ifndef MODTAG_SYNTHETIC_HPP_
#define MODTAG_SYNTHETIC_HPP_

#include <cstdint>
#include <vector>

#include "modtag/annotation.hpp"
#include "modtag/corpus.hpp"
#include "modtag/features.hpp"
#include "modtag/trigger_tagger.hpp"

namespace modtag {

// The trigger words the generators draw from, with stem matching on.
Lexicon synthetic_lexicon();
// Want: "best wishes".
FilterSet synthetic_filters();
// Irregular forms used by the generators (went -> go, ...).
LemmaTable synthetic_lemmas();

struct SyntheticCorpusOptions {
  std::size_t sentences = 500;
  std::uint64_t seed = 42;
  // Share of sentences with no modality at all.
  double distractor_fraction = 0.25;
  // Expected Agr2 sentences per Agr3 sentence.
  double agr2_per_agr3 = 2.0;
};

// Every sentence carries gold tags and an agreement code. A modality
// sentence has exactly one target token, the verb right after its trigger
// phrase ("want to VERB", "can VERB"); everything else is O.
Corpus synthetic_tagging_corpus(const SyntheticCorpusOptions& options = {});

// Untagged sentences (surface + POS), most containing a trigger; some are
// "Best wishes , NAME" sign-offs and some use "wish" outside that phrase.
Corpus synthetic_trigger_corpus(std::size_t sentences, std::uint64_t seed = 42);

struct AnnotationFixture {
  Corpus sentences;  // no gold tags
  std::vector<AnnotationSet> sets;
};

struct AnnotationFixtureOptions {
  std::size_t agr2 = 674;
  std::size_t agr3 = 334;
  std::size_t no_majority = 40;
  std::size_t majority_absent = 40;
  std::size_t span_disagreement = 40;
  std::uint64_t seed = 42;
};

// Three judgments per set, ordered randomly; sets shuffled.
AnnotationFixture synthetic_annotation_fixture(const AnnotationFixtureOptions& options = {});

}  // namespace modtag

#endif  // MODTAG_SYNTHETIC_HPP_
