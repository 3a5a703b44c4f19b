#include "modtag/synthetic.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <utility>

namespace modtag {

namespace {

struct Word {
  const char* surface;
  const char* pos;
};

struct TriggerPhrase {
  ModalityTag modality;
  std::vector<Word> words;  // target follows the last word
};

const std::vector<TriggerPhrase>& trigger_phrases() {
  static const std::vector<TriggerPhrase> phrases = {
      {ModalityTag::kWant, {{"want", "VBP"}, {"to", "TO"}}},
      {ModalityTag::kWant, {{"wants", "VBZ"}, {"to", "TO"}}},
      {ModalityTag::kWant, {{"wanted", "VBD"}, {"to", "TO"}}},
      {ModalityTag::kWant, {{"hope", "VBP"}, {"to", "TO"}}},
      {ModalityTag::kWant, {{"wish", "VBP"}, {"to", "TO"}}},
      {ModalityTag::kEffort, {{"try", "VBP"}, {"to", "TO"}}},
      {ModalityTag::kEffort, {{"tried", "VBD"}, {"to", "TO"}}},
      {ModalityTag::kEffort, {{"are", "VBP"}, {"trying", "VBG"}, {"to", "TO"}}},
      {ModalityTag::kEffort, {{"attempted", "VBD"}, {"to", "TO"}}},
      {ModalityTag::kEffort, {{"strive", "VBP"}, {"to", "TO"}}},
      {ModalityTag::kIntention, {{"plan", "VBP"}, {"to", "TO"}}},
      {ModalityTag::kIntention, {{"planned", "VBD"}, {"to", "TO"}}},
      {ModalityTag::kIntention, {{"intend", "VBP"}, {"to", "TO"}}},
      {ModalityTag::kIntention, {{"intends", "VBZ"}, {"to", "TO"}}},
      {ModalityTag::kIntention, {{"aim", "VBP"}, {"to", "TO"}}},
      {ModalityTag::kSuccess, {{"managed", "VBD"}, {"to", "TO"}}},
      {ModalityTag::kSuccess, {{"finally", "RB"}, {"managed", "VBD"}, {"to", "TO"}}},
      {ModalityTag::kSuccess, {{"succeeded", "VBD"}, {"to", "TO"}}},
      {ModalityTag::kAbility, {{"can", "MD"}}},
      {ModalityTag::kAbility, {{"could", "MD"}}},
      {ModalityTag::kAbility, {{"are", "VBP"}, {"able", "JJ"}, {"to", "TO"}}},
  };
  return phrases;
}

const std::vector<const char*> kSubjects = {"I", "We", "They", "You"};
const std::vector<const char*> kVerbs = {
    "send",   "review", "finish", "sign",  "call",   "schedule", "close",  "move",
    "update", "check",  "fix",    "share", "book",   "approve",  "cancel", "file",
    "print",  "read",   "write",  "build", "attend", "confirm",  "ship",   "buy"};
const std::vector<const char*> kNouns = {
    "report", "contract", "meeting", "invoice", "deal",   "memo",  "budget", "draft",
    "order",  "account",  "proposal", "payment", "letter", "trade", "model",  "plan"};
const std::vector<const char*> kNames = {"John", "Sara", "Vince", "Kay", "Mark", "Lynn"};
const std::vector<std::pair<const char*, const char*>> kTails = {
    {"today", "NN"}, {"again", "RB"}, {"soon", "RB"}, {"tomorrow", "NN"}};

template <typename T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

void push(Sentence& s, std::string surface, std::string pos,
          ModalityTag tag = ModalityTag::kO) {
  s.tokens.push_back(Token{std::move(surface), std::move(pos), tag, std::nullopt});
}

void push_object(Sentence& s, std::mt19937_64& rng) {
  push(s, "the", "DT");
  push(s, pick(kNouns, rng), "NN");
  if (std::bernoulli_distribution(0.4)(rng)) {
    const auto& [w, p] = pick(kTails, rng);
    push(s, w, p);
  }
  push(s, ".", ".");
}

Sentence modality_sentence(const TriggerPhrase& phrase, std::mt19937_64& rng) {
  Sentence s;
  if (std::bernoulli_distribution(0.2)(rng)) {
    push(s, "Today", "NN");
    push(s, ",", ",");
  }
  push(s, pick(kSubjects, rng), "PRP");
  for (const Word& w : phrase.words) push(s, w.surface, w.pos);
  push(s, pick(kVerbs, rng), "VB", phrase.modality);
  push_object(s, rng);
  return s;
}

Sentence distractor_sentence(std::mt19937_64& rng) {
  Sentence s;
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0:
      push(s, pick(kSubjects, rng), "PRP");
      push(s, "went", "VBD");
      push(s, "to", "TO");
      push(s, pick(kVerbs, rng), "VB");
      push_object(s, rng);
      break;
    case 1:
      push(s, "Best", "JJS");
      push(s, "wishes", "NNS");
      push(s, ",", ",");
      push(s, pick(kNames, rng), "NNP");
      break;
    case 2:
      push(s, "The", "DT");
      push(s, pick(kNouns, rng), "NN");
      push(s, "is", "VBZ");
      push(s, std::to_string(std::uniform_int_distribution<int>(2, 999)(rng)), "CD");
      push(s, "dollars", "NNS");
      push(s, ".", ".");
      break;
    default:
      push(s, pick(kSubjects, rng), "PRP");
      push(s, "need", "VBP");
      push_object(s, rng);
      break;
  }
  return s;
}

}  // namespace

Lexicon synthetic_lexicon() {
  Lexicon lex;
  for (const char* w : {"want", "wish", "hope"}) lex.add(w, ModalityTag::kWant);
  for (const char* w : {"try", "attempt", "strive"}) lex.add(w, ModalityTag::kEffort);
  for (const char* w : {"plan", "intend", "aim"}) lex.add(w, ModalityTag::kIntention);
  for (const char* w : {"manage", "succeed"}) lex.add(w, ModalityTag::kSuccess);
  for (const char* w : {"can", "could", "able"}) lex.add(w, ModalityTag::kAbility);
  lex.set_stem_matching(true);
  return lex;
}

FilterSet synthetic_filters() {
  return FilterSet{{FilterPattern{ModalityTag::kWant, {"best", "wishes"}}}};
}

LemmaTable synthetic_lemmas() {
  return LemmaTable({{"went", "VB", "go"},
                     {"is", "VB", "be"},
                     {"are", "VB", "be"},
                     {"could", "MD", "can"}});
}

Corpus synthetic_tagging_corpus(const SyntheticCorpusOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::bernoulli_distribution distractor(options.distractor_fraction);
  std::bernoulli_distribution agr3(1.0 / (1.0 + options.agr2_per_agr3));
  Corpus corpus;
  corpus.sentences.reserve(options.sentences);
  for (std::size_t i = 0; i < options.sentences; ++i) {
    Sentence s = distractor(rng) ? distractor_sentence(rng)
                                 : modality_sentence(pick(trigger_phrases(), rng), rng);
    s.id = default_sentence_id(i + 1);
    s.agreement = agr3(rng) ? 3 : 2;
    corpus.sentences.push_back(std::move(s));
  }
  return corpus;
}

Corpus synthetic_trigger_corpus(std::size_t sentences, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Corpus corpus;
  corpus.sentences.reserve(sentences);
  for (std::size_t i = 0; i < sentences; ++i) {
    Sentence s;
    const int kind = std::uniform_int_distribution<int>(0, 9)(rng);
    if (kind == 0) {
      // Sign-off, sometimes followed by a genuine wish.
      push(s, "Best", "JJS");
      push(s, "wishes", "NNS");
      push(s, ",", ",");
      push(s, pick(kNames, rng), "NNP");
      if (std::bernoulli_distribution(0.3)(rng)) {
        push(s, "I", "PRP");
        push(s, "wish", "VBP");
        push(s, "you", "PRP");
        push(s, "luck", "NN");
      }
      push(s, ".", ".");
    } else if (kind == 1) {
      s = distractor_sentence(rng);
    } else {
      s = modality_sentence(pick(trigger_phrases(), rng), rng);
    }
    for (Token& t : s.tokens) t.gold.reset();
    s.id = default_sentence_id(i + 1);
    corpus.sentences.push_back(std::move(s));
  }
  return corpus;
}

AnnotationFixture synthetic_annotation_fixture(const AnnotationFixtureOptions& options) {
  std::mt19937_64 rng(options.seed);
  AnnotationFixture fixture;
  auto other_modality = [&](ModalityTag m) {
    ModalityTag o = m;
    while (o == m) o = pick(std::vector<ModalityTag>(kModalities.begin(), kModalities.end()), rng);
    return o;
  };
  auto judgment = [](int who, std::optional<ModalityTag> m, std::optional<TokenSpan> span) {
    return AnnotatorJudgment{"A" + std::to_string(who), m.has_value(), m, span};
  };

  enum Kind { kAgr2, kAgr3, kNoMajority, kMajorityAbsent, kSpanDisagreement };
  std::vector<Kind> kinds;
  kinds.insert(kinds.end(), options.agr2, kAgr2);
  kinds.insert(kinds.end(), options.agr3, kAgr3);
  kinds.insert(kinds.end(), options.no_majority, kNoMajority);
  kinds.insert(kinds.end(), options.majority_absent, kMajorityAbsent);
  kinds.insert(kinds.end(), options.span_disagreement, kSpanDisagreement);
  std::shuffle(kinds.begin(), kinds.end(), rng);

  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const TriggerPhrase& phrase = pick(trigger_phrases(), rng);
    Sentence s = modality_sentence(phrase, rng);
    s.id = default_sentence_id(i + 1);
    std::size_t target = 0;
    for (std::size_t t = 0; t < s.size(); ++t)
      if (s.tokens[t].gold != ModalityTag::kO) target = t;
    for (Token& t : s.tokens) t.gold.reset();

    const ModalityTag m = phrase.modality;
    const TokenSpan span{target, target + 1};
    const TokenSpan wider{target, std::min(target + 3, s.size())};
    std::vector<AnnotatorJudgment> js;
    switch (kinds[i]) {
      case kAgr3:
        js = {judgment(1, m, span), judgment(2, m, span), judgment(3, m, span)};
        break;
      case kAgr2:
        switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
          case 0: js = {judgment(1, m, span), judgment(2, m, span), judgment(3, {}, {})}; break;
          case 1:
            js = {judgment(1, m, span), judgment(2, m, span),
                  judgment(3, other_modality(m), span)};
            break;
          default:
            js = {judgment(1, m, span), judgment(2, m, span), judgment(3, m, wider)};
            break;
        }
        break;
      case kNoMajority:
        js = {judgment(1, m, span), judgment(2, other_modality(m), span), judgment(3, {}, {})};
        break;
      case kMajorityAbsent:
        js = {judgment(1, m, span), judgment(2, {}, {}), judgment(3, {}, {})};
        break;
      case kSpanDisagreement:
        js = {judgment(1, m, span), judgment(2, m, wider), judgment(3, {}, {})};
        break;
    }
    std::shuffle(js.begin(), js.end(), rng);
    fixture.sets.push_back(AnnotationSet{s.id, std::move(js)});
    fixture.sentences.sentences.push_back(std::move(s));
  }
  return fixture;
}

}  // namespace modtag
