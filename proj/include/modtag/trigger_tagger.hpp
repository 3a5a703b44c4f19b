// High-recall lexicon tagger used to harvest candidate sentences.
//
// A token triggers when its lowercased surface (or Porter stem, with stem
// matching on) is a lexicon entry, unless it lies inside an occurrence of a
// filter phrase registered for the same modality ("best wishes" keeps
// "wishes" from firing Want).

#ifndef MODTAG_TRIGGER_TAGGER_HPP_
#define MODTAG_TRIGGER_TAGGER_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "modtag/corpus.hpp"
#include "modtag/modality.hpp"

namespace modtag {

class Lexicon {
 public:
  Lexicon() = default;

  // Throws Error on O, on an empty trigger, or when the trigger is already
  // mapped to a different modality. Re-adding the same pair is a no-op.
  void add(std::string_view trigger, ModalityTag modality);

  // Compare Porter stems of token and trigger instead of exact forms.
  void set_stem_matching(bool on) { stem_matching_ = on; }
  bool stem_matching() const { return stem_matching_; }

  // Returns the canonical (lowercased) trigger and its modality.
  std::optional<std::pair<std::string_view, ModalityTag>> match(
      std::string_view surface) const;
  bool contains(std::string_view lower_word) const;

  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, ModalityTag>& entries() const { return entries_; }

 private:
  std::map<std::string, ModalityTag> entries_;
  std::unordered_map<std::string, std::string> stem_to_trigger_;
  bool stem_matching_ = false;
};

// "trigger<TAB>Modality" per line; '#' comments and blank lines skipped.
Lexicon load_lexicon(const std::filesystem::path& path);

struct FilterPattern {
  ModalityTag modality;
  std::vector<std::string> phrase;  // lowercased words
  friend bool operator==(const FilterPattern&, const FilterPattern&) = default;
};

struct FilterSet {
  std::vector<FilterPattern> patterns;
};

// "Modality<TAB>word word ..." per line; '#' comments and blank lines skipped.
FilterSet load_filters(const std::filesystem::path& path);

// A filter must name a context: single-word phrases that are themselves a
// lexicon trigger are rejected with Error.
void validate_filters(const FilterSet& filters, const Lexicon& lexicon);

struct TriggerMatch {
  std::string sentence_id;
  std::size_t token_index = 0;
  std::string trigger;
  ModalityTag modality = ModalityTag::kO;
  friend bool operator==(const TriggerMatch&, const TriggerMatch&) = default;
};

// Matches ordered by token index.
std::vector<TriggerMatch> tag_triggers(const Sentence& sentence,
                                       const Lexicon& lexicon,
                                       const FilterSet& filters);

struct Candidate {
  const Sentence* sentence;
  TriggerMatch match;
};

// Per modality, the harvested sentences in corpus order. For every
// (modality, trigger) pair at most `cap` sentences are kept, chosen by a
// uniform seeded sample when more are available. A sentence appears at most
// once per modality (attributed to its first match) and under every modality
// it matches. Pointers refer into `corpus`.
std::map<ModalityTag, std::vector<Candidate>> select_candidates(
    const Corpus& corpus, const Lexicon& lexicon, const FilterSet& filters,
    std::size_t cap, std::uint64_t seed = 42);

}  // namespace modtag

#endif  // MODTAG_TRIGGER_TAGGER_HPP_
