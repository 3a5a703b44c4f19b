// Token-level feature templates and windowed vectorization.
//
// Each active template yields one indicator string "name=value" per token.
// A window vector for position t collects, for every offset o in [-w, +w],
// the strings of token t+o prefixed "o:<o>|" (or a single "o:<o>|PAD=BOS" /
// "o:<o>|PAD=EOS" past the sentence edges), plus "tag:-k=<tag>" for the
// k = 1..w previous tags when dynamic tags are on.

#ifndef MODTAG_FEATURES_HPP_
#define MODTAG_FEATURES_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "modtag/corpus.hpp"
#include "modtag/modality.hpp"

namespace modtag {

// Canonical template order; extraction output follows it.
enum class FeatureTemplate : std::uint8_t {
  kWordStem = 0,
  kWordLemma,
  kPos,
  kIsNumeric,
  kVerbType,
  kWhichModal,
};

inline constexpr std::size_t kNumTemplates = 6;
inline constexpr std::array<FeatureTemplate, kNumTemplates> kAllTemplates = {
    FeatureTemplate::kWordStem,  FeatureTemplate::kWordLemma,
    FeatureTemplate::kPos,       FeatureTemplate::kIsNumeric,
    FeatureTemplate::kVerbType,  FeatureTemplate::kWhichModal};

// "wordStem", "wordLemma", "POS", "isNumeric", "verbType", "whichModal".
std::string_view template_name(FeatureTemplate t);
std::optional<FeatureTemplate> parse_template(std::string_view name);

struct FeatureConfig {
  std::uint8_t active_mask = 0;  // bit i set <=> template i active
  int context_width = 2;
  bool use_dynamic_tags = true;

  bool has(FeatureTemplate t) const {
    return (active_mask >> static_cast<int>(t)) & 1u;
  }
  void set(FeatureTemplate t) { active_mask |= std::uint8_t(1u << static_cast<int>(t)); }
  void clear(FeatureTemplate t) { active_mask &= std::uint8_t(~(1u << static_cast<int>(t))); }
  std::size_t active_count() const;
  std::vector<FeatureTemplate> active() const;

  // Throws Error unless at least one template is active and 1 <= w <= 5.
  void validate() const;

  // Comma-separated template names in canonical order, e.g.
  // "wordStem,POS,whichModal".
  std::string templates_string() const;

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

// Parses "wordStem,POS,whichModal" (any order, case-sensitive names).
FeatureConfig parse_feature_config(std::string_view templates, int width,
                                   bool use_dynamic_tags = true);

// {wordStem, POS, whichModal}, w = 2, dynamic tags on.
FeatureConfig default_feature_config();

// Dictionary for the lemmatizer: (lowercased word, POS prefix) -> lemma.
// Lookup prefers the longest POS prefix that the token's tag starts with.
class LemmaTable {
 public:
  struct Entry {
    std::string word;
    std::string pos_prefix;
    std::string lemma;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  LemmaTable() = default;
  explicit LemmaTable(std::vector<Entry> entries);

  std::optional<std::string_view> lookup(std::string_view lower_word,
                                         std::string_view pos) const;
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const LemmaTable& a, const LemmaTable& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<Entry> entries_;
  std::unordered_multimap<std::string, std::size_t> by_word_;
};

// TSV "word<TAB>POS-prefix<TAB>lemma"; '#' comments and blank lines skipped.
LemmaTable load_lemma_table(const std::filesystem::path& path);

std::string lemmatize(std::string_view word, std::string_view pos,
                      const LemmaTable& table);

bool is_numeric(std::string_view word);

enum class VerbType : std::uint8_t { kModal, kAuxiliary, kRegular, kNil };
std::string_view to_string(VerbType v);
VerbType verb_type(std::string_view word, std::string_view pos);

// Lowercased surface for MD tokens, "Nil" otherwise.
std::string which_modal(std::string_view word, std::string_view pos);

std::vector<std::string> extract_token_features(const Token& token,
                                                const FeatureConfig& config,
                                                const LemmaTable& lemmas);

// Static features for every token of a sentence.
std::vector<std::vector<std::string>> extract_sentence_features(
    const Sentence& sentence, const FeatureConfig& config,
    const LemmaTable& lemmas);

// Dense bijection between feature strings and [0, size).
class FeatureVocabulary {
 public:
  std::optional<std::uint32_t> find(std::string_view feature) const;
  // Adds when unseen and not frozen; returns nullopt for unseen strings
  // once frozen.
  std::optional<std::uint32_t> intern(std::string_view feature);

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  std::size_t size() const { return strings_.size(); }
  const std::vector<std::string>& strings() const { return strings_; }

  // Rebuilds from an ordered string list (used by model loading); frozen.
  static FeatureVocabulary from_strings(std::vector<std::string> strings);

  friend bool operator==(const FeatureVocabulary& a, const FeatureVocabulary& b) {
    return a.strings_ == b.strings_ && a.frozen_ == b.frozen_;
  }

 private:
  std::vector<std::string> strings_;
  std::unordered_map<std::string, std::uint32_t> index_;
  bool frozen_ = false;
};

// Binary indicator vector: strictly increasing indices, every value 1.0.
struct SparseVector {
  std::vector<std::uint32_t> indices;

  std::size_t nnz() const { return indices.size(); }
  static constexpr double value() { return 1.0; }

  // Sorts and removes duplicates.
  static SparseVector from_unsorted(std::vector<std::uint32_t> indices);

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

// <x, y> for indicator vectors: size of the index intersection.
double dot(const SparseVector& x, const SparseVector& y);

// Window feature strings before vocabulary mapping. previous_tags is in
// sentence order and ends with the tag at position-1; it must hold at least
// min(position, w) entries when dynamic tags are on. Throws Error on a bad
// position.
std::vector<std::string> window_feature_strings(
    std::span<const std::vector<std::string>> sentence_features,
    std::size_t position, std::span<const ModalityTag> previous_tags,
    const FeatureConfig& config);

SparseVector build_window_vector(
    std::span<const std::vector<std::string>> sentence_features,
    std::size_t position, std::span<const ModalityTag> previous_tags,
    const FeatureConfig& config, FeatureVocabulary& vocab);

// Maps strings through a vocabulary without growing it.
SparseVector vectorize(std::span<const std::string> features,
                       const FeatureVocabulary& vocab);

// First-seen index order; result is frozen. Throws Error on empty input.
FeatureVocabulary fit_vocabulary(
    std::span<const std::vector<std::string>> feature_lists);

}  // namespace modtag

#endif  // MODTAG_FEATURES_HPP_
