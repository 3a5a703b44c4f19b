// Multi-annotator judgments and their aggregation into agreed training
// examples.
//
// An example is accepted when a group of at least two annotators marked the
// same modality on exactly the same token span and that group is a strict
// plurality among all judgment groups (including "not present").

#ifndef MODTAG_ANNOTATION_HPP_
#define MODTAG_ANNOTATION_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "modtag/corpus.hpp"
#include "modtag/modality.hpp"

namespace modtag {

// Half-open token range [start, end).
struct TokenSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  friend auto operator<=>(const TokenSpan&, const TokenSpan&) = default;
};

struct AnnotatorJudgment {
  std::string annotator_id;
  bool present = false;
  std::optional<ModalityTag> modality;
  std::optional<TokenSpan> target_span;
  friend bool operator==(const AnnotatorJudgment&, const AnnotatorJudgment&) = default;
};

struct AnnotationSet {
  std::string sentence_id;
  std::vector<AnnotatorJudgment> judgments;
  friend bool operator==(const AnnotationSet&, const AnnotationSet&) = default;
};

// Throws Error on fewer than two judgments, repeated annotator ids, or a
// judgment whose present flag disagrees with its modality/span fields.
void validate(const AnnotationSet& set);

enum class AgreementLevel { kAgr2, kAgr3 };
std::string_view to_string(AgreementLevel level);

struct AggregatedExample {
  std::string sentence_id;
  ModalityTag modality = ModalityTag::kO;
  TokenSpan target_span;
  int agreement = 0;       // annotators agreeing on modality and span
  int annotators = 0;      // judgments in the set
  // Unanimous -> Agr3, otherwise Agr2.
  AgreementLevel level() const {
    return agreement == annotators ? AgreementLevel::kAgr3 : AgreementLevel::kAgr2;
  }
  friend bool operator==(const AggregatedExample&, const AggregatedExample&) = default;
};

enum class RejectionReason { kNoMajority, kMajorityAbsent, kSpanDisagreement };
std::string_view to_string(RejectionReason reason);

struct Rejection {
  std::string sentence_id;
  RejectionReason reason;
  friend bool operator==(const Rejection&, const Rejection&) = default;
};

using AggregationOutcome = std::variant<AggregatedExample, Rejection>;

AggregationOutcome aggregate(const AnnotationSet& set);

struct AggregationStats {
  std::size_t total = 0;
  std::size_t accepted = 0;
  std::size_t agr2 = 0;
  std::size_t agr3 = 0;
  std::size_t no_majority = 0;
  std::size_t majority_absent = 0;
  std::size_t span_disagreement = 0;

  std::size_t rejected() const {
    return no_majority + majority_absent + span_disagreement;
  }
  AggregationStats& operator+=(const AggregationStats& other);
  friend bool operator==(const AggregationStats&, const AggregationStats&) = default;
};

struct AggregationResult {
  std::vector<AggregatedExample> examples;
  std::vector<Rejection> rejections;
  AggregationStats stats;
};

// Throws Error when a sentence id occurs in more than one set.
AggregationResult aggregate_corpus(const std::vector<AnnotationSet>& sets);

// Copy of the sentence with the example's modality on the target span, O
// elsewhere, and the agreement level code (3 when unanimous, else 2).
Sentence to_training(const AggregatedExample& example, const Sentence& sentence);

// confirmed / marked_positive as a percentage rounded half-up to two
// decimals. Throws Error unless 0 <= confirmed <= marked_positive and
// marked_positive > 0.
double estimate_screen_precision(long marked_positive, long confirmed);

// JSON lines: {"sentence_id": ..., "judgments": [{"annotator_id": ...,
// "present": bool, "modality": "Want", "span": [s, e]}, ...]}.
std::vector<AnnotationSet> read_annotations(std::istream& in,
                                            const std::string& source_name);
std::vector<AnnotationSet> load_annotations(const std::filesystem::path& path);
void write_annotations(const std::vector<AnnotationSet>& sets, std::ostream& out);

// {"total":..,"accepted":..,"Agr2":..,"Agr3":..,"rejected":{...}}
std::string stats_to_json(const AggregationStats& stats);

}  // namespace modtag

#endif  // MODTAG_ANNOTATION_HPP_
